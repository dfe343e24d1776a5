#include "ifslab/commensurability.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include "ifslab/error.hpp"

namespace ifslab {

HighPrecision to_high_precision(const Rational& q) {
    return HighPrecision(q.get_num().get_str()) / HighPrecision(q.get_den().get_str());
}

HighPrecision log_ratio(const Rational& alpha, const Rational& beta) {
    using boost::multiprecision::log;
    auto ln = [](const Rational& q) {
        return log(HighPrecision(q.get_num().get_str())) - log(HighPrecision(q.get_den().get_str()));
    };
    return ln(alpha) / ln(beta);
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    for (a %= m; e; e >>= 1) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
    }
    return r;
}

// Deterministic for all 64-bit inputs with these bases.
bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s && composite; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_u64(u64 n, std::map<Integer, long>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[Integer(static_cast<unsigned long>(n))];
        return;
    }
    u64 d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

}  // namespace

std::optional<std::map<Integer, long>> factorize(const Integer& z) {
    if (z == 0) fail(ErrorKind::InvalidParameter, "cannot factor 0");
    std::map<Integer, long> out;
    Integer n = abs(z);
    for (unsigned long p = 2; p < 10000 && n > 1; ++p) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++out[Integer(p)];
            n /= p;
        }
    }
    if (n == 1) return out;
    if (n.fits_ulong_p()) {
        factor_u64(n.get_ui(), out);
        return out;
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
        ++out[n];
        return out;
    }
    return std::nullopt;
}

std::string to_string(CommensurabilityVerdict v) {
    switch (v) {
        case CommensurabilityVerdict::Rational: return "rational";
        case CommensurabilityVerdict::Incommensurable: return "incommensurable";
        case CommensurabilityVerdict::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// Exponent of each prime in q = num/den.
std::optional<std::map<Integer, long>> exponent_vector(const Rational& q) {
    auto num = factorize(q.get_num());
    auto den = factorize(q.get_den());
    if (!num || !den) return std::nullopt;
    std::map<Integer, long> v = *num;
    for (const auto& [p, e] : *den) v[p] -= e;
    std::erase_if(v, [](const auto& kv) { return kv.second == 0; });
    return v;
}

long exponent_of(const std::map<Integer, long>& v, const Integer& p) {
    auto it = v.find(p);
    return it == v.end() ? 0 : it->second;
}

void check_unit_interval(const Rational& x, const char* name) {
    if (!(x > 0 && x < 1)) fail(ErrorKind::InvalidParameter, std::string(name) + " = " + to_string(x) + " is outside (0,1)");
}

}  // namespace

CommensurabilityResult log_commensurable(const Rational& alpha, const Rational& beta, long q_max) {
    check_unit_interval(alpha, "alpha");
    check_unit_interval(beta, "beta");
    if (q_max < 1) fail(ErrorKind::InvalidParameter, "q_max must be at least 1");

    CommensurabilityResult result;
    auto a = exponent_vector(alpha);
    auto b = exponent_vector(beta);
    if (!a || !b) {
        // Brute force alpha^q = beta^p with p near q log(alpha)/log(beta).
        long double rho = log(alpha) / log(beta);
        for (long q = 1; q <= q_max; ++q) {
            long p = std::lround(rho * static_cast<long double>(q));
            if (p >= 1 && pow(alpha, q) == pow(beta, p)) {
                long g = std::gcd(p, q);
                result.verdict = CommensurabilityVerdict::Rational;
                result.p = p / g;
                result.q = q / g;
                result.certificate = "(" + to_string(beta) + ")^" + std::to_string(result.p) + " = (" + to_string(alpha) + ")^" +
                                     std::to_string(result.q) + " (found by search)";
                return result;
            }
        }
        result.certificate = "factorisation exceeded the effort bound and no exponent pair with q <= " + std::to_string(q_max) +
                             " matched";
        return result;
    }

    std::set<Integer> primes;
    for (const auto& [p, e] : *a) primes.insert(p);
    for (const auto& [p, e] : *b) primes.insert(p);

    // a = lambda b with lambda = log(alpha)/log(beta); anchor at a prime of beta.
    const Integer& anchor = b->begin()->first;
    long a_k = exponent_of(*a, anchor);
    long b_k = exponent_of(*b, anchor);
    for (const Integer& p : primes) {
        long a_p = exponent_of(*a, p);
        long b_p = exponent_of(*b, p);
        if (a_p * b_k != a_k * b_p) {
            result.verdict = CommensurabilityVerdict::Incommensurable;
            result.certificate = "prime exponents are not proportional: alpha has " + anchor.get_str() + "^" +
                                 std::to_string(a_k) + " * " + p.get_str() + "^" + std::to_string(a_p) + ", beta has " +
                                 anchor.get_str() + "^" + std::to_string(b_k) + " * " + p.get_str() + "^" + std::to_string(b_p);
            return result;
        }
    }
    long g = std::gcd(a_k, b_k);
    long p = a_k / g;
    long q = b_k / g;
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (pow(alpha, q) != pow(beta, p)) fail(ErrorKind::Unsupported, "exponent identity failed to verify");
    result.verdict = CommensurabilityVerdict::Rational;
    result.p = p;
    result.q = q;
    result.certificate = "(" + to_string(beta) + ")^" + std::to_string(p) + " = (" + to_string(alpha) + ")^" + std::to_string(q);
    return result;
}

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// Solves A x = rhs exactly. Returns the reduced-echelon solution with free
// variables zero, or nothing when inconsistent. `unique` reports full column rank.
std::optional<std::vector<Rational>> solve(Matrix a, std::vector<Rational> rhs, bool* unique = nullptr) {
    std::size_t rows = a.size();
    std::size_t cols = rows ? a.front().size() : 0;
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[r]);
        std::swap(rhs[pivot], rhs[r]);
        Rational inv = 1 / a[r][c];
        for (auto& x : a[r]) x *= inv;
        rhs[r] *= inv;
        for (std::size_t k = 0; k < rows; ++k) {
            if (k == r || a[k][c] == 0) continue;
            Rational factor = a[k][c];
            for (std::size_t j = 0; j < cols; ++j) a[k][j] -= factor * a[r][j];
            rhs[k] -= factor * rhs[r];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t k = r; k < rows; ++k) {
        if (rhs[k] != 0) return std::nullopt;
    }
    if (unique) *unique = pivot_cols.size() == cols;
    std::vector<Rational> x(cols, Rational(0));
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) x[pivot_cols[k]] = rhs[k];
    return x;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

ExponentMatrix conjecture_exponents(const Ifs& source, const Ifs& target) {
    std::vector<std::map<Integer, long>> alphas, betas;
    std::set<Integer> primes;
    auto collect = [&](const Ifs& ifs, std::vector<std::map<Integer, long>>& out) {
        for (const auto& m : ifs.maps()) {
            auto v = exponent_vector(m.ratio);
            if (!v) fail(ErrorKind::Unsupported, "cannot factor ratio " + to_string(m.ratio) + " exactly");
            for (const auto& [p, e] : *v) primes.insert(p);
            out.push_back(std::move(*v));
        }
    };
    collect(source, alphas);
    collect(target, betas);

    const std::size_t m = betas.size();
    Matrix basis(primes.size(), std::vector<Rational>(m));
    std::size_t row = 0;
    for (const Integer& p : primes) {
        for (std::size_t j = 0; j < m; ++j) basis[row][j] = exponent_of(betas[j], p);
        ++row;
    }

    ExponentMatrix out;
    for (const auto& alpha : alphas) {
        std::vector<Rational> rhs;
        for (const Integer& p : primes) rhs.emplace_back(exponent_of(alpha, p));

        ExponentRow result;
        auto basic = solve(basis, rhs);
        if (basic) {
            auto nonneg = [](const std::vector<Rational>& t) {
                return std::all_of(t.begin(), t.end(), [](const Rational& x) { return x >= 0; });
            };
            constexpr std::size_t kMaxSubsetSearch = 16;
            for (std::size_t size = 1; size <= std::min(m, kMaxSubsetSearch) && !result.t; ++size) {
                std::vector<std::size_t> cols(size);
                std::iota(cols.begin(), cols.end(), 0);
                do {
                    Matrix sub(primes.size(), std::vector<Rational>(size));
                    for (std::size_t r = 0; r < primes.size(); ++r) {
                        for (std::size_t k = 0; k < size; ++k) sub[r][k] = basis[r][cols[k]];
                    }
                    bool unique = false;
                    auto x = solve(sub, rhs, &unique);
                    if (x && unique && nonneg(*x)) {
                        std::vector<Rational> t(m, Rational(0));
                        for (std::size_t k = 0; k < size; ++k) t[cols[k]] = (*x)[k];
                        result.t = std::move(t);
                        result.nonnegative = true;
                        break;
                    }
                } while (next_combination(cols, m));
            }
            if (!result.t) {
                result.nonnegative = nonneg(*basic);
                result.t = std::move(*basic);
            }
        }
        out.rows.push_back(std::move(result));
    }
    return out;
}

bool exponents_reproduce(const Rational& alpha, std::span<const Rational> betas, std::span<const Rational> t) {
    if (betas.size() != t.size()) return false;
    Integer lcm = 1;
    for (const auto& x : t) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    if (!lcm.fits_slong_p()) return false;
    long scale = lcm.get_si();
    Rational product = 1;
    for (std::size_t j = 0; j < betas.size(); ++j) {
        Rational e = t[j] * scale;
        if (!e.get_num().fits_slong_p()) return false;
        product *= pow(betas[j], e.get_num().get_si());
    }
    return product == pow(alpha, scale);
}

std::vector<Rational> continued_fraction(const HighPrecision& x, std::size_t depth) {
    using boost::multiprecision::floor;
    // Remainders below this are rounding noise at 50 digits.
    const HighPrecision noise("1e-40");
    auto to_integer = [](const HighPrecision& v) { return Integer(boost::multiprecision::cpp_int(v).str()); };

    std::vector<Rational> convergents;
    HighPrecision value = x;
    HighPrecision a = floor(value);
    Integer p_prev = 1, q_prev = 0;
    Integer p = to_integer(a), q = 1;
    convergents.emplace_back(p, q);
    HighPrecision rest = value - a;
    for (std::size_t k = 1; k <= depth && rest > noise; ++k) {
        value = 1 / rest;
        a = floor(value);
        Integer ak = to_integer(a);
        Integer p_next = ak * p + p_prev;
        Integer q_next = ak * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        Rational c(p, q);
        c.canonicalize();
        convergents.push_back(c);
        rest = value - a;
    }
    return convergents;
}

namespace {

using Complex = std::complex<long double>;

Complex horner(std::span<const long long> coeffs, Complex z) {
    Complex acc = 0;
    for (long long c : coeffs) acc = acc * z + static_cast<long double>(c);
    return acc;
}

Complex horner_derivative(std::span<const long long> coeffs, Complex z) {
    Complex acc = 0;
    std::size_t degree = coeffs.size() - 1;
    for (std::size_t k = 0; k < degree; ++k) acc = acc * z + static_cast<long double>(coeffs[k]) * static_cast<long double>(degree - k);
    return acc;
}

}  // namespace

std::vector<std::complex<long double>> polynomial_roots(std::span<const long long> coeffs) {
    if (coeffs.size() < 2 || coeffs.front() == 0) fail(ErrorKind::InvalidParameter, "polynomial must have degree >= 1");
    const std::size_t degree = coeffs.size() - 1;
    const long double lead = static_cast<long double>(coeffs.front());
    if (degree == 1) return {Complex(-static_cast<long double>(coeffs[1]) / lead, 0)};

    long double bound = 0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) bound = std::max(bound, std::abs(static_cast<long double>(coeffs[k]) / lead));
    bound += 1;

    std::vector<Complex> z(degree);
    const long double pi = std::acos(-1.0L);
    for (std::size_t k = 0; k < degree; ++k) {
        z[k] = std::polar(bound * 0.5L, 2 * pi * static_cast<long double>(k) / static_cast<long double>(degree) + 0.4L);
    }
    for (int iter = 0; iter < 500; ++iter) {
        long double largest_step = 0;
        for (std::size_t k = 0; k < degree; ++k) {
            Complex f = horner(coeffs, z[k]);
            if (f == Complex(0)) continue;
            Complex ratio = f / horner_derivative(coeffs, z[k]);
            Complex repulsion = 0;
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != k) repulsion += 1.0L / (z[k] - z[j]);
            }
            Complex step = ratio / (1.0L - ratio * repulsion);
            z[k] -= step;
            largest_step = std::max(largest_step, std::abs(step) / (1 + std::abs(z[k])));
        }
        if (largest_step < 1e-18L) break;
    }
    for (auto& root : z) {
        for (int k = 0; k < 3; ++k) {
            Complex d = horner_derivative(coeffs, root);
            if (d == Complex(0)) break;
            Complex next = root - horner(coeffs, root) / d;
            if (std::abs(horner(coeffs, next)) >= std::abs(horner(coeffs, root))) break;
            root = next;
        }
        if (std::abs(root.imag()) <= 1e-12L * std::max(1.0L, std::abs(root))) root = Complex(root.real(), 0);
    }
    std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) > std::abs(b) : a.real() > b.real();
    });
    return z;
}

PisotVerdict is_pisot(std::span<const long long> coeffs) {
    if (coeffs.size() < 2) fail(ErrorKind::InvalidParameter, "polynomial must have degree >= 1");
    if (coeffs.front() != 1) fail(ErrorKind::InvalidParameter, "polynomial must be monic");
    constexpr long double margin = 1e-9L;

    PisotVerdict verdict;
    verdict.polynomial.assign(coeffs.begin(), coeffs.end());
    verdict.roots = polynomial_roots(coeffs);
    for (const auto& r : verdict.roots) verdict.max_residual = std::max(verdict.max_residual, static_cast<double>(std::abs(horner(coeffs, r))));

    std::optional<std::size_t> dominant;
    std::size_t above_one = 0;
    for (std::size_t k = 0; k < verdict.roots.size(); ++k) {
        const auto& r = verdict.roots[k];
        if (r.imag() == 0 && r.real() > 1 + margin) {
            ++above_one;
            if (!dominant || r.real() > verdict.roots[*dominant].real()) dominant = k;
        }
    }
    if (dominant) verdict.dominant_root = verdict.roots[*dominant].real();

    bool inside = true;
    for (std::size_t k = 0; k < verdict.roots.size(); ++k) {
        if (dominant && k == *dominant) continue;
        long double modulus = std::abs(verdict.roots[k]);
        verdict.conjugate_moduli.push_back(modulus);
        if (std::abs(modulus - 1) <= margin) verdict.boundary = true;
        if (modulus > 1 - margin) inside = false;
    }
    std::sort(verdict.conjugate_moduli.begin(), verdict.conjugate_moduli.end(), std::greater<>());
    verdict.is_pisot = dominant && above_one == 1 && inside;
    return verdict;
}

}  // namespace ifslab
