// Acceptance checks with independent oracles. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ifslab/cli.hpp"
#include "ifslab/commensurability.hpp"
#include "ifslab/dimension.hpp"
#include "ifslab/embedding.hpp"
#include "ifslab/measures.hpp"
#include "ifslab/parallel.hpp"

using namespace ifslab;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body, double limit = 0) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit > 0 && seconds > limit) {
        o.pass = false;
        o.detail += " [over time limit]";
    }
    std::printf("%s criterion %2d  %s: %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += !o.pass;
}

std::string fmt(double x, int digits = 8) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

Ifs central(const Rational& r) { return Ifs({{r, 0}, {r, 1 - r}}); }

double entropy_bits(const std::map<long long, double>& cells) {
    double h = 0;
    for (const auto& [k, m] : cells) {
        if (m > 0) h -= m * std::log2(m);
    }
    return h;
}

std::map<long long, double> coarse(const std::map<long long, double>& fine, int shift) {
    std::map<long long, double> out;
    for (const auto& [k, m] : fine) out[k >> shift] += m;
    return out;
}

double ls_slope(const std::vector<std::pair<double, double>>& pts) {
    double n = static_cast<double>(pts.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Maximal measure on the middle-thirds set, discretised at `level`: each
// depth-k cylinder (3^-k <= 2^-level) carries 2^-k and is binned at its
// midpoint, computed with integers: midpoint * 2 * 3^k = 2 * sum d_j 3^(k-j) + 1.
std::map<long long, double> cantor_oracle(int level) {
    int k = 0;
    long long pow3 = 1;
    while (pow3 < (1LL << level)) {
        pow3 *= 3;
        ++k;
    }
    std::map<long long, double> cells;
    double mass = std::ldexp(1.0, -k);
    for (long long word = 0; word < (1LL << k); ++word) {
        __int128 left = 0;
        for (int j = 0; j < k; ++j) left = left * 3 + (((word >> (k - 1 - j)) & 1) ? 2 : 0);
        __int128 num = (2 * left + 1) << level;
        cells[static_cast<long long>(num / (2 * static_cast<__int128>(pow3)))] += mass;
    }
    return cells;
}

// Is [lo,hi] disjoint from the middle-thirds set? Exact, by following
// base-3 digits down until the interval sits in a removed gap.
bool disjoint_from_c13(Rational lo, Rational hi, int depth = 60) {
    if (hi < 0 || lo > 1) return true;
    if (depth == 0) return false;
    Rational third(1, 3), two_thirds(2, 3);
    if (lo > third && hi < two_thirds) return true;
    bool left = lo <= third && disjoint_from_c13(lo * 3, std::min(hi, third) * 3, depth - 1);
    if (lo <= third && !left) return false;
    if (hi >= two_thirds) return disjoint_from_c13(std::max(lo, two_thirds) * 3 - 2, hi * 3 - 2, depth - 1);
    return true;
}

// Base-3 digits of a rational in [0,1), up to `count` digits.
std::vector<int> ternary_digits(Rational x, int count) {
    std::vector<int> d;
    for (int k = 0; k < count && x != 0; ++k) {
        x *= 3;
        Integer q = floor(x);
        d.push_back(static_cast<int>(q.get_si()));
        x -= q;
    }
    return d;
}

}  // namespace

int main() {
    const Ifs c13 = central(Rational(1, 3));
    const Ifs c19 = central(Rational(1, 9));
    const Ifs c14 = central(Rational(1, 4));
    const double target = std::log(2.0) / std::log(3.0);

    report(1, "similarity dimension of C13", [&] {
        double s = similarity_dimension(c13);
        return Outcome{std::abs(s - 0.63092975357145743) <= 1e-12 && std::abs(s - target) <= 1e-12, "s = " + fmt(s, 17)};
    }, 0.1);
    report(1, "similarity dimension of the 1/4 set", [&] {
        double s = similarity_dimension(c14);
        return Outcome{std::abs(s - 0.5) <= 1e-12, "s = " + fmt(s, 17)};
    }, 0.1);

    report(2, "entropy dimension of the C13 maximal measure", [&] {
        auto mu = self_similar_measure(c13, maximal_weights(c13), 22);
        auto curve = entropy_dimension(mu, 8, 20);
        auto oracle = cantor_oracle(22);
        std::vector<std::pair<double, double>> pts;
        double worst = 0;
        for (int n = 8; n <= 20; ++n) {
            double h = entropy_bits(coarse(oracle, 22 - n));
            pts.push_back({static_cast<double>(n), h});
            worst = std::max(worst, std::abs(h - shannon_entropy(mu, n)));
        }
        double oracle_slope = ls_slope(pts);
        bool pass = std::abs(curve.slope - target) <= 0.02 && std::abs(curve.slope - oracle_slope) <= 1e-9 && worst <= 1e-9;
        return Outcome{pass, "slope " + fmt(curve.slope) + ", oracle slope " + fmt(oracle_slope) + ", target " + fmt(target)};
    }, 10);

    report(3, "Lebesgue calibration", [&] {
        auto leb = DyadicMeasure::lebesgue(16);
        bool exact = true;
        for (int n = 0; n <= 16; ++n) exact = exact && shannon_entropy(leb, n) == static_cast<double>(n);
        double slope = entropy_dimension(leb, 4, 16).slope;
        return Outcome{exact && slope == 1.0, std::string("H = n exactly: ") + (exact ? "yes" : "no") + ", slope " + fmt(slope, 17)};
    });

    report(4, "C19 into C13 at 2^-16", [&] {
        auto v = verify_embedding(Similarity::identity(), c19, c13, pow2(-16));
        // every C19 cover cylinder starts at a point whose ternary digits are all 0 or 2
        bool digits_ok = true;
        for (const auto& cyl : cylinder_cover(c19, pow2(-16))) {
            for (int d : ternary_digits(cyl.hull.lo, 64)) digits_ok = digits_ok && (d == 0 || d == 2);
        }
        return Outcome{v.status == VerdictStatus::Consistent && v.rejected == 0 && digits_ok,
                       to_string(v.status) + ", " + std::to_string(v.rejected) + " of " + std::to_string(v.checked) +
                           " rejected; ternary digit oracle " + (digits_ok ? "agrees" : "disagrees")};
    }, 5);
    report(4, "C14 into C13 at 2^-10", [&] {
        auto v = verify_embedding(Similarity::identity(), c14, c13, pow2(-10));
        if (v.status != VerdictStatus::Rejected || !v.witness_word) return Outcome{false, to_string(v.status)};
        Similarity phi = cylinder_map(c14, *v.witness_word);
        Rational point = phi(0);  // a point of C14 inside the witness
        bool exact_image = *v.witness_image == apply(phi, attractor_hull(c14));
        bool holds_point = v.witness_image->contains(point);
        bool disjoint = disjoint_from_c13(v.witness_image->lo, v.witness_image->hi);
        return Outcome{exact_image && holds_point && disjoint,
                       "rejected, witness " + word_to_string(*v.witness_word) + " -> [" + to_string(v.witness_image->lo) + ", " +
                           to_string(v.witness_image->hi) + "], contains " + to_string(point) + ", disjoint from C13 by digit oracle: " +
                           (disjoint ? "yes" : "no")};
    }, 5);

    report(5, "renormalization family, commensurable case", [&] {
        auto f = renormalize_family(Similarity::identity(), c19, c13, 0, 200);
        Rational beta(1, 3);
        bool pass = !f.stopped_early && !f.entries.empty() && f.entries.back().n == 200;
        std::set<double> fracs;
        for (const auto& e : f.entries) {
            bool bracket = pow(beta, f.p + 1) <= e.scale && e.scale <= pow(beta, f.p);
            // alpha = beta^2 exactly, so l_n = 2n and the fractional part vanishes
            pass = pass && e.verified && bracket && e.l_n == 2 * e.n && e.frac == 0 &&
                   static_cast<long>(e.word.size()) == e.l_n - f.p &&
                   verify_embedding({e.scale, e.translation}, c19, c13, f.resolution).status == VerdictStatus::Consistent;
            fracs.insert(e.frac);
        }
        pass = pass && fracs.size() == 1;
        return Outcome{pass, std::to_string(f.entries.size()) + " entries, p = " + std::to_string(f.p) + ", " +
                                 std::to_string(fracs.size()) + " distinct fractional value(s)"};
    });

    report(6, "three-distance orbit of log(1/2)/log(1/3)", [&] {
        using boost::multiprecision::floor;
        auto r = fractional_orbit(log_ratio(Rational(1, 2), Rational(1, 3)).convert_to<long double>(), 1000);
        Big x = boost::multiprecision::log(Big(2)) / boost::multiprecision::log(Big(3));
        std::vector<Big> parts;
        for (int n = 1; n <= 1000; ++n) parts.push_back(n * x - floor(n * x));
        std::sort(parts.begin(), parts.end());
        std::vector<Big> gaps;
        for (std::size_t k = 1; k < parts.size(); ++k) gaps.push_back(parts[k] - parts[k - 1]);
        gaps.push_back(1 - parts.back() + parts.front());
        std::sort(gaps.begin(), gaps.end());
        std::size_t distinct = 1;
        for (std::size_t k = 1; k < gaps.size(); ++k) distinct += (gaps[k] - gaps[k - 1] > Big("1e-30"));
        double oracle_max = gaps.back().convert_to<double>();
        bool pass = r.distinct_gap_lengths <= 3 && r.max_gap <= 0.005 && r.distinct_gap_lengths == distinct &&
                    std::abs(r.max_gap - oracle_max) <= 1e-12;
        return Outcome{pass, std::to_string(r.distinct_gap_lengths) + " gap lengths (oracle " + std::to_string(distinct) +
                                 "), max gap " + fmt(r.max_gap) + " (oracle " + fmt(oracle_max) + ")"};
    });
    report(6, "rational orbits", [&] {
        std::mt19937_64 rng(12345);
        bool pass = true;
        std::string detail;
        for (int k = 0; k < 5; ++k) {
            long q = 2 + static_cast<long>(rng() % 50);
            long p = 1 + static_cast<long>(rng() % static_cast<unsigned long>(q - 1));
            long g = std::gcd(p, q);
            Rational x(p / g, q / g);
            std::size_t n = 1 + rng() % 400;
            auto r = fractional_orbit(x, n);
            std::size_t expected = std::min<std::size_t>(n, static_cast<std::size_t>(q / g));
            pass = pass && r.distinct_values <= static_cast<std::size_t>(q / g) && r.distinct_values == expected;
            detail += (k ? ", " : "") + to_string(x) + " N=" + std::to_string(n) + ": " + std::to_string(r.distinct_values);
        }
        return Outcome{pass, detail};
    });

    report(7, "convolution entropy growth", [&] {
        auto mu = self_similar_measure(c13, maximal_weights(c13), 16);
        auto nu = ParamMeasure::uniform({1.0 / 3.0, 1.0}, {0.0, 0.0}, 200, 1);
        auto conv = act_convolve(nu, mu, 16);
        double h_mu = shannon_entropy(mu, 14) / 14;
        double h_conv = shannon_entropy(conv, 14) / 14;
        // binning oracle: scale centres times cell midpoints, floored to level 16
        auto base = cantor_oracle(16);
        std::map<long long, double> out;
        for (int i = 0; i < 200; ++i) {
            double a = 1.0 / 3.0 + (i + 0.5) * (2.0 / 3.0) / 200;
            for (const auto& [k, m] : base) {
                double x = (static_cast<double>(k) + 0.5) / 65536.0;
                out[static_cast<long long>(std::floor(a * x * 65536.0))] += m / 200;
            }
        }
        double o_mu = entropy_bits(coarse(base, 2)) / 14;
        double o_conv = entropy_bits(coarse(out, 2)) / 14;
        bool pass = h_conv >= h_mu + 0.05 && std::abs(h_mu - o_mu) <= 1e-9 && std::abs(h_conv - o_conv) <= 1e-9;
        return Outcome{pass, "H(mu)/14 " + fmt(h_mu) + ", H(nu.mu)/14 " + fmt(h_conv) + ", gap " + fmt(h_conv - h_mu) +
                                 "; oracle " + fmt(o_mu) + " / " + fmt(o_conv)};
    }, 30);

    report(8, "entropy monotonicity and mass conservation", [&] {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> unit(0, 1);
        int ok_mono = 0, ok_shift = 0, ok_mass = 0;
        for (int k = 0; k < 100; ++k) {
            int level = 10 + static_cast<int>(rng() % 5);
            std::vector<double> m(1 + rng() % 2000);
            for (auto& x : m) x = unit(rng) < 0.25 ? 0.0 : unit(rng);
            m[0] += 1e-6;
            double total = std::accumulate(m.begin(), m.end(), 0.0);
            for (auto& x : m) x /= total;
            DyadicMeasure theta(level, static_cast<std::int64_t>(rng() % 5000) - 2500, m);
            bool mono = true;
            for (int n = 1; n <= level; ++n) mono = mono && shannon_entropy(theta, n) + 1e-12 >= shannon_entropy(theta, n - 1);
            ok_mono += mono;
            Rational t(static_cast<long>(rng() % 20000) - 10000, 1 + static_cast<long>(rng() % 997));
            t.canonicalize();
            auto moved = pushforward({1, t}, theta, level);
            bool shift = true;
            for (int n = 0; n <= level; ++n) shift = shift && std::abs(shannon_entropy(moved, n) - shannon_entropy(theta, n)) <= 2;
            ok_shift += shift;
            auto conv = act_convolve(ParamMeasure::uniform({0.5, 1.5}, {-1, 1}, 7, 5), theta, level);
            ok_mass += std::abs(theta.total() - 1) <= 1e-9 && std::abs(moved.total() - 1) <= 1e-9 &&
                       std::abs(conv.total() - 1) <= 1e-9 && std::abs(coarsen(theta, level / 2).total() - 1) <= 1e-9;
        }
        return Outcome{ok_mono == 100 && ok_shift == 100 && ok_mass == 100,
                       "monotone " + std::to_string(ok_mono) + "/100, shift " + std::to_string(ok_shift) + "/100, mass " +
                           std::to_string(ok_mass) + "/100"};
    });

    report(9, "commensurability", [&] {
        auto a = log_commensurable(Rational(1, 9), Rational(1, 3));
        auto b = log_commensurable(Rational(1, 2), Rational(1, 3));
        auto c = log_commensurable(Rational(8, 27), Rational(2, 3));
        Ifs f({{Rational(1, 6), 0}, {Rational(1, 6), Rational(5, 6)}});
        Ifs e({{Rational(1, 2), 0}, {Rational(1, 3), Rational(2, 3)}});
        auto m = conjecture_exponents(f, e);
        bool pass = a.verdict == CommensurabilityVerdict::Rational && a.p == 2 && a.q == 1 &&
                    pow(Rational(1, 3), 2) == Rational(1, 9) && b.verdict == CommensurabilityVerdict::Incommensurable &&
                    c.verdict == CommensurabilityVerdict::Rational && c.p == 3 && c.q == 1 &&
                    pow(Rational(2, 3), 3) == Rational(8, 27) && m.rows[0].t &&
                    *m.rows[0].t == std::vector<Rational>{1, 1} && Rational(1, 2) * Rational(1, 3) == Rational(1, 6);
        return Outcome{pass, "(1/9,1/3) " + to_string(a.verdict) + "(" + std::to_string(a.p) + "," + std::to_string(a.q) +
                                 "), (1/2,1/3) " + to_string(b.verdict) + ", (8/27,2/3) " + to_string(c.verdict) + "(" +
                                 std::to_string(c.p) + "," + std::to_string(c.q) + "), exponents [" +
                                 (m.rows[0].t ? to_string((*m.rows[0].t)[0]) + "," + to_string((*m.rows[0].t)[1]) : "none") + "]"};
    }, 0.1);

    report(10, "Pisot predicate", [&] {
        struct Case {
            std::vector<long long> poly;
            bool pisot;
            std::vector<double> roots;  // closed forms
        };
        std::vector<Case> cases{{{1, -2}, true, {2}},
                                {{1, -1, -1}, true, {(1 + std::sqrt(5.0)) / 2, (1 - std::sqrt(5.0)) / 2}},
                                {{1, -2, -1}, true, {1 + std::sqrt(2.0), 1 - std::sqrt(2.0)}},
                                {{1, 0, -3}, false, {std::sqrt(3.0), -std::sqrt(3.0)}}};
        bool pass = true;
        double worst = 0;
        for (const auto& c : cases) {
            auto v = is_pisot(c.poly);
            pass = pass && v.is_pisot == c.pisot && v.roots.size() == c.roots.size();
            for (const auto& z : v.roots) {
                std::complex<long double> acc = 0;
                for (long long coeff : c.poly) acc = acc * z + static_cast<long double>(coeff);
                worst = std::max(worst, static_cast<double>(std::abs(acc)));
                double nearest = 1e9;
                for (double r : c.roots) nearest = std::min(nearest, static_cast<double>(std::abs(z - std::complex<long double>(r, 0))));
                pass = pass && nearest <= 1e-12;
            }
        }
        return Outcome{pass && worst <= 1e-10, "x-2, x^2-x-1, x^2-2x-1 Pisot; x^2-3 not; worst residual " + fmt(worst, 3)};
    });

    report(11, "suite command output identical at 1 and 8 threads", [&] {
        std::ostringstream out1, out8, err;
        parallel::set_thread_count(1);
        int code1 = cli::run_experiment({"paper-suite"}, out1, err);
        parallel::set_thread_count(8);
        int code8 = cli::run_experiment({"paper-suite"}, out8, err);
        bool same = out1.str() == out8.str();
        return Outcome{same && code1 == 0 && code8 == 0,
                       std::string("byte-identical: ") + (same ? "yes" : "no") + ", " + std::to_string(out1.str().size()) + " bytes"};
    });

    std::printf("%s\n", failures == 0 ? "all criteria passed" : "some criteria FAILED");
    return failures == 0 ? 0 : 1;
}
