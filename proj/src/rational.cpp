#include "ifslab/rational.hpp"

#include <cmath>
#include <utility>

#include "ifslab/error.hpp"

namespace ifslab {
namespace {

bool is_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

Integer parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!is_digits(s)) fail(ErrorKind::Parse, "not an integer: '" + std::string(s) + "'");
    Integer z(std::string(s), 10);
    return negative ? Integer(-z) : z;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// |z| as (mantissa, binary exponent), mantissa exact to 64 bits.
std::pair<long double, long> split(const Integer& z) {
    Integer a = abs(z);
    long bits = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2));
    long shift = bits > 64 ? bits - 64 : 0;
    Integer top = a >> shift;
    unsigned long m = mpz_get_ui(top.get_mpz_t());
    return {static_cast<long double>(m), shift};
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) fail(ErrorKind::Parse, "empty rational");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(trim(s.substr(0, slash)));
        Integer den = parse_integer(trim(s.substr(slash + 1)));
        if (den == 0) fail(ErrorKind::Parse, "zero denominator in '" + std::string(s) + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
        if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
            (whole.empty() && frac.empty())) {
            fail(ErrorKind::Parse, "malformed decimal '" + std::string(s) + "'");
        }
        Integer digits(std::string(whole) + std::string(frac), 10);
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        Rational q(negative ? Integer(-digits) : digits, scale);
        q.canonicalize();
        return q;
    }
    return Rational(parse_integer(s));
}

Rational parse_resolution(std::string_view text) {
    std::string_view s = trim(text);
    if (s.starts_with("2^")) {
        Integer e = parse_integer(s.substr(2));
        if (!e.fits_slong_p()) fail(ErrorKind::Parse, "exponent out of range in '" + std::string(s) + "'");
        return pow2(e.get_si());
    }
    return parse_rational(s);
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational pow2(long e) {
    Integer p(1);
    if (e >= 0) return Rational(p << static_cast<mp_bitcnt_t>(e));
    return Rational(p, Integer(p << static_cast<mp_bitcnt_t>(-e)));
}

Rational pow(const Rational& q, long e) {
    if (e < 0) {
        if (q == 0) fail(ErrorKind::InvalidParameter, "zero to a negative power");
        return pow(Rational(1) / q, -e);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Integer floor(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

long double to_long_double(const Rational& q) {
    if (q == 0) return 0.0L;
    auto [nm, ne] = split(q.get_num());
    auto [dm, de] = split(q.get_den());
    long double v = std::ldexp(nm / dm, static_cast<int>(ne - de));
    return sgn(q) < 0 ? -v : v;
}

long double log(const Rational& q) {
    if (sgn(q) <= 0) fail(ErrorKind::InvalidParameter, "log of a non-positive rational");
    auto [nm, ne] = split(q.get_num());
    auto [dm, de] = split(q.get_den());
    return std::log(nm) - std::log(dm) + static_cast<long double>(ne - de) * std::log(2.0L);
}

}  // namespace ifslab
