#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifslab/rational.hpp"
#include "ifslab/similarity.hpp"

namespace ifslab {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

HighPrecision to_high_precision(const Rational& q);

/// log(alpha) / log(beta) to about 50 significant digits.
HighPrecision log_ratio(const Rational& alpha, const Rational& beta);

/// Prime factorisation of |z| (z != 0) as prime -> multiplicity. Empty optional
/// when a composite cofactor beyond 64 bits remains after trial division.
std::optional<std::map<Integer, long>> factorize(const Integer& z);

enum class CommensurabilityVerdict { Rational, Incommensurable, Unknown };

std::string to_string(CommensurabilityVerdict v);

struct CommensurabilityResult {
    CommensurabilityVerdict verdict = CommensurabilityVerdict::Unknown;
    long p = 0;  // log(alpha)/log(beta) = p/q, alpha^q = beta^p
    long q = 0;
    std::string certificate;
};

/// Decides log(alpha)/log(beta) in Q for alpha, beta in (0,1) by comparing
/// prime-exponent vectors. `q_max` bounds the brute-force search used only
/// when factorisation gives up.
CommensurabilityResult log_commensurable(const Rational& alpha, const Rational& beta, long q_max = 64);

struct ExponentRow {
    std::optional<std::vector<Rational>> t;  // alpha_i = prod_j beta_j^{t_j}; empty when outside the span
    bool nonnegative = false;
};

struct ExponentMatrix {
    std::vector<ExponentRow> rows;
};

/// Rational exponents t_{i,j} with alpha_i = prod_j beta_j^{t_{i,j}}. A
/// nonnegative solution is preferred: supports are tried as column subsets in
/// increasing size, lexicographically, and the first feasible one wins.
/// Otherwise the reduced-echelon solution (free exponents zero) is returned.
ExponentMatrix conjecture_exponents(const Ifs& source, const Ifs& target);

/// Exact check of prod_j beta_j^{t_j} = alpha after clearing exponent denominators.
bool exponents_reproduce(const Rational& alpha, std::span<const Rational> betas, std::span<const Rational> t);

/// Convergents p_k/q_k for k = 0..depth, stopping early when x is reached exactly.
std::vector<Rational> continued_fraction(const HighPrecision& x, std::size_t depth);

struct PisotVerdict {
    std::vector<long long> polynomial;  // highest degree first, monic
    std::vector<std::complex<long double>> roots;
    std::optional<long double> dominant_root;
    std::vector<long double> conjugate_moduli;  // all other roots, descending
    double max_residual = 0;
    bool boundary = false;  // some conjugate has modulus within 1e-9 of 1 (Salem-suspect)
    bool is_pisot = false;
};

/// Root pattern of a monic integer polynomial: a single real root > 1 with
/// every other root of modulus <= 1 - 1e-9. Irreducibility is not checked.
PisotVerdict is_pisot(std::span<const long long> coeffs);

/// All complex roots by Aberth-Ehrlich iteration followed by Newton polishing.
std::vector<std::complex<long double>> polynomial_roots(std::span<const long long> coeffs);

}  // namespace ifslab
