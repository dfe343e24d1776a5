#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ifslab/similarity.hpp"

namespace ifslab {

/// Probability measure discretised on the level-n dyadic cells [k/2^n, (k+1)/2^n).
/// masses()[i] is the mass of cell origin() + i. Leading and trailing empty
/// cells are trimmed on construction.
class DyadicMeasure {
public:
    DyadicMeasure(int level, std::int64_t origin, std::vector<double> masses);

    static DyadicMeasure uniform(int level, std::int64_t first_cell, std::int64_t count);
    static DyadicMeasure point_mass(int level, std::int64_t cell);
    /// Lebesgue measure on [0,1).
    static DyadicMeasure lebesgue(int level) { return uniform(level, 0, std::int64_t{1} << level); }

    int level() const { return level_; }
    std::int64_t origin() const { return origin_; }
    /// One past the last cell index.
    std::int64_t end() const { return origin_ + static_cast<std::int64_t>(masses_.size()); }
    std::span<const double> masses() const { return masses_; }
    double mass_at(std::int64_t cell) const;
    double total() const;
    std::size_t support_size() const;

private:
    int level_;
    std::int64_t origin_;
    std::vector<double> masses_;
};

/// Sums 2^(level - n) fine cells into each level-n cell.
DyadicMeasure coarsen(const DyadicMeasure& theta, int n);

struct Range {
    double lo = 0;
    double hi = 0;
};

/// Discretised measure on a rectangle of the similarity group: scale a
/// (dimensionless) times translation t. Cells are uniform; masses are stored
/// row-major, scale index first.
class ParamMeasure {
public:
    ParamMeasure(Range scale, Range trans, std::size_t scale_cells, std::size_t trans_cells, std::vector<double> masses);

    static ParamMeasure uniform(Range scale, Range trans, std::size_t scale_cells, std::size_t trans_cells);
    static ParamMeasure point_mass(double scale, double trans);

    const Range& scale_range() const { return scale_; }
    const Range& trans_range() const { return trans_; }
    std::size_t scale_cells() const { return scale_cells_; }
    std::size_t trans_cells() const { return trans_cells_; }
    double scale_center(std::size_t i) const;
    double trans_center(std::size_t j) const;
    double mass(std::size_t i, std::size_t j) const { return masses_[i * trans_cells_ + j]; }
    std::span<const double> masses() const { return masses_; }

private:
    Range scale_;
    Range trans_;
    std::size_t scale_cells_;
    std::size_t trans_cells_;
    std::vector<double> masses_;
};

struct EntropyCurve {
    std::vector<std::pair<int, double>> points;  // (n, H in bits)
    double slope = 0;
    double intercept = 0;
};

/// Weights r_i^s with s the similarity dimension, normalised to sum to one.
std::vector<double> maximal_weights(const Ifs& ifs);

/// Cylinders are expanded until their hull diameter is <= 2^-level; each
/// carries the product of its weights and is binned at its hull midpoint.
DyadicMeasure self_similar_measure(const Ifs& ifs, std::span<const double> weights, int level);

/// H(theta, D_n) in bits; n must not exceed the measure's level.
double shannon_entropy(const DyadicMeasure& theta, int n);

/// Entropy against the level-n dyadic squares of the (scale, translation)
/// plane, each grid cell binned at its centre. Requires grid cells no wider
/// than 2^-n along either axis.
double shannon_entropy(const ParamMeasure& nu, int n);

/// Points (n, H(theta, D_n)) for n in [n_min, n_max] with their least-squares line.
EntropyCurve entropy_dimension(const DyadicMeasure& theta, int n_min, int n_max);

/// Each source cell's mass moves to the output cell containing g(midpoint).
DyadicMeasure pushforward(const Similarity& g, const DyadicMeasure& theta, int out_level);

/// nu.mu: pushforward of nu x mu under (g, x) -> g(x), using cell centres.
DyadicMeasure act_convolve(const ParamMeasure& nu, const DyadicMeasure& mu, int out_level);

/// Least-squares slope and intercept of y against x.
std::pair<double, double> least_squares(std::span<const std::pair<int, double>> points);

}  // namespace ifslab
