#include "ifslab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ifslab/dimension.hpp"
#include "ifslab/error.hpp"
#include "ifslab/parallel.hpp"

namespace ifslab {
namespace {

constexpr double kMassTolerance = 1e-9;
constexpr std::size_t kEntropyBlock = std::size_t{1} << 14;
constexpr std::size_t kConvolveBlocks = 16;
constexpr std::int64_t kMaxCells = std::int64_t{1} << 28;

void check_level(int level) {
    if (level < 0 || level > 60) fail(ErrorKind::InvalidParameter, "dyadic level " + std::to_string(level) + " out of range");
}

std::int64_t to_cell(const Integer& z) {
    if (!z.fits_slong_p()) fail(ErrorKind::InvalidParameter, "dyadic cell index overflows 64 bits");
    return z.get_si();
}

// Accumulates (cell, mass) contributions, in the given order, into a dense array.
DyadicMeasure accumulate(int level, const std::vector<std::pair<std::int64_t, double>>& contributions) {
    if (contributions.empty()) fail(ErrorKind::InvalidParameter, "measure has no mass");
    auto [lo_it, hi_it] = std::minmax_element(contributions.begin(), contributions.end(),
                                              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::int64_t lo = lo_it->first;
    std::int64_t span = hi_it->first - lo + 1;
    if (span > kMaxCells) fail(ErrorKind::InvalidParameter, "measure support spans too many dyadic cells");
    std::vector<double> masses(static_cast<std::size_t>(span), 0.0);
    for (const auto& [cell, mass] : contributions) masses[static_cast<std::size_t>(cell - lo)] += mass;
    return DyadicMeasure(level, lo, std::move(masses));
}

double entropy_bits(std::span<const double> masses) {
    std::size_t blocks = (masses.size() + kEntropyBlock - 1) / kEntropyBlock;
    std::vector<double> partial(blocks, 0.0);
    parallel::for_blocks(blocks, [&](std::size_t b) {
        auto chunk = masses.subspan(b * kEntropyBlock, std::min(kEntropyBlock, masses.size() - b * kEntropyBlock));
        std::vector<double> terms;
        terms.reserve(chunk.size());
        for (double p : chunk) terms.push_back(p > 0 ? -p * std::log2(p) : 0.0);
        partial[b] = parallel::pairwise_sum(terms);
    });
    return parallel::pairwise_sum(partial);
}

}  // namespace

DyadicMeasure::DyadicMeasure(int level, std::int64_t origin, std::vector<double> masses)
    : level_(level), origin_(origin), masses_(std::move(masses)) {
    check_level(level);
    for (double m : masses_) {
        if (!(m >= 0) || !std::isfinite(m)) fail(ErrorKind::InvalidParameter, "measure masses must be finite and nonnegative");
    }
    auto first = std::find_if(masses_.begin(), masses_.end(), [](double m) { return m > 0; });
    if (first == masses_.end()) fail(ErrorKind::InvalidParameter, "measure has no mass");
    auto last = std::find_if(masses_.rbegin(), masses_.rend(), [](double m) { return m > 0; }).base();
    origin_ += first - masses_.begin();
    masses_.erase(last, masses_.end());
    masses_.erase(masses_.begin(), first);
    if (std::abs(total() - 1.0) > kMassTolerance) {
        fail(ErrorKind::InvalidParameter, "measure total " + std::to_string(total()) + " is not 1");
    }
}

DyadicMeasure DyadicMeasure::uniform(int level, std::int64_t first_cell, std::int64_t count) {
    if (count <= 0) fail(ErrorKind::InvalidParameter, "uniform measure needs at least one cell");
    return DyadicMeasure(level, first_cell, std::vector<double>(static_cast<std::size_t>(count), 1.0 / static_cast<double>(count)));
}

DyadicMeasure DyadicMeasure::point_mass(int level, std::int64_t cell) { return DyadicMeasure(level, cell, {1.0}); }

double DyadicMeasure::mass_at(std::int64_t cell) const {
    if (cell < origin_ || cell >= end()) return 0.0;
    return masses_[static_cast<std::size_t>(cell - origin_)];
}

double DyadicMeasure::total() const { return parallel::pairwise_sum(masses_); }

std::size_t DyadicMeasure::support_size() const {
    return static_cast<std::size_t>(std::count_if(masses_.begin(), masses_.end(), [](double m) { return m > 0; }));
}

DyadicMeasure coarsen(const DyadicMeasure& theta, int n) {
    if (n > theta.level()) {
        fail(ErrorKind::InvalidParameter, "partition level " + std::to_string(n) + " is finer than the measure level " +
                                              std::to_string(theta.level()));
    }
    if (n < 0) fail(ErrorKind::InvalidParameter, "partition level must be nonnegative");
    int shift = theta.level() - n;
    std::int64_t lo = theta.origin() >> shift;
    std::int64_t hi = (theta.end() - 1) >> shift;
    std::vector<double> coarse(static_cast<std::size_t>(hi - lo + 1), 0.0);
    auto fine = theta.masses();
    for (std::size_t i = 0; i < fine.size(); ++i) {
        std::int64_t cell = (theta.origin() + static_cast<std::int64_t>(i)) >> shift;
        coarse[static_cast<std::size_t>(cell - lo)] += fine[i];
    }
    return DyadicMeasure(n, lo, std::move(coarse));
}

ParamMeasure::ParamMeasure(Range scale, Range trans, std::size_t scale_cells, std::size_t trans_cells,
                           std::vector<double> masses)
    : scale_(scale), trans_(trans), scale_cells_(scale_cells), trans_cells_(trans_cells), masses_(std::move(masses)) {
    if (scale_cells_ == 0 || trans_cells_ == 0) fail(ErrorKind::InvalidParameter, "parameter grid must be nonempty");
    if (masses_.size() != scale_cells_ * trans_cells_) fail(ErrorKind::InvalidParameter, "parameter grid size mismatch");
    if (!(scale_.lo <= scale_.hi) || !(trans_.lo <= trans_.hi)) fail(ErrorKind::InvalidParameter, "parameter ranges must satisfy lo <= hi");
    if (scale_.lo <= 0 && scale_.hi >= 0) fail(ErrorKind::InvalidParameter, "scale range must exclude 0");
    for (double m : masses_) {
        if (!(m >= 0) || !std::isfinite(m)) fail(ErrorKind::InvalidParameter, "grid masses must be finite and nonnegative");
    }
    if (std::abs(parallel::pairwise_sum(masses_) - 1.0) > kMassTolerance) fail(ErrorKind::InvalidParameter, "grid masses must sum to 1");
}

ParamMeasure ParamMeasure::uniform(Range scale, Range trans, std::size_t scale_cells, std::size_t trans_cells) {
    std::size_t cells = scale_cells * trans_cells;
    return ParamMeasure(scale, trans, scale_cells, trans_cells,
                        std::vector<double>(cells, cells ? 1.0 / static_cast<double>(cells) : 0.0));
}

ParamMeasure ParamMeasure::point_mass(double scale, double trans) { return ParamMeasure({scale, scale}, {trans, trans}, 1, 1, {1.0}); }

double ParamMeasure::scale_center(std::size_t i) const {
    return scale_.lo + (static_cast<double>(i) + 0.5) * (scale_.hi - scale_.lo) / static_cast<double>(scale_cells_);
}

double ParamMeasure::trans_center(std::size_t j) const {
    return trans_.lo + (static_cast<double>(j) + 0.5) * (trans_.hi - trans_.lo) / static_cast<double>(trans_cells_);
}

std::vector<double> maximal_weights(const Ifs& ifs) {
    long double s = similarity_dimension(ifs);
    std::vector<long double> raw;
    long double sum = 0;
    for (const auto& m : ifs.maps()) {
        raw.push_back(std::pow(to_long_double(m.ratio), s));
        sum += raw.back();
    }
    std::vector<double> weights;
    for (long double w : raw) weights.push_back(static_cast<double>(w / sum));
    return weights;
}

namespace {

struct MeasureBuilder {
    const Ifs& ifs;
    std::span<const double> weights;
    Interval hull;
    Rational resolution;
    int level;
    std::vector<std::pair<std::int64_t, double>> out;

    void expand(const Similarity& g, double mass) {
        if (mass == 0) return;
        Interval image = apply(g, hull);
        if (image.diameter() <= resolution) {
            Rational scaled = image.midpoint();
            mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), static_cast<mp_bitcnt_t>(level));
            out.emplace_back(to_cell(floor(scaled)), mass);
            return;
        }
        for (std::size_t i = 0; i < ifs.size(); ++i) expand(compose(g, ifs.map(i)), mass * weights[i]);
    }
};

}  // namespace

DyadicMeasure self_similar_measure(const Ifs& ifs, std::span<const double> weights, int level) {
    if (weights.size() != ifs.size()) {
        fail(ErrorKind::InvalidParameter, "expected " + std::to_string(ifs.size()) + " weights, got " + std::to_string(weights.size()));
    }
    double sum = 0;
    for (double w : weights) {
        if (!(w >= 0) || !std::isfinite(w)) fail(ErrorKind::InvalidParameter, "weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kMassTolerance) fail(ErrorKind::InvalidParameter, "weights must sum to 1");
    if (level < 1) fail(ErrorKind::InvalidParameter, "measure level must be at least 1");
    check_level(level);
    MeasureBuilder builder{ifs, weights, attractor_hull(ifs), pow2(-level), level, {}};
    builder.expand(Similarity::identity(), 1.0);
    return accumulate(level, builder.out);
}

double shannon_entropy(const DyadicMeasure& theta, int n) { return entropy_bits(coarsen(theta, n).masses()); }

double shannon_entropy(const ParamMeasure& nu, int n) {
    if (n < 0 || n > 60) fail(ErrorKind::InvalidParameter, "partition level out of range");
    double side = std::ldexp(1.0, -n);
    double scale_width = (nu.scale_range().hi - nu.scale_range().lo) / static_cast<double>(nu.scale_cells());
    double trans_width = (nu.trans_range().hi - nu.trans_range().lo) / static_cast<double>(nu.trans_cells());
    if (scale_width > side || trans_width > side) {
        fail(ErrorKind::InvalidParameter, "grid is coarser than the level-" + std::to_string(n) + " dyadic partition");
    }
    std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, double>> cells;
    for (std::size_t i = 0; i < nu.scale_cells(); ++i) {
        auto a = static_cast<std::int64_t>(std::floor(std::ldexp(nu.scale_center(i), n)));
        for (std::size_t j = 0; j < nu.trans_cells(); ++j) {
            if (nu.mass(i, j) == 0) continue;
            auto t = static_cast<std::int64_t>(std::floor(std::ldexp(nu.trans_center(j), n)));
            cells.push_back({{a, t}, nu.mass(i, j)});
        }
    }
    std::stable_sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<double> masses;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k == 0 || cells[k].first != cells[k - 1].first) masses.push_back(0.0);
        masses.back() += cells[k].second;
    }
    return entropy_bits(masses);
}

std::pair<double, double> least_squares(std::span<const std::pair<int, double>> points) {
    double n = static_cast<double>(points.size());
    double mean_x = 0, mean_y = 0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : points) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    double slope = sxy / sxx;
    return {slope, mean_y - slope * mean_x};
}

EntropyCurve entropy_dimension(const DyadicMeasure& theta, int n_min, int n_max) {
    if (n_min < 1 || n_max <= n_min) fail(ErrorKind::InvalidParameter, "need 1 <= n_min < n_max");
    if (n_max - n_min + 1 < 3) fail(ErrorKind::InvalidParameter, "entropy slope needs at least 3 levels");
    EntropyCurve curve;
    for (int n = n_min; n <= n_max; ++n) curve.points.emplace_back(n, shannon_entropy(theta, n));
    std::tie(curve.slope, curve.intercept) = least_squares(curve.points);
    return curve;
}

DyadicMeasure pushforward(const Similarity& g, const DyadicMeasure& theta, int out_level) {
    check_level(out_level);
    // Cell k has midpoint (2k+1)/2^(L+1); its image lands in floor((A(2k+1) + B) / D).
    const int level = theta.level();
    const Integer& an = g.ratio.get_num();
    const Integer& ad = g.ratio.get_den();
    const Integer& tn = g.translation.get_num();
    const Integer& td = g.translation.get_den();
    Integer a_coef = (an * td) << static_cast<mp_bitcnt_t>(out_level);
    Integer b_coef = (tn * ad) << static_cast<mp_bitcnt_t>(level + 1 + out_level);
    Integer denom = (ad * td) << static_cast<mp_bitcnt_t>(level + 1);

    std::vector<std::pair<std::int64_t, double>> out;
    auto masses = theta.masses();
    Integer numer, cell;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (masses[i] == 0) continue;
        Integer odd(2 * (theta.origin() + static_cast<std::int64_t>(i)) + 1);
        numer = a_coef * odd + b_coef;
        mpz_fdiv_q(cell.get_mpz_t(), numer.get_mpz_t(), denom.get_mpz_t());
        out.emplace_back(to_cell(cell), masses[i]);
    }
    return accumulate(out_level, out);
}

DyadicMeasure act_convolve(const ParamMeasure& nu, const DyadicMeasure& mu, int out_level) {
    check_level(out_level);
    if (out_level < 1) fail(ErrorKind::InvalidParameter, "output level must be at least 1");
    for (std::size_t i = 0; i < nu.scale_cells(); ++i) {
        if (nu.scale_center(i) == 0) fail(ErrorKind::InvalidParameter, "scale cell centre at 0 is not a similarity");
    }

    struct Atom {
        double a, t, mass;
    };
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < nu.scale_cells(); ++i) {
        for (std::size_t j = 0; j < nu.trans_cells(); ++j) {
            if (nu.mass(i, j) > 0) atoms.push_back({nu.scale_center(i), nu.trans_center(j), nu.mass(i, j)});
        }
    }
    std::vector<std::pair<double, double>> points;  // (midpoint, mass) of mu
    auto mu_masses = mu.masses();
    for (std::size_t k = 0; k < mu_masses.size(); ++k) {
        if (mu_masses[k] == 0) continue;
        double x = std::ldexp(static_cast<double>(mu.origin() + static_cast<std::int64_t>(k)) + 0.5, -mu.level());
        points.emplace_back(x, mu_masses[k]);
    }
    const double x_min = points.front().first;
    const double x_max = points.back().first;
    auto cell_of = [out_level](double y) { return static_cast<std::int64_t>(std::floor(std::ldexp(y, out_level))); };

    // Fixed partition of the atoms into blocks; each block owns a dense
    // partial histogram, merged afterwards in block order.
    std::size_t blocks = std::min(kConvolveBlocks, atoms.size());
    struct Partial {
        std::int64_t lo = 0;
        std::vector<double> masses;
    };
    std::vector<Partial> partials(blocks);
    auto block_range = [&](std::size_t b) {
        return std::pair{atoms.size() * b / blocks, atoms.size() * (b + 1) / blocks};
    };
    std::int64_t global_lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t global_hi = std::numeric_limits<std::int64_t>::min();
    for (std::size_t b = 0; b < blocks; ++b) {
        auto [first, last] = block_range(b);
        std::int64_t lo = std::numeric_limits<std::int64_t>::max();
        std::int64_t hi = std::numeric_limits<std::int64_t>::min();
        for (std::size_t k = first; k < last; ++k) {
            double y0 = atoms[k].a * x_min + atoms[k].t;
            double y1 = atoms[k].a * x_max + atoms[k].t;
            lo = std::min({lo, cell_of(y0), cell_of(y1)}) ;
            hi = std::max({hi, cell_of(y0), cell_of(y1)});
        }
        // One cell of slack on each side absorbs rounding in a*x + t.
        partials[b].lo = lo - 1;
        if (hi - lo + 3 > kMaxCells) fail(ErrorKind::InvalidParameter, "convolution support spans too many dyadic cells");
        partials[b].masses.assign(static_cast<std::size_t>(hi - lo + 3), 0.0);
        global_lo = std::min(global_lo, lo - 1);
        global_hi = std::max(global_hi, hi + 1);
    }
    parallel::for_blocks(blocks, [&](std::size_t b) {
        auto [first, last] = block_range(b);
        Partial& part = partials[b];
        for (std::size_t k = first; k < last; ++k) {
            const Atom& atom = atoms[k];
            for (const auto& [x, m] : points) {
                std::int64_t cell = cell_of(atom.a * x + atom.t);
                part.masses[static_cast<std::size_t>(cell - part.lo)] += atom.mass * m;
            }
        }
    });
    if (global_hi - global_lo + 1 > kMaxCells) fail(ErrorKind::InvalidParameter, "convolution support spans too many dyadic cells");
    std::vector<double> merged(static_cast<std::size_t>(global_hi - global_lo + 1), 0.0);
    for (const Partial& part : partials) {
        for (std::size_t c = 0; c < part.masses.size(); ++c) {
            merged[static_cast<std::size_t>(part.lo - global_lo) + c] += part.masses[c];
        }
    }
    return DyadicMeasure(out_level, global_lo, std::move(merged));
}

}  // namespace ifslab
