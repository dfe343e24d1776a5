#include "ifslab/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "ifslab/dimension.hpp"
#include "ifslab/error.hpp"
#include "ifslab/parallel.hpp"

namespace ifslab {

std::string to_string(VerdictStatus status) { return status == VerdictStatus::Consistent ? "consistent" : "rejected"; }

EmbeddingChecker::EmbeddingChecker(const Ifs& target, Rational resolution) : resolution_(std::move(resolution)) {
    for (auto& c : cylinder_cover(target, resolution_)) cover_.push_back(std::move(c.hull));
    std::stable_sort(cover_.begin(), cover_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    reach_.reserve(cover_.size());
    for (const auto& x : cover_) reach_.push_back(reach_.empty() ? x.hi : std::max(reach_.back(), x.hi));
}

bool EmbeddingChecker::hits(const Interval& x) const {
    auto it = std::upper_bound(cover_.begin(), cover_.end(), x.hi, [](const Rational& v, const Interval& c) { return v < c.lo; });
    if (it == cover_.begin()) return false;
    return reach_[static_cast<std::size_t>(it - cover_.begin()) - 1] >= x.lo;
}

EmbeddingVerdict EmbeddingChecker::check(const Similarity& g, const Ifs& source) const {
    if (g.ratio == 0) fail(ErrorKind::InvalidParameter, "embedding ratio must be nonzero");
    std::vector<Cylinder> pieces = cylinder_cover(source, resolution_ / abs(g.ratio));

    // Fixed blocks; each records its rejects and first witness, so the merged
    // result is independent of scheduling.
    constexpr std::size_t block = 256;
    std::size_t blocks = (pieces.size() + block - 1) / block;
    std::vector<std::size_t> rejects(blocks, 0);
    std::vector<std::size_t> first(blocks, std::numeric_limits<std::size_t>::max());
    parallel::for_blocks(blocks, [&](std::size_t b) {
        std::size_t end = std::min(pieces.size(), (b + 1) * block);
        for (std::size_t k = b * block; k < end; ++k) {
            if (!hits(apply(g, pieces[k].hull))) {
                ++rejects[b];
                first[b] = std::min(first[b], k);
            }
        }
    });

    EmbeddingVerdict verdict;
    verdict.resolution = resolution_;
    verdict.checked = pieces.size();
    for (std::size_t b = 0; b < blocks; ++b) {
        verdict.rejected += rejects[b];
        if (!verdict.witness_word && rejects[b] > 0) {
            const Cylinder& w = pieces[first[b]];
            verdict.witness_word = w.word;
            verdict.witness_image = apply(g, w.hull);
        }
    }
    verdict.status = verdict.rejected > 0 ? VerdictStatus::Rejected : VerdictStatus::Consistent;
    return verdict;
}

EmbeddingVerdict verify_embedding(const Similarity& g, const Ifs& source, const Ifs& target, const Rational& resolution) {
    if (resolution <= 0) fail(ErrorKind::InvalidParameter, "resolution must be positive");
    return EmbeddingChecker(target, resolution).check(g, source);
}

namespace {

[[noreturn]] void violated(const std::string& what) { fail(ErrorKind::HypothesisViolation, what); }

// The depth-`depth` cylinder of `target` met by `image`. Descends through
// hulls, then falls back to finer covers if two hulls are both met.
std::pair<Word, Similarity> unique_cylinder(const Ifs& target, const Interval& hull, long depth, const Interval& image,
                                            const Rational& resolution) {
    std::vector<std::pair<Word, Similarity>> frontier{{Word{}, Similarity::identity()}};
    for (long level = 0; level < depth; ++level) {
        std::vector<std::pair<Word, Similarity>> next;
        for (const auto& [word, map] : frontier) {
            for (std::size_t i = 0; i < target.size(); ++i) {
                Similarity child = compose(map, target.map(i));
                if (apply(child, hull).intersects(image)) {
                    Word w = word;
                    w.push_back(i);
                    next.emplace_back(std::move(w), std::move(child));
                }
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    if (frontier.size() > 1) {
        std::vector<std::pair<Word, Similarity>> kept;
        for (auto& candidate : frontier) {
            Rational local = resolution / candidate.second.ratio;
            for (const auto& piece : cylinder_cover(target, local)) {
                if (apply(candidate.second, piece.hull).intersects(image)) {
                    kept.push_back(std::move(candidate));
                    break;
                }
            }
        }
        frontier = std::move(kept);
    }
    if (frontier.empty()) violated("no depth-" + std::to_string(depth) + " cylinder of the target meets the renormalised image");
    if (frontier.size() > 1) {
        violated("image meets " + std::to_string(frontier.size()) + " depth-" + std::to_string(depth) +
                 " cylinders; the separation bound does not hold");
    }
    return std::move(frontier.front());
}

Interval ordered(Rational a, Rational b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

// Shared Step-1 pipeline. The n-th small piece is power(n)(hull of F), a map
// with ratio gamma * small^n; it is located inside a depth-(l_n - p) cylinder
// psi_I of the target and pulled back through psi_I^{-1}.
template <typename Power>
RenormalizationFamily build_family(RenormalizationFamily family, const Rational& gamma, const Ifs& source, const Ifs& target,
                                   long n_max, const RenormalizationOptions& options, Power power) {
    const Rational& small = family.small_ratio;
    const Rational& base = family.base_ratio;
    family.resolution = options.resolution;

    SeparationCertificate ssc = certify_ssc(target, options.ssc_depth);
    if (ssc.kind != SeparationKind::SSC) violated("target has no strong separation certificate (kappa > 0)");
    family.kappa = ssc.gap;

    Interval source_hull = attractor_hull(source);
    Interval target_hull = attractor_hull(target);
    family.c = abs(gamma) * source_hull.diameter();
    if (family.c == 0) violated("source attractor is a single point");

    // Smallest p with base^p < kappa / c, then smallest N with small^N < base^p
    // (equivalently N log(small)/log(base) > p).
    Rational bound = family.kappa / family.c;
    Rational base_p = 1;
    family.p = 0;
    while (!(base_p < bound)) {
        base_p *= base;
        ++family.p;
    }
    Rational small_n = 1;
    family.N = 0;
    while (!(small_n < base_p)) {
        small_n *= small;
        ++family.N;
    }

    family.scale_bracket = ordered(gamma * base_p * base, gamma * base_p);
    const Rational& eta_lo = family.scale_bracket.lo;
    const Rational& eta_hi = family.scale_bracket.hi;
    // eta F + t inside E forces min E <= eta f + t <= max E for every f in F.
    std::vector<Rational> products{eta_lo * source_hull.lo, eta_lo * source_hull.hi, eta_hi * source_hull.lo,
                                   eta_hi * source_hull.hi};
    auto [low, high] = std::minmax_element(products.begin(), products.end());
    family.t_bounds = {target_hull.lo - *high, target_hull.hi - *low};

    EmbeddingChecker checker(target, options.resolution);
    const long double rho = log(small) / log(base);

    Rational small_pow = pow(small, family.N);
    for (long n = family.N + 1; n <= n_max; ++n) {
        small_pow *= small;
        RenormalizationEntry entry;
        entry.n = n;

        // l_n = max{l : base^l >= small^n}, seeded from floating point and settled exactly.
        long l = static_cast<long>(std::floor(rho * static_cast<long double>(n)));
        Rational base_l = pow(base, l);
        while (base_l * base >= small_pow) {
            base_l *= base;
            ++l;
        }
        while (base_l < small_pow) {
            base_l /= base;
            --l;
        }
        entry.l_n = l;
        entry.depth = l - family.p;
        Rational residue = small_pow / base_l;  // base^{frac}, in (base, 1]
        entry.frac = residue == 1 ? 0.0 : static_cast<double>(log(residue) / log(base));

        Similarity piece = power(n);
        Interval image = apply(piece, source_hull);
        auto [word, psi] = unique_cylinder(target, target_hull, entry.depth, image, options.resolution);
        Similarity pulled = compose(invert(psi), piece);
        entry.word = std::move(word);
        entry.scale = pulled.ratio;
        entry.translation = pulled.translation;
        entry.in_bracket = family.scale_bracket.contains(entry.scale);
        entry.in_t_bounds = family.t_bounds.contains(entry.translation);
        entry.verified = checker.check(pulled, source).status == VerdictStatus::Consistent;
        bool ok = entry.verified;
        family.entries.push_back(std::move(entry));
        if (!ok) {
            family.stopped_early = true;
            break;
        }
    }
    return family;
}

}  // namespace

RenormalizationFamily renormalize_family(const Similarity& g, const Ifs& source, const Ifs& target, std::size_t map_index,
                                         long n_max, const RenormalizationOptions& options) {
    if (options.resolution <= 0) fail(ErrorKind::InvalidParameter, "resolution must be positive");
    if (map_index >= source.size()) fail(ErrorKind::InvalidWord, "map index " + std::to_string(map_index + 1) + " out of range");
    if (g.ratio == 0) fail(ErrorKind::InvalidParameter, "embedding ratio must be nonzero");
    if (!target.homogeneous()) violated("target IFS is not homogeneous");
    if (verify_embedding(g, source, target, options.resolution).status != VerdictStatus::Consistent) {
        violated("g(F) inside E is rejected at resolution " + to_string(options.resolution));
    }

    RenormalizationFamily family;
    family.source = g;
    family.map_index = map_index;
    family.small_ratio = source.map(map_index).ratio;
    family.base_ratio = target.map(0).ratio;
    const Similarity& phi = source.map(map_index);
    return build_family(std::move(family), g.ratio, source, target, n_max, options, [&](long n) {
        Similarity phi_n = Similarity::identity();
        for (long k = 0; k < n; ++k) phi_n = compose(phi_n, phi);
        return compose(g, phi_n);
    });
}

RenormalizationFamily self_embedding_family(const Similarity& g, const Ifs& ifs, long n_max, const RenormalizationOptions& options) {
    if (options.resolution <= 0) fail(ErrorKind::InvalidParameter, "resolution must be positive");
    if (g.ratio == 0) fail(ErrorKind::InvalidParameter, "embedding ratio must be nonzero");
    if (!ifs.homogeneous()) violated("IFS is not homogeneous");
    Similarity h = g.ratio < 0 ? compose(g, g) : g;
    if (!(h.ratio < 1)) violated("self-embedding ratio must satisfy |gamma| < 1");
    if (verify_embedding(h, ifs, ifs, options.resolution).status != VerdictStatus::Consistent) {
        violated("g(F) inside F is rejected at resolution " + to_string(options.resolution));
    }

    RenormalizationFamily family;
    family.source = h;
    family.small_ratio = h.ratio;
    family.base_ratio = ifs.map(0).ratio;
    return build_family(std::move(family), h.ratio, ifs, ifs, n_max, options, [&](long n) {
        Similarity h_n = h;
        for (long k = 0; k < n; ++k) h_n = compose(h_n, h);
        return h_n;
    });
}

ParamMeasure family_measure(const RenormalizationFamily& family, std::size_t scale_cells, std::size_t trans_cells) {
    std::set<std::pair<Rational, Rational>> distinct;
    for (const auto& e : family.entries) {
        if (e.verified) distinct.emplace(e.scale, e.translation);
    }
    if (distinct.empty()) fail(ErrorKind::InvalidParameter, "family has no verified entries");
    if (scale_cells == 0 || trans_cells == 0) fail(ErrorKind::InvalidParameter, "grid must be nonempty");

    std::vector<std::pair<double, double>> points;
    for (const auto& [a, t] : distinct) points.emplace_back(static_cast<double>(to_long_double(a)), static_cast<double>(to_long_double(t)));
    Range scale{points.front().first, points.front().first};
    Range trans{points.front().second, points.front().second};
    for (const auto& [a, t] : points) {
        scale = {std::min(scale.lo, a), std::max(scale.hi, a)};
        trans = {std::min(trans.lo, t), std::max(trans.hi, t)};
    }
    if (scale.hi == scale.lo) scale_cells = 1;
    if (trans.hi == trans.lo) trans_cells = 1;
    auto bin = [](double v, const Range& r, std::size_t cells) -> std::size_t {
        if (cells == 1) return 0;
        auto k = static_cast<std::size_t>((v - r.lo) / (r.hi - r.lo) * static_cast<double>(cells));
        return std::min(k, cells - 1);
    };
    std::vector<double> masses(scale_cells * trans_cells, 0.0);
    double w = 1.0 / static_cast<double>(points.size());
    for (const auto& [a, t] : points) masses[bin(a, scale, scale_cells) * trans_cells + bin(t, trans, trans_cells)] += w;
    return ParamMeasure(scale, trans, scale_cells, trans_cells, std::move(masses));
}

namespace {

constexpr long double kOrbitTolerance = 1e-10L;

template <typename T>
std::size_t count_distinct(std::vector<T> values, T tolerance) {
    std::sort(values.begin(), values.end());
    std::size_t distinct = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k == 0 || values[k] - values[k - 1] > tolerance) ++distinct;
    }
    return distinct;
}

}  // namespace

CoverageReport fractional_orbit(long double x, std::size_t count) {
    if (count == 0) fail(ErrorKind::InvalidParameter, "orbit length must be at least 1");
    CoverageReport report;
    report.count = count;
    for (std::size_t n = 1; n <= count; ++n) {
        long double v = static_cast<long double>(n) * x;
        long double f = v - std::floor(v);
        if (f >= 1.0L - kOrbitTolerance) f = 0.0L;  // wrap values that are 1 up to rounding
        report.parts.push_back(f);
    }
    std::sort(report.parts.begin(), report.parts.end());
    std::vector<long double> gaps;
    for (std::size_t k = 0; k + 1 < count; ++k) gaps.push_back(report.parts[k + 1] - report.parts[k]);
    gaps.push_back(1.0L + report.parts.front() - report.parts.back());
    for (auto& g : gaps) {
        if (g < kOrbitTolerance) g = 0;
    }
    report.distinct_values = count_distinct(report.parts, kOrbitTolerance);
    report.max_gap = static_cast<double>(*std::max_element(gaps.begin(), gaps.end()));
    report.distinct_gap_lengths = count_distinct(gaps, kOrbitTolerance);
    return report;
}

CoverageReport fractional_orbit(const Rational& x, std::size_t count) {
    if (count == 0) fail(ErrorKind::InvalidParameter, "orbit length must be at least 1");
    std::vector<Rational> parts;
    for (std::size_t n = 1; n <= count; ++n) {
        Rational v = x * static_cast<unsigned long>(n);
        parts.push_back(v - Rational(floor(v)));
    }
    std::sort(parts.begin(), parts.end());
    std::vector<Rational> gaps;
    for (std::size_t k = 0; k + 1 < count; ++k) gaps.push_back(parts[k + 1] - parts[k]);
    gaps.push_back(1 + parts.front() - parts.back());

    CoverageReport report;
    report.count = count;
    for (const auto& p : parts) report.parts.push_back(to_long_double(p));
    report.distinct_values = count_distinct(parts, Rational(0));
    report.max_gap = static_cast<double>(to_long_double(*std::max_element(gaps.begin(), gaps.end())));
    report.distinct_gap_lengths = count_distinct(gaps, Rational(0));
    return report;
}

}  // namespace ifslab
