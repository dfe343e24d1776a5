#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ifslab/measures.hpp"
#include "ifslab/rational.hpp"
#include "ifslab/similarity.hpp"

namespace ifslab {

enum class VerdictStatus { Consistent, Rejected };

std::string to_string(VerdictStatus status);

/// Outcome of testing g(F) against a cover of E. Rejected is a proof that
/// g(F) is not inside E; Consistent only holds at the stated resolution.
struct EmbeddingVerdict {
    VerdictStatus status = VerdictStatus::Consistent;
    Rational resolution;
    std::optional<Word> witness_word;       // lexicographically first rejected cylinder of F
    std::optional<Interval> witness_image;  // its image under g
    std::size_t checked = 0;                // F-cover cylinders tested
    std::size_t rejected = 0;               // of which certified disjoint from E's cover
};

/// Holds a resolution-delta cover of a target attractor E for repeated queries.
class EmbeddingChecker {
public:
    EmbeddingChecker(const Ifs& target, Rational resolution);

    const Rational& resolution() const { return resolution_; }

    /// True when x meets some interval of the cover.
    bool hits(const Interval& x) const;

    EmbeddingVerdict check(const Similarity& g, const Ifs& source) const;

private:
    Rational resolution_;
    std::vector<Interval> cover_;  // sorted by lo
    std::vector<Rational> reach_;  // reach_[k] = max hi over cover_[0..k]
};

EmbeddingVerdict verify_embedding(const Similarity& g, const Ifs& source, const Ifs& target, const Rational& resolution);

struct RenormalizationEntry {
    long n = 0;
    long l_n = 0;               // floor(n log(small) / log(base))
    long depth = 0;             // l_n - p, length of the located cylinder word
    double frac = 0;            // fractional part of n log(small) / log(base)
    Rational scale;             // eta_n, exact
    Rational translation;       // t_n, exact
    Word word;                  // the unique target cylinder met by the image
    bool in_bracket = false;    // eta_n lies in the scale bracket
    bool in_t_bounds = false;   // t_n lies in the translation bounds
    bool verified = false;      // (eta_n, t_n) re-verifies at the family's resolution
};

/// The induced embeddings eta_n F + t_n produced from one embedding g by
/// renormalising along the orbit of a single map.
struct RenormalizationFamily {
    Similarity source;         // the embedding actually used (squared when required)
    std::size_t map_index = 0; // zero-based index of the map followed in F (renormalize_family only)
    Rational small_ratio;      // alpha for F -> E, |gamma| for self-embeddings
    Rational base_ratio;       // beta for F -> E, alpha for self-embeddings
    Rational kappa;            // certified lower bound of the first-level gap of the target
    Rational c;                // |gamma| * diam(F)
    long p = 0;
    long N = 0;
    Interval scale_bracket;    // [base^(p+1) gamma, base^p gamma], endpoints ordered
    Interval t_bounds;
    Rational resolution;
    bool stopped_early = false;  // the last entry failed re-verification
    std::vector<RenormalizationEntry> entries;
};

struct RenormalizationOptions {
    Rational resolution = pow2(-16);  // delta_0
    std::size_t ssc_depth = 4;
};

/// Turns an embedding g(F) inside E (E homogeneous with SSC) into the family
/// (eta_n, t_n), n in (N, n_max], following map `map_index` of F.
RenormalizationFamily renormalize_family(const Similarity& g, const Ifs& source, const Ifs& target, std::size_t map_index,
                                         long n_max, const RenormalizationOptions& options = {});

/// Same pipeline for a self-embedding g(F) inside F, F homogeneous with SSC.
/// Negative ratios are replaced by g o g.
RenormalizationFamily self_embedding_family(const Similarity& g, const Ifs& ifs, long n_max,
                                            const RenormalizationOptions& options = {});

/// Uniform measure on the distinct emitted (eta_n, t_n), binned on a grid
/// spanning their bounding box.
ParamMeasure family_measure(const RenormalizationFamily& family, std::size_t scale_cells, std::size_t trans_cells);

struct CoverageReport {
    std::size_t count = 0;
    std::vector<long double> parts;  // sorted {n x} for n = 1..count
    std::size_t distinct_values = 0;
    double max_gap = 0;              // largest circular gap between consecutive points
    std::size_t distinct_gap_lengths = 0;  // over all `count` circular gaps, zero-length ones included
};

/// Orbit {n x mod 1}; points and gap lengths closer than 1e-10 count as equal.
CoverageReport fractional_orbit(long double x, std::size_t count);

/// Exact orbit for rational x.
CoverageReport fractional_orbit(const Rational& x, std::size_t count);

}  // namespace ifslab
