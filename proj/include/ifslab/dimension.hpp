#pragma once

#include <cstddef>
#include <string>

#include "ifslab/rational.hpp"
#include "ifslab/similarity.hpp"

namespace ifslab {

/// Root s of sum_i r_i^s = 1, found by bisection to a bracket of width <= 1e-14.
double similarity_dimension(const Ifs& ifs);

enum class SeparationKind { SSC, OscHull, None };

std::string to_string(SeparationKind kind);

struct SeparationCertificate {
    SeparationKind kind = SeparationKind::None;
    Rational gap{0};        // certified lower bound on min_{i!=j} d(phi_i(F), phi_j(F)); SSC only
    std::size_t depth = 0;  // refinement depth the verdict was reached at
    std::string witness;
};

/// Lower-bounds every first-level distance d(phi_i(F), phi_j(F)) by the distance
/// between the depth-refined covers of the two pieces. `depth` counts levels
/// below the first; depth 0 compares the first-level hulls.
SeparationCertificate ssc_gap(const Ifs& ifs, std::size_t depth);

/// ssc_gap starting at `depth`, deepening while the verdict is None up to
/// `max_depth` or until a level would exceed `max_cylinders` intervals.
SeparationCertificate certify_ssc(const Ifs& ifs, std::size_t depth = 4, std::size_t max_depth = 12,
                                  std::size_t max_cylinders = std::size_t{1} << 20);

/// Open set condition with U = interior of the attractor hull. A None verdict
/// only means this particular witness fails.
SeparationCertificate check_osc_hull(const Ifs& ifs);

}  // namespace ifslab
