#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace ifslab::parallel {

/// Worker count used by the parallel kernels. Initialised from IFSLAB_THREADS
/// (falls back to hardware concurrency), overridable for tests.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Runs body(b) for every block index in [0, blocks). Blocks are claimed
/// dynamically; callers must write results into per-block slots so the final
/// reduction does not depend on which thread ran which block.
void for_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) sum with a fixed split pattern; the result depends only on
/// the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace ifslab::parallel
