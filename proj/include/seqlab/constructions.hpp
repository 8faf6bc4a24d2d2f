#ifndef SEQLAB_CONSTRUCTIONS_HPP
#define SEQLAB_CONSTRUCTIONS_HPP

#include <vector>

#include "seqlab/sequence.hpp"

namespace seqlab {

// Generators for the explicit sequences and index sets used by the claim
// checks, with their combinatorial size bounds available as checkable
// postconditions.

/// (1, 0, 1, 0, ...).
SeqPtr alternating();

/// Indicator of the multiples of j: 0 except at j, 2j, 3j, ...
SeqPtr char_multiples(unsigned long j);

/// Indicator of the union of blocks [4^k, 2*4^k), k >= 0, as a lazily
/// evaluated infinite object. Runs and gaps both grow without bound, so the
/// sequence is not almost convergent while its running averages oscillate
/// between 1/3 and 2/3.
SeqPtr geometric_blocks();

/// The first `block_count` blocks of geometric_blocks() as an explicit
/// indicator union, for oracle tests.
SeqPtr geometric_blocks_truncation(unsigned long block_count);

// Depth guard: level n lives just below 2^{2^n}, so endpoint bit-length is
// 2^n. Constructions refuse n beyond this unless the caller opts in.
inline constexpr unsigned long kDefaultDepthGuard = 6;
inline constexpr unsigned long kHardDepthLimit = 24;

/// J(n) = [2^{2^n} - n, 2^{2^n}), the length-n window where the level-n
/// witness forces dilated values to 1. Requires 1 <= n <= kHardDepthLimit.
IntInterval j_set(unsigned long n);

/// The minimal set whose k-dilation covers J(n): { ceil(m/k) : m in J(n) }.
/// Minimality is forced by the dilation semantics, since (sigma_k chi_S)_m
/// depends on ceil(m/k) alone. Requires 1 <= k <= n.
std::vector<Index> j_nk(unsigned long n, unsigned long k);

/// I(n) = union of j_nk(n, k) over k = 1..n, as sorted disjoint intervals.
std::vector<IntInterval> i_set(unsigned long n);

/// Indicator of I(1) + ... + I(n_max). Levels are strictly separated
/// (max I(n) <= 2^{2^n} < min I(n+1)), which is verified at construction.
/// Truncation is harmless below index 2^{2^n_max}: higher levels live
/// strictly above it. Depths beyond kDefaultDepthGuard need allow_deep.
SeqPtr witness_sequence(unsigned long n_max, bool allow_deep = false);

/// (I - T) y, the generator of the difference space: window sums of the
/// result telescope to y_{k+r} - y_k.
SeqPtr diff_shift(SeqPtr y);

}  // namespace seqlab

#endif  // SEQLAB_CONSTRUCTIONS_HPP
