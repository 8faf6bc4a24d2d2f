#ifndef SEQLAB_OPERATOR_CHECKS_HPP
#define SEQLAB_OPERATOR_CHECKS_HPP

#include <string>
#include <vector>

#include "seqlab/sequence.hpp"

namespace seqlab {

// Sampled, finite-scale property checks for the conditions qualifying an
// operator H for invariant-limit constructions:
//   (i)   H >= 0 and H1 = 1,
//   (ii)  H maps null sequences to null sequences,
//   (iii) a quantitative lower bound on window maxima of H(I-T)y.
// These are property tests with explicit horizons, not proofs; a failed
// check is a report, never an exception.

struct CheckWitness {
  std::size_t sample;  // index into the sample list; ~0 for the ones check
  Index k;
  Rational value;
};

struct PositiveUnitalReport {
  bool pass = true;
  std::vector<CheckWitness> positivity_failures;
  std::vector<CheckWitness> unitality_failures;
};

/// Verifies (H s)_k >= 0 for every sample s and k <= horizon, and
/// (H 1)_k = 1 exactly for k <= horizon. Samples must be nonnegative on the
/// horizon (std::invalid_argument otherwise).
PositiveUnitalReport check_positive_unital(const OpPtr& op,
                                           const std::vector<SeqPtr>& samples,
                                           const Index& horizon);

struct NullPreservationReport {
  bool pass = true;
  Rational tail_max;      // max |(H s)_k| over the top decade of the horizon
  Index tail_argmax;      // a k attaining it
  std::size_t worst_sample = 0;
  Rational tol;
};

/// Checks |(H s)_k| <= tol for k in [horizon/10, horizon]. The caller is
/// responsible for the samples being null sequences; see null_sample_family.
NullPreservationReport check_c0(const OpPtr& op,
                                const std::vector<SeqPtr>& null_samples,
                                const Index& horizon, const Rational& tol);

// The stock null sequences used by the finite c_0 checks, truncated at
// `horizon` (each is an explicit prefix with constant-zero tail, hence an
// exact member of c_0):
//   harmonic      1/k
//   log_decay     1/bitlength(k+1), a rationalized 1/log2(k+1)
//   geometric     2^-k
SeqPtr null_sample_harmonic(std::size_t horizon);
SeqPtr null_sample_log_decay(std::size_t horizon);
SeqPtr null_sample_geometric(std::size_t horizon);

struct WindowFailure {
  std::size_t sample;
  Index window_start;
  Rational window_max;
  Rational threshold;
};

struct ConditionThreeReport {
  bool pass = true;
  Integer max_dilation;  // the m with A in conv{sigma_n : n <= m}
  std::vector<WindowFailure> failures;
  std::size_t windows_checked = 0;
};

/// Finite form of the limsup condition: for s = (I-T)y and every checked
/// window of length r = block_len starting at k <= horizon,
///   max_{k < i <= k+r} (A s)_i >= -2*m*bound(y)/r.
/// A must simplify to a convex combination of dilations
/// (UnsupportedOperatorError otherwise). Exact arithmetic throughout.
ConditionThreeReport check_condition_iii(const OpPtr& op,
                                         const std::vector<SeqPtr>& samples,
                                         const Index& horizon,
                                         std::size_t block_len);

}  // namespace seqlab

#endif  // SEQLAB_OPERATOR_CHECKS_HPP
