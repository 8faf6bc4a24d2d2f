#ifndef SEQLAB_WINDOW_HPP
#define SEQLAB_WINDOW_HPP

#include <utility>
#include <vector>

#include "seqlab/sequence.hpp"

namespace seqlab {

// Exact analysis of window sums S_n(m) = sum_{k=m+1..m+n} x_k over all start
// positions m. Where the sequence has a finite description (prefix+tail,
// indicator union, and shift/affine images of those) the extrema over ALL
// m >= 0 are computed exactly by restricting to finitely many candidate
// starts; otherwise the scan is truncated at a horizon and flagged as such.

inline constexpr unsigned long long kDefaultScanHorizon = 1u << 17;

struct WindowStats {
  unsigned long n = 1;   // window length
  Rational sup_sum;      // extrema of S_n(m) over window starts m
  Rational inf_sum;
  Index sup_witness;     // an m attaining each extremum
  Index inf_witness;
  bool exact = false;    // true when extrema range over all m in N_0
  Index scan_horizon;    // meaningful when !exact
};

// Certified outer interval for the set of all invariant-limit values
// [q(x), p(x)]. Window-sum subadditivity gives p(x) <= sup-avg at every n and
// superadditivity gives q(x) >= inf-avg at every n, so when every per-n stat
// is exact the interval [q_lower, p_upper] is a sound enclosure that shrinks
// monotonically as n_used grows.
struct BoundsEnclosure {
  Rational q_lower;
  Rational p_upper;
  unsigned long n_used = 1;
  std::vector<WindowStats> per_n;
  bool exact = false;
  Rational gap_upper;  // p_upper - q_lower
};

enum class LorentzVerdictKind {
  almost_convergent,
  not_almost_convergent,
  inconclusive,
};

struct LorentzVerdict {
  LorentzVerdictKind kind = LorentzVerdictKind::inconclusive;
  Rational value;      // the common limit, for almost_convergent
  Rational gap_lower;  // certified lower bound on p-q, for not_almost_convergent
};

struct LorentzRow {
  unsigned long n;
  Rational sup_avg;  // sup_m S_n(m) / n
  Rational inf_avg;
  Rational gap;      // D(n) = sup_avg - inf_avg
  bool exact;
};

struct LorentzReport {
  std::vector<LorentzRow> table;  // geometric n-grid
  LorentzVerdict verdict;
  bool exact = false;  // true when the verdict is certified
  Rational tol;        // reporting threshold the caller asked about
  bool decayed_below_tol = false;  // D at the last grid row <= tol
};

struct ZetaValue {
  unsigned long n = 1;
  double value = 0.0;
  double truncation_bound = 0.0;
  unsigned long long terms_used = 0;
};

/// sum_{k=m+1..m+n} x_k exactly. Requires m >= 0, n >= 1.
Rational window_sum(const SeqPtr& seq, const Index& m, unsigned long n);

/// Extrema of the length-n window sum over starts m, exact when the sequence
/// admits the breakpoint/period method, else scan-limited to scan_horizon.
WindowStats window_extrema(const SeqPtr& seq, unsigned long n,
                           const Index& scan_horizon = kDefaultScanHorizon);

/// Fekete-style enclosure from window extrema at n = 1..n_max.
BoundsEnclosure sucheston_bounds(const SeqPtr& seq, unsigned long n_max,
                                 const Index& scan_horizon = kDefaultScanHorizon);

/// Uniform-convergence (almost convergence) analysis: gap table D(n) on a
/// geometric n-grid plus a certified verdict where the structure allows one.
LorentzReport lorentz_check(const SeqPtr& seq, unsigned long n_max,
                            const Rational& tol,
                            const Index& scan_horizon = kDefaultScanHorizon);

/// Exact running averages prefix_sum(x, j)/j at the requested indices.
std::vector<std::pair<Index, Rational>> cesaro_profile(
    const SeqPtr& seq, const std::vector<Index>& indices);

/// log(2)/n * sum_{k>=1} x_k 2^{-k/n}, truncated at K = ceil(n*log2(1/eps)) + n
/// terms. Runs of indicator sequences are summed by geometric closed forms.
/// The reported value is within truncation_bound of the untruncated sum.
ZetaValue zeta_transform(const SeqPtr& seq, unsigned long n, double eps);

struct WitnessResult {
  Rational max_value;
  Index witness;
};

/// max over j in [region.lo, region.hi) of (A(x + (I-T)y))_j, exactly, with
/// an attaining index. A must simplify to a convex combination of dilations.
WitnessResult dilation_witness_check(const SeqPtr& x, const OpPtr& a,
                                     const SeqPtr& y, const IntInterval& region);

}  // namespace seqlab

#endif  // SEQLAB_WINDOW_HPP
