#ifndef SEQLAB_SEQUENCE_HPP
#define SEQLAB_SEQUENCE_HPP

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "seqlab/numeric.hpp"
#include "seqlab/operators.hpp"

namespace seqlab {

// Half-open integer interval [lo, hi), nonempty (lo < hi).
struct IntInterval {
  Index lo;
  Index hi;

  Integer length() const { return hi - lo; }
  bool contains(const Index& k) const { return lo <= k && k < hi; }
};

bool operator==(const IntInterval& a, const IntInterval& b);

/// Sorts by lo and merges overlapping or adjacent intervals; drops empty
/// ones. The result is the canonical form required by IndicatorUnion.
std::vector<IntInterval> normalize_intervals(std::vector<IntInterval> raw);

enum class TailKind { constant, periodic };

// Finite description of the behavior past the explicit prefix: either a
// constant or a periodic repetition of a nonempty value list.
struct TailSpec {
  TailKind kind;
  std::vector<Rational> values;  // length 1 for constant

  static TailSpec constant(Rational c);
  static TailSpec periodic(std::vector<Rational> values);
};

class SequenceExpr;
using SeqPtr = std::shared_ptr<const SequenceExpr>;

// -- Node kinds ---------------------------------------------------------

// Explicit prefix followed by a constant or periodic tail.
struct PrefixTailNode {
  std::vector<Rational> prefix;
  TailSpec tail;
  // Cumulative sums, built once at construction so prefix_sum is O(1) and
  // concurrent reads need no synchronization. Prefix cums are stored as
  // integer numerators over one common denominator: building them needs only
  // small-gcd lcm updates, and the full-size gcd happens once per query
  // instead of once per element (long prefixes of fractions like 1/k would
  // otherwise spend seconds normalizing lcm-sized intermediates).
  std::vector<Integer> prefix_cum_num;
  Integer prefix_cum_den = 1;
  std::vector<Rational> period_cum;
  Rational period_sum;
};

// 0/1 indicator of a finite union of disjoint sorted intervals.
struct IndicatorNode {
  std::vector<IntInterval> intervals;
  std::vector<Integer> cum_len;  // cumulative interval lengths
};

// Indicator of the infinite union of blocks [ceil(a*r^k), ceil(b*r^k)) for
// k >= start_exp. Blocks are pairwise disjoint; the constructor enforces
// b <= a*ratio, which is equivalent to disjointness at every level.
struct GeometricNode {
  Rational a;
  Rational b;
  Integer ratio;      // >= 2
  unsigned long start_exp;
};

// Lazy operator application.
struct AppliedNode {
  OpPtr op;
  SeqPtr arg;
};

enum class PointwiseKind { add, sub, mul, scale, affine };

// Pointwise arithmetic. `scale` is c*x, `affine` is c*x + d; both take one
// argument. `sub` takes exactly two; `add` and `mul` take one or more.
struct PointwiseNode {
  PointwiseKind kind;
  Rational c;
  Rational d;
  std::vector<SeqPtr> args;
};

// -- Expression ---------------------------------------------------------

// Algebraic description of a bounded real sequence indexed from 1. Values
// are immutable after construction and every operation on them is pure, so
// a SequenceExpr may be evaluated from many threads at once.
class SequenceExpr {
 public:
  using Node = std::variant<PrefixTailNode, IndicatorNode, GeometricNode,
                            AppliedNode, PointwiseNode>;

  const Node& node() const { return node_; }

  // Factories. Each validates its invariants and throws
  // std::invalid_argument on violation.
  static SeqPtr prefix_tail(std::vector<Rational> prefix, TailSpec tail);
  static SeqPtr indicator(std::vector<IntInterval> intervals);
  static SeqPtr geometric_indicator(Rational a, Rational b, Integer ratio,
                                    unsigned long start_exp);
  static SeqPtr applied(OpPtr op, SeqPtr arg);
  static SeqPtr add(std::vector<SeqPtr> args);
  static SeqPtr sub(SeqPtr lhs, SeqPtr rhs);
  static SeqPtr mul(std::vector<SeqPtr> args);
  static SeqPtr scale(Rational c, SeqPtr arg);
  static SeqPtr affine(Rational c, Rational d, SeqPtr arg);

  // Common constants.
  static SeqPtr ones();
  static SeqPtr zeros();
  static SeqPtr constant(Rational c);

  explicit SequenceExpr(Node node) : node_(std::move(node)) {}

 private:
  Node node_;
};

/// Lazy operator application; returns the Applied node.
SeqPtr apply(OpPtr op, SeqPtr seq);

// -- Operations ---------------------------------------------------------

/// x_k, exactly. Requires k >= 1.
Rational eval(const SequenceExpr& seq, const Index& k);

/// sum_{i=1..k} x_i, exactly; 0 for k = 0. Indicator kinds are computed by
/// interval-measure arithmetic (logarithmic in the number of blocks at or
/// below k), never by element iteration.
Rational prefix_sum(const SequenceExpr& seq, const Index& k);

// An exact but not necessarily reduced fraction, den > 0. Bulk scans over
// sequences with long fraction prefixes (running averages of 1/k and the
// like) use these to defer the expensive reduction to one final step.
struct ExactFraction {
  Integer num;
  Integer den;
};

/// prefix_sum without the final normalization. Same value, unreduced.
ExactFraction prefix_sum_fraction(const SequenceExpr& seq, const Index& k);

// Interval enclosing every value of the sequence. Exact (both endpoints
// attained) for the three primitive kinds; a sound over-approximation
// propagated through operator and arithmetic nodes otherwise.
struct ValueRange {
  Rational lo;
  Rational hi;
};

ValueRange value_range(const SequenceExpr& seq);

/// Upper bound for sup_k |x_k|; exact for PrefixTail, IndicatorUnion and
/// GeometricIndicator.
Rational bound(const SequenceExpr& seq);

inline constexpr unsigned long long kDefaultHorizonCap = 100'000'000ULL;

// Process-wide materialization guard, default kDefaultHorizonCap. The CLI
// maps SEQLAB_HORIZON_CAP onto it at startup.
unsigned long long horizon_cap();
void set_horizon_cap(unsigned long long cap);

/// [x_1, ..., x_horizon]. Throws GuardError when horizon exceeds the cap.
std::vector<Rational> materialize(const SequenceExpr& seq,
                                  const Index& horizon);

struct MatchReport {
  bool equal;
  // First mismatch, meaningful when !equal.
  Index index;
  Rational lhs;
  Rational rhs;
};

/// Exact pointwise comparison on [1, horizon]; reports the smallest
/// mismatching index.
MatchReport pointwise_check_equal(const SequenceExpr& a,
                                  const SequenceExpr& b,
                                  const Index& horizon);

}  // namespace seqlab

#endif  // SEQLAB_SEQUENCE_HPP
