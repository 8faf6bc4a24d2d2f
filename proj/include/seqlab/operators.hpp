#ifndef SEQLAB_OPERATORS_HPP
#define SEQLAB_OPERATORS_HPP

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "seqlab/numeric.hpp"

namespace seqlab {

class OperatorExpr;
using OpPtr = std::shared_ptr<const OperatorExpr>;

// The operator algebra on bounded sequences:
//   Shift(p)      T^p, with (Tx) = (0, x_1, x_2, ...)
//   DiffIT        I - T, so ((I-T)x)_k = x_k - x_{k-1} with x_0 := 0
//   Cesaro        (Cx)_n = (1/n) * sum_{k=1..n} x_k
//   Dilation(m)   (sigma_m x)_k = x_{ceil(k/m)}, each term repeated m times
//   ConvexCombo   sum of weight_i * op_i with positive weights summing to 1
//   Compose       right-to-left composition: Compose([A,B]) x = A(B x)
struct ShiftNode {
  Integer power;  // >= 0; Shift(0) is the identity
};
struct DiffNode {};
struct CesaroNode {};
struct DilationNode {
  Integer factor;  // >= 1; Dilation(1) is the identity
};
struct ConvexTerm {
  Rational weight;
  OpPtr op;
};
struct ConvexNode {
  std::vector<ConvexTerm> terms;
};
struct ComposeNode {
  std::vector<OpPtr> ops;  // nonempty, applied right to left
};

class OperatorExpr {
 public:
  using Node =
      std::variant<ShiftNode, DiffNode, CesaroNode, DilationNode, ConvexNode,
                   ComposeNode>;

  explicit OperatorExpr(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  // Factories validate the structural invariants (weights positive and
  // summing exactly to 1, dilation factor >= 1, nonempty composition) and
  // throw std::invalid_argument on violation.
  static OpPtr shift(Integer power);
  static OpPtr diff();
  static OpPtr cesaro();
  static OpPtr dilation(Integer factor);
  static OpPtr convex(std::vector<ConvexTerm> terms);
  static OpPtr compose(std::vector<OpPtr> ops);

  static OpPtr identity() { return shift(0); }

 private:
  Node node_;
};

/// Structural equality.
bool operator==(const OperatorExpr& a, const OperatorExpr& b);

/// True for the operators that act as the identity: Shift(0) and Dilation(1).
bool is_identity(const OperatorExpr& op);

// Algebraic normalization. Flattens nested compositions, drops identity
// factors, fuses adjacent dilations via sigma_a . sigma_b = sigma_{a*b} and
// adjacent shifts via T^a . T^b = T^{a+b}, merges nested convex combinations
// with exact weight products, combines duplicate convex terms, and collapses
// single-element wrappers. Pointwise semantics are preserved exactly.
OpPtr simplify(const OpPtr& op);

/// If `op` simplifies to a convex combination of dilations (a bare dilation
/// and the identity count as trivial cases), returns the (weight, factor)
/// terms. Otherwise nullopt. Used by the checks that are only defined for
/// that operator class.
std::optional<std::vector<std::pair<Rational, Integer>>> as_dilation_combo(
    const OpPtr& op);

}  // namespace seqlab

#endif  // SEQLAB_OPERATORS_HPP
