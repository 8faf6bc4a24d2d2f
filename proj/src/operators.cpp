#include "seqlab/operators.hpp"

#include <stdexcept>

namespace seqlab {

OpPtr OperatorExpr::shift(Integer power) {
  if (power < 0) throw std::invalid_argument("shift: power must be >= 0");
  return std::make_shared<const OperatorExpr>(ShiftNode{std::move(power)});
}

OpPtr OperatorExpr::diff() {
  return std::make_shared<const OperatorExpr>(DiffNode{});
}

OpPtr OperatorExpr::cesaro() {
  return std::make_shared<const OperatorExpr>(CesaroNode{});
}

OpPtr OperatorExpr::dilation(Integer factor) {
  if (factor < 1) throw std::invalid_argument("dilation: factor must be >= 1");
  return std::make_shared<const OperatorExpr>(DilationNode{std::move(factor)});
}

OpPtr OperatorExpr::convex(std::vector<ConvexTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("convex: no terms");
  Rational total = 0;
  for (const auto& t : terms) {
    if (!t.op) throw std::invalid_argument("convex: null operator");
    if (t.weight <= 0) {
      throw std::invalid_argument("convex: weights must be strictly positive");
    }
    total += t.weight;
  }
  if (total != 1) {
    throw std::invalid_argument("convex: weights must sum exactly to 1, got " +
                                to_string(total));
  }
  return std::make_shared<const OperatorExpr>(ConvexNode{std::move(terms)});
}

OpPtr OperatorExpr::compose(std::vector<OpPtr> ops) {
  if (ops.empty()) throw std::invalid_argument("compose: empty composition");
  for (const auto& op : ops) {
    if (!op) throw std::invalid_argument("compose: null operator");
  }
  return std::make_shared<const OperatorExpr>(ComposeNode{std::move(ops)});
}

bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) return false;
  return std::visit(
      [&nb](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(nb);
        if constexpr (std::is_same_v<T, ShiftNode>) {
          return lhs.power == rhs.power;
        } else if constexpr (std::is_same_v<T, DiffNode> ||
                             std::is_same_v<T, CesaroNode>) {
          return true;
        } else if constexpr (std::is_same_v<T, DilationNode>) {
          return lhs.factor == rhs.factor;
        } else if constexpr (std::is_same_v<T, ConvexNode>) {
          if (lhs.terms.size() != rhs.terms.size()) return false;
          for (std::size_t i = 0; i < lhs.terms.size(); ++i) {
            if (lhs.terms[i].weight != rhs.terms[i].weight) return false;
            if (!(*lhs.terms[i].op == *rhs.terms[i].op)) return false;
          }
          return true;
        } else {
          const auto& lops = lhs.ops;
          const auto& rops = std::get<ComposeNode>(nb).ops;
          if (lops.size() != rops.size()) return false;
          for (std::size_t i = 0; i < lops.size(); ++i) {
            if (!(*lops[i] == *rops[i])) return false;
          }
          return true;
        }
      },
      na);
}

bool is_identity(const OperatorExpr& op) {
  if (const auto* s = std::get_if<ShiftNode>(&op.node())) return s->power == 0;
  if (const auto* d = std::get_if<DilationNode>(&op.node())) {
    return d->factor == 1;
  }
  return false;
}

namespace {

// Fuses runs of like operators in an already-flattened composition list.
std::vector<OpPtr> fuse_composition(const std::vector<OpPtr>& ops) {
  std::vector<OpPtr> out;
  for (const auto& op : ops) {
    if (is_identity(*op)) continue;
    if (!out.empty()) {
      const auto* prev_dil = std::get_if<DilationNode>(&out.back()->node());
      const auto* cur_dil = std::get_if<DilationNode>(&op->node());
      if (prev_dil && cur_dil) {
        Integer fused = prev_dil->factor * cur_dil->factor;
        out.back() = OperatorExpr::dilation(std::move(fused));
        continue;
      }
      const auto* prev_shift = std::get_if<ShiftNode>(&out.back()->node());
      const auto* cur_shift = std::get_if<ShiftNode>(&op->node());
      if (prev_shift && cur_shift) {
        Integer fused = prev_shift->power + cur_shift->power;
        out.back() = OperatorExpr::shift(std::move(fused));
        continue;
      }
    }
    out.push_back(op);
  }
  return out;
}

}  // namespace

OpPtr simplify(const OpPtr& op) {
  if (!op) throw std::invalid_argument("simplify: null operator");
  const auto& node = op->node();

  if (const auto* comp = std::get_if<ComposeNode>(&node)) {
    std::vector<OpPtr> flat;
    for (const auto& child : comp->ops) {
      OpPtr s = simplify(child);
      if (const auto* inner = std::get_if<ComposeNode>(&s->node())) {
        flat.insert(flat.end(), inner->ops.begin(), inner->ops.end());
      } else {
        flat.push_back(std::move(s));
      }
    }
    std::vector<OpPtr> fused = fuse_composition(flat);
    if (fused.empty()) return OperatorExpr::identity();
    if (fused.size() == 1) return fused.front();
    return OperatorExpr::compose(std::move(fused));
  }

  if (const auto* cvx = std::get_if<ConvexNode>(&node)) {
    std::vector<ConvexTerm> flat;
    for (const auto& term : cvx->terms) {
      OpPtr s = simplify(term.op);
      if (const auto* inner = std::get_if<ConvexNode>(&s->node())) {
        for (const auto& it : inner->terms) {
          flat.push_back(ConvexTerm{term.weight * it.weight, it.op});
        }
      } else {
        flat.push_back(ConvexTerm{term.weight, std::move(s)});
      }
    }
    // Combine structurally equal terms.
    std::vector<ConvexTerm> merged;
    for (auto& term : flat) {
      bool found = false;
      for (auto& m : merged) {
        if (*m.op == *term.op) {
          m.weight += term.weight;
          found = true;
          break;
        }
      }
      if (!found) merged.push_back(std::move(term));
    }
    if (merged.size() == 1) return merged.front().op;
    return OperatorExpr::convex(std::move(merged));
  }

  return op;
}

std::optional<std::vector<std::pair<Rational, Integer>>> as_dilation_combo(
    const OpPtr& op) {
  const OpPtr s = simplify(op);
  const auto& node = s->node();
  if (const auto* dil = std::get_if<DilationNode>(&node)) {
    return std::vector<std::pair<Rational, Integer>>{{Rational(1), dil->factor}};
  }
  if (is_identity(*s)) {
    return std::vector<std::pair<Rational, Integer>>{{Rational(1), Integer(1)}};
  }
  if (const auto* cvx = std::get_if<ConvexNode>(&node)) {
    std::vector<std::pair<Rational, Integer>> out;
    for (const auto& term : cvx->terms) {
      if (const auto* dil = std::get_if<DilationNode>(&term.op->node())) {
        out.emplace_back(term.weight, dil->factor);
      } else if (is_identity(*term.op)) {
        out.emplace_back(term.weight, Integer(1));
      } else {
        return std::nullopt;
      }
    }
    return out;
  }
  return std::nullopt;
}

}  // namespace seqlab
