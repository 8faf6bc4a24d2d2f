#include "seqlab/sequence.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "seqlab/errors.hpp"

namespace seqlab {

bool operator==(const IntInterval& a, const IntInterval& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

std::vector<IntInterval> normalize_intervals(std::vector<IntInterval> raw) {
  for (const auto& iv : raw) {
    if (iv.lo >= iv.hi) {
      throw std::invalid_argument("interval must satisfy lo < hi, got [" +
                                  to_string(iv.lo) + ", " + to_string(iv.hi) +
                                  ")");
    }
    if (iv.lo < 1) {
      throw std::invalid_argument("interval lo must be >= 1, got " +
                                  to_string(iv.lo));
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const IntInterval& x, const IntInterval& y) {
              return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
            });
  std::vector<IntInterval> out;
  for (auto& iv : raw) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (iv.hi > out.back().hi) out.back().hi = iv.hi;
    } else {
      out.push_back(std::move(iv));
    }
  }
  return out;
}

TailSpec TailSpec::constant(Rational c) {
  return TailSpec{TailKind::constant, {std::move(c)}};
}

TailSpec TailSpec::periodic(std::vector<Rational> values) {
  if (values.empty()) {
    throw std::invalid_argument("periodic tail needs at least one value");
  }
  return TailSpec{TailKind::periodic, std::move(values)};
}

// -- Factories ----------------------------------------------------------

SeqPtr SequenceExpr::prefix_tail(std::vector<Rational> prefix, TailSpec tail) {
  if (tail.values.empty()) {
    throw std::invalid_argument("tail needs at least one value");
  }
  PrefixTailNode node{std::move(prefix), std::move(tail),
                      {},       Integer(1),      {},
                      Rational(0)};
  // common denominator of the prefix values; reduce mod the small factor
  // first, a direct gcd against the growing lcm works bit-by-bit
  for (const auto& v : node.prefix) {
    const Integer d = denominator(v);
    if (d == 1) continue;
    const Integer g = gcd(Integer(node.prefix_cum_den % d), d);
    node.prefix_cum_den *= d / g;
  }
  node.prefix_cum_num.reserve(node.prefix.size());
  Integer run_num = 0;
  for (const auto& v : node.prefix) {
    run_num += numerator(v) * (node.prefix_cum_den / denominator(v));
    node.prefix_cum_num.push_back(run_num);
  }
  Rational run = 0;
  node.period_cum.reserve(node.tail.values.size());
  for (const auto& v : node.tail.values) {
    run += v;
    node.period_cum.push_back(run);
  }
  node.period_sum = run;
  return std::make_shared<const SequenceExpr>(Node{std::move(node)});
}

SeqPtr SequenceExpr::indicator(std::vector<IntInterval> intervals) {
  IndicatorNode node{normalize_intervals(std::move(intervals)), {}};
  node.cum_len.reserve(node.intervals.size());
  Integer run = 0;
  for (const auto& iv : node.intervals) {
    run += iv.length();
    node.cum_len.push_back(run);
  }
  return std::make_shared<const SequenceExpr>(Node{std::move(node)});
}

SeqPtr SequenceExpr::geometric_indicator(Rational a, Rational b, Integer ratio,
                                         unsigned long start_exp) {
  if (a <= 0) throw std::invalid_argument("geometric indicator: a must be > 0");
  if (b < a) throw std::invalid_argument("geometric indicator: need a <= b");
  if (ratio < 2) {
    throw std::invalid_argument("geometric indicator: ratio must be >= 2");
  }
  // Disjointness of consecutive blocks at every level k reduces to
  // b <= a*ratio: if it holds, ceil(b*r^k) <= ceil(a*r^{k+1}) for all k by
  // monotonicity of ceil; if it fails, (b - a*r)*r^k eventually exceeds 1 and
  // some block overlaps the next.
  if (b > a * Rational(ratio)) {
    throw std::invalid_argument(
        "geometric indicator: blocks overlap (need b <= a*ratio)");
  }
  return std::make_shared<const SequenceExpr>(
      Node{GeometricNode{std::move(a), std::move(b), std::move(ratio),
                         start_exp}});
}

SeqPtr SequenceExpr::applied(OpPtr op, SeqPtr arg) {
  if (!op || !arg) throw std::invalid_argument("applied: null argument");
  return std::make_shared<const SequenceExpr>(
      Node{AppliedNode{std::move(op), std::move(arg)}});
}

namespace {

void require_args(const std::vector<SeqPtr>& args, std::size_t min_count) {
  if (args.size() < min_count) {
    throw std::invalid_argument("pointwise: too few arguments");
  }
  for (const auto& a : args) {
    if (!a) throw std::invalid_argument("pointwise: null argument");
  }
}

}  // namespace

SeqPtr SequenceExpr::add(std::vector<SeqPtr> args) {
  require_args(args, 1);
  return std::make_shared<const SequenceExpr>(Node{
      PointwiseNode{PointwiseKind::add, Rational(0), Rational(0),
                    std::move(args)}});
}

SeqPtr SequenceExpr::sub(SeqPtr lhs, SeqPtr rhs) {
  std::vector<SeqPtr> args{std::move(lhs), std::move(rhs)};
  require_args(args, 2);
  return std::make_shared<const SequenceExpr>(Node{
      PointwiseNode{PointwiseKind::sub, Rational(0), Rational(0),
                    std::move(args)}});
}

SeqPtr SequenceExpr::mul(std::vector<SeqPtr> args) {
  require_args(args, 1);
  return std::make_shared<const SequenceExpr>(Node{
      PointwiseNode{PointwiseKind::mul, Rational(0), Rational(0),
                    std::move(args)}});
}

SeqPtr SequenceExpr::scale(Rational c, SeqPtr arg) {
  std::vector<SeqPtr> args{std::move(arg)};
  require_args(args, 1);
  return std::make_shared<const SequenceExpr>(Node{
      PointwiseNode{PointwiseKind::scale, std::move(c), Rational(0),
                    std::move(args)}});
}

SeqPtr SequenceExpr::affine(Rational c, Rational d, SeqPtr arg) {
  std::vector<SeqPtr> args{std::move(arg)};
  require_args(args, 1);
  return std::make_shared<const SequenceExpr>(Node{
      PointwiseNode{PointwiseKind::affine, std::move(c), std::move(d),
                    std::move(args)}});
}

SeqPtr SequenceExpr::ones() { return constant(Rational(1)); }

SeqPtr SequenceExpr::zeros() { return constant(Rational(0)); }

SeqPtr SequenceExpr::constant(Rational c) {
  return prefix_tail({}, TailSpec::constant(std::move(c)));
}

SeqPtr apply(OpPtr op, SeqPtr seq) {
  return SequenceExpr::applied(std::move(op), std::move(seq));
}

// -- Geometric block walking ---------------------------------------------

namespace {

// Iterates the blocks [ceil(a*r^k), ceil(b*r^k)) in increasing order.
class BlockWalker {
 public:
  explicit BlockWalker(const GeometricNode& g)
      : a_(g.a), b_(g.b), ratio_(g.ratio), power_(1) {
    for (unsigned long i = 0; i < g.start_exp; ++i) power_ *= ratio_;
    advance_to_current();
  }

  const Integer& lo() const { return lo_; }
  const Integer& hi() const { return hi_; }

  void next() {
    power_ *= ratio_;
    advance_to_current();
  }

 private:
  void advance_to_current() {
    lo_ = ceil_rational(a_ * Rational(power_));
    hi_ = ceil_rational(b_ * Rational(power_));
  }

  Rational a_;
  Rational b_;
  Integer ratio_;
  Integer power_;
  Integer lo_;
  Integer hi_;
};

SeqPtr wrap_composition(const std::vector<OpPtr>& ops, const SeqPtr& arg) {
  SeqPtr cur = arg;
  for (std::size_t i = ops.size(); i > 0; --i) {
    cur = SequenceExpr::applied(ops[i - 1], cur);
  }
  return cur;
}

}  // namespace

// -- eval ----------------------------------------------------------------

namespace {

Rational eval_applied(const OpPtr& op, const SeqPtr& arg, const Index& k);

Rational eval_node(const SequenceExpr& seq, const Index& k) {
  return std::visit(
      [&k](const auto& node) -> Rational {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PrefixTailNode>) {
          const Integer len = static_cast<unsigned long long>(node.prefix.size());
          if (k <= len) {
            return node.prefix[k.convert_to<std::size_t>() - 1];
          }
          const Integer t = k - len - 1;  // 0-based offset into the tail
          const Integer period = static_cast<unsigned long long>(node.tail.values.size());
          const std::size_t rem = Integer(t % period).convert_to<std::size_t>();
          return node.tail.values[rem];
        } else if constexpr (std::is_same_v<T, IndicatorNode>) {
          const auto& ivs = node.intervals;
          auto it = std::upper_bound(
              ivs.begin(), ivs.end(), k,
              [](const Index& key, const IntInterval& iv) { return key < iv.lo; });
          if (it == ivs.begin()) return 0;
          --it;
          return k < it->hi ? 1 : 0;
        } else if constexpr (std::is_same_v<T, GeometricNode>) {
          for (BlockWalker w(node); w.lo() <= k; w.next()) {
            if (k < w.hi()) return 1;
          }
          return 0;
        } else if constexpr (std::is_same_v<T, AppliedNode>) {
          return eval_applied(node.op, node.arg, k);
        } else {
          switch (node.kind) {
            case PointwiseKind::add: {
              Rational s = 0;
              for (const auto& a : node.args) s += eval(*a, k);
              return s;
            }
            case PointwiseKind::sub:
              return eval(*node.args[0], k) - eval(*node.args[1], k);
            case PointwiseKind::mul: {
              Rational p = 1;
              for (const auto& a : node.args) {
                p *= eval(*a, k);
                if (p == 0) return p;
              }
              return p;
            }
            case PointwiseKind::scale:
              return node.c * eval(*node.args[0], k);
            case PointwiseKind::affine:
              return node.c * eval(*node.args[0], k) + node.d;
          }
          throw std::logic_error("unreachable pointwise kind");
        }
      },
      seq.node());
}

Rational eval_applied(const OpPtr& op, const SeqPtr& arg, const Index& k) {
  return std::visit(
      [&](const auto& node) -> Rational {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ShiftNode>) {
          if (k <= node.power) return 0;
          return eval(*arg, k - node.power);
        } else if constexpr (std::is_same_v<T, DiffNode>) {
          Rational v = eval(*arg, k);
          if (k >= 2) v -= eval(*arg, k - 1);
          return v;  // x_0 := 0
        } else if constexpr (std::is_same_v<T, CesaroNode>) {
          return prefix_sum(*arg, k) / Rational(k);
        } else if constexpr (std::is_same_v<T, DilationNode>) {
          return eval(*arg, ceil_div(k, node.factor));
        } else if constexpr (std::is_same_v<T, ConvexNode>) {
          Rational s = 0;
          for (const auto& term : node.terms) {
            s += term.weight * eval_applied(term.op, arg, k);
          }
          return s;
        } else {
          return eval(*wrap_composition(node.ops, arg), k);
        }
      },
      op->node());
}

}  // namespace

Rational eval(const SequenceExpr& seq, const Index& k) {
  if (k < 1) {
    throw std::invalid_argument("eval: index must be >= 1, got " + to_string(k));
  }
  return eval_node(seq, k);
}

// -- prefix_sum ----------------------------------------------------------

namespace {

Rational prefix_sum_applied(const OpPtr& op, const SeqPtr& arg, const Index& k);

Rational prefix_sum_node(const SequenceExpr& seq, const Index& k) {
  return std::visit(
      [&k, &seq](const auto& node) -> Rational {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PrefixTailNode>) {
          const Integer len = static_cast<unsigned long long>(node.prefix.size());
          if (k <= len) {
            return make_rational(node.prefix_cum_num[k.convert_to<std::size_t>() - 1],
                                 node.prefix_cum_den);
          }
          Rational total = node.prefix_cum_num.empty()
                               ? Rational(0)
                               : make_rational(node.prefix_cum_num.back(),
                                               node.prefix_cum_den);
          const Integer t = k - len;  // number of tail elements covered
          const Integer period = static_cast<unsigned long long>(node.tail.values.size());
          const Integer full = t / period;
          const std::size_t rem = Integer(t % period).convert_to<std::size_t>();
          total += Rational(full) * node.period_sum;
          if (rem >= 1) total += node.period_cum[rem - 1];
          return total;
        } else if constexpr (std::is_same_v<T, IndicatorNode>) {
          const auto& ivs = node.intervals;
          auto it = std::upper_bound(
              ivs.begin(), ivs.end(), k,
              [](const Index& key, const IntInterval& iv) { return key < iv.lo; });
          if (it == ivs.begin()) return 0;
          const std::size_t idx = static_cast<std::size_t>(it - ivs.begin()) - 1;
          Integer count = idx > 0 ? node.cum_len[idx - 1] : Integer(0);
          const IntInterval& iv = ivs[idx];
          const Integer upper = std::min(iv.hi, Integer(k + 1));
          count += upper - iv.lo;
          return Rational(count);
        } else if constexpr (std::is_same_v<T, GeometricNode>) {
          Integer count = 0;
          for (BlockWalker w(node); w.lo() <= k; w.next()) {
            const Integer upper = std::min(w.hi(), Integer(k + 1));
            if (upper > w.lo()) count += upper - w.lo();
          }
          return Rational(count);
        } else if constexpr (std::is_same_v<T, AppliedNode>) {
          return prefix_sum_applied(node.op, node.arg, k);
        } else {
          switch (node.kind) {
            case PointwiseKind::add: {
              Rational s = 0;
              for (const auto& a : node.args) s += prefix_sum(*a, k);
              return s;
            }
            case PointwiseKind::sub:
              return prefix_sum(*node.args[0], k) - prefix_sum(*node.args[1], k);
            case PointwiseKind::mul: {
              if (node.args.size() == 1) return prefix_sum(*node.args[0], k);
              // No closed form for products; element iteration.
              Rational s = 0;
              for (Index i = 1; i <= k; ++i) s += eval_node(seq, i);
              return s;
            }
            case PointwiseKind::scale:
              return node.c * prefix_sum(*node.args[0], k);
            case PointwiseKind::affine:
              return node.c * prefix_sum(*node.args[0], k) + node.d * Rational(k);
          }
          throw std::logic_error("unreachable pointwise kind");
        }
      },
      seq.node());
}

Rational prefix_sum_applied(const OpPtr& op, const SeqPtr& arg, const Index& k) {
  return std::visit(
      [&](const auto& node) -> Rational {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ShiftNode>) {
          if (k <= node.power) return 0;
          return prefix_sum(*arg, k - node.power);
        } else if constexpr (std::is_same_v<T, DiffNode>) {
          // Telescoping with x_0 := 0.
          return eval(*arg, k);
        } else if constexpr (std::is_same_v<T, CesaroNode>) {
          Rational total = 0;
          Rational run = 0;
          for (Index i = 1; i <= k; ++i) {
            run += eval(*arg, i);
            total += run / Rational(i);
          }
          return total;
        } else if constexpr (std::is_same_v<T, DilationNode>) {
          const Integer full = floor_div(k, node.factor);
          const Integer rem = k - full * node.factor;
          Rational total = Rational(node.factor) * prefix_sum(*arg, full);
          if (rem > 0) total += Rational(rem) * eval(*arg, full + 1);
          return total;
        } else if constexpr (std::is_same_v<T, ConvexNode>) {
          Rational s = 0;
          for (const auto& term : node.terms) {
            s += term.weight * prefix_sum_applied(term.op, arg, k);
          }
          return s;
        } else {
          return prefix_sum(*wrap_composition(node.ops, arg), k);
        }
      },
      op->node());
}

}  // namespace

Rational prefix_sum(const SequenceExpr& seq, const Index& k) {
  if (k < 0) {
    throw std::invalid_argument("prefix_sum: index must be >= 0");
  }
  if (k == 0) return 0;
  return prefix_sum_node(seq, k);
}

ExactFraction prefix_sum_fraction(const SequenceExpr& seq, const Index& k) {
  if (k < 0) {
    throw std::invalid_argument("prefix_sum_fraction: index must be >= 0");
  }
  if (k == 0) return ExactFraction{0, 1};
  if (const auto* node = std::get_if<PrefixTailNode>(&seq.node())) {
    const Integer len = static_cast<unsigned long long>(node->prefix.size());
    if (k <= len) {
      return ExactFraction{node->prefix_cum_num[k.convert_to<std::size_t>() - 1],
                           node->prefix_cum_den};
    }
    const Integer t = k - len;
    const Integer period = static_cast<unsigned long long>(node->tail.values.size());
    const Integer full = t / period;
    const std::size_t rem = Integer(t % period).convert_to<std::size_t>();
    Rational tail_part = Rational(full) * node->period_sum;
    if (rem >= 1) tail_part += node->period_cum[rem - 1];
    const Integer head =
        node->prefix_cum_num.empty() ? Integer(0) : node->prefix_cum_num.back();
    // head/L + tail_part, combined without reducing
    return ExactFraction{
        head * denominator(tail_part) + numerator(tail_part) * node->prefix_cum_den,
        node->prefix_cum_den * denominator(tail_part)};
  }
  const Rational value = prefix_sum_node(seq, k);
  return ExactFraction{numerator(value), denominator(value)};
}

// -- value_range / bound -------------------------------------------------

namespace {

ValueRange hull(const ValueRange& r, const Rational& v) {
  return ValueRange{std::min(r.lo, v), std::max(r.hi, v)};
}

ValueRange range_applied(const OpPtr& op, const SeqPtr& arg);

ValueRange range_node(const SequenceExpr& seq) {
  return std::visit(
      [](const auto& node) -> ValueRange {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PrefixTailNode>) {
          ValueRange r{node.tail.values.front(), node.tail.values.front()};
          for (const auto& v : node.tail.values) r = hull(r, v);
          for (const auto& v : node.prefix) r = hull(r, v);
          return r;
        } else if constexpr (std::is_same_v<T, IndicatorNode>) {
          if (node.intervals.empty()) return ValueRange{0, 0};
          // 1 is attained on any interval; 0 is attained because the union
          // is finite.
          return ValueRange{0, 1};
        } else if constexpr (std::is_same_v<T, GeometricNode>) {
          if (node.a == node.b) return ValueRange{0, 0};
          return ValueRange{0, 1};
        } else if constexpr (std::is_same_v<T, AppliedNode>) {
          return range_applied(node.op, node.arg);
        } else {
          switch (node.kind) {
            case PointwiseKind::add: {
              ValueRange r{0, 0};
              for (const auto& a : node.args) {
                ValueRange ra = value_range(*a);
                r = ValueRange{r.lo + ra.lo, r.hi + ra.hi};
              }
              return r;
            }
            case PointwiseKind::sub: {
              ValueRange r1 = value_range(*node.args[0]);
              ValueRange r2 = value_range(*node.args[1]);
              return ValueRange{r1.lo - r2.hi, r1.hi - r2.lo};
            }
            case PointwiseKind::mul: {
              ValueRange r = value_range(*node.args[0]);
              for (std::size_t i = 1; i < node.args.size(); ++i) {
                ValueRange s = value_range(*node.args[i]);
                const Rational p1 = r.lo * s.lo, p2 = r.lo * s.hi;
                const Rational p3 = r.hi * s.lo, p4 = r.hi * s.hi;
                r = ValueRange{std::min(std::min(p1, p2), std::min(p3, p4)),
                               std::max(std::max(p1, p2), std::max(p3, p4))};
              }
              return r;
            }
            case PointwiseKind::scale:
            case PointwiseKind::affine: {
              ValueRange r = value_range(*node.args[0]);
              ValueRange out = node.c >= 0
                                   ? ValueRange{node.c * r.lo, node.c * r.hi}
                                   : ValueRange{node.c * r.hi, node.c * r.lo};
              if (node.kind == PointwiseKind::affine) {
                out.lo += node.d;
                out.hi += node.d;
              }
              return out;
            }
          }
          throw std::logic_error("unreachable pointwise kind");
        }
      },
      seq.node());
}

ValueRange range_applied(const OpPtr& op, const SeqPtr& arg) {
  return std::visit(
      [&](const auto& node) -> ValueRange {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ShiftNode>) {
          ValueRange r = value_range(*arg);
          if (node.power > 0) r = hull(r, 0);  // leading zeros
          return r;
        } else if constexpr (std::is_same_v<T, DiffNode>) {
          ValueRange r = value_range(*arg);
          // Differences live in [lo-hi, hi-lo]; the k=1 term is x_1 itself.
          const Rational down = r.lo - r.hi;
          const Rational up = r.hi - r.lo;
          return ValueRange{std::min(down, r.lo), std::max(up, r.hi)};
        } else if constexpr (std::is_same_v<T, CesaroNode>) {
          return value_range(*arg);  // averages stay in the hull
        } else if constexpr (std::is_same_v<T, DilationNode>) {
          return value_range(*arg);  // same value set
        } else if constexpr (std::is_same_v<T, ConvexNode>) {
          ValueRange r{0, 0};
          for (const auto& term : node.terms) {
            ValueRange rt = range_applied(term.op, arg);
            r = ValueRange{r.lo + term.weight * rt.lo,
                           r.hi + term.weight * rt.hi};
          }
          return r;
        } else {
          return value_range(*wrap_composition(node.ops, arg));
        }
      },
      op->node());
}

}  // namespace

ValueRange value_range(const SequenceExpr& seq) { return range_node(seq); }

Rational bound(const SequenceExpr& seq) {
  const ValueRange r = value_range(seq);
  return std::max(abs_rational(r.lo), abs_rational(r.hi));
}

// -- materialize ----------------------------------------------------------

namespace {

std::vector<Rational> materialize_impl(const SequenceExpr& seq, std::size_t n);

std::vector<Rational> materialize_applied(const OpPtr& op, const SeqPtr& arg,
                                          std::size_t n) {
  return std::visit(
      [&](const auto& node) -> std::vector<Rational> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ShiftNode>) {
          std::vector<Rational> out(n, Rational(0));
          if (node.power < static_cast<unsigned long long>(n)) {
            const std::size_t p = to_size(node.power);
            std::vector<Rational> inner = materialize_impl(*arg, n - p);
            std::move(inner.begin(), inner.end(), out.begin() + p);
          }
          return out;
        } else if constexpr (std::is_same_v<T, DiffNode>) {
          std::vector<Rational> v = materialize_impl(*arg, n);
          for (std::size_t i = n; i-- > 1;) v[i] -= v[i - 1];
          return v;
        } else if constexpr (std::is_same_v<T, CesaroNode>) {
          std::vector<Rational> v = materialize_impl(*arg, n);
          Rational run = 0;
          for (std::size_t i = 0; i < n; ++i) {
            run += v[i];
            v[i] = run / Rational(static_cast<unsigned long long>(i + 1));
          }
          return v;
        } else if constexpr (std::is_same_v<T, DilationNode>) {
          const Integer m = node.factor;
          const Integer inner_len = ceil_div(Integer(static_cast<unsigned long long>(n)), m);
          std::vector<Rational> inner =
              materialize_impl(*arg, inner_len.convert_to<std::size_t>());
          std::vector<Rational> out;
          out.reserve(n);
          const std::size_t mm = m > Integer(static_cast<unsigned long long>(n))
                                     ? n
                                     : m.convert_to<std::size_t>();
          for (std::size_t block = 0; block < inner.size() && out.size() < n;
               ++block) {
            for (std::size_t r = 0; r < mm && out.size() < n; ++r) {
              out.push_back(inner[block]);
            }
          }
          return out;
        } else if constexpr (std::is_same_v<T, ConvexNode>) {
          std::vector<Rational> acc(n, Rational(0));
          for (const auto& term : node.terms) {
            std::vector<Rational> part = materialize_applied(term.op, arg, n);
            for (std::size_t i = 0; i < n; ++i) {
              acc[i] += term.weight * part[i];
            }
          }
          return acc;
        } else {
          return materialize_impl(*wrap_composition(node.ops, arg), n);
        }
      },
      op->node());
}

std::vector<Rational> materialize_impl(const SequenceExpr& seq, std::size_t n) {
  return std::visit(
      [&, n](const auto& node) -> std::vector<Rational> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PrefixTailNode>) {
          std::vector<Rational> out;
          out.reserve(n);
          const std::size_t L = node.prefix.size();
          for (std::size_t i = 0; i < n && i < L; ++i) {
            out.push_back(node.prefix[i]);
          }
          const std::size_t period = node.tail.values.size();
          for (std::size_t i = out.size(); i < n; ++i) {
            out.push_back(node.tail.values[(i - L) % period]);
          }
          return out;
        } else if constexpr (std::is_same_v<T, IndicatorNode>) {
          std::vector<Rational> out(n, Rational(0));
          for (const auto& iv : node.intervals) {
            if (iv.lo > static_cast<unsigned long long>(n)) break;
            const std::size_t lo = to_size(iv.lo);
            const std::size_t hi = iv.hi > static_cast<unsigned long long>(n + 1)
                                       ? n + 1
                                       : to_size(iv.hi);
            for (std::size_t k = lo; k < hi; ++k) out[k - 1] = 1;
          }
          return out;
        } else if constexpr (std::is_same_v<T, GeometricNode>) {
          std::vector<Rational> out(n, Rational(0));
          const Integer horizon = static_cast<unsigned long long>(n);
          for (BlockWalker w(node); w.lo() <= horizon; w.next()) {
            const std::size_t lo = w.lo().convert_to<std::size_t>();
            const std::size_t hi = w.hi() > horizon + 1
                                       ? n + 1
                                       : w.hi().convert_to<std::size_t>();
            for (std::size_t k = lo; k < hi; ++k) out[k - 1] = 1;
          }
          return out;
        } else if constexpr (std::is_same_v<T, AppliedNode>) {
          return materialize_applied(node.op, node.arg, n);
        } else {
          std::vector<Rational> acc = materialize_impl(*node.args[0], n);
          switch (node.kind) {
            case PointwiseKind::add:
              for (std::size_t j = 1; j < node.args.size(); ++j) {
                std::vector<Rational> part = materialize_impl(*node.args[j], n);
                for (std::size_t i = 0; i < n; ++i) acc[i] += part[i];
              }
              return acc;
            case PointwiseKind::sub: {
              std::vector<Rational> part = materialize_impl(*node.args[1], n);
              for (std::size_t i = 0; i < n; ++i) acc[i] -= part[i];
              return acc;
            }
            case PointwiseKind::mul:
              for (std::size_t j = 1; j < node.args.size(); ++j) {
                std::vector<Rational> part = materialize_impl(*node.args[j], n);
                for (std::size_t i = 0; i < n; ++i) acc[i] *= part[i];
              }
              return acc;
            case PointwiseKind::scale:
              for (auto& v : acc) v *= node.c;
              return acc;
            case PointwiseKind::affine:
              for (auto& v : acc) v = node.c * v + node.d;
              return acc;
          }
          throw std::logic_error("unreachable pointwise kind");
        }
      },
      seq.node());
}

}  // namespace

namespace {
std::atomic<unsigned long long> g_horizon_cap{kDefaultHorizonCap};
}

unsigned long long horizon_cap() {
  return g_horizon_cap.load(std::memory_order_relaxed);
}

void set_horizon_cap(unsigned long long cap) {
  g_horizon_cap.store(cap, std::memory_order_relaxed);
}

std::vector<Rational> materialize(const SequenceExpr& seq,
                                  const Index& horizon) {
  if (horizon < 0) {
    throw std::invalid_argument("materialize: horizon must be >= 0");
  }
  const unsigned long long cap = horizon_cap();
  if (horizon > cap) {
    throw GuardError("horizon-too-large: " + to_string(horizon) +
                     " exceeds cap " + std::to_string(cap));
  }
  return materialize_impl(seq, horizon.convert_to<std::size_t>());
}

MatchReport pointwise_check_equal(const SequenceExpr& a, const SequenceExpr& b,
                                  const Index& horizon) {
  if (horizon < 1) {
    throw std::invalid_argument("pointwise_check_equal: horizon must be >= 1");
  }
  const std::vector<Rational> va = materialize(a, horizon);
  const std::vector<Rational> vb = materialize(b, horizon);
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i] != vb[i]) {
      return MatchReport{false, Index(static_cast<unsigned long long>(i + 1)),
                         va[i], vb[i]};
    }
  }
  return MatchReport{true, Index(0), Rational(0), Rational(0)};
}

}  // namespace seqlab
