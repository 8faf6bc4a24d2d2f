#include "seqlab/window.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

#include "seqlab/errors.hpp"

namespace seqlab {

Rational window_sum(const SeqPtr& seq, const Index& m, unsigned long n) {
  if (m < 0) throw std::invalid_argument("window_sum: start must be >= 0");
  if (n < 1) throw std::invalid_argument("window_sum: length must be >= 1");
  return prefix_sum(*seq, m + n) - prefix_sum(*seq, m);
}

namespace {

// A sequence reduced to c*base + d where base is a PrefixTail or an
// IndicatorUnion node. Shift applications are pushed into the base, so the
// breakpoint/period extrema algorithms apply to translated sequences too.
struct ExactForm {
  SeqPtr base;
  Rational c;
  Rational d;
};

SeqPtr fold_affine_prefix_tail(const PrefixTailNode& node, const Rational& c,
                               const Rational& d, unsigned long long lead_zeros) {
  std::vector<Rational> prefix;
  prefix.reserve(node.prefix.size() + static_cast<std::size_t>(lead_zeros));
  for (unsigned long long i = 0; i < lead_zeros; ++i) prefix.emplace_back(0);
  for (const auto& v : node.prefix) prefix.push_back(c * v + d);
  std::vector<Rational> tail_values;
  tail_values.reserve(node.tail.values.size());
  for (const auto& v : node.tail.values) tail_values.push_back(c * v + d);
  TailSpec tail = node.tail.kind == TailKind::constant
                      ? TailSpec::constant(std::move(tail_values.front()))
                      : TailSpec::periodic(std::move(tail_values));
  return SequenceExpr::prefix_tail(std::move(prefix), std::move(tail));
}

// Shift powers folded into an explicit prefix must stay materializable.
constexpr unsigned long long kMaxFoldedShift = 1u << 22;

std::optional<ExactForm> exact_window_form(const SeqPtr& seq) {
  const auto& node = seq->node();
  if (std::holds_alternative<PrefixTailNode>(node) ||
      std::holds_alternative<IndicatorNode>(node)) {
    return ExactForm{seq, Rational(1), Rational(0)};
  }
  if (const auto* pw = std::get_if<PointwiseNode>(&node)) {
    if (pw->kind != PointwiseKind::scale && pw->kind != PointwiseKind::affine) {
      return std::nullopt;
    }
    auto inner = exact_window_form(pw->args[0]);
    if (!inner) return std::nullopt;
    inner->d = pw->c * inner->d;
    if (pw->kind == PointwiseKind::affine) inner->d += pw->d;
    inner->c = pw->c * inner->c;
    return inner;
  }
  if (const auto* ap = std::get_if<AppliedNode>(&node)) {
    const auto* sh = std::get_if<ShiftNode>(&ap->op->node());
    if (!sh) return std::nullopt;
    auto inner = exact_window_form(ap->arg);
    if (!inner) return std::nullopt;
    if (sh->power == 0) return inner;
    if (sh->power > kMaxFoldedShift) return std::nullopt;
    const unsigned long long p = sh->power.convert_to<unsigned long long>();
    if (const auto* pt = std::get_if<PrefixTailNode>(&inner->base->node())) {
      // Fold the affine part into the values first: the shifted-in zeros are
      // genuine zeros of the shifted sequence, not affine images.
      SeqPtr shifted = fold_affine_prefix_tail(*pt, inner->c, inner->d, p);
      return ExactForm{std::move(shifted), Rational(1), Rational(0)};
    }
    const auto* iu = std::get_if<IndicatorNode>(&inner->base->node());
    if (!iu || inner->d != 0) return std::nullopt;
    std::vector<IntInterval> shifted;
    shifted.reserve(iu->intervals.size());
    for (const auto& iv : iu->intervals) {
      shifted.push_back(IntInterval{iv.lo + p, iv.hi + p});
    }
    return ExactForm{SequenceExpr::indicator(std::move(shifted)), inner->c,
                     Rational(0)};
  }
  return std::nullopt;
}

struct BaseExtrema {
  Rational sup;
  Rational inf;
  Index sup_witness;
  Index inf_witness;
};

void update_extrema(BaseExtrema& ext, bool& first, const Rational& s,
                    const Index& m) {
  if (first) {
    ext = BaseExtrema{s, s, m, m};
    first = false;
    return;
  }
  if (s > ext.sup) {
    ext.sup = s;
    ext.sup_witness = m;
  }
  if (s < ext.inf) {
    ext.inf = s;
    ext.inf_witness = m;
  }
}

// Window sums of a prefix+tail sequence are periodic in m once the window
// clears the prefix, so starts in [0, prefix_len + period) realize every
// value that any m >= 0 can.
BaseExtrema prefix_tail_extrema(const SeqPtr& base, const PrefixTailNode& node,
                                unsigned long n) {
  const unsigned long long len = node.prefix.size();
  const unsigned long long period = node.tail.values.size();
  BaseExtrema ext;
  bool first = true;
  for (unsigned long long m = 0; m < len + period; ++m) {
    const Rational s =
        prefix_sum(*base, Index(m) + n) - prefix_sum(*base, Index(m));
    update_extrema(ext, first, s, Index(m));
  }
  return ext;
}

// The increment S(m+1)-S(m) = x_{m+n+1} - x_{m+1} of an indicator window
// count changes only where m+1 or m+n+1 crosses an interval endpoint, so
// S is monotone between consecutive crossings and the global extrema are
// attained at crossing candidates (plus m = 0 and one start past the last
// interval, where S = 0).
BaseExtrema indicator_extrema(const SeqPtr& base, const IndicatorNode& node,
                              unsigned long n) {
  if (node.intervals.empty()) {
    return BaseExtrema{Rational(0), Rational(0), Index(0), Index(0)};
  }
  std::set<Integer> candidates;
  candidates.insert(0);
  candidates.insert(node.intervals.back().hi);
  const Integer len(n);
  for (const auto& iv : node.intervals) {
    for (const Integer* e : {&iv.lo, &iv.hi}) {
      for (int off = -2; off <= 0; ++off) {
        const Integer c1 = *e + off;        // m+1 crosses the endpoint
        const Integer c2 = *e - len + off;  // m+n+1 crosses the endpoint
        if (c1 >= 0) candidates.insert(c1);
        if (c2 >= 0) candidates.insert(c2);
      }
    }
  }
  BaseExtrema ext;
  bool first = true;
  for (const Integer& m : candidates) {
    const Rational s = prefix_sum(*base, m + n) - prefix_sum(*base, m);
    update_extrema(ext, first, s, m);
  }
  return ext;
}

WindowStats stats_from_form(const ExactForm& form, unsigned long n) {
  BaseExtrema base_ext;
  if (const auto* pt = std::get_if<PrefixTailNode>(&form.base->node())) {
    base_ext = prefix_tail_extrema(form.base, *pt, n);
  } else {
    base_ext = indicator_extrema(
        form.base, std::get<IndicatorNode>(form.base->node()), n);
  }
  WindowStats out;
  out.n = n;
  out.exact = true;
  out.scan_horizon = 0;
  const Rational offset = form.d * Rational(n);
  if (form.c >= 0) {
    out.sup_sum = form.c * base_ext.sup + offset;
    out.sup_witness = base_ext.sup_witness;
    out.inf_sum = form.c * base_ext.inf + offset;
    out.inf_witness = base_ext.inf_witness;
  } else {
    out.sup_sum = form.c * base_ext.inf + offset;
    out.sup_witness = base_ext.inf_witness;
    out.inf_sum = form.c * base_ext.sup + offset;
    out.inf_witness = base_ext.sup_witness;
  }
  return out;
}

// Sliding scan over materialized values; extrema over m in [0, horizon].
WindowStats scan_extrema(const std::vector<Rational>& values, unsigned long n,
                         const Index& scan_horizon) {
  const std::size_t h = scan_horizon.convert_to<std::size_t>();
  WindowStats out;
  out.n = n;
  out.exact = false;
  out.scan_horizon = scan_horizon;
  Rational s = 0;
  for (unsigned long i = 0; i < n; ++i) s += values[i];
  out.sup_sum = s;
  out.inf_sum = s;
  out.sup_witness = 0;
  out.inf_witness = 0;
  for (std::size_t m = 1; m <= h; ++m) {
    s += values[m + n - 1] - values[m - 1];
    if (s > out.sup_sum) {
      out.sup_sum = s;
      out.sup_witness = static_cast<unsigned long long>(m);
    }
    if (s < out.inf_sum) {
      out.inf_sum = s;
      out.inf_witness = static_cast<unsigned long long>(m);
    }
  }
  return out;
}

std::vector<Rational> scan_buffer(const SeqPtr& seq, const Index& scan_horizon,
                                  unsigned long n_max) {
  if (scan_horizon < 0) {
    throw std::invalid_argument("scan horizon must be >= 0");
  }
  return materialize(*seq, scan_horizon + n_max);
}

}  // namespace

WindowStats window_extrema(const SeqPtr& seq, unsigned long n,
                           const Index& scan_horizon) {
  if (!seq) throw std::invalid_argument("window_extrema: null sequence");
  if (n < 1) throw std::invalid_argument("window_extrema: length must be >= 1");
  if (const auto form = exact_window_form(seq)) {
    return stats_from_form(*form, n);
  }
  return scan_extrema(scan_buffer(seq, scan_horizon, n), n, scan_horizon);
}

BoundsEnclosure sucheston_bounds(const SeqPtr& seq, unsigned long n_max,
                                 const Index& scan_horizon) {
  if (!seq) throw std::invalid_argument("sucheston_bounds: null sequence");
  if (n_max < 1) {
    throw std::invalid_argument("sucheston_bounds: n_max must be >= 1");
  }
  const auto form = exact_window_form(seq);
  std::vector<Rational> buffer;
  if (!form) buffer = scan_buffer(seq, scan_horizon, n_max);

  BoundsEnclosure out;
  out.n_used = n_max;
  out.exact = true;
  out.per_n.reserve(n_max);
  for (unsigned long n = 1; n <= n_max; ++n) {
    WindowStats st =
        form ? stats_from_form(*form, n) : scan_extrema(buffer, n, scan_horizon);
    const Rational inf_avg = st.inf_sum / Rational(n);
    const Rational sup_avg = st.sup_sum / Rational(n);
    if (n == 1) {
      out.q_lower = inf_avg;
      out.p_upper = sup_avg;
    } else {
      out.q_lower = std::max(out.q_lower, inf_avg);
      out.p_upper = std::min(out.p_upper, sup_avg);
    }
    out.exact = out.exact && st.exact;
    out.per_n.push_back(std::move(st));
  }
  out.gap_upper = out.p_upper - out.q_lower;
  return out;
}

namespace {

// Walks scale/affine wrappers down to a geometric-indicator node, if the
// expression is exactly that shape.
struct GeometricForm {
  const GeometricNode* node;
  Rational c;
  Rational d;
};

std::optional<GeometricForm> geometric_form(const SeqPtr& seq) {
  const SequenceExpr* cur = seq.get();
  Rational c = 1, d = 0;
  for (;;) {
    if (const auto* g = std::get_if<GeometricNode>(&cur->node())) {
      return GeometricForm{g, c, d};
    }
    const auto* pw = std::get_if<PointwiseNode>(&cur->node());
    if (!pw || (pw->kind != PointwiseKind::scale &&
                pw->kind != PointwiseKind::affine)) {
      return std::nullopt;
    }
    d += c * (pw->kind == PointwiseKind::affine ? pw->d : Rational(0));
    c *= pw->c;
    cur = pw->args[0].get();
  }
}

Rational period_mean(const PrefixTailNode& node) {
  return node.period_sum /
         Rational(static_cast<unsigned long long>(node.tail.values.size()));
}

}  // namespace

LorentzReport lorentz_check(const SeqPtr& seq, unsigned long n_max,
                            const Rational& tol, const Index& scan_horizon) {
  if (!seq) throw std::invalid_argument("lorentz_check: null sequence");
  if (n_max < 1) {
    throw std::invalid_argument("lorentz_check: n_max must be >= 1");
  }
  std::vector<unsigned long> grid;
  for (unsigned long n = 1; n <= n_max; n *= 2) {
    grid.push_back(n);
    if (n > n_max / 2) break;  // avoid overflow on n *= 2
  }
  if (grid.back() != n_max) grid.push_back(n_max);

  const auto form = exact_window_form(seq);
  std::vector<Rational> buffer;
  if (!form) buffer = scan_buffer(seq, scan_horizon, n_max);

  LorentzReport report;
  report.tol = tol;
  for (unsigned long n : grid) {
    WindowStats st =
        form ? stats_from_form(*form, n) : scan_extrema(buffer, n, scan_horizon);
    LorentzRow row;
    row.n = n;
    row.sup_avg = st.sup_sum / Rational(n);
    row.inf_avg = st.inf_sum / Rational(n);
    row.gap = row.sup_avg - row.inf_avg;
    row.exact = st.exact;
    report.table.push_back(std::move(row));
  }
  report.decayed_below_tol = report.table.back().gap <= tol;

  // Certified verdicts.
  for (const auto& row : report.table) {
    if (row.exact && row.gap == 0) {
      // All length-n window sums coincide, which forces x_{k+n} = x_k for
      // every k; the sequence is n-periodic and uniformly averages to the
      // common window mean.
      report.verdict =
          LorentzVerdict{LorentzVerdictKind::almost_convergent, row.sup_avg,
                         Rational(0)};
      report.exact = true;
      return report;
    }
  }
  if (form) {
    if (const auto* pt = std::get_if<PrefixTailNode>(&form->base->node())) {
      // Eventually periodic: windows of the period length have constant
      // average beyond the prefix and boundary effects vanish in the limit.
      const Rational value = form->c * period_mean(*pt) + form->d;
      report.verdict = LorentzVerdict{LorentzVerdictKind::almost_convergent,
                                      value, Rational(0)};
      report.exact = true;
      return report;
    }
    // Indicator union: finite support, so the sequence is eventually the
    // off-support constant.
    report.verdict = LorentzVerdict{LorentzVerdictKind::almost_convergent,
                                    form->d, Rational(0)};
    report.exact = true;
    return report;
  }
  if (const auto geo = geometric_form(seq)) {
    const GeometricNode& g = *geo->node;
    if (g.a == g.b || geo->c == 0) {
      report.verdict = LorentzVerdict{LorentzVerdictKind::almost_convergent,
                                      geo->d, Rational(0)};
      report.exact = true;
      return report;
    }
    if (g.b == g.a * Rational(g.ratio)) {
      // Blocks tile the whole axis past the first one; eventually constant.
      report.verdict = LorentzVerdict{LorentzVerdictKind::almost_convergent,
                                      geo->c + geo->d, Rational(0)};
      report.exact = true;
      return report;
    }
    // Ones-runs and zero-gaps both grow without bound, so every window
    // length admits a full-ones and a full-zeros start: sup-avg = 1 and
    // inf-avg = 0 for every n, and the value interval has length exactly
    // |c| after the affine map.
    report.verdict =
        LorentzVerdict{LorentzVerdictKind::not_almost_convergent, Rational(0),
                       abs_rational(geo->c)};
    report.exact = true;
    return report;
  }
  report.verdict =
      LorentzVerdict{LorentzVerdictKind::inconclusive, Rational(0), Rational(0)};
  report.exact = false;
  return report;
}

std::vector<std::pair<Index, Rational>> cesaro_profile(
    const SeqPtr& seq, const std::vector<Index>& indices) {
  if (!seq) throw std::invalid_argument("cesaro_profile: null sequence");
  if (indices.empty()) {
    throw std::invalid_argument("cesaro_profile: no indices");
  }
  std::vector<std::pair<Index, Rational>> out;
  out.reserve(indices.size());
  for (const Index& j : indices) {
    if (j < 1) {
      throw std::invalid_argument("cesaro_profile: index must be >= 1");
    }
    out.emplace_back(j, prefix_sum(*seq, j) / Rational(j));
  }
  return out;
}

namespace {

double geometric_run_sum(double lo, double hi_exclusive, unsigned long n,
                         double one_minus_rho) {
  // sum_{k=lo}^{hi-1} 2^{-k/n} = (2^{-lo/n} - 2^{-hi/n}) / (1 - 2^{-1/n})
  const double top = std::exp2(-lo / static_cast<double>(n)) -
                     std::exp2(-hi_exclusive / static_cast<double>(n));
  return top / one_minus_rho;
}

}  // namespace

ZetaValue zeta_transform(const SeqPtr& seq, unsigned long n, double eps) {
  if (!seq) throw std::invalid_argument("zeta_transform: null sequence");
  if (n < 1) throw std::invalid_argument("zeta_transform: n must be >= 1");
  if (!(eps > 0)) throw std::invalid_argument("zeta_transform: eps must be > 0");

  const double nn = static_cast<double>(n);
  unsigned long long terms =
      static_cast<unsigned long long>(std::ceil(nn * (-std::log2(eps)))) + n;
  if (terms < n + 1) terms = n + 1;
  const double rho = std::exp2(-1.0 / nn);
  const double one_minus_rho = 1.0 - rho;
  const Integer k_max(terms);

  double sum = 0.0;
  const auto& node = seq->node();
  if (const auto* iu = std::get_if<IndicatorNode>(&node)) {
    for (const auto& iv : iu->intervals) {
      if (iv.lo > k_max) break;
      const Integer hi = std::min(iv.hi, Integer(k_max + 1));
      sum += geometric_run_sum(iv.lo.convert_to<double>(),
                               hi.convert_to<double>(), n, one_minus_rho);
    }
  } else if (const auto* g = std::get_if<GeometricNode>(&node)) {
    Rational a = g->a, b = g->b;
    Integer power = 1;
    for (unsigned long i = 0; i < g->start_exp; ++i) power *= g->ratio;
    for (;; power *= g->ratio) {
      const Integer lo = ceil_rational(a * Rational(power));
      if (lo > k_max) break;
      const Integer hi =
          std::min(ceil_rational(b * Rational(power)), Integer(k_max + 1));
      if (hi > lo) {
        sum += geometric_run_sum(lo.convert_to<double>(),
                                 hi.convert_to<double>(), n, one_minus_rho);
      }
    }
  } else if (const auto* pt = std::get_if<PrefixTailNode>(&node)) {
    if (terms > horizon_cap()) {
      throw GuardError("zeta-too-many-terms: " + std::to_string(terms));
    }
    std::vector<double> prefix_d, period_d;
    prefix_d.reserve(pt->prefix.size());
    for (const auto& v : pt->prefix) prefix_d.push_back(to_double(v));
    period_d.reserve(pt->tail.values.size());
    for (const auto& v : pt->tail.values) period_d.push_back(to_double(v));
    const std::size_t len = prefix_d.size();
    const std::size_t period = period_d.size();
    double rho_pow = 1.0;
    for (unsigned long long k = 1; k <= terms; ++k) {
      rho_pow *= rho;
      const double x =
          k <= len ? prefix_d[k - 1] : period_d[(k - len - 1) % period];
      sum += x * rho_pow;
    }
  } else {
    if (terms > horizon_cap()) {
      throw GuardError("zeta-too-many-terms: " + std::to_string(terms));
    }
    double rho_pow = 1.0;
    for (unsigned long long k = 1; k <= terms; ++k) {
      rho_pow *= rho;
      sum += to_double(eval(*seq, k)) * rho_pow;
    }
  }

  const double scale = M_LN2 / nn;
  ZetaValue out;
  out.n = n;
  out.value = scale * sum;
  out.terms_used = terms;
  out.truncation_bound = scale * std::exp2(-static_cast<double>(terms) / nn) /
                         one_minus_rho * to_double(bound(*seq));
  return out;
}

WitnessResult dilation_witness_check(const SeqPtr& x, const OpPtr& a,
                                     const SeqPtr& y,
                                     const IntInterval& region) {
  if (!x || !a || !y) {
    throw std::invalid_argument("dilation_witness_check: null argument");
  }
  const auto combo = as_dilation_combo(a);
  if (!combo) {
    throw UnsupportedOperatorError(
        "dilation_witness_check: operator is not a convex combination of "
        "dilations");
  }
  if (region.lo < 1 || region.lo >= region.hi) {
    throw std::invalid_argument("dilation_witness_check: bad region");
  }
  if (region.hi - region.lo > horizon_cap()) {
    throw GuardError("region-too-large");
  }
  WitnessResult best;
  bool first = true;
  for (Index j = region.lo; j < region.hi; ++j) {
    Rational value = 0;
    for (const auto& [weight, factor] : *combo) {
      const Index i = ceil_div(j, factor);
      Rational term = eval(*x, i) + eval(*y, i);
      if (i >= 2) term -= eval(*y, i - 1);
      value += weight * term;
    }
    if (first || value > best.max_value) {
      best = WitnessResult{std::move(value), j};
      first = false;
    }
  }
  return best;
}

}  // namespace seqlab
