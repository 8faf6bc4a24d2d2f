#include "seqlab/operator_checks.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "seqlab/errors.hpp"

namespace seqlab {

PositiveUnitalReport check_positive_unital(const OpPtr& op,
                                           const std::vector<SeqPtr>& samples,
                                           const Index& horizon) {
  PositiveUnitalReport report;
  for (std::size_t si = 0; si < samples.size(); ++si) {
    const std::vector<Rational> raw = materialize(*samples[si], horizon);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] < 0) {
        throw std::invalid_argument(
            "check_positive_unital: sample " + std::to_string(si) +
            " is negative at k=" + std::to_string(i + 1));
      }
    }
    const std::vector<Rational> image =
        materialize(*apply(op, samples[si]), horizon);
    for (std::size_t i = 0; i < image.size(); ++i) {
      if (image[i] < 0) {
        report.pass = false;
        report.positivity_failures.push_back(
            CheckWitness{si, Index(static_cast<unsigned long long>(i + 1)),
                         image[i]});
        break;  // one witness per sample is enough
      }
    }
  }
  const std::vector<Rational> ones_image =
      materialize(*apply(op, SequenceExpr::ones()), horizon);
  for (std::size_t i = 0; i < ones_image.size(); ++i) {
    if (ones_image[i] != 1) {
      report.pass = false;
      report.unitality_failures.push_back(
          CheckWitness{static_cast<std::size_t>(-1),
                       Index(static_cast<unsigned long long>(i + 1)),
                       ones_image[i]});
      break;
    }
  }
  return report;
}

namespace {

// Top-decade maximum of |(C s)_k| = |P_k|/(den_k * k) scanned with unreduced
// fractions. Cums of long fraction prefixes share one denominator, so the
// running comparison needs only small cross-multiplications; the single
// full-size reduction happens on the returned maximum.
struct ScanMax {
  Rational value;
  Index at;
};

ScanMax scan_average_tail(const SequenceExpr& sample, std::size_t start,
                          std::size_t stop) {
  Integer best_num = -1;
  Integer best_den = 1;
  std::size_t best_k = 1;
  for (std::size_t k = start; k <= stop; ++k) {
    ExactFraction f =
        prefix_sum_fraction(sample, static_cast<unsigned long long>(k));
    if (f.num < 0) f.num = -f.num;
    bool improves;
    if (f.den == best_den) {
      improves = f.num * best_k > best_num * k;
    } else {
      improves = f.num * (best_den * best_k) > best_num * (f.den * k);
    }
    if (improves) {
      best_num = f.num;
      best_den = f.den;
      best_k = k;
    }
  }
  return ScanMax{make_rational(best_num, best_den * best_k),
                 Index(static_cast<unsigned long long>(best_k))};
}

}  // namespace

NullPreservationReport check_c0(const OpPtr& op,
                                const std::vector<SeqPtr>& null_samples,
                                const Index& horizon, const Rational& tol) {
  NullPreservationReport report;
  report.tol = tol;
  report.tail_max = 0;
  report.tail_argmax = 0;
  std::size_t start = Integer(horizon / 10).convert_to<std::size_t>();
  if (start < 1) start = 1;
  const std::size_t stop = horizon.convert_to<std::size_t>();
  const bool averaging =
      std::holds_alternative<CesaroNode>(simplify(op)->node());
  for (std::size_t si = 0; si < null_samples.size(); ++si) {
    if (averaging) {
      const ScanMax found = scan_average_tail(*null_samples[si], start, stop);
      if (found.value > report.tail_max) {
        report.tail_max = found.value;
        report.tail_argmax = found.at;
        report.worst_sample = si;
      }
      continue;
    }
    // Point evaluation over the top decade; the remaining operator kinds
    // evaluate in near-constant time per index.
    const SeqPtr image = apply(op, null_samples[si]);
    for (std::size_t k = start; k <= stop; ++k) {
      const Rational mag =
          abs_rational(eval(*image, static_cast<unsigned long long>(k)));
      if (mag > report.tail_max) {
        report.tail_max = mag;
        report.tail_argmax = static_cast<unsigned long long>(k);
        report.worst_sample = si;
      }
    }
  }
  report.pass = report.tail_max <= tol;
  return report;
}

namespace {

std::size_t bit_length(std::size_t v) {
  std::size_t bits = 0;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

}  // namespace

SeqPtr null_sample_harmonic(std::size_t horizon) {
  std::vector<Rational> prefix;
  prefix.reserve(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) {
    prefix.push_back(make_rational(1, static_cast<unsigned long long>(k)));
  }
  return SequenceExpr::prefix_tail(std::move(prefix),
                                   TailSpec::constant(Rational(0)));
}

SeqPtr null_sample_log_decay(std::size_t horizon) {
  std::vector<Rational> prefix;
  prefix.reserve(horizon);
  for (std::size_t k = 1; k <= horizon; ++k) {
    prefix.push_back(
        make_rational(1, static_cast<unsigned long long>(bit_length(k + 1))));
  }
  return SequenceExpr::prefix_tail(std::move(prefix),
                                   TailSpec::constant(Rational(0)));
}

SeqPtr null_sample_geometric(std::size_t horizon) {
  std::vector<Rational> prefix;
  prefix.reserve(horizon);
  Integer den = 2;
  for (std::size_t k = 1; k <= horizon; ++k) {
    prefix.push_back(make_rational(1, den));
    den <<= 1;
  }
  return SequenceExpr::prefix_tail(std::move(prefix),
                                   TailSpec::constant(Rational(0)));
}

ConditionThreeReport check_condition_iii(const OpPtr& op,
                                         const std::vector<SeqPtr>& samples,
                                         const Index& horizon,
                                         std::size_t block_len) {
  const auto combo = as_dilation_combo(op);
  if (!combo) {
    throw UnsupportedOperatorError(
        "check_condition_iii: operator is not a convex combination of "
        "dilations");
  }
  if (block_len == 0) {
    throw std::invalid_argument("check_condition_iii: block length must be >= 1");
  }
  ConditionThreeReport report;
  report.max_dilation = 1;
  for (const auto& [w, m] : *combo) {
    report.max_dilation = std::max(report.max_dilation, m);
  }

  const std::size_t h = horizon.convert_to<std::size_t>();
  for (std::size_t si = 0; si < samples.size(); ++si) {
    const SeqPtr& y = samples[si];
    const Rational threshold =
        Rational(-2) * Rational(report.max_dilation) * bound(*y) /
        Rational(static_cast<unsigned long long>(block_len));
    // (A s)_i for s = (I-T)y, materialized once per sample.
    const SeqPtr image = apply(op, apply(OperatorExpr::diff(), y));
    const std::vector<Rational> values =
        materialize(*image, Index(static_cast<unsigned long long>(h + block_len)));

    // Sliding-window maximum over windows (k, k+block_len], k = 0..horizon.
    std::deque<std::size_t> maxima;  // indices into `values`, decreasing
    for (std::size_t i = 0; i < values.size(); ++i) {
      while (!maxima.empty() && values[maxima.back()] <= values[i]) {
        maxima.pop_back();
      }
      maxima.push_back(i);
      if (i + 1 < block_len) continue;
      const std::size_t k = i + 1 - block_len;  // window start
      if (k > h) break;
      while (maxima.front() < k) maxima.pop_front();
      ++report.windows_checked;
      const Rational& window_max = values[maxima.front()];
      if (window_max < threshold) {
        report.pass = false;
        report.failures.push_back(
            WindowFailure{si, Index(static_cast<unsigned long long>(k)),
                          window_max, threshold});
      }
    }
  }
  return report;
}

}  // namespace seqlab
