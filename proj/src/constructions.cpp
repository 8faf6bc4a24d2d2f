#include "seqlab/constructions.hpp"

#include <stdexcept>

#include "seqlab/errors.hpp"

namespace seqlab {

SeqPtr alternating() {
  return SequenceExpr::prefix_tail(
      {}, TailSpec::periodic({Rational(1), Rational(0)}));
}

SeqPtr char_multiples(unsigned long j) {
  if (j < 1) throw std::invalid_argument("char_multiples: j must be >= 1");
  if (j > 10'000'000) throw GuardError("char_multiples: period too large");
  std::vector<Rational> period(j, Rational(0));
  period.back() = 1;
  return SequenceExpr::prefix_tail({}, TailSpec::periodic(std::move(period)));
}

SeqPtr geometric_blocks() {
  return SequenceExpr::geometric_indicator(Rational(1), Rational(2), Integer(4),
                                           0);
}

SeqPtr geometric_blocks_truncation(unsigned long block_count) {
  if (block_count < 1) {
    throw std::invalid_argument("truncation needs at least one block");
  }
  std::vector<IntInterval> blocks;
  blocks.reserve(block_count);
  Integer power = 1;  // 4^k
  for (unsigned long k = 0; k < block_count; ++k) {
    blocks.push_back(IntInterval{power, 2 * power});
    power *= 4;
  }
  return SequenceExpr::indicator(std::move(blocks));
}

namespace {

void check_depth(unsigned long n) {
  if (n < 1) throw std::invalid_argument("level must be >= 1");
  if (n > kHardDepthLimit) {
    throw GuardError("level " + std::to_string(n) + " exceeds the depth limit " +
                     std::to_string(kHardDepthLimit));
  }
}

}  // namespace

IntInterval j_set(unsigned long n) {
  check_depth(n);
  const Integer top = pow2(1ul << n);  // 2^{2^n}
  return IntInterval{top - n, top};
}

std::vector<Index> j_nk(unsigned long n, unsigned long k) {
  check_depth(n);
  if (k < 1 || k > n) {
    throw std::invalid_argument("j_nk: need 1 <= k <= n");
  }
  const IntInterval window = j_set(n);
  std::vector<Index> out;
  out.reserve(n);
  const Integer divisor(k);
  for (Index m = window.lo; m < window.hi; ++m) {
    Index image = ceil_div(m, divisor);
    if (out.empty() || out.back() != image) out.push_back(std::move(image));
  }
  // The closed form is derived, not trusted: dilating the indicator of the
  // result must give 1 everywhere on the window.
  std::vector<IntInterval> points;
  points.reserve(out.size());
  for (const Index& p : out) points.push_back(IntInterval{p, p + 1});
  const SeqPtr cover =
      apply(OperatorExpr::dilation(divisor), SequenceExpr::indicator(points));
  for (Index m = window.lo; m < window.hi; ++m) {
    if (eval(*cover, m) != 1) {
      throw std::logic_error("j_nk cover check failed at " + to_string(m));
    }
  }
  return out;
}

std::vector<IntInterval> i_set(unsigned long n) {
  check_depth(n);
  std::vector<IntInterval> points;
  for (unsigned long k = 1; k <= n; ++k) {
    for (Index& p : j_nk(n, k)) {
      points.push_back(IntInterval{p, p + 1});
    }
  }
  return normalize_intervals(std::move(points));
}

SeqPtr witness_sequence(unsigned long n_max, bool allow_deep) {
  check_depth(n_max);
  if (n_max > kDefaultDepthGuard && !allow_deep) {
    throw GuardError("witness_sequence: depth " + std::to_string(n_max) +
                     " needs allow_deep (indices reach 2^" +
                     std::to_string(1ul << n_max) + ")");
  }
  std::vector<IntInterval> all;
  Index prev_max = 0;
  for (unsigned long n = 1; n <= n_max; ++n) {
    std::vector<IntInterval> level = i_set(n);
    if (level.front().lo <= prev_max) {
      throw std::logic_error("witness levels are not disjoint");
    }
    prev_max = level.back().hi - 1;
    all.insert(all.end(), level.begin(), level.end());
  }
  return SequenceExpr::indicator(std::move(all));
}

SeqPtr diff_shift(SeqPtr y) {
  return apply(OperatorExpr::diff(), std::move(y));
}

}  // namespace seqlab
