#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "seqlab/constructions.hpp"
#include "seqlab/errors.hpp"
#include "seqlab/window.hpp"
#include "test_support.hpp"

using namespace seqlab;
using namespace seqlab::testing;

TEST_CASE("window sums") {
  const SeqPtr alt = alternating_seq();
  CHECK(window_sum(alt, 0, 2) == 1);
  CHECK(window_sum(alt, 1, 2) == 1);

  const SeqPtr chi3 = char_multiples(3);
  for (unsigned long m = 0; m < 30; ++m) {
    CHECK(window_sum(chi3, Integer(m), 3) == 1);
  }

  // ones of the block sequence in {4..15}: exactly {4,5,6,7}
  CHECK(window_sum(geometric_blocks(), 3, 12) == 4);
}

TEST_CASE("window extrema, exact cases") {
  const WindowStats alt2 = window_extrema(alternating_seq(), 2);
  CHECK(alt2.exact);
  CHECK(alt2.sup_sum == 1);
  CHECK(alt2.inf_sum == 1);

  for (unsigned long j : {2ul, 3ul, 5ul}) {
    for (unsigned long t : {1ul, 2ul, 4ul}) {
      const WindowStats st = window_extrema(char_multiples(j), j * t);
      CHECK(st.exact);
      CHECK(st.sup_sum == t);
      CHECK(st.inf_sum == t);
    }
  }

  // truncated block sequence: a full-ones window of length 4 starts at m=3
  const WindowStats blocks4 = window_extrema(geometric_blocks_truncation(6), 4);
  CHECK(blocks4.exact);
  CHECK(blocks4.sup_sum == 4);
  CHECK(blocks4.sup_witness == 3);
  CHECK(blocks4.inf_sum == 0);

  // witnesses reproduce the recorded sums
  const SeqPtr trunc = geometric_blocks_truncation(6);
  CHECK(window_sum(trunc, blocks4.sup_witness, 4) == blocks4.sup_sum);
  CHECK(window_sum(trunc, blocks4.inf_witness, 4) == blocks4.inf_sum);
}

TEST_CASE("window extrema match the exhaustive oracle") {
  TestRng rng(6021);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t len = 50 + rng.below(400);
    const auto bits = random_bits(rng, len);
    const SeqPtr seq = SequenceExpr::indicator(runs_of(bits));
    std::vector<Rational> values;
    values.reserve(len);
    for (int b : bits) values.emplace_back(b);
    for (const unsigned long n : {1ul, 2ul, 3ul, 7ul, 16ul}) {
      // append n+1 zeros so the oracle sees one full off-support window
      std::vector<Rational> padded = values;
      padded.resize(len + n + 1, Rational(0));
      const OracleExtrema oracle = brute_window_extrema(padded, n, len + 1);
      const WindowStats st = window_extrema(seq, n);
      REQUIRE(st.exact);
      CHECK(st.sup_sum == oracle.sup);
      CHECK(st.inf_sum == oracle.inf);
    }
  }
}

TEST_CASE("window extrema of prefix-tail sequences match the oracle") {
  TestRng rng(8088);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Rational> prefix;
    const std::size_t len = 10 + rng.below(60);
    for (std::size_t i = 0; i < len; ++i) prefix.push_back(rng.signed_unit());
    std::vector<Rational> period;
    const std::size_t p = 1 + rng.below(5);
    for (std::size_t i = 0; i < p; ++i) period.push_back(rng.signed_unit());
    const SeqPtr seq =
        SequenceExpr::prefix_tail(prefix, TailSpec::periodic(period));
    for (const unsigned long n : {1ul, 3ul, 8ul}) {
      // beyond prefix+period the window sums repeat, so a long scan is an oracle
      const std::size_t scan = len + p + 3 * n + 10;
      const auto values = materialize(*seq, Integer(scan + n));
      const OracleExtrema oracle = brute_window_extrema(values, n, scan);
      const WindowStats st = window_extrema(seq, n);
      REQUIRE(st.exact);
      CHECK(st.sup_sum == oracle.sup);
      CHECK(st.inf_sum == oracle.inf);
    }
  }
}

TEST_CASE("scan-limited extrema are flagged and match the oracle") {
  const SeqPtr blocks = geometric_blocks();
  const WindowStats st = window_extrema(blocks, 4, 300);
  CHECK_FALSE(st.exact);
  CHECK(st.scan_horizon == 300);
  const auto values = materialize(*blocks, 304);
  const OracleExtrema oracle = brute_window_extrema(values, 4, 300);
  CHECK(st.sup_sum == oracle.sup);
  CHECK(st.inf_sum == oracle.inf);
}

TEST_CASE("value-interval enclosures, exact cases") {
  const BoundsEnclosure alt = sucheston_bounds(alternating_seq(), 2);
  CHECK(alt.exact);
  CHECK(alt.q_lower == rat("1/2"));
  CHECK(alt.p_upper == rat("1/2"));
  CHECK(alt.gap_upper == 0);

  for (unsigned long j : {2ul, 3ul, 7ul, 10ul}) {
    const BoundsEnclosure b = sucheston_bounds(char_multiples(j), j);
    CHECK(b.exact);
    CHECK(b.q_lower == make_rational(1, j));
    CHECK(b.p_upper == make_rational(1, j));
  }
}

TEST_CASE("block sequence spans the whole unit interval") {
  // scan through the fourth block: runs and gaps of length >= 16 exist there
  const BoundsEnclosure b = sucheston_bounds(geometric_blocks(), 16, 2048);
  CHECK_FALSE(b.exact);
  CHECK(b.q_lower == 0);
  CHECK(b.p_upper == 1);
  // witnesses: a full-ones window and a full-zeros window for every n
  for (const auto& st : b.per_n) {
    CHECK(st.sup_sum == st.n);
    CHECK(st.inf_sum == 0);
    CHECK(window_sum(geometric_blocks(), st.sup_witness, st.n) == st.sup_sum);
  }
}

TEST_CASE("enclosures nest and are translation invariant") {
  TestRng rng(515);
  std::vector<SeqPtr> family{alternating_seq(), char_multiples(4),
                             SequenceExpr::indicator(runs_of(random_bits(rng, 300)))};
  {
    std::vector<Rational> prefix;
    for (int i = 0; i < 50; ++i) prefix.push_back(rng.signed_unit());
    family.push_back(SequenceExpr::prefix_tail(
        std::move(prefix), TailSpec::periodic({rat("1/2"), rat("-1/2")})));
  }
  for (const auto& x : family) {
    const BoundsEnclosure shallow = sucheston_bounds(x, 5);
    const BoundsEnclosure deep = sucheston_bounds(x, 15);
    CHECK(shallow.q_lower <= deep.q_lower);
    CHECK(deep.p_upper <= shallow.p_upper);
    CHECK(deep.q_lower <= deep.p_upper);

    // shifting can only widen the finite enclosure (the lead-in windows mix
    // in shifted zeros); for 0/1 indicator unions it changes nothing
    const BoundsEnclosure shifted =
        sucheston_bounds(apply(OperatorExpr::shift(1), x), 15);
    CHECK(shifted.exact);
    CHECK(shifted.q_lower <= deep.q_lower);
    CHECK(deep.p_upper <= shifted.p_upper);
    if (std::holds_alternative<IndicatorNode>(x->node())) {
      CHECK(shifted.q_lower == deep.q_lower);
      CHECK(shifted.p_upper == deep.p_upper);
    }

    // sub/superadditivity of the per-n extrema
    for (std::size_t n1 = 1; n1 <= deep.per_n.size(); ++n1) {
      for (std::size_t n2 = n1; n1 + n2 <= deep.per_n.size(); ++n2) {
        const auto& a = deep.per_n[n1 - 1];
        const auto& b = deep.per_n[n2 - 1];
        const auto& c = deep.per_n[n1 + n2 - 1];
        CHECK(c.sup_sum <= a.sup_sum + b.sup_sum);
        CHECK(c.inf_sum >= a.inf_sum + b.inf_sum);
      }
    }
  }
}

TEST_CASE("affine images keep exact extrema") {
  // 2x - ones over the alternating sequence swaps roles of sup and inf
  const SeqPtr seq =
      SequenceExpr::affine(rat("-2"), rat("1"), alternating_seq());
  const WindowStats st = window_extrema(seq, 3);
  CHECK(st.exact);
  // windows of x=(1,0,1,...) of length 3 sum to 1 or 2; -2s+3 gives 1 or -1
  CHECK(st.sup_sum == 1);
  CHECK(st.inf_sum == -1);
}

TEST_CASE("uniform-average verdicts") {
  // eventually periodic: almost convergent to the period mean
  const SeqPtr prefixed = SequenceExpr::prefix_tail(
      {rat("5"), rat("7")},
      TailSpec::periodic({rat("1"), rat("0"), rat("0")}));
  const LorentzReport periodic_report = lorentz_check(prefixed, 16, rat("1/100"));
  CHECK(periodic_report.exact);
  CHECK(periodic_report.verdict.kind == LorentzVerdictKind::almost_convergent);
  CHECK(periodic_report.verdict.value == rat("1/3"));

  const LorentzReport chi = lorentz_check(char_multiples(5), 16, rat("1/100"));
  CHECK(chi.verdict.kind == LorentzVerdictKind::almost_convergent);
  CHECK(chi.verdict.value == rat("1/5"));
  // D(j) = 0 exactly at the period length
  const WindowStats at_period = window_extrema(char_multiples(5), 5);
  CHECK(at_period.sup_sum == at_period.inf_sum);

  const LorentzReport blocks = lorentz_check(geometric_blocks(), 16, rat("1/100"));
  CHECK(blocks.exact);
  CHECK(blocks.verdict.kind == LorentzVerdictKind::not_almost_convergent);
  CHECK(blocks.verdict.gap_lower == 1);

  // affine image scales the certified gap
  const LorentzReport scaled = lorentz_check(
      SequenceExpr::scale(rat("-1/2"), geometric_blocks()), 8, rat("1/100"));
  CHECK(scaled.verdict.kind == LorentzVerdictKind::not_almost_convergent);
  CHECK(scaled.verdict.gap_lower == rat("1/2"));

  // finite support: almost convergent to the off-support constant
  const LorentzReport finite = lorentz_check(
      SequenceExpr::indicator({IntInterval{5, 25}}), 8, rat("1/100"));
  CHECK(finite.verdict.kind == LorentzVerdictKind::almost_convergent);
  CHECK(finite.verdict.value == 0);

  // no certification rule applies: averaged block sequence
  const LorentzReport open_case = lorentz_check(
      apply(OperatorExpr::cesaro(), geometric_blocks()), 4, rat("1/100"), 500);
  CHECK_FALSE(open_case.exact);
  CHECK(open_case.verdict.kind == LorentzVerdictKind::inconclusive);

  // D(n)*n is subadditive on the computed table rows
  for (std::size_t i = 0; i < blocks.table.size(); ++i) {
    for (std::size_t j = 0; j < blocks.table.size(); ++j) {
      const unsigned long sum_n = blocks.table[i].n + blocks.table[j].n;
      for (const auto& row : blocks.table) {
        if (row.n == sum_n) {
          CHECK(row.gap * Rational(row.n) <=
                blocks.table[i].gap * Rational(blocks.table[i].n) +
                    blocks.table[j].gap * Rational(blocks.table[j].n));
        }
      }
    }
  }
}

TEST_CASE("running averages of the block sequence") {
  const SeqPtr blocks = geometric_blocks();
  std::vector<Index> indices;
  for (unsigned long n = 1; n <= 20; ++n) indices.push_back(pow2(2 * n) - 1);
  const auto profile = cesaro_profile(blocks, indices);
  for (const auto& [j, value] : profile) {
    CHECK(value == rat("1/3"));
  }

  // at 2*4^N the average is (4^(N+1)-1)/(6*4^N); N=2 gives 21/32
  const auto at_end = cesaro_profile(blocks, {Integer(32)});
  CHECK(at_end[0].second == rat("21/32"));

  const auto ones_profile =
      cesaro_profile(SequenceExpr::ones(), {Integer(1), Integer(999)});
  CHECK(ones_profile[0].second == 1);
  CHECK(ones_profile[1].second == 1);
}

TEST_CASE("zeta transform against closed-form oracles") {
  // ones: the untruncated sum is log(2)/n * rho/(1-rho)
  for (const unsigned long n : {100ul, 10'000ul}) {
    const ZetaValue z = zeta_transform(SequenceExpr::ones(), n, 1e-8);
    const double rho = std::exp2(-1.0 / static_cast<double>(n));
    const double oracle =
        std::log(2.0) / static_cast<double>(n) * rho / (1.0 - rho);
    CHECK(std::abs(z.value - oracle) <= z.truncation_bound + 1e-12);
  }
  const ZetaValue big = zeta_transform(SequenceExpr::ones(), 10'000, 1e-8);
  CHECK(std::abs(big.value - 1.0) <= 1e-3);
  // normalization invariant: within truncation bound plus 2/n of 1
  for (const unsigned long n : {50ul, 500ul, 5'000ul}) {
    const ZetaValue z = zeta_transform(SequenceExpr::ones(), n, 1e-8);
    CHECK(std::abs(z.value - 1.0) <=
          z.truncation_bound + 2.0 / static_cast<double>(n));
  }

  // alternating: odd-index geometric series, log(2)/n * rho/(1-rho^2)
  const ZetaValue alt = zeta_transform(alternating(), 10'000, 1e-8);
  {
    const double rho = std::exp2(-1.0 / 10'000.0);
    const double oracle = std::log(2.0) / 10'000.0 * rho / (1.0 - rho * rho);
    CHECK(std::abs(alt.value - oracle) <= alt.truncation_bound + 1e-12);
  }
  CHECK(std::abs(alt.value - 0.5) <= 1e-3);

  // block sequence: values stay inside the certified average band
  for (const unsigned long n : {1'000ul, 3'000ul, 10'000ul}) {
    const ZetaValue z = zeta_transform(geometric_blocks(), n, 1e-8);
    CHECK(z.value >= 1.0 / 3 - 0.02);
    CHECK(z.value <= 2.0 / 3 + 0.02);
  }

  // run-based and per-term paths agree
  const ZetaValue runs = zeta_transform(geometric_blocks_truncation(5), 500, 1e-8);
  const ZetaValue terms = zeta_transform(
      SequenceExpr::mul({geometric_blocks_truncation(5), SequenceExpr::ones()}),
      500, 1e-8);
  CHECK(std::abs(runs.value - terms.value) <= 1e-9);
}

TEST_CASE("dilation witness checks") {
  const auto trivial = dilation_witness_check(
      SequenceExpr::zeros(), OperatorExpr::dilation(1), SequenceExpr::zeros(),
      IntInterval{1, 10});
  CHECK(trivial.max_value == 0);

  const SeqPtr x = witness_sequence(5);
  const auto top = dilation_witness_check(x, OperatorExpr::dilation(2),
                                          SequenceExpr::zeros(), j_set(5));
  CHECK(top.max_value == 1);

  const OpPtr mixed = OperatorExpr::convex(
      {ConvexTerm{rat("1/2"), OperatorExpr::dilation(1)},
       ConvexTerm{rat("1/2"), OperatorExpr::dilation(2)}});
  const SeqPtr y = SequenceExpr::scale(rat("1/2"), alternating());
  const auto perturbed = dilation_witness_check(x, mixed, y, j_set(5));
  CHECK(perturbed.max_value >= 1);

  CHECK_THROWS_AS(dilation_witness_check(x, OperatorExpr::cesaro(),
                                         SequenceExpr::zeros(), j_set(2)),
                  UnsupportedOperatorError);
}
