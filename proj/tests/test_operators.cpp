#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqlab/errors.hpp"
#include "seqlab/operator_checks.hpp"
#include "test_support.hpp"

using namespace seqlab;
using namespace seqlab::testing;

TEST_CASE("shift, dilation and averaging evaluation rules") {
  const SeqPtr alt = alternating_seq();

  const SeqPtr shifted = apply(OperatorExpr::shift(1), alt);
  CHECK(eval(*shifted, 1) == 0);
  CHECK(eval(*shifted, 2) == 1);
  CHECK(eval(*shifted, 3) == 0);

  const SeqPtr tripled = apply(OperatorExpr::dilation(3), alt);
  // x_1 x_1 x_1 x_2 x_2 x_2
  CHECK(eval(*tripled, 1) == 1);
  CHECK(eval(*tripled, 3) == 1);
  CHECK(eval(*tripled, 4) == 0);
  CHECK(eval(*tripled, 6) == 0);
  CHECK(eval(*tripled, 7) == 1);

  const SeqPtr averaged = apply(OperatorExpr::cesaro(), SequenceExpr::ones());
  CHECK(eval(*averaged, 1) == 1);
  CHECK(eval(*averaged, 17) == 1);
  CHECK(eval(*averaged, Integer("123456789123456789")) == 1);

  const SeqPtr diffed = apply(OperatorExpr::diff(), SequenceExpr::ones());
  CHECK(eval(*diffed, 1) == 1);  // x_0 := 0
  CHECK(eval(*diffed, 2) == 0);
}

TEST_CASE("operator factories validate invariants") {
  CHECK_THROWS_AS(OperatorExpr::dilation(0), std::invalid_argument);
  CHECK_THROWS_AS(OperatorExpr::shift(-1), std::invalid_argument);
  CHECK_THROWS_AS(OperatorExpr::compose({}), std::invalid_argument);
  CHECK_THROWS_AS(
      OperatorExpr::convex({ConvexTerm{rat("1/2"), OperatorExpr::cesaro()}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      OperatorExpr::convex({ConvexTerm{rat("3/2"), OperatorExpr::cesaro()},
                            ConvexTerm{rat("-1/2"), OperatorExpr::diff()}}),
      std::invalid_argument);
}

TEST_CASE("simplify fuses dilations and flattens structure") {
  const OpPtr fused = simplify(OperatorExpr::compose(
      {OperatorExpr::dilation(2), OperatorExpr::dilation(3)}));
  CHECK(*fused == *OperatorExpr::dilation(6));

  const OpPtr collapsed = simplify(OperatorExpr::compose({OperatorExpr::shift(0)}));
  CHECK(*collapsed == *OperatorExpr::shift(0));

  // nested convex combinations flatten with exact weight products
  const OpPtr nested = OperatorExpr::convex(
      {ConvexTerm{rat("1/2"), OperatorExpr::dilation(2)},
       ConvexTerm{rat("1/2"),
                  OperatorExpr::convex(
                      {ConvexTerm{rat("1/2"), OperatorExpr::dilation(3)},
                       ConvexTerm{rat("1/2"), OperatorExpr::dilation(4)}})}});
  const OpPtr flat = simplify(nested);
  const OpPtr expected = OperatorExpr::convex(
      {ConvexTerm{rat("1/2"), OperatorExpr::dilation(2)},
       ConvexTerm{rat("1/4"), OperatorExpr::dilation(3)},
       ConvexTerm{rat("1/4"), OperatorExpr::dilation(4)}});
  CHECK(*flat == *expected);

  // shifts fuse additively, identities drop out
  const OpPtr chain = simplify(OperatorExpr::compose(
      {OperatorExpr::shift(2), OperatorExpr::shift(0), OperatorExpr::shift(5),
       OperatorExpr::dilation(1)}));
  CHECK(*chain == *OperatorExpr::shift(7));

  // compositions nested inside compositions flatten before fusing
  const OpPtr deep = simplify(OperatorExpr::compose(
      {OperatorExpr::compose({OperatorExpr::dilation(2), OperatorExpr::dilation(5)}),
       OperatorExpr::dilation(7)}));
  CHECK(*deep == *OperatorExpr::dilation(70));
}

TEST_CASE("simplify preserves pointwise semantics") {
  TestRng rng(4242);
  std::vector<OpPtr> samples{
      OperatorExpr::compose({OperatorExpr::dilation(2), OperatorExpr::dilation(3),
                             OperatorExpr::shift(1)}),
      OperatorExpr::convex(
          {ConvexTerm{rat("2/5"),
                      OperatorExpr::compose({OperatorExpr::dilation(2),
                                             OperatorExpr::dilation(2)})},
           ConvexTerm{rat("3/5"), OperatorExpr::shift(0)}}),
      OperatorExpr::compose(
          {OperatorExpr::cesaro(),
           OperatorExpr::compose({OperatorExpr::shift(1), OperatorExpr::shift(2)}),
           OperatorExpr::dilation(4)}),
  };
  for (const auto& op : samples) {
    const OpPtr s = simplify(op);
    const SeqPtr x = SequenceExpr::indicator(runs_of(random_bits(rng, 500)));
    const auto agree =
        pointwise_check_equal(*apply(op, x), *apply(s, x), 700);
    CHECK(agree.equal);
  }
}

TEST_CASE("dilation fusion is exact on random 0/1 sequences") {
  TestRng rng(20240);
  const SeqPtr x = SequenceExpr::indicator(runs_of(random_bits(rng, 10'000)));
  for (unsigned k1 = 1; k1 <= 16; ++k1) {
    for (unsigned k2 = 1; k2 <= 16; ++k2) {
      const SeqPtr lhs = apply(
          OperatorExpr::compose(
              {OperatorExpr::dilation(k1), OperatorExpr::dilation(k2)}),
          x);
      const SeqPtr rhs = apply(OperatorExpr::dilation(k1 * k2), x);
      const auto agree = pointwise_check_equal(*lhs, *rhs, 10'000);
      CHECK(agree.equal);
      if (!agree.equal) return;
    }
  }
}

TEST_CASE("as_dilation_combo recognizes exactly the dilation class") {
  CHECK(as_dilation_combo(OperatorExpr::dilation(5)).has_value());
  CHECK(as_dilation_combo(OperatorExpr::shift(0)).has_value());
  CHECK(as_dilation_combo(
            OperatorExpr::compose({OperatorExpr::dilation(2),
                                   OperatorExpr::dilation(3)}))
            .has_value());
  CHECK_FALSE(as_dilation_combo(OperatorExpr::cesaro()).has_value());
  CHECK_FALSE(as_dilation_combo(OperatorExpr::shift(2)).has_value());
  CHECK_FALSE(as_dilation_combo(
                  OperatorExpr::convex(
                      {ConvexTerm{rat("1/2"), OperatorExpr::dilation(2)},
                       ConvexTerm{rat("1/2"), OperatorExpr::cesaro()}}))
                  .has_value());

  const auto combo = as_dilation_combo(OperatorExpr::convex(
      {ConvexTerm{rat("1/3"), OperatorExpr::dilation(2)},
       ConvexTerm{rat("2/3"), OperatorExpr::dilation(6)}}));
  REQUIRE(combo.has_value());
  CHECK(combo->size() == 2);
  CHECK((*combo)[0].first == rat("1/3"));
  CHECK((*combo)[1].second == 6);
}

TEST_CASE("positivity and unitality checks") {
  const std::vector<SeqPtr> samples{alternating_seq(),
                                    SequenceExpr::indicator({IntInterval{3, 9}})};
  const auto cesaro_report =
      check_positive_unital(OperatorExpr::cesaro(), samples, 10'000);
  CHECK(cesaro_report.pass);

  const auto dilation_report =
      check_positive_unital(OperatorExpr::dilation(5), samples, 10'000);
  CHECK(dilation_report.pass);

  // the difference operator is the canonical failure
  const auto diff_report =
      check_positive_unital(OperatorExpr::diff(), {alternating_seq()}, 100);
  CHECK_FALSE(diff_report.pass);
  REQUIRE_FALSE(diff_report.positivity_failures.empty());
  CHECK(diff_report.positivity_failures[0].k == 2);
  CHECK(diff_report.positivity_failures[0].value == -1);

  // negative samples violate the precondition
  const SeqPtr negative = SequenceExpr::constant(rat("-1"));
  CHECK_THROWS_AS(check_positive_unital(OperatorExpr::cesaro(), {negative}, 10),
                  std::invalid_argument);
}

TEST_CASE("null preservation checks") {
  const std::vector<SeqPtr> fast{null_sample_geometric(10'000)};
  const auto cesaro_report =
      check_c0(OperatorExpr::cesaro(), fast, 10'000, rat("1/100"));
  CHECK(cesaro_report.pass);
  // (C 2^-k)_n <= 2/n, so the top-decade magnitude is at most 1/500
  CHECK(cesaro_report.tail_max <= rat("1/500"));

  const std::vector<SeqPtr> harmonic{null_sample_harmonic(10'000)};
  const auto shift_report =
      check_c0(OperatorExpr::shift(1), harmonic, 10'000, rat("1/100"));
  CHECK(shift_report.pass);

  const auto dilation_report =
      check_c0(OperatorExpr::dilation(4), harmonic, 10'000, rat("1/100"));
  CHECK(dilation_report.pass);
  // the dilated tail is the sample's own tail at ceil(k/4)
  CHECK(dilation_report.tail_max == rat("1/250"));

  // a constant sequence is not null, and the checker notices
  const auto failing = check_c0(OperatorExpr::shift(1),
                                {SequenceExpr::constant(rat("1/2"))}, 1000,
                                rat("1/100"));
  CHECK_FALSE(failing.pass);
}

TEST_CASE("finite window inequality for dilation combinations") {
  const OpPtr a = OperatorExpr::convex(
      {ConvexTerm{rat("1/2"), OperatorExpr::dilation(1)},
       ConvexTerm{rat("1/2"), OperatorExpr::dilation(2)}});
  const auto report = check_condition_iii(a, {alternating_seq()}, 1000, 100);
  CHECK(report.pass);
  CHECK(report.max_dilation == 2);
  CHECK(report.windows_checked > 0);

  // identity dilation: window sums telescope to y_{k+r} - y_k
  const auto identity_report = check_condition_iii(
      OperatorExpr::dilation(1), {alternating_seq()}, 500, 50);
  CHECK(identity_report.pass);

  // y = ones gives s = (1, 0, 0, ...): all later windows max out at 0
  const auto ones_report = check_condition_iii(
      OperatorExpr::dilation(3), {SequenceExpr::ones()}, 500, 10);
  CHECK(ones_report.pass);

  CHECK_THROWS_AS(
      check_condition_iii(OperatorExpr::cesaro(), {alternating_seq()}, 100, 10),
      UnsupportedOperatorError);
}

TEST_CASE("telescoping identities are exact") {
  TestRng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> prefix;
    for (int i = 0; i < 300; ++i) prefix.push_back(rng.signed_unit());
    const SeqPtr y = SequenceExpr::prefix_tail(std::move(prefix),
                                               TailSpec::constant(rng.signed_unit()));
    const SeqPtr s = apply(OperatorExpr::diff(), y);
    const Rational norm = bound(*y);
    for (const unsigned long k : {0ul, 1ul, 5ul, 40ul, 250ul}) {
      for (const unsigned long r : {1ul, 2ul, 13ul, 100ul}) {
        // sum over (k, k+r] telescopes
        const Rational sum =
            prefix_sum(*s, Integer(k + r)) - prefix_sum(*s, Integer(k));
        const Rational direct =
            eval(*y, Integer(k + r)) - (k == 0 ? Rational(0) : eval(*y, Integer(k)));
        CHECK(sum == direct);
        CHECK(abs_rational(sum) <= 2 * norm);
        for (const unsigned long n : {2ul, 3ul, 8ul, 16ul}) {
          const SeqPtr dilated = apply(OperatorExpr::dilation(Integer(n)), s);
          const Rational dsum = prefix_sum(*dilated, Integer(k + r)) -
                                prefix_sum(*dilated, Integer(k));
          CHECK(abs_rational(dsum) <= Rational(2 * n) * norm);
        }
      }
    }
  }
}
