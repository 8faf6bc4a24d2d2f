#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "seqlab/constructions.hpp"
#include "seqlab/errors.hpp"
#include "test_support.hpp"

using namespace seqlab;
using namespace seqlab::testing;

TEST_CASE("alternating and multiples generators") {
  const SeqPtr alt = alternating();
  CHECK(materialize(*alt, 4) == std::vector<Rational>{1, 0, 1, 0});

  const SeqPtr chi3 = char_multiples(3);
  for (const long k : {3, 6, 9}) CHECK(eval(*chi3, k) == 1);
  for (const long k : {1, 2, 4}) CHECK(eval(*chi3, k) == 0);

  // j = 1 degenerates to the all-ones sequence
  const auto all_ones =
      pointwise_check_equal(*char_multiples(1), *SequenceExpr::ones(), 100);
  CHECK(all_ones.equal);

  CHECK_THROWS_AS(char_multiples(0), std::invalid_argument);
}

TEST_CASE("block sequence and its truncations") {
  const SeqPtr blocks = geometric_blocks();
  CHECK(eval(*blocks, 1) == 1);  // the k=0 block is {1}
  CHECK(eval(*blocks, 7) == 1);
  CHECK(eval(*blocks, 8) == 0);
  CHECK(prefix_sum(*blocks, 15) == 5);

  const SeqPtr trunc = geometric_blocks_truncation(4);
  const auto agree = pointwise_check_equal(*blocks, *trunc, 255);
  CHECK(agree.equal);  // identical below the first dropped block at 4^4
  CHECK(eval(*blocks, 256) == 1);
  CHECK(eval(*trunc, 256) == 0);
}

TEST_CASE("witness windows") {
  CHECK(j_set(1) == IntInterval{3, 4});
  CHECK(j_set(3) == IntInterval{253, 256});
  for (unsigned long n = 1; n <= 20; ++n) {
    CHECK(j_set(n).length() == n);
  }
  CHECK_THROWS_AS(j_set(0), std::invalid_argument);
  CHECK_THROWS_AS(j_set(25), GuardError);
}

TEST_CASE("minimal preimages of the witness windows") {
  const auto j32 = j_nk(3, 2);
  REQUIRE(j32.size() == 2);
  CHECK(j32[0] == 127);
  CHECK(j32[1] == 128);

  for (unsigned long n = 1; n <= 6; ++n) {
    const IntInterval window = j_set(n);
    // k = 1 is the window itself
    const auto identity = j_nk(n, 1);
    REQUIRE(identity.size() == static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < identity.size(); ++i) {
      CHECK(identity[i] == window.lo + i);
    }
    for (unsigned long k = 1; k <= n; ++k) {
      const auto preimage = j_nk(n, k);
      // size bound |J(n,k)| <= n/k + 2, cleared of the division
      CHECK(Integer(k) * Integer(preimage.size()) <= Integer(n + 2 * k));

      // covering: every ceil(m/k) with m in the window lands in the preimage
      std::set<Integer> members(preimage.begin(), preimage.end());
      for (Index m = window.lo; m < window.hi; ++m) {
        CHECK(members.count(ceil_div(m, Integer(k))) == 1);
      }
      // minimality: removing any element uncovers part of the window
      for (const Index& gone : preimage) {
        bool still_covers = true;
        for (Index m = window.lo; m < window.hi && still_covers; ++m) {
          const Index image = ceil_div(m, Integer(k));
          if (image == gone) still_covers = false;
        }
        CHECK_FALSE(still_covers);
      }
    }
  }
  CHECK_THROWS_AS(j_nk(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(j_nk(3, 4), std::invalid_argument);
}

TEST_CASE("witness support levels") {
  const auto level1 = i_set(1);
  REQUIRE(level1.size() == 1);
  CHECK(level1[0] == IntInterval{3, 4});

  for (unsigned long n = 1; n <= 6; ++n) {
    const auto level = i_set(n);
    Integer measure = 0;
    for (const auto& iv : level) measure += iv.length();
    CHECK(measure < Integer(n) * Integer(n + 2));
    CHECK(level.front().lo > pow2(1ul << (n - 1)));
    CHECK(level.back().hi - 1 <= pow2(1ul << n));
  }

  // levels are strictly separated
  for (unsigned long n = 1; n <= 5; ++n) {
    const auto lo_level = i_set(n);
    const auto hi_level = i_set(n + 1);
    CHECK(lo_level.back().hi - 1 <= pow2(1ul << n));
    CHECK(hi_level.front().lo > pow2(1ul << n));
  }
}

TEST_CASE("witness sequence") {
  const SeqPtr x = witness_sequence(5);
  CHECK(eval(*x, 3) == 1);  // level 1 is {3}
  CHECK(eval(*x, 4) == 0);

  // sigma_k x is identically 1 on J(n) for k <= n
  for (unsigned long n = 1; n <= 5; ++n) {
    const IntInterval window = j_set(n);
    for (unsigned long k = 1; k <= n; ++k) {
      const SeqPtr dilated = apply(OperatorExpr::dilation(Integer(k)), x);
      for (Index j = window.lo; j < window.hi; ++j) {
        CHECK(eval(*dilated, j) == 1);
      }
    }
  }

  // truncation stability at every index at or below 2^{2^4}
  const SeqPtr shallow = witness_sequence(4);
  const auto& ivs = std::get<IndicatorNode>(shallow->node()).intervals;
  const Integer top = pow2(16);
  for (const auto& iv : ivs) {
    for (const Index& probe :
         {iv.lo, Index(iv.hi - 1), iv.hi, Index(iv.lo - 1), Index(1), top}) {
      if (probe >= 1 && probe <= top) {
        CHECK(eval(*shallow, probe) == eval(*x, probe));
      }
    }
  }

  CHECK_THROWS_AS(witness_sequence(7), GuardError);
  CHECK_NOTHROW(witness_sequence(7, /*allow_deep=*/true));
}

TEST_CASE("difference generator") {
  const SeqPtr from_ones = diff_shift(SequenceExpr::ones());
  CHECK(eval(*from_ones, 1) == 1);
  CHECK(eval(*from_ones, 2) == 0);
  CHECK(eval(*from_ones, 100) == 0);

  const SeqPtr from_alt = diff_shift(alternating());
  CHECK(materialize(*from_alt, 4) == std::vector<Rational>{1, -1, 1, -1});

  // partial sums over (k, k+r] telescope to y_{k+r} - y_k
  TestRng rng(11);
  std::vector<Rational> prefix;
  for (int i = 0; i < 120; ++i) prefix.push_back(rng.signed_unit());
  const SeqPtr y = SequenceExpr::prefix_tail(std::move(prefix),
                                             TailSpec::constant(rat("1/4")));
  const SeqPtr s = diff_shift(y);
  for (const unsigned long k : {0ul, 1ul, 17ul, 80ul}) {
    for (const unsigned long r : {1ul, 5ul, 60ul}) {
      const Rational sum =
          prefix_sum(*s, Integer(k + r)) - prefix_sum(*s, Integer(k));
      const Rational want =
          eval(*y, Integer(k + r)) - (k == 0 ? Rational(0) : eval(*y, Integer(k)));
      CHECK(sum == want);
    }
  }
}
