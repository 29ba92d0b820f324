#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "herz/exponents.hpp"

using namespace herz;

namespace {

ProblemParams pp(int n, ExtRat a, ExtRat g, ExtRat s, ExtRat q, ExtRat r = ExtRat(1)) {
  return ProblemParams::make(n, a, g, HerzIndex::make(s, q, r));
}

}  // namespace

TEST_CASE("extended rationals") {
  CHECK(ExtRat(2, 4) == ExtRat(1, 2));
  CHECK(ExtRat(3, -6) == ExtRat(-1, 2));
  CHECK(ExtRat::infinity().reciprocal() == ExtRat(0));
  CHECK(ExtRat::infinity() > ExtRat(1000000));
  CHECK_THROWS_AS(ExtRat(0) * ExtRat::infinity(), ArithmeticError);
  CHECK_THROWS_AS(ExtRat::infinity() - ExtRat::infinity(), ArithmeticError);
  CHECK_THROWS_AS(ExtRat(0).reciprocal(), ArithmeticError);
  CHECK(ExtRat::parse("-3/2") == ExtRat(-3, 2));
  CHECK(ExtRat::parse("inf").is_infinite());
  CHECK(ExtRat(1, 3) + ExtRat(1, 6) == ExtRat(1, 2));
}

TEST_CASE("critical exponents") {
  auto c = critical_exponents(pp(3, 3, 0, 0, 3));
  CHECK(c.q_c == ExtRat(3));
  CHECK(c.Q_c == ExtRat(3));
  c = critical_exponents(pp(3, 3, 1, 1, 3));
  CHECK(c.q_c == ExtRat(2));
  CHECK(c.Q_c == ExtRat(9, 4));
  c = critical_exponents(pp(3, 2, -1, -1, 3));
  CHECK(c.q_c == ExtRat(3));
  CHECK(c.Q_c == ExtRat(3));
}

TEST_CASE("standing assumptions are enforced") {
  CHECK_THROWS_AS(pp(3, 2, -3, 0, 3), ParameterError);
  CHECK_THROWS_AS(pp(3, 2, 0, 0, 1), ParameterError);
  CHECK_THROWS_AS(pp(3, 2, 0, 4, 3), ParameterError);
  CHECK_THROWS_AS(pp(3, 2, 1, 0, 3), ParameterError);
}

TEST_CASE("classification examples") {
  CHECK(classify(pp(3, 3, 0, 0, 3)).kind == Criticality::DoubleCritical);
  CHECK(classify(pp(3, 2, 0, 0, 3)).kind == Criticality::DoubleSubcritical);
  CHECK(classify(pp(3, 4, 0, 0, ExtRat(9, 2))).kind == Criticality::SingleCriticalII);
  CHECK(classify(pp(3, 3, 0, 0, 3, ExtRat(4))).kind == Criticality::NonIntegrableNonlinearity);
}

TEST_CASE("inclusions") {
  auto i = check_inclusions(HerzIndex::make(0, 2, ExtRat::infinity()), 3);
  CHECK(i.contains_test_functions);
  CHECK(i.locally_integrable);
  i = check_inclusions(HerzIndex::make(0, 1, 2), 3);
  CHECK(i.contains_test_functions);
  CHECK_FALSE(i.locally_integrable);
  i = check_inclusions(HerzIndex::make(ExtRat(-3, 2), 2, ExtRat::infinity()), 3);
  CHECK(i.contains_test_functions);
  CHECK(i.locally_integrable);
  CHECK_FALSE(check_inclusions(HerzIndex::make(ExtRat(-3, 2), 2, 5), 3).contains_test_functions);
}

TEST_CASE("theorem hypotheses") {
  auto h = check_theorem_hypotheses(pp(3, 2, 0, 0, 3, 1), Theorem::Uniqueness);
  CHECK(h.verdict);
  CHECK(h.via == "(i)");
  CHECK_FALSE(check_theorem_hypotheses(pp(3, 3, 0, 0, 3, 4), Theorem::Uniqueness).verdict);
  // s = 0 is not strictly above gamma/(alpha-1) = 0
  CHECK_FALSE(check_theorem_hypotheses(pp(3, 4, 0, 0, ExtRat(9, 2), ExtRat::infinity()), Theorem::CriticalUniqueness).verdict);
  h = check_theorem_hypotheses(pp(3, 4, 0, ExtRat(1, 3), 9, ExtRat::infinity()), Theorem::CriticalUniqueness);
  CHECK(h.verdict);
  CHECK(h.via == "(i)");
  CHECK_FALSE(h.resolution.empty());
}

TEST_CASE("sigma and delta") {
  auto sd = sigma_delta(pp(3, 3, 0, 0, 3));
  CHECK(sd.sigma == ExtRat(0));
  CHECK(sd.delta == ExtRat(0));
  sd = sigma_delta(pp(3, 2, 0, 0, 3));
  CHECK(sd.sigma == ExtRat(0));
  CHECK(sd.delta == ExtRat(1, 2));
  // direct evaluation: 1 - (3/2)[(1/3 + 1) - (0 + 1/2)] = -1/4
  sd = sigma_delta(pp(3, 2, -1, 0, 2));
  CHECK(sd.sigma == ExtRat(1));
  CHECK(sd.delta == ExtRat(-1, 4));
}

TEST_CASE("scaling exponent") {
  CHECK(scaling_exponent(HerzIndex::make(0, 3, 1), 3) == ExtRat(-1));
  CHECK(scaling_exponent(HerzIndex::make(1, ExtRat::infinity(), 1), 3) == ExtRat(-1));
  const auto p = pp(3, 3, 0, 0, 3);
  CHECK((ExtRat(2) + p.gamma) / (p.alpha - ExtRat(1)) == -scaling_exponent(p.index, 3));
}

TEST_CASE("random tuples: partition, equivalences, delta") {
  std::mt19937_64 rng(20261019);
  int valid = 0;
  int thm1 = 0;
  int counts[6] = {};
  while (valid < 10000) {
    const auto p = testing::random_problem(rng);
    if (!p) continue;
    ++valid;
    const auto rep = classify(*p);
    const ExtRat v = p->index.level(p->n);
    const ExtRat a = rep.q_c.reciprocal();
    const ExtRat b = rep.Q_c.reciprocal();
    const bool ni = v > b || (v == b && p->index.r > p->alpha);
    const bool sup = !ni && v > a;
    const bool rest = !ni && !sup;
    const bool cases[6] = {rest && v < a && v < b, rest && v == b && b < a, rest && v == a && a < b,
                           rest && v == a && a == b, sup, ni};
    int hits = 0;
    for (bool c : cases) hits += c;
    REQUIRE(hits == 1);
    CHECK(cases[static_cast<int>(rep.kind)]);
    ++counts[static_cast<int>(rep.kind)];
    const auto sd = sigma_delta(*p);  // throws on a failed equivalence
    const ExtRat n(p->n);
    CHECK((v <= a) == (v >= sd.sigma / n + p->alpha / p->index.q - ExtRat(2) / n));
    CHECK((v <= b) == (sd.sigma / n + p->alpha / p->index.q <= ExtRat(1)));
    if (check_theorem_hypotheses(*p, Theorem::Uniqueness).verdict) {
      ++thm1;
      CHECK(sd.delta > ExtRat(0));
    }
  }
  for (int c : counts) CHECK(c > 0);
  CHECK(thm1 > 100);
}
