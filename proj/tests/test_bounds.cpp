#include "doctest.h"

#include "borcherds/bounds.hpp"
#include "borcherds/eisenstein.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

using namespace borcherds;

TEST_CASE("constant for A1(-1) + U(4) + U(4)") {
  const double pi = boost::math::constants::pi<double>();
  auto C = constant_C(Rational(5, 2), 512, 4);
  CHECK(std::abs(C.value_used - (2.0 / 15 - pi * pi / 90)) < 1e-9);
  CHECK(std::abs(C.value_formula - (4.0 / 15 - pi * pi / 45)) < 1e-9);
  CHECK(std::abs(C.value_used - 0.023671) < 1e-6);
  CHECK(search_cap(C, 1) == 13);
  CHECK(search_cap(*find_lattice("n3_2_7p1_4p4"), 1) == 13);
}

TEST_CASE("constant for the rank 28 unimodular lattice") {
  // only p = 2 contributes and ord_2(1) = 0, so the product is 1/2
  const double pi = boost::math::constants::pi<double>();
  auto C = constant_C(14, 1, 1);
  const double expected =
      std::pow(2.0, 15) * std::pow(pi, 14) / std::tgamma(14.0) * (2 - zeta_numeric(13)) / zeta_numeric(14) * 0.5;
  CHECK(std::abs(C.value_formula - expected) < 1e-9 * expected);
}

TEST_CASE("cap preconditions and monotonicity") {
  auto spec = *find_lattice("n3_2_7p1_4p4");
  CHECK_THROWS_AS(search_cap(spec, 0), std::invalid_argument);
  Rational prev = 0;
  for (int t = 1; t <= 40; ++t) {
    auto cap = search_cap(spec, Rational(t, 4));
    CHECK(cap >= prev);
    prev = cap;
  }
  CHECK_THROWS_AS(constant_C(Rational(3, 2), 2, 1), UnsupportedRank);
  CHECK_THROWS_AS(constant_C(2, 2, 1), UnsupportedRank);
}

TEST_CASE("catalog constants are positive and bound the coefficients") {
  for (const auto& spec : catalog()) {
    auto C = constant_C(spec);
    CHECK(C.value_used > 0);
    CHECK(C.value_used <= C.value_formula);
    if (spec.expected_d > 64 || spec.n > 10) continue;
    EisensteinSeries E(spec);
    const double k1 = to_double(E.weight() - 1);
    for (const auto& g : E.group().elements())
      for (const auto& n : exponents_up_to(g.qval, 3)) {
        const Rational a = E.coefficient(g, n);
        if (a != 0) CHECK(-to_double(a) >= C.value_used * std::pow(to_double(n), k1) * (1 - 1e-12));
      }
  }
}
