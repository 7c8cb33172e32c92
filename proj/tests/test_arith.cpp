#include "doctest.h"

#include "borcherds/arith.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <random>

using namespace borcherds;

namespace {
const double kPi = boost::math::constants::pi<double>();

std::vector<BigInt> fundamental_discriminants(int bound) {
  std::vector<BigInt> out;
  for (int D = -bound; D <= bound; ++D) {
    if (D == 0 || D == 1) continue;
    if (((D % 4) + 4) % 4 >= 2) continue;
    if (core_discriminant(D).fundamental == D) out.push_back(D);
  }
  return out;
}
}  // namespace

TEST_CASE("kronecker symbol") {
  CHECK(kronecker(12, 1) == 1);
  CHECK(kronecker(12, 5) == -1);
  CHECK(kronecker(-4, 7) == -1);
  CHECK(kronecker(-4, 5) == 1);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(1, 2) == 1);
  CHECK(kronecker(-3, 2) == -1);
  CHECK(kronecker(8, 3) == -1);
  CHECK(kronecker(6, 3) == 0);
  CHECK(kronecker(3, -1) == 1);
  CHECK(kronecker(-3, -1) == -1);
  CHECK(kronecker(1, 0) == 1);
  CHECK(kronecker(2, 0) == 0);
  // multiplicativity in the bottom argument against the big-integer path
  BigInt big = BigInt(1) << 80;
  CHECK(kronecker(big + 1, 3) == kronecker(mod(big + 1, BigInt(3)), 3));
  for (int a = -30; a <= 30; ++a)
    for (int b = 1; b <= 30; ++b)
      for (int c = 1; c <= 10; ++c) CHECK(kronecker(a, b * c) == kronecker(a, b) * kronecker(a, c));
}

TEST_CASE("bernoulli numbers") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == Rational(-1, 2));
  CHECK(bernoulli(2) == Rational(1, 6));
  CHECK(bernoulli(3) == 0);
  CHECK(bernoulli(8) == Rational(-1, 30));
  CHECK(bernoulli(10) == Rational(5, 66));
  CHECK(bernoulli(14) == Rational(7, 6));
  CHECK(bernoulli_polynomial(2, Rational(1, 2)) == Rational(-1, 12));
}

TEST_CASE("generalized bernoulli") {
  CHECK(generalized_bernoulli(2, QuadChar::trivial()) == Rational(1, 6));
  CHECK(generalized_bernoulli(2, QuadChar(12)) == 4);
  CHECK(generalized_bernoulli(1, QuadChar(-4)) == Rational(-1, 2));
  // power-sum route against the defining sum
  for (const BigInt& D : fundamental_discriminants(60)) {
    QuadChar chi(D);
    const auto f = static_cast<long>(chi.conductor());
    for (int k = 1; k <= 6; ++k) {
      Rational direct = 0;
      for (long a = 1; a <= f; ++a) direct += chi(a) * bernoulli_polynomial(k, Rational(a, f));
      direct *= pow(Rational(f), k - 1);
      CHECK(generalized_bernoulli(k, chi) == direct);
    }
  }
}

TEST_CASE("exact L-values") {
  auto z2 = l_value_exact(2, QuadChar::trivial());
  CHECK(z2 == SymbolicConstant(Rational(1, 6), 4));
  CHECK(zeta_exact_even(4) == SymbolicConstant(Rational(1, 90), 8));
  CHECK(zeta_exact_even(8) == SymbolicConstant(Rational(1, 9450), 16));
  auto l4 = l_value_exact(1, QuadChar(-4));
  CHECK(l4 == SymbolicConstant(Rational(1, 4), 2));
  auto l12 = l_value_exact(2, QuadChar(12));
  CHECK(l12.pi_exp2() == 4);
  CHECK(l12.radicand() == 3);
  CHECK(l12.to_double() == doctest::Approx(0.94969).epsilon(1e-5));
  CHECK_THROWS_AS(l_value_exact(1, QuadChar(12)), ParityMismatch);
  CHECK_THROWS_AS(l_value_exact(2, QuadChar(-4)), ParityMismatch);

  for (const BigInt& D : fundamental_discriminants(200)) {
    QuadChar chi(D);
    for (int s = 1; s <= 7; ++s) {
      if ((s % 2 == 0) != (chi.parity() > 0)) continue;
      const double exact = l_value_exact(s, chi).to_double();
      CHECK(std::abs(exact - l_value_numeric(s, chi)) < 1e-9);
    }
  }
}

TEST_CASE("gamma at integers and half integers") {
  CHECK(gamma_exact(5) == SymbolicConstant(24));
  CHECK(gamma_exact(Rational(1, 2)) == SymbolicConstant(1, 1));
  CHECK(gamma_exact(Rational(5, 2)) == SymbolicConstant(Rational(3, 4), 1));
  CHECK(gamma_exact(Rational(7, 2)).to_double() == doctest::Approx(std::tgamma(3.5)));
}

TEST_CASE("symbolic constants") {
  SymbolicConstant a(Rational(3, 7), 3, 6);
  SymbolicConstant b(Rational(-2, 5), -1, 10);
  CHECK((a * b) / b == a);
  CHECK_FALSE(a.is_rational());
  CHECK((a / a).is_rational());
  CHECK((a / a).to_rational() == 1);
  CHECK_THROWS_AS(a.to_rational(), NonCancellation);
  CHECK(SymbolicConstant(1, 0, 12) == SymbolicConstant(2, 0, 3));
  CHECK(SymbolicConstant::sqrt_of(Rational(1, 2)) == SymbolicConstant(Rational(1, 2), 0, 2));
  CHECK((SymbolicConstant(1, 0, 2) * SymbolicConstant(1, 0, 2)).to_rational() == 2);
}

TEST_CASE("discriminants") {
  CHECK(core_discriminant(45).fundamental == 5);
  CHECK(core_discriminant(45).f == 3);
  CHECK(core_discriminant(-4).fundamental == -4);
  CHECK(core_discriminant(-4).f == 1);
  CHECK(core_discriminant(12).fundamental == 12);
  CHECK(core_discriminant(12).f == 1);
  CHECK(core_discriminant(-48).fundamental == -3);
  CHECK(core_discriminant(-48).f == 4);
  CHECK_THROWS_AS(core_discriminant(0), InvalidDiscriminant);
  CHECK_THROWS_AS(core_discriminant(7), InvalidDiscriminant);
  CHECK(field_discriminant(3) == 12);
  CHECK(field_discriminant(-1) == -4);
  CHECK(field_discriminant(49) == 1);
  CHECK(field_discriminant(-12) == -3);
}

TEST_CASE("divisor sums and mobius") {
  CHECK(twisted_divisor_sum(0, 6) == 4);
  CHECK(twisted_divisor_sum(-1, 4) == Rational(7, 4));
  CHECK(twisted_divisor_sum(-1, 10, QuadChar(-4)) == Rational(6, 5));
  CHECK(mobius(1) == 1);
  CHECK(mobius(6) == 1);
  CHECK(mobius(12) == 0);
  CHECK(mobius(30) == -1);
}

TEST_CASE("numeric zeta") {
  CHECK(std::abs(zeta_numeric(2) - kPi * kPi / 6) < 1e-13);
  CHECK(std::abs(zeta_numeric(4) - std::pow(kPi, 4) / 90) < 1e-13);
  CHECK(std::abs(zeta_numeric(1.5) - 2.6123753486854883) < 1e-12);
  CHECK(std::abs(zeta_numeric(3) - 1.2020569031595942) < 1e-13);
}

// Inequality suites for divisor sums and L-values.

TEST_CASE("divisor sum sandwich for real characters") {
  std::mt19937_64 rng(7);
  const auto discs = fundamental_discriminants(400);
  std::uniform_int_distribution<std::size_t> pick(0, discs.size());
  std::uniform_int_distribution<long> npick(1, 100000);
  std::uniform_real_distribution<double> spick(2.0, 12.0);
  int tested = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t idx = pick(rng);
    QuadChar chi = idx == discs.size() ? QuadChar::trivial() : QuadChar(discs[idx]);
    const long n = npick(rng);
    const double s = trial % 10 == 0 ? 2.0 : spick(rng);
    double sigma = 0;
    for (long t = 1; t * t <= n; ++t) {
      if (n % t) continue;
      sigma += chi(t) * std::pow(static_cast<double>(t), -s);
      if (t * t != n) sigma += chi(n / t) * std::pow(static_cast<double>(n / t), -s);
    }
    const double z = zeta_numeric(s);
    CHECK(sigma <= z + 1e-9);
    CHECK(sigma >= 2 - z - 1e-9);
    ++tested;
  }
  CHECK(tested >= 1000);
}

TEST_CASE("mobius twisted divisor sum lower bound") {
  std::mt19937_64 rng(11);
  const auto discs = fundamental_discriminants(400);
  std::uniform_int_distribution<std::size_t> pick(0, discs.size());
  std::uniform_int_distribution<long> fpick(1, 10000);
  std::uniform_int_distribution<int> kpick(3, 14);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t idx = pick(rng);
    QuadChar chi = idx == discs.size() ? QuadChar::trivial() : QuadChar(discs[idx]);
    const long f = fpick(rng);
    const Rational k = Rational(2 * kpick(rng) - 1, 2);  // 5/2, 7/2, ...
    const int two_minus_2k = static_cast<int>(numerator(2 - 2 * k));
    const double half_minus_k = to_double(Rational(1, 2) - k);
    double total = 0;
    for (long d = 1; d <= f; ++d) {
      if (f % d) continue;
      const int mu = mobius(d);
      if (mu == 0) continue;
      total += mu * chi(d) * std::pow(static_cast<double>(d), half_minus_k) *
               to_double(twisted_divisor_sum(two_minus_2k, f / d));
    }
    CHECK(total > 2 - zeta_numeric(to_double(k - Rational(1, 2))) - 1e-9);
  }
}

TEST_CASE("L-value sandwich") {
  std::mt19937_64 rng(13);
  const auto discs = fundamental_discriminants(300);
  std::uniform_int_distribution<std::size_t> pick(0, discs.size() - 1);
  std::uniform_real_distribution<double> spick(1.05, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    QuadChar chi(discs[pick(rng)]);
    const double s = spick(rng);
    const double L = l_value_numeric(s, chi);
    const double z = zeta_numeric(s);
    CHECK(L <= z + 1e-9);
    CHECK(L >= zeta_numeric(2 * s) / z - 1e-9);
  }
}
