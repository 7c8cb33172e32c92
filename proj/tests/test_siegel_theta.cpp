#include "doctest.h"

#include "borcherds/siegel_theta.hpp"

#include "json.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace borcherds;

namespace {

constexpr double kPi = std::numbers::pi;

// Genus one theta with characteristic (a, b), by direct summation.
Complex theta1(int a, int b, Complex tau) {
  Complex s = 0;
  for (int g = -60; g <= 60; ++g) {
    const double v = g + a / 2.0;
    s += std::exp(Complex(0, kPi) * (tau * v * v + static_cast<double>(b) * v));
  }
  return s;
}

SiegelPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  for (;;) {
    const Complex z1(2 * u(rng) - 1, 0.8 + 1.2 * u(rng)), z3(2 * u(rng) - 1, 0.8 + 1.2 * u(rng));
    const Complex z2(2 * u(rng) - 1, 1.2 * u(rng) - 0.6);
    if (z1.imag() * z3.imag() - z2.imag() * z2.imag() > 0.05) return SiegelPoint(z1, z2, z3);
  }
}

double q_real(const std::array<double, 5>& x) { return x[0] * x[1] + x[2] * x[3] - x[4] * x[4]; }

std::array<BigInt, 5> ints(std::initializer_list<long> v) {
  std::array<BigInt, 5> out;
  std::size_t i = 0;
  for (long t : v) out[i++] = t;
  return out;
}

}  // namespace

TEST_CASE("even characteristics") {
  const auto& chars = even_characteristics();
  REQUIRE(chars.size() == 10);
  std::set<ThetaChar> distinct(chars.begin(), chars.end());
  CHECK(distinct.size() == 10);
  int even = 0;
  for (int m = 0; m < 16; ++m) even += ThetaChar{m >> 3 & 1, m >> 2 & 1, m >> 1 & 1, m & 1}.is_even();
  CHECK(even == 10);
  for (const auto& c : chars) CHECK(c.is_even());
}

TEST_CASE("theta constants at simple points") {
  const SiegelPoint I(Complex(0, 1), 0, Complex(0, 1));
  CHECK(std::abs(theta_constant({1, 1, 1, 1}, I)) < 1e-10);
  const double t3 = std::pow(kPi, 0.25) / std::tgamma(0.75);
  const Complex v = theta_constant({0, 0, 0, 0}, I);
  CHECK(std::abs(v - t3 * t3) < 1e-10);
  CHECK(v.real() == doctest::Approx(1.18034).epsilon(1e-5));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex t1(2 * u(rng) - 1, 0.5 + u(rng)), t2(2 * u(rng) - 1, 0.5 + u(rng));
    const SiegelPoint D(t1, 0, t2);
    for (const auto& c : even_characteristics()) {
      const Complex expected = theta1(c.a1, c.b1, t1) * theta1(c.a2, c.b2, t2);
      CHECK(std::abs(theta_constant(c, D) - expected) < 1e-10);
    }
  }
}

TEST_CASE("theta truncation and conditioning") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto Z = random_point(rng);
    for (const auto& c : even_characteristics())
      CHECK(std::abs(theta_constant(c, Z, 1e-10) - theta_constant(c, Z, 1e-15)) < 1e-10);
  }
  const SiegelPoint thin(Complex(0, 1e-4), 0, Complex(0, 1));
  CHECK_THROWS_AS(theta_constant({0, 0, 0, 0}, thin), IllConditioned);
  CHECK_THROWS_AS(theta_constant({0, 0, 0, 0}, SiegelPoint(Complex(0, 1), 0, Complex(0, 1)), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SiegelPoint(Complex(0, 1), Complex(0, 2), Complex(0, 1)), std::invalid_argument);
}

TEST_CASE("null vector of a point") {
  const auto X = x_of_z(SiegelPoint(Complex(0, 1), 0, Complex(0, 1)));
  const std::array<Complex, 5> expected = {1, 1, Complex(0, 1), Complex(0, 1), 0};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(X[i] - expected[i]) < 1e-15);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = x_of_z(random_point(rng));
    std::array<double, 5> re, im, sum;
    for (int i = 0; i < 5; ++i) {
      re[i] = x[i].real();
      im[i] = x[i].imag();
      sum[i] = re[i] + im[i];
    }
    CHECK(std::abs(q_complex(x)) < 1e-10);
    CHECK(std::abs(q_real(re) - 1) < 1e-10);
    CHECK(std::abs(q_real(im) - 1) < 1e-10);
    CHECK(std::abs(q_real(sum) - q_real(re) - q_real(im)) < 1e-10);
  }
}

TEST_CASE("congruence table") {
  CHECK(divisor_theta_class(ints({0, 0, 0, 0, 1}))->label() == "1111");
  CHECK(divisor_theta_class(ints({2, -2, 2, 2, 1}))->label() == "0000");
  CHECK(divisor_theta_class(ints({0, 2, 0, 0, 1}))->label() == "0011");
  CHECK(divisor_theta_class(ints({0, 0, 0, 0, -1}))->label() == "1111");
  CHECK_FALSE(divisor_theta_class(ints({1, 0, 0, 0, 1})).has_value());
  CHECK_THROWS_AS(divisor_theta_class(ints({1, 1, 0, 0, 0})), std::invalid_argument);

  // Every vector in the box hits at most one row; every row is hit.
  std::map<std::string, int> hits;
  long total = 0;
  for (long a = -8; a <= 8; ++a)
    for (long b = -8; b <= 8; ++b)
      for (long c = -8; c <= 8; ++c)
        for (long d = -8; d <= 8; ++d) {
          const long r = a * b + c * d + 1;
          if (r < 0) continue;
          const long e = std::lround(std::sqrt(static_cast<double>(r)));
          if (e * e != r || e > 8) continue;
          for (long s : {e, -e}) {
            ++total;
            const auto cls = divisor_theta_class(ints({a, b, c, d, s}));
            if (cls) ++hits[cls->label()];
            if (e == 0) break;
          }
        }
  CHECK(total > 1000);
  CHECK(hits.size() == 10);
}

TEST_CASE("theta divisors follow the congruence table") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> coord(-4, 4);
  int checked = 0;
  while (checked < 60) {
    std::array<BigInt, 5> x;
    for (auto& t : x) t = coord(rng);
    if (x[0] * x[1] + x[2] * x[3] - x[4] * x[4] != -1) continue;
    const auto cls = divisor_theta_class(x);
    if (!cls) continue;
    VVector v;
    for (int i = 0; i < 5; ++i) v.x[i] = Rational(x[i]);
    std::vector<SiegelPoint> pts;
    try {
      pts = heegner_sample(v, 3, rng);
    } catch (const NoSample&) {
      continue;
    }
    for (const auto& Z : pts) {
      CHECK(std::abs(theta_constant(*cls, Z)) < 1e-8);
      int zeros = 0;
      for (const auto& c : even_characteristics()) zeros += std::abs(theta_constant(c, Z)) < 1e-8;
      CHECK(zeros == 1);
    }
    ++checked;
  }
}

TEST_CASE("divisor sampling") {
  std::mt19937_64 rng(29);
  for (const auto& Z : heegner_sample(VVector{{0, 0, 0, 0, 1}}, 30, rng)) CHECK(std::abs(Z.z2) == 0.0);
  CHECK_THROWS_AS(heegner_sample(VVector{{0, 0, 0, 1, 0}}, 5, rng), NoSample);
  CHECK_THROWS_AS(heegner_sample(VVector{{1, 1, 0, 0, 0}}, 5, rng), NoSample);
  CHECK_THROWS_AS(heegner_sample(VVector{{0, 0, 0, 0, 0}}, 5, rng), std::invalid_argument);

  std::uniform_int_distribution<long> coord(-3, 3);
  int done = 0;
  while (done < 200) {
    VVector v;
    for (auto& t : v.x) t = Rational(coord(rng), 2);
    if (v.q() >= 0) continue;
    std::vector<SiegelPoint> pts;
    try {
      pts = heegner_sample(v, 2, rng);
    } catch (const NoSample&) {
      continue;
    }
    double scale = 0;
    for (const auto& t : v.x) scale = std::max(scale, std::abs(to_double(t)));
    for (const auto& Z : pts) {
      CHECK(Z.min_imag_eigenvalue() > 0);
      const double size = 1 + std::abs(Z.z1) + std::abs(Z.z2) + std::abs(Z.z3);
      CHECK(std::abs(divisor_equation(v, Z)) < 1e-12 * scale * size * size);
      // The divisor is the orthogonal complement of x at the null vector.
      std::array<Complex, 5> xc;
      for (int i = 0; i < 5; ++i) xc[i] = to_double(v.x[i]);
      CHECK(std::abs(bilinear_complex(x_of_z(Z), xc)) < 1e-9 * scale * size * size);
    }
    ++done;
  }
}

TEST_CASE("argument substitutions move divisors") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> coord(-3, 3);
  for (const auto& arg : {argument_identity(), argument_double(), argument_4_2_1(), argument_2_1_half()}) {
    CHECK(arg.s2 * arg.s2 == arg.s1 * arg.s3);
    int done = 0;
    while (done < 30) {
      VVector v;
      for (auto& t : v.x) t = Rational(coord(rng));
      if (v.q() >= 0) continue;
      std::vector<SiegelPoint> pts;
      try {
        pts = heegner_sample(v, 1, rng);
      } catch (const NoSample&) {
        continue;
      }
      const VVector y{arg.pull(v.x)};
      const SiegelPoint W = arg.apply(pts[0]);
      CHECK(std::abs(divisor_equation(y, W)) < 1e-9 * (1 + std::abs(W.z1) + std::abs(W.z3)) * 20);
      ++done;
    }
  }
  const std::array<Rational, 5> x = {Rational(1, 2), 2, 1, -1, Rational(1, 2)};
  REQUIRE(substituted_class(x, argument_double()).has_value());
  CHECK(substituted_class(x, argument_double())->label() == "0000");
  CHECK_FALSE(substituted_class(x, argument_identity()).has_value());
}

TEST_CASE("realizations") {
  CHECK(theta_cases().size() == 5);
  const std::map<std::string, std::pair<std::string, std::int64_t>> expected = {
      {"a1m4_u_u", {"n3_8_7p1", -8}},
      {"a1m1_u4_u", {"n3_2_7p1_4p2", -32}},
      {"a1m1_u4_u2", {"n3_2_7p3_4p2", -128}},
      {"a1m2_u2_u2", {"n3_2p4_4_7p1", -64}},
      {"a1m1_u4_u4", {"n3_2_7p1_4p4", -512}}};
  auto qvals = [](const DiscriminantGroup& G) {
    std::multiset<Rational> out;
    for (const auto& g : G.elements()) out.insert(g.qval);
    return out;
  };
  for (const auto& c : theta_cases()) {
    const auto& [id, det] = expected.at(c.slug);
    const auto gram = c.gram();
    CHECK(gram.determinant() == det);
    CHECK(gram.signature() == Signature{2, 3});
    const auto spec = find_lattice(id);
    REQUIRE(spec.has_value());
    const DiscriminantGroup a(gram), b(spec->gram);
    CHECK(a.invariants() == b.invariants());
    CHECK(qvals(a) == qvals(b));
  }
  CHECK_THROWS_AS(find_theta_case("nope"), std::out_of_range);
}

TEST_CASE("divisor identifications") {
  std::vector<CaseReport> reports;
  for (const auto& c : theta_cases()) {
    const auto r = verify_case(c.slug, 1);
    CHECK(r.passed());
    for (const auto& k : r.checks) {
      CHECK(k.divisor_samples >= 20);
      CHECK(k.max_on_divisor < 1e-8);
      CHECK(k.controls >= 100);
      CHECK(k.min_off_divisor > 1e-3);
      CHECK(k.exact_agreements == k.divisor_vectors);
    }
    reports.push_back(r);
  }
  CHECK(reports[0].pairs == 1);
  CHECK(reports[0].stated_is_good);
  CHECK(reports[1].torsion_elements == 1);
  CHECK(reports[1].stated_is_good);
  CHECK(reports[1].stated_order == 2);
  CHECK(reports[2].torsion_elements == 8);
  CHECK(reports[3].pairs == 10);
  CHECK(reports[4].torsion_elements == 10);
  CHECK(reports[4].pairs == 60);
  // The listed pair representative (1,0,1,0,1/2) has order 2.
  CHECK(reports[4].stated_order == 2);
  CHECK(reports[4].stated_is_good);

  std::set<std::string> thetas;
  for (const auto& k : reports[3].checks) thetas.insert(k.theta);
  CHECK(thetas.size() == 10);
  std::size_t translates = 0;
  for (const auto& k : reports[4].checks) translates += k.kind == "translate";
  CHECK(translates == 5);

  const auto parsed = nlohmann::json::parse(case_reports_to_json(reports));
  CHECK(parsed.size() == 5);
  CHECK(case_reports_to_json({verify_case("a1m1_u4_u2", 9)}) == case_reports_to_json({verify_case("a1m1_u4_u2", 9)}));
}

TEST_CASE("failures are reported") {
  VerifyOptions strict;
  strict.vanish_tol = 1e-300;
  CHECK_THROWS_AS(verify_case("a1m4_u_u", 1, strict), VerificationFailure);
  CHECK_FALSE(verify_case("a1m4_u_u", 1, strict, false).passed());
}

TEST_CASE("theta_1111 vanishes on z2 = 0") { CHECK(theta_1111_on_z2_zero(4, 50) < 1e-12); }
