#include "doctest.h"

#include "borcherds/eisenstein.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace borcherds;

namespace {

std::vector<Rational> vec(std::initializer_list<Rational> xs) { return std::vector<Rational>(xs); }

EisensteinSeries& series_512() {
  static EisensteinSeries s(*find_lattice("n3_2_7p1_4p4"));
  return s;
}

}  // namespace

TEST_CASE("coefficients on A1(-1) + U(4) + U(4)") {
  auto& E = series_512();
  const auto& G = E.group();
  auto zero = G.zero();
  CHECK(E.coefficient(zero, 0) == 1);
  CHECK(E.coefficient(zero, 1) == -10);
  CHECK(E.coefficient(zero, 4) == -70);
  CHECK(E.coefficient(zero, 5) == -48);
  auto g10 = G.reduce(vec({Rational(1, 2), 0, 0, 0, 0}));
  CHECK(E.coefficient(g10, Rational(1, 4)) == -1);
  CHECK(E.coefficient(g10, Rational(9, 4)) == -25);
  auto g6 = G.reduce(vec({Rational(1, 2), Rational(1, 2), Rational(1, 2), 0, 0}));
  CHECK(E.coefficient(g6, Rational(5, 4)) == -8);
  CHECK(E.coefficient(g6, Rational(13, 4)) == -40);
  auto g15 = G.reduce(vec({0, Rational(1, 4), 0, 0, 0}));
  CHECK(E.coefficient(g15, 1) == -4);
  auto g120 = G.reduce(vec({Rational(1, 2), Rational(1, 4), 0, Rational(1, 4), 0}));
  CHECK(E.coefficient(g120, Rational(1, 4)) == Rational(-1, 2));
  CHECK(E.coefficient(g120, Rational(49, 4)) == Rational(-337, 2));
  // off support
  CHECK(E.coefficient(g120, Rational(1, 2)) == 0);
  CHECK(E.coefficient(g10, 0) == 0);
}

TEST_CASE("unimodular calibration") {
  EisensteinSeries e8(*find_lattice("n10_1p1"));
  CHECK(e8.coefficient(e8.group().zero(), 1) == -504);
  CHECK(e8.coefficient(e8.group().zero(), 2) == -504 * 33);
  EisensteinSeries e16(*find_lattice("n18_1p1"));
  CHECK(e16.coefficient(e16.group().zero(), 1) == -264);
  CHECK(e16.coefficient(e16.group().zero(), 2) == -264 * 513);
  EisensteinSeries e24(*find_lattice("n26_1p1"));
  CHECK(e24.coefficient(e24.group().zero(), 1) == -24);
  CHECK(e24.coefficient(e24.group().zero(), 2) == -24 * 8193);
}

TEST_CASE("good prime factors match stabilized counts") {
  // at a prime not dividing 2 det the closed form equals the counted density
  for (const char* id : {"n3_2_7p1", "n4_3p1", "n5_4_5m1", "n6_5p1", "n3_2_7p1_3m2"}) {
    auto spec = *find_lattice(id);
    DiscriminantGroup G(spec.gram);
    const int m = static_cast<int>(spec.rank());
    for (std::int64_t p : {3, 5, 7}) {
      if (spec.expected_d % p == 0) continue;
      DensityEngine engine(spec.gram, p);
      for (const auto& g : G.elements()) {
        for (int e = 0; e <= (p == 7 ? 1 : 2); ++e) {
          const Rational n = Rational(pow(BigInt(p), static_cast<unsigned>(e)) * (e + 1)) - g.qval;
          CHECK(engine.density(G.lift(g), n) == good_prime_factor(m, spec.gram.determinant(), -n, p));
        }
      }
    }
  }
}

TEST_CASE("expansion table groups") {
  auto table = expansion_table(series_512(), 12);
  std::vector<std::size_t> sizes;
  for (const auto& g : table.groups) sizes.push_back(g.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 6, 10, 15, 120, 120, 120, 120});
  std::size_t total = 0;
  for (auto s : sizes) total += s;
  CHECK(total == 512);
  bool found6 = false;
  for (const auto& g : table.groups)
    if (g.size() == 6) {
      found6 = true;
      CHECK(format_expansion(g.expansion).rfind("-8 q^5/4 - 40 q^13/4", 0) == 0);
    }
  CHECK(found6);
  CHECK(exponents_up_to(Rational(3, 4), 12).back() == Rational(49, 4));
  CHECK(exponents_up_to(0, 2) == std::vector<Rational>{1, 2});
}

TEST_CASE("coefficient invariants") {
  for (const char* id : {"n3_8_7p1", "n4_3p1", "n5_4_5m1", "n3_8_3m1", "n7_4_3m1"}) {
    EisensteinSeries E(*find_lattice(id));
    const auto& G = E.group();
    for (const auto& g : G.elements()) {
      for (const auto& n : exponents_up_to(g.qval, 4)) {
        const Rational a = E.coefficient(g, n);
        CHECK(a <= 0);
        CHECK(a == E.coefficient(G.negate(g), n));
        CHECK(E.coefficient_symbolic(g, n).is_rational());
      }
    }
  }
}

TEST_CASE("coefficient cache round trip") {
  const auto path = std::filesystem::temp_directory_path() / "borcherds_cache_test.jsonl";
  std::filesystem::remove(path);
  auto spec = *find_lattice("n3_8_7p1");
  std::vector<Rational> first;
  {
    CoefficientCache cache(path.string());
    EisensteinSeries E(spec);
    E.attach_cache(&cache);
    for (const auto& g : E.group().elements()) first.push_back(E.coefficient(g, exponents_up_to(g.qval, 3).back()));
    CHECK(cache.size() > 0);
  }
  CoefficientCache reload(path.string());
  EisensteinSeries E(spec);
  E.attach_cache(&reload);
  std::size_t i = 0;
  for (const auto& g : E.group().elements()) {
    const auto n = exponents_up_to(g.qval, 3).back();
    CHECK(reload.find(spec.id, g.coords, n).has_value());
    CHECK(E.coefficient(g, n) == first[i++]);
  }
  {
    std::ofstream bad(path, std::ios::app);
    bad << "{not json\n";
  }
  CHECK_THROWS(CoefficientCache(path.string()));
  std::filesystem::remove(path);
}
