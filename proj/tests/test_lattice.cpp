#include "doctest.h"

#include "borcherds/lattice.hpp"

#include <set>

using namespace borcherds;

TEST_CASE("gram matrix validation") {
  CHECK_THROWS_AS(GramMatrix::from_rows({{1, 0}, {0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(GramMatrix::from_rows({{2, 1}, {0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(GramMatrix::from_rows({{2, 2}, {2, 2}}), std::invalid_argument);
  auto u = hyperbolic_plane(3);
  CHECK(u.determinant() == -9);
  CHECK(u.signature() == Signature{1, 1});
}

TEST_CASE("root lattice determinants") {
  for (int n = 1; n <= 7; ++n) CHECK(root_lattice_A(n).determinant() == n + 1);
  for (int n = 4; n <= 7; ++n) CHECK(root_lattice_D(n).determinant() == 4);
  CHECK(root_lattice_E(6).determinant() == 3);
  CHECK(root_lattice_E(7).determinant() == 2);
  CHECK(root_lattice_E(8).determinant() == 1);
  CHECK(root_lattice_E(8).signature() == Signature{8, 0});
  CHECK(lattice_S8().determinant() == 8);
  CHECK(lattice_S8().signature() == Signature{1, 2});
}

TEST_CASE("catalog") {
  const auto& cat = catalog();
  REQUIRE(cat.size() == 39);
  int n3 = 0;
  std::set<std::string> ids;
  for (const auto& spec : cat) {
    if (spec.n == 3) ++n3;
    ids.insert(spec.id);
    CHECK(abs(spec.gram.determinant()) == spec.expected_d);
    CHECK(spec.gram.signature() == spec.signature());
    DiscriminantGroup G(spec.gram);
    CHECK(static_cast<std::int64_t>(G.size()) == spec.expected_d);
  }
  CHECK(n3 == 15);
  CHECK(ids.size() == 39);
  CHECK(find_lattice("n3_2_7p1_4p4").has_value());
  CHECK(find_lattice("n3_2p4_4_7p1").has_value());
  CHECK(find_lattice("n6_2m6").has_value());
  CHECK_FALSE(find_lattice("nope").has_value());

  auto s8 = find_lattice("n3_8_3m1");
  REQUIRE(s8);
  CHECK(s8->gram(0, 0) == -8);
  CHECK(s8->gram(1, 2) == -1);

  auto a1m4 = find_lattice("n3_8_7p1");
  REQUIRE(a1m4);
  CHECK(a1m4->gram(0, 0) == -8);
  CHECK(a1m4->expected_d == 8);
  CHECK(find_lattice("n3_2p4_4_7p1")->gram(0, 0) == -4);
  CHECK(find_lattice("n3_2_7p1_4p4")->split_N == 4);
}

TEST_CASE("catalog ids") {
  CHECK(catalog_id(3, "2_7^{+1}4^{+4}") == "n3_2_7p1_4p4");
  CHECK(catalog_id(6, "2^{-2}") == "n6_2m2");
  CHECK_THROWS(catalog_id(3, "2_7"));
}

TEST_CASE("discriminant groups") {
  CHECK(DiscriminantGroup(hyperbolic_plane(1)).size() == 1);
  DiscriminantGroup u4(hyperbolic_plane(4));
  CHECK(u4.invariants() == std::vector<std::int64_t>{4, 4});

  DiscriminantGroup g(find_lattice("n3_8_7p1")->gram);
  REQUIRE(g.invariants() == std::vector<std::int64_t>{8});
  auto gen = g.element({1});
  CHECK(gen.qval == Rational(15, 16));
  CHECK(gen.order == 8);
  CHECK(g.zero().qval == 0);
  CHECK(g.zero().order == 1);

  DiscriminantGroup h(find_lattice("n3_2_7p1_4p4")->gram);
  CHECK(h.invariants() == std::vector<std::int64_t>{2, 4, 4, 4, 4});
  CHECK(h.element({1, 0, 0, 0, 0}).order == 2);
  CHECK(h.element({0, 1, 0, 0, 0}).order == 4);
}

TEST_CASE("discriminant group properties on the catalog") {
  for (const auto& spec : catalog()) {
    DiscriminantGroup G(spec.gram);
    if (G.size() > 600) continue;
    int two_torsion = 0;
    for (const auto& g : G.elements()) {
      auto neg = G.negate(g);
      CHECK(G.negate(neg) == g);
      CHECK(neg.qval == g.qval);
      if (neg == g) ++two_torsion;
      CHECK(G.exponent() % g.order == 0);
      // lift independence: shift by a lattice vector
      auto x = G.lift(g);
      std::vector<Rational> y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += static_cast<long>(i % 3) - 1;
      CHECK(frac(spec.gram.norm(y)) == g.qval);
      CHECK(G.reduce(y) == g);
      // lifts lie in L'
      for (const auto& s : spec.gram.apply(x)) CHECK(denominator(s) == 1);
    }
    std::size_t expected = 1;
    for (auto d : G.invariants()) expected *= (d % 2 == 0) ? 2 : 1;
    CHECK(two_torsion == static_cast<int>(expected));
  }
}
