#pragma once

// Nonnegative symmetric principal parts whose Borcherds products have
// singular weight n/2 - 1.

#include "borcherds/eisenstein.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace borcherds {

/// a_f(gamma, -n) for n > 0, keyed by (gamma coords, n).
struct PrincipalPart {
  std::map<std::pair<std::vector<std::int64_t>, Rational>, BigInt> coefficients;
};

struct GoodIndex {
  FqmElement gamma;  // canonical member of {gamma, -gamma}
  Rational n;        // the principal part term is q^{-n}
  Rational a_E;      // a_E(gamma, n) < 0
  Rational unit;     // weight contributed by multiplicity one
  bool two_torsion = false;
  std::size_t group = 0;  // index into EisensteinTable::groups
};

/// Good indices sharing expansion group and exponent.
struct GoodClass {
  std::size_t group = 0;
  std::size_t group_size = 0;
  FqmElement representative;  // of the expansion group
  Rational n;
  Rational a_E;
  Rational unit;
  bool two_torsion = false;
  std::vector<GoodIndex> members;
};

struct SolutionFamily {
  std::vector<std::pair<std::size_t, BigInt>> multiplicities;  // (class index, total multiplicity)
  BigInt principal_parts;  // number of concrete principal parts in the family
  PrincipalPart representative;
  Rational achieved_weight;
};

struct ClassificationReport {
  std::string id;
  std::string genus_symbol;
  int n = 0;
  Rational weight;  // n/2 - 1
  Rational cap;
  std::vector<GoodClass> classes;
  std::vector<SolutionFamily> solutions;
  std::size_t group_count = 0;

  bool admits() const { return !solutions.empty(); }
};

/// Throws CapInsufficient if the table stops below search_cap(spec, 2w).
std::vector<GoodIndex> good_indices(const LatticeSpec& spec, const EisensteinTable& table);
std::vector<GoodClass> good_classes(const std::vector<GoodIndex>& indices);

/// -1/2 sum_gamma sum_n a_f(gamma, -n) a_E(gamma, n) over all of L'/L.
Rational principal_part_weight(const PrincipalPart& part, const EisensteinTable& table, const DiscriminantGroup& G);

ClassificationReport solve_singular_weight(const LatticeSpec& spec, CoefficientCache* cache = nullptr);
std::vector<ClassificationReport> classify_catalog(CoefficientCache* cache = nullptr);

/// Ids of the genera admitting products of singular weight, as expected.
const std::set<std::string>& expected_admitting_ids();

std::string report_to_json(const std::vector<ClassificationReport>& reports);
std::string report_to_table(const std::vector<ClassificationReport>& reports);

}  // namespace borcherds
