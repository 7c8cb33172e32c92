#pragma once

// Exact Fourier coefficients a_E(gamma, n) of the vector valued Eisenstein
// series of weight k = m/2 attached to an even lattice of signature (2, n),
// expansion tables and their partition into groups of identical expansions.

#include "borcherds/arith.hpp"
#include "borcherds/lattice.hpp"
#include "borcherds/local_counts.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace borcherds {

/// Local factor at a prime p not dividing 2 det(S), for the target t = -n.
Rational good_prime_factor(int m, const BigInt& det, const Rational& t, std::int64_t p);

class CoefficientCache;

class EisensteinSeries {
 public:
  explicit EisensteinSeries(const LatticeSpec& spec, CountBudget budget = {});
  EisensteinSeries(std::string id, const GramMatrix& gram, CountBudget budget = {});

  const std::string& id() const { return id_; }
  const GramMatrix& gram() const { return gram_; }
  const DiscriminantGroup& group() const { return group_; }
  /// Weight k = m/2.
  Rational weight() const { return Rational(static_cast<long>(gram_.rank()), 2); }

  /// a_E(gamma, n) for n >= 0; zero unless n + Q(gamma) is integral.
  Rational coefficient(const FqmElement& gamma, const Rational& n);
  /// The same value before the final rationality check.
  SymbolicConstant coefficient_symbolic(const FqmElement& gamma, const Rational& n);

  void attach_cache(CoefficientCache* cache) { cache_ = cache; }

 private:
  SymbolicConstant l_value(int s, const BigInt& D);
  DensityEngine& engine(std::int64_t p);

  std::string id_;
  GramMatrix gram_;
  DiscriminantGroup group_;
  CountBudget budget_;
  std::vector<std::int64_t> bad_primes_;
  std::map<std::int64_t, std::unique_ptr<DensityEngine>> engines_;
  std::map<std::pair<int, BigInt>, SymbolicConstant> l_cache_;
  std::map<std::pair<std::vector<std::int64_t>, Rational>, Rational> memo_;
  CoefficientCache* cache_ = nullptr;
};

/// Elements with identical expansions (and equal order), a proxy for the
/// orbits of the orthogonal group.
struct ExpansionGroup {
  FqmElement representative;  // lexicographically least member
  std::vector<FqmElement> members;
  std::vector<std::pair<Rational, Rational>> expansion;  // (n, a_E), n ascending

  std::size_t size() const { return members.size(); }
};

struct EisensteinTable {
  std::string id;
  Rational cap;  // every n with floor(n) <= cap is listed
  std::vector<FqmElement> elements;
  std::map<std::vector<std::int64_t>, std::vector<std::pair<Rational, Rational>>> coefficients;
  std::vector<ExpansionGroup> groups;

  /// a_E(gamma, n) when tabulated.
  std::optional<Rational> lookup(const FqmElement& gamma, const Rational& n) const;
};

/// Positive n with n + Q(gamma) integral and floor(n) <= cap, ascending.
std::vector<Rational> exponents_up_to(const Rational& qval, const Rational& cap);

EisensteinTable expansion_table(EisensteinSeries& series, const Rational& cap);

std::string table_to_csv(const EisensteinTable& table);
std::string table_to_json(const EisensteinTable& table);
std::string groups_to_json(const EisensteinTable& table);
/// "-10 q^1 - 70 q^4 ..." with nonzero terms only.
std::string format_expansion(const std::vector<std::pair<Rational, Rational>>& expansion);

/// JSON-lines store of coefficients keyed by (lattice id, gamma coords, n).
class CoefficientCache {
 public:
  /// Loads an existing file (validating every line) and appends to it.
  explicit CoefficientCache(std::string path);

  std::optional<Rational> find(const std::string& id, const std::vector<std::int64_t>& coords,
                               const Rational& n) const;
  void store(const std::string& id, const std::vector<std::int64_t>& coords, const Rational& n,
             const Rational& value);
  std::size_t size() const { return entries_.size(); }

 private:
  using Key = std::tuple<std::string, std::vector<std::int64_t>, Rational>;
  std::string path_;
  std::map<Key, Rational> entries_;
};

}  // namespace borcherds
