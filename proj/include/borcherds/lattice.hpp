#pragma once

// Even lattices, their discriminant forms L'/L, and the catalog of simple
// lattices of signature (2, n), n >= 3.

#include "borcherds/errors.hpp"
#include "borcherds/matrix.hpp"
#include "borcherds/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace borcherds {

struct Signature {
  int positive = 0;
  int negative = 0;
  bool operator==(const Signature&) const = default;
};

/// Symmetric integral Gram matrix of an even lattice with nonzero determinant.
class GramMatrix {
 public:
  GramMatrix() = default;
  /// Throws std::invalid_argument unless square, symmetric, even and nondegenerate.
  explicit GramMatrix(Matrix<BigInt> entries);

  static GramMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t rank() const { return entries_.rows(); }
  const Matrix<BigInt>& entries() const { return entries_; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  const BigInt& determinant() const { return det_; }
  Signature signature() const;

  /// Q(x) = x^T S x / 2 for a rational coordinate vector.
  Rational norm(const std::vector<Rational>& x) const;
  /// S x for a rational coordinate vector.
  std::vector<Rational> apply(const std::vector<Rational>& x) const;

  GramMatrix scaled(long factor) const;
  /// Orthogonal direct sum of blocks.
  static GramMatrix direct_sum(const std::vector<GramMatrix>& blocks);

  bool operator==(const GramMatrix& other) const { return entries_ == other.entries_; }

 private:
  Matrix<BigInt> entries_;
  BigInt det_;
};

BigInt determinant(const Matrix<BigInt>& m);

/// Element of L'/L in coordinates with respect to the chosen generators.
struct FqmElement {
  std::vector<std::int64_t> coords;
  std::int64_t order = 1;
  Rational qval;  // Q(gamma) mod 1, in [0,1)

  bool operator==(const FqmElement& other) const { return coords == other.coords; }
  bool operator<(const FqmElement& other) const { return coords < other.coords; }
};

std::string to_string(const FqmElement& g);

/// L'/L realized through the Smith normal form of the Gram matrix.
class DiscriminantGroup {
 public:
  explicit DiscriminantGroup(const GramMatrix& gram);

  const GramMatrix& gram() const { return gram_; }
  /// Elementary divisors d_1 | d_2 | ... (each > 1).
  const std::vector<std::int64_t>& invariants() const { return invariants_; }
  std::size_t size() const { return size_; }
  std::int64_t exponent() const { return exponent_; }

  /// Lifts in L' = S^{-1} Z^m of the chosen generators.
  const std::vector<std::vector<Rational>>& generator_lifts() const { return lifts_; }

  FqmElement element(std::vector<std::int64_t> coords) const;
  FqmElement zero() const;
  /// All elements in lexicographic coordinate order.
  std::vector<FqmElement> elements() const;

  std::vector<Rational> lift(const FqmElement& g) const;
  /// Class of a vector of L'; throws std::invalid_argument if x is not in L'.
  FqmElement reduce(const std::vector<Rational>& x) const;

  FqmElement add(const FqmElement& a, const FqmElement& b) const;
  FqmElement negate(const FqmElement& a) const;
  FqmElement scale(const FqmElement& a, std::int64_t t) const;

  Rational q_value(const FqmElement& g) const { return g.qval; }
  std::int64_t element_order(const FqmElement& g) const { return g.order; }

 private:
  Rational compute_q(const std::vector<std::int64_t>& coords) const;
  std::int64_t compute_order(const std::vector<std::int64_t>& coords) const;

  GramMatrix gram_;
  std::vector<std::int64_t> invariants_;
  std::vector<std::vector<Rational>> lifts_;
  Matrix<BigInt> right_inverse_;  // V^{-1}, rows aligned with invariants (after dropping units)
  std::vector<std::size_t> kept_rows_;
  std::size_t size_ = 1;
  std::int64_t exponent_ = 1;
};

/// One entry of the catalog of simple lattices.
struct LatticeSpec {
  std::string id;
  std::string genus_symbol;
  std::string construction;  // e.g. "A1(-1)+U(4)+U(4)"
  int n = 0;                 // signature (2, n)
  GramMatrix gram;
  std::int64_t split_N = 1;
  std::int64_t expected_d = 1;

  Signature signature() const { return {2, n}; }
  std::size_t rank() const { return gram.rank(); }
};

// Root lattice Cartan matrices (positive definite).
GramMatrix root_lattice_A(int n);
GramMatrix root_lattice_D(int n);
GramMatrix root_lattice_E(int n);
GramMatrix hyperbolic_plane(long N = 1);
/// The rank-3 lattice with genus symbol 8_3^{-1} used in the catalog.
GramMatrix lattice_S8();

/// Lowercase slug of a genus symbol prefixed by n, e.g. "n3_2_7p1_4p4".
std::string catalog_id(int n, const std::string& genus_symbol);

/// The 39 simple lattices; throws IntegrityError on any determinant or
/// signature mismatch.
const std::vector<LatticeSpec>& catalog();
/// Lookup by id; nullopt when unknown.
std::optional<LatticeSpec> find_lattice(const std::string& id);

}  // namespace borcherds
