#pragma once

// Representation numbers N_{gamma,n}(p^nu) = #{r in L/p^nu L : Q(r - gamma) + n = 0 mod p^nu}
// and the stabilized local densities p^{nu(1-m)} N(p^nu).
//
// All counts go through the integral polynomial
//   W(r) = Q(r) - r^T S gamma,   Q(r - gamma) = W(r) + Q(gamma),
// so N(p^nu) is the number of r with W(r) = -(n + Q(gamma)) mod p^nu.

#include "borcherds/errors.hpp"
#include "borcherds/lattice.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace borcherds {

struct CountBudget {
  std::uint64_t naive_points = std::uint64_t{1} << 26;
  std::uint64_t block_points = std::uint64_t{1} << 26;
  std::uint64_t distribution_length = std::uint64_t{1} << 22;
};

/// Counts of W mod p^nu: entry c is #{r : W(r) = c mod p^nu}.
struct ValueDistribution {
  std::int64_t p = 2;
  int nu = 0;
  std::vector<BigInt> counts;

  std::int64_t modulus() const { return static_cast<std::int64_t>(counts.size()); }
  BigInt total() const;
  /// Number of r with W(r) = value mod p^nu.
  const BigInt& at(const BigInt& value) const;
};

// ---------------------------------------------------------------------------
// Brute force

/// Full enumeration of (Z/p^nu)^m. Throws BudgetExceeded above the budget.
ValueDistribution naive_distribution(const GramMatrix& gram, const std::vector<Rational>& gamma, std::int64_t p, int nu,
                                     const CountBudget& budget = {});
/// Same distribution, enumerating each connected component of the Gram
/// matrix separately and convolving the results.
ValueDistribution naive_distribution_by_components(const GramMatrix& gram, const std::vector<Rational>& gamma,
                                                   std::int64_t p, int nu, const CountBudget& budget = {});
BigInt rep_count_naive(const GramMatrix& gram, const std::vector<Rational>& gamma, const Rational& n, std::int64_t p,
                       int nu, const CountBudget& budget = {});

// ---------------------------------------------------------------------------
// Hyperbolic planes

/// N^{U}_{0,n}(p^nu); n = 0 counts as infinite valuation.
BigInt rep_count_U1(const BigInt& n, std::int64_t p, int nu);
/// N^{U(N)}_{gamma,n}(p^nu) for gamma = (g1/N, g2/N); requires n + g1 g2 / N integral.
BigInt rep_count_UN(const BigInt& g1, const BigInt& g2, const Rational& n, std::int64_t N, std::int64_t p, int nu);

// ---------------------------------------------------------------------------
// Jordan splitting over Z_(p)

enum class BlockKind { Unary, UnaryDyadic, BinaryU, BinaryV };
std::string to_string(BlockKind kind);

struct JordanBlock {
  int scale = 0;  // p^scale exactly divides the block
  BlockKind kind = BlockKind::Unary;
  std::size_t offset = 0;    // first coordinate of the block
  std::size_t size = 1;      // 1 or 2
  Matrix<Rational> gram;     // p-integral entries
};

/// S' = P^T S P is block diagonal; P has p-integral entries and a p-unit
/// determinant, so y = P^{-1} r is a bijection of (Z/p^nu)^m for every nu.
struct BlockChain {
  std::int64_t p = 2;
  std::vector<JordanBlock> blocks;
  Matrix<Rational> basis;  // P
  int max_scale() const;
  std::size_t rank() const { return basis.rows(); }
};

BlockChain block_decompose(const GramMatrix& gram, std::int64_t p);

/// Coefficients of the linear part of W in block coordinates: P^T S gamma.
std::vector<Rational> block_linear_term(const GramMatrix& gram, const BlockChain& chain,
                                        const std::vector<Rational>& gamma);

/// Distribution of sum_b Q_b(y_b) - lambda . y mod p^nu.
ValueDistribution value_distribution(const BlockChain& chain, const std::vector<Rational>& lambda, int nu,
                                     const CountBudget& budget = {});

/// Cyclic convolution of two distributions with the same modulus.
ValueDistribution convolve(const ValueDistribution& a, const ValueDistribution& b);

/// N(p^nu) through the block decomposition.
BigInt rep_count(const GramMatrix& gram, const std::vector<Rational>& gamma, const Rational& n, std::int64_t p, int nu,
                 const CountBudget& budget = {});

// ---------------------------------------------------------------------------
// Local densities

/// Memoizing evaluator for one lattice at one prime. Not thread safe.
class DensityEngine {
 public:
  DensityEngine(const GramMatrix& gram, std::int64_t p, CountBudget budget = {});

  const BlockChain& chain() const { return chain_; }

  BigInt count(const std::vector<Rational>& gamma, const Rational& n, int nu);
  /// Stabilized p^{nu(1-m)} N(p^nu); needs three consecutive equal values.
  Rational density(const std::vector<Rational>& gamma, const Rational& n);
  /// First exponent tried by density().
  int start_exponent(const Rational& n) const;

 private:
  const ValueDistribution& distribution(const std::vector<Rational>& gamma, int nu);

  GramMatrix gram_;
  std::int64_t p_;
  CountBudget budget_;
  BlockChain chain_;
  std::map<std::pair<std::vector<std::int64_t>, int>, ValueDistribution> dist_cache_;
  std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> block_cache_;
};

Rational local_density(const GramMatrix& gram, const std::vector<Rational>& gamma, const Rational& n, std::int64_t p,
                       const CountBudget& budget = {});

}  // namespace borcherds
