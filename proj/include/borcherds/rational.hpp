#pragma once

// Exact integer/rational aliases and the small number-theoretic helpers shared
// by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace borcherds {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Valuation used for zero arguments ("infinity").
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// ord_p(x); kInfiniteValuation for x == 0.
int ord_p(const BigInt& x, const BigInt& p);
/// ord_p of a rational (may be negative).
int ord_p(const Rational& q, const BigInt& p);

/// Floor of a rational.
BigInt floor(const Rational& q);
/// q mod 1, in [0,1).
Rational frac(const Rational& q);
/// Positive remainder of a modulo m (m > 0).
BigInt mod(const BigInt& a, const BigInt& m);

BigInt pow(const BigInt& base, unsigned exponent);
Rational pow(const Rational& base, int exponent);

/// Serialize as "p/q" ("p" when q == 1).
std::string to_string(const Rational& q);
std::string to_string(const BigInt& x);
/// Parse "p/q" or "p"; throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

double to_double(const Rational& q);

/// Prime factorization by trial division (|n| >= 1). Keys are primes.
std::map<BigInt, unsigned> factorize(const BigInt& n);
std::vector<BigInt> prime_divisors(const BigInt& n);

/// Largest s with s^2 | n and the squarefree cofactor: n = s^2 * core.
struct SquareDecomposition {
  BigInt square_root;
  BigInt squarefree;
};
SquareDecomposition square_decompose(const BigInt& n);

bool is_perfect_square(const BigInt& n);

/// Inverse of a modulo m (gcd(a, m) == 1 required).
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

/// Reduce a p-integral rational into [0, modulus); throws if the
/// denominator is not invertible modulo the modulus.
std::int64_t reduce_mod(const Rational& q, std::int64_t modulus);

}  // namespace borcherds
