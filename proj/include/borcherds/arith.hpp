#pragma once

// Kronecker symbols, Bernoulli numbers, exact Dirichlet L-values of quadratic
// characters and a few numeric helpers used for bounds.

#include "borcherds/errors.hpp"
#include "borcherds/rational.hpp"

#include <string>

namespace borcherds {

int kronecker(const BigInt& a, const BigInt& b);

/// B_n with B_1 = -1/2.
const Rational& bernoulli(int n);
Rational bernoulli_polynomial(int k, const Rational& x);

int mobius(const BigInt& n);

/// x -> (D | x). D = 1 is the trivial character.
class QuadChar {
 public:
  QuadChar() = default;
  explicit QuadChar(BigInt D) : D_(std::move(D)) {}

  static QuadChar trivial() { return QuadChar(1); }

  const BigInt& modulus() const { return D_; }
  BigInt conductor() const { return abs(D_); }
  bool is_trivial() const { return D_ == 1; }
  /// chi(-1) for a fundamental discriminant.
  int parity() const { return D_ < 0 ? -1 : 1; }

  int operator()(const BigInt& x) const { return kronecker(D_, x); }

 private:
  BigInt D_ = 1;
};

/// r * pi^(pi_exp2 / 2) * sqrt(rad), rad squarefree.
/// The pi exponent is kept in half units because Gamma at half integers
/// contributes sqrt(pi).
class SymbolicConstant {
 public:
  SymbolicConstant() = default;
  SymbolicConstant(Rational r, int pi_exp2 = 0, const BigInt& rad = 1);

  static SymbolicConstant pi_power(int e) { return SymbolicConstant(1, 2 * e); }
  static SymbolicConstant sqrt_of(const Rational& x);

  const Rational& rational_part() const { return r_; }
  int pi_exp2() const { return pi_exp2_; }
  const BigInt& radicand() const { return rad_; }

  bool is_rational() const { return r_ == 0 || (pi_exp2_ == 0 && rad_ == 1); }
  /// Throws NonCancellation unless is_rational().
  Rational to_rational() const;
  double to_double() const;
  std::string to_string() const;

  SymbolicConstant operator*(const SymbolicConstant& o) const;
  SymbolicConstant operator/(const SymbolicConstant& o) const;
  bool operator==(const SymbolicConstant& o) const = default;

 private:
  Rational r_ = 0;
  int pi_exp2_ = 0;
  BigInt rad_ = 1;
};

/// B_{k,chi} = f^{k-1} sum_{a=1}^{f} chi(a) B_k(a/f).
Rational generalized_bernoulli(int k, const QuadChar& chi);

/// L(s, chi) for chi primitive with chi(-1) = (-1)^s; throws ParityMismatch.
SymbolicConstant l_value_exact(int s, const QuadChar& chi);
/// zeta(s) for even s >= 2.
SymbolicConstant zeta_exact_even(int s);
/// Gamma(k) for k a positive integer or half integer.
SymbolicConstant gamma_exact(const Rational& k);

struct CoreDiscriminant {
  BigInt fundamental;
  BigInt f;  // D = fundamental * f^2
};
/// Throws InvalidDiscriminant unless D != 0 and D = 0, 1 mod 4.
CoreDiscriminant core_discriminant(const BigInt& D);
/// Discriminant of Q(sqrt(c)); 1 when c is a positive square.
BigInt field_discriminant(const BigInt& c);

/// sum_{t | n} chi(t) t^s.
Rational twisted_divisor_sum(int s, const BigInt& n, const QuadChar& chi = QuadChar::trivial());

/// Hurwitz zeta(s, q) for s >= 1 by Euler-Maclaurin. At s = 1 the pole is
/// dropped and -digamma(q) is returned, so only combinations whose weights
/// sum to zero are meaningful there.
double hurwitz_zeta(double s, double q);
double zeta_numeric(double s);
/// Independent numeric L(s, chi) via Hurwitz zeta values.
double l_value_numeric(double s, const QuadChar& chi);

}  // namespace borcherds
