#pragma once

// Lower bounds -a_E(gamma, n) >= C * n^{k-1} for lattices splitting U(N) and
// the resulting truncation caps.

#include "borcherds/errors.hpp"
#include "borcherds/lattice.hpp"

namespace borcherds {

struct BoundConstant {
  Rational k;
  BigInt d;
  BigInt N;
  double value_formula = 0;
  /// Half of value_formula; see constant_C.
  double value_used = 0;
};

/// C_{k,d,N}. value_used is value_formula / 2, which reproduces the worked
/// constant for A1(-1) + U(4) + U(4). Throws UnsupportedRank when a zeta
/// argument would reach 1 (odd m < 5, even m < 6).
BoundConstant constant_C(const Rational& k, const BigInt& d, const BigInt& N);
BoundConstant constant_C(const LatticeSpec& spec);

/// Smallest integer cap with value_used * n^{k-1} > T for every n > cap.
Rational search_cap(const LatticeSpec& spec, const Rational& T);
Rational search_cap(const BoundConstant& C, const Rational& T);

}  // namespace borcherds
