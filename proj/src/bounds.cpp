#include "borcherds/bounds.hpp"

#include "borcherds/arith.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace borcherds {

BoundConstant constant_C(const Rational& k, const BigInt& d, const BigInt& N) {
  if (d < 1 || N < 1) throw std::invalid_argument("constant_C: d and N must be positive");
  const Rational m = 2 * k;
  if (denominator(m) != 1) throw std::invalid_argument("constant_C: k must be a half integer");
  const bool even = numerator(m) % 2 == 0;
  if ((even && m < 6) || (!even && m < 5)) throw UnsupportedRank("constant_C: rank " + to_string(m) + " unsupported");

  const double pi = boost::math::constants::pi<double>();
  const double kd = to_double(k);
  double value = std::pow(2.0, kd + 1) * std::pow(pi, kd) / (std::sqrt(d.convert_to<double>()) * std::tgamma(kd));
  if (even)
    value *= (2 - zeta_numeric(kd - 1)) / zeta_numeric(kd);
  else
    value *= (2 - zeta_numeric(kd - 0.5)) / zeta_numeric(kd - 0.5);
  for (const auto& P : prime_divisors(2 * d)) {
    const double p = P.convert_to<double>();
    double factor = std::pow(p, (3 - 2 * kd) * ord_p(N, P)) * (1 - 1 / p);
    if (!even) factor /= 1 - std::pow(p, 1 - 2 * kd);
    value *= factor;
  }
  return BoundConstant{k, d, N, value, value / 2};
}

BoundConstant constant_C(const LatticeSpec& spec) {
  return constant_C(Rational(static_cast<long>(spec.rank()), 2), BigInt(spec.expected_d), BigInt(spec.split_N));
}

Rational search_cap(const BoundConstant& C, const Rational& T) {
  if (T <= 0) throw std::invalid_argument("search_cap: threshold must be positive");
  const double x = std::pow(to_double(T) / C.value_used, 1 / to_double(C.k - 1));
  return Rational(static_cast<long>(std::ceil(x)));
}

Rational search_cap(const LatticeSpec& spec, const Rational& T) { return search_cap(constant_C(spec), T); }

}  // namespace borcherds
