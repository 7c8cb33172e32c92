#include "borcherds/arith.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <mutex>
#include <vector>

namespace borcherds {

namespace {

int kronecker_small(std::int64_t a, std::int64_t b) {
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (b < 0) {
    b = -b;
    if (a < 0) result = -result;
  }
  int v = 0;
  while (b % 2 == 0) {
    b /= 2;
    ++v;
  }
  if (v > 0) {
    if (a % 2 == 0) return 0;
    const std::int64_t r8 = ((a % 8) + 8) % 8;
    if (v % 2 == 1 && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol (a | b), b odd positive.
  a = ((a % b) + b) % b;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r8 = b % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, b);
    if (a % 4 == 3 && b % 4 == 3) result = -result;
    a %= b;
  }
  return b == 1 ? result : 0;
}

bool fits_int64(const BigInt& x) {
  static const BigInt lo = std::numeric_limits<std::int64_t>::min() / 2;
  static const BigInt hi = std::numeric_limits<std::int64_t>::max() / 2;
  return x >= lo && x <= hi;
}

}  // namespace

int kronecker(const BigInt& a, const BigInt& b) {
  if (fits_int64(a) && fits_int64(b)) return kronecker_small(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b));
  BigInt aa = a, bb = b;
  if (bb == 0) return (aa == 1 || aa == -1) ? 1 : 0;
  int result = 1;
  if (bb < 0) {
    bb = -bb;
    if (aa < 0) result = -result;
  }
  int v = 0;
  while (bb % 2 == 0) {
    bb /= 2;
    ++v;
  }
  if (v > 0) {
    if (aa % 2 == 0) return 0;
    const BigInt r8 = mod(aa, BigInt(8));
    if (v % 2 == 1 && (r8 == 3 || r8 == 5)) result = -result;
  }
  aa = mod(aa, bb);
  while (aa != 0) {
    while (aa % 2 == 0) {
      aa /= 2;
      const BigInt r8 = bb % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(aa, bb);
    if (aa % 4 == 3 && bb % 4 == 3) result = -result;
    aa %= bb;
  }
  return bb == 1 ? result : 0;
}

const Rational& bernoulli(int n) {
  static std::vector<Rational> cache{Rational(1)};
  static std::mutex guard;
  if (n < 0) throw std::invalid_argument("bernoulli: negative index");
  std::lock_guard<std::mutex> lock(guard);
  while (static_cast<int>(cache.size()) <= n) {
    const int m = static_cast<int>(cache.size());
    Rational total = 0;
    BigInt binom = 1;  // C(m+1, j)
    for (int j = 0; j < m; ++j) {
      total += Rational(binom) * cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    cache.push_back(-total / (m + 1));
  }
  return cache[n];
}

Rational bernoulli_polynomial(int k, const Rational& x) {
  Rational total = 0;
  BigInt binom = 1;
  for (int j = 0; j <= k; ++j) {
    total += Rational(binom) * bernoulli(j) * pow(x, k - j);
    binom = binom * (k - j) / (j + 1);
  }
  return total;
}

int mobius(const BigInt& n) {
  if (n == 0) throw std::domain_error("mobius: zero");
  int sign = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

// ---------------------------------------------------------------------------
// SymbolicConstant

SymbolicConstant::SymbolicConstant(Rational r, int pi_exp2, const BigInt& rad)
    : r_(std::move(r)), pi_exp2_(pi_exp2), rad_(1) {
  if (rad <= 0) throw std::domain_error("SymbolicConstant: radicand must be positive");
  if (rad != 1) {
    auto sq = square_decompose(rad);
    r_ *= Rational(sq.square_root);
    rad_ = sq.squarefree;
  }
  if (r_ == 0) {
    pi_exp2_ = 0;
    rad_ = 1;
  }
}

SymbolicConstant SymbolicConstant::sqrt_of(const Rational& x) {
  if (x <= 0) throw std::domain_error("sqrt_of: nonpositive argument");
  const BigInt den = denominator(x);
  return SymbolicConstant(Rational(1, den), 0, numerator(x) * den);
}

Rational SymbolicConstant::to_rational() const {
  if (!is_rational())
    throw NonCancellation("transcendental factor survives: " + to_string());
  return r_;
}

double SymbolicConstant::to_double() const {
  const double pi = boost::math::constants::pi<double>();
  return borcherds::to_double(r_) * std::pow(pi, pi_exp2_ / 2.0) * std::sqrt(rad_.convert_to<double>());
}

std::string SymbolicConstant::to_string() const {
  std::string s = borcherds::to_string(r_);
  if (pi_exp2_ != 0) s += " * pi^" + borcherds::to_string(Rational(pi_exp2_, 2));
  if (rad_ != 1) s += " * sqrt(" + rad_.str() + ")";
  return s;
}

SymbolicConstant SymbolicConstant::operator*(const SymbolicConstant& o) const {
  return SymbolicConstant(r_ * o.r_, pi_exp2_ + o.pi_exp2_, rad_ * o.rad_);
}

SymbolicConstant SymbolicConstant::operator/(const SymbolicConstant& o) const {
  if (o.r_ == 0) throw std::domain_error("SymbolicConstant: division by zero");
  // 1/sqrt(rad) = sqrt(rad)/rad
  return SymbolicConstant(r_ / (o.r_ * Rational(o.rad_)), pi_exp2_ - o.pi_exp2_, rad_ * o.rad_);
}

// ---------------------------------------------------------------------------
// L-values

Rational generalized_bernoulli(int k, const QuadChar& chi) {
  if (k < 0) throw std::invalid_argument("generalized_bernoulli: negative k");
  const BigInt f = chi.conductor();
  if (f == 1) return k == 1 ? Rational(1, 2) : bernoulli(k);
  // Power sums S_e = sum chi(a) a^e, then B_{k,chi} = (1/f) sum_j C(k,j) B_j f^j S_{k-j}.
  const auto fi = static_cast<std::int64_t>(f);
  const auto D = static_cast<std::int64_t>(chi.modulus());
  std::vector<BigInt> S(k + 1, BigInt(0));
  for (std::int64_t a = 1; a <= fi; ++a) {
    const int c = kronecker_small(D, a);
    if (c == 0) continue;
    BigInt power = 1;
    for (int e = 0; e <= k; ++e) {
      if (c > 0)
        S[e] += power;
      else
        S[e] -= power;
      power *= a;
    }
  }
  Rational total = 0;
  BigInt binom = 1, fpow = 1;
  for (int j = 0; j <= k; ++j) {
    total += Rational(binom * fpow) * bernoulli(j) * Rational(S[k - j]);
    binom = binom * (k - j) / (j + 1);
    fpow *= f;
  }
  return total / Rational(f);
}

SymbolicConstant l_value_exact(int s, const QuadChar& chi) {
  if (s < 1) throw std::invalid_argument("l_value_exact: s must be positive");
  const int delta = chi.parity() > 0 ? 0 : 1;
  if ((s - delta) % 2 != 0)
    throw ParityMismatch("l_value_exact: character parity does not match s = " + std::to_string(s));
  if (chi.is_trivial() && s == 1) throw std::domain_error("l_value_exact: pole of zeta at 1");
  const BigInt f = chi.conductor();
  // L(s) = (-1)^(1 + (s - delta)/2) * sqrt(f)/2 * (2 pi / f)^s * B_{s,chi} / s!
  BigInt fact = 1;
  for (int i = 2; i <= s; ++i) fact *= i;
  Rational r = Rational(pow(BigInt(2), static_cast<unsigned>(s)), 2 * pow(f, static_cast<unsigned>(s)) * fact) *
               generalized_bernoulli(s, chi);
  if (((1 + (s - delta) / 2) % 2) != 0) r = -r;
  return SymbolicConstant(r, 2 * s, f);
}

SymbolicConstant zeta_exact_even(int s) {
  if (s < 2 || s % 2 != 0) throw std::invalid_argument("zeta_exact_even: argument must be even and >= 2");
  return l_value_exact(s, QuadChar::trivial());
}

SymbolicConstant gamma_exact(const Rational& k) {
  if (k <= 0) throw std::domain_error("gamma_exact: nonpositive argument");
  if (denominator(k) == 1) {
    BigInt fact = 1;
    for (BigInt i = 2; i < numerator(k); ++i) fact *= i;
    return SymbolicConstant(Rational(fact));
  }
  if (denominator(k) != 2) throw std::domain_error("gamma_exact: argument must be an integer or half integer");
  // Gamma(j + 1/2) = (2j)! / (4^j j!) sqrt(pi)
  const auto j = static_cast<unsigned>((numerator(k) - 1) / 2);
  BigInt f2j = 1, fj = 1;
  for (unsigned i = 2; i <= 2 * j; ++i) f2j *= i;
  for (unsigned i = 2; i <= j; ++i) fj *= i;
  return SymbolicConstant(Rational(f2j, pow(BigInt(4), j) * fj), 1);
}

// ---------------------------------------------------------------------------
// Discriminants and divisor sums

CoreDiscriminant core_discriminant(const BigInt& D) {
  const BigInt r4 = mod(D, BigInt(4));
  if (D == 0 || r4 == 2 || r4 == 3)
    throw InvalidDiscriminant("not a discriminant: " + D.str());
  auto sq = square_decompose(D);
  if (mod(sq.squarefree, BigInt(4)) == 1) return {sq.squarefree, sq.square_root};
  return {4 * sq.squarefree, sq.square_root / 2};
}

BigInt field_discriminant(const BigInt& c) {
  if (c == 0) throw InvalidDiscriminant("field_discriminant: zero");
  auto sq = square_decompose(c);
  if (mod(sq.squarefree, BigInt(4)) == 1) return sq.squarefree;
  return 4 * sq.squarefree;
}

Rational twisted_divisor_sum(int s, const BigInt& n, const QuadChar& chi) {
  if (n < 1) throw std::invalid_argument("twisted_divisor_sum: n must be positive");
  std::vector<BigInt> divisors{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = divisors.size();
    BigInt pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divisors.push_back(divisors[j] * pk);
    }
  }
  Rational total = 0;
  for (const auto& t : divisors) {
    const int c = chi(t);
    if (c == 0) continue;
    total += c * pow(Rational(t), s);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Numerics

double hurwitz_zeta(double s, double q) {
  if (s < 1) throw std::domain_error("hurwitz_zeta: s must be >= 1");
  if (q <= 0) throw std::domain_error("hurwitz_zeta: q must be positive");
  constexpr int N = 24;
  constexpr int J = 12;
  long double total = 0;
  for (int n = 0; n < N; ++n) total += std::pow(static_cast<long double>(n + q), -s);
  const long double x = N + q;
  total += (s == 1) ? -std::log(x) : std::pow(x, 1 - s) / (s - 1);
  total += std::pow(x, -s) / 2;
  // sum_j B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^(-s-2j+1)
  long double rising = s;  // s (s+1) ... (s+2j-2)
  long double fact = 2;    // (2j)!
  for (int j = 1; j <= J; ++j) {
    total += bernoulli(2 * j).convert_to<long double>() / fact * rising * std::pow(x, -s - 2 * j + 1);
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return static_cast<double>(total);
}

double zeta_numeric(double s) {
  if (s <= 1) throw std::domain_error("zeta_numeric: s must exceed 1");
  return hurwitz_zeta(s, 1.0);
}

double l_value_numeric(double s, const QuadChar& chi) {
  if (chi.is_trivial()) return zeta_numeric(s);
  const auto f = static_cast<std::int64_t>(chi.conductor());
  const auto D = static_cast<std::int64_t>(chi.modulus());
  long double total = 0;
  for (std::int64_t a = 1; a <= f; ++a) {
    const int c = kronecker_small(D, a);
    if (c != 0) total += c * static_cast<long double>(hurwitz_zeta(s, static_cast<double>(a) / f));
  }
  return static_cast<double>(total * std::pow(static_cast<long double>(f), -s));
}

}  // namespace borcherds
