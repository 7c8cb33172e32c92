#include "borcherds/rational.hpp"

#include <cmath>
#include <numeric>

namespace borcherds {

int ord_p(const BigInt& x, const BigInt& p) {
  if (x == 0) return kInfiniteValuation;
  BigInt y = abs(x);
  int v = 0;
  while (y % p == 0) {
    y /= p;
    ++v;
  }
  return v;
}

int ord_p(const Rational& q, const BigInt& p) {
  if (q == 0) return kInfiniteValuation;
  return ord_p(numerator(q), p) - ord_p(denominator(q), p);
}

BigInt floor(const Rational& q) {
  BigInt num = numerator(q);
  BigInt den = denominator(q);
  BigInt f = num / den;
  if (num < 0 && f * den != num) f -= 1;
  return f;
}

Rational frac(const Rational& q) { return q - Rational(floor(q)); }

BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt pow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

Rational pow(const Rational& base, int exponent) {
  if (exponent >= 0) {
    return Rational(pow(numerator(base), static_cast<unsigned>(exponent)),
                    pow(denominator(base), static_cast<unsigned>(exponent)));
  }
  if (base == 0) throw std::domain_error("pow: zero to a negative power");
  return Rational(pow(denominator(base), static_cast<unsigned>(-exponent)),
                  pow(numerator(base), static_cast<unsigned>(-exponent)));
}

std::string to_string(const BigInt& x) { return x.str(); }

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) throw std::invalid_argument("malformed rational: '" + text + "'");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("malformed rational: '" + text + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed rational: '" + text + "'");
    }
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  return Rational(num, den);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::map<BigInt, unsigned> factorize(const BigInt& n) {
  std::map<BigInt, unsigned> out;
  BigInt m = abs(n);
  if (m == 0) throw std::domain_error("factorize: zero");
  for (unsigned small : {2u, 3u, 5u}) {
    while (m % small == 0) {
      ++out[BigInt(small)];
      m /= small;
    }
  }
  // wheel mod 30
  static const unsigned steps[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  BigInt d = 7;
  unsigned i = 0;
  while (d * d <= m) {
    while (m % d == 0) {
      ++out[d];
      m /= d;
    }
    d += steps[i];
    i = (i + 1) % 8;
  }
  if (m > 1) ++out[m];
  return out;
}

std::vector<BigInt> prime_divisors(const BigInt& n) {
  std::vector<BigInt> ps;
  for (const auto& [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

SquareDecomposition square_decompose(const BigInt& n) {
  SquareDecomposition out{1, n < 0 ? BigInt(-1) : BigInt(1)};
  for (const auto& [p, e] : factorize(n)) {
    out.square_root *= pow(p, e / 2);
    if (e % 2) out.squarefree *= p;
  }
  return out;
}

bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  BigInt r = boost::multiprecision::sqrt(n);
  return r * r == n;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error("inverse_mod: not invertible");
  return ((x % m) + m) % m;
}

std::int64_t reduce_mod(const Rational& q, std::int64_t modulus) {
  if (modulus == 1) return 0;
  BigInt m(modulus);
  auto num = static_cast<std::int64_t>(mod(numerator(q), m));
  auto den = static_cast<std::int64_t>(mod(denominator(q), m));
  auto inv = inverse_mod(den, modulus);
  return static_cast<std::int64_t>((static_cast<__int128>(num) * inv) % modulus);
}

}  // namespace borcherds
