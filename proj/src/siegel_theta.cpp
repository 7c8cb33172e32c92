#include "borcherds/siegel_theta.hpp"

#include "borcherds/classifier.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace borcherds {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kIllConditioned = 1e-3;
constexpr double kSampleFloor = 2e-2;
constexpr double kControlFloor = 5e-2;

using Vec5 = std::array<Rational, 5>;

double rounded12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return std::strtod(buf, nullptr);
}

std::string vec_string(const Vec5& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < 5; ++i) s += (i ? "," : "") + to_string(x[i]);
  return s + ")";
}

Complex cplx(const Rational& q) { return Complex(to_double(q), 0.0); }

// Row i of the congruence table belongs to even_characteristics()[i].
constexpr int kRows[10][4] = {{2, 2, 2, 2}, {0, 2, 2, 0}, {0, 2, 0, 2}, {0, 2, 0, 0}, {2, 0, 0, 2},
                              {0, 0, 0, 2}, {2, 0, 2, 0}, {0, 0, 2, 0}, {2, 0, 0, 0}, {0, 0, 0, 0}};

}  // namespace

// ---------------------------------------------------------------------------
// Points and characteristics

SiegelPoint::SiegelPoint(Complex a, Complex b, Complex c) : z1(a), z2(b), z3(c) {
  if (!(z1.imag() > 0) || !(det_imag() > 0)) throw std::invalid_argument("SiegelPoint: Im Z not positive definite");
}

double SiegelPoint::min_imag_eigenvalue() const {
  const double a = z1.imag(), b = z2.imag(), c = z3.imag();
  return (a + c) / 2 - std::hypot((a - c) / 2, b);
}

std::string ThetaChar::label() const {
  return std::to_string(a1) + std::to_string(a2) + std::to_string(b1) + std::to_string(b2);
}

const std::vector<ThetaChar>& even_characteristics() {
  static const std::vector<ThetaChar> chars = {{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 1, 1}, {0, 1, 0, 0},
                                               {0, 1, 1, 0}, {1, 0, 0, 0}, {1, 0, 0, 1}, {1, 1, 0, 0}, {1, 1, 1, 1}};
  return chars;
}

std::string VVector::to_string() const { return vec_string(x); }

Rational q_standard(const Vec5& x) { return x[0] * x[1] + x[2] * x[3] - x[4] * x[4]; }

Rational bilinear_standard(const Vec5& x, const Vec5& y) {
  return x[0] * y[1] + x[1] * y[0] + x[2] * y[3] + x[3] * y[2] - 2 * x[4] * y[4];
}

// ---------------------------------------------------------------------------
// Theta constants

Complex theta_constant(const ThetaChar& c, const SiegelPoint& Z, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("theta_constant: tol must be positive");
  const double lam = Z.min_imag_eigenvalue();
  if (lam < kIllConditioned) throw IllConditioned("theta_constant: smallest eigenvalue of Im Z is " + std::to_string(lam));

  // Shell k (max norm of g) has 8k points, each with |g + a/2| >= k - 1/2.
  auto tail = [&](int R) {
    double s = 0;
    for (int k = R + 1;; ++k) {
      const double t = 8.0 * k * std::exp(-kPi * lam * (k - 0.5) * (k - 0.5));
      s += t;
      if (k > R + 3 && t < tol * 1e-6) break;
    }
    return s;
  };
  int R = 1;
  while (tail(R) >= tol) ++R;

  Complex sum = 0;
  const Complex ipi(0, kPi);
  for (int g1 = -R; g1 <= R; ++g1) {
    const double v1 = g1 + c.a1 / 2.0;
    for (int g2 = -R; g2 <= R; ++g2) {
      const double v2 = g2 + c.a2 / 2.0;
      const Complex e = Z.z1 * (v1 * v1) + 2.0 * Z.z2 * (v1 * v2) + Z.z3 * (v2 * v2) + c.b1 * v1 + c.b2 * v2;
      sum += std::exp(ipi * e);
    }
  }
  return sum;
}

std::array<Complex, 5> x_of_z(const SiegelPoint& Z) {
  const double s = std::sqrt(Z.det_imag());
  return {-Z.det() / s, Complex(1.0 / s), Z.z1 / s, Z.z3 / s, Z.z2 / s};
}

Complex q_complex(const std::array<Complex, 5>& x) { return x[0] * x[1] + x[2] * x[3] - x[4] * x[4]; }

Complex bilinear_complex(const std::array<Complex, 5>& x, const std::array<Complex, 5>& y) {
  return x[0] * y[1] + x[1] * y[0] + x[2] * y[3] + x[3] * y[2] - 2.0 * x[4] * y[4];
}

// ---------------------------------------------------------------------------
// Divisors

std::optional<ThetaChar> divisor_theta_class(const std::array<BigInt, 5>& x) {
  if (x[0] * x[1] + x[2] * x[3] - x[4] * x[4] != -1)
    throw std::invalid_argument("divisor_theta_class: Q(x) must be -1");
  const BigInt x5 = mod(x[4], 4);
  if (x5 != 1 && x5 != 3) return std::nullopt;
  std::optional<ThetaChar> found;
  for (int r = 0; r < 10; ++r) {
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) ok = mod(x[i], 4) == kRows[r][i];
    if (!ok) continue;
    if (found) throw IntegrityError("divisor_theta_class: overlapping table rows");
    found = even_characteristics()[r];
  }
  return found;
}

Complex divisor_equation(const VVector& v, const SiegelPoint& Z) {
  const auto& x = v.x;
  return cplx(x[1]) * (Z.z2 * Z.z2 - Z.z1 * Z.z3) + cplx(x[3]) * Z.z1 - 2.0 * cplx(x[4]) * Z.z2 + cplx(x[2]) * Z.z3 +
         cplx(x[0]);
}

std::vector<SiegelPoint> heegner_sample(const VVector& v, std::size_t count, std::mt19937_64& rng) {
  if (std::all_of(v.x.begin(), v.x.end(), [](const Rational& t) { return t == 0; }))
    throw std::invalid_argument("heegner_sample: zero vector");
  if (v.q() >= 0) throw NoSample("heegner_sample: divisor of " + v.to_string() + " is empty (Q >= 0)");

  double x[5];
  double scale = 0;
  for (int i = 0; i < 5; ++i) {
    x[i] = to_double(v.x[i]);
    scale = std::max(scale, std::abs(x[i]));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto region = [&] { return Complex(uni(-1, 1), uni(0.8, 2.0)); };

  std::vector<int> linear_modes;  // which coordinate a linear equation is solved for
  if (x[1] == 0) {
    if (x[4] != 0) linear_modes.push_back(1);
    if (x[3] != 0) linear_modes.push_back(0);
    if (x[2] != 0) linear_modes.push_back(2);
  }

  std::vector<SiegelPoint> out;
  const std::size_t max_attempts = 400 * count + 2000;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    Complex z1, z2, z3;
    if (x[1] != 0) {
      // With W = Z - C, C = (x3, x5, x4)/x2, the equation reads det W = Q(x)/x2^2 = -r^2.
      const double r = std::sqrt(-to_double(v.q())) / std::abs(x[1]);
      const double t = uni(-0.7, 0.7);
      const Complex w1(uni(-r, r), r * std::exp(t));
      const Complex w3(uni(-r, r), r * std::exp(-t + uni(-0.3, 0.3)));
      Complex w2 = std::sqrt(w1 * w3 + r * r);
      if (unit(rng) < 0.5) w2 = -w2;
      z1 = w1 + x[2] / x[1];
      z2 = w2 + x[4] / x[1];
      z3 = w3 + x[3] / x[1];
    } else {
      z1 = region();
      z3 = region();
      z2 = Complex(uni(-1, 1), uni(-0.6, 0.6));
      switch (linear_modes[attempt % linear_modes.size()]) {
        case 1: z2 = (x[3] * z1 + x[2] * z3 + x[0]) / (2 * x[4]); break;
        case 0: z1 = -(-2 * x[4] * z2 + x[2] * z3 + x[0]) / x[3]; break;
        default: z3 = -(x[3] * z1 - 2 * x[4] * z2 + x[0]) / x[2]; break;
      }
    }
    if (!(z1.imag() > 0) || !(z1.imag() * z3.imag() - z2.imag() * z2.imag() > 0)) continue;
    SiegelPoint Z(z1, z2, z3);
    if (Z.min_imag_eigenvalue() < kSampleFloor) continue;
    const double size = 1 + std::abs(z1) + std::abs(z2) + std::abs(z3);
    if (std::abs(divisor_equation(v, Z)) > 1e-12 * scale * size * size) continue;
    out.push_back(Z);
  }
  if (out.size() < count)
    throw NoSample("heegner_sample: only " + std::to_string(out.size()) + " points for " + v.to_string());
  return out;
}

// ---------------------------------------------------------------------------
// Argument substitutions

SiegelPoint ThetaArgument::apply(const SiegelPoint& Z) const {
  return SiegelPoint(to_double(s1) * Z.z1, to_double(s2) * Z.z2, to_double(s3) * Z.z3);
}

Vec5 ThetaArgument::pull(const Vec5& x) const { return {x[0], x[1] / (s1 * s3), x[2] / s3, x[3] / s1, x[4] / s2}; }

ThetaArgument argument_identity() { return {"Z", 1, 1, 1}; }
ThetaArgument argument_double() { return {"2Z", 2, 2, 2}; }
ThetaArgument argument_4_2_1() { return {"[[4z1,2z2],[2z2,z3]]", 4, 2, 1}; }
ThetaArgument argument_2_1_half() { return {"[[2z1,z2],[z2,z3/2]]", 2, 1, Rational(1, 2)}; }

std::optional<ThetaChar> substituted_class(const Vec5& x, const ThetaArgument& arg) {
  Vec5 y = arg.pull(x);
  const Rational q = q_standard(y);
  if (q >= 0 || !is_perfect_square(numerator(-q)) || !is_perfect_square(denominator(-q))) return std::nullopt;
  const Rational r(boost::multiprecision::sqrt(numerator(-q)), boost::multiprecision::sqrt(denominator(-q)));
  std::array<BigInt, 5> yi;
  for (int i = 0; i < 5; ++i) {
    const Rational t = y[i] / r;
    if (denominator(t) != 1) return std::nullopt;
    yi[i] = numerator(t);
  }
  return divisor_theta_class(yi);
}

// ---------------------------------------------------------------------------
// The five realizations

GramMatrix ThetaCase::gram() const {
  static const long B[5][5] = {{0, 1, 0, 0, 0}, {1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 0, -2}};
  std::vector<std::vector<long>> rows(5, std::vector<long>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) rows[i][j] = static_cast<long>(kappa * moduli[i] * moduli[j]) * B[i][j];
  return GramMatrix::from_rows(rows);
}

const std::vector<ThetaCase>& theta_cases() {
  static const std::vector<ThetaCase> cases = [] {
    const auto& ch = even_characteristics();
    auto claim = [](int a1, int a2, int b1, int b2, ThetaArgument arg) {
      return ThetaClaim{ThetaChar{a1, a2, b1, b2}, std::move(arg)};
    };
    std::vector<ThetaClaim> all_even;
    for (const auto& c : ch) all_even.push_back({c, argument_identity()});
    const Rational h(1, 2), q(1, 4);

    std::vector<ThetaCase> v;
    ThetaCase c1;
    c1.slug = "a1m4_u_u";
    c1.construction = "A1(-4)+U+U";
    c1.moduli = {1, 1, 1, 1, 2};
    c1.pair_claims = {claim(1, 1, 1, 1, argument_identity())};
    c1.stated_element = Vec5{0, 0, 0, 0, q};
    v.push_back(c1);

    ThetaCase c2;
    c2.slug = "a1m1_u4_u";
    c2.construction = "A1(-1)+U(4)+U";
    c2.moduli = {1, 4, 1, 1, 1};
    c2.torsion_claims = {claim(0, 0, 0, 0, argument_double())};
    c2.stated_element = Vec5{h, 2, 0, 0, h};
    v.push_back(c2);

    ThetaCase c3;
    c3.slug = "a1m1_u4_u2";
    c3.construction = "A1(-1)+U(4)+U(2)";
    c3.moduli = {1, 4, 1, 2, 1};
    c3.torsion_claims = {claim(0, 0, 0, 0, argument_double()), claim(0, 0, 0, 0, argument_4_2_1()),
                         claim(0, 0, 1, 0, argument_double()), claim(0, 0, 0, 1, argument_4_2_1()),
                         claim(0, 1, 0, 0, argument_double()), claim(1, 0, 0, 0, argument_4_2_1()),
                         claim(0, 1, 1, 0, argument_double()), claim(1, 0, 0, 1, argument_4_2_1())};
    v.push_back(c3);

    ThetaCase c4;
    c4.slug = "a1m2_u2_u2";
    c4.construction = "A1(-2)+U(2)+U(2)";
    c4.kappa = 2;  // L = sqrt(2) Z^5, stored as Z^5 with the form doubled
    c4.moduli = {1, 1, 1, 1, 1};
    c4.pair_claims = all_even;
    v.push_back(c4);

    ThetaCase c5;
    c5.slug = "a1m1_u4_u4";
    c5.construction = "A1(-1)+U(4)+U(4)";
    c5.moduli = {2, 2, 2, 2, 1};
    c5.torsion_claims = all_even;
    c5.pair_representative_claim = claim(0, 0, 0, 0, argument_2_1_half());
    c5.stated_element = Vec5{1, 0, 1, 0, h};
    v.push_back(c5);
    return v;
  }();
  return cases;
}

const ThetaCase& find_theta_case(const std::string& slug) {
  for (const auto& c : theta_cases())
    if (c.slug == slug) return c;
  throw std::out_of_range("unknown theta case: " + slug);
}

// ---------------------------------------------------------------------------
// Verification

namespace {

using RMatrix = Matrix<Rational>;

RMatrix inverse(RMatrix a) {
  const std::size_t n = a.rows();
  RMatrix inv = RMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw std::invalid_argument("inverse: singular matrix");
    a.swap_rows(p, c);
    inv.swap_rows(p, c);
    const Rational d = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      const Rational f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

Vec5 mat_apply(const RMatrix& g, const Vec5& x) {
  Vec5 y{};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) y[i] += g(i, j) * x[j];
  return y;
}

// Acts on H_2 through the null vector X(Z).
std::optional<SiegelPoint> act(const RMatrix& g, const SiegelPoint& Z) {
  const auto x = x_of_z(Z);
  std::array<Complex, 5> w{};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) w[i] += to_double(g(i, j)) * x[j];
  if (std::abs(w[1]) < 1e-12) return std::nullopt;
  const Complex z1 = w[2] / w[1], z2 = w[4] / w[1], z3 = w[3] / w[1];
  if (!(z1.imag() > 0) || !(z1.imag() * z3.imag() - z2.imag() * z2.imag() > 0)) return std::nullopt;
  SiegelPoint out(z1, z2, z3);
  if (out.min_imag_eigenvalue() < kSampleFloor) return std::nullopt;
  return out;
}

struct Sample {
  Vec5 x;  // lattice vector of the divisor, in the coordinates of V
  SiegelPoint Z;
};

class CaseVerifier {
 public:
  CaseVerifier(const ThetaCase& tc, std::uint64_t seed, const VerifyOptions& opt)
      : tc_(tc), opt_(opt), rng_(seed), G_(tc.gram()) {
    static const long B[5][5] = {{0, 1, 0, 0, 0}, {1, 0, 0, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 0, -2}};
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) Bm_(i, j) = Rational(tc.kappa * B[i][j]);
  }

  const DiscriminantGroup& group() const { return G_; }

  Vec5 to_v(const FqmElement& g) const {
    const auto c = G_.lift(g);
    Vec5 u;
    for (int i = 0; i < 5; ++i) {
      const Rational m(tc_.moduli[i]);
      u[i] = c[i] * m;
      u[i] -= m * floor(u[i] / m);
    }
    return u;
  }

  FqmElement from_v(const Vec5& u) const {
    std::vector<Rational> c(5);
    for (int i = 0; i < 5; ++i) c[i] = u[i] / tc_.moduli[i];
    return G_.reduce(c);
  }

  // Divisor samples for gamma + L at norm -n, optionally pulled back by g.
  std::vector<Sample> divisor_samples(const Vec5& gamma, const Rational& n, const RMatrix* g_inv = nullptr) {
    std::vector<std::pair<double, Vec5>> vecs;
    std::array<int, 5> t{};
    const int B = 2;
    std::function<void(int)> rec = [&](int i) {
      if (i == 5) {
        Vec5 x;
        double size = 0;
        for (int k = 0; k < 5; ++k) {
          x[k] = gamma[k] + Rational(tc_.moduli[k] * t[k]);
          size += std::abs(to_double(x[k]));
        }
        if (tc_.kappa * q_standard(x) == -n) vecs.emplace_back(size, x);
        return;
      }
      for (t[i] = -B; t[i] <= B; ++t[i]) rec(i + 1);
    };
    rec(0);
    std::sort(vecs.begin(), vecs.end());
    if (vecs.size() > 40) vecs.resize(40);
    std::shuffle(vecs.begin(), vecs.end(), rng_);

    std::vector<Sample> out;
    for (std::size_t round = 0; round < 4 && out.size() < opt_.divisor_samples; ++round)
      for (const auto& [size, x] : vecs) {
        if (out.size() >= opt_.divisor_samples) break;
        std::vector<SiegelPoint> pts;
        try {
          pts = heegner_sample(VVector{x}, 2, rng_);
        } catch (const NoSample&) {
          continue;
        }
        for (const auto& Z : pts) {
          if (!g_inv) {
            out.push_back({x, Z});
            continue;
          }
          if (auto W = act(*g_inv, Z)) out.push_back({mat_apply(*g_inv, x), *W});
        }
      }
    return out;
  }

  struct Stats {
    double max_abs = 0;
    std::size_t vectors = 0;
    std::size_t agreements = 0;
  };

  Stats evaluate(const std::vector<Sample>& samples, const ThetaClaim& claim) const {
    Stats s;
    std::set<Vec5> seen;
    for (const auto& smp : samples) {
      s.max_abs = std::max(s.max_abs, std::abs(theta_constant(claim.theta, claim.argument.apply(smp.Z), opt_.eval_tol)));
      if (!seen.insert(smp.x).second) continue;
      ++s.vectors;
      const auto cls = substituted_class(smp.x, claim.argument);
      if (cls && *cls == claim.theta) ++s.agreements;
    }
    return s;
  }

  // Smallest |theta| over random points; the theta argument (before any
  // Eichler pullback) is drawn from the sampling region.
  double control_min(const ThetaClaim& claim, const RMatrix* g_inv = nullptr) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng_); };
    double lo = std::numeric_limits<double>::infinity();
    std::size_t done = 0;
    for (std::size_t attempt = 0; done < opt_.controls && attempt < 100 * opt_.controls; ++attempt) {
      const Complex z1(uni(-1, 1), uni(0.8, 2)), z3(uni(-1, 1), uni(0.8, 2)), z2(uni(-1, 1), uni(-0.6, 0.6));
      if (z1.imag() * z3.imag() - z2.imag() * z2.imag() <= 0) continue;
      SiegelPoint W(z1, z2, z3);
      if (W.min_imag_eigenvalue() < kControlFloor) continue;
      const auto& a = claim.argument;
      SiegelPoint Z(z1 / to_double(a.s1), z2 / to_double(a.s2), z3 / to_double(a.s3));
      if (g_inv) {
        auto W = act(*g_inv, Z);
        if (!W) continue;
        Z = *W;
      }
      lo = std::min(lo, std::abs(theta_constant(claim.theta, claim.argument.apply(Z), opt_.eval_tol)));
      ++done;
    }
    last_controls_ = done;
    return lo;
  }

  PairCheck make_check(const Vec5& gamma, const Rational& n, const ThetaClaim& claim, const std::string& kind,
                       const Stats& st, std::size_t samples, const RMatrix* g_inv = nullptr) {
    PairCheck c;
    c.gamma = vec_string(gamma);
    c.n = to_string(-n);
    c.theta = "theta_" + claim.theta.label();
    c.argument = claim.argument.name;
    c.kind = kind;
    c.divisor_samples = samples;
    c.divisor_vectors = st.vectors;
    c.exact_agreements = st.agreements;
    c.max_on_divisor = st.max_abs;
    c.min_off_divisor = control_min(claim, g_inv);
    c.controls = last_controls_;
    c.passed = samples >= 20 && st.max_abs < opt_.vanish_tol && c.controls >= 100 &&
               c.min_off_divisor > opt_.control_floor && st.agreements == st.vectors;
    return c;
  }

  // Matches elements to claims one-to-one through divisor vanishing.
  void match(const std::vector<Vec5>& elems, const Rational& n, const std::vector<ThetaClaim>& claims,
             const std::string& kind, std::vector<PairCheck>& out) {
    if (claims.empty()) return;
    if (elems.size() != claims.size()) {
      PairCheck c;
      c.kind = kind;
      c.note = "expected " + std::to_string(claims.size()) + " good elements, found " + std::to_string(elems.size());
      out.push_back(c);
      return;
    }
    const std::size_t k = elems.size();
    std::vector<std::vector<Sample>> samples(k);
    std::vector<std::vector<Stats>> stats(k, std::vector<Stats>(k));
    for (std::size_t i = 0; i < k; ++i) {
      samples[i] = divisor_samples(elems[i], n);
      for (std::size_t j = 0; j < k; ++j) stats[i][j] = evaluate(samples[i], claims[j]);
    }
    auto vanishes = [&](std::size_t i, std::size_t j) {
      return samples[i].size() >= 20 && stats[i][j].max_abs < opt_.vanish_tol;
    };
    std::vector<int> owner(k, -1);  // claim -> element
    std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t i, std::vector<char>& used) {
      for (std::size_t j = 0; j < k; ++j) {
        if (!vanishes(i, j) || used[j]) continue;
        used[j] = 1;
        if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), used)) {
          owner[j] = static_cast<int>(i);
          return true;
        }
      }
      return false;
    };
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<char> used(k, 0);
      augment(i, used);
    }
    std::vector<int> claim_of(k, -1);
    for (std::size_t j = 0; j < k; ++j)
      if (owner[j] >= 0) claim_of[static_cast<std::size_t>(owner[j])] = static_cast<int>(j);
    for (std::size_t i = 0; i < k; ++i) {
      if (claim_of[i] < 0) {
        PairCheck c;
        c.gamma = vec_string(elems[i]);
        c.n = to_string(-n);
        c.kind = kind;
        c.divisor_samples = samples[i].size();
        c.note = "no claimed theta left that vanishes on this divisor";
        out.push_back(c);
        continue;
      }
      const auto j = static_cast<std::size_t>(claim_of[i]);
      out.push_back(make_check(elems[i], n, claims[j], kind, stats[i][j], samples[i].size()));
    }
  }

  RMatrix eichler(const Vec5& e, const Vec5& f) const {
    RMatrix g = RMatrix::identity(5);
    const Rational qf = tc_.kappa * q_standard(f);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        Rational be(0), bf(0);  // B(e_j, e), B(e_j, f)
        for (std::size_t k = 0; k < 5; ++k) {
          be += Bm_(j, k) * e[k];
          bf += Bm_(j, k) * f[k];
        }
        g(i, j) += be * f[i] - bf * e[i] - qf * be * e[i];
      }
    return g;
  }

  bool preserves_lattices(const RMatrix& g) const {
    const auto& gram = G_.gram();
    for (std::size_t j = 0; j < 5; ++j) {
      Vec5 b{};
      b[j] = tc_.moduli[j];
      const Vec5 gb = mat_apply(g, b);
      for (std::size_t i = 0; i < 5; ++i)
        if (denominator(gb[i] / tc_.moduli[i]) != 1) return false;
    }
    for (const auto& lift : G_.generator_lifts()) {
      Vec5 u;
      for (std::size_t i = 0; i < 5; ++i) u[i] = lift[i] * tc_.moduli[i];
      const Vec5 gu = mat_apply(g, u);
      std::vector<Rational> c(5);
      for (std::size_t i = 0; i < 5; ++i) c[i] = gu[i] / tc_.moduli[i];
      const auto Sc = gram.apply(c);
      for (const auto& s : Sc)
        if (denominator(s) != 1) return false;
    }
    return true;
  }

  // Random products of Eichler transformations carrying gamma to other good
  // pairs; the claimed theta composed with the inverse must vanish there.
  void translates(const Vec5& gamma, const Rational& n, const ThetaClaim& claim, const std::set<FqmElement>& pair_set,
                  std::vector<PairCheck>& out) {
    RMatrix S(5, 5);
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = 0; b < 5; ++b) S(a, b) = Rational(G_.gram()(a, b));
    const RMatrix Sinv = inverse(S);
    std::vector<Vec5> dual;  // dual basis of L
    for (std::size_t j = 0; j < 5; ++j) {
      Vec5 u;
      for (std::size_t i = 0; i < 5; ++i) u[i] = Sinv(i, j) * tc_.moduli[i];
      dual.push_back(u);
    }
    const FqmElement start = from_v(gamma);
    std::set<FqmElement> found = {start, G_.negate(start)};
    std::uniform_int_distribution<int> coin(-1, 1), pick(0, 3), factors(1, 3);
    std::size_t made = 0;
    for (int attempt = 0; attempt < 2000 && made < opt_.translates; ++attempt) {
      RMatrix g = RMatrix::identity(5), g_inv = RMatrix::identity(5);
      const int nf = factors(rng_);
      for (int t = 0; t < nf; ++t) {
        const int i = pick(rng_);
        Vec5 e{};
        e[i] = tc_.moduli[i];
        Vec5 f{};
        for (std::size_t j = 0; j < 5; ++j) {
          if (static_cast<int>(j) == i) continue;
          const int c = coin(rng_);
          for (std::size_t k = 0; k < 5; ++k) f[k] += c * dual[j][k];
        }
        Vec5 mf;
        for (std::size_t k = 0; k < 5; ++k) mf[k] = -f[k];
        g = eichler(e, f) * g;
        g_inv = g_inv * eichler(e, mf);
      }
      if (!(g * g_inv == RMatrix::identity(5))) throw IntegrityError("Eichler inverse mismatch");
      if (!preserves_lattices(g) || !preserves_lattices(g_inv)) continue;
      const FqmElement image = from_v(mat_apply(g, gamma));
      if (found.count(image)) continue;
      found.insert(image);
      found.insert(G_.negate(image));
      if (!pair_set.count(image) && !pair_set.count(G_.negate(image))) {
        PairCheck c;
        c.gamma = vec_string(to_v(image));
        c.kind = "translate";
        c.note = "image is not a good element of the orbit";
        out.push_back(c);
        ++made;
        continue;
      }
      const Vec5 image_v = to_v(image);
      const auto samples = divisor_samples(image_v, n, &g_inv);
      const auto st = evaluate(samples, claim);
      auto check = make_check(image_v, n, claim, "translate", st, samples.size(), &g_inv);
      check.argument = claim.argument.name + " after an Eichler transformation";
      out.push_back(check);
      ++made;
    }
    if (made < opt_.translates) {
      PairCheck c;
      c.kind = "translate";
      c.note = "found only " + std::to_string(made) + " translates";
      out.push_back(c);
    }
  }

  void representative(const std::vector<Vec5>& elems, const Rational& n, const ThetaClaim& claim,
                      const std::set<FqmElement>& pair_set, std::vector<PairCheck>& out) {
    for (const auto& g : elems) {
      const auto samples = divisor_samples(g, n);
      const auto st = evaluate(samples, claim);
      if (samples.size() < 20 || st.max_abs >= opt_.vanish_tol) continue;
      out.push_back(make_check(g, n, claim, "representative", st, samples.size()));
      translates(g, n, claim, pair_set, out);
      return;
    }
    PairCheck c;
    c.kind = "representative";
    c.theta = "theta_" + claim.theta.label();
    c.argument = claim.argument.name;
    c.note = "no good pair has this divisor";
    out.push_back(c);
  }

 private:
  const ThetaCase& tc_;
  VerifyOptions opt_;
  std::mt19937_64 rng_;
  DiscriminantGroup G_;
  RMatrix Bm_{5, 5};
  std::size_t last_controls_ = 0;
};

}  // namespace

bool CaseReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const PairCheck& c) { return c.passed; });
}

CaseReport verify_case(const std::string& slug, std::uint64_t seed, const VerifyOptions& options,
                       bool throw_on_failure) {
  const ThetaCase& tc = find_theta_case(slug);
  CaseVerifier v(tc, seed, options);
  const auto& G = v.group();

  LatticeSpec spec;
  spec.id = slug;
  spec.construction = tc.construction;
  spec.n = 3;
  spec.gram = tc.gram();
  spec.expected_d = static_cast<std::int64_t>(G.size());
  const auto classification = solve_singular_weight(spec);

  CaseReport report;
  report.slug = slug;
  report.construction = tc.construction;
  report.seed = seed;

  std::vector<Vec5> torsion, pairs;
  std::set<FqmElement> pair_set;
  Rational torsion_n, pair_n;
  for (const auto& cls : classification.classes)
    for (const auto& idx : cls.members) {
      if (idx.two_torsion) {
        torsion.push_back(v.to_v(idx.gamma));
        torsion_n = idx.n;
      } else {
        pairs.push_back(v.to_v(idx.gamma));
        pair_set.insert(idx.gamma);
        pair_n = idx.n;
      }
    }
  std::sort(torsion.begin(), torsion.end());
  std::sort(pairs.begin(), pairs.end());
  report.torsion_elements = torsion.size();
  report.pairs = pairs.size();

  if (tc.stated_element) {
    const FqmElement s = v.from_v(*tc.stated_element);
    report.stated_element = vec_string(*tc.stated_element);
    report.stated_order = s.order;
    bool good = false;
    for (const auto& cls : classification.classes)
      for (const auto& idx : cls.members) good = good || idx.gamma == s || idx.gamma == G.negate(s);
    report.stated_is_good = good;
  }

  v.match(torsion, torsion_n, tc.torsion_claims, "torsion", report.checks);
  v.match(pairs, pair_n, tc.pair_claims, "pair", report.checks);
  if (tc.pair_representative_claim) {
    if (pairs.empty()) {
      PairCheck c;
      c.kind = "representative";
      c.note = "no good pairs";
      report.checks.push_back(c);
    } else {
      v.representative(pairs, pair_n, *tc.pair_representative_claim, pair_set, report.checks);
    }
  }

  if (throw_on_failure && !report.passed()) {
    std::string msg = slug + ": verification failed for";
    for (const auto& c : report.checks)
      if (!c.passed) msg += " [" + c.kind + " " + c.gamma + " " + c.theta + " " + c.argument + " " + c.note + "]";
    throw VerificationFailure(msg);
  }
  return report;
}

double theta_1111_on_z2_zero(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  const auto pts = heegner_sample(VVector{{0, 0, 0, 0, 1}}, count, rng);
  double worst = 0;
  for (const auto& Z : pts) worst = std::max(worst, std::abs(theta_constant(ThetaChar{1, 1, 1, 1}, Z)));
  return worst;
}

std::string case_reports_to_json(const std::vector<CaseReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json checks = json::array();
    for (const auto& c : r.checks) {
      json j = {{"kind", c.kind},
                {"gamma", c.gamma},
                {"n", c.n},
                {"theta", c.theta},
                {"argument", c.argument},
                {"divisor_samples", c.divisor_samples},
                {"divisor_vectors", c.divisor_vectors},
                {"exact_class_agreements", c.exact_agreements},
                {"max_on_divisor", rounded12(c.max_on_divisor)},
                {"controls", c.controls},
                {"min_off_divisor", rounded12(c.min_off_divisor)},
                {"passed", c.passed}};
      if (!c.note.empty()) j["note"] = c.note;
      checks.push_back(j);
    }
    json entry = {{"case", r.slug},
                  {"lattice", r.construction},
                  {"seed", r.seed},
                  {"good_torsion_elements", r.torsion_elements},
                  {"good_pairs", r.pairs},
                  {"checks", checks},
                  {"passed", r.passed()}};
    if (!r.stated_element.empty())
      entry["stated_element"] = {{"gamma", r.stated_element}, {"order", r.stated_order}, {"good", r.stated_is_good}};
    out.push_back(entry);
  }
  return out.dump(2) + "\n";
}

}  // namespace borcherds
