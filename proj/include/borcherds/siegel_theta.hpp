#pragma once

// Genus 2 theta constants and the divisors of singular weight products on
// five lattices of signature (2, 3), realized inside the quadratic space
// V = R^5 with Q(x) = x1 x2 + x3 x4 - x5^2.

#include "borcherds/errors.hpp"
#include "borcherds/lattice.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace borcherds {

using Complex = std::complex<double>;

/// Z = [[z1, z2], [z2, z3]] with positive definite imaginary part.
struct SiegelPoint {
  Complex z1, z2, z3;

  SiegelPoint(Complex z1, Complex z2, Complex z3);  // throws std::invalid_argument off H_2

  Complex det() const { return z1 * z3 - z2 * z2; }
  double det_imag() const { return z1.imag() * z3.imag() - z2.imag() * z2.imag(); }
  double min_imag_eigenvalue() const;
};

struct ThetaChar {
  int a1 = 0, a2 = 0, b1 = 0, b2 = 0;

  bool is_even() const { return (a1 * b1 + a2 * b2) % 2 == 0; }
  /// "0000" style label a1 a2 b1 b2.
  std::string label() const;
  auto operator<=>(const ThetaChar&) const = default;
};

/// The ten even characteristics in the order of the congruence table.
const std::vector<ThetaChar>& even_characteristics();

/// A vector of V with rational coordinates.
struct VVector {
  std::array<Rational, 5> x;

  Rational q() const { return x[0] * x[1] + x[2] * x[3] - x[4] * x[4]; }
  std::string to_string() const;
};

Rational q_standard(const std::array<Rational, 5>& x);
Rational bilinear_standard(const std::array<Rational, 5>& x, const std::array<Rational, 5>& y);

/// Truncated lattice sum with a tail bound below tol.
/// Throws IllConditioned when the smallest eigenvalue of Im Z is below 1e-3.
Complex theta_constant(const ThetaChar& c, const SiegelPoint& Z, double tol = 1e-10);

/// (-det Z, 1, z1, z3, z2) / sqrt(det Im Z).
std::array<Complex, 5> x_of_z(const SiegelPoint& Z);
Complex q_complex(const std::array<Complex, 5>& x);
Complex bilinear_complex(const std::array<Complex, 5>& x, const std::array<Complex, 5>& y);

/// Row of the mod 4 congruence table matched by an integral x with Q(x) = -1.
std::optional<ThetaChar> divisor_theta_class(const std::array<BigInt, 5>& x);

/// x2 (z2^2 - z1 z3) + x4 z1 - 2 x5 z2 + x3 z3 + x1.
Complex divisor_equation(const VVector& x, const SiegelPoint& Z);

/// Points of H_2 on the divisor of x. Throws NoSample after bounded retries.
std::vector<SiegelPoint> heegner_sample(const VVector& x, std::size_t count, std::mt19937_64& rng);

/// Z -> [[s1 z1, s2 z2], [s2 z2, s3 z3]] with s2^2 = s1 s3.
struct ThetaArgument {
  std::string name;
  Rational s1 = 1, s2 = 1, s3 = 1;

  SiegelPoint apply(const SiegelPoint& Z) const;
  /// The vector y, up to scale, whose divisor in the substituted variable
  /// is the divisor of x in Z.
  std::array<Rational, 5> pull(const std::array<Rational, 5>& x) const;
};

ThetaArgument argument_identity();
ThetaArgument argument_double();     // 2Z
ThetaArgument argument_4_2_1();      // [[4z1, 2z2], [2z2, z3]]
ThetaArgument argument_2_1_half();   // [[2z1, z2], [z2, z3/2]]

/// Theta class of the divisor of x seen through an argument substitution.
std::optional<ThetaChar> substituted_class(const std::array<Rational, 5>& x, const ThetaArgument& arg);

struct ThetaClaim {
  ThetaChar theta;
  ThetaArgument argument;
};

/// A lattice L = {u : u_i in m_i Z} with quadratic form kappa Q(u).
struct ThetaCase {
  std::string slug;
  std::string construction;
  std::int64_t kappa = 1;
  std::array<std::int64_t, 5> moduli{};
  std::vector<ThetaClaim> torsion_claims;  // matched bijectively to good elements of order 2
  std::vector<ThetaClaim> pair_claims;     // matched bijectively to good pairs
  std::optional<ThetaClaim> pair_representative_claim;  // holds for one pair of the orbit
  std::optional<std::array<Rational, 5>> stated_element;

  GramMatrix gram() const;
};

const std::vector<ThetaCase>& theta_cases();
const ThetaCase& find_theta_case(const std::string& slug);  // throws std::out_of_range

struct PairCheck {
  std::string gamma;
  std::string n;
  std::string theta;
  std::string argument;
  std::string kind;  // "torsion", "pair", "representative" or "translate"
  std::size_t divisor_samples = 0;
  std::size_t divisor_vectors = 0;
  std::size_t exact_agreements = 0;
  double max_on_divisor = 0;
  std::size_t controls = 0;
  double min_off_divisor = 0;
  bool passed = false;
  std::string note;
};

struct CaseReport {
  std::string slug;
  std::string construction;
  std::uint64_t seed = 0;
  std::size_t torsion_elements = 0;
  std::size_t pairs = 0;
  std::string stated_element;
  std::int64_t stated_order = 0;
  bool stated_is_good = false;
  std::vector<PairCheck> checks;

  bool passed() const;
};

struct VerifyOptions {
  std::size_t divisor_samples = 24;
  std::size_t controls = 100;
  std::size_t translates = 5;
  double eval_tol = 1e-10;
  double vanish_tol = 1e-8;
  double control_floor = 1e-3;
};

/// Throws VerificationFailure naming the failing checks unless told otherwise.
CaseReport verify_case(const std::string& slug, std::uint64_t seed, const VerifyOptions& options = {},
                       bool throw_on_failure = true);

/// max |theta_{1,1,1,1}| over points with z2 = 0.
double theta_1111_on_z2_zero(std::uint64_t seed, std::size_t count = 50);

std::string case_reports_to_json(const std::vector<CaseReport>& reports);

}  // namespace borcherds
