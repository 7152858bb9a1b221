#pragma once

// Parameter spaces for catenoid cousins and the conversions between the
// end-parameter conventions in common use:
//
//   lambda  in I = (-1/4, inf) \ {0}      our catenoid parameter
//   phi     in J = (0, inf) \ {pi}        end angle, phi = pi / sqrt(1 + 4 lambda)
//   mu_B    > -1/2, != 0                  Bryant's parameter, phi = pi (2 mu_B + 1)
//   lambda_BPS > 0, != 1/2                Bobenko-Pavlyukevich-Springborn, phi = 2 pi lambda_BPS

#include <cmath>
#include <numbers>
#include <string>

#include "trinoid/errors.hpp"

namespace trinoid {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Which helicoid pitch the ray distance h(phi) refers to.
///
/// `Paper` uses h(phi) = |lambda| phi. `Helicoid` uses 2 |lambda| phi, the
/// vertical distance of two rulings of H_lambda whose screw parameters differ
/// by phi. The two differ by exactly a factor of two; every consumer of h
/// is parameterised by this flag.
enum class PitchConvention { Paper, Helicoid };

inline std::string to_string(PitchConvention c) {
  return c == PitchConvention::Paper ? "paper" : "helicoid";
}

inline PitchConvention pitch_convention_from_string(const std::string& s) {
  if (s == "paper") return PitchConvention::Paper;
  if (s == "helicoid") return PitchConvention::Helicoid;
  throw DomainError("unknown pitch convention '" + s + "' (expected paper|helicoid)");
}

class CatenoidParameter {
 public:
  explicit CatenoidParameter(double lambda) : lambda_(lambda) {
    if (!std::isfinite(lambda) || lambda <= -0.25 || lambda == 0.0) {
      throw DomainError("catenoid parameter lambda must lie in (-1/4, inf) \\ {0}");
    }
    a_ = std::sqrt(1.0 + 4.0 * lambda_);
  }

  /// From a = sqrt(1 + 4 lambda) directly. Keeps a exact near lambda = -1/4,
  /// where recomputing it from lambda loses most of its digits.
  static CatenoidParameter from_a(double a) {
    if (!std::isfinite(a) || !(a > 0.0) || a == 1.0) throw DomainError("a = sqrt(1 + 4 lambda) must be positive, != 1");
    CatenoidParameter p((a - 1.0) * (a + 1.0) / 4.0);
    p.a_ = a;
    return p;
  }

  double lambda() const noexcept { return lambda_; }
  /// a = sqrt(1 + 4 lambda); never 1 and always positive.
  double a() const noexcept { return a_; }
  double phi() const noexcept { return kPi / a(); }
  /// Exponent of the power-type Weierstrass data, pi alpha = phi.
  double alpha() const noexcept { return 1.0 / a(); }

 private:
  double lambda_;
  double a_;
};

inline double reduced_angle(double phi) {
  double r = std::fmod(std::fabs(phi), kTwoPi);
  if (r > kPi) r = kTwoPi - r;
  return r;
}

class Angle {
 public:
  explicit Angle(double phi) : phi_(phi) {
    if (!std::isfinite(phi) || phi <= 0.0 || phi == kPi) {
      throw DomainError("angle phi must lie in (0, inf) \\ {pi}");
    }
  }

  double value() const noexcept { return phi_; }
  double reduced() const noexcept { return reduced_angle(phi_); }

 private:
  double phi_;
};

class BryantParameter {
 public:
  explicit BryantParameter(double mu) : mu_(mu) {
    if (!std::isfinite(mu) || mu <= -0.5 || mu == 0.0) {
      throw DomainError("Bryant parameter mu_B must satisfy mu_B > -1/2, mu_B != 0");
    }
  }
  double mu() const noexcept { return mu_; }

 private:
  double mu_;
};

class BpsParameter {
 public:
  explicit BpsParameter(double lambda_bps) : value_(lambda_bps) {
    if (!std::isfinite(lambda_bps) || lambda_bps <= 0.0 || lambda_bps == 0.5) {
      throw DomainError("BPS parameter must satisfy lambda_BPS > 0, lambda_BPS != 1/2");
    }
  }
  double value() const noexcept { return value_; }

 private:
  double value_;
};

inline Angle phi_of_lambda(CatenoidParameter lambda) { return Angle(lambda.phi()); }
inline Angle phi_of_lambda(double lambda) { return phi_of_lambda(CatenoidParameter(lambda)); }

inline CatenoidParameter lambda_of_phi(Angle phi) {
  return CatenoidParameter::from_a(kPi / phi.value());
}
inline CatenoidParameter lambda_of_phi(double phi) { return lambda_of_phi(Angle(phi)); }

/// Distance of the two boundary lines of a conjugate end with angle phi.
inline double ray_distance_h(Angle phi, PitchConvention convention = PitchConvention::Paper) {
  const double p = phi.value();
  const double h = std::fabs(kPi * kPi / (4.0 * p) - p / 4.0);
  return convention == PitchConvention::Paper ? h : 2.0 * h;
}
inline double ray_distance_h(double phi, PitchConvention convention = PitchConvention::Paper) {
  return ray_distance_h(Angle(phi), convention);
}

/// Vertical advance of the model helicoid per unit of screw parameter, with
/// sign. H_lambda(x+iy) = 2 lambda (sinh x sin y, -sinh x cos y, -y) has
/// pitch 2 lambda; the `Paper` convention halves it so that rulings at
/// screw distance phi are exactly h(phi) apart.
inline double helicoid_pitch(CatenoidParameter lambda, PitchConvention convention) {
  return convention == PitchConvention::Paper ? lambda.lambda() : 2.0 * lambda.lambda();
}

inline CatenoidParameter bryant_mu_to_lambda(BryantParameter mu) {
  return lambda_of_phi(kPi * (2.0 * mu.mu() + 1.0));
}

inline CatenoidParameter bps_to_lambda(BpsParameter bps) {
  return lambda_of_phi(kTwoPi * bps.value());
}

inline BryantParameter lambda_to_bryant_mu(CatenoidParameter lambda) {
  return BryantParameter(lambda.phi() / kTwoPi - 0.5);
}

inline BpsParameter lambda_to_bps(CatenoidParameter lambda) {
  return BpsParameter(lambda.phi() / kTwoPi);
}

inline double total_curvature(CatenoidParameter lambda) { return -4.0 * kPi / lambda.a(); }

/// Signed fractional part in [-1/2, 1/2).
inline double centered_fraction(double x) { return x - std::floor(x + 0.5); }

/// Delta = |{lambda_BPS}|, with {.} the fractional part in [-1/2, 1/2).
inline double bobenko_delta(double lambda_bps) { return std::fabs(centered_fraction(lambda_bps)); }

}  // namespace trinoid
