#pragma once

// Closed-form surfaces of the lambda family and the hyperbolic model maps.
//
//   helicoid   H_lambda(x+iy)   = 2 lambda (sinh x sin y, -sinh x cos y, -y)
//   catenoid   C^W_lambda(x+iy) = (-2 lambda cosh x cos y, -2 lambda cosh x sin y, 2 lambda x)
//   cousin     C_lambda in the upper half-space {(u + iv, w) : w > 0}
//
// The catenoid is the Weierstrass integral of g = e^z, omega = lambda e^{-z} dz
// normalised by Phi(0) = (-2 lambda, 0, 0); the helicoid is the integral of the
// associate data from z0 = 0.
//
// Model map. Ball coordinates b = (b1, b2, b3) of a half-space point (u, v, w)
// come from the Cayley-type inversion
//     b' = (2u, 2v, u^2 + v^2 + w^2 - 1) / (u^2 + v^2 + (w + 1)^2)
// followed by the quarter turn b = (b'1, -b'3, b'2) about the first axis, so
// that (0, 0, 1) goes to the origin and the vertical plane {v = 0} goes to the
// equatorial plane {b3 = 0}.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trinoid/errors.hpp"
#include "trinoid/params.hpp"
#include "trinoid/weierstrass.hpp"

namespace trinoid {

inline Vec3 helicoid_point(CatenoidParameter lambda, double x, double y) {
  const double l2 = 2.0 * lambda.lambda();
  const double sx = std::sinh(x);
  return {l2 * sx * std::sin(y), -l2 * sx * std::cos(y), -l2 * y};
}

inline Vec3 catenoid_point(CatenoidParameter lambda, double x, double y) {
  const double l2 = 2.0 * lambda.lambda();
  const double cx = std::cosh(x);
  return {-l2 * cx * std::cos(y), -l2 * cx * std::sin(y), l2 * x};
}

struct UpperHalfSpacePoint {
  double u = 0.0, v = 0.0, w = 1.0;

  Vec3 vec() const { return {u, v, w}; }
  static UpperHalfSpacePoint from(const Vec3& p) {
    if (!(p.z() > 0.0)) throw DomainError("upper half-space point needs w > 0");
    return {p.x(), p.y(), p.z()};
  }
};

struct BallPoint {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;

  Vec3 vec() const { return {x1, x2, x3}; }
  static BallPoint from(const Vec3& p) {
    if (!(p.squaredNorm() < 1.0)) throw DomainError("ball point needs |x| < 1");
    return {p.x(), p.y(), p.z()};
  }
};

/// Catenoid cousin in the upper half-space model, evaluated after factoring
/// e^{|x|} out of numerator and denominator so that w stays representable
/// for large |x|. The denominator coefficients are
///   1/2 + lambda - a/2 = (a - 1)^2 / 4  and  1/2 + lambda + a/2 = (a + 1)^2 / 4.
inline UpperHalfSpacePoint catenoid_cousin_point(CatenoidParameter lambda, double x, double y) {
  const double l = lambda.lambda();
  const double a = lambda.a();
  const double c_minus = 0.25 * (a - 1.0) * (a - 1.0);
  const double c_plus = 0.25 * (a + 1.0) * (a + 1.0);

  double modulus, w;
  if (x >= 0.0) {
    const double e2 = std::exp(-2.0 * x);
    const double den = c_minus * e2 + c_plus;
    modulus = -l * (1.0 + e2) * std::exp(a * x) / den;
    w = a * std::exp((a - 1.0) * x) / den;
  } else {
    const double e2 = std::exp(2.0 * x);
    const double den = c_minus + c_plus * e2;
    modulus = -l * (1.0 + e2) * std::exp(a * x) / den;
    w = a * std::exp((a + 1.0) * x) / den;
  }
  const double t = a * y;
  return {modulus * std::cos(t), modulus * std::sin(t), w};
}

inline double cousin_period(CatenoidParameter lambda) { return kTwoPi / lambda.a(); }

inline BallPoint halfspace_to_ball(const UpperHalfSpacePoint& p) {
  if (!(p.w > 0.0)) throw DomainError("half-space point on or below the ideal boundary w = 0");
  const double den = p.u * p.u + p.v * p.v + (p.w + 1.0) * (p.w + 1.0);
  const double b1 = 2.0 * p.u / den;
  const double b2 = 2.0 * p.v / den;
  const double b3 = (p.u * p.u + p.v * p.v + p.w * p.w - 1.0) / den;
  return {b1, -b3, b2};
}

inline UpperHalfSpacePoint ball_to_halfspace(const BallPoint& p) {
  const double n2 = p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3;
  if (!(n2 < 1.0)) throw DomainError("ball point on or outside the unit sphere");
  // undo the quarter turn
  const double b1 = p.x1, b2 = p.x3, b3 = -p.x2;
  const double den = b1 * b1 + b2 * b2 + (1.0 - b3) * (1.0 - b3);
  return {2.0 * b1 / den, 2.0 * b2 / den, (1.0 - n2) / den};
}

/// Hyperbolic distance in the half-space model.
inline double halfspace_distance(const UpperHalfSpacePoint& p, const UpperHalfSpacePoint& q) {
  const double d2 = (p.vec() - q.vec()).squaredNorm();
  return std::acosh(1.0 + d2 / (2.0 * p.w * q.w));
}

/// Hyperbolic distance in the ball model.
inline double ball_distance(const BallPoint& p, const BallPoint& q) {
  const double d2 = (p.vec() - q.vec()).squaredNorm();
  return std::acosh(1.0 + 2.0 * d2 / ((1.0 - p.vec().squaredNorm()) * (1.0 - q.vec().squaredNorm())));
}

enum class Model { Euclidean, UpperHalfSpace, Ball };

inline std::string to_string(Model m) {
  switch (m) {
    case Model::Euclidean: return "euclidean";
    case Model::UpperHalfSpace: return "upper_half_space";
    case Model::Ball: return "ball";
  }
  return "?";
}

using Sampler = std::function<Vec3(double, double)>;

struct CurvatureEstimate {
  double value = 0.0;
  /// |H(step) - H(2 step)| / 3, the Richardson estimate of the O(step^2) error.
  double error_estimate = 0.0;
  bool accuracy_warning = false;
  std::string note;
};

namespace detail {

// Mean curvature w.r.t. the unit normal n = (f_x x f_y) / |f_x x f_y| using
// central differences. With the sign convention h(X, Y) = <D_X Y, n> a
// conformal metric e^{2 sigma} |dx|^2 gives H' = e^{-sigma} (H - d_n sigma).
inline double mean_curvature_fd(const Sampler& f, Model model, double x, double y, double h) {
  const Vec3 c = f(x, y);
  const Vec3 xp = f(x + h, y), xm = f(x - h, y);
  const Vec3 yp = f(x, y + h), ym = f(x, y - h);
  const Vec3 pp = f(x + h, y + h), pm = f(x + h, y - h);
  const Vec3 mp = f(x - h, y + h), mm = f(x - h, y - h);

  const Vec3 fx = (xp - xm) / (2.0 * h);
  const Vec3 fy = (yp - ym) / (2.0 * h);
  const Vec3 fxx = (xp - 2.0 * c + xm) / (h * h);
  const Vec3 fyy = (yp - 2.0 * c + ym) / (h * h);
  const Vec3 fxy = (pp - pm - mp + mm) / (4.0 * h * h);

  const Vec3 n = fx.cross(fy).normalized();
  const double E = fx.dot(fx), F = fx.dot(fy), G = fy.dot(fy);
  const double L = fxx.dot(n), M = fxy.dot(n), N = fyy.dot(n);
  const double H = (E * N - 2.0 * F * M + G * L) / (2.0 * (E * G - F * F));

  switch (model) {
    case Model::Euclidean: return H;
    case Model::UpperHalfSpace:
      // sigma = -log w, d_n sigma = -n_3 / w
      return c.z() * H + n.z();
    case Model::Ball: {
      // sigma = log 2 - log(1 - |x|^2), d_n sigma = 2 <n, x> / (1 - |x|^2)
      const double s = 1.0 - c.squaredNorm();
      return 0.5 * s * H - n.dot(c);
    }
  }
  return H;
}

}  // namespace detail

/// Second-order finite-difference mean curvature of a parametrised surface in
/// the ambient metric of `model`. The normal is (f_x x f_y) / |f_x x f_y|,
/// which agrees with the Gauss map of the lambda family and makes the
/// catenoid cousins of catenoid_cousin_point report +1.
inline CurvatureEstimate mean_curvature_estimate(const Sampler& f, Model model, double x, double y, double step) {
  if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
  CurvatureEstimate out;
  out.value = detail::mean_curvature_fd(f, model, x, y, step);
  const double coarse = detail::mean_curvature_fd(f, model, x, y, 2.0 * step);
  out.error_estimate = std::fabs(out.value - coarse) / 3.0;
  if (step > 1e-1) {
    out.accuracy_warning = true;
    out.note = "step too large for a second-order estimate";
  } else if (step < 1e-5) {
    out.accuracy_warning = true;
    out.note = "step small enough for round-off to dominate second differences";
  } else if (out.error_estimate > 1e-3 * std::max(1.0, std::fabs(out.value))) {
    out.accuracy_warning = true;
    out.note = "Richardson error estimate exceeds 1e-3";
  }
  return out;
}

struct GridSpec {
  double x_min = -2.0, x_max = 2.0;
  double y_min = 0.0, y_max = kTwoPi;
  int nx = 21, ny = 21;
};

/// A sampled immersion on a rectangular parameter grid, stored row-major
/// with x varying fastest.
struct SurfaceGrid {
  int nx = 0, ny = 0;
  Model model = Model::Euclidean;
  std::vector<cplx> params;
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

using NormalField = std::function<Vec3(double, double)>;

inline Vec3 fd_normal(const Sampler& f, double x, double y, double h = 1e-5) {
  const Vec3 fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
  const Vec3 fy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
  return fx.cross(fy).normalized();
}

inline SurfaceGrid sample_grid(const Sampler& f, Model model, const GridSpec& spec,
                               const std::optional<NormalField>& normal = std::nullopt) {
  if (spec.nx < 2 || spec.ny < 2) throw DomainError("grid needs at least 2 samples per direction");
  if (!std::isfinite(spec.x_min) || !std::isfinite(spec.x_max) || !std::isfinite(spec.y_min) ||
      !std::isfinite(spec.y_max)) {
    throw DomainError("grid bounds must be finite");
  }
  SurfaceGrid g;
  g.nx = spec.nx;
  g.ny = spec.ny;
  g.model = model;
  const std::size_t n = static_cast<std::size_t>(spec.nx) * spec.ny;
  g.params.reserve(n);
  g.positions.reserve(n);
  g.normals.reserve(n);
  for (int j = 0; j < spec.ny; ++j) {
    const double y = spec.y_min + (spec.y_max - spec.y_min) * j / (spec.ny - 1);
    for (int i = 0; i < spec.nx; ++i) {
      const double x = spec.x_min + (spec.x_max - spec.x_min) * i / (spec.nx - 1);
      const Vec3 p = f(x, y);
      if (!p.allFinite()) throw DomainError("surface sample is not finite");
      if (model == Model::UpperHalfSpace && !(p.z() > 0.0)) throw DomainError("half-space sample with w <= 0");
      g.params.emplace_back(x, y);
      g.positions.push_back(p);
      g.normals.push_back(normal ? (*normal)(x, y) : fd_normal(f, x, y));
    }
  }
  return g;
}

/// Samplers for the closed-form surfaces.
inline Sampler helicoid_sampler(CatenoidParameter l) {
  return [l](double x, double y) { return helicoid_point(l, x, y); };
}
inline Sampler catenoid_sampler(CatenoidParameter l) {
  return [l](double x, double y) { return catenoid_point(l, x, y); };
}
inline Sampler cousin_sampler(CatenoidParameter l) {
  return [l](double x, double y) { return catenoid_cousin_point(l, x, y).vec(); };
}
inline Sampler cousin_ball_sampler(CatenoidParameter l) {
  return [l](double x, double y) { return halfspace_to_ball(catenoid_cousin_point(l, x, y)).vec(); };
}

/// Gauss normal of the lambda family (g = e^z for helicoid and catenoid).
inline NormalField exponential_normal() {
  return [](double x, double y) { return inverse_stereographic(std::exp(cplx{x, y})); };
}

}  // namespace trinoid
