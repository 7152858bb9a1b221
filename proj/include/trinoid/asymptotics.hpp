#pragma once

// Numerical check that the conjugate of a symmetric catenoidal end is
// asymptotic to a helicoid.
//
// Input is PowerEnd data with real coefficients on D. The conjugate data
// (g, i omega) is integrated from z0 = 1 over half circles |z| = rho and over
// the two boundary rays z in (0, 1] and z in [-1, 0). With real coefficients
// the third coordinate is
//
//   X3(z) = -2 g0 w0 arg z - 2 Im H(z),   H' = g0 w1 + w0 g1 + z w1 g1, H(0) = 0,
//
// so it stays in a slab and is constant on each ray, and the rays sit at
// heights 0 and -2 pi g0 w0 = -(1 - alpha^2) pi / (2 alpha).

#include <Eigen/Core>
#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "trinoid/constellation.hpp"
#include "trinoid/errors.hpp"
#include "trinoid/params.hpp"
#include "trinoid/weierstrass.hpp"

namespace trinoid {

struct ArcSample {
  double radius = 0.0;
  std::vector<double> theta;
  std::vector<Vec3> positions;
};

struct EndSample {
  PowerEndData data;       // as given, omega factor 1
  PowerEndData conjugate;  // omega factor i
  std::vector<double> radii;
  std::vector<ArcSample> arcs;
  std::vector<double> boundary_t;  // decreasing from 1
  std::vector<Vec3> ray_positive;  // images of z = t
  std::vector<Vec3> ray_negative;  // images of z = -t
  double tol = 1e-11;
  double max_error_estimate = 0.0;  // largest per-component quadrature error estimate
};

/// Exponent-derived catenoid parameter of an end: alpha = 1 / sqrt(1 + 4 lambda).
inline CatenoidParameter end_lambda(double alpha) { return CatenoidParameter((1.0 / (alpha * alpha) - 1.0) / 4.0); }

/// Radii 2^-1, ..., 2^-n.
inline std::vector<double> dyadic_radii(int n) {
  std::vector<double> r;
  for (int k = 1; k <= n; ++k) r.push_back(std::ldexp(1.0, -k));
  return r;
}

inline EndSample sample_conjugate_end(const PowerEndData& data, const std::vector<double>& radii,
                                      int samples_per_arc = 33, double tol = 1e-11, int boundary_samples = 16) {
  validate(data);
  if (!has_real_coefficients(data)) throw DomainError("end data must have real coefficients (symmetric subclass)");
  if (data.omega_factor != cplx{1.0, 0.0}) throw DomainError("end data must be given with omega factor 1");
  if (radii.empty()) throw DomainError("need at least one radius");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0 && radii[k] <= 1.0)) throw DomainError("radii must lie in (0, 1]");
    if (k > 0 && !(radii[k] < radii[k - 1])) throw DomainError("radii must be strictly decreasing");
  }
  if (samples_per_arc < 2) throw DomainError("need at least two samples per arc");
  if (boundary_samples < 8) throw DomainError("need at least eight boundary samples per side");

  EndSample s;
  s.data = data;
  s.conjugate = conjugate_data(data);
  s.radii = radii;
  s.tol = tol;
  const WeierstrassData conj = s.conjugate;

  auto eval = [&](cplx z) {
    const auto r = integrate_complex(conj, IntegrationPath{1.0, z, Route::RadialThenArc}, tol);
    for (double e : r.error) s.max_error_estimate = std::max(s.max_error_estimate, e);
    return r.real();
  };

  for (double rho : radii) {
    ArcSample arc;
    arc.radius = rho;
    for (int j = 0; j < samples_per_arc; ++j) {
      const double th = kPi * j / (samples_per_arc - 1);
      arc.theta.push_back(th);
      arc.positions.push_back(eval(std::polar(rho, th)));
    }
    s.arcs.push_back(std::move(arc));
  }

  const double t_min = radii.back();
  for (int j = 0; j < boundary_samples; ++j) {
    const double t = std::pow(t_min, static_cast<double>(j) / (boundary_samples - 1));
    s.boundary_t.push_back(t);
    s.ray_positive.push_back(eval(cplx{t, 0.0}));
    s.ray_negative.push_back(eval(std::polar(t, kPi)));
  }
  return s;
}

struct SlabReport {
  double sup = 0.0, inf = 0.0, width = 0.0;
  double correction_bound = 0.0;  // bound on sup |C| over D
  double tolerance = 0.0;
  bool pass = false;
  std::array<double, 2> ray_spread{};  // range of the third coordinate on each ray
  bool rays_horizontal = false;
};

inline double quadrature_slack(const EndSample& s) { return 2.0 * std::max(s.tol, s.max_error_estimate); }

/// Third coordinate minus its principal part Re(2 i g0 w0 Log z).
inline SlabReport check_slab(const EndSample& s) {
  SlabReport r;
  const cplx k = 2.0 * s.conjugate.omega_factor * s.data.g0 * s.data.w0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto add = [&](cplx z, const Vec3& p) {
    const double v = p.z() - (k * branch_log(z)).real();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (const auto& arc : s.arcs)
    for (std::size_t j = 0; j < arc.theta.size(); ++j) add(std::polar(arc.radius, arc.theta[j]), arc.positions[j]);
  for (std::size_t j = 0; j < s.boundary_t.size(); ++j) {
    add(cplx{s.boundary_t[j], 0.0}, s.ray_positive[j]);
    add(std::polar(s.boundary_t[j], kPi), s.ray_negative[j]);
  }
  r.sup = hi;
  r.inf = lo;
  r.width = hi - lo;
  r.correction_bound = correction_bound(s.data);
  r.tolerance = quadrature_slack(s);
  r.pass = r.width <= 2.0 * r.correction_bound + r.tolerance;

  auto spread = [](const std::vector<Vec3>& pts) {
    double a = std::numeric_limits<double>::infinity(), b = -a;
    for (const auto& p : pts) {
      a = std::min(a, p.z());
      b = std::max(b, p.z());
    }
    return b - a;
  };
  r.ray_spread = {spread(s.ray_positive), spread(s.ray_negative)};
  r.rays_horizontal = r.ray_spread[0] <= r.tolerance && r.ray_spread[1] <= r.tolerance;
  return r;
}

struct Ray {
  OrientedLine line;
  double max_deviation = 0.0;
  double height = 0.0;  // mean third coordinate
};

struct RayFit {
  std::array<Ray, 2> rays;  // images of (0, 1] and [-1, 0)
  double gap = 0.0;         // height of the first ray minus height of the second
  double angle = 0.0;       // angle between the directions towards the end
};

namespace detail {

inline Ray fit_line(const std::vector<Vec3>& pts) {
  if (pts.size() < 8) throw DomainError("ray fit needs at least eight samples");
  Vec3 mean = Vec3::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::MatrixXd m(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = (pts[i] - mean).transpose();
  const double extent = (pts.back() - pts.front()).norm();
  if (!(extent > 1e-9 * std::max(1.0, mean.norm()))) throw DomainError("ray samples are nearly coincident");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  Vec3 d = svd.matrixV().col(0);
  // samples are ordered from t = 1 towards the end
  if (d.dot(pts.back() - pts.front()) < 0.0) d = -d;
  Ray r;
  r.line = OrientedLine(mean, d);
  for (const auto& p : pts) r.max_deviation = std::max(r.max_deviation, distance_point_line(p, r.line));
  r.height = mean.z();
  return r;
}

}  // namespace detail

inline RayFit fit_rays(const EndSample& s) {
  RayFit f;
  f.rays = {detail::fit_line(s.ray_positive), detail::fit_line(s.ray_negative)};
  f.gap = f.rays[0].height - f.rays[1].height;
  f.angle = line_angle(f.rays[0].line, f.rays[1].line);
  return f;
}

/// The vertical gap predicted by the principal term, (1 - alpha^2) pi / (2 alpha).
inline double principal_ray_gap(double alpha) { return (1.0 - alpha * alpha) * kPi / (2.0 * alpha); }

struct GapComparison {
  double measured = 0.0;
  double expected = 0.0;
  double paper_h = 0.0;     // |lambda| phi
  double helicoid_h = 0.0;  // 2 |lambda| phi
  bool matches_expected = false;
  std::string matches;  // "paper", "helicoid" or "neither"
};

inline GapComparison compare_ray_gap(const RayFit& f, double alpha, double tol = 1e-6) {
  GapComparison g;
  const CatenoidParameter l = end_lambda(alpha);
  g.measured = f.gap;
  g.expected = principal_ray_gap(alpha);
  g.paper_h = ray_distance_h(l.phi(), PitchConvention::Paper);
  g.helicoid_h = ray_distance_h(l.phi(), PitchConvention::Helicoid);
  g.matches_expected = std::fabs(g.measured - g.expected) <= tol;
  const double m = std::fabs(g.measured);
  if (std::fabs(m - g.helicoid_h) <= tol) {
    g.matches = "helicoid";
  } else if (std::fabs(m - g.paper_h) <= tol) {
    g.matches = "paper";
  } else {
    g.matches = "neither";
  }
  return g;
}

struct HelicoidFit {
  HelicoidFrame frame;
  double pitch = 2.0;  // 2 lambda, the helicoid of the Weierstrass family
  double residual = 0.0;
  bool ok = false;
  bool parallel = false;
  double distance = 0.0;     // distance of the rays
  double lower_bound = 0.0;  // parallel case: |2 lambda phi|
  std::string note;
};

namespace detail {

inline double wrap_half_pi(double a) {
  a = std::remainder(a, kPi);
  return a;
}

/// Frame with e3 along the axis, ray a as the ruling y = 0.
inline HelicoidFrame line_frame(const CatenoidParameter& l, const OrientedLine& a, const Vec3& foot, const Vec3& e3) {
  HelicoidFrame f;
  f.lambda = l;
  const Vec3 e2 = -a.direction;
  f.rotation.col(0) = e2.cross(e3);
  f.rotation.col(1) = e2;
  f.rotation.col(2) = e3;
  f.translation = foot;
  return f;
}

/// Difference of the height parameter and the direction parameter of line b,
/// reduced mod pi.
inline double ruling_mismatch(const HelicoidFrame& f, double pitch, const OrientedLine& b) {
  const OrientedLine lb = f.to_local(b);
  const double y = -lb.point.z() / pitch;
  const double psi = std::atan2(lb.direction.y(), lb.direction.x()) + 0.5 * kPi;
  return wrap_half_pi(y - psi);
}

}  // namespace detail

/// Rigid placement of the two fitted rays as rulings of H_lambda.
///
/// For non-parallel rays the axis is their common perpendicular, which fixes
/// the frame up to the screw symmetry; the remaining angular mismatch between
/// the rays' heights and directions is split evenly between the two rays.
/// For parallel rays only the distance is compared with its lower bound.
inline HelicoidFit fit_helicoid(const RayFit& rays, CatenoidParameter lambda, double max_residual = 1e-3) {
  HelicoidFit out;
  out.pitch = 2.0 * lambda.lambda();
  const OrientedLine& a = rays.rays[0].line;
  const OrientedLine& b = rays.rays[1].line;
  out.distance = line_distance(a, b);

  const bool parallel = a.direction.cross(b.direction).norm() < 1e-7;
  std::optional<std::array<double, 2>> feet;
  if (!parallel) feet = common_perpendicular(a, b);

  if (parallel || !feet) {
    out.parallel = true;
    const Vec3 w = b.point - a.point;
    const Vec3 perp = w - w.dot(a.direction) * a.direction;
    if (!(perp.norm() > 0.0)) {
      out.note = "parallel rays coincide";
      return out;
    }
    out.frame = detail::line_frame(lambda, a, a.point, perp.normalized());
    out.residual = std::max(ruling_residual(out.frame, out.pitch, a), ruling_residual(out.frame, out.pitch, b));
    out.lower_bound = std::fabs(out.pitch * lambda.phi());
    out.ok = out.distance >= out.lower_bound - 1e-6;
    out.note = out.ok ? "parallel rays: distance meets the lower bound" : "parallel rays closer than the lower bound";
    return out;
  }

  const Vec3 foot_a = a.at((*feet)[0]);
  const Vec3 n = a.direction.cross(b.direction).normalized();
  double best = std::numeric_limits<double>::infinity();
  for (double sgn : {1.0, -1.0}) {
    HelicoidFrame f = detail::line_frame(lambda, a, foot_a, sgn * n);
    const double m = detail::ruling_mismatch(f, out.pitch, b);
    // rotating the frame by -m/2 about its axis leaves each ray off by m/2
    f.rotation = f.rotation * Eigen::AngleAxisd(-0.5 * m, Vec3::UnitZ()).toRotationMatrix();
    const double res = std::max(ruling_residual(f, out.pitch, a), ruling_residual(f, out.pitch, b));
    if (res < best) {
      best = res;
      out.frame = f;
    }
  }
  out.residual = best;
  out.ok = best <= max_residual;
  out.note = out.ok ? "rays are rulings of the framed helicoid" : "rays are not rulings of H_lambda for this lambda";
  return out;
}

struct Projection {
  double distance = 0.0;
  double x = 0.0, y = 0.0;
  bool converged = false;
};

/// Closest point on the framed helicoid of pitch p, by Gauss-Newton in the
/// (x, y) chart. The chart is conformal with |H_x| = |H_y| = |p| cosh x, so
/// the normal equations are diagonal. Seeded by inverting the height.
inline Projection project_to_helicoid(const HelicoidFrame& f, double pitch, const Vec3& p, int max_iter = 100) {
  const Vec3 q = f.to_local(p);
  Projection out;
  double y = -q.z() / pitch;
  double x = std::asinh(Vec3(q.x(), q.y(), 0.0).dot(ruling_direction(y)) / pitch);
  auto point = [&](double xx, double yy) {
    const double s = pitch * std::sinh(xx);
    return Vec3(s * std::sin(yy), -s * std::cos(yy), -pitch * yy);
  };
  Vec3 r = point(x, y) - q;
  for (int it = 0; it < max_iter; ++it) {
    const double ch = std::cosh(x), sh = std::sinh(x);
    const Vec3 hx = pitch * ch * Vec3(std::sin(y), -std::cos(y), 0.0);
    const Vec3 hy = pitch * Vec3(sh * std::cos(y), sh * std::sin(y), -1.0);
    const double g = pitch * pitch * ch * ch;
    double dx = -r.dot(hx) / g, dy = -r.dot(hy) / g;
    double step = 1.0;
    Vec3 r_new;
    for (int k = 0; k < 30; ++k) {
      r_new = point(x + step * dx, y + step * dy) - q;
      if (r_new.squaredNorm() <= r.squaredNorm()) break;
      step *= 0.5;
    }
    x += step * dx;
    y += step * dy;
    const bool small = std::fabs(step * dx) <= 1e-14 * (1.0 + std::fabs(x)) &&
                       std::fabs(step * dy) <= 1e-14 * (1.0 + std::fabs(y));
    r = r_new;
    if (small || r.norm() <= 1e-15 * (1.0 + q.norm())) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    // accept stationary points that stopped short of the step criterion
    const double ch = std::cosh(x);
    const Vec3 hx = Vec3(std::sin(y), -std::cos(y), 0.0);
    const Vec3 hy = Vec3(std::sinh(x) * std::cos(y), std::sinh(x) * std::sin(y), -1.0) / ch;
    const double rn = r.norm();
    out.converged = rn == 0.0 || (std::fabs(r.dot(hx)) <= 1e-9 * rn && std::fabs(r.dot(hy)) <= 1e-9 * rn);
  }
  out.distance = r.norm();
  out.x = x;
  out.y = y;
  return out;
}

struct DecayRow {
  double radius = 0.0;
  double sup_distance = 0.0;
  int flagged = 0;  // projections that did not converge, excluded from the sup
};

struct DecayProfile {
  std::vector<DecayRow> rows;
  bool strictly_decreasing = false;
  double reduction = 0.0;  // final / initial
  bool exact = false;      // every sup below the containment floor
  bool pass = false;
  int flagged = 0;
  std::vector<std::string> warnings;
};

inline constexpr double kContainmentFloor = 1e-8;
inline constexpr double kRequiredReduction = 0.05;

/// Sup distance from the framed helicoid per radius. PASS when the surface
/// lies on the helicoid to within the containment floor, or when the profile
/// strictly decreases and ends below 5% of its first value.
inline DecayProfile decay_profile(const EndSample& s, const HelicoidFit& fit) {
  DecayProfile d;
  for (const auto& arc : s.arcs) {
    DecayRow row;
    row.radius = arc.radius;
    for (const auto& p : arc.positions) {
      const Projection pr = project_to_helicoid(fit.frame, fit.pitch, p);
      if (!pr.converged) {
        ++row.flagged;
        continue;
      }
      row.sup_distance = std::max(row.sup_distance, pr.distance);
    }
    if (row.flagged > 0) {
      d.warnings.push_back("radius " + std::to_string(arc.radius) + ": " + std::to_string(row.flagged) +
                           " projection(s) did not converge");
    }
    d.flagged += row.flagged;
    d.rows.push_back(row);
  }
  if (d.rows.empty()) return d;
  d.strictly_decreasing = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < d.rows.size(); ++k) {
    worst = std::max(worst, d.rows[k].sup_distance);
    if (k > 0 && !(d.rows[k].sup_distance < d.rows[k - 1].sup_distance)) d.strictly_decreasing = false;
  }
  const double first = d.rows.front().sup_distance;
  d.reduction = first > 0.0 ? d.rows.back().sup_distance / first : 0.0;
  d.exact = worst < kContainmentFloor;
  d.pass = d.exact || (d.strictly_decreasing && d.rows.back().sup_distance < kRequiredReduction * first);
  return d;
}

struct NormalLimit {
  std::vector<double> deviation;  // per radius, sup over the arc of |N + e3|
  bool pass = false;
};

/// The Gauss normal should tend to (0, 0, -1) as z -> 0.
inline NormalLimit check_limit_normal(const EndSample& s) {
  NormalLimit n;
  const WeierstrassData d = s.conjugate;
  for (const auto& arc : s.arcs) {
    double m = 0.0;
    for (double th : arc.theta) m = std::max(m, (gauss_normal(d, std::polar(arc.radius, th)) + Vec3::UnitZ()).norm());
    n.deviation.push_back(m);
  }
  n.pass = !n.deviation.empty();
  for (std::size_t k = 1; k < n.deviation.size(); ++k)
    if (!(n.deviation[k] < n.deviation[k - 1])) n.pass = false;
  return n;
}

struct PipelineOptions {
  std::vector<double> radii = dyadic_radii(8);
  int samples_per_arc = 33;
  int boundary_samples = 16;
  double tol = 1e-11;
  double ray_gap_tol = 1e-6;
  double fit_residual = 1e-3;
  /// Catenoid parameter for the helicoid fit; defaults to the one implied by alpha.
  std::optional<double> lambda;
};

struct Hypothesis {
  std::string name;
  bool pass = false;
};

struct EndReport {
  PowerEndData data;
  double lambda = 0.0;  // used for the fit
  EndSample sample;
  SlabReport slab;
  NormalLimit normal;
  RayFit rays;
  GapComparison gap;
  HelicoidFit fit;
  DecayProfile decay;
  std::vector<Hypothesis> hypotheses;

  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& h : hypotheses)
      if (!h.pass) out.push_back(h.name);
    return out;
  }
  bool pass() const { return failed().empty(); }
};

inline EndReport verify_end(const PowerEndData& data, const PipelineOptions& opts = {}) {
  EndReport r;
  r.data = data;
  r.sample = sample_conjugate_end(data, opts.radii, opts.samples_per_arc, opts.tol, opts.boundary_samples);
  const CatenoidParameter lambda = opts.lambda ? CatenoidParameter(*opts.lambda) : end_lambda(data.alpha);
  r.lambda = lambda.lambda();
  r.slab = check_slab(r.sample);
  r.normal = check_limit_normal(r.sample);
  r.rays = fit_rays(r.sample);
  r.gap = compare_ray_gap(r.rays, data.alpha, opts.ray_gap_tol);
  r.fit = fit_helicoid(r.rays, lambda, opts.fit_residual);
  r.decay = decay_profile(r.sample, r.fit);
  r.hypotheses = {{"slab", r.slab.pass},
                  {"limit_normal", r.normal.pass},
                  {"ray_gap", r.gap.matches_expected},
                  {"rays_horizontal", r.slab.rays_horizontal},
                  {"helicoid_fit", r.fit.ok},
                  {"decay", r.decay.pass}};
  return r;
}

}  // namespace trinoid
