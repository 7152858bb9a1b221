#pragma once

// Weierstrass representation of minimal surfaces,
//
//   Phi(z) = Re \int_{z0}^{z} ((1 - g^2) omega, i (1 + g^2) omega, 2 g omega),
//
// for two catalogue families of data:
//
//   Exponential:  g = e^z,                     omega = c lambda e^{-z} dz
//   PowerEnd:     g = z^alpha (g0 + z g1(z)),  omega = c z^{-1-alpha} (w0 + z w1(z)) dz
//
// with g1, w1 polynomials and c a quarter turn in {1, i, -1, -i}. The factor
// c records the passage to associate data (g, i omega) without disturbing the
// compatibility condition g0 w0 = (1 - alpha^2) / (4 alpha).
//
// PowerEnd data live on the closed upper half-disk D = {0 < |z| <= 1, Im z >= 0}.
// z^alpha uses the principal branch cut along the negative imaginary axis, so
// arg z ranges over (-pi/2, 3pi/2] and D is cut-free.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cmath>
#include <complex>
#include <vector>
#include <variant>

#include "trinoid/errors.hpp"
#include "trinoid/params.hpp"
#include "trinoid/quadrature.hpp"

namespace trinoid {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

inline constexpr cplx kI{0.0, 1.0};

inline double branch_arg(cplx z) {
  double t = std::arg(z);
  if (t <= -0.5 * kPi) t += kTwoPi;
  return t;
}

inline cplx branch_log(cplx z) { return {std::log(std::abs(z)), branch_arg(z)}; }

inline cplx branch_pow(cplx z, double exponent) { return std::exp(exponent * branch_log(z)); }

namespace poly {

using Coeffs = std::vector<cplx>;

inline cplx eval(const Coeffs& c, cplx z) {
  cplx acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline Coeffs multiply(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Coeffs add(Coeffs a, const Coeffs& b) {
  if (a.size() < b.size()) a.resize(b.size(), cplx{});
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

inline Coeffs scale(Coeffs a, cplx s) {
  for (auto& v : a) v *= s;
  return a;
}

/// c0 + c1 z + ... with the constant prepended: returns lead + z * tail.
inline Coeffs prepend(cplx lead, const Coeffs& tail) {
  Coeffs out;
  out.reserve(tail.size() + 1);
  out.push_back(lead);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

}  // namespace poly

struct ExponentialData {
  double lambda = 1.0;
  cplx omega_factor{1.0, 0.0};
};

struct PowerEndData {
  double alpha = 0.5;
  cplx g0{1.0, 0.0};
  cplx w0{0.375, 0.0};
  poly::Coeffs g1;
  poly::Coeffs w1;
  cplx omega_factor{1.0, 0.0};
};

using WeierstrassData = std::variant<ExponentialData, PowerEndData>;

inline bool is_quarter_turn(cplx c) {
  return c == cplx{1, 0} || c == cplx{0, 1} || c == cplx{-1, 0} || c == cplx{0, -1};
}

/// g0 w0 for a PowerEnd with exponent alpha.
inline double power_end_product(double alpha) { return (1.0 - alpha * alpha) / (4.0 * alpha); }

inline void validate(const ExponentialData& d) {
  if (!std::isfinite(d.lambda) || d.lambda == 0.0) throw DomainError("exponential data needs finite lambda != 0");
  if (!is_quarter_turn(d.omega_factor)) throw DomainError("omega factor must be one of 1, i, -1, -i");
}

inline void validate(const PowerEndData& d) {
  if (!std::isfinite(d.alpha) || d.alpha <= 0.0 || d.alpha == 1.0) {
    throw DomainError("power end exponent alpha must satisfy alpha > 0, alpha != 1");
  }
  if (!is_quarter_turn(d.omega_factor)) throw DomainError("omega factor must be one of 1, i, -1, -i");
  const double target = power_end_product(d.alpha);
  if (std::abs(d.g0 * d.w0 - target) > 1e-12 * std::fabs(target)) {
    throw DomainError("power end data violates g0 w0 = (1 - alpha^2) / (4 alpha)");
  }
}

inline void validate(const WeierstrassData& d) {
  std::visit([](const auto& v) { validate(v); }, d);
}

inline ExponentialData make_exponential(double lambda, cplx omega_factor = 1.0) {
  ExponentialData d{lambda, omega_factor};
  validate(d);
  return d;
}

inline PowerEndData make_power_end(double alpha, cplx g0, cplx w0, poly::Coeffs g1 = {}, poly::Coeffs w1 = {},
                                   cplx omega_factor = 1.0) {
  PowerEndData d{alpha, g0, w0, std::move(g1), std::move(w1), omega_factor};
  validate(d);
  return d;
}

/// PowerEnd data with w0 chosen to satisfy the compatibility condition.
inline PowerEndData make_power_end_for_g0(double alpha, cplx g0, poly::Coeffs g1 = {}, poly::Coeffs w1 = {}) {
  return make_power_end(alpha, g0, power_end_product(alpha) / g0, std::move(g1), std::move(w1));
}

/// Associate data (g, i omega).
inline WeierstrassData conjugate_data(WeierstrassData d) {
  std::visit([](auto& v) { v.omega_factor *= kI; }, d);
  return d;
}

inline PowerEndData conjugate_data(PowerEndData d) {
  d.omega_factor *= kI;
  return d;
}

inline bool has_real_coefficients(const PowerEndData& d) {
  auto real = [](cplx c) { return c.imag() == 0.0; };
  if (!real(d.g0) || !real(d.w0)) return false;
  for (auto c : d.g1)
    if (!real(c)) return false;
  for (auto c : d.w1)
    if (!real(c)) return false;
  return true;
}

inline cplx gauss_map(const ExponentialData&, cplx z) { return std::exp(z); }

inline cplx gauss_map(const PowerEndData& d, cplx z) {
  if (z == cplx{}) return {};
  return branch_pow(z, d.alpha) * (d.g0 + z * poly::eval(d.g1, z));
}

inline cplx gauss_map(const WeierstrassData& d, cplx z) {
  return std::visit([z](const auto& v) { return gauss_map(v, z); }, d);
}

/// omega / dz.
inline cplx omega_density(const ExponentialData& d, cplx z) { return d.omega_factor * d.lambda * std::exp(-z); }

inline cplx omega_density(const PowerEndData& d, cplx z) {
  return d.omega_factor * branch_pow(z, -1.0 - d.alpha) * (d.w0 + z * poly::eval(d.w1, z));
}

inline cplx omega_density(const WeierstrassData& d, cplx z) {
  return std::visit([z](const auto& v) { return omega_density(v, z); }, d);
}

/// The three components of the Weierstrass integrand divided by dz.
template <class Data>
quad::CVec<3> weierstrass_integrand(const Data& d, cplx z) {
  const cplx g = gauss_map(d, z);
  const cplx w = omega_density(d, z);
  const cplx g2 = g * g;
  return {(1.0 - g2) * w, kI * (1.0 + g2) * w, 2.0 * g * w};
}

/// Inverse stereographic projection of g: (2 Re g, 2 Im g, |g|^2 - 1) / (|g|^2 + 1).
/// g = 0 maps to (0, 0, -1); a pole maps to (0, 0, 1).
inline Vec3 inverse_stereographic(cplx g) {
  if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) return {0.0, 0.0, 1.0};
  const double n2 = std::norm(g);
  if (n2 > 1e300) return {0.0, 0.0, 1.0};
  return Vec3(2.0 * g.real(), 2.0 * g.imag(), n2 - 1.0) / (n2 + 1.0);
}

inline Vec3 gauss_normal(const WeierstrassData& d, cplx z) { return inverse_stereographic(gauss_map(d, z)); }

/// A power-law term coefficient * z^exponent.
struct PowerTerm {
  cplx coefficient;
  double exponent;
};

/// Exact expansion of the PowerEnd integrand into finitely many power terms.
inline std::array<std::vector<PowerTerm>, 3> power_end_terms(const PowerEndData& d) {
  const poly::Coeffs G = poly::prepend(d.g0, d.g1);
  const poly::Coeffs W = poly::prepend(d.w0, d.w1);
  const poly::Coeffs GGW = poly::multiply(poly::multiply(G, G), W);
  const poly::Coeffs GW = poly::multiply(G, W);
  const cplx c = d.omega_factor;

  std::array<std::vector<PowerTerm>, 3> out;
  for (std::size_t k = 0; k < W.size(); ++k) {
    const double e = static_cast<double>(k) - 1.0 - d.alpha;
    out[0].push_back({c * W[k], e});
    out[1].push_back({kI * c * W[k], e});
  }
  for (std::size_t n = 0; n < GGW.size(); ++n) {
    const double e = static_cast<double>(n) + d.alpha - 1.0;
    out[0].push_back({-c * GGW[n], e});
    out[1].push_back({kI * c * GGW[n], e});
  }
  for (std::size_t n = 0; n < GW.size(); ++n) {
    out[2].push_back({2.0 * c * GW[n], static_cast<double>(n) - 1.0});
  }
  return out;
}

/// Coefficients of z^{-1} in each integrand component; these are integrated
/// symbolically as logarithms.
inline std::array<cplx, 3> power_end_log_coefficients(const PowerEndData& d) {
  std::array<cplx, 3> out{};
  const auto terms = power_end_terms(d);
  for (int j = 0; j < 3; ++j)
    for (const auto& t : terms[j])
      if (std::fabs(t.exponent + 1.0) < 1e-12) out[j] += t.coefficient;
  return out;
}

enum class Route { Straight, RadialThenArc, ArcThenRadial };

struct IntegrationPath {
  cplx base;
  cplx target;
  Route route = Route::RadialThenArc;
};

inline IntegrationPath default_path(const ExponentialData&, cplx target) { return {0.0, target, Route::Straight}; }
inline IntegrationPath default_path(const PowerEndData&, cplx target) { return {1.0, target, Route::RadialThenArc}; }
inline IntegrationPath default_path(const WeierstrassData& d, cplx target) {
  return std::visit([target](const auto& v) { return default_path(v, target); }, d);
}

namespace detail {

struct Segment {
  bool arc = false;
  cplx a, b;  // straight segment endpoints
  double radius = 0.0, theta0 = 0.0, theta1 = 0.0;

  cplx point(double t) const {
    if (!arc) return a + t * (b - a);
    return std::polar(radius, theta0 + t * (theta1 - theta0));
  }
  cplx velocity(double t) const {
    if (!arc) return b - a;
    return kI * point(t) * (theta1 - theta0);
  }
  bool degenerate() const { return arc ? theta0 == theta1 : a == b; }
};

inline std::vector<Segment> segments(const IntegrationPath& p) {
  std::vector<Segment> out;
  auto line = [&](cplx a, cplx b) {
    Segment s;
    s.a = a;
    s.b = b;
    if (!s.degenerate()) out.push_back(s);
  };
  auto arc = [&](double r, double t0, double t1) {
    Segment s;
    s.arc = true;
    s.radius = r;
    s.theta0 = t0;
    s.theta1 = t1;
    if (!s.degenerate() && r > 0.0) out.push_back(s);
  };
  const cplx z0 = p.base, z1 = p.target;
  if (p.route == Route::Straight || z0 == cplx{} || z1 == cplx{}) {
    line(z0, z1);
    return out;
  }
  const double r0 = std::abs(z0), r1 = std::abs(z1);
  const double t0 = branch_arg(z0), t1 = branch_arg(z1);
  if (p.route == Route::RadialThenArc) {
    line(z0, std::polar(r1, t0));
    arc(r1, t0, t1);
  } else {
    arc(r0, t0, t1);
    line(std::polar(r0, t1), z1);
  }
  return out;
}

inline double distance_to_origin(const Segment& s) {
  if (s.arc) return s.radius;
  const cplx d = s.b - s.a;
  const double t = std::clamp(-(std::conj(d) * s.a).real() / std::norm(d), 0.0, 1.0);
  return std::abs(s.a + t * d);
}

inline bool in_closed_half_disk(cplx z) { return std::abs(z) <= 1.0 + 1e-12 && z.imag() >= -1e-12; }

}  // namespace detail

/// Checks the path against the data's domain. PowerEnd paths must avoid 0 and
/// stay in the closed upper half-disk.
inline void validate_path(const WeierstrassData& d, const IntegrationPath& p) {
  if (!std::holds_alternative<PowerEndData>(d)) return;
  if (p.base == cplx{} || p.target == cplx{}) throw DomainError("path endpoint at the puncture z = 0");
  if (!detail::in_closed_half_disk(p.base) || !detail::in_closed_half_disk(p.target)) {
    throw DomainError("path endpoint outside the closed upper half-disk");
  }
  for (const auto& s : detail::segments(p)) {
    const double scale = std::max(std::abs(s.point(0.0)), std::abs(s.point(1.0)));
    if (detail::distance_to_origin(s) <= 1e-14 * scale) throw DomainError("path passes through the puncture z = 0");
  }
}

struct IntegrationResult {
  quad::CVec<3> value;  // complex integrals, before taking real parts
  std::array<double, 3> error{};
  int panels = 0;

  Vec3 real() const { return {value[0].real(), value[1].real(), value[2].real()}; }
};

/// Path integral of the Weierstrass integrand. For PowerEnd data the z^{-1}
/// terms are integrated in closed form and only the remainder is passed to
/// the quadrature. `tol` bounds the absolute error per component.
inline IntegrationResult integrate_complex(const WeierstrassData& data, const IntegrationPath& path,
                                           double tol = 1e-11) {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  validate(data);
  validate_path(data, path);

  std::array<cplx, 3> logs{};
  if (const auto* pe = std::get_if<PowerEndData>(&data)) logs = power_end_log_coefficients(*pe);
  const bool has_logs = logs[0] != cplx{} || logs[1] != cplx{} || logs[2] != cplx{};

  IntegrationResult out{};
  const auto segs = detail::segments(path);
  quad::Options opts;
  opts.abs_tol = tol / static_cast<double>(std::max<std::size_t>(1, segs.size()));

  for (const auto& seg : segs) {
    auto f = [&](double t) {
      const cplx z = seg.point(t);
      const cplx dz = seg.velocity(t);
      quad::CVec<3> v = std::visit([z](const auto& d) { return weierstrass_integrand(d, z); }, data);
      if (has_logs) {
        for (int j = 0; j < 3; ++j) v[j] -= logs[j] / z;
      }
      for (auto& c : v) c *= dz;
      return v;
    };
    const auto r = quad::integrate<3>(f, 0.0, 1.0, opts);
    for (int j = 0; j < 3; ++j) {
      out.value[j] += r.value[j];
      out.error[j] += r.error[j];
    }
    out.panels += r.panels;
  }
  if (has_logs) {
    const cplx dlog = branch_log(path.target) - branch_log(path.base);
    for (int j = 0; j < 3; ++j) out.value[j] += logs[j] * dlog;
  }
  return out;
}

inline Vec3 integrate(const WeierstrassData& data, const IntegrationPath& path, double tol = 1e-11) {
  return integrate_complex(data, path, tol).real();
}

inline Vec3 integrate(const WeierstrassData& data, cplx target, double tol = 1e-11) {
  return integrate(data, default_path(data, target), tol);
}

/// Integrand of the bounded correction term
///   C(z) = \int_1^z g0 w1 + w0 g1 + xi w1 g1 d xi
/// as a polynomial. Uses the unrotated coefficients of the data.
inline poly::Coeffs correction_integrand(const PowerEndData& d) {
  poly::Coeffs h = poly::add(poly::scale(d.w1, d.g0), poly::scale(d.g1, d.w0));
  const poly::Coeffs prod = poly::multiply(d.w1, d.g1);
  if (!prod.empty()) h = poly::add(h, poly::prepend(0.0, prod));
  return h;
}

/// C(z) by quadrature along the radial-then-arc path from 1.
inline cplx correction_integral(const PowerEndData& d, cplx z, double tol = 1e-12) {
  if (z == cplx{} || !detail::in_closed_half_disk(z)) throw DomainError("correction integral needs z in D");
  const poly::Coeffs h = correction_integrand(d);
  if (h.empty()) return {};
  cplx total{};
  const IntegrationPath path{1.0, z, Route::RadialThenArc};
  const auto segs = detail::segments(path);
  quad::Options opts;
  opts.abs_tol = tol / static_cast<double>(std::max<std::size_t>(1, segs.size()));
  for (const auto& seg : segs) {
    auto f = [&](double t) { return quad::CVec<1>{poly::eval(h, seg.point(t)) * seg.velocity(t)}; };
    total += quad::integrate<1>(f, 0.0, 1.0, opts).value[0];
  }
  return total;
}

/// Triangle-inequality bound on |C| over D: with H the antiderivative of the
/// correction integrand, |C(z)| = |H(z) - H(1)| <= 2 sum_k |h_k| / (k + 1).
inline double correction_bound(const PowerEndData& d) {
  const poly::Coeffs h = correction_integrand(d);
  double s = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) s += std::abs(h[k]) / static_cast<double>(k + 1);
  return 2.0 * s;
}

}  // namespace trinoid
