#pragma once

// Serialization: JSON documents for data, constellations and end reports;
// Wavefront OBJ and CSV for sampled surfaces. Floating-point text uses 17
// significant digits so that values round-trip exactly.

#include <json.hpp>

#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "trinoid/asymptotics.hpp"
#include "trinoid/classify.hpp"
#include "trinoid/constellation.hpp"
#include "trinoid/errors.hpp"
#include "trinoid/surfaces.hpp"
#include "trinoid/weierstrass.hpp"

namespace trinoid::io {

using json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline json to_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

inline json to_json(cplx c) { return {{"re", c.real()}, {"im", c.imag()}}; }

inline json to_json(const poly::Coeffs& c) {
  json re = json::array(), im = json::array();
  for (auto v : c) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"re", re}, {"im", im}};
}

template <std::size_t N>
inline json to_json(const std::array<double, N>& a) {
  json out = json::array();
  for (double v : a) out.push_back(v);
  return out;
}

inline json to_json(const std::vector<double>& a) {
  json out = json::array();
  for (double v : a) out.push_back(v);
  return out;
}

// ---- Weierstrass data ------------------------------------------------------

inline json to_json(const WeierstrassData& d) {
  if (const auto* e = std::get_if<ExponentialData>(&d)) {
    return {{"kind", "exponential"}, {"lambda", e->lambda}, {"omega_factor", to_json(e->omega_factor)}};
  }
  const auto& p = std::get<PowerEndData>(d);
  return {{"kind", "power_end"},       {"alpha", p.alpha},         {"g0", to_json(p.g0)},
          {"w0", to_json(p.w0)},       {"g1", to_json(p.g1)},      {"w1", to_json(p.w1)},
          {"omega_factor", to_json(p.omega_factor)}};
}

namespace detail {

inline double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

inline cplx complex_field(const json& j, const char* key, cplx fallback) {
  if (!j.contains(key)) return fallback;
  const json& c = j.at(key);
  if (c.is_number()) return {c.get<double>(), 0.0};
  if (!c.is_object()) throw DomainError(std::string("field '") + key + "' must be a number or {re, im}");
  return {c.value("re", 0.0), c.value("im", 0.0)};
}

inline poly::Coeffs coeff_field(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const json& c = j.at(key);
  std::vector<double> re, im;
  if (c.is_array()) {
    re = c.get<std::vector<double>>();
  } else if (c.is_object()) {
    if (c.contains("re")) re = c.at("re").get<std::vector<double>>();
    if (c.contains("im")) im = c.at("im").get<std::vector<double>>();
  } else {
    throw DomainError(std::string("field '") + key + "' must be an array or {re: [], im: []}");
  }
  poly::Coeffs out(std::max(re.size(), im.size()), cplx{});
  for (std::size_t k = 0; k < re.size(); ++k) out[k] += re[k];
  for (std::size_t k = 0; k < im.size(); ++k) out[k] += cplx{0.0, im[k]};
  return out;
}

}  // namespace detail

/// Parses and validates a data document. A PowerEnd without w0 gets the value
/// forced by g0 w0 = (1 - alpha^2) / (4 alpha).
inline WeierstrassData data_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exponential") {
      return make_exponential(detail::number(j, "lambda"), detail::complex_field(j, "omega_factor", 1.0));
    }
    if (kind == "power_end") {
      const double alpha = detail::number(j, "alpha");
      const cplx g0 = detail::complex_field(j, "g0", 1.0);
      if (g0 == cplx{}) throw DomainError("g0 must be nonzero");
      const cplx w0 = detail::complex_field(j, "w0", power_end_product(alpha) / g0);
      return make_power_end(alpha, g0, w0, detail::coeff_field(j, "g1"), detail::coeff_field(j, "w1"),
                            detail::complex_field(j, "omega_factor", 1.0));
    }
    throw DomainError("unknown data kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed data document: ") + e.what());
  }
}

// ---- constellations ----------------------------------------------------------

inline json to_json(const OrientedLine& l) { return {{"point", to_json(l.point)}, {"direction", to_json(l.direction)}}; }

inline json to_json(const ConstellationResiduals& r) {
  json containment = json::array();
  for (const auto& c : r.containment) containment.push_back(json::array({c[0], c[1]}));
  return {{"containment", containment},
          {"rotation", to_json(r.rotation)},
          {"angle", to_json(r.angle)},
          {"distance", to_json(r.distance)},
          {"frame_orthogonality", r.frame_orthogonality},
          {"max", r.max()},
          {"accepted", r.accepted()}};
}

inline json to_json(const Constellation& c, const AngleTriple& t) {
  json lines = json::array();
  for (int k = 0; k < 3; ++k) {
    json l = to_json(c.lines[k]);
    l["name"] = line_name(k);
    lines.push_back(l);
  }
  json frames = json::array();
  for (int i = 0; i < 3; ++i) {
    const auto& f = c.frames[i];
    frames.push_back({{"index", i + 1},
                      {"lines", json::array({line_name(kFramePairs[i][0]), line_name(kFramePairs[i][1])})},
                      {"phi", t[i].value()},
                      {"lambda", f.lambda.lambda()},
                      {"pitch", helicoid_pitch(f.lambda, c.convention)},
                      {"h", ray_distance_h(t[i], c.convention)},
                      {"rotation", to_json(f.rotation)},
                      {"translation", to_json(f.translation)}});
  }
  return {{"convention", to_string(c.convention)},
          {"lines", lines},
          {"frames", frames},
          {"triple_product", line_invariants(c.lines).triple_product},
          {"residuals", to_json(verify_constellation(c, t))}};
}

// ---- end reports ---------------------------------------------------------------

inline json to_json(const Ray& r) {
  return {{"point", to_json(r.line.point)},
          {"direction", to_json(r.line.direction)},
          {"max_deviation", r.max_deviation},
          {"height", r.height}};
}

inline json to_json(const EndReport& r) {
  json hyp = json::object();
  for (const auto& h : r.hypotheses) hyp[h.name] = h.pass;
  json rows = json::array();
  for (const auto& row : r.decay.rows) {
    rows.push_back({{"radius", row.radius}, {"sup_distance", row.sup_distance}, {"flagged", row.flagged}});
  }
  const double phi = kPi * r.data.alpha;
  return {
      {"data", to_json(WeierstrassData(r.data))},
      {"alpha", r.data.alpha},
      {"phi", phi},
      {"lambda", r.lambda},
      {"pass", r.pass()},
      {"hypotheses", hyp},
      {"failed", r.failed()},
      {"sampling",
       {{"radii", to_json(r.sample.radii)},
        {"samples_per_arc", r.sample.arcs.empty() ? 0 : static_cast<int>(r.sample.arcs.front().theta.size())},
        {"boundary_samples", static_cast<int>(r.sample.boundary_t.size())},
        {"tol", r.sample.tol},
        {"max_error_estimate", r.sample.max_error_estimate}}},
      {"slab",
       {{"sup", r.slab.sup},
        {"inf", r.slab.inf},
        {"width", r.slab.width},
        {"correction_bound", r.slab.correction_bound},
        {"tolerance", r.slab.tolerance},
        {"ray_spread", to_json(r.slab.ray_spread)},
        {"pass", r.slab.pass}}},
      {"limit_normal", {{"deviation", to_json(r.normal.deviation)}, {"pass", r.normal.pass}}},
      {"rays",
       {{"positive", to_json(r.rays.rays[0])},
        {"negative", to_json(r.rays.rays[1])},
        {"angle", r.rays.angle},
        {"reduced_angle", reduced_angle(phi)}}},
      {"ray_gap",
       {{"measured", r.gap.measured},
        {"expected", r.gap.expected},
        {"paper_h", r.gap.paper_h},
        {"helicoid_h", r.gap.helicoid_h},
        {"matches", r.gap.matches},
        {"pass", r.gap.matches_expected}}},
      {"helicoid_fit",
       {{"pitch", r.fit.pitch},
        {"rotation", to_json(r.fit.frame.rotation)},
        {"translation", to_json(r.fit.frame.translation)},
        {"residual", r.fit.residual},
        {"parallel", r.fit.parallel},
        {"distance", r.fit.distance},
        {"lower_bound", r.fit.lower_bound},
        {"ok", r.fit.ok},
        {"note", r.fit.note}}},
      {"decay",
       {{"rows", rows},
        {"strictly_decreasing", r.decay.strictly_decreasing},
        {"reduction", r.decay.reduction},
        {"exact", r.decay.exact},
        {"flagged", r.decay.flagged},
        {"warnings", r.decay.warnings},
        {"pass", r.decay.pass}}},
  };
}

inline void write_decay_csv(std::ostream& os, const DecayProfile& d) {
  os << "radius,sup_distance\n";
  for (const auto& row : d.rows) os << fmt17(row.radius) << ',' << fmt17(row.sup_distance) << '\n';
}

// ---- meshes ------------------------------------------------------------------

/// Vertices, normals and quad faces in grid order; face (i, j) is
/// (i, j), (i+1, j), (i+1, j+1), (i, j+1), counter-clockwise in the parameter
/// plane, which matches the normal f_x x f_y.
inline void write_obj(std::ostream& os, const SurfaceGrid& g, const std::string& comment = {}) {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "# model " << to_string(g.model) << ", grid " << g.nx << " x " << g.ny << '\n';
  for (const auto& p : g.positions) os << "v " << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z()) << '\n';
  for (const auto& n : g.normals) os << "vn " << fmt17(n.x()) << ' ' << fmt17(n.y()) << ' ' << fmt17(n.z()) << '\n';
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const std::size_t k[4] = {g.index(i, j) + 1, g.index(i + 1, j) + 1, g.index(i + 1, j + 1) + 1,
                                g.index(i, j + 1) + 1};
      os << 'f';
      for (auto v : k) os << ' ' << v << "//" << v;
      os << '\n';
    }
  }
}

inline void write_csv(std::ostream& os, const SurfaceGrid& g) {
  os << "x,y,px,py,pz,nx,ny,nz\n";
  for (std::size_t k = 0; k < g.positions.size(); ++k) {
    const auto& p = g.positions[k];
    const auto& n = g.normals[k];
    os << fmt17(g.params[k].real()) << ',' << fmt17(g.params[k].imag()) << ',' << fmt17(p.x()) << ','
       << fmt17(p.y()) << ',' << fmt17(p.z()) << ',' << fmt17(n.x()) << ',' << fmt17(n.y()) << ',' << fmt17(n.z())
       << '\n';
  }
}

/// Portion of the line inside the cube [-half, half]^3, if any.
inline std::optional<std::array<Vec3, 2>> clip_to_box(const OrientedLine& l, double half) {
  double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const double p = l.point[k], d = l.direction[k];
    if (std::fabs(d) < 1e-15) {
      if (std::fabs(p) > half) return std::nullopt;
      continue;
    }
    double a = (-half - p) / d, b = (half - p) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (!(t0 < t1)) return std::nullopt;
  return std::array<Vec3, 2>{l.at(t0), l.at(t1)};
}

struct ConstellationObjOptions {
  double half_box = 5.0;
  bool helicoid_patches = false;
  int patch_nx = 9, patch_ny = 17;
  double patch_x = 1.0;  // patches span x in [-patch_x, patch_x]
};

/// Three clipped line segments as OBJ polylines, optionally followed by a
/// quad patch of each framed helicoid between its two rulings.
/// `first_vertex` is the OBJ index of the first vertex written, so several
/// constellations can share one file; returns the next free index.
inline std::size_t write_constellation_obj(std::ostream& os, const Constellation& c, const AngleTriple& t,
                                           const ConstellationObjOptions& opts = {}, const std::string& prefix = {},
                                           std::size_t first_vertex = 1) {
  std::size_t next = first_vertex;
  for (int k = 0; k < 3; ++k) {
    const auto seg = clip_to_box(c.lines[k], opts.half_box);
    if (!seg) continue;
    os << "o " << prefix << line_name(k) << '\n';
    for (const auto& p : *seg) os << "v " << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z()) << '\n';
    os << "l " << next << ' ' << next + 1 << '\n';
    next += 2;
  }
  if (!opts.helicoid_patches) return next;
  for (int i = 0; i < 3; ++i) {
    const auto& f = c.frames[i];
    const double pitch = helicoid_pitch(f.lambda, c.convention);
    const double phi = t[i].value();
    os << "o " << prefix << "helicoid" << i + 1 << '\n';
    for (int jy = 0; jy < opts.patch_ny; ++jy) {
      const double y = phi * jy / (opts.patch_ny - 1);
      for (int ix = 0; ix < opts.patch_nx; ++ix) {
        const double x = -opts.patch_x + 2.0 * opts.patch_x * ix / (opts.patch_nx - 1);
        const Vec3 p = framed_helicoid_point(f, pitch, x, y);
        os << "v " << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z()) << '\n';
      }
    }
    auto id = [&](int ix, int jy) { return next + static_cast<std::size_t>(jy) * opts.patch_nx + ix; };
    for (int jy = 0; jy + 1 < opts.patch_ny; ++jy)
      for (int ix = 0; ix + 1 < opts.patch_nx; ++ix)
        os << "f " << id(ix, jy) << ' ' << id(ix + 1, jy) << ' ' << id(ix + 1, jy + 1) << ' ' << id(ix, jy + 1)
           << '\n';
    next += static_cast<std::size_t>(opts.patch_nx) * opts.patch_ny;
  }
  return next;
}

}  // namespace trinoid::io
