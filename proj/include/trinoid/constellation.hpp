#pragma once

// Admissible constellations: three oriented lines l12, l23, l31 such that
// each consecutive pair is a pair of rulings of a framed helicoid,
//
//   frame 1 holds (l12, l31),  frame 2 holds (l23, l12),  frame 3 holds (l31, l23),
//
// with the second line of each pair obtained from the first by the screw
// motion of the helicoid through phi_i, reversed in orientation, at distance
// ray_distance_h(phi_i).
//
// A framed helicoid of pitch p is T + R (p sinh x sin y, -p sinh x cos y, -p y).
// Its ruling at parameter y meets the axis at height -p y with direction
// (sin y, -cos y, 0); the screw motion y -> y + t rotates by t about e3 and
// lowers by p t.

#include <Eigen/Core>
#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "trinoid/classify.hpp"
#include "trinoid/errors.hpp"
#include "trinoid/params.hpp"
#include "trinoid/weierstrass.hpp"

namespace trinoid {

using Mat3 = Eigen::Matrix3d;

struct OrientedLine {
  Vec3 point = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();

  OrientedLine() = default;
  OrientedLine(const Vec3& p, const Vec3& d) {
    const double n = d.norm();
    if (!(n > 0.0) || !std::isfinite(n) || !p.allFinite()) throw DomainError("line needs a finite nonzero direction");
    direction = d / n;
    point = p - p.dot(direction) * direction;
  }

  Vec3 at(double t) const { return point + t * direction; }

  OrientedLine reversed() const { return {point, -direction}; }
};

inline double distance_point_line(const Vec3& q, const OrientedLine& l) {
  const Vec3 v = q - l.point;
  return (v - v.dot(l.direction) * l.direction).norm();
}

/// Parameters s, t of the common perpendicular feet a.at(s), b.at(t);
/// nullopt when the lines are parallel.
inline std::optional<std::array<double, 2>> common_perpendicular(const OrientedLine& a, const OrientedLine& b,
                                                                 double parallel_tol = 1e-12) {
  const double c = a.direction.dot(b.direction);
  const double den = 1.0 - c * c;
  if (den <= parallel_tol) return std::nullopt;
  const Vec3 w = a.point - b.point;
  const double da = a.direction.dot(w), db = b.direction.dot(w);
  return std::array<double, 2>{(c * db - da) / den, (db - c * da) / den};
}

/// Distance between b and a measured along the unit normal d_a x d_b; for
/// parallel lines the plain distance.
inline double signed_line_distance(const OrientedLine& a, const OrientedLine& b) {
  const Vec3 n = a.direction.cross(b.direction);
  const double nn = n.norm();
  const Vec3 w = b.point - a.point;
  if (nn <= 1e-12) return (w - w.dot(a.direction) * a.direction).norm();
  return w.dot(n / nn);
}

inline double line_distance(const OrientedLine& a, const OrientedLine& b) {
  return std::fabs(signed_line_distance(a, b));
}

/// Angle in [0, pi] between the two directions.
inline double line_angle(const OrientedLine& a, const OrientedLine& b) {
  return std::atan2(a.direction.cross(b.direction).norm(), a.direction.dot(b.direction));
}

struct HelicoidFrame {
  CatenoidParameter lambda{1.0};
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 to_local(const Vec3& p) const { return rotation.transpose() * (p - translation); }
  Vec3 to_world(const Vec3& q) const { return rotation * q + translation; }
  OrientedLine to_local(const OrientedLine& l) const {
    return {to_local(l.point), rotation.transpose() * l.direction};
  }
  OrientedLine to_world(const OrientedLine& l) const { return {to_world(l.point), rotation * l.direction}; }
};

inline Vec3 ruling_direction(double y) { return {std::sin(y), -std::cos(y), 0.0}; }

/// Point of the framed helicoid of pitch p at parameter (x, y).
inline Vec3 framed_helicoid_point(const HelicoidFrame& f, double pitch, double x, double y) {
  const double s = pitch * std::sinh(x);
  return f.to_world(Vec3(s * std::sin(y), -s * std::cos(y), -pitch * y));
}

/// How far a line is from being a ruling of the framed helicoid with the
/// given pitch: the largest of the tilt against the axis, the offset of the
/// line from the axis, and the misalignment with the ruling at the height
/// where the line passes the axis.
inline double ruling_residual(const HelicoidFrame& f, double pitch, const OrientedLine& line) {
  const OrientedLine l = f.to_local(line);
  const OrientedLine axis(Vec3::Zero(), Vec3::UnitZ());
  const double tilt = std::fabs(l.direction.z());
  const auto feet = common_perpendicular(l, axis);
  if (!feet) return std::max(tilt, 1.0);
  const Vec3 q = l.at((*feet)[0]);
  const double offset = std::hypot(q.x(), q.y());
  const double y = -q.z() / pitch;
  const double misalign = l.direction.cross(ruling_direction(y)).norm();
  return std::max({tilt, offset, misalign});
}

/// Screw motion of the helicoid through t, in local coordinates.
inline OrientedLine screw_local(const OrientedLine& l, double pitch, double t) {
  const Eigen::AngleAxisd rot(t, Vec3::UnitZ());
  return {rot * l.point + Vec3(0.0, 0.0, -pitch * t), rot * l.direction};
}

struct Constellation {
  std::array<OrientedLine, 3> lines;  // l12, l23, l31
  std::array<HelicoidFrame, 3> frames;
  PitchConvention convention = PitchConvention::Paper;

  const OrientedLine& l12() const { return lines[0]; }
  const OrientedLine& l23() const { return lines[1]; }
  const OrientedLine& l31() const { return lines[2]; }
};

/// Line indices (first, second) held by frame i.
inline constexpr std::array<std::array<int, 2>, 3> kFramePairs{{{0, 2}, {1, 0}, {2, 1}}};

inline std::string line_name(int k) {
  static const char* names[] = {"l12", "l23", "l31"};
  return names[k];
}

struct ConstellationResiduals {
  /// containment[i][j]: line j of the pair inside frame i.
  std::array<std::array<double, 2>, 3> containment{};
  std::array<double, 3> rotation{};
  std::array<double, 3> angle{};
  std::array<double, 3> distance{};
  double frame_orthogonality = 0.0;

  double max() const {
    double m = frame_orthogonality;
    for (int i = 0; i < 3; ++i) {
      m = std::max({m, containment[i][0], containment[i][1], rotation[i], angle[i], distance[i]});
    }
    return m;
  }
  bool accepted(double tol = 1e-9) const { return max() < tol; }
};

inline double orthogonality_residual(const Mat3& r) {
  const double o = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(o, std::fabs(r.determinant() - 1.0));
}

/// Residuals of the three admissibility conditions. The rotation residual
/// applies the screw motion through phi_i to the first line of pair i and
/// measures how far it lands from the reversed second line.
inline ConstellationResiduals verify_constellation(const Constellation& c, const AngleTriple& t) {
  ConstellationResiduals out;
  for (int i = 0; i < 3; ++i) {
    const double phi = t[i].value();
    const HelicoidFrame& f = c.frames[i];
    const double pitch = helicoid_pitch(lambda_of_phi(t[i]), c.convention);
    const OrientedLine& a = c.lines[kFramePairs[i][0]];
    const OrientedLine& b = c.lines[kFramePairs[i][1]];

    out.containment[i] = {ruling_residual(f, pitch, a), ruling_residual(f, pitch, b)};

    const OrientedLine moved = screw_local(f.to_local(a), pitch, phi);
    const OrientedLine target = f.to_local(b);
    out.rotation[i] = std::max((moved.direction + target.direction).norm(), distance_point_line(moved.point, target));

    out.angle[i] = std::fabs(line_angle(a, b) - (kPi - t[i].reduced()));
    out.distance[i] = std::fabs(line_distance(a, b) - ray_distance_h(t[i], c.convention));
    out.frame_orthogonality = std::max(out.frame_orthogonality, orthogonality_residual(f.rotation));
  }
  return out;
}

/// Complete invariants of a labelled triple of oriented lines under proper
/// rigid motions: pairwise direction cosines, pairwise signed distances and
/// the triple product of the directions.
struct LineTripleInvariants {
  std::array<double, 3> cosines;
  std::array<double, 3> distances;
  double triple_product;

  double max_difference(const LineTripleInvariants& o) const {
    double m = std::fabs(triple_product - o.triple_product);
    for (int k = 0; k < 3; ++k) {
      m = std::max({m, std::fabs(cosines[k] - o.cosines[k]), std::fabs(distances[k] - o.distances[k])});
    }
    return m;
  }

  /// The invariants with the triple product negated.
  LineTripleInvariants flipped() const { return {cosines, distances, -triple_product}; }
};

inline LineTripleInvariants line_invariants(const std::array<OrientedLine, 3>& l) {
  LineTripleInvariants inv{};
  for (int k = 0; k < 3; ++k) {
    const OrientedLine& a = l[k];
    const OrientedLine& b = l[(k + 1) % 3];
    inv.cosines[k] = a.direction.dot(b.direction);
    inv.distances[k] = signed_line_distance(a, b);
  }
  inv.triple_product = l[0].direction.dot(l[1].direction.cross(l[2].direction));
  return inv;
}

inline bool lines_congruent(const std::array<OrientedLine, 3>& a, const std::array<OrientedLine, 3>& b,
                            double tol = 1e-9) {
  return line_invariants(a).max_difference(line_invariants(b)) < tol;
}

/// True when b has the direction triangle of a reflected and the same signed
/// pair distances; this is how the two solutions for a generic triple relate.
inline bool mirror_partners(const std::array<OrientedLine, 3>& a, const std::array<OrientedLine, 3>& b,
                            double tol = 1e-9) {
  return line_invariants(a).flipped().max_difference(line_invariants(b)) < tol;
}

struct ConstellationSolution {
  TripleClass classification;
  std::vector<Constellation> constellations;
  std::string diagnostic;
};

struct SolveOptions {
  double face_tolerance = 1e-12;
  double multiple_of_pi_tolerance = 1e-12;
  double residual_tolerance = 1e-9;
};

namespace detail {

inline Constellation place_lines(const std::array<Vec3, 3>& d, const AngleTriple& t, PitchConvention conv) {
  std::array<double, 3> c{}, sigma{};
  std::array<Vec3, 3> n;
  for (int i = 0; i < 3; ++i) {
    const Vec3 cr = d[kFramePairs[i][0]].cross(d[kFramePairs[i][1]]);
    n[i] = cr.normalized();
    sigma[i] = std::fmod(t[i].value(), kTwoPi) < kPi ? 1.0 : -1.0;
    c[i] = sigma[i] * helicoid_pitch(lambda_of_phi(t[i]), conv) * t[i].value();
  }

  // Unknowns p23, p31 with p12 = 0; row i is (p_b - p_a) . n_i = c_i.
  Eigen::Matrix<double, 3, 6> A = Eigen::Matrix<double, 3, 6>::Zero();
  auto put = [&](int row, int line, double s) {
    if (line == 0) return;
    A.block<1, 3>(row, 3 * (line - 1)) += s * n[row].transpose();
  };
  for (int i = 0; i < 3; ++i) {
    put(i, kFramePairs[i][1], 1.0);
    put(i, kFramePairs[i][0], -1.0);
  }
  const Eigen::Matrix<double, 6, 1> x =
      A.transpose() * (A * A.transpose()).ldlt().solve(Eigen::Vector3d(c[0], c[1], c[2]));

  Constellation out;
  out.convention = conv;
  out.lines = {OrientedLine(Vec3::Zero(), d[0]), OrientedLine(x.head<3>(), d[1]), OrientedLine(x.tail<3>(), d[2])};

  // Gauge: the foot of pair 1 on l12 at the origin.
  const auto f0 = common_perpendicular(out.lines[0], out.lines[2]);
  const Vec3 shift = out.lines[0].at((*f0)[0]);
  for (auto& l : out.lines) l = OrientedLine(l.point - shift, l.direction);

  for (int i = 0; i < 3; ++i) {
    const OrientedLine& a = out.lines[kFramePairs[i][0]];
    const OrientedLine& b = out.lines[kFramePairs[i][1]];
    const auto feet = common_perpendicular(a, b);
    const Vec3 e3 = -sigma[i] * n[i];
    const Vec3 e2 = -a.direction;
    const Vec3 e1 = e2.cross(e3);
    HelicoidFrame& f = out.frames[i];
    f.lambda = lambda_of_phi(t[i]);
    f.rotation.col(0) = e1;
    f.rotation.col(1) = e2;
    f.rotation.col(2) = e3;
    f.translation = a.at((*feet)[0]);
  }
  return out;
}

}  // namespace detail

/// The two generic admissible constellations of a triple, or none.
///
/// Directions: the sides pi - r_i of a spherical triangle, in the gauge
/// d12 = e1, d23 in the (e1, e2) plane; the two solutions differ by the sign
/// of the e3 component of d31. Positions: each pair's signed distance along
/// d_a x d_b is fixed by the screw sense of its helicoid, which leaves a 3x6
/// linear system solved in minimum norm.
inline ConstellationSolution solve_constellations(const AngleTriple& t,
                                                  PitchConvention conv = PitchConvention::Paper,
                                                  const SolveOptions& opts = {}) {
  ConstellationSolution out;
  out.classification = classify_triple(t, {opts.face_tolerance, opts.multiple_of_pi_tolerance});
  switch (out.classification.tag) {
    case TripleTag::GenericAdmissible: break;
    case TripleTag::ParallelBoundary:
      out.diagnostic = "reduced triple lies on the tetrahedron boundary; parallel constellations are not constructed";
      return out;
    case TripleTag::Inadmissible:
      out.diagnostic = "reduced triple lies outside the tetrahedron";
      return out;
    case TripleTag::DegenerateMultipleOfPi:
      out.diagnostic = "an end angle is a multiple of pi";
      return out;
  }

  const auto& r = out.classification.reduced;
  const std::array<double, 3> s{kPi - r[0], kPi - r[1], kPi - r[2]};
  const double cy = (std::cos(s[2]) - std::cos(s[0]) * std::cos(s[1])) / std::sin(s[1]);
  const double z2 = 1.0 - std::cos(s[0]) * std::cos(s[0]) - cy * cy;
  if (!(z2 > 0.0)) {
    out.diagnostic = "spherical triangle is degenerate at working precision";
    return out;
  }
  const double cz = std::sqrt(z2);

  for (double sign : {1.0, -1.0}) {
    const std::array<Vec3, 3> d{Vec3::UnitX(), Vec3(std::cos(s[1]), std::sin(s[1]), 0.0),
                                Vec3(std::cos(s[0]), cy, sign * cz)};
    Constellation c = detail::place_lines(d, t, conv);
    const ConstellationResiduals res = verify_constellation(c, t);
    if (!res.accepted(opts.residual_tolerance)) {
      throw ConsistencyError("constellation solver residual " + std::to_string(res.max()) +
                             " exceeds tolerance");
    }
    out.constellations.push_back(std::move(c));
  }
  return out;
}

}  // namespace trinoid
