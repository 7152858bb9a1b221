#pragma once

// Admissibility of end-angle triples: membership of the reduced triple in the
// open tetrahedron with vertices (pi,0,0), (0,pi,0), (0,0,pi), (pi,pi,pi), and
// the equivalent four inequalities on Delta_i = |{lambda_BPS,i}|.

#include <array>
#include <cmath>
#include <string>

#include "trinoid/errors.hpp"
#include "trinoid/params.hpp"

namespace trinoid {

enum class Membership { Interior, Boundary, Outside };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::Interior: return "interior";
    case Membership::Boundary: return "boundary";
    case Membership::Outside: return "outside";
  }
  return "?";
}

/// Face slacks of the tetrahedron, each positive in the interior:
///   r1 + r2 + r3 - pi,  pi - (r1 + r2 - r3),  pi - (r1 - r2 + r3),  pi - (-r1 + r2 + r3).
inline std::array<double, 4> tetrahedron_slacks(const std::array<double, 3>& r) {
  return {r[0] + r[1] + r[2] - kPi, kPi - (r[0] + r[1] - r[2]), kPi - (r[0] - r[1] + r[2]),
          kPi - (-r[0] + r[1] + r[2])};
}

namespace detail {

inline Membership membership_from_slacks(const std::array<double, 4>& s, double face_tolerance) {
  bool on_face = false;
  for (double v : s) {
    if (v < -face_tolerance) return Membership::Outside;
    if (v <= face_tolerance) on_face = true;
  }
  return on_face ? Membership::Boundary : Membership::Interior;
}

}  // namespace detail

/// `face_tolerance` widens each face into a slab of half-width tol; the
/// default of 0 treats only exact equality as the boundary.
inline Membership tetrahedron_contains(const std::array<double, 3>& r, double face_tolerance = 0.0) {
  for (double v : r) {
    if (!(v >= 0.0 && v <= kPi)) throw DomainError("reduced angle outside [0, pi]");
  }
  return detail::membership_from_slacks(tetrahedron_slacks(r), face_tolerance);
}

inline std::array<double, 4> bobenko_slacks(const std::array<double, 3>& d) {
  return {d[0] + d[1] + d[2] - 0.5, 0.5 - (d[0] + d[1] - d[2]), 0.5 - (d[0] - d[1] + d[2]),
          0.5 - (-d[0] + d[1] + d[2])};
}

inline Membership bobenko_admissible(const std::array<double, 3>& deltas, double face_tolerance = 0.0) {
  for (double v : deltas) {
    if (!(v >= 0.0 && v <= 0.5)) throw DomainError("Delta outside [0, 1/2]");
  }
  return detail::membership_from_slacks(bobenko_slacks(deltas), face_tolerance);
}

struct AngleTriple {
  Angle phi1, phi2, phi3;

  AngleTriple(Angle a, Angle b, Angle c) : phi1(a), phi2(b), phi3(c) {}
  AngleTriple(double a, double b, double c) : phi1(a), phi2(b), phi3(c) {}

  const Angle& operator[](int i) const { return i == 0 ? phi1 : (i == 1 ? phi2 : phi3); }
  std::array<double, 3> values() const { return {phi1.value(), phi2.value(), phi3.value()}; }
  std::array<double, 3> reduced() const { return {phi1.reduced(), phi2.reduced(), phi3.reduced()}; }
};

enum class TripleTag { GenericAdmissible, ParallelBoundary, Inadmissible, DegenerateMultipleOfPi };

inline std::string to_string(TripleTag t) {
  switch (t) {
    case TripleTag::GenericAdmissible: return "GenericAdmissible";
    case TripleTag::ParallelBoundary: return "ParallelBoundary";
    case TripleTag::Inadmissible: return "Inadmissible";
    case TripleTag::DegenerateMultipleOfPi: return "DegenerateMultipleOfPi";
  }
  return "?";
}

struct TripleClass {
  TripleTag tag;
  std::array<double, 3> reduced;
  std::array<double, 4> slacks;
};

struct ClassifyOptions {
  double face_tolerance = 0.0;
  /// phi is treated as a multiple of pi when its reduced angle is within this
  /// distance of 0 or pi.
  double multiple_of_pi_tolerance = 0.0;
};

inline TripleClass classify_triple(const AngleTriple& t, const ClassifyOptions& opts = {}) {
  TripleClass out{TripleTag::Inadmissible, t.reduced(), {}};
  out.slacks = tetrahedron_slacks(out.reduced);
  for (double r : out.reduced) {
    if (r <= opts.multiple_of_pi_tolerance || r >= kPi - opts.multiple_of_pi_tolerance) {
      out.tag = TripleTag::DegenerateMultipleOfPi;
      return out;
    }
  }
  switch (tetrahedron_contains(out.reduced, opts.face_tolerance)) {
    case Membership::Interior: out.tag = TripleTag::GenericAdmissible; break;
    case Membership::Boundary: out.tag = TripleTag::ParallelBoundary; break;
    case Membership::Outside: out.tag = TripleTag::Inadmissible; break;
  }
  return out;
}

}  // namespace trinoid
