#pragma once

// Run configuration shared by the command-line subcommands. Read from a JSON
// file named by --config or the TRINOID_CONFIG environment variable; every
// field is optional.

#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>

#include "trinoid/errors.hpp"
#include "trinoid/params.hpp"

namespace trinoid {

struct Config {
  double quadrature_tol = 1e-11;
  double face_tolerance = 1e-12;
  int grid_nx = 21;
  int grid_ny = 21;
  int samples_per_arc = 33;
  int boundary_samples = 16;
  int radii = 8;  // dyadic radii 2^-1 .. 2^-radii
  PitchConvention convention = PitchConvention::Paper;
  std::string output_dir = ".";
  std::uint64_t seed = 1;

  void validate() const {
    if (!(quadrature_tol > 0.0) || !(face_tolerance > 0.0)) throw DomainError("config tolerances must be positive");
    if (grid_nx < 2 || grid_ny < 2) throw DomainError("config grid sizes must be at least 2");
    if (samples_per_arc < 2 || boundary_samples < 8 || radii < 1) throw DomainError("config sampling sizes too small");
  }
};

inline Config config_from_json(const nlohmann::json& j) {
  Config c;
  try {
    c.quadrature_tol = j.value("quadrature_tol", c.quadrature_tol);
    c.face_tolerance = j.value("face_tolerance", c.face_tolerance);
    c.grid_nx = j.value("grid_nx", c.grid_nx);
    c.grid_ny = j.value("grid_ny", c.grid_ny);
    c.samples_per_arc = j.value("samples_per_arc", c.samples_per_arc);
    c.boundary_samples = j.value("boundary_samples", c.boundary_samples);
    c.radii = j.value("radii", c.radii);
    if (j.contains("convention")) c.convention = pitch_convention_from_string(j.at("convention").get<std::string>());
    c.output_dir = j.value("output_dir", c.output_dir);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

/// `path` wins over the environment; no path and no variable gives defaults.
inline Config load_config(const std::string& path = {}) {
  std::string p = path;
  if (p.empty()) {
    if (const char* env = std::getenv("TRINOID_CONFIG")) p = env;
  }
  if (p.empty()) return {};
  std::ifstream in(p);
  if (!in) throw DomainError("cannot open config file '" + p + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("config file '" + p + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace trinoid
