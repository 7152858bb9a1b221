#pragma once

// Command-line front end. Exit codes: 0 success, 1 negative result, 2 input
// error, 3 internal consistency error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "trinoid/asymptotics.hpp"
#include "trinoid/classify.hpp"
#include "trinoid/config.hpp"
#include "trinoid/constellation.hpp"
#include "trinoid/io.hpp"
#include "trinoid/params.hpp"
#include "trinoid/surfaces.hpp"
#include "trinoid/weierstrass.hpp"

namespace trinoid::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kInputError = 2, kInternalError = 3 };

using io::json;

namespace detail {

inline void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

inline std::filesystem::path resolve(const Config& cfg, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : std::filesystem::path(cfg.output_dir) / p;
}

/// Opens `file` for writing, refusing to replace an existing file unless forced.
inline std::ofstream open_output(const Config& cfg, const std::string& file, bool force) {
  const auto p = resolve(cfg, file);
  if (std::filesystem::exists(p) && !force) {
    throw DomainError("refusing to overwrite '" + p.string() + "' (use --force)");
  }
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw DomainError("cannot write '" + p.string() + "'");
  return os;
}

inline double to_radians(double v, bool degrees) { return degrees ? v * kPi / 180.0 : v; }

inline std::array<double, 3> triple_radians(const std::vector<double>& v, bool degrees) {
  return {to_radians(v[0], degrees), to_radians(v[1], degrees), to_radians(v[2], degrees)};
}

/// Uniform double in [0, 1) from the raw 64-bit output, independent of the
/// standard library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

// ---- classify -----------------------------------------------------------------

inline int cmd_classify(const std::array<double, 3>& phi, const Config& cfg, std::ostream& out) {
  const AngleTriple t(phi[0], phi[1], phi[2]);
  const TripleClass c = classify_triple(t, {cfg.face_tolerance, cfg.face_tolerance});
  std::array<double, 3> bps{}, deltas{};
  for (int i = 0; i < 3; ++i) {
    bps[i] = phi[i] / kTwoPi;
    deltas[i] = bobenko_delta(bps[i]);
  }
  const auto bslack = bobenko_slacks(deltas);
  json j = {{"input", io::to_json(phi)},
            {"reduced", io::to_json(c.reduced)},
            {"tag", to_string(c.tag)},
            {"slacks", io::to_json(c.slacks)},
            {"membership", to_string(tetrahedron_contains(c.reduced, cfg.face_tolerance))},
            {"bobenko",
             {{"lambda_bps", io::to_json(bps)},
              {"delta", io::to_json(deltas)},
              {"slacks", io::to_json(bslack)},
              {"membership", to_string(bobenko_admissible(deltas, cfg.face_tolerance / kTwoPi))}}},
            {"face_tolerance", cfg.face_tolerance}};
  detail::print(out, j);
  return c.tag == TripleTag::GenericAdmissible ? kOk : kNegative;
}

// ---- convert ------------------------------------------------------------------

inline CatenoidParameter lambda_from(const std::string& from, double value) {
  if (from == "lambda") return CatenoidParameter(value);
  if (from == "phi") return lambda_of_phi(value);
  if (from == "bryant") return bryant_mu_to_lambda(BryantParameter(value));
  if (from == "bps") return bps_to_lambda(BpsParameter(value));
  throw DomainError("unknown source convention '" + from + "'");
}

inline int cmd_convert(const std::string& from, double value, std::ostream& out) {
  const CatenoidParameter l = lambda_from(from, value);
  const Angle phi = phi_of_lambda(l);
  json j = {{"from", from},
            {"value", value},
            {"lambda", l.lambda()},
            {"phi", phi.value()},
            {"phi_over_pi", phi.value() / kPi},
            {"reduced_angle", phi.reduced()},
            {"mu_bryant", lambda_to_bryant_mu(l).mu()},
            {"lambda_bps", lambda_to_bps(l).value()},
            {"delta", bobenko_delta(lambda_to_bps(l).value())},
            {"a", l.a()},
            {"alpha", l.alpha()},
            {"total_curvature", total_curvature(l)},
            {"h", {{"paper", ray_distance_h(phi, PitchConvention::Paper)},
                   {"helicoid", ray_distance_h(phi, PitchConvention::Helicoid)}}}};
  detail::print(out, j);
  return kOk;
}

// ---- surface ------------------------------------------------------------------

struct SurfaceArgs {
  std::string kind;
  double lambda = 1.0;
  std::optional<int> nx, ny;  // default from the config
  std::optional<double> x_min, x_max, y_min, y_max;
  std::string obj, csv;
  bool force = false;
  bool ball = false;
};

inline int cmd_surface(const SurfaceArgs& a, const Config& cfg, std::ostream& out) {
  const CatenoidParameter l(a.lambda);
  GridSpec spec;
  spec.nx = a.nx.value_or(cfg.grid_nx);
  spec.ny = a.ny.value_or(cfg.grid_ny);
  if (a.kind == "cousin") spec.y_max = cousin_period(l);
  if (a.x_min) spec.x_min = *a.x_min;
  if (a.x_max) spec.x_max = *a.x_max;
  if (a.y_min) spec.y_min = *a.y_min;
  if (a.y_max) spec.y_max = *a.y_max;
  if (!(spec.x_min < spec.x_max) || !(spec.y_min < spec.y_max)) throw DomainError("grid bounds must be increasing");

  SurfaceGrid g;
  if (a.kind == "helicoid") {
    g = sample_grid(helicoid_sampler(l), Model::Euclidean, spec, exponential_normal());
  } else if (a.kind == "catenoid") {
    g = sample_grid(catenoid_sampler(l), Model::Euclidean, spec, exponential_normal());
  } else if (a.kind == "cousin") {
    g = a.ball ? sample_grid(cousin_ball_sampler(l), Model::Ball, spec)
               : sample_grid(cousin_sampler(l), Model::UpperHalfSpace, spec);
  } else {
    throw DomainError("unknown surface kind '" + a.kind + "' (expected helicoid|catenoid|cousin)");
  }
  if (a.ball && a.kind != "cousin") throw DomainError("--ball applies to the cousin only");

  const std::string comment = a.kind + " lambda " + io::fmt17(a.lambda);
  json files = json::object();
  if (!a.obj.empty()) {
    auto os = detail::open_output(cfg, a.obj, a.force);
    io::write_obj(os, g, comment);
    files["obj"] = detail::resolve(cfg, a.obj).string();
  }
  if (!a.csv.empty()) {
    auto os = detail::open_output(cfg, a.csv, a.force);
    io::write_csv(os, g);
    files["csv"] = detail::resolve(cfg, a.csv).string();
  }
  json j = {{"kind", a.kind},
            {"lambda", a.lambda},
            {"model", to_string(g.model)},
            {"nx", g.nx},
            {"ny", g.ny},
            {"grid", {{"x_min", spec.x_min}, {"x_max", spec.x_max}, {"y_min", spec.y_min}, {"y_max", spec.y_max}}},
            {"vertices", static_cast<int>(g.positions.size())},
            {"faces", (g.nx - 1) * (g.ny - 1)},
            {"files", files}};
  detail::print(out, j);
  return kOk;
}

// ---- constellation ------------------------------------------------------------

struct ConstellationArgs {
  std::array<double, 3> phi{};
  std::string obj;
  bool patches = false;
  bool force = false;
};

inline int cmd_constellation(const ConstellationArgs& a, const Config& cfg, std::ostream& out) {
  const AngleTriple t(a.phi[0], a.phi[1], a.phi[2]);
  SolveOptions opts;
  opts.face_tolerance = cfg.face_tolerance;
  opts.multiple_of_pi_tolerance = cfg.face_tolerance;
  const ConstellationSolution sol = solve_constellations(t, cfg.convention, opts);

  json list = json::array();
  for (const auto& c : sol.constellations) list.push_back(io::to_json(c, t));
  json j = {{"input", io::to_json(a.phi)},
            {"convention", to_string(cfg.convention)},
            {"tag", to_string(sol.classification.tag)},
            {"reduced", io::to_json(sol.classification.reduced)},
            {"count", static_cast<int>(sol.constellations.size())},
            {"diagnostic", sol.diagnostic},
            {"constellations", list}};
  if (sol.constellations.size() == 2) {
    j["congruent"] = lines_congruent(sol.constellations[0].lines, sol.constellations[1].lines);
    j["mirror_partners"] = mirror_partners(sol.constellations[0].lines, sol.constellations[1].lines);
  }
  if (!a.obj.empty() && !sol.constellations.empty()) {
    auto os = detail::open_output(cfg, a.obj, a.force);
    io::ConstellationObjOptions o;
    o.helicoid_patches = a.patches;
    os << "# constellations, convention " << to_string(cfg.convention) << ", box half-width "
       << io::fmt17(o.half_box) << '\n';
    std::size_t next = 1;
    for (std::size_t k = 0; k < sol.constellations.size(); ++k) {
      next = io::write_constellation_obj(os, sol.constellations[k], t, o, "s" + std::to_string(k + 1) + "_", next);
    }
    j["files"] = {{"obj", detail::resolve(cfg, a.obj).string()}};
  }
  detail::print(out, j);
  return sol.constellations.size() == 2 ? kOk : kNegative;
}

// ---- verify-end ---------------------------------------------------------------

struct VerifyEndArgs {
  std::string data_file;
  std::optional<double> lambda;
  std::string report, profile_csv;
  std::optional<int> radii, samples_per_arc, boundary_samples;
  std::optional<double> tol;
  bool force = false;
};

inline PowerEndData read_power_end(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DomainError("cannot open data file '" + file + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError("data file '" + file + "' is not valid JSON: " + e.what());
  }
  const WeierstrassData d = io::data_from_json(j);
  if (!std::holds_alternative<PowerEndData>(d)) throw DomainError("verify-end needs power_end data");
  return std::get<PowerEndData>(d);
}

inline int cmd_verify_end(const VerifyEndArgs& a, const Config& cfg, std::ostream& out) {
  const PowerEndData data = read_power_end(a.data_file);
  PipelineOptions opts;
  opts.radii = dyadic_radii(a.radii.value_or(cfg.radii));
  opts.samples_per_arc = a.samples_per_arc.value_or(cfg.samples_per_arc);
  opts.boundary_samples = a.boundary_samples.value_or(cfg.boundary_samples);
  opts.tol = a.tol.value_or(cfg.quadrature_tol);
  opts.lambda = a.lambda;
  if (!(opts.tol > 0.0)) throw DomainError("--tol must be positive");

  const EndReport r = verify_end(data, opts);
  const json j = io::to_json(r);
  if (!a.report.empty()) {
    auto os = detail::open_output(cfg, a.report, a.force);
    os << j.dump(2) << '\n';
  }
  if (!a.profile_csv.empty()) {
    auto os = detail::open_output(cfg, a.profile_csv, a.force);
    io::write_decay_csv(os, r.decay);
  }
  detail::print(out, j);
  return r.pass() ? kOk : kNegative;
}

// ---- make-end -----------------------------------------------------------------

struct MakeEndArgs {
  double alpha = 0.5;
  double g0 = 1.0;
  double perturbation = 0.0;
  int degree = 2;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool force = false;
};

/// Symmetric end data: real g1, w1 with `degree + 1` coefficients drawn
/// uniformly from [-perturbation, perturbation].
inline PowerEndData random_power_end(double alpha, double g0, double perturbation, int degree, std::uint64_t seed) {
  if (!(perturbation >= 0.0) || degree < 0) throw DomainError("perturbation must be >= 0 and degree >= 0");
  if (g0 == 0.0) throw DomainError("g0 must be nonzero");
  poly::Coeffs g1, w1;
  if (perturbation > 0.0) {
    std::mt19937_64 rng(seed);
    for (int k = 0; k <= degree; ++k) g1.push_back((2.0 * detail::unit_uniform(rng) - 1.0) * perturbation);
    for (int k = 0; k <= degree; ++k) w1.push_back((2.0 * detail::unit_uniform(rng) - 1.0) * perturbation);
  }
  return make_power_end_for_g0(alpha, g0, g1, w1);
}

inline int cmd_make_end(const MakeEndArgs& a, const Config& cfg, std::ostream& out) {
  const PowerEndData d = random_power_end(a.alpha, a.g0, a.perturbation, a.degree, a.seed.value_or(cfg.seed));
  const json j = io::to_json(WeierstrassData(d));
  if (!a.out.empty()) {
    auto os = detail::open_output(cfg, a.out, a.force);
    os << j.dump(2) << '\n';
  }
  detail::print(out, j);
  return kOk;
}

// ---- dispatch -----------------------------------------------------------------

/// Runs the CLI on `args` (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric CMC-1 trinoid classification tools"};
  app.require_subcommand(1);
  std::string config_path, convention;
  app.add_option("--config", config_path, "JSON config file (default: $TRINOID_CONFIG)");
  app.add_option("--convention", convention, "ray-distance convention: paper|helicoid")
      ->check(CLI::IsMember({"paper", "helicoid"}));

  std::vector<double> triple;
  bool degrees = false;

  auto* classify = app.add_subcommand("classify", "classify an end-angle triple");
  classify->add_option("phi", triple, "three end angles")->expected(3)->required();
  classify->add_flag("--degrees", degrees, "angles are given in degrees");

  std::string from = "lambda";
  double value = 0.0;
  auto* convert = app.add_subcommand("convert", "convert between end-parameter conventions");
  convert->add_option("--from", from, "source convention")->check(CLI::IsMember({"lambda", "phi", "bryant", "bps"}));
  convert->add_option("value", value, "parameter value")->required();

  SurfaceArgs sa;
  auto* surface = app.add_subcommand("surface", "sample a closed-form surface to OBJ/CSV");
  surface->add_option("kind", sa.kind, "helicoid|catenoid|cousin")->required();
  surface->add_option("lambda", sa.lambda, "catenoid parameter")->required();
  surface->add_option("--nx", sa.nx, "samples in x");
  surface->add_option("--ny", sa.ny, "samples in y");
  surface->add_option("--x-min", sa.x_min);
  surface->add_option("--x-max", sa.x_max);
  surface->add_option("--y-min", sa.y_min);
  surface->add_option("--y-max", sa.y_max);
  surface->add_option("--obj", sa.obj, "Wavefront OBJ output");
  surface->add_option("--csv", sa.csv, "CSV output");
  surface->add_flag("--force", sa.force, "overwrite existing files");
  surface->add_flag("--ball", sa.ball, "cousin in ball-model coordinates");

  ConstellationArgs ca;
  auto* constellation = app.add_subcommand("constellation", "solve for admissible constellations");
  constellation->add_option("phi", triple, "three end angles")->expected(3)->required();
  constellation->add_flag("--degrees", degrees, "angles are given in degrees");
  constellation->add_option("--emit-obj", ca.obj, "OBJ with clipped line segments");
  constellation->add_flag("--patches", ca.patches, "add helicoid patches to the OBJ");
  constellation->add_flag("--force", ca.force, "overwrite existing files");

  VerifyEndArgs va;
  auto* verify = app.add_subcommand("verify-end", "check a conjugate end against its helicoid");
  verify->add_option("data", va.data_file, "power_end JSON data file")->required();
  verify->add_option("--lambda", va.lambda, "catenoid parameter for the helicoid fit");
  verify->add_option("--report", va.report, "JSON report output");
  verify->add_option("--profile-csv", va.profile_csv, "decay profile CSV output");
  verify->add_option("--radii", va.radii, "number of dyadic radii");
  verify->add_option("--samples-per-arc", va.samples_per_arc);
  verify->add_option("--boundary-samples", va.boundary_samples);
  verify->add_option("--tol", va.tol, "quadrature tolerance");
  verify->add_flag("--force", va.force, "overwrite existing files");

  MakeEndArgs ma;
  auto* make = app.add_subcommand("make-end", "generate symmetric power_end data");
  make->add_option("--alpha", ma.alpha, "end exponent")->required();
  make->add_option("--g0", ma.g0, "leading Gauss map coefficient");
  make->add_option("--perturbation", ma.perturbation, "largest |coefficient| of g1 and w1");
  make->add_option("--degree", ma.degree, "degree of g1 and w1");
  make->add_option("--seed", ma.seed, "random seed (default from config)");
  make->add_option("--out", ma.out, "JSON output");
  make->add_flag("--force", ma.force, "overwrite existing files");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    Config cfg = load_config(config_path);
    if (!convention.empty()) cfg.convention = pitch_convention_from_string(convention);
    if (*classify) return cmd_classify(detail::triple_radians(triple, degrees), cfg, out);
    if (*convert) return cmd_convert(from, value, out);
    if (*surface) return cmd_surface(sa, cfg, out);
    if (*constellation) {
      ca.phi = detail::triple_radians(triple, degrees);
      return cmd_constellation(ca, cfg, out);
    }
    if (*verify) return cmd_verify_end(va, cfg, out);
    if (*make) return cmd_make_end(ma, cfg, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConsistencyError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const QuadratureError& e) {
    err << "internal error: " << e.what() << " (achieved " << e.achieved_error() << ")\n";
    return kInternalError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace trinoid::cli
