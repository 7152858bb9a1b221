#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "trinoid/cli.hpp"

using namespace trinoid;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("trinoid_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Vec3> obj_vertices(const std::string& file) {
  std::vector<Vec3> v;
  std::istringstream in(slurp(file));
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("v ", 0) != 0) continue;
    std::istringstream row(line.substr(2));
    double x, y, z;
    row >> x >> y >> z;
    v.emplace_back(x, y, z);
  }
  return v;
}

int count_lines(const std::string& file, const std::string& prefix) {
  int n = 0;
  std::istringstream in(slurp(file));
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST(Cli, ClassifyExamples) {
  auto r = run({"classify", "1.5707963", "1.5707963", "1.5707963"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.j()["tag"], "GenericAdmissible");
  r = run({"classify", "0.314159", "0.314159", "0.314159"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.j()["tag"], "Inadmissible");
  r = run({"classify", "3.14159265358979", "1", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.j()["tag"], "DegenerateMultipleOfPi");
  r = run({"classify", "--degrees", "90", "90", "90"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(run({"classify", "1", "2"}).code, 2);
  EXPECT_EQ(run({"classify", "a", "b", "c"}).code, 2);
}

TEST(Cli, ConvertExamples) {
  auto r = run({"convert", "--from", "lambda", "0.75"});
  ASSERT_EQ(r.code, 0);
  const json j = r.j();
  EXPECT_NEAR(j["phi"].get<double>(), kPi / 2, 1e-15);
  EXPECT_NEAR(j["mu_bryant"].get<double>(), -0.25, 1e-15);
  EXPECT_NEAR(j["lambda_bps"].get<double>(), 0.25, 1e-15);
  EXPECT_NEAR(j["total_curvature"].get<double>(), -kTwoPi, 1e-14);
  EXPECT_NEAR(j["h"]["paper"].get<double>(), 3 * kPi / 8, 1e-15);
  EXPECT_NEAR(j["h"]["helicoid"].get<double>(), 3 * kPi / 4, 1e-15);
  r = run({"convert", "--from", "bps", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(r.j()["lambda"].get<double>(), -3.0 / 16.0, 1e-15);
  EXPECT_EQ(run({"convert", "--from", "lambda", "0"}).code, 2);
  EXPECT_EQ(run({"convert", "--from", "lambda", "-0.2"}).code, 0);
  EXPECT_EQ(run({"convert", "--from", "kelvin", "1"}).code, 2);
}

TEST(Cli, SurfaceObjCountsAndOverwrite) {
  TempDir d;
  const std::string obj = d / "h.obj";
  auto r = run({"surface", "helicoid", "1", "--nx", "21", "--ny", "21", "--obj", obj});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(obj, "v "), 441);
  EXPECT_EQ(count_lines(obj, "f "), 400);
  EXPECT_EQ(r.j()["vertices"], 441);
  const std::string before = slurp(obj);
  r = run({"surface", "helicoid", "2", "--obj", obj});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(slurp(obj), before);
  EXPECT_EQ(run({"surface", "helicoid", "2", "--obj", obj, "--force"}).code, 0);
  EXPECT_NE(slurp(obj), before);
}

TEST(Cli, SurfaceNegativeLambda) {
  TempDir d;
  EXPECT_EQ(run({"surface", "helicoid", "-0.2", "--obj", d / "h.obj"}).code, 0);
}

TEST(Cli, CousinCsvStaysInHalfSpace) {
  TempDir d;
  const std::string csv = d / "c.csv";
  ASSERT_EQ(run({"surface", "cousin", "0.75", "--csv", csv, "--x-min", "-30", "--x-max", "30"}).code, 0);
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  for (; std::getline(in, line); ++rows) {
    std::istringstream row(line);
    std::vector<double> v;
    for (std::string cell; std::getline(row, cell, ',');) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 8u);
    ASSERT_GT(v[4], 0.0);
  }
  EXPECT_EQ(rows, 441);
}

TEST(Cli, CousinBallStaysInBall) {
  TempDir d;
  const std::string obj = d / "b.obj";
  ASSERT_EQ(run({"surface", "cousin", "0.75", "--ball", "--obj", obj}).code, 0);
  for (const auto& p : obj_vertices(obj)) ASSERT_LT(p.norm(), 1.0);
  EXPECT_EQ(run({"surface", "helicoid", "1", "--ball"}).code, 2);
  EXPECT_EQ(run({"surface", "torus", "1"}).code, 2);
  EXPECT_EQ(run({"surface", "helicoid", "1", "--nx", "1"}).code, 2);
}

TEST(Cli, CatenoidObjMeanCurvatureSpotCheck) {
  // a 3 x 3 grid with spacing 1e-3 around (0.3, 0.7) is a central-difference stencil
  TempDir d;
  const std::string obj = d / "c.obj";
  const double h = 1e-3;
  ASSERT_EQ(run({"surface", "catenoid", "2", "--nx", "3", "--ny", "3", "--x-min", io::fmt17(0.3 - h), "--x-max",
                 io::fmt17(0.3 + h), "--y-min", io::fmt17(0.7 - h), "--y-max", io::fmt17(0.7 + h), "--obj", obj})
                .code,
            0);
  const auto v = obj_vertices(obj);
  ASSERT_EQ(v.size(), 9u);
  auto at = [&](int i, int j) { return v[static_cast<std::size_t>(3 * (j + 1) + (i + 1))]; };
  const Vec3 fx = (at(1, 0) - at(-1, 0)) / (2 * h), fy = (at(0, 1) - at(0, -1)) / (2 * h);
  const Vec3 fxx = (at(1, 0) - 2 * at(0, 0) + at(-1, 0)) / (h * h);
  const Vec3 fyy = (at(0, 1) - 2 * at(0, 0) + at(0, -1)) / (h * h);
  const Vec3 fxy = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
  const Vec3 n = fx.cross(fy).normalized();
  const double E = fx.dot(fx), F = fx.dot(fy), G = fy.dot(fy);
  const double H = (E * n.dot(fyy) - 2 * F * n.dot(fxy) + G * n.dot(fxx)) / (2 * (E * G - F * F));
  EXPECT_NEAR(H, 0.0, 1e-4);
}

TEST(Cli, ConstellationExamples) {
  TempDir d;
  const std::string obj = d / "k.obj";
  auto r = run({"constellation", "1.5707963267948966", "1.5707963267948966", "1.5707963267948966", "--emit-obj", obj});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.j();
  EXPECT_EQ(j["count"], 2);
  EXPECT_FALSE(j["congruent"].get<bool>());
  EXPECT_TRUE(j["mirror_partners"].get<bool>());
  for (const auto& c : j["constellations"]) EXPECT_LT(c["residuals"]["max"].get<double>(), 1e-9);
  EXPECT_EQ(count_lines(obj, "l "), 6);
  EXPECT_EQ(count_lines(obj, "o s2_l31"), 1);
  for (const auto& p : obj_vertices(obj)) EXPECT_LE(p.cwiseAbs().maxCoeff(), 5.0 + 1e-12);

  r = run({"constellation", "0.3141592653589793", "0.3141592653589793", "0.3141592653589793"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.j()["count"], 0);
  r = run({"--convention", "helicoid", "constellation", "--degrees", "90", "90", "90"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(r.j()["constellations"][0]["frames"][0]["h"].get<double>(), 3 * kPi / 4, 1e-15);
}

TEST(Cli, VerifyEndExamples) {
  TempDir d;
  const std::string plain = d / "plain.json", bumpy = d / "bumpy.json";
  ASSERT_EQ(run({"make-end", "--alpha", "0.5", "--out", plain}).code, 0);
  ASSERT_EQ(run({"make-end", "--alpha", "0.5", "--perturbation", "0.01", "--seed", "7", "--out", bumpy}).code, 0);

  auto r = run({"verify-end", plain, "--profile-csv", d / "p.csv", "--report", d / "r.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : r.j()["decay"]["rows"]) EXPECT_LT(row["sup_distance"].get<double>(), 1e-8);
  EXPECT_EQ(json::parse(slurp(d / "r.json")), r.j());
  EXPECT_EQ(count_lines(d / "p.csv", "0."), 8);

  r = run({"verify-end", bumpy});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(r.j()["decay"]["strictly_decreasing"].get<bool>());

  r = run({"verify-end", plain, "--lambda", "1.2"});
  EXPECT_EQ(r.code, 1);
  const auto failed = r.j()["failed"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(failed.begin(), failed.end(), "helicoid_fit"), failed.end());

  std::ofstream(d / "bad.json") << "{ not json";
  EXPECT_EQ(run({"verify-end", d / "bad.json"}).code, 2);
  std::ofstream(d / "exp.json") << R"({"kind": "exponential", "lambda": 1})";
  EXPECT_EQ(run({"verify-end", d / "exp.json"}).code, 2);
  EXPECT_EQ(run({"verify-end", d / "missing.json"}).code, 2);
}

TEST(Cli, MakeEndIsDeterministic) {
  const auto a = run({"make-end", "--alpha", "1.5", "--perturbation", "0.01", "--seed", "3"});
  const auto b = run({"make-end", "--alpha", "1.5", "--perturbation", "0.01", "--seed", "3"});
  const auto c = run({"make-end", "--alpha", "1.5", "--perturbation", "0.01", "--seed", "4"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(run({"make-end", "--alpha", "1"}).code, 2);
}

TEST(Cli, ConfigFile) {
  TempDir d;
  std::ofstream(d / "cfg.json") << R"({"output_dir": ")" << (d.path / "out").string()
                                << R"(", "grid_nx": 5, "grid_ny": 4, "convention": "helicoid"})";
  auto r = run({"--config", d / "cfg.json", "surface", "catenoid", "1", "--obj", "c.obj"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(d / "out/c.obj", "v "), 20);
  r = run({"--config", d / "cfg.json", "convert", "--from", "lambda", "1"});
  EXPECT_EQ(r.code, 0);
  std::ofstream(d / "bad.json") << R"({"quadrature_tol": -1})";
  EXPECT_EQ(run({"--config", d / "bad.json", "convert", "--from", "lambda", "1"}).code, 2);
  EXPECT_EQ(run({"--config", d / "none.json", "convert", "--from", "lambda", "1"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"--convention", "other", "convert", "1"}).code, 2);
}
