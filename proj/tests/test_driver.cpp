#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "dpm/driver.hpp"

using namespace dpm;
namespace fs = std::filesystem;

namespace {

const std::string kHeader =
    "N,E_inf_bulk,rate,E_l2_bulk,rate,E_h1_bulk,rate,E_inf_surf,rate,"
    "E_l2_surf,rate,E_h1_surf,rate,E_inf_gradx,rate,E_inf_grady,rate,"
    "E_inf_gradz,rate,cond_normal,seconds";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

// The timing column is the only nondeterministic cell.
std::string drop_seconds(const std::string& csv) {
  std::string out;
  for (const std::string& line : lines_of(csv))
    out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

fs::path fresh_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() /
                       (std::string("dpm_driver_test_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("configuration validation") {
  RunConfig ok;
  CHECK_NOTHROW(ok.validate());
  RunConfig c;
  c.meshes = {};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.meshes = {32};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.meshes = {63, 31};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.meshes = {31, 31};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.order = 4;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.t_final = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.jobs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.test_id = "bogus";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.perturb = "radius";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.harmonics = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("convergence table formatting") {
  RunResult a;
  a.cells = 31;
  a.bulk.e_inf = 4.0;
  a.bulk.e_l2 = 2.0;
  a.bulk.e_h1 = 8.0;
  a.surf.e_inf = 1.0;
  a.surf.e_l2 = 1.0;
  a.surf.e_h1 = 1.0;
  a.bulk.e_grad_x = 3.0;
  a.bulk.e_grad_y = 3.0;
  a.bulk.e_grad_z = 3.0;
  a.cond_first = 35.0;
  a.seconds = 1.25;
  RunResult b = a;
  b.cells = 63;
  b.bulk.e_inf = 1.0;   // rate 2
  b.bulk.e_l2 = 0.25;   // rate 3
  b.bulk.e_h1 = 4.0;    // rate 1
  b.surf.e_inf = 0.5;
  b.surf.e_l2 = 0.5;
  b.surf.e_h1 = 0.5;

  const std::string csv = format_csv({a, b});
  const std::vector<std::string> lines = lines_of(csv);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == kHeader);
  CHECK(lines[1] ==
        "31,4.000000e+00,,2.000000e+00,,8.000000e+00,,1.000000e+00,,"
        "1.000000e+00,,1.000000e+00,,3.000000e+00,,3.000000e+00,,"
        "3.000000e+00,,3.500000e+01,1.250000e+00");
  CHECK(lines[2].substr(0, 3) == "63,");
  CHECK(lines[2].find("1.000000e+00,2.000000e+00") != std::string::npos);
  CHECK(lines[2].find("2.500000e-01,3.000000e+00") != std::string::npos);
  CHECK(lines[2].find("4.000000e+00,1.000000e+00") != std::string::npos);
}

TEST_CASE("study writes the table and optional dumps") {
  const fs::path dir = fresh_dir("dumps");
  RunConfig c;
  c.test_id = "d1";
  c.meshes = {31};
  c.out_dir = dir.string();
  c.dump_bulk = true;
  c.dump_surface = true;
  const StudyResult study = run_study(c);
  REQUIRE(study.runs.size() == 1);
  CHECK(study.csv_path == (dir / "d1.csv").string());

  const std::string csv = slurp(study.csv_path);
  const std::vector<std::string> lines = lines_of(csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == kHeader);
  CHECK(lines[1].substr(0, 3) == "31,");
  // One value and one rate cell per norm; the first row has empty rates.
  CHECK(std::count(lines[1].begin(), lines[1].end(), ',') == 20);
  CHECK(lines[1].find(",,") != std::string::npos);

  const std::vector<std::string> bulk =
      lines_of(slurp((dir / "d1_N31_bulk.dat").string()));
  REQUIRE(bulk.size() == 9104 + 1);
  CHECK(bulk[0] == "# N=31 R=0.5 t=0.1");
  // Four columns: x y z value.
  std::istringstream row(bulk[1]);
  double x, y, z, v;
  REQUIRE(static_cast<bool>(row >> x >> y >> z >> v));
  CHECK(x * x + y * y + z * z < 0.25);

  const std::vector<std::string> surf =
      lines_of(slurp((dir / "d1_N31_surface.dat").string()));
  REQUIRE(surf.size() == 64 * 128 + 1);
  CHECK(surf[0] == "# N=31 R=0.5 t=0.1");

  // No leftover temporaries from the atomic writes.
  for (const auto& entry : fs::directory_iterator(dir))
    CHECK(entry.path().extension() != ".tmp");
  fs::remove_all(dir);
}

TEST_CASE("output directory falls back to the environment") {
  const fs::path dir = fresh_dir("envdir");
  setenv("DPM_OUT_DIR", dir.c_str(), 1);
  RunConfig c;
  c.test_id = "d1";
  c.meshes = {31};
  const StudyResult study = run_study(c);
  unsetenv("DPM_OUT_DIR");
  CHECK(study.csv_path == (dir / "d1.csv").string());
  CHECK(fs::exists(study.csv_path));
  fs::remove_all(dir);
}

TEST_CASE("tables are deterministic and independent of the worker count") {
  const fs::path dir = fresh_dir("jobs");
  RunConfig c;
  c.test_id = "d1";
  c.meshes = {31, 63};
  c.out_dir = (dir / "serial").string();
  const StudyResult serial = run_study(c);
  c.out_dir = (dir / "serial2").string();
  const StudyResult serial2 = run_study(c);
  c.out_dir = (dir / "parallel").string();
  c.jobs = 2;
  const StudyResult parallel = run_study(c);

  const std::string base = drop_seconds(slurp(serial.csv_path));
  CHECK(base == drop_seconds(slurp(serial2.csv_path)));
  CHECK(base == drop_seconds(slurp(parallel.csv_path)));
  REQUIRE(parallel.runs.size() == 2);
  CHECK(parallel.runs[0].cells == 31);
  CHECK(parallel.runs[1].cells == 63);
  CHECK(parallel.runs[0].bulk.e_inf == serial.runs[0].bulk.e_inf);
  CHECK(parallel.runs[1].bulk.e_inf == serial.runs[1].bulk.e_inf);
  fs::remove_all(dir);
}
