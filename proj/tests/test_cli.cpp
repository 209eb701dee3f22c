#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "soliton/error.hpp"

namespace fs = std::filesystem;
using namespace soliton;

namespace {

const fs::path kWork = fs::path(SOLITON_CLI_WORKDIR);

int run(const std::string& args) {
  const std::string cmd = std::string(SOLITON_CLI) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kOneSoliton = R"([medium]
beta = 1
gamma = 1
omega0 = 1
sigma = 0.5
r_init = 1

[solitons]
m = 0.8
c1 = 1
c2 = 1

[grid]
zeta_min = -5
zeta_max = 5
zeta_points = 11
tau_min = -5
tau_max = 5
tau_points = 11
omega = -1.5, 0, 0.5, 2
)";

}  // namespace

TEST_CASE("build writes deterministic fields matching the closed-form one-soliton") {
  const fs::path cfg = write_config("one.ini", kOneSoliton);
  REQUIRE(run("build --config " + cfg.string() + " --out " + (kWork / "b1").string()) == 0);
  REQUIRE(run("build --jobs 3 --config " + cfg.string() + " --out " + (kWork / "b2").string()) == 0);
  const std::string a = slurp(kWork / "b1" / "fields.csv");
  CHECK(a == slurp(kWork / "b2" / "fields.csv"));
  CHECK(a.find('\r') == std::string::npos);
  CHECK(fs::exists(kWork / "b1" / "state.json"));

  std::string header;
  const auto rows = read_csv(kWork / "b1" / "fields.csv", &header);
  CHECK(header == "zeta,tau,omega,e,R,S,U");
  REQUIRE(rows.size() == 11 * 11 * 4);
  // hand-derived one-soliton fields: e = beta + 2 m sech, R = r (d - 2 m^2 sech^2)/d,
  // S = 2 m^2 r sech tanh / d, U = -4 m r w sech / d with d = w^2 + m^2
  const double m = 0.8, v1 = -0.5 * m / ((m + 0.5) * (m + 0.5) + 1.0);
  double worst = 0.0;
  for (const auto& r : rows) {
    const double z = r[0], t = r[1], w = r[2];
    const double x1 = (2.0 * v1 + m) * z - m * t;
    const double sech = 1.0 / std::cosh(x1), th = std::tanh(x1), d = w * w + m * m;
    const double expect[] = {1.0 + 2.0 * m * sech, (d - 2.0 * m * m * sech * sech) / d, 2.0 * m * m * sech * th / d,
                             -4.0 * m * w * sech / d};
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(r[3 + k] - expect[k]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("build edge cases and exit codes") {
  const fs::path vac = write_config("vac.ini", "[solitons]\nm =\n[grid]\nzeta_points = 2\ntau_points = 2\n");
  REQUIRE(run("build --config " + vac.string() + " --out " + (kWork / "vac").string()) == 0);
  for (const auto& r : read_csv(kWork / "vac" / "fields.csv")) {
    CHECK(r[3] == 1.0);
    CHECK(r[4] == 1.0);
    CHECK(r[5] == 0.0);
    CHECK(r[6] == 0.0);
  }
  const fs::path dup = write_config("dup.ini", "[solitons]\nm = 0.8, 0.8\n");
  CHECK(run("build --config " + dup.string() + " --out " + (kWork / "dup").string()) ==
        exit_code(ErrorKind::PoleCollision));
  const fs::path bad = write_config("bad.ini", "[medium]\nsigma = -1\n[solitons]\nm = 0.8\n");
  CHECK(run("build --config " + bad.string() + " --out " + (kWork / "bad").string()) ==
        exit_code(ErrorKind::InvalidArgument));
  const fs::path junk = write_config("junk.ini", "[medium]\nbeta = one\n");
  CHECK(run("build --config " + junk.string()) == 2);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);

  // distinct codes per error class
  std::vector<int> codes;
  for (int k = 0; k <= static_cast<int>(ErrorKind::InvalidArgument); ++k)
    codes.push_back(exit_code(static_cast<ErrorKind>(k)));
  std::sort(codes.begin(), codes.end());
  CHECK(std::adjacent_find(codes.begin(), codes.end()) == codes.end());
  CHECK(codes.front() > 2);
}

TEST_CASE("verify") {
  const fs::path cfg = write_config("one.ini", kOneSoliton);
  CHECK(run("verify --config " + cfg.string() + " --out " + (kWork / "v1").string()) == 0);
  const std::string report = slurp(kWork / "v1" / "verify.csv");
  CHECK(report.rfind("check,value,tolerance,pass\n", 0) == 0);
  CHECK(report.find(",0\n") == std::string::npos);

  const fs::path corrupt = write_config("corrupt.ini", std::string(kOneSoliton) + "\n[verify]\ncorrupt = e_scale\n");
  CHECK(run("verify --config " + corrupt.string() + " --out " + (kWork / "v2").string()) == 1);

  CHECK(run("verify --check none --config " + cfg.string() + " --out " + (kWork / "v3").string()) == 0);
  CHECK(slurp(kWork / "v3" / "verify.csv") == "check,value,tolerance,pass\n");

  CHECK(run("verify --check lax --seed 7 --config " + cfg.string() + " --out " + (kWork / "v4").string()) == 0);
  CHECK(run("verify --check lax --seed 7 --config " + cfg.string() + " --out " + (kWork / "v5").string()) == 0);
  CHECK(slurp(kWork / "v4" / "verify.csv") == slurp(kWork / "v5" / "verify.csv"));
  CHECK(run("verify --check nonsense --config " + cfg.string() + " --out " + (kWork / "v6").string()) == 2);
}

TEST_CASE("flow") {
  const fs::path cfg = write_config("flow.ini", "[solitons]\nm = 0.8\n[flow]\nk = 0\nt_end = 1\nstep = 1e-3\n"
                                                "involution = true\n");
  REQUIRE(run("flow --config " + cfg.string() + " --out " + (kWork / "f1").string()) == 0);
  const std::string report = slurp(kWork / "f1" / "conservation.csv");
  std::stringstream ss(report);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1);
    CHECK(std::stod(line.substr(a + 1, b - a - 1)) < 1e-8);
  }
  const auto inv = read_csv(kWork / "f1" / "involution.csv");
  CHECK(inv.size() == 9);
  for (const auto& r : inv) CHECK(r[2] < 1e-9);
  CHECK(read_csv(kWork / "f1" / "trajectory.csv").size() == 1001);

  const fs::path zero = write_config("flow0.ini", "[solitons]\nm = 0.8\n[flow]\nt_end = 0\n");
  REQUIRE(run("flow --config " + zero.string() + " --out " + (kWork / "f0").string()) == 0);
  CHECK(read_csv(kWork / "f0" / "trajectory.csv").size() == 1);

  REQUIRE(run("flow --config " + cfg.string() + " --out " + (kWork / "f2").string()) == 0);
  CHECK(slurp(kWork / "f1" / "trajectory.csv") == slurp(kWork / "f2" / "trajectory.csv"));
}

TEST_CASE("export") {
  const fs::path cfg = write_config("one.ini", kOneSoliton);
  REQUIRE(run("export --config " + cfg.string() + " --out " + (kWork / "x1").string()) == 0);
  CHECK(slurp(kWork / "x1" / "loop.json").find("loop-element/1") != std::string::npos);
  std::string header;
  std::ifstream in(kWork / "x1" / "potentials.csv");
  std::getline(in, header);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows > 0);
  CHECK(header == "potential,power,re,im");
}
