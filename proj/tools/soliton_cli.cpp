// soliton: build, verify, flow and export front end.

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "soliton/aks.hpp"
#include "soliton/backlund.hpp"
#include "soliton/error.hpp"
#include "soliton/log.hpp"
#include "soliton/verification.hpp"

namespace fs = std::filesystem;
using namespace soliton;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitOther = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_number(s));
  return out;
}

struct GridSpec {
  double zeta_min = -5.0, zeta_max = 5.0, tau_min = -5.0, tau_max = 5.0;
  int zeta_points = 21, tau_points = 21;
  std::vector<double> omega{-1.0, 0.0, 0.5, 1.0, 2.0};

  std::vector<double> axis(double a, double b, int n) const {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
  }
  std::vector<double> zeta() const { return axis(zeta_min, zeta_max, zeta_points); }
  std::vector<double> tau() const { return axis(tau_min, tau_max, tau_points); }
};

struct RunConfig {
  MediumParams medium;
  std::vector<SpectralPoint> points;
  GridSpec grid;
  FlowConfig flow;
  int j_max = 2;
  double flow_scale = 0.5;
  double flow_tolerance = 1e-8;
  bool involution = false;
  int involution_k_max = 2;
  int involution_samples = 100;
  std::vector<std::string> checks{"lax", "pde", "reality", "pole"};
  int lax_samples = 25;
  double h_fd = 1e-4;
  std::string corrupt = "none";
  double export_zeta = 0.0, export_tau = 0.0;
  unsigned long long seed = 0;
};

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(path, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  auto num = [&](const std::string& key, double def) {
    const auto v = pt.get_optional<std::string>(key);
    return v ? parse_number(*v) : def;
  };
  auto integer = [&](const std::string& key, int def) {
    const double v = num(key, def);
    if (v != std::floor(v)) throw ConfigError(key + " must be an integer");
    return static_cast<int>(v);
  };
  auto flag = [&](const std::string& key, bool def) {
    const auto v = pt.get_optional<std::string>(key);
    if (!v) return def;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(key + " must be true or false");
  };

  auto& md = cfg.medium;
  md.beta = num("medium.beta", md.beta);
  md.gamma = num("medium.gamma", md.gamma);
  md.omega0 = num("medium.omega0", md.omega0);
  md.sigma = num("medium.sigma", md.sigma);
  md.r_init = num("medium.r_init", md.r_init);

  const auto m = parse_numbers(pt.get<std::string>("solitons.m", ""));
  auto c1 = parse_numbers(pt.get<std::string>("solitons.c1", ""));
  auto c2 = parse_numbers(pt.get<std::string>("solitons.c2", ""));
  if (c1.empty()) c1.assign(m.size(), 1.0);
  if (c2.empty()) c2.assign(m.size(), 1.0);
  if (c1.size() != m.size() || c2.size() != m.size())
    throw ConfigError("solitons.c1 and solitons.c2 must match solitons.m in length");
  const bool parity = flag("solitons.parity", true);
  for (std::size_t k = 0; k < m.size(); ++k) cfg.points.push_back({m[k], c1[k], c2[k], parity});

  auto& g = cfg.grid;
  g.zeta_min = num("grid.zeta_min", g.zeta_min);
  g.zeta_max = num("grid.zeta_max", g.zeta_max);
  g.zeta_points = integer("grid.zeta_points", g.zeta_points);
  g.tau_min = num("grid.tau_min", g.tau_min);
  g.tau_max = num("grid.tau_max", g.tau_max);
  g.tau_points = integer("grid.tau_points", g.tau_points);
  if (const auto w = pt.get_optional<std::string>("grid.omega")) g.omega = parse_numbers(*w);
  if (g.zeta_points < 1 || g.tau_points < 1) throw ConfigError("grid point counts must be positive");

  cfg.flow.k = integer("flow.k", cfg.flow.k);
  cfg.flow.t_end = num("flow.t_end", cfg.flow.t_end);
  cfg.flow.step = num("flow.step", cfg.flow.step);
  cfg.j_max = integer("flow.j_max", cfg.j_max);
  cfg.flow_scale = num("flow.scale", cfg.flow_scale);
  cfg.flow_tolerance = num("flow.tolerance", cfg.flow_tolerance);
  cfg.involution = flag("flow.involution", cfg.involution);
  cfg.involution_k_max = integer("flow.involution_k_max", cfg.involution_k_max);
  cfg.involution_samples = integer("flow.involution_samples", cfg.involution_samples);

  if (const auto c = pt.get_optional<std::string>("verify.checks")) cfg.checks = split_list(*c);
  cfg.lax_samples = integer("verify.lax_samples", cfg.lax_samples);
  cfg.h_fd = num("verify.h_fd", cfg.h_fd);
  cfg.corrupt = pt.get<std::string>("verify.corrupt", cfg.corrupt);
  if (cfg.corrupt != "none" && cfg.corrupt != "e_scale") throw ConfigError("verify.corrupt must be none or e_scale");

  cfg.export_zeta = num("export.zeta", cfg.export_zeta);
  cfg.export_tau = num("export.tau", cfg.export_tau);
  cfg.seed = static_cast<unsigned long long>(integer("run.seed", 0));
  return cfg;
}

// Runs task(i) for i in [0, count) on at most `jobs` threads.
template <class Task>
void parallel_for(std::size_t count, int jobs, Task task) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  log_message(LogLevel::Info, "wrote " + path.string());
}

// ---------------------------------------------------------------- commands

int cmd_build(const RunConfig& cfg, const fs::path& out, int jobs) {
  const BTState state = build_solitons(cfg.medium, cfg.points);
  const auto zeta = cfg.grid.zeta(), tau = cfg.grid.tau();
  std::vector<std::string> rows(zeta.size());
  parallel_for(zeta.size(), jobs, [&](std::size_t i) {
    std::ostringstream os;
    write_fields_csv(os, state, std::span<const double>(&zeta[i], 1), tau, cfg.grid.omega);
    const std::string s = os.str();
    rows[i] = s.substr(s.find('\n') + 1);
  });
  std::string csv = "zeta,tau,omega,e,R,S,U\n";
  for (const auto& r : rows) csv += r;
  write_file(out / "fields.csv", csv);
  write_file(out / "state.json", serialize(state) + "\n");
  return 0;
}

struct CheckResult {
  std::string name;
  double value, tolerance;
  bool pass() const { return value < tolerance; }
};

int cmd_verify(const RunConfig& cfg, const fs::path& out, int jobs) {
  const BTState state = build_solitons(cfg.medium, cfg.points);
  const auto zeta = cfg.grid.zeta(), tau = cfg.grid.tau();
  std::vector<CheckResult> results;

  auto over_grid = [&](auto per_point) {
    std::vector<double> worst(zeta.size(), 0.0);
    parallel_for(zeta.size(), jobs, [&](std::size_t i) {
      for (double t : tau) worst[i] = std::max(worst[i], per_point(zeta[i], t));
    });
    return *std::max_element(worst.begin(), worst.end());
  };

  for (const auto& name : cfg.checks) {
    log_message(LogLevel::Info, "check " + name);
    if (name == "lax") {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double worst = 0.0;
      for (int s = 0; s < cfg.lax_samples; ++s) {
        const cplx lam(2.0 * u(rng) - 1.0, 0.3 + u(rng));
        const double z = cfg.grid.zeta_min + (cfg.grid.zeta_max - cfg.grid.zeta_min) * u(rng);
        const double t = cfg.grid.tau_min + (cfg.grid.tau_max - cfg.grid.tau_min) * u(rng);
        worst = std::max(worst, lax_residual(state, lam, z, t, cfg.h_fd));
      }
      results.push_back({name, worst, 1e-6});
    } else if (name == "pde") {
      FieldSource src = soliton_fields(state);
      if (cfg.corrupt == "e_scale") {
        src = [inner = src](double z, double t) {
          FieldSlice s = inner(z, t);
          s.e *= 1.01;
          return s;
        };
      }
      const double worst = over_grid(
          [&](double z, double t) { return pde_residual(src, cfg.medium, cfg.grid.omega, z, t).max(); });
      results.push_back({name, worst, 1e-5});
    } else if (name == "reality") {
      const double worst = over_grid([&](double z, double t) {
        return reality_sweep(state, std::span<const double>(&z, 1), std::span<const double>(&t, 1), cfg.grid.omega);
      });
      results.push_back({name, worst, 1e-10});
    } else if (name == "pole") {
      // 0 when every point passes, otherwise the worst normalized violation
      const double worst = over_grid([&](double z, double t) {
        const PoleReport r = pole_structure_check(state, z, t);
        if (r.pass) return 0.0;
        return std::max({r.fit_residual / 1e-9, r.max_even / 1e-10,
                         static_cast<double>(r.max_degree > r.degree_bound), r.denominator_ok ? 0.0 : 1.0, 1.0});
      });
      results.push_back({name, worst, 0.5});
    } else {
      throw ConfigError("unknown check '" + name + "'");
    }
  }

  std::string csv = "check,value,tolerance,pass\n";
  bool ok = true;
  for (const auto& r : results) {
    csv += r.name + "," + fmt(r.value) + "," + fmt(r.tolerance) + "," + (r.pass() ? "1" : "0") + "\n";
    ok = ok && r.pass();
    log_message(r.pass() ? LogLevel::Info : LogLevel::Error,
                r.name + (r.pass() ? " passed: " : " FAILED: ") + fmt(r.value));
  }
  write_file(out / "verify.csv", csv);
  return ok ? 0 : kExitCheckFailed;
}

int cmd_flow(const RunConfig& cfg, const fs::path& out) {
  std::vector<double> m;
  for (const auto& p : cfg.points) m.push_back(p.m);
  const PoleSet poles(m, cfg.medium.omega0, cfg.medium.sigma);
  const ExtendedState s0 = random_extended_state(poles.soliton_count(), cfg.j_max, cfg.seed, cfg.flow_scale);
  const Trajectory tr = integrate_flow(s0, poles, cfg.flow);

  std::ostringstream traj;
  write_trajectory_csv(traj, tr, poles);
  write_file(out / "trajectory.csv", traj.str());

  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    d0 = std::max(d0, std::abs(tr.phi0[i] - tr.phi0[0]));
    d1 = std::max(d1, std::abs(tr.phi1[i] - tr.phi1[0]));
  }
  std::string csv = "quantity,max_drift,tolerance,pass\n";
  csv += "phi0," + fmt(d0) + "," + fmt(cfg.flow_tolerance) + "," + (d0 < cfg.flow_tolerance ? "1" : "0") + "\n";
  csv += "phi1," + fmt(d1) + "," + fmt(cfg.flow_tolerance) + "," + (d1 < cfg.flow_tolerance ? "1" : "0") + "\n";
  write_file(out / "conservation.csv", csv);
  bool ok = d0 < cfg.flow_tolerance && d1 < cfg.flow_tolerance;

  if (cfg.involution) {
    const auto entries = involution_sweep(poles, cfg.involution_k_max, cfg.involution_samples, cfg.seed);
    std::ostringstream inv;
    write_involution_csv(inv, entries);
    write_file(out / "involution.csv", inv.str());
    for (const auto& e : entries) ok = ok && e.max_abs < 1e-9;
  }
  return ok ? 0 : kExitCheckFailed;
}

int cmd_export(const RunConfig& cfg, const fs::path& out) {
  const BTState state = build_solitons(cfg.medium, cfg.points);
  const Snapshot snap = snapshot(state, cfg.export_zeta, cfg.export_tau);
  write_file(out / "loop.json", serialize(snap.loop()) + "\n");

  const Potentials pot = potentials(state, cfg.export_zeta, cfg.export_tau);
  std::string csv = "potential,power,re,im\n";
  const std::pair<const char*, const OmegaPotential*> named[] = {{"h1", &pot.h1}, {"f1", &pot.f1}, {"e1", &pot.e1}};
  for (const auto& [name, p] : named)
    for (std::size_t k = 0; k < p->numerator.size(); ++k)
      csv += std::string(name) + "," + std::to_string(k) + "," + fmt(p->numerator[k].real()) + "," +
             fmt(p->numerator[k].imag()) + "\n";
  write_file(out / "potentials.csv", csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell-Bloch soliton toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path, out_dir = ".";
  long long seed = -1;
  int jobs = 1;
  std::vector<std::string> checks;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized checks (overrides run.seed)")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", jobs, "worker threads for grid sweeps")->check(CLI::PositiveNumber);
  app.add_option("--check", checks, "check to run (repeatable; overrides verify.checks)");
  auto* build = app.add_subcommand("build", "build n-soliton fields and the serialized state");
  auto* verify = app.add_subcommand("verify", "run verification checks");
  auto* flow = app.add_subcommand("flow", "integrate an AKS flow");
  auto* exp = app.add_subcommand("export", "export the loop element and omega numerators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
    if (!checks.empty()) {
      cfg.checks.clear();
      for (const auto& c : checks)
        if (c != "none") cfg.checks.push_back(c);
    }
    const fs::path out(out_dir);
    fs::create_directories(out);
    if (build->parsed()) return cmd_build(cfg, out, jobs);
    if (verify->parsed()) return cmd_verify(cfg, out, jobs);
    if (flow->parsed()) return cmd_flow(cfg, out);
    if (exp->parsed()) return cmd_export(cfg, out);
  } catch (const Error& e) {
    log_message(LogLevel::Error, e.what());
    return exit_code(e.kind());
  } catch (const ConfigError& e) {
    log_message(LogLevel::Error, std::string("config: ") + e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    log_message(LogLevel::Error, e.what());
    return kExitOther;
  }
  return kExitUsage;
}
