// Command-line front end: structural validation, single runs, scheme
// comparison, and convergence tables as CSV.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "genmm/diagnostics.hpp"
#include "genmm/generic.hpp"
#include "genmm/oscillator.hpp"
#include "genmm/reference.hpp"
#include "genmm/schemes.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonConfig {
  double m = 1, nu = 1, kappa = 1, lambda = 1, c = 1;
  double q0 = 1, p0 = 1, theta0 = 1;
  double T = 15.0;
  double tau = 0.25;
  std::uint64_t seed = 42;
  std::string out;

  void add_params(CLI::App* cmd) {
    cmd->add_option("--m", m, "mass");
    cmd->add_option("--nu", nu, "viscosity");
    cmd->add_option("--kappa", kappa, "elastic modulus");
    cmd->add_option("--lambda", lambda, "thermal-exchange coefficient");
    cmd->add_option("--c", c, "heat capacity");
  }
  void add_initial(CLI::App* cmd) {
    cmd->add_option("--q0", q0, "initial position");
    cmd->add_option("--p0", p0, "initial momentum");
    cmd->add_option("--theta0", theta0, "initial temperature");
    cmd->add_option("--T", T, "time horizon");
  }

  genmm::OscillatorParams params() const {
    return genmm::OscillatorParams(m, nu, kappa, lambda, c);
  }
  genmm::State initial() const { return genmm::State(q0, p0, theta0); }
};

void apply_env_seed(std::uint64_t& seed) {
  if (const char* env = std::getenv("GENERIC_MM_SEED")) seed = std::strtoull(env, nullptr, 10);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain key=value config; explicit command-line flags take precedence.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config: expected key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (!opt) throw ConfigError("config: unknown key: " + key);
    if (opt->count() == 0) {
      opt->add_result(val);
      opt->run_callback();
    }
  }
}

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
  }
  ~OutputFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  std::ofstream& stream() { return out_; }
  void commit() {
    out_.close();
    committed_ = true;
  }

 private:
  std::string path_;
  std::ofstream out_;
  bool committed_ = false;
};

int cmd_validate(const CommonConfig& cfg, std::size_t samples, double tol,
                 double jacobi_tol, double fd_step) {
  const genmm::OscillatorModel model(cfg.params());
  const auto states = genmm::sample_states(samples, cfg.seed);

  std::vector<genmm::ValidationReport> reports;
  reports.push_back(genmm::check_antisymmetry(model, states, tol));
  reports.push_back(genmm::check_onsager_psd(model, states, tol));
  reports.push_back(genmm::check_noninteraction(model, states, tol));
  reports.push_back(genmm::check_jacobi(model, states, jacobi_tol, {.fd_step = fd_step}));

  bool all_pass = true;
  std::printf("%-16s %-12s %-12s %s\n", "check", "residual", "tolerance", "result");
  for (const auto& r : reports) {
    std::printf("%-16s %-12.3e %-12.3e %s\n", r.check.c_str(), r.max_residual,
                r.tolerance, r.pass ? "pass" : "FAIL");
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitOk : kExitNumerical;
}

int cmd_simulate(const CommonConfig& cfg, const std::string& scheme, double grid_dt,
                 double abs_tol, double max_step) {
  const genmm::OscillatorParams pr = cfg.params();
  const genmm::State y0 = cfg.initial();
  OutputFile out(cfg.out);
  out.stream() << "t,q,p,theta,E,S\n";

  auto row = [&](double t, const genmm::State& y) {
    out.stream() << fmt(t) << ',' << fmt(y.q) << ',' << fmt(y.p) << ',' << fmt(y.theta)
                 << ',' << fmt(genmm::osc::energy(pr, y)) << ','
                 << fmt(genmm::osc::entropy(pr, y)) << '\n';
  };

  if (scheme == "reference") {
    const auto ref = genmm::solve_reference(pr, y0, cfg.T, abs_tol, max_step);
    for (double t : ref.sample_grid(grid_dt)) row(t, ref.eval(t));
  } else {
    const auto part = genmm::Partition::with_step(cfg.T, cfg.tau);
    const genmm::Scheme s = scheme == "mm" ? genmm::Scheme::MinimizingMovements
                                           : genmm::Scheme::ImplicitEuler;
    const genmm::RunResult res = genmm::run(s, y0, part, pr);
    if (res.failed_step) {
      std::cerr << "step " << *res.failed_step << " failed: " << res.error << "\n";
      return kExitNumerical;
    }
    const auto& nodes = res.trajectory.partition().nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) row(nodes[i], res.trajectory.states()[i]);
  }
  out.commit();
  return kExitOk;
}

int cmd_compare(const CommonConfig& cfg, double abs_tol, double max_step) {
  const genmm::OscillatorParams pr = cfg.params();
  const genmm::State y0 = cfg.initial();
  const auto part = genmm::Partition::with_step(cfg.T, cfg.tau);

  const genmm::RunResult mm = genmm::run(genmm::Scheme::MinimizingMovements, y0, part, pr);
  if (mm.failed_step) {
    std::cerr << "mm step " << *mm.failed_step << " failed: " << mm.error << "\n";
    return kExitNumerical;
  }
  const genmm::RunResult eu = genmm::run(genmm::Scheme::ImplicitEuler, y0, part, pr);
  if (eu.failed_step) {
    std::cerr << "euler step " << *eu.failed_step << " failed: " << eu.error << "\n";
    return kExitNumerical;
  }
  const auto ref = genmm::solve_reference(pr, y0, part.horizon(), abs_tol, max_step);

  OutputFile out(cfg.out);
  out.stream() << "t,q_mm,p_mm,theta_mm,q_eu,p_eu,theta_eu,q_ref,p_ref,theta_ref,"
                  "E_mm,E_eu,S_mm,S_eu\n";
  const auto& nodes = part.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const genmm::State& a = mm.trajectory.states()[i];
    const genmm::State& b = eu.trajectory.states()[i];
    const genmm::State r = ref.eval(nodes[i]);
    out.stream() << fmt(nodes[i]) << ',' << fmt(a.q) << ',' << fmt(a.p) << ','
                 << fmt(a.theta) << ',' << fmt(b.q) << ',' << fmt(b.p) << ','
                 << fmt(b.theta) << ',' << fmt(r.q) << ',' << fmt(r.p) << ','
                 << fmt(r.theta) << ',' << fmt(genmm::osc::energy(pr, a)) << ','
                 << fmt(genmm::osc::energy(pr, b)) << ','
                 << fmt(genmm::osc::entropy(pr, a)) << ','
                 << fmt(genmm::osc::entropy(pr, b)) << '\n';
  }
  out.commit();
  return kExitOk;
}

int cmd_converge(const CommonConfig& cfg, int n_min, int n_max, int fit_n_min,
                 int fit_n_max, double abs_tol, double max_step, bool serial) {
  const genmm::OscillatorParams pr = cfg.params();
  const genmm::State y0 = cfg.initial();
  const auto ref = genmm::solve_reference(pr, y0, cfg.T, abs_tol, max_step);

  genmm::ConvergenceOptions opts;
  opts.n_min = n_min;
  opts.n_max = n_max;
  opts.fit_n_min = fit_n_min;
  opts.fit_n_max = fit_n_max;
  opts.exec = serial ? genmm::ExecPolicy::Serial : genmm::ExecPolicy::Parallel;
  const genmm::ConvergenceTable table = genmm::convergence_study(pr, y0, cfg.T, ref, opts);

  OutputFile out(cfg.out);
  out.stream() << "tau,err_theta_mm,err_theta_euler,err_E_mm,err_E_euler\n";
  auto cell = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& row : table.rows) {
    out.stream() << fmt(row.tau) << ',' << cell(row.err_theta_mm) << ','
                 << cell(row.err_theta_euler) << ',' << cell(row.err_energy_mm) << ','
                 << cell(row.err_energy_euler) << '\n';
  }
  out.stream() << "# slopes: theta_mm=" << fmt(table.slope_theta_mm)
               << " theta_euler=" << fmt(table.slope_theta_euler)
               << " E_mm=" << fmt(table.slope_energy_mm)
               << " E_euler=" << fmt(table.slope_energy_euler) << '\n';
  out.commit();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving time integration for the damped thermo-mechanical "
               "oscillator: minimizing-movements and implicit Euler schemes with "
               "structural validators and convergence studies"};
  app.require_subcommand(1);

  CommonConfig cfg;
  std::string config_path;

  // validate
  auto* validate = app.add_subcommand("validate", "run structural checks on the model");
  std::size_t samples = 100;
  double tol = 1e-12, jacobi_tol = 1e-6, fd_step = 1e-6;
  validate->add_option("--samples", samples, "number of random sample states");
  validate->add_option("--seed", cfg.seed, "sampling seed");
  validate->add_option("--tol", tol, "tolerance for algebraic checks");
  validate->add_option("--jacobi-tol", jacobi_tol, "tolerance for the Jacobi check");
  validate->add_option("--fd-step", fd_step, "finite-difference step for the Jacobi check");
  cfg.add_params(validate);
  validate->add_option("--config", config_path, "key=value config file");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one scheme and write a CSV");
  std::string scheme = "mm";
  double grid_dt = 1e-3, abs_tol = 1e-8, max_step = 1e-4;
  simulate->add_option("--scheme", scheme, "mm | euler | reference")
      ->check(CLI::IsMember({"mm", "euler", "reference"}));
  simulate->add_option("--tau", cfg.tau, "uniform time step");
  simulate->add_option("--out", cfg.out, "output CSV path")->required();
  simulate->add_option("--grid-dt", grid_dt, "sample spacing for the reference CSV");
  simulate->add_option("--abs-tol", abs_tol, "reference absolute tolerance");
  simulate->add_option("--max-step", max_step, "reference maximal step");
  cfg.add_params(simulate);
  cfg.add_initial(simulate);
  simulate->add_option("--config", config_path, "key=value config file");

  // compare
  auto* compare = app.add_subcommand("compare", "run both schemes plus the reference");
  compare->add_option("--tau", cfg.tau, "uniform time step");
  compare->add_option("--out", cfg.out, "output CSV path")->required();
  compare->add_option("--abs-tol", abs_tol, "reference absolute tolerance");
  compare->add_option("--max-step", max_step, "reference maximal step");
  cfg.add_params(compare);
  cfg.add_initial(compare);
  compare->add_option("--config", config_path, "key=value config file");

  // converge
  auto* converge = app.add_subcommand("converge", "convergence table over tau = 2^-n");
  int n_min = -1, n_max = 11, fit_n_min = 2, fit_n_max = 8;
  bool serial = false;
  converge->add_option("--nmin", n_min, "smallest n");
  converge->add_option("--nmax", n_max, "largest n");
  converge->add_option("--fit-nmin", fit_n_min, "fit window lower n");
  converge->add_option("--fit-nmax", fit_n_max, "fit window upper n");
  converge->add_option("--out", cfg.out, "output CSV path")->required();
  converge->add_option("--abs-tol", abs_tol, "reference absolute tolerance");
  converge->add_option("--max-step", max_step, "reference maximal step");
  converge->add_flag("--serial", serial, "disable parallel cells");
  cfg.add_params(converge);
  cfg.add_initial(converge);
  converge->add_option("--config", config_path, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    for (CLI::App* sub : {validate, simulate, compare, converge})
      if (sub->parsed()) apply_config(sub, config_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  apply_env_seed(cfg.seed);

  try {
    if (*validate) {
      if (samples == 0) {
        std::cerr << "validate: --samples must be positive\n";
        return kExitUsage;
      }
      return cmd_validate(cfg, samples, tol, jacobi_tol, fd_step);
    }
    if (*simulate) return cmd_simulate(cfg, scheme, grid_dt, abs_tol, max_step);
    if (*compare) return cmd_compare(cfg, abs_tol, max_step);
    if (*converge)
      return cmd_converge(cfg, n_min, n_max, fit_n_min, fit_n_max, abs_tol, max_step, serial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
