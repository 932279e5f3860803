// qmi: mutual information of phase-estimation strategies.
//
//   qmi mi qpea --t 7
//   qmi sweep --strategy sep-hamming --n-list 10,100,1000 --out hamming.csv
//   qmi sweep --spec sweep.json
//   qmi verify --level full
//   qmi bounds --n-list 1,10,100
//
// Exit status: 0 success, 1 verification or numerical failure, 2 invalid configuration.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmi/bounds.hpp"
#include "qmi/errors.hpp"
#include "qmi/sweep.hpp"
#include "qmi/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

// Flags shared by `mi` and `sweep`. Only options the user actually set are
// applied on top of a spec file.
struct PointFlags {
  std::string method;
  std::string density;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  int max_depth = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t batch = 0;
  CLI::Option* method_opt = nullptr;
  CLI::Option* density_opt = nullptr;
  CLI::Option* rel_tol_opt = nullptr;
  CLI::Option* abs_tol_opt = nullptr;
  CLI::Option* max_depth_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* batch_opt = nullptr;

  void attach(CLI::App* app) {
    method_opt = app->add_option("--method", method, "quad | mc | closed-form | auto");
    density_opt = app->add_option("--density", density, "exact | gaussian (sep-optimal only)");
    rel_tol_opt = app->add_option("--rel-tol", rel_tol, "Quadrature relative tolerance");
    abs_tol_opt = app->add_option("--abs-tol", abs_tol, "Quadrature absolute tolerance");
    max_depth_opt = app->add_option("--max-depth", max_depth, "Quadrature bisection depth limit");
    samples_opt = app->add_option("--samples", samples, "Monte Carlo sample count");
    seed_opt = app->add_option("--seed", seed, "Monte Carlo master seed")->envname("QMI_SEED");
    batch_opt = app->add_option("--batch", batch, "Monte Carlo batch size");
  }

  void apply(qmi::PointOptions& options) const {
    if (*method_opt) {
      auto m = qmi::parse_method_choice(method);
      if (!m) throw qmi::ConfigError("unknown method: " + method);
      options.method = *m;
    }
    if (*density_opt) {
      if (density == "exact") {
        options.density = qmi::DensityMode::Exact;
      } else if (density == "gaussian") {
        options.density = qmi::DensityMode::Gaussian;
      } else {
        throw qmi::ConfigError("density must be exact or gaussian");
      }
    }
    if (*rel_tol_opt) options.quadrature.rel_tol = rel_tol;
    if (*abs_tol_opt) options.quadrature.abs_tol = abs_tol;
    if (*max_depth_opt) options.quadrature.max_depth = max_depth;
    if (*samples_opt) options.mc.samples = samples;
    if (*seed_opt) options.mc.seed = seed;
    if (*batch_opt) options.mc.batch = batch;
  }
};

qmi::StrategyKind strategy_or_throw(const std::string& name) {
  auto kind = qmi::parse_strategy(name);
  if (!kind) throw qmi::ConfigError("unknown strategy: " + name);
  return *kind;
}

int run_bounds(const std::vector<std::uint64_t>& n_list) {
  std::cout << "N,heisenberg_bits,holevo_separable_bits,sql_bits\n";
  for (std::uint64_t n : n_list) {
    std::cout << n << ',' << qmi::format_double(qmi::heisenberg_bound(n)) << ',';
    if (n <= 100'000) std::cout << qmi::format_double(qmi::holevo_separable_entropy(n));
    std::cout << ',' << qmi::format_double(qmi::sql_bound(n)) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutual information of quantum phase-estimation strategies"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with default option values");

  // mi
  auto* mi = app.add_subcommand("mi", "Evaluate one strategy at one point and print a CSV row");
  std::string mi_strategy;
  std::uint64_t mi_n = 0;
  int mi_t = 0;
  int mi_d = 0;
  bool mi_force = false;
  PointFlags mi_flags;
  mi->add_option("strategy", mi_strategy, "Strategy name")->required();
  auto* mi_n_opt = mi->add_option("--n", mi_n, "Number of unitary applications");
  auto* mi_t_opt = mi->add_option("--t", mi_t, "Digits or groups");
  auto* mi_d_opt = mi->add_option("--d", mi_d, "Probe dimension");
  mi->add_flag("--force", mi_force, "Ignore the runtime budget");
  mi_flags.attach(mi);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a strategy over a grid and write CSV");
  std::string spec_path;
  std::string sw_strategy;
  std::vector<std::uint64_t> n_list;
  std::vector<int> t_list;
  std::vector<int> d_list;
  std::string out_path;
  unsigned workers = 1;
  double budget_s = 600.0;
  bool force = false;
  bool timing = false;
  bool no_asymptote = false;
  PointFlags sw_flags;
  auto* spec_opt = sweep->add_option("--spec", spec_path, "JSON sweep description");
  auto* strategy_opt = sweep->add_option("--strategy", sw_strategy, "Strategy name");
  auto* n_list_opt = sweep->add_option("--n-list", n_list, "N values")->delimiter(',');
  auto* t_list_opt = sweep->add_option("--t-list", t_list, "t values")->delimiter(',');
  auto* d_list_opt = sweep->add_option("--d-list", d_list, "d values")->delimiter(',');
  auto* out_opt = sweep->add_option("--out", out_path, "Output CSV path (default stdout)");
  auto* workers_opt = sweep->add_option("--workers", workers, "Worker threads")->envname("QMI_WORKERS");
  auto* budget_opt = sweep->add_option("--budget-s", budget_s, "Projected runtime budget in seconds");
  auto* force_opt = sweep->add_flag("--force", force, "Run even if the budget is exceeded");
  auto* timing_opt = sweep->add_flag("--timing", timing, "Fill the runtime_ms column");
  auto* no_asym_opt = sweep->add_flag("--no-asymptote", no_asymptote, "Leave asymptote_bits empty");
  sw_flags.attach(sweep);
  spec_opt->excludes(strategy_opt);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the self-verification suite");
  std::string level = "fast";
  std::vector<std::string> only;
  verify->add_option("--level", level, "fast | full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--only", only, "Run only these check IDs")->delimiter(',');
  bool list_checks = false;
  verify->add_flag("--list", list_checks, "List check IDs and exit");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Print reference bounds");
  std::vector<std::uint64_t> bounds_n;
  bounds->add_option("--n-list", bounds_n, "N values")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*mi) {
      qmi::SweepSpec spec;
      spec.strategy = strategy_or_throw(mi_strategy);
      if (*mi_n_opt) spec.n_values = {mi_n};
      if (*mi_t_opt) spec.t_values = {mi_t};
      if (*mi_d_opt) spec.d_values = {mi_d};
      spec.force = mi_force;
      mi_flags.apply(spec.options);
      qmi::run_sweep(spec, std::cout);
      return kExitOk;
    }

    if (*sweep) {
      qmi::SweepSpec spec;
      if (*spec_opt) {
        spec = qmi::load_sweep_spec(spec_path);
      } else if (*strategy_opt) {
        spec.strategy = strategy_or_throw(sw_strategy);
      } else {
        throw qmi::ConfigError("sweep needs --spec or --strategy");
      }
      if (*n_list_opt) spec.n_values = n_list;
      if (*t_list_opt) spec.t_values = t_list;
      if (*d_list_opt) spec.d_values = d_list;
      if (*out_opt) spec.output_path = out_path;
      if (*workers_opt) spec.workers = workers;
      if (*budget_opt) spec.budget_seconds = budget_s;
      if (*force_opt) spec.force = force;
      if (*timing_opt) spec.record_runtime = timing;
      if (*no_asym_opt) spec.emit_asymptote_columns = false;
      sw_flags.apply(spec.options);
      qmi::run_sweep(spec);
      return kExitOk;
    }

    if (*verify) {
      const auto lvl = level == "full" ? qmi::VerifyLevel::Full : qmi::VerifyLevel::Fast;
      if (list_checks) {
        for (const auto& id : qmi::verify_check_ids(lvl)) std::cout << id << '\n';
        return kExitOk;
      }
      for (const auto& id : only) {
        const auto ids = qmi::verify_check_ids(qmi::VerifyLevel::Full);
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
          throw qmi::ConfigError("unknown check ID: " + id);
        }
      }
      const qmi::VerifyReport report = qmi::run_verify(lvl, &std::cout, only);
      std::size_t failed = 0;
      for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
      std::cout << (report.ok() ? "verify: all " : "verify: ") << report.checks.size() - failed << '/'
                << report.checks.size() << " checks passed\n";
      return report.ok() ? kExitOk : kExitFailure;
    }

    if (*bounds) return run_bounds(bounds_n);
  } catch (const qmi::ConfigError& e) {
    std::cerr << "qmi: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qmi::DomainError& e) {
    std::cerr << "qmi: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qmi: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
