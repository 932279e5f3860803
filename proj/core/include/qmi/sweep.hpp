#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmi/distributions.hpp"
#include "qmi/mi_engine.hpp"
#include "qmi/numerics.hpp"

namespace qmi {

enum class MethodChoice { Quad, Mc, ClosedForm, Auto };

std::string_view method_choice_name(MethodChoice method);
std::optional<MethodChoice> parse_method_choice(std::string_view name);

/// How a single grid point is evaluated.
struct PointOptions {
  MethodChoice method = MethodChoice::Auto;
  QuadratureSpec quadrature;
  McSpec mc;
  DensityMode density = DensityMode::Exact;
  /// Auto switches from quadrature to Monte Carlo only when the quadrature
  /// estimate exceeds this many seconds and Monte Carlo is cheaper.
  double auto_mc_threshold_seconds = 60.0;
};

/// A strategy evaluated over a grid.
///
/// Which lists are used depends on the strategy:
///   qpea            n_values, or t_values (N = 2^t - 1)
///   qpea-ddim       d_values x t_values, d outer
///   pegg-barnett    d_values
///   sep-optimal     n_values
///   sep-hamming     n_values
///   sep-detection   t_values
///   two-level       d_values
/// Every list that is used must be nonempty and strictly increasing.
struct SweepSpec {
  StrategyKind strategy = StrategyKind::QpeaQubit;
  std::string label;
  std::vector<std::uint64_t> n_values;
  std::vector<int> t_values;
  std::vector<int> d_values;
  PointOptions options;
  /// Empty or "-" writes to stdout.
  std::string output_path;
  bool emit_asymptote_columns = true;
  unsigned workers = 1;
  double budget_seconds = 600.0;
  bool force = false;
  /// runtime_ms is left empty unless set, so that output is reproducible.
  bool record_runtime = false;

  void validate() const;
  std::vector<ProbeSpec> grid() const;
};

struct ResultRow {
  std::string strategy;
  std::uint64_t n = 0;
  int d = 2;
  int t = 1;
  double mi_bits = 0.0;
  double err_bits = 0.0;
  std::optional<double> asymptote_bits;
  double heisenberg_bits = 0.0;
  double sql_bits = 0.0;
  MiMethod method = MiMethod::QuadReduced;
  std::optional<std::uint64_t> seed;
  std::optional<double> runtime_ms;
};

/// Reference line for the strategy's large-N behaviour.
double asymptote_bits(const ProbeSpec& spec);

/// Method actually used for a point (resolves Auto, rejects unsupported choices).
MethodChoice resolve_method(const ProbeSpec& spec, const PointOptions& options);

/// Rough wall-clock estimate on one core.
double estimate_cost_seconds(const ProbeSpec& spec, MethodChoice resolved, const PointOptions& options);

MiEstimate compute_point(const ProbeSpec& spec, const PointOptions& options);

ResultRow make_row(const MiEstimate& estimate, bool emit_asymptote);

inline constexpr std::string_view kCsvHeader =
    "strategy,N,d,t,mi_bits,err_bits,asymptote_bits,heisenberg_bits,sql_bits,method,seed,runtime_ms";

void write_csv(std::ostream& out, std::span<const ResultRow> rows);
std::string format_double(double value);

/// Evaluates every grid point on a bounded worker pool and emits rows in grid
/// order. Per-point Monte Carlo seeds derive from (mc.seed, point index). The
/// output stream is opened before any computation starts.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

/// Same, writing the CSV to `out` instead of spec.output_path.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, std::ostream& out);

/// Reads a JSON sweep description. Keys mirror SweepSpec:
/// {"strategy": "qpea", "n_values": [...], "t_values": [...], "d_values": [...],
///  "method": "auto", "density": "exact",
///  "quadrature": {"rel_tol":..,"abs_tol":..,"max_depth":..},
///  "mc": {"samples":..,"seed":..,"batch":..},
///  "output": "path.csv", "emit_asymptote_columns": true, "workers": 1,
///  "budget_seconds": 600, "force": false, "record_runtime": false}
SweepSpec load_sweep_spec(const std::filesystem::path& path);
SweepSpec parse_sweep_spec(std::string_view json_text);

}  // namespace qmi
