#include "qmi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "qmi/bounds.hpp"
#include "qmi/errors.hpp"
#include "qmi/rng.hpp"

namespace qmi {

namespace {

// Seconds per elementary integrand evaluation, measured loosely on one core.
constexpr double kSecondsPerTranscendental = 4e-8;
constexpr double kSecondsPerMultiplyAdd = 3e-9;

template <typename T>
void require_increasing(const std::vector<T>& values, std::string_view name) {
  if (values.empty()) throw ConfigError(std::string(name) + " must not be empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i])) {
      throw ConfigError(std::string(name) + " must be strictly increasing");
    }
  }
}

bool supports_mc(StrategyKind kind) {
  return kind == StrategyKind::SepOptimalPovm || kind == StrategyKind::TwoLevelSubspace;
}

bool supports_closed_form(StrategyKind kind) {
  return kind == StrategyKind::SepHamming || kind == StrategyKind::SepDetectionQpea;
}

double amplitude_terms(std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return std::min(nd / 2.0 + 1.0, 7.0 * std::sqrt(nd) + 1.0);
}

MiEstimate sep_detection_by_quadrature(const ProbeSpec& spec, const QuadratureSpec& q) {
  double bits = 0.0;
  double err = 0.0;
  for (int j = 0; j < spec.t; ++j) {
    const MiEstimate group = sep_detection_group_mi(j, q);
    bits += group.bits;
    err += group.err;
  }
  return MiEstimate{bits, err, MiMethod::QuadNaive, spec, std::nullopt};
}

}  // namespace

std::string_view method_choice_name(MethodChoice method) {
  switch (method) {
    case MethodChoice::Quad: return "quad";
    case MethodChoice::Mc: return "mc";
    case MethodChoice::ClosedForm: return "closed-form";
    case MethodChoice::Auto: return "auto";
  }
  return "unknown";
}

std::optional<MethodChoice> parse_method_choice(std::string_view name) {
  for (auto m : {MethodChoice::Quad, MethodChoice::Mc, MethodChoice::ClosedForm, MethodChoice::Auto}) {
    if (method_choice_name(m) == name) return m;
  }
  return std::nullopt;
}

// --- spec -------------------------------------------------------------------

void SweepSpec::validate() const {
  options.quadrature.validate();
  options.mc.validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(budget_seconds > 0.0)) throw ConfigError("budget_seconds must be > 0");
  switch (strategy) {
    case StrategyKind::QpeaQubit:
      if (n_values.empty() == t_values.empty()) {
        throw ConfigError("qpea sweep needs exactly one of n_values or t_values");
      }
      if (!n_values.empty()) require_increasing(n_values, "n_values");
      if (!t_values.empty()) require_increasing(t_values, "t_values");
      break;
    case StrategyKind::QpeaDDim:
      require_increasing(d_values, "d_values");
      require_increasing(t_values, "t_values");
      break;
    case StrategyKind::PeggBarnett:
    case StrategyKind::TwoLevelSubspace:
      require_increasing(d_values, "d_values");
      break;
    case StrategyKind::SepOptimalPovm:
    case StrategyKind::SepHamming:
      require_increasing(n_values, "n_values");
      break;
    case StrategyKind::SepDetectionQpea:
      require_increasing(t_values, "t_values");
      break;
  }
  if (options.method == MethodChoice::ClosedForm && !supports_closed_form(strategy)) {
    throw ConfigError("method closed-form is only available for sep-hamming and sep-detection");
  }
  if (options.method == MethodChoice::Mc && !supports_mc(strategy)) {
    throw ConfigError("method mc is only available for sep-optimal and two-level");
  }
  for (const ProbeSpec& p : grid()) p.validate();
}

std::vector<ProbeSpec> SweepSpec::grid() const {
  std::vector<ProbeSpec> points;
  auto push = [&](ProbeSpec p) {
    if (!label.empty()) p.label = label;
    points.push_back(std::move(p));
  };
  try {
    switch (strategy) {
      case StrategyKind::QpeaQubit:
        for (auto n : n_values) push(ProbeSpec::qpea(n));
        for (int t : t_values) push(ProbeSpec::qpea_digits(t));
        break;
      case StrategyKind::QpeaDDim:
        for (int d : d_values) {
          for (int t : t_values) push(ProbeSpec::qpea_ddim(d, t));
        }
        break;
      case StrategyKind::PeggBarnett:
        for (int d : d_values) push(ProbeSpec::pegg_barnett(d));
        break;
      case StrategyKind::SepOptimalPovm:
        for (auto n : n_values) push(ProbeSpec::sep_optimal(n));
        break;
      case StrategyKind::SepHamming:
        for (auto n : n_values) push(ProbeSpec::sep_hamming(n));
        break;
      case StrategyKind::SepDetectionQpea:
        for (int t : t_values) push(ProbeSpec::sep_detection(t));
        break;
      case StrategyKind::TwoLevelSubspace:
        for (int d : d_values) push(ProbeSpec::two_level(d));
        break;
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid grid point: ") + e.what());
  }
  return points;
}

// --- single point -------------------------------------------------------------

double asymptote_bits(const ProbeSpec& spec) {
  const auto& c = analytic_constants();
  const double nd = static_cast<double>(spec.n);
  switch (spec.kind) {
    case StrategyKind::QpeaQubit: return std::log2(nd + 1.0) + c.c_qpea;
    case StrategyKind::QpeaDDim:
    case StrategyKind::PeggBarnett:
      return spec.t * std::log2(static_cast<double>(spec.d)) + c.c_qpea;
    case StrategyKind::SepOptimalPovm: return 0.5 * std::log2(nd) + c.c_sql_ent;
    case StrategyKind::SepHamming: return 0.5 * std::log2(nd) + c.c_sep_sep;
    case StrategyKind::SepDetectionQpea: return spec.t * c.c_probe;
    case StrategyKind::TwoLevelSubspace: return c.c_probe;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double estimate_cost_seconds(const ProbeSpec& spec, MethodChoice resolved, const PointOptions& options) {
  const double nd = static_cast<double>(spec.n);
  const double samples = static_cast<double>(options.mc.samples);
  switch (spec.kind) {
    case StrategyKind::QpeaQubit:
    case StrategyKind::QpeaDDim:
    case StrategyKind::PeggBarnett:
      // ~ (N+1)/2 panels, 21 points, some refinement.
      return 0.5 * (nd + 1.0) * 21.0 * 1.5 * kSecondsPerTranscendental;
    case StrategyKind::SepOptimalPovm: {
      const double per_eval = amplitude_terms(spec.n) * kSecondsPerMultiplyAdd + kSecondsPerTranscendental;
      if (resolved == MethodChoice::Mc) return samples * per_eval;
      return 40.0 * 21.0 * 4.0 * per_eval;
    }
    case StrategyKind::SepHamming:
      if (resolved == MethodChoice::ClosedForm) return (nd + 1.0) * 4.0 * kSecondsPerTranscendental;
      // One conditional integral with N+1 terms per point plus N+1 marginals,
      // each over ~2N panels refined about once.
      return 2.0 * (2.0 * nd + 2.0) * 21.0 * 2.0 * (nd + 1.0) * kSecondsPerTranscendental;
    case StrategyKind::SepDetectionQpea: {
      const int groups = resolved == MethodChoice::ClosedForm
                             ? std::min(spec.t, kSepDetectionCheckedGroups)
                             : spec.t;
      return std::ldexp(1.0, groups + 1) * 21.0 * 3.0 * 2.0 * kSecondsPerTranscendental;
    }
    case StrategyKind::TwoLevelSubspace:
      if (resolved == MethodChoice::Mc) return samples * kSecondsPerTranscendental;
      return 2.0 * static_cast<double>(spec.d) * 21.0 * 2.0 * kSecondsPerTranscendental;
  }
  return 0.0;
}

MethodChoice resolve_method(const ProbeSpec& spec, const PointOptions& options) {
  switch (options.method) {
    case MethodChoice::ClosedForm:
      if (!supports_closed_form(spec.kind)) {
        throw ConfigError("method closed-form is only available for sep-hamming and sep-detection");
      }
      return MethodChoice::ClosedForm;
    case MethodChoice::Mc:
      if (!supports_mc(spec.kind)) throw ConfigError("method mc is only available for sep-optimal and two-level");
      return MethodChoice::Mc;
    case MethodChoice::Quad:
      if (spec.kind == StrategyKind::SepHamming && spec.n + 1 > (std::uint64_t{1} << 16)) {
        throw ConfigError("quadrature for sep-hamming is limited to N < 65536");
      }
      return MethodChoice::Quad;
    case MethodChoice::Auto:
      break;
  }
  if (supports_closed_form(spec.kind)) return MethodChoice::ClosedForm;
  if (supports_mc(spec.kind)) {
    const double quad = estimate_cost_seconds(spec, MethodChoice::Quad, options);
    const double mc = estimate_cost_seconds(spec, MethodChoice::Mc, options);
    if (quad > options.auto_mc_threshold_seconds && mc < quad) return MethodChoice::Mc;
  }
  return MethodChoice::Quad;
}

MiEstimate compute_point(const ProbeSpec& spec, const PointOptions& options) {
  spec.validate();
  const MethodChoice method = resolve_method(spec, options);
  const QuadratureSpec& q = options.quadrature;
  MiEstimate est;
  switch (spec.kind) {
    case StrategyKind::QpeaQubit:
      est = mi_qpea_reduced(spec.n, q);
      break;
    case StrategyKind::QpeaDDim:
    case StrategyKind::PeggBarnett:
      est = mi_qpea_ddim(spec.d, spec.t, q);
      break;
    case StrategyKind::SepOptimalPovm: {
      const CovariantDensity density = sep_optimal_covariant(spec.n, options.density);
      est = method == MethodChoice::Mc ? mi_covariant_mc(density, options.mc) : mi_covariant(density, q);
      break;
    }
    case StrategyKind::SepHamming:
      est = method == MethodChoice::ClosedForm ? mi_hamming_closed(spec.n)
                                               : mi_discrete_naive(HammingChannel(spec.n).as_discrete(), q);
      break;
    case StrategyKind::SepDetectionQpea:
      est = method == MethodChoice::ClosedForm ? mi_sep_detection_qpea(spec.t, q)
                                               : sep_detection_by_quadrature(spec, q);
      break;
    case StrategyKind::TwoLevelSubspace: {
      const CovariantDensity density = two_level_covariant(spec.d);
      est = method == MethodChoice::Mc ? mi_covariant_mc(density, options.mc) : mi_covariant(density, q);
      break;
    }
  }
  est.spec = spec;
  return est;
}

ResultRow make_row(const MiEstimate& estimate, bool emit_asymptote) {
  const ProbeSpec& spec = estimate.spec;
  ResultRow row;
  row.strategy = spec.display_label();
  row.n = spec.n;
  row.d = spec.d;
  row.t = spec.t;
  row.mi_bits = estimate.bits;
  row.err_bits = estimate.err;
  if (emit_asymptote) row.asymptote_bits = asymptote_bits(spec);
  row.heisenberg_bits = heisenberg_bound(spec.n);
  row.sql_bits = sql_bound(spec.n);
  row.method = estimate.method;
  row.seed = estimate.seed;
  return row;
}

// --- CSV ------------------------------------------------------------------------

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.strategy << ',' << r.n << ',' << r.d << ',' << r.t << ',' << format_double(r.mi_bits) << ','
        << format_double(r.err_bits) << ',' << (r.asymptote_bits ? format_double(*r.asymptote_bits) : "")
        << ',' << format_double(r.heisenberg_bits) << ',' << format_double(r.sql_bits) << ','
        << method_name(r.method) << ',' << (r.seed ? std::to_string(*r.seed) : "") << ','
        << (r.runtime_ms ? format_double(*r.runtime_ms) : "") << '\n';
  }
}

// --- sweep driver ---------------------------------------------------------------

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  if (spec.output_path.empty() || spec.output_path == "-") return run_sweep(spec, std::cout);
  std::ofstream file(spec.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open output file: " + spec.output_path);
  auto rows = run_sweep(spec, file);
  file.flush();
  if (!file) throw Error("failed writing output file: " + spec.output_path);
  return rows;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, std::ostream& out) {
  spec.validate();
  const std::vector<ProbeSpec> points = spec.grid();

  double total_cost = 0.0;
  for (const ProbeSpec& p : points) {
    total_cost += estimate_cost_seconds(p, resolve_method(p, spec.options), spec.options);
  }
  const unsigned workers = std::min<unsigned>(spec.workers, static_cast<unsigned>(points.size()));
  const double projected = total_cost / workers;
  if (projected > spec.budget_seconds && !spec.force) {
    std::ostringstream msg;
    msg << "sweep projected at " << projected << " s exceeds budget of " << spec.budget_seconds
        << " s (pass --force to run anyway)";
    throw ConfigError(msg.str());
  }

  std::vector<ResultRow> rows(points.size());
  std::vector<std::exception_ptr> failures(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
      try {
        PointOptions options = spec.options;
        options.mc.seed = derive_stream_seed(spec.options.mc.seed, i);
        const auto start = std::chrono::steady_clock::now();
        const MiEstimate est = compute_point(points[i], options);
        const auto stop = std::chrono::steady_clock::now();
        rows[i] = make_row(est, spec.emit_asymptote_columns);
        if (spec.record_runtime) {
          rows[i].runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  write_csv(out, rows);
  return rows;
}

// --- JSON spec files -------------------------------------------------------------

SweepSpec parse_sweep_spec(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("sweep spec must be a JSON object");

  static const std::vector<std::string> known = {
      "strategy", "label", "n_values", "t_values", "d_values", "method", "density", "quadrature",
      "mc", "output", "emit_asymptote_columns", "workers", "budget_seconds", "force", "record_runtime"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("unknown key in sweep spec: " + item.key());
    }
  }

  SweepSpec spec;
  try {
    const std::string strategy = doc.at("strategy").get<std::string>();
    const auto kind = parse_strategy(strategy);
    if (!kind) throw ConfigError("unknown strategy: " + strategy);
    spec.strategy = *kind;
    if (strategy == "parallel-entangled") spec.label = strategy;
    if (doc.contains("label")) spec.label = doc["label"].get<std::string>();
    if (doc.contains("n_values")) spec.n_values = doc["n_values"].get<std::vector<std::uint64_t>>();
    if (doc.contains("t_values")) spec.t_values = doc["t_values"].get<std::vector<int>>();
    if (doc.contains("d_values")) spec.d_values = doc["d_values"].get<std::vector<int>>();
    if (doc.contains("method")) {
      const auto m = parse_method_choice(doc["method"].get<std::string>());
      if (!m) throw ConfigError("unknown method: " + doc["method"].get<std::string>());
      spec.options.method = *m;
    }
    if (doc.contains("density")) {
      const auto mode = doc["density"].get<std::string>();
      if (mode == "exact") {
        spec.options.density = DensityMode::Exact;
      } else if (mode == "gaussian") {
        spec.options.density = DensityMode::Gaussian;
      } else {
        throw ConfigError("density must be exact or gaussian");
      }
    }
    if (doc.contains("quadrature")) {
      const json& q = doc["quadrature"];
      spec.options.quadrature.rel_tol = q.value("rel_tol", spec.options.quadrature.rel_tol);
      spec.options.quadrature.abs_tol = q.value("abs_tol", spec.options.quadrature.abs_tol);
      spec.options.quadrature.max_depth = q.value("max_depth", spec.options.quadrature.max_depth);
    }
    if (doc.contains("mc")) {
      const json& m = doc["mc"];
      spec.options.mc.samples = m.value("samples", spec.options.mc.samples);
      spec.options.mc.seed = m.value("seed", spec.options.mc.seed);
      spec.options.mc.batch = m.value("batch", spec.options.mc.batch);
    }
    spec.output_path = doc.value("output", spec.output_path);
    spec.emit_asymptote_columns = doc.value("emit_asymptote_columns", spec.emit_asymptote_columns);
    spec.workers = doc.value("workers", spec.workers);
    spec.budget_seconds = doc.value("budget_seconds", spec.budget_seconds);
    spec.force = doc.value("force", spec.force);
    spec.record_runtime = doc.value("record_runtime", spec.record_runtime);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed sweep spec: ") + e.what());
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read sweep spec: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_sweep_spec(text.str());
}

}  // namespace qmi
