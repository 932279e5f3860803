#include "qmi/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qmi/bounds.hpp"
#include "qmi/distributions.hpp"
#include "qmi/mi_engine.hpp"
#include "qmi/numerics.hpp"
#include "qmi/rng.hpp"
#include "qmi/sweep.hpp"

namespace qmi {

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed condition; keeps the first few messages.
  void require(bool condition, const std::string& what) {
    if (condition) return;
    if (pass || detail.tellp() < 400) detail << (pass ? "" : "; ") << what;
    pass = false;
  }
};

std::string fmt(double x) { return format_double(x); }

struct Check {
  std::string_view id;
  std::string_view description;
  bool full_only;
  std::function<void(Outcome&)> body;
};

void check_constants(Outcome& o) {
  const auto& c = analytic_constants();
  o.require(std::abs(c.c_qpea - (-1.2198977272)) < 1e-10, "c_qpea = " + fmt(c.c_qpea));
  o.require(std::abs(c.c_sql_ent - 0.6044005443) < 1e-10, "c_sql_ent = " + fmt(c.c_sql_ent));
  o.require(std::abs(c.c_probe - 0.4426950409) < 1e-10, "c_probe = " + fmt(c.c_probe));
  o.detail << "c_qpea=" << fmt(c.c_qpea);
}

void check_quadrature(Outcome& o) {
  QuadratureSpec q;
  for (int k = 1; k < 16; ++k) q.forced_nodes.push_back(k / 16.0);
  const Integral log_sin = integrate_adaptive(
      [](double x) {
        const double s = std::sin(8.0 * std::numbers::pi * x);
        return std::log2(s * s);
      },
      q);
  o.require(std::abs(log_sin.value + 2.0) < 1e-9, "int log2 sin^2(8 pi x) = " + fmt(log_sin.value));
  const Integral probe = integrate_adaptive([](double x) {
    const double c = std::cos(std::numbers::pi * x);
    const double s = std::sin(std::numbers::pi * x);
    return plogp(c * c) + plogp(s * s);
  });
  const double expected = std::log2(std::numbers::e / 4.0);
  o.require(std::abs(probe.value - expected) < 1e-9, "plogp cos^2 + sin^2 = " + fmt(probe.value));
}

double channel_sum(const DiscreteChannel& ch, double phi) {
  double total = 0.0;
  for (std::size_t m = 0; m < ch.outcome_count; ++m) total += ch.prob(m, phi);
  return total;
}

void check_discrete_normalization(Outcome& o) {
  UniformStream rng(derive_stream_seed(20240611, 0));
  std::vector<double> phis(100);
  for (double& p : phis) p = rng.next();
  double worst = 0.0;
  auto audit = [&](const DiscreteChannel& ch, bool include_grid) {
    auto probe = [&](double phi) {
      const double s = channel_sum(ch, phi);
      const double dev = std::isfinite(s) ? std::abs(s - 1.0) : std::numeric_limits<double>::infinity();
      worst = std::max(worst, dev);
      o.require(dev < 1e-10, ch.spec.display_label() + " N=" + std::to_string(ch.spec.n) +
                                 " sums to " + fmt(s) + " at phi=" + fmt(phi));
    };
    for (double phi : phis) probe(phi);
    if (include_grid) {
      probe(0.0);
      for (double phi : ch.singular_grid) probe(phi);
    }
  };
  for (std::uint64_t n : {1, 3, 7, 15, 63, 255}) audit(qpea_channel(n), true);
  for (int d = 2; d <= 5; ++d) {
    for (int t = 1; t <= 4; ++t) audit(qpea_ddim_channel(d, t), true);
  }
  for (std::uint64_t n : {1, 5, 12, 100}) audit(HammingChannel(n).as_discrete(), false);
  for (int j = 0; j <= 5; ++j) audit(sep_detection_channel(j), true);
  o.detail << (o.pass ? "" : "; ") << "max deviation " << fmt(worst);
}

void check_covariant_normalization(Outcome& o) {
  auto audit = [&](const CovariantDensity& cd, const std::string& name) {
    QuadratureSpec q;
    q.rel_tol = 1e-12;
    std::vector<double> nodes;
    for (int k = 1; k <= 12 && k * cd.peak_width < 0.5; ++k) nodes.push_back(2.0 * k * cd.peak_width);
    for (double x : cd.nodes) {
      if (x < 0.5) nodes.push_back(2.0 * x);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                nodes.end());
    q.forced_nodes = nodes;
    const Integral half = integrate_adaptive(cd.density, 0.0, 0.5, q);
    const double total = 2.0 * half.value;
    o.require(std::abs(total - 1.0) < 1e-8, name + " integrates to " + fmt(total));
  };
  for (std::uint64_t n : {1, 4, 10, 100, 1000, 2000}) {
    audit(sep_optimal_covariant(n, DensityMode::Exact), "sep-optimal N=" + std::to_string(n));
  }
  for (int d : {2, 3, 17, 101}) audit(two_level_covariant(d), "two-level d=" + std::to_string(d));
}

void check_hamming_marginals(Outcome& o) {
  for (std::uint64_t n : {1, 10, 100, 1000, 10000}) {
    HammingChannel ch(n);
    double total = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) total += ch.marginal_weight(k);
    o.require(std::abs(total - 1.0) < 1e-10, "N=" + std::to_string(n) + " marginals sum to " + fmt(total));
  }
}

void check_statevector_oracle(Outcome& o) {
  UniformStream rng(derive_stream_seed(20240611, 1));
  double worst = 0.0;
  for (int t = 1; t <= 8; ++t) {
    const std::uint64_t n = (std::uint64_t{1} << t) - 1;
    for (int trial = 0; trial < 50; ++trial) {
      const double phi = rng.next();
      const auto sim = qpea_statevector(t, phi);
      double tv = 0.0;
      for (std::uint64_t m = 0; m <= n; ++m) tv += std::abs(sim[m] - qpea_prob(m, phi, n));
      tv *= 0.5;
      worst = std::max(worst, tv);
      o.require(tv < 1e-9, "t=" + std::to_string(t) + " phi=" + fmt(phi) + " TV=" + fmt(tv));
    }
  }
  o.detail << (o.pass ? "" : "; ") << "max TV " << fmt(worst);
}

void check_qpea_naive_equivalence(Outcome& o) {
  for (std::uint64_t n : {1, 3, 7, 15, 31, 63}) {
    const MiEstimate reduced = mi_qpea_reduced(n);
    const MiEstimate naive = mi_discrete_naive(qpea_channel(n));
    const double diff = std::abs(reduced.bits - naive.bits);
    o.require(diff <= reduced.err + naive.err + 1e-9,
              "N=" + std::to_string(n) + " reduced " + fmt(reduced.bits) + " vs naive " + fmt(naive.bits));
  }
}

void check_hamming_equivalence(Outcome& o) {
  for (std::uint64_t n = 1; n <= 10; ++n) {
    const MiEstimate closed = mi_hamming_closed(n);
    const MiEstimate quad = mi_discrete_naive(HammingChannel(n).as_discrete());
    o.require(std::abs(closed.bits - quad.bits) < 1e-6,
              "N=" + std::to_string(n) + " closed " + fmt(closed.bits) + " vs quad " + fmt(quad.bits));
  }
}

void check_qpea_127(Outcome& o) {
  const MiEstimate est = mi_qpea_reduced(127);
  const double target = 7.0 + analytic_constants().c_qpea;
  o.require(std::abs(est.bits - target) < 0.02, "I(127) = " + fmt(est.bits));
  o.detail << (o.pass ? "" : "; ") << "I(127)=" << fmt(est.bits) << " target " << fmt(target);
}

void check_sep_optimal_1000(Outcome& o) {
  const MiEstimate est = mi_covariant(sep_optimal_covariant(1000, DensityMode::Exact));
  const double target = 0.5 * std::log2(1000.0) + analytic_constants().c_sql_ent;
  o.require(std::abs(est.bits - target) < 0.05, "I(1000) = " + fmt(est.bits));
  o.detail << (o.pass ? "" : "; ") << "I(1000)=" << fmt(est.bits) << " target " << fmt(target);
}

void check_sep_detection(Outcome& o) {
  const double c = analytic_constants().c_probe;
  for (int j = 0; j <= 6; ++j) {
    const MiEstimate g = sep_detection_group_mi(j);
    o.require(std::abs(g.bits - c) < 1e-8, "group j=" + std::to_string(j) + " = " + fmt(g.bits));
  }
  const MiEstimate total = mi_sep_detection_qpea(7);
  o.require(std::abs(total.bits - 7.0 * c) < 1e-8, "t=7 total " + fmt(total.bits));
  o.require(total.bits < 0.5 * std::log2(127.0), "t=7 total not below SQL");
}

void check_ddim(Outcome& o) {
  double previous_gap = std::numeric_limits<double>::infinity();
  const double c = analytic_constants().c_qpea;
  for (int d : {4, 64, 1024}) {
    const MiEstimate est = mi_qpea_ddim(d, 1);
    const double gap = std::abs(est.bits - std::log2(static_cast<double>(d)) - c);
    o.require(gap < previous_gap, "gap not shrinking at d=" + std::to_string(d));
    previous_gap = gap;
  }
  o.require(previous_gap < 0.02, "gap at d=1024 is " + fmt(previous_gap));
  for (int t = 1; t <= 10; ++t) {
    const double a = mi_qpea_ddim(2, t).bits;
    const double b = mi_qpea_reduced((std::uint64_t{1} << t) - 1).bits;
    o.require(std::abs(a - b) < 1e-9, "d=2 t=" + std::to_string(t) + " mismatch");
  }
}

void check_two_level(Outcome& o) {
  const double c = analytic_constants().c_probe;
  std::vector<double> values;
  for (int d : {2, 3, 17, 101}) {
    const MiEstimate est = mi_two_level(d);
    values.push_back(est.bits);
    o.require(std::abs(est.bits - c) < 1e-8, "d=" + std::to_string(d) + " I=" + fmt(est.bits));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      o.require(std::abs(values[i] - values[j]) < 1e-9, "two-level values depend on d");
    }
  }
}

void check_bound_dominance(Outcome& o) {
  std::vector<MiEstimate> results;
  for (std::uint64_t n : {1, 7, 127, 1023}) results.push_back(mi_qpea_reduced(n));
  for (std::uint64_t n : {10, 100, 1000}) results.push_back(mi_covariant(sep_optimal_covariant(n, DensityMode::Exact)));
  for (std::uint64_t n : {1, 10, 100, 1000}) results.push_back(mi_hamming_closed(n));
  for (int t = 1; t <= 7; ++t) results.push_back(mi_sep_detection_qpea(t));
  for (int d : {2, 17}) results.push_back(mi_two_level(d));
  results.push_back(mi_qpea_ddim(3, 2));
  results.push_back(mi_qpea_ddim(1024, 1));
  const BoundReport report = verify_bound_dominance(results);
  for (const BoundCheck& c : report.entries) {
    o.require(c.pass, c.label + " N=" + std::to_string(c.n) + " bits " + fmt(c.bits) + " exceeds bound");
  }
  o.detail << (o.pass ? "" : "; ") << report.entries.size() << " estimates";
}

void check_qpea_1e5(Outcome& o) {
  const MiEstimate est = mi_qpea_reduced(99'999);
  const double gap = est.bits - std::log2(100'000.0);
  o.require(std::abs(gap - analytic_constants().c_qpea) < 0.005, "gap = " + fmt(gap));
  o.detail << (o.pass ? "" : "; ") << "I - log2(1e5) = " << fmt(gap);
}

void check_hamming_1e5(Outcome& o) {
  const double f = hamming_sql_offset(100'000);
  o.require(std::abs(f - analytic_constants().c_sep_sep) < 0.01, "f(1e5) = " + fmt(f));
  o.detail << (o.pass ? "" : "; ") << "f(1e5)=" << fmt(f);
}

void check_sep_optimal_mc(Outcome& o) {
  const CovariantDensity cd = sep_optimal_covariant(1000, DensityMode::Exact);
  const MiEstimate quad = mi_covariant(cd);
  McSpec mc;
  mc.samples = 1'000'000;
  mc.seed = 7;
  const MiEstimate est = mi_covariant_mc(cd, mc);
  o.require(std::abs(est.bits - quad.bits) <= 3.0 * est.err,
            "mc " + fmt(est.bits) + " +- " + fmt(est.err) + " vs quad " + fmt(quad.bits));
  o.detail << (o.pass ? "" : "; ") << "mc " << fmt(est.bits) << " +- " << fmt(est.err);
}

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks = {
      {"NUM-CONSTANTS", "analytic constants recomputed from gamma", false, check_constants},
      {"NUM-QUADRATURE", "log-singular reference integrals", false, check_quadrature},
      {"NORM-DISCRETE", "discrete channels sum to 1 at random phases and grid points", false,
       check_discrete_normalization},
      {"NORM-COVARIANT", "covariant densities integrate to 1", false, check_covariant_normalization},
      {"NORM-HAMMING-MARGINALS", "Hamming weight marginals sum to 1", false, check_hamming_marginals},
      {"ORACLE-STATEVECTOR", "state-vector QPEA matches closed form", false, check_statevector_oracle},
      {"EQUIV-QPEA-NAIVE", "reduced QPEA integral matches direct evaluation", false,
       check_qpea_naive_equivalence},
      {"EQUIV-HAMMING", "Hamming closed form matches quadrature", false, check_hamming_equivalence},
      {"QPEA-ASYMPTOTE-127", "QPEA at N=127 near log2(128) - 1.2199", false, check_qpea_127},
      {"SEPOPT-SQL-1000", "optimal separable POVM at N=1000 near 1/2 log2 N + 0.604", false,
       check_sep_optimal_1000},
      {"SEPDETECT-GROUPS", "per-group information of separable detection", false, check_sep_detection},
      {"DDIM-SCALING", "d-dimensional QPEA approaches t log2 d - 1.2199", false, check_ddim},
      {"TWO-LEVEL", "two-level subspace information is independent of d", false, check_two_level},
      {"BOUND-DOMINANCE", "estimates respect entropy and separable Holevo bounds", false,
       check_bound_dominance},
      {"QPEA-ASYMPTOTE-1E5", "QPEA at N=99999 within 0.005 of the asymptote", true, check_qpea_1e5},
      {"HAMMING-OFFSET-1E5", "f(1e5) within 0.01 of -0.395", true, check_hamming_1e5},
      {"SEPOPT-MC-1000", "Monte Carlo agrees with quadrature at N=1000", true, check_sep_optimal_mc},
  };
  return checks;
}

}  // namespace

bool VerifyReport::ok() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerifyReport::find(std::string_view id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<std::string> verify_check_ids(VerifyLevel level) {
  std::vector<std::string> ids;
  for (const Check& c : all_checks()) {
    if (!c.full_only || level == VerifyLevel::Full) ids.emplace_back(c.id);
  }
  return ids;
}

void print_check(std::ostream& out, const CheckResult& check) {
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", check.seconds);
  out << (check.pass ? "[PASS] " : "[FAIL] ") << check.id << "  " << check.description << "  (" << timing << ")";
  if (!check.detail.empty()) out << "\n         " << check.detail;
  out << '\n';
}

VerifyReport run_verify(VerifyLevel level, std::ostream* progress, std::span<const std::string> only) {
  VerifyReport report;
  for (const Check& c : all_checks()) {
    if (c.full_only && level != VerifyLevel::Full) continue;
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(outcome);
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    CheckResult result{std::string(c.id), std::string(c.description), outcome.pass, outcome.detail.str(),
                       std::chrono::duration<double>(stop - start).count()};
    if (progress) print_check(*progress, result);
    report.checks.push_back(std::move(result));
  }
  return report;
}

}  // namespace qmi
