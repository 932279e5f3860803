#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qmi {

/// Controls for integrate_adaptive.
///
/// forced_nodes are positions relative to the integration interval: a node x
/// in [0,1] splits [a,b] at a + x(b-a). Panels never evaluate the integrand
/// at their endpoints, so a node may sit on a removable singularity or an
/// integrable logarithmic divergence.
struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 40;
  std::vector<double> forced_nodes;

  void validate() const;
};

/// Controls for integrate_mc. Samples are drawn in batches; batch b uses its
/// own stream derived from (seed, b), so the estimate depends only on
/// (samples, seed, batch).
struct McSpec {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t batch = 4096;

  void validate() const;
};

struct Integral {
  double value = 0.0;
  double err = 0.0;
};

using Integrand = std::function<double(double)>;

Integral integrate_adaptive(const Integrand& f, double a, double b,
                            const QuadratureSpec& spec = {});

inline Integral integrate_adaptive(const Integrand& f, const QuadratureSpec& spec = {}) {
  return integrate_adaptive(f, 0.0, 1.0, spec);
}

/// Plain Monte Carlo on [0,1]: value is the sample mean, err the standard
/// deviation of the mean.
Integral integrate_mc(const Integrand& f, const McSpec& spec);

/// ln n!, reentrant (no shared signgam state).
double log_factorial(double n);

/// ln C(n, k). Exact integer arithmetic for n <= 62, log-gamma above.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// -sum w log2 w with 0 log 0 = 0.
double shannon_entropy_bits(std::span<const double> weights);

/// x log2 x, extended by continuity to 0 at x = 0.
inline double plogp(double x) noexcept { return x > 0.0 ? x * std::log2(x) : 0.0; }

struct AnalyticConstants {
  double euler_gamma;
  /// -2 + 2(gamma + ln2 - 1)/ln2: QPEA offset below log2(N+1).
  double c_qpea;
  /// 1/2 log2(2 pi / e): separable optimal-POVM offset above 1/2 log2 N.
  double c_sql_ent;
  /// log2 e - 1 = 1 + log2(e/4): information of one +/- measured phase qubit.
  double c_probe;
  /// Limit of I - 1/2 log2 N for the product +/- measurement. Numerical only.
  double c_sep_sep;
  double c_sep_sep_uncertainty;
};

const AnalyticConstants& analytic_constants();

}  // namespace qmi
