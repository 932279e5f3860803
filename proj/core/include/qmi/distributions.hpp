#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmi {

enum class StrategyKind {
  QpeaQubit,         // sequential QPEA, also the entangled-parallel N00N-group strategy
  QpeaDDim,          // QPEA on d-dimensional probes, d^t outcomes
  SepOptimalPovm,    // N separable probes, covariant optimal (entangled) POVM
  SepHamming,        // N separable probes, product +/- measurement
  SepDetectionQpea,  // N00N groups of the parallel QPEA read out qubit by qubit
  PeggBarnett,       // one d-dimensional probe in a phase state, t = 1
  TwoLevelSubspace,  // d-dimensional probe restricted to span{|0>, |d-1>}
};

std::string_view strategy_name(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

/// What is being measured and at what scale.
///
/// N counts applications of the phase unitary in the sense of the entropy
/// bound: log2(N+1) is the number of bits any strategy on this resource can
/// extract. For QpeaDDim and PeggBarnett that means N + 1 = d^t, and for
/// TwoLevelSubspace N = 1.
struct ProbeSpec {
  StrategyKind kind = StrategyKind::QpeaQubit;
  int d = 2;
  int t = 1;
  std::uint64_t n = 1;
  /// Reporting label; defaults to strategy_name(kind).
  std::string label;

  static ProbeSpec qpea(std::uint64_t n);
  static ProbeSpec qpea_digits(int t);
  static ProbeSpec parallel_entangled(std::uint64_t n);
  static ProbeSpec qpea_ddim(int d, int t);
  static ProbeSpec pegg_barnett(int d);
  static ProbeSpec sep_optimal(std::uint64_t n);
  static ProbeSpec sep_hamming(std::uint64_t n);
  static ProbeSpec sep_detection(int t);
  static ProbeSpec two_level(int d);

  void validate() const;
  /// Unentangled input probes: bounded by the standard quantum limit.
  bool separable() const;
  std::string display_label() const;
};

/// Finite outcome set with an evaluator p(m | phi), phi in [0,1).
struct DiscreteChannel {
  ProbeSpec spec;
  std::size_t outcome_count = 0;
  std::function<double(std::size_t, double)> prob;
  /// Sorted abscissae in (0,1) where the closed form is 0/0 or changes shape
  /// fast; used as forced quadrature nodes.
  std::vector<double> singular_grid;
};

/// Shift-invariant outcome density F(theta), theta = estimate - phi mod 1.
struct CovariantDensity {
  ProbeSpec spec;
  std::function<double(double)> density;
  /// Scale of the central peak; quadrature nodes are concentrated within a
  /// few multiples of it around theta = 0.
  double peak_width = 1.0;
  /// Extra nodes in (0,1) (zeros and secondary peaks).
  std::vector<double> nodes;
  /// F(theta) = F(1 - theta).
  bool reflection_symmetric = true;
  /// Density is an asymptotic approximation rather than the exact model.
  bool approximate = false;
};

// --- QPEA -----------------------------------------------------------------

/// sin^2(pi M phi) / (M^2 sin^2(pi(phi - m/M))) with M outcomes, taking the
/// limit at the peak phi = m/M.
double qpea_kernel(std::uint64_t m, double phi, std::uint64_t outcomes);

double qpea_prob(std::uint64_t m, double phi, std::uint64_t n);
double qpea_ddim_prob(std::uint64_t m, double phi, int d, int t);

/// d^t, throwing DomainError when it does not fit in 62 bits.
std::uint64_t checked_power(int d, int t);

DiscreteChannel qpea_channel(std::uint64_t n);
DiscreteChannel qpea_ddim_channel(int d, int t);

// --- separable probes, optimal covariant POVM ---------------------------

enum class DensityMode { Exact, Gaussian };

/// Exact density |sum_n sqrt(C(N,n)/2^N) e^{i 2 pi theta n}|^2, or its
/// large-N Gaussian form sqrt(2 pi N) exp(-2 pi^2 theta'^2 N).
///
/// Holds the amplitude table so repeated evaluation costs O(N) each.
class SeparableOptimalDensity {
 public:
  SeparableOptimalDensity(std::uint64_t n, DensityMode mode);

  double operator()(double theta) const;
  std::uint64_t n() const noexcept { return n_; }
  DensityMode mode() const noexcept { return mode_; }

 private:
  std::uint64_t n_;
  DensityMode mode_;
  std::vector<double> amplitudes_;
};

double sep_optimal_density(double theta, std::uint64_t n, DensityMode mode);
CovariantDensity sep_optimal_covariant(std::uint64_t n, DensityMode mode);

// --- separable probes, product +/- measurement --------------------------

/// C(N,k) sin^{2k}(pi phi) cos^{2(N-k)}(pi phi).
double hamming_weight_prob(std::uint64_t k, double phi, std::uint64_t n);

/// The product measurement aggregated by Hamming weight. Every string of
/// weight k has the same likelihood, so the weight is a sufficient statistic.
class HammingChannel {
 public:
  explicit HammingChannel(std::uint64_t n);

  std::uint64_t n() const noexcept { return n_; }
  /// Probability that the outcome string has weight k.
  double weight_prob(std::uint64_t k, double phi) const;
  /// Likelihood of one particular string of weight k.
  double string_prob(std::uint64_t k, double phi) const;
  /// ln C(N,k): number of strings of weight k.
  double log_string_multiplicity(std::uint64_t k) const { return log_binom_[k]; }
  /// Prior-averaged probability of weight k:
  /// C(2k,k) C(2(N-k),N-k) / 4^N.
  double marginal_weight(std::uint64_t k) const;
  /// Prior-averaged probability of one string of weight k.
  double string_marginal(std::uint64_t k) const;

  DiscreteChannel as_discrete() const;

 private:
  std::uint64_t n_;
  std::vector<double> log_binom_;
};

// --- QPEA groups read out with single-qubit +/- projections -------------

enum class Parity { Even, Odd };

/// Probability that a group of 2^j qubits yields a string of given parity:
/// cos^2(pi phi 2^j) for even, sin^2 for odd.
double sep_detection_group_prob(Parity parity, double phi, int j);
/// Likelihood of one particular string: the group probability spread over the
/// 2^(2^j - 1) strings of that parity.
double sep_detection_string_prob(Parity parity, double phi, int j);

DiscreteChannel sep_detection_channel(int j);

// --- two-level subspace of a d-dimensional probe -------------------------

/// 2 cos^2(pi theta (d-1)).
double two_level_density(double theta, int d);
CovariantDensity two_level_covariant(int d);

/// F = 1: outcome independent of the parameter.
CovariantDensity uniform_covariant();

/// Reduce to [0,1).
double wrap_unit(double x) noexcept;

}  // namespace qmi
