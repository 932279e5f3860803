#include "qmi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmi/distributions.hpp"
#include "qmi/errors.hpp"
#include "qmi/numerics.hpp"

namespace qmi {

double heisenberg_bound(std::uint64_t n) {
  if (n < 1) throw DomainError("heisenberg_bound: N must be >= 1");
  return std::log2(static_cast<double>(n) + 1.0);
}

double sql_bound(std::uint64_t n) {
  if (n < 1) throw DomainError("sql_bound: N must be >= 1");
  return 0.5 * std::log2(static_cast<double>(n));
}

double holevo_separable_entropy(std::uint64_t n) {
  if (n < 1) throw DomainError("holevo_separable_entropy: N must be >= 1");
  if (n > 100'000) throw DomainError("holevo_separable_entropy: N must be <= 1e5");
  const double log_norm = static_cast<double>(n) * std::numbers::ln2;
  std::vector<double> weights(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) weights[k] = std::exp(log_binomial(n, k) - log_norm);
  // Rescale away the log-gamma rounding so the sum passes the normalization check.
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return shannon_entropy_bits(weights);
}

BoundLine BoundLine::of(BoundKind kind) {
  switch (kind) {
    case BoundKind::Heisenberg: return {kind, heisenberg_bound};
    case BoundKind::Sql: return {kind, sql_bound};
    case BoundKind::HolevoSeparable: return {kind, holevo_separable_entropy};
  }
  throw DomainError("BoundLine: unknown kind");
}

// --- state vector ----------------------------------------------------------

StateVector::StateVector(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxStateVectorQubits) {
    throw ConfigError("StateVector: qubit count must be in [1, 12]");
  }
  amps_.assign(std::size_t{1} << qubits, {0.0, 0.0});
  amps_[0] = 1.0;
}

void StateVector::apply_hadamard_all() {
  const std::size_t dim = amps_.size();
  const double r = std::numbers::sqrt2 / 2.0;
  for (int q = 0; q < qubits_; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const auto a0 = amps_[i];
      const auto a1 = amps_[i | bit];
      amps_[i] = r * (a0 + a1);
      amps_[i | bit] = r * (a0 - a1);
    }
  }
}

void StateVector::apply_phase(int qubit, double angle) {
  if (qubit < 0 || qubit >= qubits_) throw DomainError("StateVector: qubit index out of range");
  const std::size_t bit = std::size_t{1} << qubit;
  const auto phase = std::polar(1.0, angle);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) amps_[i] *= phase;
  }
}

void StateVector::apply_inverse_qft() {
  const std::size_t dim = amps_.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  // Row m: (1/sqrt M) sum_k e^{-2 pi i k m / M}. Exponents reduced mod M so
  // every twiddle is an exact table entry.
  std::vector<std::complex<double>> twiddle(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    twiddle[r] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) /
                                     static_cast<double>(dim));
  }
  std::vector<std::complex<double>> out(dim);
  for (std::size_t m = 0; m < dim; ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < dim; ++k) acc += twiddle[(k * m) % dim] * amps_[k];
    out[m] = scale * acc;
  }
  amps_ = std::move(out);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(), [](auto a) { return std::norm(a); });
  return p;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

std::vector<double> qpea_statevector(int t, double phi) {
  if (t < 1 || t > kMaxQpeaOracleDigits) {
    throw ConfigError("qpea_statevector: digit count must be in [1, 10]");
  }
  StateVector state(t);
  state.apply_hadamard_all();
  for (int j = 0; j < t; ++j) {
    // Qubit j sees the unitary 2^j times.
    state.apply_phase(j, 2.0 * std::numbers::pi * wrap_unit(std::ldexp(phi, j)));
  }
  state.apply_inverse_qft();
  return state.probabilities();
}

// --- dominance report -------------------------------------------------------

bool BoundReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const BoundCheck& c) { return c.pass; });
}

BoundReport verify_bound_dominance(std::span<const MiEstimate> results) {
  if (results.empty()) throw DomainError("verify_bound_dominance: no results");
  BoundReport report;
  report.entries.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const MiEstimate& est = results[i];
    BoundCheck check;
    check.index = i;
    check.label = est.spec.display_label();
    check.n = est.spec.n;
    check.bits = est.bits;
    check.err = est.err;
    check.heisenberg = heisenberg_bound(est.spec.n);
    check.heisenberg_margin = check.heisenberg + 3.0 * est.err - est.bits;
    check.pass = std::isfinite(est.bits) && check.heisenberg_margin >= 0.0;
    check.separable = est.spec.separable();
    check.holevo = std::numeric_limits<double>::quiet_NaN();
    check.holevo_margin = std::numeric_limits<double>::quiet_NaN();
    // Beyond 1e5 probes the separable check is skipped; the entropy ceiling still applies.
    if (check.separable && est.spec.n <= 100'000) {
      check.holevo = holevo_separable_entropy(est.spec.n);
      check.holevo_margin = check.holevo + 3.0 * est.err - est.bits;
      check.pass = check.pass && check.holevo_margin >= 0.0;
    }
    report.entries.push_back(std::move(check));
  }
  return report;
}

}  // namespace qmi
