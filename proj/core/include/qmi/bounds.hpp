#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qmi/mi_engine.hpp"

namespace qmi {

/// log2(N+1): entropy ceiling after N applications of the phase unitary.
double heisenberg_bound(std::uint64_t n);

/// 1/2 log2 N.
double sql_bound(std::uint64_t n);

/// Entropy of the binomial(N, 1/2) weights: the Holevo quantity of N
/// separable equatorial probes, whose phase-averaged state is diagonal in the
/// symmetric basis.
double holevo_separable_entropy(std::uint64_t n);

enum class BoundKind { Heisenberg, Sql, HolevoSeparable };

struct BoundLine {
  BoundKind kind;
  std::function<double(std::uint64_t)> value_at;

  static BoundLine of(BoundKind kind);
};

/// Dense t-qubit register. Verification oracle only: t <= kMaxStateVectorQubits.
inline constexpr int kMaxStateVectorQubits = 12;

class StateVector {
 public:
  explicit StateVector(int qubits);

  int qubits() const noexcept { return qubits_; }
  std::span<const std::complex<double>> amplitudes() const noexcept { return amps_; }

  void apply_hadamard_all();
  /// Multiply the |1> component of `qubit` by e^{i angle}.
  void apply_phase(int qubit, double angle);
  /// Exact inverse quantum Fourier transform as a dense matrix-vector product.
  void apply_inverse_qft();
  std::vector<double> probabilities() const;
  double norm_squared() const;

 private:
  int qubits_;
  std::vector<std::complex<double>> amps_;
};

/// Output distribution of the t-qubit QPEA for phase phi, obtained by
/// simulating H^t, the controlled phases 2 pi 2^j phi and QFT^dagger.
inline constexpr int kMaxQpeaOracleDigits = 10;
std::vector<double> qpea_statevector(int t, double phi);

struct BoundCheck {
  std::size_t index = 0;
  std::string label;
  std::uint64_t n = 0;
  double bits = 0.0;
  double err = 0.0;
  double heisenberg = 0.0;
  /// heisenberg + 3 err - bits; negative means violation.
  double heisenberg_margin = 0.0;
  bool separable = false;
  double holevo = 0.0;
  double holevo_margin = 0.0;
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundCheck> entries;
  bool all_pass() const;
};

/// Checks every estimate against the entropy ceiling, and separable ones also
/// against the separable Holevo quantity, each with 3 err of slack.
BoundReport verify_bound_dominance(std::span<const MiEstimate> results);

}  // namespace qmi
