#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "qmi/distributions.hpp"
#include "qmi/numerics.hpp"

namespace qmi {

enum class MiMethod { QuadReduced, QuadNaive, MonteCarlo, ClosedForm, GaussianApprox };

std::string_view method_name(MiMethod method);

/// Mutual information between outcome and phase under a uniform prior, in bits.
struct MiEstimate {
  double bits = 0.0;
  double err = 0.0;
  MiMethod method = MiMethod::QuadReduced;
  ProbeSpec spec;
  std::optional<std::uint64_t> seed;
};

/// Direct evaluation: sum_m int p log2 p  -  sum_m p(m) log2 p(m), with every
/// marginal p(m) obtained by quadrature. Cost is linear in the outcome count.
MiEstimate mi_discrete_naive(const DiscreteChannel& channel, const QuadratureSpec& q = {});

/// (1/M) int_0^1 sin^2(M pi phi)/sin^2(pi phi) log2(M^2 sin^2(pi phi)) dphi,
/// the part of the QPEA information that is not a closed form.
Integral qpea_reduced_kernel(std::uint64_t outcomes, const QuadratureSpec& q = {});

/// QPEA with N + 1 outcomes: log2(N+1) - 2 - kernel.
MiEstimate mi_qpea_reduced(std::uint64_t n, const QuadratureSpec& q = {});

/// d-dimensional QPEA with d^t outcomes: t log2 d - 2 - kernel.
MiEstimate mi_qpea_ddim(int d, int t, const QuadratureSpec& q = {});

/// Covariant density with uniform marginal: I = int_0^1 F log2 F.
MiEstimate mi_covariant(const CovariantDensity& density, const QuadratureSpec& q = {});
MiEstimate mi_covariant_mc(const CovariantDensity& density, const McSpec& mc);

/// Product +/- measurement on N separable probes, evaluated term by term in
/// log space from the weight marginals.
MiEstimate mi_hamming_closed(std::uint64_t n);

/// I - 1/2 log2 N for the product measurement.
double hamming_sql_offset(std::uint64_t n);

/// Quadrature value of the information carried by group j of the parallel
/// QPEA when its qubits are read out one by one.
MiEstimate sep_detection_group_mi(int j, const QuadratureSpec& q = {});

/// t groups: t (1 + log2(e/4)). The per-group quadrature is cross-checked for
/// j < min(t, kSepDetectionCheckedGroups) and the largest deviation is
/// reported as err.
inline constexpr int kSepDetectionCheckedGroups = 12;
MiEstimate mi_sep_detection_qpea(int t, const QuadratureSpec& q = {});

/// Two-level subspace of a d-dimensional probe with the covariant POVM.
MiEstimate mi_two_level(int d, const QuadratureSpec& q = {});

}  // namespace qmi
