#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qmi/bounds.hpp"
#include "qmi/distributions.hpp"
#include "qmi/errors.hpp"
#include "qmi/mi_engine.hpp"
#include "qmi/rng.hpp"

namespace {

TEST(Bounds, ReferenceLines) {
  EXPECT_DOUBLE_EQ(qmi::heisenberg_bound(127), 7.0);
  EXPECT_DOUBLE_EQ(qmi::sql_bound(16), 2.0);
  EXPECT_THROW(qmi::heisenberg_bound(0), qmi::DomainError);
  EXPECT_THROW(qmi::sql_bound(0), qmi::DomainError);
}

TEST(Bounds, HolevoSeparableSmallN) {
  EXPECT_DOUBLE_EQ(qmi::holevo_separable_entropy(1), 1.0);
  EXPECT_NEAR(qmi::holevo_separable_entropy(3), 1.8112781244591329, 1e-13);
}

TEST(Bounds, HolevoSeparableApproachesGaussianEntropy) {
  // Binomial(N, 1/2) entropy ~ 1/2 log2(pi e N / 2).
  const double n = 100'000.0;
  EXPECT_NEAR(qmi::holevo_separable_entropy(100'000), 0.5 * std::log2(std::numbers::pi * std::numbers::e * n / 2.0),
              1e-4);
  EXPECT_THROW(qmi::holevo_separable_entropy(100'001), qmi::DomainError);
}

TEST(Bounds, LinesByKind) {
  EXPECT_DOUBLE_EQ(qmi::BoundLine::of(qmi::BoundKind::Heisenberg).value_at(3), 2.0);
  EXPECT_DOUBLE_EQ(qmi::BoundLine::of(qmi::BoundKind::Sql).value_at(4), 1.0);
  EXPECT_DOUBLE_EQ(qmi::BoundLine::of(qmi::BoundKind::HolevoSeparable).value_at(1), 1.0);
}

TEST(StateVector, HadamardThenNormPreserved) {
  qmi::StateVector s(3);
  s.apply_hadamard_all();
  for (auto a : s.amplitudes()) EXPECT_NEAR(std::abs(a), 1.0 / std::sqrt(8.0), 1e-15);
  s.apply_phase(1, 0.7);
  s.apply_inverse_qft();
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-14);
  EXPECT_THROW(qmi::StateVector(13), qmi::ConfigError);
}

TEST(StateVector, ExactPhaseGivesExactOutcome) {
  for (int t = 1; t <= 6; ++t) {
    const std::size_t dim = std::size_t{1} << t;
    for (std::size_t k = 0; k < dim; ++k) {
      const auto p = qmi::qpea_statevector(t, static_cast<double>(k) / dim);
      EXPECT_NEAR(p[k], 1.0, 1e-12) << "t=" << t << " k=" << k;
    }
  }
}

TEST(StateVector, AgreesWithClosedForm) {
  qmi::UniformStream rng(qmi::derive_stream_seed(77, 0));
  for (int t = 1; t <= 8; ++t) {
    const std::uint64_t n = (std::uint64_t{1} << t) - 1;
    for (int i = 0; i < 50; ++i) {
      const double phi = rng.next();
      const auto sim = qmi::qpea_statevector(t, phi);
      double tv = 0.0;
      for (std::uint64_t m = 0; m <= n; ++m) tv += std::abs(sim[m] - qmi::qpea_prob(m, phi, n));
      EXPECT_LT(0.5 * tv, 1e-9) << "t=" << t << " phi=" << phi;
    }
  }
}

TEST(Dominance, PassesForComputedStrategies) {
  std::vector<qmi::MiEstimate> results = {
      qmi::mi_qpea_reduced(127),
      qmi::mi_hamming_closed(1000),
      qmi::mi_covariant(qmi::sep_optimal_covariant(500, qmi::DensityMode::Exact)),
      qmi::mi_sep_detection_qpea(7),
      qmi::mi_two_level(5),
  };
  const auto report = qmi::verify_bound_dominance(results);
  EXPECT_TRUE(report.all_pass());
  ASSERT_EQ(report.entries.size(), results.size());
  EXPECT_FALSE(report.entries[0].separable);
  EXPECT_TRUE(std::isnan(report.entries[0].holevo));
  EXPECT_TRUE(report.entries[1].separable);
  EXPECT_GT(report.entries[1].holevo_margin, 0.0);
}

TEST(Dominance, FlagsViolation) {
  qmi::MiEstimate fake;
  fake.spec = qmi::ProbeSpec::sep_hamming(4);
  fake.bits = 2.2;  // above H(binomial(4,1/2)) = 2.03 but below log2 5
  fake.err = 0.0;
  const std::vector<qmi::MiEstimate> results = {fake};
  const auto report = qmi::verify_bound_dominance(results);
  EXPECT_FALSE(report.all_pass());
  EXPECT_GT(report.entries[0].heisenberg_margin, 0.0);
  EXPECT_LT(report.entries[0].holevo_margin, 0.0);
}

TEST(Dominance, EmptyInputRejected) {
  EXPECT_THROW(qmi::verify_bound_dominance({}), qmi::DomainError);
}

}  // namespace
