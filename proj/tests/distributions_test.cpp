#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qmi/distributions.hpp"
#include "qmi/errors.hpp"
#include "qmi/numerics.hpp"
#include "qmi/rng.hpp"

namespace {

using qmi::DensityMode;

// Property tests draw phases from a fixed stream.
std::vector<double> random_phases(std::uint64_t stream, int count) {
  qmi::UniformStream rng(qmi::derive_stream_seed(0xd157, stream));
  std::vector<double> out(count);
  for (double& x : out) x = rng.next();
  return out;
}

double channel_sum(const qmi::DiscreteChannel& ch, double phi) {
  double s = 0.0;
  for (std::size_t m = 0; m < ch.outcome_count; ++m) s += ch.prob(m, phi);
  return s;
}

// |sum_n a_n e^{i 2 pi n theta}|^2 summed directly.
double sep_optimal_oracle(double theta, unsigned n) {
  double re = 0.0;
  double im = 0.0;
  for (unsigned k = 0; k <= n; ++k) {
    const double a = std::sqrt(std::exp(qmi::log_binomial(n, k)) / std::ldexp(1.0, static_cast<int>(n)));
    re += a * std::cos(2.0 * std::numbers::pi * k * theta);
    im += a * std::sin(2.0 * std::numbers::pi * k * theta);
  }
  return re * re + im * im;
}

TEST(Strategy, NamesRoundTrip) {
  for (auto kind : {qmi::StrategyKind::QpeaQubit, qmi::StrategyKind::QpeaDDim, qmi::StrategyKind::SepOptimalPovm,
                    qmi::StrategyKind::SepHamming, qmi::StrategyKind::SepDetectionQpea,
                    qmi::StrategyKind::PeggBarnett, qmi::StrategyKind::TwoLevelSubspace}) {
    EXPECT_EQ(qmi::parse_strategy(qmi::strategy_name(kind)), kind);
  }
  EXPECT_EQ(qmi::parse_strategy("parallel-entangled"), qmi::StrategyKind::QpeaQubit);
  EXPECT_FALSE(qmi::parse_strategy("bogus").has_value());
}

TEST(ProbeSpec, ResourceCounts) {
  EXPECT_EQ(qmi::ProbeSpec::qpea_digits(7).n, 127u);
  EXPECT_EQ(qmi::ProbeSpec::qpea_ddim(3, 4).n, 80u);
  EXPECT_EQ(qmi::ProbeSpec::sep_detection(5).n, 31u);
  EXPECT_EQ(qmi::ProbeSpec::two_level(17).n, 1u);
  EXPECT_TRUE(qmi::ProbeSpec::sep_hamming(10).separable());
  EXPECT_FALSE(qmi::ProbeSpec::qpea(10).separable());
  EXPECT_THROW(qmi::ProbeSpec::qpea(0).validate(), qmi::DomainError);
  EXPECT_THROW(qmi::ProbeSpec::qpea_ddim(1, 3).validate(), qmi::DomainError);
}

TEST(Qpea, ZeroPhaseIsDeterministic) {
  for (std::uint64_t n : {1, 7, 127}) {
    EXPECT_DOUBLE_EQ(qmi::qpea_prob(0, 0.0, n), 1.0);
    EXPECT_EQ(qmi::qpea_prob(1, 0.0, n), 0.0);
  }
}

TEST(Qpea, HalfwayBetweenOutcomesQubit) {
  // M = 2, phi = 1/4: both outcomes equally likely.
  EXPECT_NEAR(qmi::qpea_prob(0, 0.25, 1), 0.5, 1e-15);
  EXPECT_NEAR(qmi::qpea_prob(1, 0.25, 1), 0.5, 1e-15);
}

TEST(Qpea, GridPointsAreFiniteAndExact) {
  const std::uint64_t n = 255;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double phi = static_cast<double>(k) / 256.0;
    EXPECT_NEAR(qmi::qpea_prob(k, phi, n), 1.0, 1e-12);
  }
}

TEST(Qpea, NormalizationProperty) {
  const auto phases = random_phases(1, 100);
  for (std::uint64_t n : {1, 3, 7, 15, 63, 255, 1023}) {
    const auto ch = qmi::qpea_channel(n);
    for (double phi : phases) EXPECT_NEAR(channel_sum(ch, phi), 1.0, 1e-10) << "N=" << n;
    for (double phi : ch.singular_grid) EXPECT_NEAR(channel_sum(ch, phi), 1.0, 1e-10) << "N=" << n;
  }
}

TEST(Qpea, NearPeakMatchesLongDouble) {
  const std::uint64_t n = 1023;
  for (double delta : {1e-9, 1e-8, 3e-8, 1e-7, 1e-6}) {
    const long double x = std::numbers::pi_v<long double> * delta;
    const long double m = 1024.0L;
    const long double ref = std::pow(std::sin(m * x) / (m * std::sin(x)), 2.0L);
    EXPECT_NEAR(qmi::qpea_prob(0, delta, n), static_cast<double>(ref), 1e-12) << delta;
  }
}

TEST(QpeaDDim, MatchesQubitCaseForDTwo) {
  for (int t = 1; t <= 6; ++t) {
    const std::uint64_t n = (std::uint64_t{1} << t) - 1;
    for (double phi : random_phases(2, 10)) {
      for (std::uint64_t m = 0; m <= n; ++m) {
        EXPECT_NEAR(qmi::qpea_ddim_prob(m, phi, 2, t), qmi::qpea_prob(m, phi, n), 1e-15);
      }
    }
  }
}

TEST(QpeaDDim, NormalizationProperty) {
  const auto phases = random_phases(3, 100);
  for (int d = 2; d <= 5; ++d) {
    for (int t = 1; t <= 4; ++t) {
      const auto ch = qmi::qpea_ddim_channel(d, t);
      for (double phi : phases) EXPECT_NEAR(channel_sum(ch, phi), 1.0, 1e-10) << d << "," << t;
    }
  }
}

TEST(QpeaDDim, OverflowRejected) {
  EXPECT_EQ(qmi::checked_power(10, 3), 1000u);
  EXPECT_THROW(qmi::checked_power(2, 63), qmi::DomainError);
}

TEST(SepOptimal, FourProbesAtZero) {
  // (1 + 2 + sqrt 6 + 2 + 1)^2 / 16
  const double expected = std::pow(6.0 + std::sqrt(6.0), 2) / 16.0;
  EXPECT_NEAR(qmi::sep_optimal_density(0.0, 4, DensityMode::Exact), expected, 1e-13);
}

TEST(SepOptimal, MatchesDirectSum) {
  for (unsigned n : {1u, 2u, 5u, 20u, 60u}) {
    const qmi::SeparableOptimalDensity f(n, DensityMode::Exact);
    for (double theta : random_phases(4, 25)) {
      EXPECT_NEAR(f(theta), sep_optimal_oracle(theta, n), 1e-11) << "N=" << n << " theta=" << theta;
    }
  }
}

TEST(SepOptimal, ReflectionSymmetric) {
  const qmi::SeparableOptimalDensity f(301, DensityMode::Exact);
  for (double theta : random_phases(5, 25)) EXPECT_NEAR(f(theta), f(1.0 - theta), 1e-10);
}

TEST(SepOptimal, GaussianApproachesExactPeak) {
  const double exact = qmi::sep_optimal_density(0.0, 10'000, DensityMode::Exact);
  const double gauss = qmi::sep_optimal_density(0.0, 10'000, DensityMode::Gaussian);
  EXPECT_NEAR(gauss / exact, 1.0, 1e-3);
  EXPECT_NEAR(gauss, std::sqrt(2.0 * std::numbers::pi * 10'000), 1e-9);
}

TEST(SepOptimal, DensityIntegratesToOne) {
  for (std::uint64_t n : {1, 3, 50, 500, 2000}) {
    const auto cd = qmi::sep_optimal_covariant(n, DensityMode::Exact);
    qmi::QuadratureSpec q;
    for (int k = 1; k <= 12 && 2.0 * k * cd.peak_width < 1.0; ++k) q.forced_nodes.push_back(2.0 * k * cd.peak_width);
    const auto r = qmi::integrate_adaptive(cd.density, 0.0, 0.5, q);
    EXPECT_NEAR(2.0 * r.value, 1.0, 1e-8) << "N=" << n;
  }
}

TEST(Hamming, WeightsNormalized) {
  for (std::uint64_t n : {1, 4, 33, 400}) {
    const qmi::HammingChannel ch(n);
    for (double phi : random_phases(6, 20)) {
      double s = 0.0;
      double strings = 0.0;
      for (std::uint64_t k = 0; k <= n; ++k) {
        s += ch.weight_prob(k, phi);
        strings += std::exp(ch.log_string_multiplicity(k)) * ch.string_prob(k, phi);
      }
      EXPECT_NEAR(s, 1.0, 1e-10);
      EXPECT_NEAR(strings, 1.0, 1e-10);
    }
  }
}

TEST(Hamming, MarginalMatchesQuadrature) {
  const qmi::HammingChannel ch(6);
  for (std::uint64_t k = 0; k <= 6; ++k) {
    const auto r = qmi::integrate_adaptive([&](double phi) { return ch.weight_prob(k, phi); });
    EXPECT_NEAR(ch.marginal_weight(k), r.value, 1e-12) << k;
  }
}

TEST(Hamming, MarginalClosedFormSmallN) {
  // N = 2: C(0,0)C(4,2)/16, C(2,1)C(2,1)/16, C(4,2)/16.
  const qmi::HammingChannel ch(2);
  EXPECT_NEAR(ch.marginal_weight(0), 6.0 / 16.0, 1e-15);
  EXPECT_NEAR(ch.marginal_weight(1), 4.0 / 16.0, 1e-15);
  EXPECT_NEAR(ch.marginal_weight(2), 6.0 / 16.0, 1e-15);
}

TEST(SepDetection, GroupProbabilities) {
  for (int j = 0; j <= 5; ++j) {
    for (double phi : random_phases(7, 20)) {
      const double even = qmi::sep_detection_group_prob(qmi::Parity::Even, phi, j);
      const double odd = qmi::sep_detection_group_prob(qmi::Parity::Odd, phi, j);
      EXPECT_NEAR(even + odd, 1.0, 1e-14);
      const double c = std::cos(std::numbers::pi * phi * std::ldexp(1.0, j));
      EXPECT_NEAR(even, c * c, 1e-12);
    }
  }
}

TEST(SepDetection, ChannelNormalized) {
  for (int j = 0; j <= 5; ++j) {
    const auto ch = qmi::sep_detection_channel(j);
    for (double phi : random_phases(8, 50)) EXPECT_NEAR(channel_sum(ch, phi), 1.0, 1e-10);
  }
}

TEST(TwoLevel, DensityShapeAndNormalization) {
  for (int d : {2, 3, 17, 101}) {
    EXPECT_NEAR(qmi::two_level_density(0.0, d), 2.0, 1e-15);
    const auto cd = qmi::two_level_covariant(d);
    qmi::QuadratureSpec q;
    q.forced_nodes = cd.nodes;
    EXPECT_NEAR(qmi::integrate_adaptive(cd.density, q).value, 1.0, 1e-10) << d;
  }
}

TEST(WrapUnit, ReducesIntoUnitInterval) {
  EXPECT_DOUBLE_EQ(qmi::wrap_unit(1.25), 0.25);
  EXPECT_DOUBLE_EQ(qmi::wrap_unit(-0.25), 0.75);
  EXPECT_DOUBLE_EQ(qmi::wrap_unit(1.0), 0.0);
}

}  // namespace
