#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qmi/errors.hpp"
#include "qmi/numerics.hpp"
#include "qmi/rng.hpp"

namespace {

using qmi::Integral;
using qmi::McSpec;
using qmi::QuadratureSpec;

// Exact binomial by the multiplicative formula in long double.
long double exact_binomial(unsigned n, unsigned k) {
  long double r = 1.0L;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(Quadrature, PolynomialIsExact) {
  const Integral r = qmi::integrate_adaptive([](double x) { return 3.0 * x * x; });
  EXPECT_NEAR(r.value, 1.0, 1e-14);
}

TEST(Quadrature, LogSineWithForcedNodes) {
  QuadratureSpec q;
  for (int k = 1; k < 16; ++k) q.forced_nodes.push_back(k / 16.0);
  const Integral r = qmi::integrate_adaptive(
      [](double x) {
        const double s = std::sin(8.0 * std::numbers::pi * x);
        return std::log2(s * s);
      },
      q);
  EXPECT_NEAR(r.value, -2.0, 1e-9);
}

TEST(Quadrature, LogSineWithoutNodesStillConverges) {
  const Integral r = qmi::integrate_adaptive([](double x) {
    const double s = std::sin(std::numbers::pi * x);
    return std::log2(s * s);
  });
  EXPECT_NEAR(r.value, -2.0, 1e-8);
}

TEST(Quadrature, BinaryEntropyOfCosineSquared) {
  const Integral r = qmi::integrate_adaptive([](double x) {
    const double c = std::cos(std::numbers::pi * x);
    const double s = std::sin(std::numbers::pi * x);
    return qmi::plogp(c * c) + qmi::plogp(s * s);
  });
  EXPECT_NEAR(r.value, std::log2(std::numbers::e / 4.0), 1e-10);
}

TEST(Quadrature, ForcedNodesAreRelativeToInterval) {
  QuadratureSpec q;
  q.forced_nodes = {0.5};
  // Kink at x = 2 which is the midpoint of [1, 3].
  const Integral r = qmi::integrate_adaptive([](double x) { return std::abs(x - 2.0); }, 1.0, 3.0, q);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
}

TEST(Quadrature, ReportedErrorBoundsActualError) {
  const Integral r = qmi::integrate_adaptive([](double x) { return std::exp(-x) * std::cos(20.0 * x); });
  const double exact = (1.0 + std::exp(-1.0) * (20.0 * std::sin(20.0) - std::cos(20.0))) / 401.0;
  EXPECT_LE(std::abs(r.value - exact), std::max(r.err, 1e-15));
}

TEST(Quadrature, NonFiniteIntegrandIsReported) {
  try {
    qmi::integrate_adaptive([](double x) { return x > 0.3 ? std::nan("") : 1.0; });
    FAIL() << "expected QuadratureError";
  } catch (const qmi::QuadratureError& e) {
    EXPECT_EQ(e.kind(), qmi::QuadratureError::Kind::NonFiniteIntegrand);
    EXPECT_GT(e.abscissa(), 0.3);
  }
}

TEST(Quadrature, NonConvergenceCarriesBestValue) {
  QuadratureSpec q;
  q.rel_tol = 1e-15;
  q.abs_tol = 1e-300;
  q.max_depth = 2;
  try {
    qmi::integrate_adaptive([](double x) { return std::sin(200.0 * x); }, q);
    FAIL() << "expected QuadratureError";
  } catch (const qmi::QuadratureError& e) {
    EXPECT_EQ(e.kind(), qmi::QuadratureError::Kind::NonConvergence);
    EXPECT_TRUE(std::isfinite(e.best_value()));
  }
}

TEST(Quadrature, InvalidSpecRejected) {
  QuadratureSpec q;
  q.rel_tol = -1.0;
  EXPECT_THROW(q.validate(), qmi::ConfigError);
  QuadratureSpec nodes;
  nodes.forced_nodes = {1.5};
  EXPECT_THROW(nodes.validate(), qmi::ConfigError);
}

TEST(MonteCarlo, ConstantHasZeroError) {
  McSpec mc;
  mc.samples = 10'000;
  mc.seed = 123;
  const Integral r = qmi::integrate_mc([](double) { return 1.0; }, mc);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.err, 0.0);
}

TEST(MonteCarlo, LinearMeanAtSeed42) {
  McSpec mc;
  mc.samples = 1'000'000;
  mc.seed = 42;
  const Integral r = qmi::integrate_mc([](double x) { return x; }, mc);
  EXPECT_NEAR(r.value, 0.5, 3.0 * r.err);
  EXPECT_NEAR(r.err, 1.0 / std::sqrt(12.0) / 1000.0, 0.02 * r.err);
}

TEST(MonteCarlo, SameSeedIsBitIdentical) {
  McSpec mc;
  mc.samples = 50'000;
  mc.seed = 9;
  auto f = [](double x) { return std::sin(3.0 * x); };
  const Integral a = qmi::integrate_mc(f, mc);
  const Integral b = qmi::integrate_mc(f, mc);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.err, b.err);
  mc.seed = 10;
  EXPECT_NE(qmi::integrate_mc(f, mc).value, a.value);
}

TEST(MonteCarlo, ErrorScalesAsInverseSqrtSamples) {
  auto f = [](double x) {
    const double s = std::sin(2.0 * std::numbers::pi * x);
    return s * s;
  };
  McSpec small;
  small.samples = 10'000;
  small.seed = 5;
  McSpec large = small;
  large.samples = 1'000'000;
  const double ratio = qmi::integrate_mc(f, small).err / qmi::integrate_mc(f, large).err;
  EXPECT_GT(ratio, 10.0 / 2.0);
  EXPECT_LT(ratio, 10.0 * 2.0);
}

TEST(MonteCarlo, TooFewSamplesRejected) {
  McSpec mc;
  mc.samples = 1;
  EXPECT_THROW(qmi::integrate_mc([](double x) { return x; }, mc), qmi::ConfigError);
}

TEST(Binomial, MatchesExactForSmallN) {
  for (unsigned n = 0; n <= 60; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      const long double exact = exact_binomial(n, k);
      const double got = std::exp(qmi::log_binomial(n, k));
      EXPECT_NEAR(got / static_cast<double>(exact), 1.0, 1e-12) << n << " choose " << k;
    }
  }
}

TEST(Binomial, LargeNMatchesStirling) {
  // ln C(2m, m) = 2m ln 2 - 1/2 ln(pi m) - 1/(8m) + O(m^-3)
  const double m = 50'000.0;
  const double stirling = 2.0 * m * std::numbers::ln2 - 0.5 * std::log(std::numbers::pi * m) - 1.0 / (8.0 * m);
  EXPECT_NEAR(qmi::log_binomial(100'000, 50'000), stirling, 1e-7);
}

TEST(Binomial, KGreaterThanNRejected) {
  EXPECT_THROW(qmi::log_binomial(3, 4), qmi::DomainError);
}

TEST(Entropy, BinomialThree) {
  const std::vector<double> w = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
  EXPECT_NEAR(qmi::shannon_entropy_bits(w), 1.8112781244591329, 1e-14);
}

TEST(Entropy, ZeroWeightsContributeNothing) {
  const std::vector<double> w = {0.5, 0.0, 0.5};
  EXPECT_DOUBLE_EQ(qmi::shannon_entropy_bits(w), 1.0);
  EXPECT_EQ(qmi::plogp(0.0), 0.0);
}

TEST(Constants, RecomputedFromEulerGamma) {
  const auto& c = qmi::analytic_constants();
  const double gamma = 0.57721566490153286;
  EXPECT_NEAR(c.c_qpea, -2.0 + 2.0 * (gamma + std::log(2.0) - 1.0) / std::log(2.0), 1e-14);
  EXPECT_NEAR(c.c_qpea, -1.2198977272, 1e-10);
  EXPECT_NEAR(c.c_sql_ent, 0.5 * std::log2(2.0 * std::numbers::pi / std::numbers::e), 1e-14);
  EXPECT_NEAR(c.c_probe, std::log2(std::numbers::e) - 1.0, 1e-14);
  EXPECT_EQ(c.c_sep_sep, -0.395);
}

TEST(Rng, StreamsAreDistinctAndStable) {
  static_assert(qmi::derive_stream_seed(1, 0) != qmi::derive_stream_seed(1, 1));
  static_assert(qmi::derive_stream_seed(1, 0) != qmi::derive_stream_seed(2, 0));
  qmi::UniformStream a(7);
  qmi::UniformStream b(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

}  // namespace
