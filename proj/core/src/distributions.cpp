#include "qmi/distributions.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qmi/errors.hpp"
#include "qmi/numerics.hpp"

namespace qmi {

namespace {

constexpr double kPi = std::numbers::pi;

struct NamedStrategy {
  StrategyKind kind;
  std::string_view name;
};

constexpr std::array<NamedStrategy, 7> kStrategyNames{{
    {StrategyKind::QpeaQubit, "qpea"},
    {StrategyKind::QpeaDDim, "qpea-ddim"},
    {StrategyKind::SepOptimalPovm, "sep-optimal"},
    {StrategyKind::SepHamming, "sep-hamming"},
    {StrategyKind::SepDetectionQpea, "sep-detection"},
    {StrategyKind::PeggBarnett, "pegg-barnett"},
    {StrategyKind::TwoLevelSubspace, "two-level"},
}};

// sin^2(pi x) for x of any size, reducing the argument first.
double sin2_pi(double x) {
  const double r = x - std::nearbyint(x);
  const double s = std::sin(kPi * r);
  return s * s;
}

double cos2_pi(double x) {
  const double r = x - std::nearbyint(x);
  const double c = std::cos(kPi * r);
  return c * c;
}

}  // namespace

double wrap_unit(double x) noexcept {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

std::string_view strategy_name(StrategyKind kind) {
  for (const auto& entry : kStrategyNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  for (const auto& entry : kStrategyNames) {
    if (entry.name == name) return entry.kind;
  }
  if (name == "parallel-entangled") return StrategyKind::QpeaQubit;
  return std::nullopt;
}

// --- ProbeSpec --------------------------------------------------------------

ProbeSpec ProbeSpec::qpea(std::uint64_t n) {
  ProbeSpec p;
  p.kind = StrategyKind::QpeaQubit;
  p.n = n;
  p.t = static_cast<int>(std::bit_width(n));  // ceil(log2(n+1))
  return p;
}

ProbeSpec ProbeSpec::qpea_digits(int t) {
  if (t < 1 || t > 62) throw DomainError("qpea: digit count must be in [1,62]");
  return qpea((std::uint64_t{1} << t) - 1);
}

ProbeSpec ProbeSpec::parallel_entangled(std::uint64_t n) {
  ProbeSpec p = qpea(n);
  p.label = "parallel-entangled";
  return p;
}

ProbeSpec ProbeSpec::qpea_ddim(int d, int t) {
  ProbeSpec p;
  p.kind = StrategyKind::QpeaDDim;
  p.d = d;
  p.t = t;
  p.n = checked_power(d, t) - 1;
  return p;
}

ProbeSpec ProbeSpec::pegg_barnett(int d) {
  ProbeSpec p = qpea_ddim(d, 1);
  p.kind = StrategyKind::PeggBarnett;
  return p;
}

ProbeSpec ProbeSpec::sep_optimal(std::uint64_t n) {
  ProbeSpec p;
  p.kind = StrategyKind::SepOptimalPovm;
  p.n = n;
  return p;
}

ProbeSpec ProbeSpec::sep_hamming(std::uint64_t n) {
  ProbeSpec p;
  p.kind = StrategyKind::SepHamming;
  p.n = n;
  return p;
}

ProbeSpec ProbeSpec::sep_detection(int t) {
  ProbeSpec p = qpea_digits(t);
  p.kind = StrategyKind::SepDetectionQpea;
  return p;
}

ProbeSpec ProbeSpec::two_level(int d) {
  ProbeSpec p;
  p.kind = StrategyKind::TwoLevelSubspace;
  p.d = d;
  p.n = 1;
  return p;
}

void ProbeSpec::validate() const {
  if (d < 2) throw DomainError("ProbeSpec: probe dimension must be >= 2");
  if (t < 1) throw DomainError("ProbeSpec: digit count must be >= 1");
  if (n < 1) throw DomainError("ProbeSpec: N must be >= 1");
  switch (kind) {
    case StrategyKind::QpeaQubit:
    case StrategyKind::SepOptimalPovm:
    case StrategyKind::SepHamming:
      if (d != 2) throw DomainError("ProbeSpec: qubit strategy requires d = 2");
      break;
    case StrategyKind::SepDetectionQpea:
      if (d != 2) throw DomainError("ProbeSpec: qubit strategy requires d = 2");
      if (t > 62 || n != (std::uint64_t{1} << t) - 1) {
        throw DomainError("ProbeSpec: separable detection needs N = 2^t - 1");
      }
      break;
    case StrategyKind::PeggBarnett:
      if (t != 1) throw DomainError("ProbeSpec: Pegg-Barnett has t = 1");
      [[fallthrough]];
    case StrategyKind::QpeaDDim:
      if (n != checked_power(d, t) - 1) throw DomainError("ProbeSpec: need N + 1 = d^t");
      break;
    case StrategyKind::TwoLevelSubspace:
      if (n != 1) throw DomainError("ProbeSpec: two-level subspace uses N = 1");
      break;
  }
}

bool ProbeSpec::separable() const {
  return kind == StrategyKind::SepOptimalPovm || kind == StrategyKind::SepHamming ||
         kind == StrategyKind::SepDetectionQpea;
}

std::string ProbeSpec::display_label() const {
  return label.empty() ? std::string(strategy_name(kind)) : label;
}

// --- QPEA -----------------------------------------------------------------

std::uint64_t checked_power(int d, int t) {
  if (d < 2 || t < 1) throw DomainError("d^t: need d >= 2 and t >= 1");
  std::uint64_t result = 1;
  for (int i = 0; i < t; ++i) {
    if (result > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(d)) {
      throw DomainError("d^t exceeds 2^62");
    }
    result *= static_cast<std::uint64_t>(d);
  }
  return result;
}

double qpea_kernel(std::uint64_t m, double phi, std::uint64_t outcomes) {
  if (outcomes == 0) throw DomainError("qpea_kernel: no outcomes");
  if (m >= outcomes) throw DomainError("qpea_kernel: outcome index out of range");
  const double size = static_cast<double>(outcomes);
  double delta = phi - static_cast<double>(m) / size;
  delta -= std::nearbyint(delta);
  const double x = kPi * delta;
#ifndef QMI_MUTATION_NO_PEAK_LIMIT
  if (std::abs(size * x) < 1e-4) {
    // sin(Mx)/(M sin x) = 1 - (M^2-1) x^2 / 6 + O(M^4 x^4)
    return 1.0 - (size * size - 1.0) * x * x / 3.0;
  }
#endif
  const double s = std::sin(x);
  return sin2_pi(size * delta) / (size * size * s * s);
}

double qpea_prob(std::uint64_t m, double phi, std::uint64_t n) {
  if (n < 1) throw DomainError("qpea_prob: N must be >= 1");
  if (m > n) throw DomainError("qpea_prob: outcome must be in [0, N]");
  return qpea_kernel(m, phi, n + 1);
}

double qpea_ddim_prob(std::uint64_t m, double phi, int d, int t) {
  const std::uint64_t outcomes = checked_power(d, t);
  if (m >= outcomes) throw DomainError("qpea_ddim_prob: outcome must be in [0, d^t)");
  return qpea_kernel(m, phi, outcomes);
}

namespace {

constexpr std::uint64_t kMaxChannelOutcomes = std::uint64_t{1} << 24;

DiscreteChannel kernel_channel(ProbeSpec spec, std::uint64_t outcomes) {
  if (outcomes > kMaxChannelOutcomes) throw DomainError("QPEA channel: too many outcomes");
  DiscreteChannel ch;
  ch.spec = std::move(spec);
  ch.outcome_count = outcomes;
  ch.prob = [outcomes](std::size_t m, double phi) { return qpea_kernel(m, phi, outcomes); };
  ch.singular_grid.reserve(outcomes - 1);
  for (std::uint64_t k = 1; k < outcomes; ++k) {
    ch.singular_grid.push_back(static_cast<double>(k) / static_cast<double>(outcomes));
  }
  return ch;
}

}  // namespace

DiscreteChannel qpea_channel(std::uint64_t n) {
  if (n < 1) throw DomainError("qpea_channel: N must be >= 1");
  return kernel_channel(ProbeSpec::qpea(n), n + 1);
}

DiscreteChannel qpea_ddim_channel(int d, int t) {
  ProbeSpec spec = ProbeSpec::qpea_ddim(d, t);
  const std::uint64_t outcomes = spec.n + 1;
  return kernel_channel(std::move(spec), outcomes);
}

// --- separable probes, optimal covariant POVM ---------------------------

SeparableOptimalDensity::SeparableOptimalDensity(std::uint64_t n, DensityMode mode)
    : n_(n), mode_(mode) {
  if (n < 1) throw DomainError("sep_optimal_density: N must be >= 1");
  if (mode != DensityMode::Exact) return;
  // Amplitudes sqrt(C(N,n)/2^N) ordered outward from the centre; the sum is
  // symmetric under n -> N-n so only one half is kept. Terms below 1e-20 of
  // the central amplitude cannot affect F at double precision.
  const double log_norm = static_cast<double>(n) * std::numbers::ln2;
  const std::uint64_t start = n / 2;
  double peak = 0.0;
  for (std::uint64_t i = 0;; ++i) {
    const std::uint64_t idx = start - i;
    const double a = std::exp(0.5 * (log_binomial(n, idx) - log_norm));
    if (i == 0) peak = a;
    if (a < 1e-20 * peak) break;
    amplitudes_.push_back(a);
    if (idx == 0) break;
  }
}

double SeparableOptimalDensity::operator()(double theta) const {
  const double nd = static_cast<double>(n_);
  if (mode_ == DensityMode::Gaussian) {
    double signed_dist = wrap_unit(theta);
    signed_dist -= std::nearbyint(signed_dist);
    return std::sqrt(2.0 * kPi * nd) *
           std::exp(-2.0 * kPi * kPi * signed_dist * signed_dist * nd);
  }
  // sum_n a_n e^{i x (n - N/2)} is real: pair n with N - n.
  const double x = 2.0 * kPi * wrap_unit(theta);
  const bool even = n_ % 2 == 0;
  double sum = 0.0;
  std::size_t i = 0;
  if (even) {
    sum = amplitudes_[0];
    i = 1;
  }
  // Offset from the centre of the i-th stored amplitude: i for even N,
  // i + 1/2 for odd N.
  const double offset0 = even ? 0.0 : 0.5;
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> z;
  for (; i < amplitudes_.size(); ++i) {
    if ((i & 255U) == 0 || i == (even ? 1U : 0U)) {
      z = std::polar(1.0, x * (static_cast<double>(i) + offset0));
    }
    sum += 2.0 * amplitudes_[i] * z.real();
    z *= step;
  }
  return sum * sum;
}

double sep_optimal_density(double theta, std::uint64_t n, DensityMode mode) {
  return SeparableOptimalDensity(n, mode)(theta);
}

CovariantDensity sep_optimal_covariant(std::uint64_t n, DensityMode mode) {
  CovariantDensity cd;
  cd.spec = ProbeSpec::sep_optimal(n);
  SeparableOptimalDensity density(n, mode);
  cd.density = [density = std::move(density)](double theta) { return density(theta); };
  cd.peak_width = 1.0 / (2.0 * kPi * std::sqrt(static_cast<double>(n)));
  cd.approximate = mode == DensityMode::Gaussian;
  return cd;
}

// --- separable probes, product +/- measurement --------------------------

double hamming_weight_prob(std::uint64_t k, double phi, std::uint64_t n) {
  if (k > n) throw DomainError("hamming_weight_prob: weight exceeds N");
  const double s2 = sin2_pi(phi);
  const double c2 = cos2_pi(phi);
  if (s2 == 0.0) return k == 0 ? 1.0 : 0.0;
  if (c2 == 0.0) return k == n ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  const double rest = static_cast<double>(n - k);
  return std::exp(log_binomial(n, k) + kd * std::log(s2) + rest * std::log(c2));
}

HammingChannel::HammingChannel(std::uint64_t n) : n_(n) {
  if (n < 1) throw DomainError("HammingChannel: N must be >= 1");
  log_binom_.reserve(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) log_binom_.push_back(log_binomial(n, k));
}

double HammingChannel::weight_prob(std::uint64_t k, double phi) const {
  if (k > n_) throw DomainError("HammingChannel: weight exceeds N");
  const double s2 = sin2_pi(phi);
  const double c2 = cos2_pi(phi);
  if (s2 == 0.0) return k == 0 ? 1.0 : 0.0;
  if (c2 == 0.0) return k == n_ ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  const double rest = static_cast<double>(n_ - k);
  return std::exp(log_binom_[k] + kd * std::log(s2) + rest * std::log(c2));
}

double HammingChannel::string_prob(std::uint64_t k, double phi) const {
  if (k > n_) throw DomainError("HammingChannel: weight exceeds N");
  return std::exp(-log_binom_[k]) * weight_prob(k, phi);
}

double HammingChannel::marginal_weight(std::uint64_t k) const {
  if (k > n_) throw DomainError("HammingChannel: weight exceeds N");
  const double log_w = log_binomial(2 * k, k) + log_binomial(2 * (n_ - k), n_ - k) -
                       static_cast<double>(n_) * std::log(4.0);
  return std::exp(log_w);
}

double HammingChannel::string_marginal(std::uint64_t k) const {
  return marginal_weight(k) * std::exp(-log_binom_[k]);
}

DiscreteChannel HammingChannel::as_discrete() const {
  DiscreteChannel ch;
  ch.spec = ProbeSpec::sep_hamming(n_);
  ch.outcome_count = n_ + 1;
  ch.prob = [self = *this](std::size_t k, double phi) { return self.weight_prob(k, phi); };
  // Weight k peaks where sin^2(pi phi) = k/N.
  const double nd = static_cast<double>(n_);
  for (std::uint64_t k = 1; k < n_; ++k) {
    const double peak = std::asin(std::sqrt(static_cast<double>(k) / nd)) / kPi;
    ch.singular_grid.push_back(peak);
    ch.singular_grid.push_back(1.0 - peak);
  }
  ch.singular_grid.push_back(0.5);
  std::sort(ch.singular_grid.begin(), ch.singular_grid.end());
  ch.singular_grid.erase(std::unique(ch.singular_grid.begin(), ch.singular_grid.end()),
                         ch.singular_grid.end());
  return ch;
}

// --- QPEA groups read out with single-qubit +/- projections -------------

double sep_detection_group_prob(Parity parity, double phi, int j) {
  if (j < 0 || j > 62) throw DomainError("sep_detection_group_prob: group index in [0,62]");
  const double scaled = wrap_unit(std::ldexp(wrap_unit(phi), j));
  return parity == Parity::Even ? cos2_pi(scaled) : sin2_pi(scaled);
}

double sep_detection_string_prob(Parity parity, double phi, int j) {
  if (j < 0 || j > 10) throw DomainError("sep_detection_string_prob: group index in [0,10]");
  const int strings_per_parity = (1 << j) - 1;  // log2 of 2^(2^j - 1)
  return std::ldexp(sep_detection_group_prob(parity, phi, j), -strings_per_parity);
}

DiscreteChannel sep_detection_channel(int j) {
  if (j < 0 || j > 20) throw DomainError("sep_detection_channel: group index in [0,20]");
  DiscreteChannel ch;
  ch.spec = ProbeSpec::sep_detection(j + 1);
  ch.spec.label = "sep-detection-group";
  ch.outcome_count = 2;
  ch.prob = [j](std::size_t m, double phi) {
    if (m > 1) throw DomainError("sep_detection_channel: outcome is 0 (even) or 1 (odd)");
    return sep_detection_group_prob(m == 0 ? Parity::Even : Parity::Odd, phi, j);
  };
  const std::uint64_t cells = std::uint64_t{2} << j;
  for (std::uint64_t k = 1; k < cells; ++k) {
    ch.singular_grid.push_back(static_cast<double>(k) / static_cast<double>(cells));
  }
  return ch;
}

// --- two-level subspace ------------------------------------------------------

double two_level_density(double theta, int d) {
  if (d < 2) throw DomainError("two_level_density: d must be >= 2");
  return 2.0 * cos2_pi(wrap_unit(theta) * static_cast<double>(d - 1));
}

CovariantDensity two_level_covariant(int d) {
  if (d < 2) throw DomainError("two_level_covariant: d must be >= 2");
  CovariantDensity cd;
  cd.spec = ProbeSpec::two_level(d);
  cd.density = [d](double theta) { return two_level_density(theta, d); };
  const double cells = 2.0 * static_cast<double>(d - 1);
  cd.peak_width = 1.0 / cells;
  for (int k = 1; k < 2 * (d - 1); ++k) cd.nodes.push_back(k / cells);
  return cd;
}

CovariantDensity uniform_covariant() {
  CovariantDensity cd;
  cd.spec.label = "uniform";
  cd.density = [](double) { return 1.0; };
  cd.peak_width = 1.0;
  return cd;
}

}  // namespace qmi
