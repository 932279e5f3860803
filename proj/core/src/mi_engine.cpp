#include "qmi/mi_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmi/errors.hpp"

namespace qmi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxNaiveOutcomes = std::size_t{1} << 16;

// Union of sorted node lists, dropping near-coincident points.
std::vector<double> merge_nodes(std::vector<double> nodes, double lo, double hi) {
  std::erase_if(nodes, [&](double x) { return !(x > lo && x < hi); });
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double x : nodes) {
    if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
  }
  return out;
}

QuadratureSpec with_nodes(const QuadratureSpec& q, std::vector<double> extra) {
  QuadratureSpec spec = q;
  extra.insert(extra.end(), q.forced_nodes.begin(), q.forced_nodes.end());
  spec.forced_nodes = merge_nodes(std::move(extra), 0.0, 1.0);
  return spec;
}

}  // namespace

std::string_view method_name(MiMethod method) {
  switch (method) {
    case MiMethod::QuadReduced: return "quad-reduced";
    case MiMethod::QuadNaive: return "quad-naive";
    case MiMethod::MonteCarlo: return "mc";
    case MiMethod::ClosedForm: return "closed-form";
    case MiMethod::GaussianApprox: return "gaussian-approx";
  }
  return "unknown";
}

MiEstimate mi_discrete_naive(const DiscreteChannel& channel, const QuadratureSpec& q) {
  const std::size_t outcomes = channel.outcome_count;
  if (outcomes == 0 || !channel.prob) throw DomainError("mi_discrete_naive: empty channel");
  if (outcomes > kMaxNaiveOutcomes) throw DomainError("mi_discrete_naive: more than 2^16 outcomes");
  const QuadratureSpec spec = with_nodes(q, channel.singular_grid);

  const Integral conditional = integrate_adaptive(
      [&](double phi) {
        double acc = 0.0;
        for (std::size_t m = 0; m < outcomes; ++m) acc += plogp(channel.prob(m, phi));
        return acc;
      },
      spec);

  double marginal_entropy_term = 0.0;
  double err = conditional.err;
  for (std::size_t m = 0; m < outcomes; ++m) {
    const Integral pm =
        integrate_adaptive([&](double phi) { return channel.prob(m, phi); }, spec);
    marginal_entropy_term += plogp(pm.value);
    // d(p log2 p)/dp = log2 p + 1/ln2
    if (pm.value > 0.0) err += std::abs(std::log2(pm.value) + std::numbers::log2e) * pm.err;
  }
  return MiEstimate{conditional.value - marginal_entropy_term, err, MiMethod::QuadNaive,
                    channel.spec, std::nullopt};
}

Integral qpea_reduced_kernel(std::uint64_t outcomes, const QuadratureSpec& q) {
  if (outcomes < 2) throw DomainError("qpea_reduced_kernel: need at least two outcomes");
  if (outcomes > (std::uint64_t{1} << 24)) throw DomainError("qpea_reduced_kernel: too many outcomes");
  const double size = static_cast<double>(outcomes);
  // Even in phi about 1/2: integrate [0, 1/2] and double. Nodes sit on the
  // zeros k/M of the numerator, relative to the half interval.
  std::vector<double> nodes;
  nodes.reserve(outcomes / 2);
  for (std::uint64_t k = 1; 2 * k < outcomes; ++k) nodes.push_back(2.0 * static_cast<double>(k) / size);
  const QuadratureSpec spec = with_nodes(q, std::move(nodes));

  auto integrand = [size](double phi) {
    const double s = std::sin(kPi * phi);
    const double s2 = s * s;
    double r = size * phi;
    r -= std::nearbyint(r);
    const double num = std::sin(kPi * r);
    return num * num / s2 * std::log2(size * size * s2);
  };
  const Integral half = integrate_adaptive(integrand, 0.0, 0.5, spec);
  return Integral{2.0 * half.value / size, 2.0 * half.err / size};
}

MiEstimate mi_qpea_reduced(std::uint64_t n, const QuadratureSpec& q) {
  if (n < 1) throw DomainError("mi_qpea_reduced: N must be >= 1");
  const Integral kernel = qpea_reduced_kernel(n + 1, q);
  const double bits = std::log2(static_cast<double>(n + 1)) - 2.0 - kernel.value;
  return MiEstimate{bits, kernel.err, MiMethod::QuadReduced, ProbeSpec::qpea(n), std::nullopt};
}

MiEstimate mi_qpea_ddim(int d, int t, const QuadratureSpec& q) {
  ProbeSpec spec = ProbeSpec::qpea_ddim(d, t);
  if (spec.n + 1 > (std::uint64_t{1} << 20)) throw DomainError("mi_qpea_ddim: d^t exceeds 2^20");
  const Integral kernel = qpea_reduced_kernel(spec.n + 1, q);
  const double bits = static_cast<double>(t) * std::log2(static_cast<double>(d)) - 2.0 - kernel.value;
  if (t == 1) spec.kind = StrategyKind::PeggBarnett;
  return MiEstimate{bits, kernel.err, MiMethod::QuadReduced, std::move(spec), std::nullopt};
}

MiEstimate mi_covariant(const CovariantDensity& density, const QuadratureSpec& q) {
  if (!density.density) throw DomainError("mi_covariant: empty density");
  if (!(density.peak_width > 0.0)) throw DomainError("mi_covariant: peak_width must be > 0");
  const double hi = density.reflection_symmetric ? 0.5 : 1.0;

  // Relative node positions within [0, hi].
  std::vector<double> nodes;
  for (int k = 1; k <= 12; ++k) {
    const double theta = k * density.peak_width;
    if (theta >= hi) break;
    nodes.push_back(theta);
    if (!density.reflection_symmetric) nodes.push_back(1.0 - theta);
  }
  for (double x : density.nodes) nodes.push_back(x);
  for (double& x : nodes) x /= hi;
  QuadratureSpec spec = q;
  spec.forced_nodes.clear();
  for (double x : q.forced_nodes) nodes.push_back(x);
  spec.forced_nodes = merge_nodes(std::move(nodes), 0.0, 1.0);

  const auto& f = density.density;
  const Integral part = integrate_adaptive([&](double theta) { return plogp(f(theta)); }, 0.0, hi, spec);
  const double scale = density.reflection_symmetric ? 2.0 : 1.0;
  return MiEstimate{scale * part.value, scale * part.err,
                    density.approximate ? MiMethod::GaussianApprox : MiMethod::QuadReduced,
                    density.spec, std::nullopt};
}

MiEstimate mi_covariant_mc(const CovariantDensity& density, const McSpec& mc) {
  if (!density.density) throw DomainError("mi_covariant_mc: empty density");
  const auto& f = density.density;
  const Integral est = integrate_mc([&](double theta) { return plogp(f(theta)); }, mc);
  return MiEstimate{est.value, est.err, MiMethod::MonteCarlo, density.spec, mc.seed};
}

MiEstimate mi_hamming_closed(std::uint64_t n) {
  if (n < 1) throw DomainError("mi_hamming_closed: N must be >= 1");
  if (n > 100'000) throw DomainError("mi_hamming_closed: N must be <= 1e5");
  const double nd = static_cast<double>(n);
  const double log_n_fact = log_factorial(nd);
  const double ln4n = nd * std::log(4.0);
  double weight_sum = 0.0;
  double term_sum = 0.0;
  double comp = 0.0;  // Kahan compensation for term_sum
  double max_abs_term = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double rd = nd - kd;
    const double lf_k = log_factorial(kd);
    const double lf_r = log_factorial(rd);
    const double lf_2k = log_factorial(2.0 * kd);
    const double lf_2r = log_factorial(2.0 * rd);
    const double weight = std::exp(lf_2k + lf_2r - 2.0 * (lf_k + lf_r) - ln4n);
    const double log_ratio = (lf_r + lf_k + log_n_fact - lf_2r - lf_2k) * std::numbers::log2e;
    weight_sum += weight;
    const double y = weight * log_ratio - comp;
    const double tsum = term_sum + y;
    comp = (tsum - term_sum) - y;
    term_sum = tsum;
    max_abs_term = std::max(max_abs_term, std::abs(log_ratio));
  }
  const double bits = nd * std::numbers::log2e + term_sum;
  // Weights sum to one exactly; their deviation bounds the accumulated
  // log-gamma error in the weighted sum.
  const double err = std::abs(weight_sum - 1.0) * max_abs_term +
                     64.0 * std::numeric_limits<double>::epsilon() * nd * std::numbers::log2e;
  return MiEstimate{bits, err, MiMethod::ClosedForm, ProbeSpec::sep_hamming(n), std::nullopt};
}

double hamming_sql_offset(std::uint64_t n) {
  return mi_hamming_closed(n).bits - 0.5 * std::log2(static_cast<double>(n));
}

MiEstimate sep_detection_group_mi(int j, const QuadratureSpec& q) {
  return mi_discrete_naive(sep_detection_channel(j), q);
}

MiEstimate mi_sep_detection_qpea(int t, const QuadratureSpec& q) {
  ProbeSpec spec = ProbeSpec::sep_detection(t);
  const double per_group = analytic_constants().c_probe;
  double deviation = 0.0;
  for (int j = 0; j < std::min(t, kSepDetectionCheckedGroups); ++j) {
    const MiEstimate group = sep_detection_group_mi(j, q);
    deviation = std::max(deviation, std::abs(group.bits - per_group) + group.err);
  }
  return MiEstimate{static_cast<double>(t) * per_group, static_cast<double>(t) * deviation,
                    MiMethod::ClosedForm, std::move(spec), std::nullopt};
}

MiEstimate mi_two_level(int d, const QuadratureSpec& q) {
  return mi_covariant(two_level_covariant(d), q);
}

}  // namespace qmi
