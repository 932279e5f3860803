#include "qmi/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <math.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qmi/errors.hpp"
#include "qmi/rng.hpp"

namespace qmi {

namespace {

using Kronrod21 = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss10 = boost::math::quadrature::gauss<double, 10>;

// Hard ceiling on live panels; hitting it means the integrand is not what the
// caller promised.
constexpr std::size_t kMaxPanels = std::size_t{1} << 23;

struct Panel {
  double a;
  double b;
  double value;
  double err;
  int depth;
};

struct ByError {
  bool operator()(const Panel& lhs, const Panel& rhs) const { return lhs.err < rhs.err; }
};

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double checked_eval(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integrand is not finite (" << y << ") at x = " << x;
    throw QuadratureError(QuadratureError::Kind::NonFiniteIntegrand, msg.str(),
                          std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::infinity(), x);
  }
  return y;
}

// 21-point Gauss-Kronrod on [a,b] with the QUADPACK error heuristic.
Panel gk21(const Integrand& f, double a, double b, int depth) {
  const auto& xk = Kronrod21::abscissa();
  const auto& wk = Kronrod21::weights();
  const auto& wg = Gauss10::weights();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 21> fv{};
  fv[0] = checked_eval(f, center);
  double resk = wk[0] * fv[0];
  double resg = 0.0;
  double resabs = wk[0] * std::abs(fv[0]);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const double f1 = checked_eval(f, center - dx);
    const double f2 = checked_eval(f, center + dx);
    fv[2 * i - 1] = f1;
    fv[2 * i] = f2;
    resk += wk[i] * (f1 + f2);
    resabs += wk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) resg += wg[i / 2] * (f1 + f2);
  }

  const double mean = 0.5 * resk;
  double resasc = wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  }

  const double scale = std::abs(half);
  resabs *= scale;
  resasc *= scale;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return Panel{a, b, resk * half, err, depth};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("QuadratureSpec: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw ConfigError("QuadratureSpec: abs_tol must be > 0");
  if (max_depth < 1) throw ConfigError("QuadratureSpec: max_depth must be >= 1");
  for (std::size_t i = 0; i < forced_nodes.size(); ++i) {
    const double x = forced_nodes[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw ConfigError("QuadratureSpec: forced node outside [0,1]");
    }
    if (i > 0 && !(forced_nodes[i - 1] < x)) {
      throw ConfigError("QuadratureSpec: forced nodes must be strictly increasing");
    }
  }
}

void McSpec::validate() const {
  if (samples < 2) throw ConfigError("McSpec: samples must be >= 2");
  if (batch < 1) throw ConfigError("McSpec: batch must be >= 1");
}

Integral integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("integrate_adaptive: need finite a < b");
  }

  std::vector<double> breaks;
  breaks.reserve(spec.forced_nodes.size() + 2);
  breaks.push_back(a);
  for (double node : spec.forced_nodes) {
    const double x = a + node * (b - a);
    if (x > breaks.back() && x < b) breaks.push_back(x);
  }
  breaks.push_back(b);

  std::vector<Panel> initial;
  initial.reserve(breaks.size() - 1);
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    initial.push_back(gk21(f, breaks[i], breaks[i + 1], 0));
    total += initial.back().value;
    total_err += initial.back().err;
  }
  std::vector<Panel> active = std::move(initial);
  std::make_heap(active.begin(), active.end(), ByError{});
  std::vector<Panel> saturated;

  auto tolerance = [&](double value) { return std::max(spec.abs_tol, spec.rel_tol * std::abs(value)); };
  auto resum = [&] {
    CompensatedSum v;
    CompensatedSum e;
    for (const Panel& p : active) {
      v.add(p.value);
      e.add(p.err);
    }
    for (const Panel& p : saturated) {
      v.add(p.value);
      e.add(p.err);
    }
    return Integral{v.value(), e.value()};
  };

  std::size_t refinements = 0;
  while (total_err > tolerance(total)) {
    if (active.empty() || active.size() + saturated.size() >= kMaxPanels) {
      const Integral best = resum();
      std::ostringstream msg;
      msg.precision(6);
      msg << "integrate_adaptive: no convergence on [" << a << ", " << b
          << "], error estimate " << best.err << " exceeds tolerance " << tolerance(best.value);
      throw QuadratureError(QuadratureError::Kind::NonConvergence, msg.str(), best.value,
                            best.err, std::numeric_limits<double>::quiet_NaN());
    }
    std::pop_heap(active.begin(), active.end(), ByError{});
    const Panel worst = active.back();
    active.pop_back();
    if (worst.depth >= spec.max_depth) {
      saturated.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk21(f, worst.a, mid, worst.depth + 1);
    const Panel right = gk21(f, mid, worst.b, worst.depth + 1);
    total += (left.value + right.value) - worst.value;
    total_err += (left.err + right.err) - worst.err;
    active.push_back(left);
    std::push_heap(active.begin(), active.end(), ByError{});
    active.push_back(right);
    std::push_heap(active.begin(), active.end(), ByError{});
    // The running sums drift after many updates; refresh them now and then.
    if (++refinements % 4096 == 0) {
      const Integral fresh = resum();
      total = fresh.value;
      total_err = fresh.err;
    }
  }
  return resum();
}

Integral integrate_mc(const Integrand& f, const McSpec& spec) {
  spec.validate();
  // Chan et al. pairwise merge of per-batch (count, mean, M2).
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  const std::uint64_t batches = (spec.samples + spec.batch - 1) / spec.batch;
  for (std::uint64_t b = 0; b < batches; ++b) {
    const std::uint64_t n = std::min(spec.batch, spec.samples - b * spec.batch);
    UniformStream stream(derive_stream_seed(spec.seed, b));
    double bmean = 0.0;
    double bm2 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = stream.next();
      const double y = f(x);
      if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "integrate_mc: integrand is not finite at x = " << x;
        throw QuadratureError(QuadratureError::Kind::NonFiniteIntegrand, msg.str(),
                              std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::infinity(), x);
      }
      const double delta = y - bmean;
      bmean += delta / static_cast<double>(i + 1);
      bm2 += delta * (y - bmean);
    }
    const double nb = static_cast<double>(n);
    const double merged = count + nb;
    const double delta = bmean - mean;
    mean += delta * nb / merged;
    m2 += bm2 + delta * delta * count * nb / merged;
    count = merged;
  }
  const double variance = m2 / (count - 1.0);
  return Integral{mean, std::sqrt(variance / count)};
}

double log_factorial(double n) {
  if (!(n >= 0.0)) throw DomainError("log_factorial: negative argument");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(n + 1.0, &sign);
#else
  return std::lgamma(n + 1.0);
#endif
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw DomainError("log_binomial: k > n");
  k = std::min(k, n - k);
  if (n <= 62) {
    // C(62,31) < 2^63; the running product stays exact.
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::log(static_cast<double>(c));
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return log_factorial(nd) - log_factorial(kd) - log_factorial(nd - kd);
}

double shannon_entropy_bits(std::span<const double> weights) {
  CompensatedSum total;
  CompensatedSum h;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("shannon_entropy_bits: negative or NaN weight");
    total.add(w);
    h.add(-plogp(w));
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw DomainError("shannon_entropy_bits: weights do not sum to 1");
  }
  return h.value();
}

const AnalyticConstants& analytic_constants() {
  static const AnalyticConstants constants = [] {
    constexpr double gamma = std::numbers::egamma;
    constexpr double ln2 = std::numbers::ln2;
    AnalyticConstants c{};
    c.euler_gamma = gamma;
    c.c_qpea = -2.0 + 2.0 * (gamma + ln2 - 1.0) / ln2;
    c.c_sql_ent = 0.5 * std::log2(2.0 * std::numbers::pi / std::numbers::e);
    c.c_probe = std::numbers::log2e - 1.0;
    c.c_sep_sep = -0.395;
    c.c_sep_sep_uncertainty = 0.005;
    return c;
  }();
  return constants;
}

}  // namespace qmi
