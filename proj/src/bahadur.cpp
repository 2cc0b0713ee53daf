#include "powdiv/bahadur.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "powdiv/divergence.hpp"
#include "powdiv/projection.hpp"

namespace powdiv {

namespace {

constexpr double kUnitWindow = Order::kUnitWindow;

bool near(double a, double b) { return std::abs(a - b) < kUnitWindow; }

}  // namespace

BahadurContext::BahadurContext(double alpha_, double delta_, std::int64_t n_, std::int64_t k_)
    : alpha(alpha_), delta(delta_), n(n_), k(k_) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("BahadurContext: alpha must be > 0");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("BahadurContext: delta must be > 0");
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("BahadurContext: need 1 <= k <= n");
  }
}

double bahadur_function(double alpha, double delta) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("bahadur_function: alpha must be > 0");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("bahadur_function: delta must be > 0");
  }
  if (near(alpha, 1.0)) {
    return delta;
  }
  if (alpha < 1.0) {
    const double arg = alpha * (alpha - 1.0) * delta;
    if (arg <= -1.0) {
      throw std::domain_error("bahadur_function: 1 + a(a-1)delta must be positive");
    }
    return std::log1p(arg) / (alpha - 1.0);
  }
  return std::pow(alpha * (alpha - 1.0) * delta, 1.0 / alpha);
}

double generating_sequence(double alpha, std::int64_t /*n*/, std::int64_t k,
                           bool alpha_prefactor) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("generating_sequence: alpha must be > 0");
  }
  if (alpha <= 1.0 + kUnitWindow) {
    return 1.0;
  }
  if (k < 2) {
    throw std::domain_error("generating_sequence: k must be >= 2 for orders > 1");
  }
  const double kk = static_cast<double>(k);
  double c = std::pow(kk, (alpha - 1.0) / alpha) / std::log(kk);
  if (alpha_prefactor) {
    c *= alpha;
  }
  return c;
}

double empirical_slope(const BahadurContext& ctx, const TailEstimate& tail) {
  if (tail.value <= 0.0) {
    throw std::domain_error(
        "empirical_slope: tail underflow: increase n budget or use exact method");
  }
  const double c = generating_sequence(ctx.alpha, ctx.n, ctx.k);
  return -(c / static_cast<double>(ctx.n)) * std::log(tail.value) + 0.0;  // -0 -> +0
}

std::pair<double, double> sanov_sandwich(const ProbVec& q_null, Order order, double delta,
                                         std::int64_t n) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("sanov_sandwich: delta must be > 0");
  }
  if (n < 1) {
    throw std::invalid_argument("sanov_sandwich: n must be >= 1");
  }
  // The tail event constrains the power divergence; the inner projection
  // works at the equivalent Renyi level.
  const double renyi_level =
      renyi_from_power(DivergenceValue{delta, order, DivergenceKind::power}).value;
  const ProjectionResult pr = numeric_projection(q_null, order, renyi_level);
  if (!pr.converged) {
    throw std::runtime_error("sanov_sandwich: inner projection did not converge");
  }
  const double correction = static_cast<double>(q_null.k() - 1) *
                            std::log(static_cast<double>(n) + 1.0) / static_cast<double>(n);
  return {pr.kl_value - correction, pr.kl_value};
}

ExtReal bahadur_efficiency(double alpha1, double delta1, double alpha2, double delta2,
                           const ExtReal& c_limit) {
  const double ratio = bahadur_function(alpha1, delta1) / bahadur_function(alpha2, delta2);
  switch (c_limit.kind) {
    case ExtReal::Kind::indeterminate:
      return ExtReal::indeterminate();
    case ExtReal::Kind::infinite:
      return ratio > 0.0 ? ExtReal::infinity() : ExtReal::indeterminate();
    case ExtReal::Kind::finite:
      if (c_limit.value < 0.0) {
        throw std::invalid_argument("bahadur_efficiency: c_limit must be >= 0");
      }
      if (c_limit.value == 0.0 && std::isinf(ratio)) {
        return ExtReal::indeterminate();
      }
      return ExtReal::finite(ratio * c_limit.value);
  }
  return ExtReal::indeterminate();
}

double efficiency_ratio_closed_form(double alpha1, double delta1, double alpha2,
                                    double delta2) {
  if (!(alpha1 > 0.0) || !(alpha1 < alpha2) || alpha2 > 1.0 + kUnitWindow) {
    throw std::invalid_argument(
        "efficiency_ratio_closed_form: requires 0 < alpha1 < alpha2 <= 1");
  }
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) {
    throw std::invalid_argument("efficiency_ratio_closed_form: deltas must be > 0");
  }
  const double num = std::log1p(alpha1 * (alpha1 - 1.0) * delta1);
  if (near(alpha2, 1.0)) {
    return num / ((alpha1 - 1.0) * delta2);
  }
  return (alpha2 - 1.0) / (alpha1 - 1.0) * num /
         std::log1p(alpha2 * (alpha2 - 1.0) * delta2);
}

std::int64_t matching_sample_size(double alpha1, double delta1, double alpha2, double delta2,
                                  std::int64_t n,
                                  const std::function<std::int64_t(std::int64_t)>& k_rule,
                                  bool alpha_prefactor, std::int64_t cap) {
  if (n < 1) {
    throw std::invalid_argument("matching_sample_size: n must be >= 1");
  }
  const double gamma = bahadur_function(alpha1, delta1) / bahadur_function(alpha2, delta2);
  const double target = gamma * static_cast<double>(n) /
                        generating_sequence(alpha1, n, k_rule(n), alpha_prefactor);
  auto rate = [&](std::int64_t m) {
    return static_cast<double>(m) / generating_sequence(alpha2, m, k_rule(m), alpha_prefactor);
  };

  std::int64_t lo = 1;
  std::int64_t hi = 1;
  while (rate(hi) < target) {
    lo = hi;
    if (hi > cap / 2) {
      std::ostringstream msg;
      msg << "matching_sample_size: no solution found below cap " << cap;
      throw CapacityError(msg.str());
    }
    hi *= 2;
  }
  // Bisect on the eventually increasing map, then nudge down past any flat or
  // jagged stretch left by integer k-rules.
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (rate(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  std::int64_t m = rate(hi) >= target ? hi : hi + 1;
  for (int i = 0; i < 64 && m > 1 && rate(m - 1) >= target; ++i) {
    --m;
  }
  return m;
}

double SequenceSpec::eval(double n, const std::function<double(double)>& k_of_n) const {
  switch (form) {
    case SequenceForm::power_of_n_plain:
    case SequenceForm::power_of_n_over_log:
      if (!(b > 0.0) || !(b < 1.0)) {
        throw std::invalid_argument("SequenceSpec: exponent b must lie in (0, 1)");
      }
      break;
    case SequenceForm::power_of_k_over_log:
      if (!(b > 0.0)) {
        throw std::invalid_argument("SequenceSpec: exponent b must be > 0");
      }
      break;
    case SequenceForm::constant_one:
      break;
  }
  if (!(d > 0.0)) {
    throw std::invalid_argument("SequenceSpec: scale d must be > 0");
  }
  switch (form) {
    case SequenceForm::constant_one:
      return 1.0;
    case SequenceForm::power_of_n_plain:
      return d * std::pow(n, b);
    case SequenceForm::power_of_n_over_log:
      return alpha * std::pow(n, b) / std::log(n);
    case SequenceForm::power_of_k_over_log: {
      const double k = k_of_n ? k_of_n(n) : n;
      return alpha * std::pow(k, b) / std::log(k);
    }
  }
  throw std::invalid_argument("SequenceSpec: unknown form");
}

std::vector<double> ratio_limit_probe(const SequenceSpec& spec1, const SequenceSpec& spec2,
                                      std::pair<double, double> deltas,
                                      const std::vector<std::int64_t>& n_grid,
                                      const std::function<double(double)>& k_of_n) {
  std::vector<double> out;
  if (n_grid.empty()) {
    return out;
  }
  const double gamma = bahadur_function(spec1.alpha, deltas.first) /
                       bahadur_function(spec2.alpha, deltas.second);
  out.reserve(n_grid.size());
  for (const std::int64_t n : n_grid) {
    const double nn = static_cast<double>(n);
    const double target = gamma * nn / spec1.eval(nn, k_of_n);
    // m / c2(m) is increasing for every supported form; bracket and bisect
    // in the reals.
    auto rate = [&](double m) { return m / spec2.eval(m, k_of_n); };
    double hi = 2.0;
    while (rate(hi) < target && hi < 1e300) {
      hi *= 2.0;
    }
    double lo = hi / 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (rate(mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double m = 0.5 * (lo + hi);
    out.push_back(spec2.eval(m, k_of_n) / spec1.eval(nn, k_of_n));
  }
  return out;
}

namespace {

ConditionFlag to_inf_flag(double value, double threshold) {
  return value >= 1.0 / threshold ? ConditionFlag::satisfied : ConditionFlag::violated;
}

ConditionFlag to_zero_flag(double value, double threshold) {
  return value <= threshold ? ConditionFlag::satisfied : ConditionFlag::violated;
}

}  // namespace

RateConditionReport check_rate_conditions(std::int64_t n, std::int64_t k, double alpha,
                                          double threshold) {
  if (n < 1 || k < 1) {
    throw std::invalid_argument("check_rate_conditions: need n, k >= 1");
  }
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double logn = std::log(nn);
  const double logk = std::log(kk);

  RateConditionReport rep;
  rep.n_over_k = nn / kk;
  rep.n_over_k_log_k = logk > 0.0 ? nn / (kk * logk) : std::numeric_limits<double>::infinity();
  rep.k_log_n_over_n = kk * logn / nn;
  rep.k_heavy_log_n_over_n = std::pow(kk, 2.0 - 1.0 / alpha) * logn / nn;
  rep.k_bpow_log_n_over_n = std::pow(kk, (alpha - 1.0) / alpha + 1.0) * logn / nn;

  rep.mean_bin_ok = to_inf_flag(rep.n_over_k, threshold);
  rep.cells_rate_ok = to_zero_flag(rep.k_log_n_over_n, threshold);
  rep.log_bin_ok = alpha > 2.0 ? to_inf_flag(rep.n_over_k_log_k, threshold)
                               : ConditionFlag::not_applicable;
  rep.heavy_rate_ok = alpha > 1.0 + kUnitWindow
                          ? to_zero_flag(rep.k_heavy_log_n_over_n, threshold)
                          : ConditionFlag::not_applicable;
  rep.bpow_rate_ok = alpha > 1.0 + kUnitWindow
                         ? to_zero_flag(rep.k_bpow_log_n_over_n, threshold)
                         : ConditionFlag::not_applicable;
  return rep;
}

std::string to_string(ConditionFlag flag) {
  switch (flag) {
    case ConditionFlag::satisfied:
      return "satisfied";
    case ConditionFlag::violated:
      return "violated";
    case ConditionFlag::not_applicable:
      return "na";
  }
  return "na";
}

}  // namespace powdiv
