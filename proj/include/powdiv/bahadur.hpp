#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "powdiv/tail.hpp"
#include "powdiv/types.hpp"

namespace powdiv {

/// Parameters of a slope computation: order, divergence level, sample size
/// and cell count (1 <= k <= n required).
struct BahadurContext {
  BahadurContext(double alpha_, double delta_, std::int64_t n_, std::int64_t k_);
  double alpha;
  double delta;
  std::int64_t n;
  std::int64_t k;
};

/// Closed-form Bahadur function:
///   0 < a < 1: ln(1 + a(a-1) delta) / (a-1)
///   a = 1:     delta
///   a > 1:     (a(a-1) delta)^{1/a}
double bahadur_function(double alpha, double delta);

/// Generating sequence for the Bahadur function: 1 for 0 < a <= 1, and
/// k^{(a-1)/a} / ln k for a > 1. `alpha_prefactor` selects the variant with
/// a leading factor of a. The two regimes do not meet at a = 1 (the a > 1
/// branch tends to 1/ln k); the jump is surfaced, not interpolated.
double generating_sequence(double alpha, std::int64_t n, std::int64_t k,
                           bool alpha_prefactor = false);

/// Finite-n slope estimate -(c_a(n)/n) ln(tail.value). Throws when the tail
/// estimate underflowed to zero.
double empirical_slope(const BahadurContext& ctx, const TailEstimate& tail);

/// Method-of-types bracket [I* - (k-1) ln(n+1)/n, I*] for the exact error
/// exponent -(1/n) ln P(D_a > delta | H), where I* minimizes D_1(P, Q) over
/// {P : D_a(P, Q) >= delta} (power-divergence constraint; it is converted to
/// the equivalent Renyi level before the inner projection runs).
std::pair<double, double> sanov_sandwich(const ProbVec& q_null, Order order, double delta,
                                         std::int64_t n);

/// Bahadur efficiency (g_{a1}(d1) / g_{a2}(d2)) * c_limit in extended
/// arithmetic; 0 * inf yields the explicit indeterminate state.
ExtReal bahadur_efficiency(double alpha1, double delta1, double alpha2, double delta2,
                           const ExtReal& c_limit);

/// The g-ratio for 0 < a1 < a2 <= 1 written directly from the closed forms:
///   a2 < 1: [(a2-1)/(a1-1)] ln(1 + a1(a1-1)d1) / ln(1 + a2(a2-1)d2)
///   a2 = 1: [1/(a1-1)] ln(1 + a1(a1-1)d1) / d2
double efficiency_ratio_closed_form(double alpha1, double delta1, double alpha2, double delta2);

/// Smallest integer m with m/c_{a2}(m, k(m)) >= (g_{a1}(d1)/g_{a2}(d2)) *
/// n/c_{a1}(n, k(n)): the sample size the second statistic needs to match the
/// first one's error decay. Exponential bracketing plus bisection on the
/// eventually increasing map m -> m/c(m); throws CapacityError beyond `cap`.
std::int64_t matching_sample_size(double alpha1, double delta1, double alpha2, double delta2,
                                  std::int64_t n,
                                  const std::function<std::int64_t(std::int64_t)>& k_rule,
                                  bool alpha_prefactor = false,
                                  std::int64_t cap = 1000000000000000LL);

/// Parametric generating-sequence families used by the sequence-asymptotics
/// probes. b and d are the exponent and scale of the chosen form.
enum class SequenceForm {
  constant_one,       // c(n) = 1
  power_of_n_plain,   // c(n) = d * n^b,            0 < b < 1
  power_of_n_over_log,// c(n) = alpha * n^b / ln n, 0 < b < 1
  power_of_k_over_log // c(n) = alpha * k^b / ln k, b > 0, k = k(n)
};

struct SequenceSpec {
  SequenceForm form = SequenceForm::constant_one;
  double b = 0.0;
  double d = 1.0;
  double alpha = 1.0;

  double eval(double n, const std::function<double(double)>& k_of_n) const;
};

/// c_{a2}(m_n) / c_{a1}(n) along a sample-size grid, with m_n obtained by a
/// real-valued solve of the matching condition on the closed forms (grids may
/// reach n = 1e10, far beyond any integer search). Growing output certifies
/// the limit-infinity behaviour of mismatched exponents.
std::vector<double> ratio_limit_probe(const SequenceSpec& spec1, const SequenceSpec& spec2,
                                      std::pair<double, double> deltas,
                                      const std::vector<std::int64_t>& n_grid,
                                      const std::function<double(double)>& k_of_n);

enum class ConditionFlag { satisfied, violated, not_applicable };

/// Numeric values and threshold verdicts for the sample-size/cell-count rate
/// conditions the consistency and efficiency statements assume. "->inf"
/// conditions are satisfied when the value is >= 1/threshold, "->0"
/// conditions when the value is <= threshold.
struct RateConditionReport {
  double n_over_k = 0.0;             // wants -> inf
  double n_over_k_log_k = 0.0;       // wants -> inf (orders > 2)
  double k_log_n_over_n = 0.0;       // wants -> 0
  double k_heavy_log_n_over_n = 0.0; // k^{2-1/a} ln n / n, wants -> 0 (orders > 1)
  double k_bpow_log_n_over_n = 0.0;  // k^{b(a)+1} ln n / n with b = (a-1)/a; same value
  ConditionFlag mean_bin_ok = ConditionFlag::not_applicable;
  ConditionFlag log_bin_ok = ConditionFlag::not_applicable;
  ConditionFlag cells_rate_ok = ConditionFlag::not_applicable;
  ConditionFlag heavy_rate_ok = ConditionFlag::not_applicable;
  ConditionFlag bpow_rate_ok = ConditionFlag::not_applicable;
};

RateConditionReport check_rate_conditions(std::int64_t n, std::int64_t k, double alpha,
                                          double threshold = 1e-2);

std::string to_string(ConditionFlag flag);

}  // namespace powdiv
