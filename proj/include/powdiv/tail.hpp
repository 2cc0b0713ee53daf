#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "powdiv/types.hpp"

namespace powdiv {

enum class TailMethod { exact, monte_carlo };

/// Value of the error function P(D_hat > delta) with its provenance.
/// method == exact implies ci_low == value == ci_high and reps == 0.
struct TailEstimate {
  double value = 0.0;
  TailMethod method = TailMethod::exact;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t reps = 0;
  double delta = 0.0;
  std::int64_t n = 0;
  std::int64_t k = 0;
  double alpha = 1.0;
};

/// C(n+k-1, k-1), the number of length-k compositions of n, evaluated in
/// long double and saturating at +infinity for huge inputs (it is only
/// compared against budgets).
double composition_count(std::int64_t k, std::int64_t n);

/// Streams every composition of n into k cells (the scaled type class) in
/// ascending lexicographic order, reusing one buffer: (0,...,0,n) first,
/// (n,0,...,0) last. Throws CapacityError with the computed count when
/// C(n+k-1, k-1) exceeds `budget`.
void for_each_type(std::int64_t k, std::int64_t n, double budget,
                   const std::function<void(const std::vector<std::int64_t>&)>& visit);

/// ln of the multinomial pmf of `counts` under p, via lgamma. Cells with
/// p_j = 0 are allowed only where counts_j = 0; otherwise returns -infinity.
double log_multinomial_pmf(const Counts& counts, const ProbVec& p);

/// Exact tail P(D_a(empirical, q_null) > delta) with samples drawn under
/// p_true, by full enumeration of the type class. Strict inequality: ties at
/// lattice values of delta are excluded.
TailEstimate exact_tail(const ProbVec& q_null, const ProbVec& p_true, Order order,
                        std::int64_t n, double delta, double budget = 1e8);

/// Monte Carlo tail estimate with a Wilson score interval (default 95%).
/// Deterministic given seed; requires reps >= 100.
TailEstimate mc_tail(const ProbVec& q_null, const ProbVec& p_true, Order order, std::int64_t n,
                     double delta, std::int64_t reps, const Seed& seed,
                     double confidence = 0.95);

/// Wilson score interval for a binomial proportion. Well-behaved at 0 and
/// `trials` successes, which is the common regime for rare tails.
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double confidence);

}  // namespace powdiv
