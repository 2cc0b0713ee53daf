#pragma once

#include <span>
#include <utility>

#include "powdiv/types.hpp"

namespace powdiv {

/// The power function phi_alpha:
///   phi_a(t) = (t^a - a(t-1) - 1) / (a(a-1))   for a != 1,
///   phi_1(t) = t ln t - t + 1                  with 0 ln 0 = 0.
/// Nonnegative, convex, phi_a(1) = 0, phi_a(0) = 1/a. Throws on t < 0.
double phi_alpha(double t, Order order);

/// Power divergence D_a(P,Q) = sum_j q_j phi_a(p_j/q_j); the a = 1 limit is
/// the information divergence sum_j p_j ln(p_j/q_j). Requires all q_j > 0;
/// a zero hypothetical cell is a precondition error naming the cell.
DivergenceValue power_divergence(const ProbVec& p, const ProbVec& q, Order order);

/// Renyi divergence D_a(P||Q) = ln(sum_j p_j^a q_j^{1-a}) / (a-1), with the
/// same information-divergence limit at a = 1.
DivergenceValue renyi_divergence(const ProbVec& p, const ProbVec& q, Order order);

/// Monotone bridge from a power-divergence value to the Renyi value of the
/// same order: ln(1 + a(a-1) d) / (a-1), identity at a = 1. Throws when the
/// logarithm argument is not positive or d is not a power-divergence value.
DivergenceValue renyi_from_power(const DivergenceValue& d);

enum class StatKind { pearson, lrt, freeman_tukey };

/// The classical goodness-of-fit statistics in their textbook forms:
///   pearson       sum (X_j - n q_j)^2 / (n q_j)
///   lrt           2 sum X_j ln(X_j / (n q_j))
///   freeman_tukey 4 sum (sqrt(X_j) - sqrt(n q_j))^2
/// Each equals 2n D_a(X/n, Q) for a = 2, 1, 1/2 respectively; the formulas
/// here are kept independent of power_divergence so the identity is testable.
double classic_statistic(StatKind kind, const Counts& counts, const ProbVec& q);

/// 2n D_a(empirical(counts), Q).
double scaled_statistic(const Counts& counts, const ProbVec& q, Order order);

/// Quadratic sandwich for increments of phi_a on 1 <= a <= 2:
///   L = (y-x) phi_a'(x),  U = L + (1/a) x^{a-2} (y-x)^2,
/// with L <= phi_a(y) - phi_a(x) <= U. At x = 0 and a < 2 the upper bound is
/// +infinity (the sandwich holds vacuously). Throws when a is outside [1,2].
std::pair<double, double> phi_difference_bounds(double x, double y, Order order);

namespace detail {

// Raw-buffer versions used by the enumeration and projection inner loops,
// where per-call ProbVec construction would dominate.
double power_divergence_raw(std::span<const double> p, std::span<const double> q, Order order);
double renyi_divergence_raw(std::span<const double> p, std::span<const double> q, Order order);
double kl_raw(std::span<const double> p, std::span<const double> q);

}  // namespace detail

}  // namespace powdiv
