#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "powdiv/types.hpp"

namespace powdiv {

/// Uniform on the first floor(k/2) cells, zero elsewhere.
ProbVec half_support_alternative(std::int64_t k);

/// Large-k divergence limit of the half-support alternative against the
/// uniform null: (2^{a-1} - 1) / (a(a-1)), with limit ln 2 at a = 1.
double half_support_limit(double alpha);

/// Truncated geometric distribution on k+1 cells (j = 0..k) with ratio
/// p = 1 - x/k, normalized by (1-p)/(1-p^{k+1}). Requires 0 < x < k.
ProbVec truncated_geometric(std::int64_t k, double x);

/// Large-k divergence limit of the truncated geometric alternative against
/// the uniform null, for alpha >= 0:
///   a != 0,1: [x^{a-1}(e^{xa}-1) - a(e^x-1)^a] / [a^2 (a-1) (e^x-1)^a]
///   a  = 1:   ln(x / (e (e^x-1))) + x e^x / (e^x-1)
///   a  = 0:   (ln(e^x-1) - ln x) / 2
/// The a = 0 branch is a limit formula only; no order-0 statistic exists here.
double truncated_geometric_limit(double alpha, double x);

/// A distribution per sample size, e.g. n -> alternatives on k(n) cells.
using Schedule = std::function<ProbVec(std::int64_t)>;

/// Numeric diagnostics for the modelling assumptions along a schedule.
/// Verdicts, not exceptions: degenerate schedules produce flags and notes.
struct AssumptionReport {
  bool a1_ok = false;            // k_n <= n, nondecreasing, and growing overall
  double rho_hat = 0.0;          // min over the grid of k * min_j q_nj
  bool a2_ok = false;            // rho_hat not collapsing toward 0
  std::vector<double> rho_seq;   // per-n k * min_j q_nj
  std::vector<double> qmax_seq;  // per-n max_j q_nj
  std::vector<double> delta_seq; // per-n D_alpha(P_n, Q_n)
  double delta_hat = 0.0;        // last divergence value
  double last5_range = 0.0;      // spread of the trailing window
  bool converged = false;        // last5_range below the window
  bool identifiable = false;     // delta_hat bounded away from 0
  std::string notes;
};

AssumptionReport check_assumptions(const Schedule& q_schedule, const Schedule& p_schedule,
                                   double alpha, const std::vector<std::int64_t>& n_grid,
                                   double convergence_window = 1e-3);

/// Finite-n contiguity diagnostics. The bounded divergence sequence is a
/// sufficient condition for P_n to be contiguous w.r.t. Q_n; the witnesses
/// expose the reverse direction by exhibiting sets of nontrivial Q-mass that
/// P nearly misses. Only on-grid evidence is reported, never an asymptotic
/// verdict.
struct ContiguityWitness {
  std::int64_t n = 0;
  double q_mass = 0.0;
  double p_mass = 0.0;
  std::vector<std::int64_t> cells;  // members of the witness set
};

struct ContiguityReport {
  std::vector<double> d1_seq;  // D_1(P_n, Q_n) along the grid
  bool bounded_flag = false;   // trailing window of d1_seq stabilized
  std::vector<ContiguityWitness> witnesses;
  std::string notes;
};

ContiguityReport contiguity_diagnostic(const Schedule& q_schedule, const Schedule& p_schedule,
                                       const std::vector<std::int64_t>& n_grid,
                                       double q_mass_floor = 0.25,
                                       double convergence_window = 1e-3);

}  // namespace powdiv
