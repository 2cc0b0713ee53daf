#pragma once

#include <cstdint>

#include "powdiv/types.hpp"

namespace powdiv {

enum class ProjectionMethod { mixture_construction, numeric_optimizer };

/// Result of the constrained information projection
///   minimize D_1(P, Q)  subject to  D_alpha(P || Q) >= delta,  P in the simplex.
struct ProjectionResult {
  ProbVec minimizer;
  double kl_value = 0.0;         // D_1(minimizer, Q)
  double constraint_value = 0.0; // D_alpha(minimizer || Q)
  ProjectionMethod method = ProjectionMethod::numeric_optimizer;
  bool converged = false;
  std::int64_t iterations = 0;
  double upper_gap = 0.0;        // mixture route: -ln Q(A-) - delta; 0 otherwise
  std::int64_t a_plus_size = 0;  // mixture route: |A+|; 0 otherwise
  std::int64_t a_minus_size = 0; // mixture route: |A-|; 0 otherwise
};

/// Feasible near-optimal point built from nested conditionals of Q:
/// cells are sorted by descending mass, A+ is the shortest prefix with
/// -ln Q(A+) <= delta, A- drops its smallest member, and the mixing weight
/// s in (1-s) Q(.|A+) + s Q(.|A-) is bisected until the constraint holds to
/// 1e-10. Guarantees delta <= kl_value <= delta + upper_gap for alpha <= 1.
/// Requires 0 < alpha <= 1 and strictly positive q; throws InfeasibleError
/// (with the achievable range) when delta > -ln(max_j q_j).
ProjectionResult mixture_construction(const ProbVec& q, Order order, double delta);

/// General solver for the same program (any alpha > 0; the alpha > 1 case is
/// exploratory). alpha = 1 is solved exactly by bisecting the exponential
/// tilt toward the smallest-mass cell; otherwise multiplicative-update
/// descent on the simplex from five deterministic feasible starts, with
/// boundary retraction. Never fabricates an optimum: if no feasible point
/// exists or stationarity is not reached, converged is false and the best
/// iterate is returned. Requires strictly positive q and k <= 1e4.
ProjectionResult numeric_projection(const ProbVec& q, Order order, double delta);

}  // namespace powdiv
