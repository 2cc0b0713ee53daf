#pragma once

#include <cstdint>
#include <vector>

#include "powdiv/types.hpp"

namespace powdiv {

/// Deterministic substream for replicate `index`. simulate_statistics draws
/// replicate i from substream(seed, i), so results are independent of any
/// execution order and reproducible replicate-by-replicate.
Seed substream(const Seed& seed, std::uint64_t index);

/// One draw from Multinomial_k(n, p), via sequential conditional binomials
/// (O(k) per draw, exact distribution). Deterministic given (p, n, seed).
Counts sample_counts(const ProbVec& p, std::int64_t n, const Seed& seed);

/// The empirical distribution counts/n.
ProbVec empirical(const Counts& counts);

/// reps independent realizations of D_a(empirical sample, q_null) with
/// samples drawn under p_true. Output slot i always comes from
/// substream(seed, i); two runs with equal seed are bitwise identical.
std::vector<double> simulate_statistics(const ProbVec& p_true, const ProbVec& q_null,
                                        Order order, std::int64_t n, std::int64_t reps,
                                        const Seed& seed);

}  // namespace powdiv
