#include "powdiv/sampling.hpp"

#include <algorithm>
#include <random>

#include "powdiv/detail/rng.hpp"
#include "powdiv/divergence.hpp"

namespace powdiv {

Seed substream(const Seed& seed, std::uint64_t index) {
  return Seed{seed.value, detail::mix64(seed.stream ^ detail::mix64(index + 1))};
}

Counts sample_counts(const ProbVec& p, std::int64_t n, const Seed& seed) {
  if (n < 1) {
    throw std::invalid_argument("sample_counts: n must be >= 1");
  }
  const std::int64_t k = p.k();
  // Suffix masses computed once so conditional probabilities do not drift.
  std::vector<double> suffix(static_cast<std::size_t>(k) + 1, 0.0);
  for (std::int64_t j = k - 1; j >= 0; --j) {
    suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j) + 1] + p[j];
  }

  auto engine = detail::make_engine(seed);
  std::vector<std::int64_t> out(static_cast<std::size_t>(k), 0);
  std::int64_t remaining = n;
  for (std::int64_t j = 0; j + 1 < k && remaining > 0; ++j) {
    const double sfx = suffix[static_cast<std::size_t>(j)];
    double cond = sfx > 0.0 ? p[j] / sfx : 0.0;
    cond = std::clamp(cond, 0.0, 1.0);
    std::int64_t x = 0;
    if (cond >= 1.0) {
      x = remaining;
    } else if (cond > 0.0) {
      std::binomial_distribution<std::int64_t> bin(remaining, cond);
      x = bin(engine);
    }
    out[static_cast<std::size_t>(j)] = x;
    remaining -= x;
  }
  out[static_cast<std::size_t>(k) - 1] += remaining;
  return Counts(std::move(out));
}

ProbVec empirical(const Counts& counts) {
  if (counts.n() < 1) {
    throw std::invalid_argument("empirical: total count must be >= 1");
  }
  std::vector<double> probs(static_cast<std::size_t>(counts.k()));
  const double n = static_cast<double>(counts.n());
  for (std::int64_t j = 0; j < counts.k(); ++j) {
    probs[static_cast<std::size_t>(j)] = static_cast<double>(counts[j]) / n;
  }
  return ProbVec(std::move(probs));
}

std::vector<double> simulate_statistics(const ProbVec& p_true, const ProbVec& q_null,
                                        Order order, std::int64_t n, std::int64_t reps,
                                        const Seed& seed) {
  if (reps < 1) {
    throw std::invalid_argument("simulate_statistics: reps must be >= 1");
  }
  if (p_true.k() != q_null.k()) {
    throw std::invalid_argument("simulate_statistics: dimension mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(reps));
  for (std::int64_t i = 0; i < reps; ++i) {
    const Counts x = sample_counts(p_true, n, substream(seed, static_cast<std::uint64_t>(i)));
    out[static_cast<std::size_t>(i)] = power_divergence(empirical(x), q_null, order).value;
  }
  return out;
}

}  // namespace powdiv
