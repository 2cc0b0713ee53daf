#include "powdiv/tail.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "powdiv/detail/sum.hpp"
#include "powdiv/divergence.hpp"
#include "powdiv/sampling.hpp"

namespace powdiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double composition_count(std::int64_t k, std::int64_t n) {
  if (k < 1 || n < 0) {
    throw std::invalid_argument("composition_count: need k >= 1, n >= 0");
  }
  // C(n+k-1, k-1) by incremental multiply/divide; every prefix is an exact
  // integer, so long double keeps full precision until ~2^64.
  long double c = 1.0L;
  const std::int64_t r = k - 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    c = c * static_cast<long double>(n + i) / static_cast<long double>(i);
    if (c > 1e30L) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return static_cast<double>(c);
}

void for_each_type(std::int64_t k, std::int64_t n, double budget,
                   const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  if (k < 1 || n < 1) {
    throw std::invalid_argument("for_each_type: need k >= 1, n >= 1");
  }
  const double count = composition_count(k, n);
  if (!(count <= budget)) {
    std::ostringstream msg;
    msg << "type-class enumeration needs " << count << " compositions (k=" << k << ", n=" << n
        << "), exceeding budget " << budget;
    throw CapacityError(msg.str());
  }

  std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
  x.back() = n;
  for (;;) {
    visit(x);
    if (x.front() == n) {
      break;  // (n, 0, ..., 0) is the lexicographic maximum
    }
    // Successor: bump the rightmost cell that has mass to its right, zero the
    // cells in between, park the remainder in the last cell.
    if (x.back() > 0) {
      const std::int64_t t = x.back();
      x.back() = t - 1;
      x[static_cast<std::size_t>(k) - 2] += 1;
    } else {
      std::int64_t m = k - 2;
      while (x[static_cast<std::size_t>(m)] == 0) {
        --m;
      }
      const std::int64_t r = x[static_cast<std::size_t>(m)] - 1;
      x[static_cast<std::size_t>(m)] = 0;
      x[static_cast<std::size_t>(m) - 1] += 1;
      x.back() = r;
    }
  }
}

double log_multinomial_pmf(const Counts& counts, const ProbVec& p) {
  if (counts.k() != p.k()) {
    throw std::invalid_argument("log_multinomial_pmf: dimension mismatch");
  }
  detail::CompensatedSum acc;
  acc.add(std::lgamma(static_cast<double>(counts.n()) + 1.0));
  for (std::int64_t j = 0; j < counts.k(); ++j) {
    const std::int64_t x = counts[j];
    if (x > 0) {
      if (p[j] <= 0.0) {
        return -kInf;
      }
      acc.add(-std::lgamma(static_cast<double>(x) + 1.0));
      acc.add(static_cast<double>(x) * std::log(p[j]));
    }
  }
  return acc.value();
}

TailEstimate exact_tail(const ProbVec& q_null, const ProbVec& p_true, Order order,
                        std::int64_t n, double delta, double budget) {
  if (q_null.k() != p_true.k()) {
    throw std::invalid_argument("exact_tail: dimension mismatch");
  }
  if (n < 1) {
    throw std::invalid_argument("exact_tail: n must be >= 1");
  }
  const std::int64_t k = q_null.k();
  const double dn = static_cast<double>(n);
  const double lgn = std::lgamma(dn + 1.0);

  std::vector<double> phat(static_cast<std::size_t>(k));
  std::vector<double> logp(static_cast<std::size_t>(k));
  for (std::int64_t j = 0; j < k; ++j) {
    logp[static_cast<std::size_t>(j)] = p_true[j] > 0.0 ? std::log(p_true[j]) : -kInf;
  }

  // Linear compensated sum, with a parallel log-space accumulator that takes
  // over if the linear sum underflows (term scales reach exp(-n*delta)).
  detail::CompensatedSum linear;
  double log_max = -kInf;
  double log_rescaled = 0.0;

  for_each_type(k, n, budget, [&](const std::vector<std::int64_t>& x) {
    for (std::int64_t j = 0; j < k; ++j) {
      phat[static_cast<std::size_t>(j)] = static_cast<double>(x[static_cast<std::size_t>(j)]) / dn;
    }
    const double d = detail::power_divergence_raw(phat, q_null.data(), order);
    if (!(d > delta)) {
      return;
    }
    double lp = lgn;
    for (std::int64_t j = 0; j < k; ++j) {
      const std::int64_t xj = x[static_cast<std::size_t>(j)];
      if (xj > 0) {
        if (logp[static_cast<std::size_t>(j)] == -kInf) {
          return;  // impossible under p_true
        }
        lp += static_cast<double>(xj) * logp[static_cast<std::size_t>(j)] -
              std::lgamma(static_cast<double>(xj) + 1.0);
      }
    }
    linear.add(std::exp(lp));
    if (lp > log_max) {
      log_rescaled = log_rescaled * std::exp(log_max - lp) + 1.0;
      log_max = lp;
    } else {
      log_rescaled += std::exp(lp - log_max);
    }
  });

  double value = linear.value();
  if (value < 1e-300 && log_max > -kInf) {
    value = std::exp(log_max + std::log(log_rescaled));
  }
  value = std::clamp(value, 0.0, 1.0);
  return TailEstimate{value, TailMethod::exact, value, value, 0,
                      delta,  n,                k,     order.alpha()};
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double confidence) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("wilson_interval: confidence must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 1.0 - (1.0 - confidence) / 2.0);
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (ph + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  // exact endpoints at 0 / n successes instead of rounding residue
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

TailEstimate mc_tail(const ProbVec& q_null, const ProbVec& p_true, Order order, std::int64_t n,
                     double delta, std::int64_t reps, const Seed& seed, double confidence) {
  if (reps < 100) {
    throw std::invalid_argument("mc_tail: reps must be >= 100");
  }
  const std::vector<double> sims = simulate_statistics(p_true, q_null, order, n, reps, seed);
  std::int64_t hits = 0;
  for (double d : sims) {
    if (d > delta) {
      ++hits;
    }
  }
  const auto [lo, hi] = wilson_interval(hits, reps, confidence);
  const double value = static_cast<double>(hits) / static_cast<double>(reps);
  return TailEstimate{value, TailMethod::monte_carlo, lo,           hi, reps,
                      delta, n,                       q_null.k(),  order.alpha()};
}

}  // namespace powdiv
