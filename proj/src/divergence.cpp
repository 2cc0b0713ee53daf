#include "powdiv/divergence.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "powdiv/detail/sum.hpp"

namespace powdiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_k(std::int64_t kp, std::int64_t kq) {
  if (kp != kq) {
    throw std::invalid_argument("dimension mismatch: k=" + std::to_string(kp) + " vs k=" +
                                std::to_string(kq));
  }
}

void require_positive_cells(std::span<const double> q) {
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (!(q[j] > 0.0)) {
      throw std::invalid_argument("hypothetical cell q[" + std::to_string(j) +
                                  "] = " + std::to_string(q[j]) + " must be > 0");
    }
  }
}

}  // namespace

double phi_alpha(double t, Order order) {
  if (t < 0.0 || std::isnan(t)) {
    throw std::domain_error("phi_alpha: t must be >= 0, got " + std::to_string(t));
  }
  double v;
  if (order.is_unit()) {
    v = (t == 0.0) ? 1.0 : t * std::log(t) - t + 1.0;
  } else {
    const double a = order.alpha();
    v = (std::pow(t, a) - a * (t - 1.0) - 1.0) / (a * (a - 1.0));
  }
  return v < 0.0 ? 0.0 : v;  // clamp rounding residue near t = 1
}

namespace detail {

double power_divergence_raw(std::span<const double> p, std::span<const double> q, Order order) {
  // Summing q_j phi(p_j/q_j) keeps every term nonnegative, so the compensated
  // sum carries no cancellation and the result is exactly 0 when P == Q.
  CompensatedSum acc;
  for (std::size_t j = 0; j < p.size(); ++j) {
    acc.add(q[j] * phi_alpha(p[j] / q[j], order));
  }
  double v = acc.value();
  return v < 0.0 ? 0.0 : v;
}

double kl_raw(std::span<const double> p, std::span<const double> q) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) {
      acc.add(p[j] * std::log(p[j] / q[j]) - p[j] + q[j]);
    } else {
      acc.add(q[j]);
    }
  }
  double v = acc.value();
  return v < 0.0 ? 0.0 : v;
}

double renyi_divergence_raw(std::span<const double> p, std::span<const double> q, Order order) {
  if (order.is_unit()) {
    return kl_raw(p, q);
  }
  const double a = order.alpha();
  CompensatedSum acc;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) {
      acc.add(std::pow(p[j], a) * std::pow(q[j], 1.0 - a));
    }
  }
  double v = std::log(acc.value()) / (a - 1.0);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace detail

DivergenceValue power_divergence(const ProbVec& p, const ProbVec& q, Order order) {
  require_same_k(p.k(), q.k());
  require_positive_cells(q.data());
  double v = detail::power_divergence_raw(p.data(), q.data(), order);
  return {v, order, DivergenceKind::power};
}

DivergenceValue renyi_divergence(const ProbVec& p, const ProbVec& q, Order order) {
  require_same_k(p.k(), q.k());
  require_positive_cells(q.data());
  double v = detail::renyi_divergence_raw(p.data(), q.data(), order);
  return {v, order, DivergenceKind::renyi};
}

DivergenceValue renyi_from_power(const DivergenceValue& d) {
  if (d.kind != DivergenceKind::power) {
    throw std::invalid_argument("renyi_from_power: input must be a power-divergence value");
  }
  if (d.order.is_unit()) {
    return {d.value, d.order, DivergenceKind::renyi};
  }
  const double a = d.order.alpha();
  const double arg = a * (a - 1.0) * d.value;
  if (arg <= -1.0) {
    throw std::domain_error("renyi_from_power: 1 + a(a-1)d = " + std::to_string(1.0 + arg) +
                            " is not positive");
  }
  double v = std::log1p(arg) / (a - 1.0);
  return {v < 0.0 ? 0.0 : v, d.order, DivergenceKind::renyi};
}

double classic_statistic(StatKind kind, const Counts& counts, const ProbVec& q) {
  if (counts.k() == 0) {
    throw std::invalid_argument("classic_statistic: empty counts");
  }
  require_same_k(counts.k(), q.k());
  require_positive_cells(q.data());
  if (counts.n() < 1) {
    throw std::invalid_argument("classic_statistic: total count must be >= 1");
  }
  const double n = static_cast<double>(counts.n());
  detail::CompensatedSum acc;
  switch (kind) {
    case StatKind::pearson:
      for (std::int64_t j = 0; j < counts.k(); ++j) {
        const double e = n * q[j];
        const double d = static_cast<double>(counts[j]) - e;
        acc.add(d * d / e);
      }
      return acc.value();
    case StatKind::lrt:
      for (std::int64_t j = 0; j < counts.k(); ++j) {
        if (counts[j] > 0) {
          const double x = static_cast<double>(counts[j]);
          acc.add(x * std::log(x / (n * q[j])));
        }
      }
      return 2.0 * acc.value();
    case StatKind::freeman_tukey:
      for (std::int64_t j = 0; j < counts.k(); ++j) {
        const double d = std::sqrt(static_cast<double>(counts[j])) - std::sqrt(n * q[j]);
        acc.add(d * d);
      }
      return 4.0 * acc.value();
  }
  throw std::invalid_argument("classic_statistic: unknown kind");
}

double scaled_statistic(const Counts& counts, const ProbVec& q, Order order) {
  if (counts.k() == 0) {
    throw std::invalid_argument("scaled_statistic: empty counts");
  }
  if (counts.n() < 1) {
    throw std::invalid_argument("scaled_statistic: total count must be >= 1");
  }
  std::vector<double> phat(static_cast<std::size_t>(counts.k()));
  for (std::int64_t j = 0; j < counts.k(); ++j) {
    phat[static_cast<std::size_t>(j)] =
        static_cast<double>(counts[j]) / static_cast<double>(counts.n());
  }
  return 2.0 * static_cast<double>(counts.n()) *
         power_divergence(ProbVec(std::move(phat)), q, order).value;
}

std::pair<double, double> phi_difference_bounds(double x, double y, Order order) {
  const double a = order.alpha();
  if (a < 1.0 - 1e-12 || a > 2.0 + 1e-12) {
    throw std::domain_error("phi_difference_bounds: order must lie in [1, 2], got " +
                            std::to_string(a));
  }
  if (x < 0.0 || y < 0.0) {
    throw std::domain_error("phi_difference_bounds: x, y must be >= 0");
  }
  if (x == y) {
    return {0.0, 0.0};
  }
  if (x == 0.0 && order.is_unit()) {
    return {-kInf, kInf};  // phi_1'(0) = -inf; both bounds vacuous
  }
  const double d = y - x;
  const double slope = order.is_unit() ? std::log(x) : (std::pow(x, a - 1.0) - 1.0) / (a - 1.0);
  const double lower = d * slope;
  const double upper = lower + std::pow(x, a - 2.0) * d * d / a;  // pow(0, a-2) = +inf for a < 2
  return {lower, upper};
}

}  // namespace powdiv
