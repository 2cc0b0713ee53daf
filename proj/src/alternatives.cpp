#include "powdiv/alternatives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "powdiv/detail/sum.hpp"
#include "powdiv/divergence.hpp"

namespace powdiv {

namespace {

constexpr double kUnitWindow = Order::kUnitWindow;

}  // namespace

ProbVec half_support_alternative(std::int64_t k) {
  if (k < 2) {
    throw std::invalid_argument("half_support_alternative: k must be >= 2");
  }
  const std::int64_t m = k / 2;
  std::vector<double> probs(static_cast<std::size_t>(k), 0.0);
  for (std::int64_t j = 0; j < m; ++j) {
    probs[static_cast<std::size_t>(j)] = 1.0 / static_cast<double>(m);
  }
  return ProbVec(std::move(probs));
}

double half_support_limit(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("half_support_limit: alpha must be > 0");
  }
  if (std::abs(alpha - 1.0) < kUnitWindow) {
    return M_LN2;
  }
  // expm1 keeps the value stable for alpha near 1.
  return std::expm1((alpha - 1.0) * M_LN2) / (alpha * (alpha - 1.0));
}

ProbVec truncated_geometric(std::int64_t k, double x) {
  if (k < 1) {
    throw std::invalid_argument("truncated_geometric: k must be >= 1");
  }
  if (!(x > 0.0) || x >= static_cast<double>(k)) {
    throw std::invalid_argument("truncated_geometric: need 0 < x < k");
  }
  const double logp = std::log1p(-x / static_cast<double>(k));
  std::vector<double> w(static_cast<std::size_t>(k) + 1);
  detail::CompensatedSum total;
  for (std::int64_t j = 0; j <= k; ++j) {
    w[static_cast<std::size_t>(j)] = std::exp(static_cast<double>(j) * logp);
    total.add(w[static_cast<std::size_t>(j)]);
  }
  const double norm = total.value();
  for (double& v : w) {
    v /= norm;
  }
  return ProbVec(std::move(w));
}

double truncated_geometric_limit(double alpha, double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("truncated_geometric_limit: x must be > 0");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("truncated_geometric_limit: alpha must be >= 0");
  }
  const double ex1 = std::expm1(x);  // e^x - 1
  if (alpha < kUnitWindow) {
    return (std::log(ex1) - std::log(x)) / 2.0;
  }
  if (std::abs(alpha - 1.0) < kUnitWindow) {
    return std::log(x / (std::exp(1.0) * ex1)) + x * std::exp(x) / ex1;
  }
  const double pow_ex1 = std::pow(ex1, alpha);
  return (std::pow(x, alpha - 1.0) * std::expm1(x * alpha) - alpha * pow_ex1) /
         (alpha * alpha * (alpha - 1.0) * pow_ex1);
}

namespace {

double trailing_range(const std::vector<double>& v, std::size_t window = 5) {
  if (v.empty()) {
    return 0.0;
  }
  const std::size_t take = std::min(window, v.size());
  auto first = v.end() - static_cast<std::ptrdiff_t>(take);
  const auto [lo, hi] = std::minmax_element(first, v.end());
  return *hi - *lo;
}

}  // namespace

AssumptionReport check_assumptions(const Schedule& q_schedule, const Schedule& p_schedule,
                                   double alpha, const std::vector<std::int64_t>& n_grid,
                                   double convergence_window) {
  AssumptionReport rep;
  if (n_grid.empty()) {
    rep.notes = "empty grid";
    return rep;
  }
  const Order order(alpha);
  bool k_le_n = true;
  bool k_nondec = true;
  std::int64_t k_prev = 0;
  std::int64_t k_first = 0, k_last = 0;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const std::int64_t n = n_grid[i];
    const ProbVec q = q_schedule(n);
    const ProbVec p = p_schedule(n);
    const std::int64_t k = q.k();
    if (i == 0) {
      k_first = k;
    }
    k_last = k;
    k_le_n = k_le_n && (k <= n);
    k_nondec = k_nondec && (i == 0 || k >= k_prev);
    k_prev = k;

    double qmin = q[0], qmax = q[0];
    for (std::int64_t j = 1; j < k; ++j) {
      qmin = std::min(qmin, q[j]);
      qmax = std::max(qmax, q[j]);
    }
    rep.rho_seq.push_back(static_cast<double>(k) * qmin);
    rep.qmax_seq.push_back(qmax);
    rep.delta_seq.push_back(power_divergence(p, q, order).value);
  }
  rep.a1_ok = k_le_n && k_nondec && (k_last > k_first || n_grid.size() == 1);
  rep.rho_hat = *std::min_element(rep.rho_seq.begin(), rep.rho_seq.end());
  // A collapse toward zero (rather than a merely small constant) is what
  // disqualifies the schedule.
  rep.a2_ok = rep.rho_hat > 0.0 && rep.rho_hat >= 0.5 * rep.rho_seq.front();
  rep.delta_hat = rep.delta_seq.back();
  rep.last5_range = trailing_range(rep.delta_seq);
  rep.converged = rep.last5_range < convergence_window;
  rep.identifiable = rep.delta_hat > 1e-9;
  if (!rep.identifiable) {
    rep.notes += "hypothesis regime: divergence limit is 0, identifiability fails; ";
  }
  if (!rep.a2_ok) {
    rep.notes += "regularity fails: k*min(q) collapses along the schedule; ";
  }
  if (!rep.converged) {
    rep.notes += "divergence sequence not settled in the trailing window; ";
  }
  return rep;
}

ContiguityReport contiguity_diagnostic(const Schedule& q_schedule, const Schedule& p_schedule,
                                       const std::vector<std::int64_t>& n_grid,
                                       double q_mass_floor, double convergence_window) {
  ContiguityReport rep;
  const Order unit(1.0);
  for (const std::int64_t n : n_grid) {
    const ProbVec q = q_schedule(n);
    const ProbVec p = p_schedule(n);
    rep.d1_seq.push_back(power_divergence(p, q, unit).value);

    // Worst witness for the reverse direction: collect cells in ascending
    // p/q until the Q-mass floor is reached, then keep absorbing p = 0 cells.
    const std::int64_t k = q.k();
    std::vector<std::int64_t> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::int64_t a, std::int64_t b) {
      return p[a] / q[a] < p[b] / q[b];
    });
    ContiguityWitness w;
    w.n = n;
    for (const std::int64_t j : idx) {
      if (w.q_mass >= q_mass_floor && p[j] > 0.0) {
        break;
      }
      w.q_mass += q[j];
      w.p_mass += p[j];
      w.cells.push_back(j);
    }
    rep.witnesses.push_back(std::move(w));
  }
  rep.bounded_flag = !rep.d1_seq.empty() &&
                     trailing_range(rep.d1_seq) < convergence_window;
  if (rep.bounded_flag) {
    rep.notes = "divergence sequence stabilized on the grid: forward contiguity certified";
  } else {
    rep.notes = "no boundedness certificate on this grid";
  }
  return rep;
}

}  // namespace powdiv
