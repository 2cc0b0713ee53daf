#include "powdiv/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "powdiv/detail/sum.hpp"
#include "powdiv/divergence.hpp"

namespace powdiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConstraintTol = 1e-10;   // bisection target on the constraint
constexpr double kStationarityTol = 1e-8;  // internal stationarity target
constexpr double kConvergedTol = 1e-5;     // reported KKT residual bound

using Vec = std::vector<double>;

void require_positive(const ProbVec& q) {
  for (std::int64_t j = 0; j < q.k(); ++j) {
    if (!(q[j] > 0.0)) {
      throw std::invalid_argument("projection: q[" + std::to_string(j) + "] must be > 0");
    }
  }
}

double kl_of(const Vec& p, const ProbVec& q) { return detail::kl_raw(p, q.data()); }

double renyi_of(const Vec& p, const ProbVec& q, Order order) {
  return detail::renyi_divergence_raw(p, q.data(), order);
}

Vec normalized(Vec v) {
  detail::CompensatedSum s;
  for (double x : v) {
    s.add(x);
  }
  const double total = s.value();
  for (double& x : v) {
    x /= total;
  }
  return v;
}

std::vector<std::int64_t> descending_mass_order(const ProbVec& q) {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(q.k()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::int64_t a, std::int64_t b) { return q[a] > q[b]; });
  return idx;
}

struct MixturePoint {
  Vec p;
  double constraint = 0.0;
  double upper_gap = 0.0;
  std::int64_t a_plus = 0;
  std::int64_t a_minus = 0;
  std::int64_t iterations = 0;
};

// Core of the nested-conditional construction; works for every order because
// D_alpha(Q(.|A) || Q) = -ln Q(A) does not depend on alpha. Returns nullopt
// when delta exceeds -ln(max_j q_j), the largest level the nesting can reach.
std::optional<MixturePoint> mixture_point(const ProbVec& q, Order order, double delta) {
  const std::int64_t k = q.k();
  const auto idx = descending_mass_order(q);

  std::vector<double> prefix_mass(static_cast<std::size_t>(k));
  detail::CompensatedSum cum;
  for (std::int64_t i = 0; i < k; ++i) {
    cum.add(q[idx[static_cast<std::size_t>(i)]]);
    prefix_mass[static_cast<std::size_t>(i)] = std::min(cum.value(), 1.0);
  }

  std::int64_t len = 1;
  while (len <= k && -std::log(prefix_mass[static_cast<std::size_t>(len) - 1]) > delta) {
    ++len;
  }
  if (len > k) {
    return std::nullopt;  // cannot happen: -ln Q(full) = 0 <= delta
  }
  if (len == 1) {
    const double top = -std::log(prefix_mass[0]);
    if (delta > top + 1e-12) {
      return std::nullopt;
    }
    MixturePoint mp;
    mp.p.assign(static_cast<std::size_t>(k), 0.0);
    mp.p[static_cast<std::size_t>(idx[0])] = 1.0;
    mp.constraint = top;
    mp.a_plus = 1;
    mp.a_minus = 0;
    return mp;
  }

  const double mass_plus = prefix_mass[static_cast<std::size_t>(len) - 1];
  const double mass_minus = prefix_mass[static_cast<std::size_t>(len) - 2];
  auto mixture_at = [&](double s) {
    Vec p(static_cast<std::size_t>(k), 0.0);
    for (std::int64_t i = 0; i < len; ++i) {
      const std::int64_t j = idx[static_cast<std::size_t>(i)];
      double v = (1.0 - s) * q[j] / mass_plus;
      if (i < len - 1) {
        v += s * q[j] / mass_minus;
      }
      p[static_cast<std::size_t>(j)] = v;
    }
    return p;
  };

  // Bisect the mixing weight: constraint is -ln(mass_plus) <= delta at s = 0
  // and -ln(mass_minus) >= delta at s = 1.
  double lo = 0.0, hi = 1.0;
  Vec p = mixture_at(0.0);
  double g = renyi_of(p, q, order);
  std::int64_t iters = 0;
  if (std::abs(g - delta) > kConstraintTol) {
    for (; iters < 200; ++iters) {
      const double mid = 0.5 * (lo + hi);
      p = mixture_at(mid);
      g = renyi_of(p, q, order);
      if (std::abs(g - delta) <= kConstraintTol) {
        break;
      }
      (g < delta ? lo : hi) = mid;
    }
    if (g < delta) {  // land on the feasible side
      p = mixture_at(hi);
      g = renyi_of(p, q, order);
    }
  }

  MixturePoint mp;
  mp.p = std::move(p);
  mp.constraint = g;
  mp.upper_gap = -std::log(mass_minus) - delta;
  mp.a_plus = len;
  mp.a_minus = len - 1;
  mp.iterations = iters;
  return mp;
}

// ----- alpha = 1: exact exponential tilt toward the smallest-mass cell -----

struct Tilt {
  const ProbVec& q;
  std::int64_t target;

  double log_z(double t) const {
    const double u = std::log(q[target]) + t;
    if (u > 0.0) {
      return u + std::log1p((1.0 - q[target]) * std::exp(-u));
    }
    return std::log1p(q[target] * std::expm1(t));
  }

  double kl(double t) const {
    const double lz = log_z(t);
    const double p_target = std::exp(std::log(q[target]) + t - lz);
    return t * p_target - lz;
  }

  Vec point(double t) const {
    const double lz = log_z(t);
    Vec p(static_cast<std::size_t>(q.k()));
    for (std::int64_t j = 0; j < q.k(); ++j) {
      p[static_cast<std::size_t>(j)] =
          std::exp(std::log(q[j]) + (j == target ? t : 0.0) - lz);
    }
    return normalized(std::move(p));
  }
};

ProjectionResult solve_unit_order(const ProbVec& q, double delta) {
  std::int64_t target = 0;
  for (std::int64_t j = 1; j < q.k(); ++j) {
    if (q[j] < q[target]) {
      target = j;
    }
  }
  const double dmax = -std::log(q[target]);
  Vec point_mass(static_cast<std::size_t>(q.k()), 0.0);
  point_mass[static_cast<std::size_t>(target)] = 1.0;

  if (delta > dmax + 1e-12) {
    // No distribution reaches this level; report the best attempt honestly.
    return ProjectionResult{ProbVec(std::move(point_mass)), dmax, dmax,
                            ProjectionMethod::numeric_optimizer, false, 0, 0.0, 0, 0};
  }
  if (delta >= dmax - 1e-12) {
    return ProjectionResult{ProbVec(std::move(point_mass)), dmax, dmax,
                            ProjectionMethod::numeric_optimizer, true, 0, 0.0, 0, 0};
  }

  const Tilt tilt{q, target};
  double hi = 1.0;
  std::int64_t iters = 0;
  while (tilt.kl(hi) < delta && hi < 1e9) {
    hi *= 2.0;
    ++iters;
  }
  double lo = 0.0;
  double t = hi;
  for (int i = 0; i < 200; ++i) {
    ++iters;
    const double mid = 0.5 * (lo + hi);
    if (std::abs(tilt.kl(mid) - delta) <= 1e-13 * std::max(1.0, delta)) {
      t = mid;
      break;
    }
    (tilt.kl(mid) < delta ? lo : hi) = mid;
    t = hi;  // feasible side
  }
  Vec p = tilt.point(t);
  const double kl = kl_of(p, q);
  return ProjectionResult{ProbVec(std::move(p)), kl, kl,
                          ProjectionMethod::numeric_optimizer, true, iters, 0.0, 0, 0};
}

// ----- general order: multiplicative-update descent with retraction -----

struct PolishOutcome {
  Vec p;
  double f = 0.0;
  double g = 0.0;
  double residual = kInf;
  std::int64_t iterations = 0;
};

struct Objective {
  const ProbVec& q;
  Order order;
  double delta;

  double f(const Vec& p) const { return kl_of(p, q); }
  double g(const Vec& p) const { return renyi_of(p, q, order); }

  void gradients(const Vec& p, Vec& gf, Vec& gg) const {
    const double a = order.alpha();
    detail::CompensatedSum total;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > 0.0) {
        total.add(std::pow(p[j], a) * std::pow(q[static_cast<std::int64_t>(j)], 1.0 - a));
      }
    }
    const double t = total.value();
    gf.assign(p.size(), 0.0);
    gg.assign(p.size(), 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > 0.0) {
        const double qj = q[static_cast<std::int64_t>(j)];
        gf[j] = std::log(p[j] / qj) + 1.0;
        gg[j] = a * std::pow(p[j], a - 1.0) * std::pow(qj, 1.0 - a) / ((a - 1.0) * t);
      }
    }
  }

  // Least-squares multiplier and projected Lagrangian gradient norm over the
  // support; the projection is onto the simplex tangent {sum v = 0}.
  std::pair<double, double> kkt(const Vec& p, const Vec& gf, const Vec& gg) const {
    double mean_f = 0.0, mean_g = 0.0;
    std::int64_t support = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > 0.0) {
        mean_f += gf[j];
        mean_g += gg[j];
        ++support;
      }
    }
    mean_f /= static_cast<double>(support);
    mean_g /= static_cast<double>(support);
    double fg = 0.0, gg2 = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > 0.0) {
        fg += (gf[j] - mean_f) * (gg[j] - mean_g);
        gg2 += (gg[j] - mean_g) * (gg[j] - mean_g);
      }
    }
    double lambda = gg2 > 1e-30 ? std::max(0.0, fg / gg2) : 0.0;
    if (g(p) > delta + 1e-8) {
      lambda = 0.0;  // constraint inactive
    }
    double res2 = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > 0.0) {
        const double r = (gf[j] - mean_f) - lambda * (gg[j] - mean_g);
        res2 += r * r;
      }
    }
    return {lambda, std::sqrt(res2)};
  }
};

// Pull an infeasible trial back to the constraint boundary along the segment
// toward a feasible point. Returns the feasible-side blend.
Vec retract_to_boundary(const Objective& obj, const Vec& trial, const Vec& feasible) {
  double lo = 0.0, hi = 1.0;
  Vec w(trial.size());
  auto blend = [&](double th) {
    for (std::size_t j = 0; j < trial.size(); ++j) {
      w[j] = (1.0 - th) * trial[j] + th * feasible[j];
    }
  };
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    blend(mid);
    (obj.g(w) < obj.delta ? lo : hi) = mid;
  }
  blend(hi);
  return w;
}

PolishOutcome polish(const Objective& obj, Vec p, std::int64_t iteration_cap) {
  double f = obj.f(p);
  double g = obj.g(p);
  double eta = 0.25;
  Vec gf, gg, trial(p.size());
  std::int64_t it = 0;
  double residual = kInf;

  for (; it < iteration_cap; ++it) {
    obj.gradients(p, gf, gg);
    const auto [lambda, res] = obj.kkt(p, gf, gg);
    residual = res;
    if (res <= kStationarityTol) {
      break;
    }

    bool stepped = false;
    while (eta >= 1e-13) {
      // Multiplicative step in log space; zero cells stay zero.
      double lmax = -kInf;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) {
          trial[j] = std::log(p[j]) - eta * (gf[j] - lambda * gg[j]);
          lmax = std::max(lmax, trial[j]);
        } else {
          trial[j] = -kInf;
        }
      }
      detail::CompensatedSum norm;
      for (std::size_t j = 0; j < p.size(); ++j) {
        trial[j] = trial[j] == -kInf ? 0.0 : std::exp(trial[j] - lmax);
        norm.add(trial[j]);
      }
      for (std::size_t j = 0; j < p.size(); ++j) {
        trial[j] /= norm.value();
      }

      Vec candidate = trial;
      if (obj.g(candidate) < obj.delta) {
        if (g < obj.delta) {
          break;  // current point lost feasibility: give up on this seed
        }
        candidate = retract_to_boundary(obj, candidate, p);
      }
      const double fc = obj.f(candidate);
      if (fc < f - 1e-15 * std::max(1.0, std::abs(f))) {
        p = std::move(candidate);
        f = fc;
        g = obj.g(p);
        eta = std::min(eta * 1.5, 2.0);
        stepped = true;
        break;
      }
      eta *= 0.5;
    }
    if (!stepped) {
      break;
    }
  }
  obj.gradients(p, gf, gg);
  residual = obj.kkt(p, gf, gg).second;
  return PolishOutcome{std::move(p), f, g, residual, it};
}

// Boundary point on the segment between an infeasible and a feasible anchor.
Vec boundary_between(const Objective& obj, const Vec& infeasible, const Vec& feasible) {
  return retract_to_boundary(obj, infeasible, feasible);
}

}  // namespace

ProjectionResult mixture_construction(const ProbVec& q, Order order, double delta) {
  if (order.alpha() > 1.0 + Order::kUnitWindow) {
    throw std::invalid_argument("mixture_construction: requires 0 < alpha <= 1");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("mixture_construction: delta must be > 0");
  }
  require_positive(q);

  auto mp = mixture_point(q, order, delta);
  if (!mp) {
    double qmax = q[0];
    for (std::int64_t j = 1; j < q.k(); ++j) {
      qmax = std::max(qmax, q[j]);
    }
    std::ostringstream msg;
    msg << "mixture_construction: delta = " << delta
        << " is not achievable by nested conditionals; achievable range is (0, "
        << -std::log(qmax) << "]";
    throw InfeasibleError(msg.str(), 0.0, -std::log(qmax));
  }
  const double kl = kl_of(mp->p, q);
  return ProjectionResult{ProbVec(std::move(mp->p)),
                          kl,
                          mp->constraint,
                          ProjectionMethod::mixture_construction,
                          true,
                          mp->iterations,
                          mp->upper_gap,
                          mp->a_plus,
                          mp->a_minus};
}

ProjectionResult numeric_projection(const ProbVec& q, Order order, double delta) {
  if (q.k() > 10000) {
    throw std::invalid_argument("numeric_projection: k exceeds the dense-solver budget 1e4");
  }
  if (delta < 0.0) {
    throw std::invalid_argument("numeric_projection: delta must be >= 0");
  }
  require_positive(q);

  if (delta == 0.0) {
    Vec p(q.data());
    return ProjectionResult{ProbVec(std::move(p)), 0.0, 0.0,
                            ProjectionMethod::numeric_optimizer, true, 0, 0.0, 0, 0};
  }
  if (order.is_unit()) {
    return solve_unit_order(q, delta);
  }

  const Objective obj{q, order, delta};
  const std::int64_t k = q.k();

  std::int64_t min_cell = 0;
  for (std::int64_t j = 1; j < k; ++j) {
    if (q[j] < q[min_cell]) {
      min_cell = j;
    }
  }
  Vec anchor(static_cast<std::size_t>(k), 0.0);
  anchor[static_cast<std::size_t>(min_cell)] = 1.0;
  const double dmax = -std::log(q[min_cell]);

  if (delta > dmax + 1e-12) {
    const double akl = kl_of(anchor, q);
    const double ag = renyi_of(anchor, q, order);
    return ProjectionResult{ProbVec(std::move(anchor)), akl, ag,
                            ProjectionMethod::numeric_optimizer, false, 0, 0.0, 0, 0};
  }
  if (delta >= dmax - 1e-12) {
    const double akl = kl_of(anchor, q);
    const double ag = renyi_of(anchor, q, order);
    return ProjectionResult{ProbVec(std::move(anchor)), akl, ag,
                            ProjectionMethod::numeric_optimizer, true, 0, 0.0, 0, 0};
  }

  // Deterministic structured starts: the nested-conditional point, a boundary
  // blend from q toward the max-divergence vertex, and three boundary blends
  // seeded at prefix conditionals of q.
  std::vector<Vec> seeds;
  if (auto mp = mixture_point(q, order, delta)) {
    seeds.push_back(std::move(mp->p));
  }
  seeds.push_back(boundary_between(obj, Vec(q.data()), anchor));
  const auto idx = descending_mass_order(q);
  for (const double r : {0.25, 0.5, 0.75}) {
    const auto len = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(r * static_cast<double>(k))));
    Vec cond(static_cast<std::size_t>(k), 0.0);
    detail::CompensatedSum mass;
    for (std::int64_t i = 0; i < len; ++i) {
      mass.add(q[idx[static_cast<std::size_t>(i)]]);
    }
    for (std::int64_t i = 0; i < len; ++i) {
      const std::int64_t j = idx[static_cast<std::size_t>(i)];
      cond[static_cast<std::size_t>(j)] = q[j] / mass.value();
    }
    const double gc = renyi_of(cond, q, order);
    if (gc >= delta) {
      seeds.push_back(boundary_between(obj, Vec(q.data()), cond));
    } else {
      seeds.push_back(boundary_between(obj, cond, anchor));
    }
  }

  const std::int64_t per_seed_cap = 100000 / static_cast<std::int64_t>(seeds.size());
  std::optional<PolishOutcome> best;
  std::int64_t total_iters = 0;
  for (auto& seed : seeds) {
    PolishOutcome out = polish(obj, std::move(seed), per_seed_cap);
    total_iters += out.iterations;
    if (out.g < delta - 1e-9) {
      continue;  // lost feasibility; never report it
    }
    if (!best || out.f < best->f) {
      best = std::move(out);
    }
  }

  if (!best) {
    const double akl = kl_of(anchor, q);
    const double ag = renyi_of(anchor, q, order);
    return ProjectionResult{ProbVec(std::move(anchor)), akl, ag,
                            ProjectionMethod::numeric_optimizer, false, total_iters, 0.0, 0, 0};
  }
  const bool converged = best->residual <= kConvergedTol && best->g >= delta - 1e-8;
  return ProjectionResult{ProbVec(normalized(std::move(best->p))),
                          best->f,
                          best->g,
                          ProjectionMethod::numeric_optimizer,
                          converged,
                          total_iters,
                          0.0,
                          0,
                          0};
}

}  // namespace powdiv
