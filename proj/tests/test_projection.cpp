#include <doctest.h>

#include <cmath>
#include <random>

#include "powdiv/divergence.hpp"
#include "powdiv/projection.hpp"

using namespace powdiv;

namespace {

// Finite-difference KKT stationarity over the support: project both central
// FD gradients onto the simplex tangent, fit the multiplier, and measure the
// residual. Independent of the solver's own gradient code.
double fd_kkt_residual(const ProjectionResult& result, const ProbVec& q, Order order,
                       double delta) {
  const std::vector<double>& p = result.minimizer.data();
  const double h = 1e-6;
  const std::size_t k = p.size();

  auto f_of = [&](const std::vector<double>& v) { return detail::kl_raw(v, q.data()); };
  auto g_of = [&](const std::vector<double>& v) {
    return detail::renyi_divergence_raw(v, q.data(), order);
  };

  std::vector<double> gf, gg;
  std::vector<std::size_t> support;
  std::vector<double> work(p);
  for (std::size_t j = 0; j < k; ++j) {
    if (p[j] <= 0.0) {
      continue;
    }
    support.push_back(j);
    work[j] = p[j] + h;
    const double f_hi = f_of(work), g_hi = g_of(work);
    work[j] = p[j] - h;
    const double f_lo = f_of(work), g_lo = g_of(work);
    work[j] = p[j];
    gf.push_back((f_hi - f_lo) / (2.0 * h));
    gg.push_back((g_hi - g_lo) / (2.0 * h));
  }

  double mf = 0.0, mg = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    mf += gf[i];
    mg += gg[i];
  }
  mf /= static_cast<double>(support.size());
  mg /= static_cast<double>(support.size());
  double fg = 0.0, gg2 = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    fg += (gf[i] - mf) * (gg[i] - mg);
    gg2 += (gg[i] - mg) * (gg[i] - mg);
  }
  double lambda = gg2 > 1e-30 ? fg / gg2 : 0.0;
  if (g_of(p) > delta + 1e-8) {
    lambda = 0.0;
  }
  lambda = std::max(0.0, lambda);
  double res2 = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double r = (gf[i] - mf) - lambda * (gg[i] - mg);
    res2 += r * r;
  }
  return std::sqrt(res2);
}

ProbVec rough_q(std::mt19937_64& rng, std::int64_t k) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> v(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& x : v) {
    x = u(rng);
    total += x;
  }
  for (auto& x : v) {
    x /= total;
  }
  return ProbVec(std::move(v));
}

}  // namespace

TEST_CASE("mixture construction on the power-of-two uniform") {
  const ProbVec q = ProbVec::uniform(1024);
  const ProjectionResult r = mixture_construction(q, Order(0.5), M_LN2);
  CHECK(r.a_plus_size == 512);
  CHECK(r.a_minus_size == 511);
  CHECK(r.kl_value == doctest::Approx(M_LN2).epsilon(1e-12));
  CHECK(std::abs(r.kl_value - M_LN2) < 1e-9);
  CHECK(std::abs(r.constraint_value - M_LN2) <= 1e-10);
  CHECK(r.converged);
  CHECK(r.method == ProjectionMethod::mixture_construction);
  // the prefix hits the level exactly, so the upper gap is one cell wide
  CHECK(r.upper_gap == doctest::Approx(std::log(1024.0 / 511.0) - M_LN2).epsilon(1e-9));
}

TEST_CASE("mixture construction near-zero level") {
  const ProbVec q = ProbVec::uniform(1024);
  const ProjectionResult r = mixture_construction(q, Order(0.5), 1e-4);
  CHECK(r.kl_value >= 1e-4 - 1e-12);
  CHECK(r.kl_value < 1e-3);
  CHECK(std::abs(r.constraint_value - 1e-4) <= 1e-10);
}

TEST_CASE("mixture construction off-grid uniform") {
  const ProbVec q = ProbVec::uniform(1000);
  const ProjectionResult r = mixture_construction(q, Order(0.9), M_LN2);
  CHECK(r.kl_value >= M_LN2 - 1e-12);
  CHECK(r.kl_value <= M_LN2 + std::log(500.0 / 499.0) + 1e-12);
}

TEST_CASE("mixture construction validates and reports feasibility") {
  const ProbVec q = ProbVec::uniform(4);
  CHECK_THROWS_AS(mixture_construction(q, Order(0.5), 2.0), InfeasibleError);
  try {
    mixture_construction(q, Order(0.5), 2.0);
  } catch (const InfeasibleError& e) {
    CHECK(e.achievable_high == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(mixture_construction(q, Order(2.0), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mixture_construction(q, Order(0.5), 0.0), std::invalid_argument);
}

TEST_CASE("mixture construction upper gap shrinks with k") {
  double prev_gap = 1e9;
  for (std::int64_t k : {64, 256, 1024}) {
    const ProjectionResult r = mixture_construction(ProbVec::uniform(k), Order(0.5), 0.5);
    CHECK(r.kl_value <= 0.5 + r.upper_gap + 1e-12);
    CHECK(r.upper_gap <= prev_gap + 1e-15);
    prev_gap = r.upper_gap;
  }
}

TEST_CASE("numeric projection at order one is the exact tilt") {
  const ProbVec u2 = ProbVec::uniform(2);
  const ProjectionResult r = numeric_projection(u2, Order(1.0), 0.1);
  CHECK(r.converged);
  CHECK(r.kl_value == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(r.constraint_value == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(r.minimizer[0] > r.minimizer[1]);  // larger coordinate first
  // the tilted pair satisfies ln 2 + p ln p + (1-p) ln(1-p) = 0.1
  const double p = r.minimizer[0];
  CHECK(M_LN2 + p * std::log(p) + (1 - p) * std::log(1 - p) ==
        doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("numeric projection trivial and infeasible levels") {
  const ProbVec q({0.5, 0.3, 0.2});
  const ProjectionResult zero = numeric_projection(q, Order(0.7), 0.0);
  CHECK(zero.converged);
  CHECK(zero.kl_value == 0.0);
  CHECK(zero.minimizer.data() == q.data());

  // beyond -ln q_min nothing is feasible; the solver must say so
  const ProjectionResult off = numeric_projection(q, Order(0.7), std::log(5.0) + 0.5);
  CHECK_FALSE(off.converged);

  // at exactly -ln q_min the point mass on the smallest cell is the optimum
  const ProjectionResult edge = numeric_projection(q, Order(1.0), std::log(5.0));
  CHECK(edge.converged);
  CHECK(edge.kl_value == doctest::Approx(std::log(5.0)).epsilon(1e-9));
  CHECK(edge.minimizer[2] == doctest::Approx(1.0));

  CHECK_THROWS_AS(numeric_projection(q, Order(1.0), -0.1), std::invalid_argument);
}

TEST_CASE("numeric projection agrees with the mixture on the big uniform") {
  const ProbVec q = ProbVec::uniform(1024);
  const ProjectionResult mix = mixture_construction(q, Order(0.5), M_LN2);
  const ProjectionResult num = numeric_projection(q, Order(0.5), M_LN2);
  CHECK(num.converged);
  CHECK(std::abs(num.kl_value - M_LN2) < 1e-3);
  CHECK(num.kl_value <= mix.kl_value + 1e-6);  // the mixture start is available to it
}

TEST_CASE("numeric projection respects the lower bound for orders up to one") {
  std::mt19937_64 rng(101);
  const std::vector<ProbVec> qs = {ProbVec::uniform(16), rough_q(rng, 12), rough_q(rng, 30)};
  for (const auto& q : qs) {
    for (double alpha : {0.3, 0.7, 1.0}) {
      for (double delta : {0.05, 0.2, 0.6}) {
        const ProjectionResult r = numeric_projection(q, Order(alpha), delta);
        if (r.converged) {
          CHECK(r.kl_value >= delta - 1e-6);
          CHECK(r.constraint_value >= delta - 1e-8);
        }
      }
    }
  }
}

TEST_CASE("numeric projection never loses to the mixture") {
  std::mt19937_64 rng(202);
  const std::vector<ProbVec> qs = {ProbVec::uniform(64), rough_q(rng, 20)};
  for (const auto& q : qs) {
    for (double alpha : {0.4, 0.8, 1.0}) {
      for (double delta : {0.1, 0.4}) {
        const ProjectionResult mix = mixture_construction(q, Order(alpha), delta);
        const ProjectionResult num = numeric_projection(q, Order(alpha), delta);
        CHECK(num.kl_value <= mix.kl_value + 1e-6);
      }
    }
  }
}

TEST_CASE("feasible sets shrink as the constraint order drops") {
  // For alpha < beta <= 1 the alpha-constrained region is contained in the
  // beta-constrained one, so its optimum cannot be smaller. beta = 1 is
  // solved exactly, making the comparison sharp.
  std::mt19937_64 rng(303);
  const std::vector<ProbVec> qs = {ProbVec::uniform(32), rough_q(rng, 10)};
  for (const auto& q : qs) {
    for (double delta : {0.1, 0.3}) {
      const double kl_one = numeric_projection(q, Order(1.0), delta).kl_value;
      for (double alpha : {0.2, 0.5, 0.8}) {
        const ProjectionResult r = numeric_projection(q, Order(alpha), delta);
        CHECK(r.kl_value >= kl_one - 1e-8);
      }
    }
  }
  // exact-prefix levels pin both optima to the level itself
  const ProbVec u64 = ProbVec::uniform(64);
  const double level = std::log(64.0 / 16.0);
  const double a = numeric_projection(u64, Order(0.3), level).kl_value;
  const double b = numeric_projection(u64, Order(0.9), level).kl_value;
  CHECK(a >= b - 1e-8);
  CHECK(a == doctest::Approx(level).epsilon(1e-6));
  CHECK(b == doctest::Approx(level).epsilon(1e-6));
}

TEST_CASE("converged projections pass a finite-difference stationarity check") {
  std::mt19937_64 rng(404);
  struct Instance {
    ProbVec q;
    double alpha, delta;
  };
  const std::vector<Instance> instances = {
      {ProbVec::uniform(64), 0.5, M_LN2},
      {rough_q(rng, 8), 0.6, 0.15},
      {rough_q(rng, 16), 1.0, 0.25},
      {ProbVec::uniform(10), 0.8, 0.3},
  };
  for (const auto& inst : instances) {
    const ProjectionResult r = numeric_projection(inst.q, Order(inst.alpha), inst.delta);
    if (r.converged) {
      CHECK(fd_kkt_residual(r, inst.q, Order(inst.alpha), inst.delta) < 1e-5);
    }
  }
}

TEST_CASE("numeric projection rejects oversized problems") {
  CHECK_THROWS_AS(numeric_projection(ProbVec::uniform(20000), Order(0.5), 0.1),
                  std::invalid_argument);
}

TEST_CASE("projection above order one runs as an exploratory program") {
  // no variational identity is claimed here; the solver must still return a
  // feasible boundary point when it reports convergence
  std::mt19937_64 rng(505);
  const std::vector<ProbVec> qs = {ProbVec::uniform(16), rough_q(rng, 8)};
  for (const auto& q : qs) {
    for (double delta : {0.1, 0.4}) {
      const ProjectionResult r = numeric_projection(q, Order(2.0), delta);
      if (r.converged) {
        CHECK(r.constraint_value >= delta - 1e-8);
        CHECK(r.kl_value >= 0.0);
        // above order one the constraint is weaker than the objective level
        CHECK(r.kl_value <= delta + 1e-6);
      }
    }
  }
}

TEST_CASE("numeric projection matches a brute-force oracle at k = 2") {
  // independent oracle: scan the whole 1-simplex, keep the best feasible KL
  auto brute_force = [](const ProbVec& q, double alpha, double delta) {
    const Order order(alpha);
    double best = std::numeric_limits<double>::infinity();
    const int grid = 2000000;
    std::vector<double> p(2);
    for (int i = 0; i <= grid; ++i) {
      p[0] = static_cast<double>(i) / grid;
      p[1] = 1.0 - p[0];
      if (detail::renyi_divergence_raw(p, q.data(), order) >= delta) {
        best = std::min(best, detail::kl_raw(p, q.data()));
      }
    }
    return best;
  };
  struct Case {
    ProbVec q;
    double alpha, delta;
  };
  const std::vector<Case> cases = {
      {ProbVec({0.7, 0.3}), 0.5, 0.2},
      {ProbVec({0.7, 0.3}), 0.8, 0.35},
      {ProbVec({0.5, 0.5}), 0.5, 0.3},
      {ProbVec({0.9, 0.1}), 0.6, 0.5},
  };
  for (const auto& c : cases) {
    const double oracle = brute_force(c.q, c.alpha, c.delta);
    const ProjectionResult r = numeric_projection(c.q, Order(c.alpha), c.delta);
    REQUIRE(std::isfinite(oracle));
    // the grid oracle overshoots the continuum optimum by up to ~3e-6
    CHECK(r.kl_value >= oracle - 1e-5);
    CHECK(r.kl_value <= oracle + 1e-4);
  }
}
