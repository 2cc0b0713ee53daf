#include <doctest.h>

#include <cmath>
#include <random>

#include "powdiv/divergence.hpp"

using namespace powdiv;

namespace {

ProbVec random_prob(std::mt19937_64& rng, std::int64_t k, double floor_mass = 0.0) {
  std::uniform_real_distribution<double> u(floor_mass, 1.0);
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

TEST_CASE("phi_alpha pinned values") {
  CHECK(phi_alpha(1.0, Order(2.0)) == 0.0);
  // direct evaluation: (t^2 - 2(t-1) - 1)/2 = (t-1)^2/2 = 2 at t = 3
  CHECK(phi_alpha(3.0, Order(2.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(phi_alpha(0.0, Order(1.0)) == doctest::Approx(1.0));
  CHECK(phi_alpha(0.0, Order(2.0)) == doctest::Approx(0.5));   // 1/alpha
  CHECK(phi_alpha(0.0, Order(0.5)) == doctest::Approx(2.0));   // finite below 1 too
  CHECK_THROWS_AS(phi_alpha(-0.1, Order(2.0)), std::domain_error);
}

TEST_CASE("phi_alpha is convex") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(0.0, 4.0);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (double alpha : {0.5, 1.0, 1.3, 2.0, 3.0}) {
    const Order order(alpha);
    for (int i = 0; i < 200; ++i) {
      const double t1 = t(rng), t2 = t(rng), l = lam(rng);
      const double mid = phi_alpha(l * t1 + (1 - l) * t2, order);
      const double chord = l * phi_alpha(t1, order) + (1 - l) * phi_alpha(t2, order);
      CHECK(mid <= chord + 1e-12);
    }
  }
}

TEST_CASE("power divergence basics") {
  const ProbVec u5 = ProbVec::uniform(5);
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    CHECK(power_divergence(u5, u5, Order(alpha)).value == 0.0);
  }

  // half-support alternative against uniform at k = 1e6, order 2: the exact
  // finite-k value is ((k/(k/2))^{a-1}-1)/(a(a-1)) = 0.5 for even k.
  const std::int64_t k = 1000000;
  std::vector<double> half(static_cast<std::size_t>(k), 0.0);
  for (std::int64_t j = 0; j < k / 2; ++j) {
    half[static_cast<std::size_t>(j)] = 2.0 / static_cast<double>(k);
  }
  const double d2 = power_divergence(ProbVec(std::move(half)), ProbVec::uniform(k), Order(2.0)).value;
  CHECK(d2 == doctest::Approx(0.5).epsilon(1e-5));

  // D_2 = (1/2) sum (p-q)^2/q = (1/2)(0.0625/0.25 + 0.0625/0.75) = 1/6
  const ProbVec p({0.5, 0.5});
  const ProbVec q({0.25, 0.75});
  CHECK(power_divergence(p, q, Order(2.0)).value == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("power divergence rejects bad inputs") {
  const ProbVec p({0.5, 0.5});
  const ProbVec qz({1.0, 0.0});
  bool named_cell = false;
  try {
    power_divergence(p, qz, Order(2.0));
  } catch (const std::invalid_argument& e) {
    named_cell = std::string(e.what()).find("q[1]") != std::string::npos;
  }
  CHECK(named_cell);
  CHECK_THROWS_AS(power_divergence(p, ProbVec::uniform(3), Order(2.0)),
                  std::invalid_argument);
}

TEST_CASE("power divergence positivity iff distinct") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const ProbVec p = random_prob(rng, 6, 0.01);
    const ProbVec q = random_prob(rng, 6, 0.01);
    for (double alpha : {0.5, 1.0, 2.0}) {
      const double d = power_divergence(p, q, Order(alpha)).value;
      CHECK(d >= 0.0);
      double max_gap = 0.0;
      for (std::int64_t j = 0; j < 6; ++j) {
        max_gap = std::max(max_gap, std::abs(p[j] - q[j]));
      }
      if (max_gap >= 1e-12) {
        CHECK(d > 0.0);
      }
    }
    CHECK(power_divergence(p, p, Order(1.5)).value == 0.0);
  }
}

TEST_CASE("renyi divergence pinned values") {
  const ProbVec p({1.0, 0.0});
  const ProbVec q({0.5, 0.5});
  CHECK(renyi_divergence(p, q, Order(0.5)).value == doctest::Approx(M_LN2).epsilon(1e-14));
  CHECK(renyi_divergence(q, q, Order(0.5)).value == 0.0);
  CHECK(renyi_divergence(q, q, Order(3.0)).value == 0.0);
}

TEST_CASE("renyi at order one half is twice the Bhattacharyya distance") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const ProbVec p = random_prob(rng, 5, 0.01);
    const ProbVec q = random_prob(rng, 5, 0.01);
    double bc = 0.0;
    for (std::int64_t j = 0; j < 5; ++j) {
      bc += std::sqrt(p[j] * q[j]);
    }
    const double bhattacharyya = -std::log(bc);
    CHECK(renyi_divergence(p, q, Order(0.5)).value ==
          doctest::Approx(2.0 * bhattacharyya).epsilon(1e-12));
  }
}

TEST_CASE("renyi is nondecreasing in the order") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const ProbVec p = random_prob(rng, 7, 0.01);
    const ProbVec q = random_prob(rng, 7, 0.01);
    double prev = -1.0;
    for (int g = 1; g <= 30; ++g) {
      const double alpha = 0.1 * g;
      const double d = renyi_divergence(p, q, Order(alpha)).value;
      CHECK(d >= prev - 1e-12);
      prev = d;
    }
  }
}

TEST_CASE("renyi_from_power bridges the two divergences") {
  CHECK(renyi_from_power({0.0, Order(2.0), DivergenceKind::power}).value == 0.0);

  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const ProbVec p = random_prob(rng, 6, 0.01);
    const ProbVec q = random_prob(rng, 6, 0.01);
    std::uniform_real_distribution<double> a(0.1, 3.0);
    const double alpha = a(rng);
    const Order order(alpha);
    const double direct = renyi_divergence(p, q, order).value;
    const double bridged = renyi_from_power(power_divergence(p, q, order)).value;
    CHECK(bridged == doctest::Approx(direct).epsilon(1e-10));
  }

  // half-support limit at order 1/2: delta = 4 - 2 sqrt(2) maps to ln 2
  const double delta_half = 4.0 - 2.0 * std::sqrt(2.0);
  CHECK(renyi_from_power({delta_half, Order(0.5), DivergenceKind::power}).value ==
        doctest::Approx(M_LN2).epsilon(1e-14));

  CHECK_THROWS_AS(renyi_from_power({10.0, Order(0.5), DivergenceKind::power}),
                  std::domain_error);
  CHECK_THROWS_AS(renyi_from_power({0.1, Order(2.0), DivergenceKind::renyi}),
                  std::invalid_argument);
}

TEST_CASE("classic statistics pinned values") {
  const ProbVec q({0.5, 0.5});
  const Counts c({2, 0});
  CHECK(classic_statistic(StatKind::pearson, c, q) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(classic_statistic(StatKind::lrt, c, q) == doctest::Approx(4.0 * M_LN2).epsilon(1e-14));

  // counts exactly n*q
  const Counts fit({5, 5});
  CHECK(classic_statistic(StatKind::pearson, fit, q) == doctest::Approx(0.0));
  CHECK(classic_statistic(StatKind::lrt, fit, q) == doctest::Approx(0.0));
  CHECK(classic_statistic(StatKind::freeman_tukey, fit, q) == doctest::Approx(0.0));

  CHECK_THROWS_AS(Counts(std::vector<std::int64_t>{}), std::invalid_argument);
}

TEST_CASE("scaled statistic matches the classical formulas") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::int64_t> kk(2, 20);
  std::uniform_int_distribution<std::int64_t> cnt(0, 30);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t k = kk(rng);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k));
    std::int64_t n = 0;
    for (auto& x : counts) {
      x = cnt(rng);
      n += x;
    }
    if (n == 0) {
      counts[0] = 1;
    }
    const Counts c(counts);
    const ProbVec q = random_prob(rng, k, 0.05);
    CHECK(scaled_statistic(c, q, Order(2.0)) ==
          doctest::Approx(classic_statistic(StatKind::pearson, c, q)).epsilon(1e-10));
    CHECK(scaled_statistic(c, q, Order(1.0)) ==
          doctest::Approx(classic_statistic(StatKind::lrt, c, q)).epsilon(1e-10));
    CHECK(scaled_statistic(c, q, Order(0.5)) ==
          doctest::Approx(classic_statistic(StatKind::freeman_tukey, c, q)).epsilon(1e-10));
  }
}

TEST_CASE("phi difference bounds") {
  // both bounds collapse on the diagonal
  auto [l0, u0] = phi_difference_bounds(1.3, 1.3, Order(1.7));
  CHECK(l0 == 0.0);
  CHECK(u0 == 0.0);

  // phi_2'(1) = 0, so L = 0 and U = (1/2)(y-x)^2 = 0.5; the increment is 0.5
  auto [l1, u1] = phi_difference_bounds(1.0, 2.0, Order(2.0));
  CHECK(l1 == doctest::Approx(0.0));
  CHECK(u1 == doctest::Approx(0.5));
  const double inc = phi_alpha(2.0, Order(2.0)) - phi_alpha(1.0, Order(2.0));
  CHECK(inc == doctest::Approx(0.5));
  CHECK(l1 <= inc + 1e-12);
  CHECK(inc <= u1 + 1e-12);

  // order-1 sandwich at a concrete pair
  auto [l2, u2] = phi_difference_bounds(0.5, 1.5, Order(1.0));
  const double inc2 = phi_alpha(1.5, Order(1.0)) - phi_alpha(0.5, Order(1.0));
  CHECK(l2 <= inc2 + 1e-12);
  CHECK(inc2 <= u2 + 1e-12);

  // x = 0 below order 2: upper bound is +infinity
  auto [l3, u3] = phi_difference_bounds(0.0, 1.0, Order(1.5));
  CHECK(std::isfinite(l3));
  CHECK(std::isinf(u3));

  CHECK_THROWS_AS(phi_difference_bounds(1.0, 2.0, Order(0.9)), std::domain_error);
  CHECK_THROWS_AS(phi_difference_bounds(1.0, 2.0, Order(2.1)), std::domain_error);
}

TEST_CASE("phi difference sandwich on a random grid") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (double alpha : {1.0, 1.25, 1.5, 1.75, 2.0}) {
    const Order order(alpha);
    for (int i = 0; i < 100; ++i) {
      double x = u(rng), y = u(rng);
      if (alpha < 2.0 && x == 0.0) {
        x = 0.5;
      }
      const auto [lo, hi] = phi_difference_bounds(x, y, order);
      const double inc = phi_alpha(y, order) - phi_alpha(x, order);
      CHECK(lo <= inc + 1e-12);
      CHECK(inc <= hi + 1e-12);
    }
  }
}

TEST_CASE("power divergence is continuous at order one") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const ProbVec p = random_prob(rng, 8, 0.01);
    const ProbVec q = random_prob(rng, 8, 0.01);
    const double at_one = power_divergence(p, q, Order(1.0)).value;
    CHECK(std::abs(power_divergence(p, q, Order(1.0 + 1e-6)).value - at_one) < 1e-4);
    CHECK(std::abs(power_divergence(p, q, Order(1.0 - 1e-6)).value - at_one) < 1e-4);
  }
}
