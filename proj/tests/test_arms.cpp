#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "bb/arms.hpp"
#include "bb/rng.hpp"
#include "test_util.hpp"

using bb::EmpiricalDist;
using bb::Family;
using bb::FamilyShape;
using bb::RewardModel;
using bb::RngStream;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("means are the declared parameters") {
  CHECK(RewardModel::bernoulli(0.45).mean() == 0.45);
  CHECK(RewardModel::finite_support({0.0, 1.0}, {0.5, 0.5}).mean() == 0.5);
  CHECK(RewardModel::exponential(2.0).mean() == 2.0);
  CHECK(RewardModel::gaussian(1.5, 2.0).mean() == 1.5);
  CHECK(RewardModel::poisson(3.0).mean() == 3.0);
  CHECK(RewardModel::point_mass(0.8).mean() == 0.8);
}

TEST_CASE("factories reject out-of-domain parameters by field") {
  using testutil::throws_with;
  using Err = std::invalid_argument;
  CHECK(throws_with<Err>([] { RewardModel::bernoulli(1.2); }, "bernoulli mean"));
  CHECK(throws_with<Err>([] { RewardModel::gaussian(0.0, 0.0); }, "sigma2"));
  CHECK_THROWS_AS(RewardModel::poisson(0.0), Err);
  CHECK_THROWS_AS(RewardModel::exponential(-1.0), Err);
  CHECK(throws_with<Err>([] { RewardModel::finite_support({0.2, 1.5}, {0.5, 0.5}); }, "points"));
  CHECK(throws_with<Err>([] { RewardModel::finite_support({0.2, 0.6}, {0.5, 0.4}); }, "sum to 1"));
  CHECK_THROWS_AS(RewardModel::finite_support({0.2, 0.6}, {1.2, -0.2}), Err);
  CHECK_THROWS_AS(RewardModel::finite_support({0.2}, {0.5, 0.5}), Err);
  CHECK_THROWS_AS(RewardModel::finite_support({}, {}), Err);
}

TEST_CASE("finite support normalizes ordering and merges duplicate points") {
  const RewardModel m = RewardModel::finite_support({0.7, 0.1, 0.7}, {0.25, 0.5, 0.25});
  REQUIRE(m.points().size() == 2);
  CHECK(m.points()[0] == 0.1);
  CHECK(m.points()[1] == 0.7);
  CHECK(m.weights()[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.weights()[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate bernoulli draws are constant") {
  RngStream rng(7);
  const RewardModel zero = RewardModel::bernoulli(0.0);
  const RewardModel one = RewardModel::bernoulli(1.0);
  for (int i = 0; i < 100; ++i) {
    CHECK(bb::sample(zero, rng) == 0.0);
    CHECK(bb::sample(one, rng) == 1.0);
  }
}

TEST_CASE("bernoulli(0.3) sample mean over 1e6 draws is 0.3 within 0.002") {
  RngStream rng(11);
  const RewardModel m = RewardModel::bernoulli(0.3);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += bb::sample(m, rng);
  CHECK(std::abs(sum / n - 0.3) < 0.002);  // 4 sigma ~ 0.0018
}

TEST_CASE("sampling is bit-reproducible for a fixed stream") {
  const RewardModel m = RewardModel::gaussian(0.0, 1.0);
  RngStream a(42), b(42);
  for (int i = 0; i < 20; ++i) CHECK(bb::sample(m, a) == bb::sample(m, b));
}

TEST_CASE("per-family sample means approach the model mean") {
  const int n = 100000;
  struct Case {
    RewardModel model;
    double sd;  // standard deviation of one draw
  };
  const Case cases[] = {
      {RewardModel::gaussian(-1.5, 4.0), 2.0},
      {RewardModel::poisson(3.0), std::sqrt(3.0)},
      {RewardModel::exponential(2.0), 2.0},
      {RewardModel::finite_support({0.0, 0.4, 1.0}, {0.2, 0.5, 0.3}), 1.0},
  };
  std::uint64_t seed = 100;
  for (const Case& c : cases) {
    RngStream rng(seed++);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += bb::sample(c.model, rng);
    CHECK(std::abs(sum / n - c.model.mean()) < 4.0 * c.sd / std::sqrt(double(n)));
  }
}

TEST_CASE("finite-support draws land on support points with the right frequencies") {
  const RewardModel m = RewardModel::finite_support({0.0, 0.4, 1.0}, {0.2, 0.5, 0.3});
  RngStream rng(5);
  int hits[3] = {0, 0, 0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = bb::sample(m, rng);
    if (x == 0.0)
      ++hits[0];
    else if (x == 0.4)
      ++hits[1];
    else if (x == 1.0)
      ++hits[2];
  }
  CHECK(hits[0] + hits[1] + hits[2] == n);
  CHECK(std::abs(hits[0] / double(n) - 0.2) < 0.006);
  CHECK(std::abs(hits[1] / double(n) - 0.5) < 0.007);
  CHECK(std::abs(hits[2] / double(n) - 0.3) < 0.006);
}

TEST_CASE("bernoulli kl matches the direct formula and boundary conventions") {
  const FamilyShape bern{Family::bernoulli, 1.0};
  CHECK(bb::kl_mean(bern, 0.5, 0.5) == 0.0);
  CHECK(bb::kl_mean(bern, 0.3, 0.45) == doctest::Approx(0.047173).epsilon(1e-4));
  CHECK(bb::kl_mean(bern, 0.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bb::kl_mean(bern, 1.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bb::kl_mean(bern, 0.5, 0.0) == kInf);
  CHECK(bb::kl_mean(bern, 0.5, 1.0) == kInf);
  CHECK(bb::kl_mean(bern, 0.0, 0.0) == 0.0);
  CHECK(bb::kl_mean(bern, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(bb::kl_mean(bern, -0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(bb::kl_mean(bern, 0.5, 1.1), std::domain_error);
}

TEST_CASE("gaussian, poisson and exponential kl formulas") {
  CHECK(bb::kl_mean({Family::gaussian, 1.0}, 0.0, 1.0) == 0.5);
  CHECK(bb::kl_mean({Family::gaussian, 2.0}, 1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-12));

  const FamilyShape pois{Family::poisson, 1.0};
  CHECK(bb::kl_mean(pois, 2.0, 2.0) == 0.0);
  CHECK(bb::kl_mean(pois, 1.0, 2.0) ==
        doctest::Approx(2.0 - 1.0 + std::log(0.5)).epsilon(1e-12));
  CHECK(bb::kl_mean(pois, 0.0, 2.0) == 2.0);
  CHECK(bb::kl_mean(pois, 2.0, 0.0) == kInf);

  const FamilyShape expo{Family::exponential, 1.0};
  CHECK(bb::kl_mean(expo, 2.0, 2.0) == 0.0);
  CHECK(bb::kl_mean(expo, 1.0, 2.0) == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));
  CHECK(bb::kl_mean(expo, 0.0, 2.0) == kInf);
  CHECK(bb::kl_mean(expo, 2.0, 0.0) == kInf);

  CHECK_THROWS_AS(bb::kl_mean({Family::finite_support, 1.0}, 0.3, 0.5), std::invalid_argument);
}

TEST_CASE("kl is zero only at equality and increases away from mu1") {
  const FamilyShape bern{Family::bernoulli, 1.0};
  double prev = 0.0;
  for (double mu2 = 0.3; mu2 <= 0.9 + 1e-12; mu2 += 0.05) {
    const double v = bb::kl_mean(bern, 0.3, mu2);
    if (mu2 == 0.3) {
      CHECK(v == 0.0);
    } else {
      CHECK(v > prev);
    }
    prev = v;
  }
}

TEST_CASE("kinf on exponential families reduces to the one-sided kl") {
  const RewardModel bern = RewardModel::bernoulli(0.3);
  CHECK(bb::kinf(bern, 0.45) == doctest::Approx(0.047173).epsilon(1e-4));
  CHECK(bb::kinf(bern, 0.2) == 0.0);   // already above the target
  CHECK(bb::kinf(bern, 0.3) == 0.0);
  CHECK(bb::kinf(bern, 1.0) == kInf);  // no bernoulli with mean 1 dominates 0.3
  CHECK(bb::kinf(RewardModel::gaussian(0.0, 1.0), 1.0) == 0.5);
  CHECK(bb::kinf(RewardModel::poisson(1.0), 2.0) ==
        doctest::Approx(1.0 + std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("finite-support kinf: point mass at zero against mu = 0.5 gives ln 2") {
  const RewardModel m = RewardModel::finite_support({0.0}, {1.0});
  CHECK(bb::kinf(m, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-3));
  CHECK(bb::kinf(m, 0.9) == doctest::Approx(std::log(10.0)).epsilon(1e-3));
  CHECK(bb::kinf(m, 0.0) == 0.0);
  CHECK(bb::kinf(m, 1.0) == kInf);
}

TEST_CASE("finite-support kinf is nondecreasing in mu and zero below the mean") {
  const RewardModel m = RewardModel::finite_support({0.1, 0.5, 0.9}, {0.3, 0.4, 0.3});
  double prev = -1.0;
  for (double mu = 0.0; mu < 1.0; mu += 0.01) {
    const double v = bb::kinf(m, mu);
    CHECK(v >= prev - 1e-12);
    if (mu <= m.mean()) CHECK(v == 0.0);
    prev = v;
  }
}

TEST_CASE("finite-support kinf agrees with the primal simplex grid") {
  const std::vector<double> xs[] = {{0.0}, {0.0, 1.0}, {0.2, 0.7}, {0.1, 0.5, 0.9}};
  const std::vector<double> ws[] = {{1.0}, {0.6, 0.4}, {0.5, 0.5}, {0.3, 0.4, 0.3}};
  const double mus[] = {0.35, 0.75, 0.62, 0.71};
  for (int i = 0; i < 4; ++i) {
    const RewardModel m = RewardModel::finite_support(xs[i], ws[i]);
    const double dual = bb::kinf(m, mus[i]);
    const double grid = testutil::kinf_primal_grid(m.points(), m.weights(), mus[i]);
    CHECK(std::abs(dual - grid) <= 2e-3);
  }
}

TEST_CASE("finite-support kinf on {0,1} support matches bernoulli kl") {
  RngStream rng(2024);
  for (int i = 0; i < 50; ++i) {
    const double p = testutil::uniform_in(rng, 0.05, 0.95);
    const double mu = testutil::uniform_in(rng, 0.05, 0.98);
    const RewardModel m = RewardModel::finite_support({0.0, 1.0}, {1.0 - p, p});
    const double expect = mu > p ? bb::kl_mean({Family::bernoulli, 1.0}, p, mu) : 0.0;
    CHECK(std::abs(bb::kinf(m, mu) - expect) <= 1e-5);
  }
}

TEST_CASE("empirical distributions accumulate observations and feed kinf") {
  EmpiricalDist d;
  d.add(0.5);
  d.add(0.0);
  d.add(0.5);
  REQUIRE(d.n == 3);
  REQUIRE(d.points.size() == 2);
  CHECK(d.points[0] == 0.0);
  CHECK(d.counts[0] == 1);
  CHECK(d.counts[1] == 2);
  CHECK(d.mean() == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(bb::kinf(d, 0.2) == 0.0);
  CHECK(bb::kinf(d, 0.9) > 0.0);
  CHECK_THROWS_AS(d.add(1.5), std::domain_error);
  CHECK_THROWS_AS(bb::kinf(EmpiricalDist{}, 0.5), std::invalid_argument);

  // same distribution as a model: values agree
  const RewardModel m = RewardModel::finite_support({0.0, 0.5}, {1.0 / 3, 2.0 / 3});
  CHECK(bb::kinf(d, 0.8) == doctest::Approx(bb::kinf(m, 0.8)).epsilon(1e-9));
}

TEST_CASE("point-mass models sample their value and have degenerate divergences") {
  const RewardModel m = RewardModel::point_mass(1.2);
  RngStream rng(3);
  CHECK(bb::sample(m, rng) == 1.2);
  CHECK(bb::kinf(m, 1.0) == 0.0);
  CHECK(bb::kinf(m, 1.3) == kInf);
  CHECK(bb::kl_mean({Family::point_mass, 1.0}, 1.2, 1.2) == 0.0);
  CHECK(bb::kl_mean({Family::point_mass, 1.0}, 1.2, 1.3) == kInf);
}

TEST_CASE("beta sampler has the right means") {
  RngStream rng(17);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += bb::sample_beta(rng, 1.0, 1.0);
  CHECK(std::abs(sum / n - 0.5) < 0.004);

  sum = 0.0;
  for (int i = 0; i < n; ++i) sum += bb::sample_beta(rng, 4.0, 3.0);
  CHECK(std::abs(sum / n - 4.0 / 7) < 0.004);
}
