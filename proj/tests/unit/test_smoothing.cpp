#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "calib/error.hpp"
#include "calib/smoothing.hpp"
#include "support/generators.hpp"

namespace calib {
namespace {

// Literal grid procedure: shift, round to the nearest grid point, project.
double round_on_shifted_grid(double p, double sigma, double w) {
  double i = std::round((p - w) / (2.0 * sigma));
  return std::clamp(w + 2.0 * i * sigma, 0.0, 1.0);
}

std::vector<std::pair<double, double>> probe_pairs() {
  std::vector<std::pair<double, double>> pairs{{0.37, 0.15}, {0.0, 0.2}, {1.0, 0.2}, {0.05, 0.1},
                                               {0.95, 0.3}, {0.5, 1.0}, {0.2, 0.6}};
  SplitMix64 rng(501);
  while (pairs.size() < 50) pairs.emplace_back(rng.uniform(), rng.uniform(0.01, 1.0));
  return pairs;
}

TEST(Smoothing, PointLawHasUnitMass) {
  for (auto [p, s] : probe_pairs()) {
    auto law = smooth_point(p, s);
    EXPECT_NEAR(law.total_mass(), 1.0, 1e-12);
    EXPECT_NEAR(law.cdf(1.0), 1.0, 1e-12);
    EXPECT_EQ(law.cdf(-0.1), 0.0);
  }
}

TEST(Smoothing, BoundaryAtoms) {
  auto law = smooth_point(0.05, 0.1);
  EXPECT_NEAR(law.atom0, 0.25, 1e-15);
  EXPECT_NEAR(law.atom1, 0.0, 1e-15);
  auto edge = smooth_point(1.0, 0.2);
  EXPECT_NEAR(edge.atom1, 0.5, 1e-15);
}

TEST(Smoothing, MatchesGridRoundingClosedForm) {
  for (auto [p, s] : probe_pairs()) {
    auto law = smooth_point(p, s);
    for (int k = -2; k <= 102; ++k) {
      double t = k / 100.0;
      EXPECT_NEAR(law.cdf(t), grid_round_cdf(p, s, t), 1e-9) << p << " " << s << " " << t;
    }
  }
}

TEST(Smoothing, GridRoundingClosedFormMatchesSimulation) {
  SplitMix64 rng(502);
  const int n = 200000;
  for (auto [p, s] : std::vector<std::pair<double, double>>{{0.37, 0.15}, {0.03, 0.2}, {0.9, 0.4}}) {
    std::vector<double> draws(n);
    for (auto& d : draws) d = round_on_shifted_grid(p, s, rng.uniform(0.0, 2.0 * s));
    for (double t : {0.0, 0.1, 0.3, 0.45, 0.7, 0.99}) {
      double freq = static_cast<double>(std::count_if(draws.begin(), draws.end(),
                                                      [t](double d) { return d <= t; })) / n;
      double exact = grid_round_cdf(p, s, t);
      double se = std::sqrt(std::max(exact * (1.0 - exact), 1e-6) / n);
      EXPECT_NEAR(freq, exact, 5.0 * se + 1e-9) << p << " " << s << " " << t;
    }
  }
}

TEST(Smoothing, PointLawMatchesClippedNoiseSimulation) {
  SplitMix64 rng(503);
  const int n = 200000;
  double p = 0.12, s = 0.25;
  auto law = smooth_point(p, s);
  for (double t : {0.0, 0.05, 0.2, 0.36}) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += std::clamp(p + rng.uniform(-s, s), 0.0, 1.0) <= t;
    double exact = law.cdf(t);
    EXPECT_NEAR(static_cast<double>(hits) / n, exact, 5.0 * std::sqrt(exact * (1 - exact) / n) + 1e-9);
  }
}

TEST(Smoothing, RejectsBadSigma) {
  EXPECT_THROW(smooth_point(0.5, 0.0), Error);
  EXPECT_THROW(smooth_point(0.5, 1.5), Error);
  EXPECT_THROW(smooth(Pld::make({{0.5, 1, 1.0}}), -0.1), Error);
}

TEST(Smoothing, LabelLawsSumToJointLaw) {
  SplitMix64 rng(504);
  for (int i = 0; i < 30; ++i) {
    auto s = smooth(testing::random_pld(rng, 6), rng.uniform(0.02, 0.6));
    auto all = smoothed_law(s);
    auto l0 = smoothed_law(s, 0);
    auto l1 = smoothed_law(s, 1);
    EXPECT_NEAR(all.total_mass(), 1.0, 1e-12);
    EXPECT_NEAR(l1.total_mass(), tau(s.base), 1e-12);
    for (int k = 0; k <= 20; ++k) {
      double t = k / 20.0;
      EXPECT_NEAR(all.cdf(t), l0.cdf(t) + l1.cdf(t), 1e-12);
    }
  }
}

TEST(Smoothing, PosteriorIntegratesToTau) {
  SplitMix64 rng(505);
  for (int i = 0; i < 30; ++i) {
    auto s = smooth(testing::random_pld(rng, 6), rng.uniform(0.02, 0.6));
    auto law = smoothed_law(s);
    auto post = posterior(s);
    double total = 0.0;
    if (post.at0) total += *post.at0 * law.atom0;
    if (post.at1) total += *post.at1 * law.atom1;
    for (const auto& pc : post.pieces) {
      EXPECT_GE(pc.value, -1e-15);
      EXPECT_LE(pc.value, 1.0 + 1e-15);
      double mass = law.cdf(pc.hi) - law.cdf(pc.lo);
      if (pc.hi == 1.0) mass -= law.atom1;
      total += pc.value * mass;
    }
    EXPECT_NEAR(total, tau(s.base), 1e-12);
  }
}

TEST(Smoothing, PosteriorOfCalibratedPoint) {
  auto post = posterior(smooth(Pld::make({{0.5, 1, 0.5}, {0.5, 0, 0.5}}), 0.1));
  ASSERT_FALSE(post.at0.has_value());
  ASSERT_FALSE(post.at1.has_value());
  ASSERT_EQ(post.pieces.size(), 1u);
  EXPECT_DOUBLE_EQ(post.pieces[0].value, 0.5);
  EXPECT_FALSE(post(0.2).has_value());
  EXPECT_DOUBLE_EQ(*post(0.45), 0.5);
}

}  // namespace
}  // namespace calib
