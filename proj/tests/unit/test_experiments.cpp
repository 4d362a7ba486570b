#include <gtest/gtest.h>

#include <cmath>

#include "calib/constructions.hpp"
#include "calib/error.hpp"
#include "calib/experiments.hpp"
#include "calib/metrics.hpp"

namespace calib {
namespace {

bool same_report(const DistinguishReport& a, const DistinguishReport& b) {
  return a.correct == b.correct && a.advantage == b.advantage && a.collision_rate == b.collision_rate &&
         a.clean_d_samples == b.clean_d_samples && a.clean_d_ones == b.clean_d_ones;
}

TEST(Sampling, DeterministicBySeed) {
  Pld pld = almost_balanced(0.1).pld;
  auto a = sample(pld, 100, 7), b = sample(pld, 100, 7), c = sample(pld, 100, 8);
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_NE(a.draws, c.draws);
}

TEST(Sampling, FrequenciesConverge) {
  Pld pld = Pld::make({{0.1, 0, 0.1}, {0.1, 1, 0.2}, {0.8, 1, 0.7}});
  auto s = sample(pld, 100000, 3);
  Pld emp = empirical_pld(s);
  ASSERT_EQ(emp.size(), pld.size());
  for (std::size_t i = 0; i < pld.size(); ++i) {
    double m = pld.atoms()[i].mass;
    EXPECT_NEAR(emp.atoms()[i].mass, m, 5.0 * std::sqrt(m * (1 - m) / 100000));
  }
  EXPECT_NEAR(smce_estimate(s), smce(pld).value, 0.01);
}

TEST(Sampling, EmptySampleRejected) {
  EXPECT_THROW(empirical_pld(SampleSet{}), Error);
}

TEST(Distinguisher, ParallelMatchesSerial) {
  for (auto rule : {Distinguisher::LikelihoodRatio, Distinguisher::PatternMatch}) {
    DistinguishConfig cfg;
    cfg.k = 100;
    cfg.s = 30;
    cfg.trials = 300;
    cfg.seed = 17;
    cfg.rule = rule;
    EXPECT_TRUE(same_report(udce_distinguish_experiment(cfg), udce_distinguish_experiment_serial(cfg)));
  }
}

TEST(Distinguisher, CollisionRateMatchesBirthdayProbability) {
  DistinguishConfig cfg;
  cfg.k = 100;
  cfg.s = 10;
  cfg.trials = 4000;
  auto r = udce_distinguish_experiment(cfg);
  double none = 1.0;
  for (int i = 1; i < cfg.s; ++i) none *= 1.0 - static_cast<double>(i) / cfg.k;
  double p = 1.0 - none;
  EXPECT_NEAR(r.collision_rate, p, 5.0 * std::sqrt(p * (1 - p) / cfg.trials));
}

TEST(Distinguisher, SingleSampleCarriesNoInformation) {
  DistinguishConfig cfg;
  cfg.k = 100;
  cfg.s = 1;
  cfg.trials = 2000;
  cfg.seed = 4;
  auto r = udce_distinguish_experiment(cfg);
  EXPECT_EQ(r.collision_rate, 0.0);
  EXPECT_LE(r.advantage, 0.05);
}

TEST(Distinguisher, CollisionFreeLabelsLookUniform) {
  DistinguishConfig cfg;
  cfg.k = 10000;
  cfg.s = 10;
  cfg.trials = 2000;
  auto r = udce_distinguish_experiment(cfg);
  ASSERT_GT(r.clean_d_samples, 0);
  double freq = static_cast<double>(r.clean_d_ones) / static_cast<double>(r.clean_d_samples);
  EXPECT_NEAR(freq, 0.5, 5.0 * std::sqrt(0.25 / static_cast<double>(r.clean_d_samples)));
}

TEST(Distinguisher, ManySamplesSeparateTheCases) {
  DistinguishConfig cfg;
  cfg.k = 100;
  cfg.s = 200;
  cfg.trials = 200;
  auto lr = udce_distinguish_experiment(cfg);
  EXPECT_GE(lr.advantage, 0.5);
  cfg.rule = Distinguisher::PatternMatch;
  auto pm = udce_distinguish_experiment(cfg);
  EXPECT_LT(pm.advantage, lr.advantage);
}

TEST(Distinguisher, ParameterChecks) {
  DistinguishConfig cfg;
  cfg.k = 99;
  EXPECT_THROW(udce_distinguish_experiment(cfg), Error);
  cfg.k = 100;
  cfg.s = 0;
  EXPECT_THROW(udce_distinguish_experiment(cfg), Error);
}

}  // namespace
}  // namespace calib
