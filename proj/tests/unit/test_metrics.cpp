#include <gtest/gtest.h>

#include <cmath>

#include "calib/constructions.hpp"
#include "calib/error.hpp"
#include "calib/lp.hpp"
#include "calib/metrics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace calib {
namespace {

const Pld kAlmostBalanced =
    Pld::make({{0.4, 0, 0.25}, {0.4, 1, 0.25}, {0.6, 0, 0.25}, {0.6, 1, 0.25}});

// smCE as an LP with a Lipschitz row for every ordered pair of support values.
double smce_all_pairs(const Pld& pld) {
  auto vm = by_value(pld);
  const std::size_t n = vm.size();
  LpProblem lp;
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  std::vector<int> pair_rows;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      int r = lp.add_row(std::abs(vm[j].p - vm[i].p));
      cols[i].emplace_back(r, 1.0);
      cols[j].emplace_back(r, -1.0);
      pair_rows.push_back(r);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    lp.add_column(-(vm[i].mass1 - vm[i].p * vm[i].mass()), cols[i], -1.0, 1.0);
  }
  for (int r : pair_rows) lp.add_column(0.0, {{r, 1.0}});
  auto sol = solve_lp(lp);
  EXPECT_EQ(sol.status, LpStatus::Optimal);
  return -sol.objective;
}

TEST(Smce, KnownValues) {
  EXPECT_NEAR(smce(kAlmostBalanced).value, 0.01, 1e-12);
  auto two = two_point_family(0.1);
  EXPECT_NEAR(smce(std::get<Pld>(two.companions.at("bad_pld"))).value, 0.06, 1e-12);
  EXPECT_NEAR(smce(Pld::make({{0.3, 1, 0.3}, {0.3, 0, 0.7}})).value, 0.0, 1e-12);
  EXPECT_NEAR(smce(Pld::make({{0.2, 1, 1.0}})).value, 0.8, 1e-12);
}

TEST(Smce, WitnessIsFeasibleAndAttainsValue) {
  SplitMix64 rng(301);
  for (int i = 0; i < 50; ++i) {
    Pld pld = testing::random_pld(rng, 8);
    auto r = smce(pld);
    auto vm = by_value(pld);
    ASSERT_EQ(r.witness.size(), vm.size());
    double v = 0.0;
    for (std::size_t k = 0; k < vm.size(); ++k) {
      EXPECT_LE(std::abs(r.witness[k]), 1.0 + 1e-9);
      if (k > 0) EXPECT_LE(std::abs(r.witness[k] - r.witness[k - 1]), vm[k].p - vm[k - 1].p + 1e-9);
      v += r.witness[k] * (vm[k].mass1 - vm[k].p * vm[k].mass());
    }
    EXPECT_NEAR(v, r.value, 1e-9);
    EXPECT_GE(r.value, -1e-12);
    EXPECT_LE(r.value, ece(pld) + 1e-9);
  }
}

TEST(Smce, MatchesAllPairsLp) {
  SplitMix64 rng(302);
  for (int i = 0; i < 50; ++i) {
    Pld pld = testing::random_pld(rng, 7);
    EXPECT_NEAR(smce(pld).value, smce_all_pairs(pld), 1e-9);
  }
}

TEST(Smce, BruteForceAgreesWithLp) {
  SplitMix64 rng(303);
  for (int i = 0; i < 30; ++i) {
    Pld pld = testing::random_pld(rng, 5);
    double n = static_cast<double>(by_value(pld).size());
    double lp = smce(pld).value;
    double bf = smce_bruteforce(pld, 0.01);
    EXPECT_LE(bf, lp + 1e-9);
    EXPECT_GE(bf, lp - n * 0.01 - 1e-8);
  }
}

TEST(Smce, BruteForceMatchesTupleListing) {
  SplitMix64 rng(304);
  for (int i = 0; i < 20; ++i) {
    Pld pld = testing::random_pld(rng, 3);
    EXPECT_NEAR(smce_bruteforce(pld, 0.05), oracle::smce_tuples(pld, 0.05), 1e-12);
  }
}

TEST(Smce, BruteForceRejectsLargeSupport) {
  std::vector<Atom> atoms;
  for (int i = 0; i < 7; ++i) atoms.push_back({0.1 * i, 1, 1.0 / 7});
  try {
    smce_bruteforce(Pld::make(atoms), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SupportTooLarge);
  }
}

TEST(Demc, KnownValues) {
  EXPECT_NEAR(demc(kAlmostBalanced), 1.0 / 60.0, 1e-9);
  EXPECT_NEAR(demc(Pld::make({{0.2, 1, 1.0}})), 0.8, 1e-9);
  EXPECT_NEAR(demc(Pld::make({{0.3, 1, 0.3}, {0.3, 0, 0.7}})), 0.0, 1e-12);
}

TEST(Demc, ColumnGenerationMatchesFullGrid) {
  SplitMix64 rng(305);
  for (int i = 0; i < 20; ++i) {
    Pld pld = testing::random_pld(rng, 6);
    EXPECT_NEAR(demc(pld, 0.05), demc(pld, 0.05, GridSolve::Full), 1e-8);
    EXPECT_NEAR(ldce(pld, 0.05), ldce(pld, 0.05, GridSolve::Full), 1e-8);
  }
}

TEST(Demc, FinerGridNeverIncreases) {
  SplitMix64 rng(306);
  for (int i = 0; i < 10; ++i) {
    Pld pld = testing::random_pld(rng, 6);
    double coarse = demc(pld, 0.1, GridSolve::Full);
    double fine = demc(pld, 0.02, GridSolve::Full);
    EXPECT_LE(fine, coarse + 1e-9);
    EXPECT_GE(fine, coarse - 0.1 - 1e-9);
  }
}

TEST(Demc, OrderedAgainstOtherMeasures) {
  SplitMix64 rng(307);
  for (int i = 0; i < 30; ++i) {
    Pld pld = testing::random_pld(rng, 8);
    double d = demc(pld);
    double s = smce(pld).value;
    EXPECT_LE(d, dce_marginal_preserving(pld) + 1e-9);
    EXPECT_LE(dce_marginal_preserving(pld), ece(pld) + 1e-9);
    EXPECT_GE(d, s / 2.0 - 1e-3);
    EXPECT_LE(d, 2.0 * s + 1e-3);
    EXPECT_NEAR(ldce(pld), d, 2e-3);
  }
}

TEST(Demc, RejectsBadGridStep) {
  EXPECT_THROW(demc(kAlmostBalanced, 0.0), Error);
  EXPECT_THROW(ldce(kAlmostBalanced, 0.2), Error);
}

TEST(DceMarginal, KnownValues) {
  EXPECT_NEAR(dce_marginal_preserving(kAlmostBalanced), 0.02, 1e-12);
  EXPECT_NEAR(dce_marginal_preserving(Pld::make({{0.2, 1, 1.0}})), 0.8, 1e-12);
}

// Relabeling stays within 2 smce but can cost more than 2 demc. Values
// cross-checked with an external LP solver (W 0.098801, grid demc 0.046126).
TEST(DceMarginal, CanExceedTwiceDemc) {
  Pld pld = Pld::make({{0.085366989375579627, 0, 0.10493269610504866},
                       {0.085366989375579627, 1, 0.20112824946695818},
                       {0.23739632012829448, 0, 0.31984257768978352},
                       {0.3509955129263439, 0, 0.14465922600553333},
                       {0.3509955129263439, 1, 0.076071193176126428},
                       {0.40066642143624998, 0, 0.15336605755654975}});
  double m = dce_marginal_preserving(pld);
  double d = demc(pld, 1e-3);
  EXPECT_NEAR(m, 0.0988009049, 1e-8);
  EXPECT_LE(d, 0.04613);
  EXPECT_GT(m, 2.0 * d + 2e-3);
  EXPECT_LE(m, 2.0 * smce(pld).value + 1e-9);
}

TEST(Udce, KnownValues) {
  auto r = udce_exact(kAlmostBalanced);
  EXPECT_NEAR(r.value, 0.1, 1e-12);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.kappa(0.4), 0.5, 1e-12);
  EXPECT_NEAR(r.kappa(0.6), 0.5, 1e-12);
  EXPECT_NEAR(udce_exact(Pld::make({{0.3, 1, 0.3}, {0.3, 0, 0.7}})).value, 0.0, 1e-12);
}

TEST(Udce, MatchesLabelingOracle) {
  SplitMix64 rng(308);
  for (int i = 0; i < 40; ++i) {
    Pld pld = testing::random_pld(rng, 6);
    auto r = udce_exact(pld);
    EXPECT_NEAR(r.value, oracle::udce_by_labelings(pld), 1e-12);
    EXPECT_TRUE(is_calibrated(apply_postprocessing(pld, r.kappa), 1e-9));
    EXPECT_NEAR(udce_witness_cost(pld, r.kappa), r.value, 1e-12);
  }
}

TEST(Udce, GreedyIsAnUpperBound) {
  SplitMix64 rng(309);
  for (int i = 0; i < 40; ++i) {
    Pld pld = testing::random_pld(rng, 8);
    auto g = udce_greedy_upper(pld);
    EXPECT_FALSE(g.exact);
    EXPECT_GE(g.value, udce_exact(pld).value - 1e-12);
    EXPECT_TRUE(is_calibrated(apply_postprocessing(pld, g.kappa), 1e-9));
  }
}

TEST(Udce, WitnessMustCalibrate) {
  try {
    udce_witness_cost(kAlmostBalanced, PostProcessing::identity());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCalibratedWitness);
  }
  EXPECT_NEAR(udce_witness_cost(kAlmostBalanced, PostProcessing::constant(0.5)), 0.1, 1e-12);
}

TEST(Udce, RejectsLargeSupport) {
  std::vector<Atom> atoms;
  for (int i = 0; i < 13; ++i) atoms.push_back({i / 12.0, i % 2, 1.0 / 13});
  try {
    udce_exact(Pld::make(atoms));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SupportTooLarge);
  }
}

TEST(TrueDce, MatchesLabelingOracle) {
  SplitMix64 rng(310);
  for (int i = 0; i < 40; ++i) {
    auto task = testing::random_task(rng, 6);
    EXPECT_NEAR(true_dce(task), oracle::true_dce_by_labelings(task), 1e-12);
  }
}

TEST(TrueDce, SandwichedByLowerAndUpper) {
  SplitMix64 rng(311);
  for (int i = 0; i < 20; ++i) {
    auto task = testing::random_task(rng, 8);
    Pld pld = pushforward(task);
    double d = true_dce(task);
    EXPECT_GE(d, ldce(pld) - 1e-3);
    EXPECT_LE(d, udce_exact(pld).value + 1e-9);
  }
}

TEST(TrueDce, LowerBoundCases) {
  auto cases = udce_cases(0.1, 24, 1);
  EXPECT_NEAR(true_dce(*cases.a.task), 0.1, 1e-9);
  EXPECT_NEAR(true_dce(*cases.b.task), 1.0 / 60.0, 1e-9);
}

}  // namespace
}  // namespace calib
