#include <gtest/gtest.h>

#include <cstring>

#include "calib/error.hpp"
#include "calib/partition.hpp"
#include "calib/rng.hpp"
#include "support/oracles.hpp"

namespace calib {
namespace {

std::vector<PartitionItem> random_items(SplitMix64& rng, std::size_t n) {
  std::vector<PartitionItem> items;
  for (std::size_t i = 0; i < n; ++i) items.push_back({0.1 + rng.uniform(), rng.uniform(), rng.uniform()});
  return items;
}

bool bit_identical(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(Partition, ParallelMatchesSerialBitForBit) {
  SplitMix64 rng(401);
  for (std::size_t n = 1; n <= 10; ++n) {
    auto items = random_items(rng, n);
    auto par = min_cost_partition(items);
    auto ser = min_cost_partition_serial(items);
    EXPECT_TRUE(bit_identical(par.cost, ser.cost)) << n;
    EXPECT_EQ(par.block_of, ser.block_of);
    ASSERT_EQ(par.block_target.size(), ser.block_target.size());
    for (std::size_t b = 0; b < par.block_target.size(); ++b) {
      EXPECT_TRUE(bit_identical(par.block_target[b], ser.block_target[b]));
    }
  }
}

TEST(Partition, MatchesLabelingOracle) {
  SplitMix64 rng(402);
  for (int t = 0; t < 30; ++t) {
    auto items = random_items(rng, 1 + rng.below(6));
    std::vector<oracle::GroupItem> g;
    for (const auto& it : items) g.push_back({it.weight, it.target, it.value});
    EXPECT_NEAR(min_cost_partition(items).cost, oracle::grouping_by_labelings(g), 1e-12);
  }
}

TEST(Partition, ResultIsRestrictedGrowthString) {
  SplitMix64 rng(403);
  auto items = random_items(rng, 9);
  auto r = min_cost_partition(items);
  int max_block = -1;
  for (int b : r.block_of) {
    EXPECT_LE(b, max_block + 1);
    max_block = std::max(max_block, b);
  }
  EXPECT_EQ(static_cast<int>(r.block_target.size()), max_block + 1);
  EXPECT_DOUBLE_EQ(partition_cost(items, r.block_of), r.cost);
}

TEST(Partition, TiesPickSmallestString) {
  // Identical items: every partition costs the same, so all items share block 0.
  std::vector<PartitionItem> items(5, {0.2, 0.5, 0.5});
  auto r = min_cost_partition(items);
  EXPECT_EQ(r.block_of, std::vector<int>(5, 0));
}

TEST(Partition, RejectsTooManyItems) {
  std::vector<PartitionItem> items(kMaxPartitionItems + 1, {1.0, 0.5, 0.5});
  EXPECT_THROW(min_cost_partition(items), Error);
  EXPECT_THROW(min_cost_partition_serial(items), Error);
}

}  // namespace
}  // namespace calib
