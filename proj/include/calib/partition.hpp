#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace calib {

inline constexpr std::size_t kMaxPartitionItems = 12;

// An element to be grouped: each block moves its elements' values onto the
// weight-averaged target of the block.
struct PartitionItem {
  double weight = 0.0;
  double target = 0.0;
  double value = 0.0;
};

struct PartitionResult {
  double cost = 0.0;
  std::vector<int> block_of;          // restricted growth string
  std::vector<double> block_target;   // per block
};

// sum_i weight_i * |value_i - target(block of i)| for one restricted growth string.
double partition_cost(std::span<const PartitionItem> items, std::span<const int> block_of,
                      std::vector<double>* block_target = nullptr);

// Exhaustive minimum over all set partitions. Ties are broken by the
// lexicographically smallest restricted growth string, so both versions agree
// bit for bit. Throws SupportTooLarge above kMaxPartitionItems.
PartitionResult min_cost_partition(std::span<const PartitionItem> items);
PartitionResult min_cost_partition_serial(std::span<const PartitionItem> items);

}  // namespace calib
