#include "calib/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calib/error.hpp"

namespace calib {

namespace {

struct Best {
  double cost = 1e300;
  std::vector<int> rgs;

  bool improves_on(const Best& other) const {
    if (cost != other.cost) return cost < other.cost;
    return rgs < other.rgs;
  }
};

// Visits every restricted growth string extending rgs[0..pos) in lexicographic order.
template <class Visit>
void extend(std::vector<int>& rgs, std::size_t pos, int blocks, Visit& visit) {
  if (pos == rgs.size()) {
    visit(rgs);
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    rgs[pos] = b;
    extend(rgs, pos + 1, std::max(blocks, b + 1), visit);
  }
}

void check_size(std::span<const PartitionItem> items) {
  if (items.size() > kMaxPartitionItems) {
    throw Error(ErrorCode::SupportTooLarge, std::to_string(items.size()) +
                                                " items exceeds the exhaustive limit of " +
                                                std::to_string(kMaxPartitionItems));
  }
}

PartitionResult finish(std::span<const PartitionItem> items, Best best) {
  PartitionResult out;
  out.block_of = std::move(best.rgs);
  out.cost = partition_cost(items, out.block_of, &out.block_target);
  return out;
}

}  // namespace

double partition_cost(std::span<const PartitionItem> items, std::span<const int> block_of,
                      std::vector<double>* block_target) {
  std::size_t n = items.size();
  double weight[kMaxPartitionItems] = {};
  double moment[kMaxPartitionItems] = {};
  int blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int b = block_of[i];
    weight[b] += items[i].weight;
    moment[b] += items[i].weight * items[i].target;
    blocks = std::max(blocks, b + 1);
  }
  double target[kMaxPartitionItems] = {};
  for (std::size_t i = 0; i < n; ++i) {
    int b = block_of[i];
    target[b] = weight[b] > 0.0 ? moment[b] / weight[b] : items[i].target;
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cost += items[i].weight * std::abs(items[i].value - target[block_of[i]]);
  }
  if (block_target) block_target->assign(target, target + blocks);
  return cost;
}

PartitionResult min_cost_partition_serial(std::span<const PartitionItem> items) {
  check_size(items);
  Best best;
  std::vector<int> rgs(items.size(), 0);
  auto visit = [&](const std::vector<int>& s) {
    double c = partition_cost(items, s);
    if (c < best.cost) {
      best.cost = c;
      best.rgs = s;
    }
  };
  extend(rgs, 0, 0, visit);
  return finish(items, std::move(best));
}

PartitionResult min_cost_partition(std::span<const PartitionItem> items) {
  check_size(items);
  std::size_t n = items.size();
  std::size_t prefix_len = std::min<std::size_t>(n, 6);

  std::vector<std::vector<int>> prefixes;
  std::vector<int> head(prefix_len, 0);
  auto collect = [&](const std::vector<int>& s) { prefixes.push_back(s); };
  extend(head, 0, 0, collect);

  std::vector<Best> per_prefix(prefixes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(prefixes.size()); ++k) {
    const auto& prefix = prefixes[k];
    std::vector<int> rgs(n, 0);
    std::copy(prefix.begin(), prefix.end(), rgs.begin());
    int blocks = prefix.empty() ? 0 : *std::max_element(prefix.begin(), prefix.end()) + 1;
    Best local;
    auto visit = [&](const std::vector<int>& s) {
      double c = partition_cost(items, s);
      if (c < local.cost) {
        local.cost = c;
        local.rgs = s;
      }
    };
    extend(rgs, prefix_len, blocks, visit);
    per_prefix[k] = std::move(local);
  }

  Best best;
  for (auto& b : per_prefix) {
    if (b.improves_on(best)) best = std::move(b);
  }
  return finish(items, std::move(best));
}

}  // namespace calib
