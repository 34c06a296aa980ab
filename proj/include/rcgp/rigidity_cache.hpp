#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "rcgp/rigidity.hpp"
#include "rcgp/types.hpp"

namespace rcgp {

/// Order-insensitive identity of a rigidity query on planning-graph nodes.
struct RigidityKey {
  std::vector<NodeId> nodes;  // sorted
  double threshold = 0.0;
  double sensing_radius = 0.0;
  NoiseModel noise;

  RigidityKey(std::span<const NodeId> ids, double threshold, double sensing_radius, NoiseModel noise);

  friend bool operator==(const RigidityKey&, const RigidityKey&) = default;
};

struct RigidityKeyHash {
  std::size_t operator()(const RigidityKey& key) const noexcept;
};

/// Thread-safe memo of rigidity verdicts keyed by node-id multisets.
class RigidityCache {
 public:
  RigidityVerdict cached_check(const RigidityKey& key, const std::function<RigidityVerdict()>& compute);

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }
  std::size_t size() const;
  double hit_rate() const;
  void clear();

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<RigidityKey, RigidityVerdict, RigidityKeyHash> entries_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

}  // namespace rcgp
