#include "rcgp/rigidity_cache.hpp"

#include <algorithm>
#include <mutex>

namespace rcgp {

namespace {

void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

RigidityKey::RigidityKey(std::span<const NodeId> ids, double threshold, double sensing_radius, NoiseModel noise)
    : nodes(ids.begin(), ids.end()), threshold(threshold), sensing_radius(sensing_radius), noise(noise) {
  std::sort(nodes.begin(), nodes.end());
}

std::size_t RigidityKeyHash::operator()(const RigidityKey& key) const noexcept {
  std::size_t seed = key.nodes.size();
  for (NodeId id : key.nodes) hash_combine(seed, std::hash<NodeId>{}(id));
  hash_combine(seed, std::hash<double>{}(key.threshold));
  hash_combine(seed, std::hash<double>{}(key.sensing_radius));
  hash_combine(seed, std::hash<double>{}(key.noise.sigma));
  hash_combine(seed, static_cast<std::size_t>(key.noise.kind));
  return seed;
}

RigidityVerdict RigidityCache::cached_check(const RigidityKey& key,
                                            const std::function<RigidityVerdict()>& compute) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++misses_;
  RigidityVerdict verdict = compute();
  std::unique_lock lock(mutex_);
  entries_.insert_or_assign(key, verdict);
  return verdict;
}

std::size_t RigidityCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

double RigidityCache::hit_rate() const {
  const double total = static_cast<double>(hits() + misses());
  return total > 0 ? static_cast<double>(hits()) / total : 0.0;
}

void RigidityCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
  hits_ = 0;
  misses_ = 0;
}

}  // namespace rcgp
