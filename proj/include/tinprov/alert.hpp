#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "tinprov/engine.hpp"

namespace tinprov {

struct Alert {
  std::size_t index{0};  // 0-based position of the interaction in the stream
  VertexId vertex;
  Quantity total{0};
  std::size_t origin_count{0};
};

// Flags receivers that hold more than `threshold` while none of their mass
// originates from a vertex that has ever transferred to them.
class AlertScanner {
 public:
  AlertScanner(Quantity threshold, Quantity epsilon = kDefaultEpsilon)
      : threshold_(threshold), epsilon_(epsilon) {}

  // Call after `engine` has processed `r`.
  std::optional<Alert> observe(std::size_t index, const Interaction& r, const Engine& engine) {
    if (r.dest.index >= in_neighbors_.size()) in_neighbors_.resize(r.dest.index + 1);
    auto& neighbors = in_neighbors_[r.dest.index];
    neighbors.insert(r.source.index);

    const Quantity total = engine.total(r.dest);
    if (!(total > threshold_)) return std::nullopt;
    Quantity from_neighbors = 0;
    for (std::uint32_t u : neighbors) {
      from_neighbors += engine.attributable(r.dest, VertexId{u});
      if (from_neighbors > epsilon_) return std::nullopt;
    }
    return Alert{index, r.dest, total, engine.snapshot(r.dest).size()};
  }

  const std::unordered_set<std::uint32_t>& in_neighbors(VertexId v) const {
    static const std::unordered_set<std::uint32_t> kNone;
    return v.index < in_neighbors_.size() ? in_neighbors_[v.index] : kNone;
  }

 private:
  Quantity threshold_;
  Quantity epsilon_;
  std::vector<std::unordered_set<std::uint32_t>> in_neighbors_;
};

// Replays `stream` under a proportional configuration and collects alerts.
inline std::vector<Alert> alert_scan(std::span<const Interaction> stream, std::size_t num_vertices,
                                     const EngineConfig& config, Quantity threshold) {
  if (!is_proportional_policy(config.policy)) {
    throw ConfigError("alert scan needs a proportional policy");
  }
  Engine engine(config, num_vertices);
  AlertScanner scanner(threshold, config.epsilon);
  std::vector<Alert> alerts;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    engine.process(stream[i]);
    if (auto a = scanner.observe(i, stream[i], engine)) alerts.push_back(*a);
  }
  return alerts;
}

}  // namespace tinprov
