#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "tinprov/types.hpp"

namespace tinprov {

struct StepResult {
  Quantity relayed{0};  // taken from the source buffer
  Quantity newborn{0};  // generated at the source
};

// Provenance-free propagation: only buffer totals are kept.
class NoProvEngine {
 public:
  explicit NoProvEngine(std::size_t num_vertices = 0)
      : totals_(num_vertices, 0.0), generated_(num_vertices, 0.0) {}

  StepResult process(const Interaction& r) {
    reserve(std::max(r.source.index, r.dest.index) + std::size_t{1});
    Quantity& src = totals_[r.source.index];
    StepResult step;
    step.relayed = std::min(r.quantity, src);
    step.newborn = r.quantity - step.relayed;
    src -= step.relayed;
    totals_[r.dest.index] += r.quantity;
    generated_[r.source.index] += step.newborn;
    cumulative_newborn_ += step.newborn;
    return step;
  }

  Quantity total(VertexId v) const {
    return v.index < totals_.size() ? totals_[v.index] : 0.0;
  }

  Quantity generated(VertexId v) const {
    return v.index < generated_.size() ? generated_[v.index] : 0.0;
  }

  std::span<const Quantity> totals() const { return totals_; }
  std::span<const Quantity> generated() const { return generated_; }
  Quantity cumulative_newborn() const { return cumulative_newborn_; }
  std::size_t num_vertices() const { return totals_.size(); }

  void reserve(std::size_t n) {
    if (n > totals_.size()) {
      totals_.resize(n, 0.0);
      generated_.resize(n, 0.0);
    }
  }

 private:
  std::vector<Quantity> totals_;
  std::vector<Quantity> generated_;
  Quantity cumulative_newborn_{0};
};

// Per-step record of a NoProv replay. Totals are those of the two touched
// vertices after the step.
struct TraceStep {
  Interaction interaction;
  StepResult result;
  Quantity source_total{0};
  Quantity dest_total{0};
};

class NoProvTrace {
 public:
  NoProvTrace(std::size_t num_vertices, std::vector<TraceStep> steps)
      : num_vertices_(num_vertices), steps_(std::move(steps)) {}

  const std::vector<TraceStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }

  // All vertex totals after the first `count` steps.
  std::vector<Quantity> totals_after(std::size_t count) const {
    std::vector<Quantity> totals(num_vertices_, 0.0);
    for (std::size_t i = 0; i < std::min(count, steps_.size()); ++i) {
      totals[steps_[i].interaction.source.index] = steps_[i].source_total;
      totals[steps_[i].interaction.dest.index] = steps_[i].dest_total;
    }
    return totals;
  }

 private:
  std::size_t num_vertices_;
  std::vector<TraceStep> steps_;
};

inline NoProvTrace propagate_noprov(std::span<const Interaction> stream,
                                    std::size_t num_vertices) {
  NoProvEngine engine(num_vertices);
  std::vector<TraceStep> steps;
  steps.reserve(stream.size());
  for (const auto& r : stream) {
    auto result = engine.process(r);
    steps.push_back({r, result, engine.total(r.source), engine.total(r.dest)});
  }
  return NoProvTrace(engine.num_vertices(), std::move(steps));
}

// Total quantity born at each vertex over the stream. Used to pick the
// top-k vertices for selective tracking.
inline std::vector<Quantity> generated_totals(std::span<const Interaction> stream,
                                              std::size_t num_vertices) {
  NoProvEngine engine(num_vertices);
  for (const auto& r : stream) engine.process(r);
  auto gen = engine.generated();
  return {gen.begin(), gen.end()};
}

}  // namespace tinprov
