#pragma once

#include <cstddef>
#include <cstdint>

#include "tinprov/proportional.hpp"

namespace tinprov {

// Odd/even double buffering of sparse provenance lists. Both lists see
// every interaction; at odd multiples of W the odd lists are reset to
// [(UNKNOWN, |B_v|)], at even multiples the even lists. Queries read the
// list that was reset least recently, which attributes every quantity born
// within the last W (at most 2W) interactions to its true origin.
class WindowedEngine {
 public:
  enum class Side { odd, even };

  WindowedEngine(std::size_t num_vertices, std::uint64_t window, ScopeMap scope,
                 Quantity epsilon = kDefaultEpsilon)
      : window_(window),
        odd_(num_vertices, scope, options(epsilon)),
        even_(num_vertices, scope, options(epsilon)) {
    if (window_ == 0) throw ConfigError("window W must be positive");
  }

  WindowedEngine(std::size_t num_vertices, std::uint64_t window)
      : WindowedEngine(num_vertices, window, ScopeMap::full(num_vertices)) {}

  StepResult process(const Interaction& r) {
    odd_.process(r);
    StepResult step = even_.process(r);
    ++counter_;
    if (counter_ % window_ == 0) {
      if ((counter_ / window_) % 2 == 1) {
        odd_.reset_to_unknown();
        odd_reset_at_ = counter_;
      } else {
        even_.reset_to_unknown();
        even_reset_at_ = counter_;
      }
    }
    return step;
  }

  // The side reset least recently. Before any reset both sides are equal
  // and the even side is served.
  Side serving_side() const { return odd_reset_at_ < even_reset_at_ ? Side::odd : Side::even; }

  const SparseProportionalEngine& serving() const {
    return serving_side() == Side::odd ? odd_ : even_;
  }
  const SparseProportionalEngine& side(Side s) const { return s == Side::odd ? odd_ : even_; }

  const SparseProvVector& query(VertexId v) const { return serving().vector(v); }
  std::vector<ProvEntry> snapshot(VertexId v) const { return serving().snapshot(v); }
  Quantity attributable(VertexId v, Slot slot) const { return serving().attributable(v, slot); }

  Quantity total(VertexId v) const { return even_.total(v); }
  std::uint64_t interactions() const { return counter_; }
  std::uint64_t window() const { return window_; }
  std::size_t num_vertices() const { return even_.num_vertices(); }
  std::size_t entry_count() const { return odd_.entry_count() + even_.entry_count(); }
  Quantity dropped_dust(VertexId v) const { return serving().dropped_dust(v); }
  const ScopeMap& scope() const { return even_.scope(); }

 private:
  static SparseProportionalEngine::Options options(Quantity epsilon) {
    SparseProportionalEngine::Options o;
    o.epsilon = epsilon;
    o.dust = DustPolicy::fold_to_unknown;
    return o;
  }

  std::uint64_t window_;
  SparseProportionalEngine odd_;
  SparseProportionalEngine even_;
  std::uint64_t counter_{0};
  std::uint64_t odd_reset_at_{0};
  std::uint64_t even_reset_at_{0};
};

}  // namespace tinprov
