#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tinprov/noprov.hpp"
#include "tinprov/scope.hpp"
#include "tinprov/sparse_vector.hpp"
#include "tinprov/types.hpp"

namespace tinprov {

struct ProportionalOptions {
  Quantity epsilon{kDefaultEpsilon};
};

// Proportional selection over dense slot vectors stored contiguously, one
// row of scope.width() amounts per vertex. The vector operations are plain
// loops over each row.
class DenseProportionalEngine {
 public:
  DenseProportionalEngine(std::size_t num_vertices, ScopeMap scope, ProportionalOptions options = {})
      : options_(options), scope_(std::move(scope)), width_(scope_.width()) {
    reserve(num_vertices);
  }

  explicit DenseProportionalEngine(std::size_t num_vertices, ProportionalOptions options = {})
      : DenseProportionalEngine(num_vertices, ScopeMap::full(num_vertices), options) {}

  StepResult process(const Interaction& r) {
    reserve(std::max(r.source.index, r.dest.index) + std::size_t{1});
    const Quantity bs = totals_[r.source.index];
    Quantity* ps = row(r.source);
    Quantity* pd = row(r.dest);
    StepResult step;

    if (r.quantity >= bs - options_.epsilon) {
      step.relayed = bs;
      step.newborn = std::max(0.0, r.quantity - bs);
      if (r.source != r.dest) {
        for (std::size_t i = 0; i < width_; ++i) {
          pd[i] += ps[i];
          ps[i] = 0;
        }
      }
      pd[scope_.slot(r.source)] += step.newborn;
      totals_[r.source.index] = 0;
      totals_[r.dest.index] += r.quantity;
    } else {
      const Quantity alpha = r.quantity / bs;
      step.relayed = r.quantity;
      if (r.source != r.dest) {
        for (std::size_t i = 0; i < width_; ++i) {
          const Quantity slice = alpha * ps[i];
          pd[i] += slice;
          ps[i] -= slice;
        }
      }
      totals_[r.source.index] -= r.quantity;
      totals_[r.dest.index] += r.quantity;
    }
    return step;
  }

  Quantity total(VertexId v) const {
    return v.index < totals_.size() ? totals_[v.index] : 0.0;
  }

  std::span<const Quantity> vector(VertexId v) const {
    if (v.index >= totals_.size()) return {};
    return {amounts_.data() + static_cast<std::size_t>(v.index) * width_, width_};
  }

  // Non-zero components of v.
  std::vector<ProvEntry> snapshot(VertexId v) const {
    std::vector<ProvEntry> out;
    auto p = vector(v);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0) out.push_back({static_cast<Slot>(i), p[i]});
    }
    return out;
  }

  Quantity attributable(VertexId v, Slot slot) const {
    auto p = vector(v);
    return slot < p.size() ? p[slot] : 0.0;
  }

  const ScopeMap& scope() const { return scope_; }
  std::size_t num_vertices() const { return totals_.size(); }
  std::size_t entry_count() const { return amounts_.size(); }

  void reserve(std::size_t n) {
    if (n <= totals_.size()) return;
    if (scope_.kind() == ScopeMap::Kind::full && n > width_) {
      throw std::out_of_range("dense full-scope engine sized for " + std::to_string(width_) +
                              " vertices");
    }
    totals_.resize(n, 0.0);
    amounts_.resize(n * width_, 0.0);
  }

 private:
  Quantity* row(VertexId v) { return amounts_.data() + static_cast<std::size_t>(v.index) * width_; }

  ProportionalOptions options_;
  ScopeMap scope_;
  std::size_t width_;
  std::vector<Quantity> totals_;
  std::vector<Quantity> amounts_;
};

// Proportional selection over sorted (slot, amount) lists. Optionally
// bounded by a per-vertex budget.
class SparseProportionalEngine {
 public:
  struct Options {
    Quantity epsilon{kDefaultEpsilon};
    DustPolicy dust{DustPolicy::drop};
    std::optional<BudgetConfig> budget;
  };

  SparseProportionalEngine(std::size_t num_vertices, ScopeMap scope, Options options)
      : options_(std::move(options)), scope_(std::move(scope)) {
    if (options_.budget) options_.budget->validate();
    reserve(num_vertices);
  }

  explicit SparseProportionalEngine(std::size_t num_vertices = 0)
      : SparseProportionalEngine(num_vertices, ScopeMap::full(num_vertices), Options{}) {}

  StepResult process(const Interaction& r) {
    reserve(std::max(r.source.index, r.dest.index) + std::size_t{1});
    const std::uint32_t s = r.source.index, d = r.dest.index;
    const Quantity bs = totals_[s];
    auto& ps = vectors_[s].raw();
    auto& pd = vectors_[d].raw();
    entry_count_ -= ps.size() + (s != d ? pd.size() : 0);
    StepResult step;

    if (r.quantity >= bs - options_.epsilon) {
      step.relayed = bs;
      step.newborn = std::max(0.0, r.quantity - bs);
      if (s != d) {
        dust_[d] += sparse_merge_into(scratch_, pd, ps, 1.0, options_.epsilon, options_.dust);
        pd.swap(scratch_);
        ps.clear();
      }
      add_newborn(d, scope_.slot(r.source), step.newborn);
      totals_[s] = 0;
      totals_[d] += r.quantity;
    } else {
      const Quantity alpha = r.quantity / bs;
      step.relayed = r.quantity;
      if (s != d) {
        dust_[d] += sparse_merge_into(scratch_, pd, ps, alpha, options_.epsilon, options_.dust);
        pd.swap(scratch_);
        dust_[s] += scale_source(ps, alpha);
      }
      totals_[s] -= r.quantity;
      totals_[d] += r.quantity;
    }

    if (options_.budget) {
      enforce_budget(d);
      if (s != d) enforce_budget(s);
    }
    entry_count_ += ps.size() + (s != d ? pd.size() : 0);
    peak_entries_ = std::max(peak_entries_, entry_count_);
    return step;
  }

  // Every vector becomes [(UNKNOWN, |B_v|)].
  void reset_to_unknown() {
    entry_count_ = 0;
    for (std::size_t v = 0; v < vectors_.size(); ++v) {
      auto& p = vectors_[v].raw();
      p.clear();
      if (totals_[v] > 0) {
        p.push_back({kUnknownSlot, totals_[v]});
        ++entry_count_;
      }
    }
  }

  Quantity total(VertexId v) const {
    return v.index < totals_.size() ? totals_[v.index] : 0.0;
  }

  const SparseProvVector& vector(VertexId v) const {
    static const SparseProvVector kEmpty;
    return v.index < vectors_.size() ? vectors_[v.index] : kEmpty;
  }

  std::vector<ProvEntry> snapshot(VertexId v) const {
    auto e = vector(v).entries();
    return {e.begin(), e.end()};
  }

  Quantity attributable(VertexId v, Slot slot) const { return vector(v).amount_of(slot); }

  Quantity dropped_dust(VertexId v) const { return v.index < dust_.size() ? dust_[v.index] : 0.0; }
  std::size_t shrink_count(VertexId v) const {
    return v.index < shrinks_.size() ? shrinks_[v.index] : 0;
  }

  const ScopeMap& scope() const { return scope_; }
  const Options& options() const { return options_; }
  std::size_t num_vertices() const { return totals_.size(); }
  std::size_t entry_count() const { return entry_count_; }
  std::size_t peak_entry_count() const { return peak_entries_; }

  void reserve(std::size_t n) {
    if (n <= totals_.size()) return;
    totals_.resize(n, 0.0);
    vectors_.resize(n);
    dust_.resize(n, 0.0);
    shrinks_.resize(n, 0);
  }

 private:
  void add_newborn(std::uint32_t v, Slot slot, Quantity amount) {
    if (amount > options_.epsilon) {
      vectors_[v].add(slot, amount);
    } else if (amount > 0) {
      dust_[v] += amount;
      if (options_.dust == DustPolicy::fold_to_unknown) vectors_[v].add(kUnknownSlot, amount);
    }
  }

  void enforce_budget(std::uint32_t v) {
    auto& p = vectors_[v].raw();
    if (p.size() > options_.budget->capacity) {
      shrink_entries(p, *options_.budget);
      ++shrinks_[v];
    }
  }

  // p <- p - alpha * p, dropping dust. Returns the dust removed.
  Quantity scale_source(std::vector<ProvEntry>& p, Quantity alpha) {
    Quantity dust = 0;
    std::size_t out = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      ProvEntry e = p[i];
      e.amount -= alpha * e.amount;
      if (detail::is_dust(e, options_.epsilon, options_.dust)) {
        dust += std::max(e.amount, 0.0);
      } else {
        p[out++] = e;
      }
    }
    p.resize(out);
    if (options_.dust == DustPolicy::fold_to_unknown) detail::fold_unknown(p, dust);
    return dust;
  }

  Options options_;
  ScopeMap scope_;
  std::vector<Quantity> totals_;
  std::vector<SparseProvVector> vectors_;
  std::vector<Quantity> dust_;
  std::vector<std::size_t> shrinks_;
  std::vector<ProvEntry> scratch_;
  std::size_t entry_count_{0};
  std::size_t peak_entries_{0};
};

}  // namespace tinprov
