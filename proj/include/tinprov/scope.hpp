#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tinprov/sparse_vector.hpp"
#include "tinprov/stream.hpp"
#include "tinprov/types.hpp"

namespace tinprov {

// Maps vertices onto provenance-vector slots.
//   full:      slot = vertex index, width = |V|
//   selective: k tracked vertices on slots [0, k), everything else on slot k
//   grouped:   every vertex on its group slot in [0, m)
class ScopeMap {
 public:
  enum class Kind { full, selective, grouped };

  static ScopeMap full(std::size_t num_vertices) {
    ScopeMap s;
    s.kind_ = Kind::full;
    s.width_ = num_vertices;
    return s;
  }

  static ScopeMap selective(std::span<const VertexId> tracked) {
    ScopeMap s;
    s.kind_ = Kind::selective;
    for (VertexId v : tracked) {
      if (v.index >= s.slot_of_.size()) s.slot_of_.resize(v.index + 1, kNoSlot);
      if (s.slot_of_[v.index] != kNoSlot) {
        throw ConfigError("vertex listed twice in selective set");
      }
      s.slot_of_[v.index] = static_cast<Slot>(s.slot_vertex_.size());
      s.slot_vertex_.push_back(v);
    }
    if (s.slot_vertex_.empty()) throw ConfigError("selective set is empty");
    s.width_ = s.slot_vertex_.size() + 1;
    return s;
  }

  // group_of[v] is the group index of vertex v; groups must be dense
  // in [0, num_groups).
  static ScopeMap grouped(std::vector<Slot> group_of, std::size_t num_groups) {
    ScopeMap s;
    s.kind_ = Kind::grouped;
    for (Slot g : group_of) {
      if (g >= num_groups) throw ConfigError("group index out of range");
    }
    if (num_groups == 0) throw ConfigError("group map defines no groups");
    s.slot_of_ = std::move(group_of);
    s.width_ = num_groups;
    return s;
  }

  Kind kind() const { return kind_; }
  std::size_t width() const { return width_; }

  Slot slot(VertexId v) const {
    switch (kind_) {
      case Kind::full:
        return v.index;
      case Kind::selective:
        if (v.index < slot_of_.size() && slot_of_[v.index] != kNoSlot) return slot_of_[v.index];
        return rest_slot();
      case Kind::grouped:
        if (v.index >= slot_of_.size()) throw ConfigError("vertex missing from group map");
        return slot_of_[v.index];
    }
    return v.index;
  }

  // Selective only: the slot aggregating all untracked vertices.
  Slot rest_slot() const { return static_cast<Slot>(slot_vertex_.size()); }
  bool is_rest(Slot s) const { return kind_ == Kind::selective && s == rest_slot(); }

  // Selective only: tracked vertex held by slot `s` (< k).
  VertexId tracked_vertex(Slot s) const { return slot_vertex_.at(s); }
  std::span<const VertexId> tracked() const { return slot_vertex_; }

 private:
  static constexpr Slot kNoSlot = kUnknownSlot;

  Kind kind_{Kind::full};
  std::size_t width_{0};
  std::vector<Slot> slot_of_;
  std::vector<VertexId> slot_vertex_;
};

// The k vertices with the largest generated totals; ties go to the smaller
// index.
inline std::vector<VertexId> top_k_generators(std::span<const Quantity> generated, std::size_t k) {
  std::vector<std::uint32_t> order(generated.size());
  std::iota(order.begin(), order.end(), 0u);
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (generated[a] != generated[b]) return generated[a] > generated[b];
                      return a < b;
                    });
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(VertexId{order[i]});
  return out;
}

// One vertex label per line; '#' comments and blank lines ignored. Labels
// absent from the stream are reported in `unknown_labels` and skipped.
inline std::vector<VertexId> read_vertex_set(std::istream& in, const VertexTable& table,
                                             std::vector<std::string>* unknown_labels = nullptr) {
  std::vector<VertexId> out;
  std::string line;
  while (std::getline(in, line)) {
    auto label = detail::trim(line);
    if (label.empty() || label.front() == '#') continue;
    if (auto v = table.find(label)) {
      if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
    } else if (unknown_labels) {
      unknown_labels->emplace_back(label);
    }
  }
  return out;
}

struct GroupMap {
  std::vector<Slot> group_of;            // indexed by vertex
  std::vector<std::string> group_labels; // indexed by group slot
};

// `vertex_label,group_label` lines. Every vertex of `table` must be
// assigned; a missing or doubly-assigned vertex is a ConfigError.
inline GroupMap read_group_map(std::istream& in, const VertexTable& table) {
  GroupMap map;
  map.group_of.assign(table.size(), kUnknownSlot);
  std::unordered_map<std::string, Slot> group_index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = detail::split_fields(view);
    if (fields.size() != 2) {
      throw ConfigError("group map line " + std::to_string(line_no) + ": expected 2 fields");
    }
    auto v = table.find(fields[0]);
    if (!v) continue;  // vertex never appears in the stream
    auto [it, inserted] =
        group_index.try_emplace(std::string(fields[1]), static_cast<Slot>(map.group_labels.size()));
    if (inserted) map.group_labels.emplace_back(fields[1]);
    if (map.group_of[v->index] != kUnknownSlot && map.group_of[v->index] != it->second) {
      throw ConfigError("vertex '" + std::string(fields[0]) + "' assigned to two groups");
    }
    map.group_of[v->index] = it->second;
  }
  for (std::size_t i = 0; i < map.group_of.size(); ++i) {
    if (map.group_of[i] == kUnknownSlot) {
      throw ConfigError("vertex '" + table.label(VertexId{static_cast<std::uint32_t>(i)}) +
                        "' missing from group map");
    }
  }
  return map;
}

enum class KeepCriterion { largest_amount, priority_list };

struct BudgetConfig {
  std::size_t capacity{0};     // C, including the UNKNOWN entry
  double keep_fraction{0.7};   // f
  KeepCriterion criterion{KeepCriterion::largest_amount};
  std::vector<std::size_t> priority_rank;  // by slot; lower rank kept first

  void validate() const {
    if (capacity < 2) throw ConfigError("budget capacity C must be at least 2");
    if (!(keep_fraction > 0 && keep_fraction < 1)) {
      throw ConfigError("budget keep fraction f must lie in (0,1)");
    }
  }

  std::size_t keep_count() const {
    return static_cast<std::size_t>(std::floor(keep_fraction * static_cast<double>(capacity) + 1e-9));
  }

  std::size_t rank(Slot s) const {
    return s < priority_rank.size() ? priority_rank[s] : priority_rank.size();
  }
};

// Keeps the floor(f*C) best real entries and folds the rest into UNKNOWN.
// The UNKNOWN entry is never evicted and does not count toward the quota.
// Returns the evicted mass.
inline Quantity shrink_entries(std::vector<ProvEntry>& entries, const BudgetConfig& budget) {
  Quantity unknown = 0;
  if (!entries.empty() && entries.back().slot == kUnknownSlot) {
    unknown = entries.back().amount;
    entries.pop_back();
  }
  const std::size_t keep = std::min(budget.keep_count(), entries.size());
  auto better = [&](const ProvEntry& a, const ProvEntry& b) {
    if (budget.criterion == KeepCriterion::priority_list) {
      auto ra = budget.rank(a.slot), rb = budget.rank(b.slot);
      if (ra != rb) return ra < rb;
    }
    if (a.amount != b.amount) return a.amount > b.amount;
    return a.slot < b.slot;
  };
  std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep),
                   entries.end(), better);
  Quantity evicted = 0;
  for (std::size_t i = keep; i < entries.size(); ++i) evicted += entries[i].amount;
  entries.resize(keep);
  std::sort(entries.begin(), entries.end(),
            [](const ProvEntry& a, const ProvEntry& b) { return a.slot < b.slot; });
  detail::fold_unknown(entries, unknown + evicted);
  return evicted;
}

struct ShrinkResult {
  SparseProvVector vector;
  bool shrunk{false};
  Quantity evicted{0};
};

// Merges `incoming` into `p` and shrinks when the merged list exceeds C.
inline ShrinkResult budget_shrink(const SparseProvVector& p, const SparseProvVector& incoming,
                                  const BudgetConfig& budget, Quantity epsilon = kDefaultEpsilon) {
  budget.validate();
  std::vector<ProvEntry> merged;
  sparse_merge_into(merged, p.entries(), incoming.entries(), 1.0, epsilon,
                    DustPolicy::fold_to_unknown);
  ShrinkResult result;
  if (merged.size() > budget.capacity) {
    result.evicted = shrink_entries(merged, budget);
    result.shrunk = true;
  }
  result.vector = SparseProvVector(std::move(merged));
  return result;
}

}  // namespace tinprov
