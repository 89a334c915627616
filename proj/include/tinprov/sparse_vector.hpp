#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "tinprov/types.hpp"

namespace tinprov {

// Slot of a provenance vector. Under full tracking a slot is a vertex
// index; under selective/grouped tracking it is a scope slot. kUnknownSlot
// holds mass of forgotten origin and always sorts last.
using Slot = std::uint32_t;
inline constexpr Slot kUnknownSlot = kUnknown.index;

struct ProvEntry {
  Slot slot{0};
  Quantity amount{0};

  bool operator==(const ProvEntry&) const = default;
};

// Origin -> amount list, strictly sorted by slot.
class SparseProvVector {
 public:
  SparseProvVector() = default;
  SparseProvVector(std::initializer_list<ProvEntry> entries) : entries_(entries) {
    std::sort(entries_.begin(), entries_.end(),
              [](const ProvEntry& a, const ProvEntry& b) { return a.slot < b.slot; });
    assert(is_canonical());
  }
  explicit SparseProvVector(std::vector<ProvEntry> sorted) : entries_(std::move(sorted)) {
    assert(is_canonical());
  }

  std::span<const ProvEntry> entries() const { return entries_; }
  std::vector<ProvEntry>& raw() { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  void clear() { entries_.clear(); }

  Quantity sum() const {
    Quantity s = 0;
    for (const auto& e : entries_) s += e.amount;
    return s;
  }

  Quantity amount_of(Slot slot) const {
    auto it = lower_bound(slot);
    return it != entries_.end() && it->slot == slot ? it->amount : 0.0;
  }

  // Adds `amount` at `slot`, inserting in order if absent.
  void add(Slot slot, Quantity amount) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), slot,
                               [](const ProvEntry& e, Slot s) { return e.slot < s; });
    if (it != entries_.end() && it->slot == slot) {
      it->amount += amount;
    } else {
      entries_.insert(it, ProvEntry{slot, amount});
    }
  }

  bool is_canonical() const {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i - 1].slot >= entries_[i].slot) return false;
    }
    return true;
  }

  bool operator==(const SparseProvVector&) const = default;

 private:
  std::vector<ProvEntry>::const_iterator lower_bound(Slot slot) const {
    return std::lower_bound(entries_.begin(), entries_.end(), slot,
                            [](const ProvEntry& e, Slot s) { return e.slot < s; });
  }

  std::vector<ProvEntry> entries_;
};

// What happens to entries whose amount falls to epsilon or below.
enum class DustPolicy {
  drop,            // discarded; the mass is reported back to the caller
  fold_to_unknown  // moved into the UNKNOWN entry
};

namespace detail {

// Appends the UNKNOWN entry carrying `mass`, merging with an existing one.
inline void fold_unknown(std::vector<ProvEntry>& out, Quantity mass) {
  if (mass <= 0) return;
  if (!out.empty() && out.back().slot == kUnknownSlot) {
    out.back().amount += mass;
  } else {
    out.push_back({kUnknownSlot, mass});
  }
}

// The UNKNOWN entry is exempt from dust removal when folding, otherwise
// the folded mass would be dropped again on the next pass.
inline bool is_dust(const ProvEntry& e, Quantity epsilon, DustPolicy policy) {
  if (policy == DustPolicy::fold_to_unknown && e.slot == kUnknownSlot) return e.amount <= 0;
  return e.amount <= epsilon;
}

}  // namespace detail

// out = a + scale * b, merged in slot order. Returns the dust mass removed
// (already folded into UNKNOWN when policy says so). `out` must not alias
// either input.
inline Quantity sparse_merge_into(std::vector<ProvEntry>& out, std::span<const ProvEntry> a,
                                  std::span<const ProvEntry> b, Quantity scale,
                                  Quantity epsilon, DustPolicy policy) {
  out.clear();
  out.reserve(a.size() + b.size());
  Quantity dust = 0;
  auto emit = [&](ProvEntry e) {
    if (detail::is_dust(e, epsilon, policy)) {
      dust += std::max(e.amount, 0.0);
    } else {
      out.push_back(e);
    }
  };
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].slot < b[j].slot)) {
      emit(a[i++]);
    } else if (i == a.size() || b[j].slot < a[i].slot) {
      emit({b[j].slot, scale * b[j].amount});
      ++j;
    } else {
      emit({a[i].slot, a[i].amount + scale * b[j].amount});
      ++i;
      ++j;
    }
  }
  if (policy == DustPolicy::fold_to_unknown) detail::fold_unknown(out, dust);
  return dust;
}

struct MergeResult {
  SparseProvVector vector;
  Quantity dust{0};
};

inline MergeResult sparse_merge(const SparseProvVector& a, const SparseProvVector& b,
                                Quantity scale, Quantity epsilon = kDefaultEpsilon,
                                DustPolicy policy = DustPolicy::drop) {
  assert(a.is_canonical() && b.is_canonical());
  assert(scale >= 0);
  std::vector<ProvEntry> out;
  Quantity dust = sparse_merge_into(out, a.entries(), b.entries(), scale, epsilon, policy);
  return {SparseProvVector(std::move(out)), dust};
}

inline std::vector<Quantity> densify(const SparseProvVector& v, std::size_t width) {
  std::vector<Quantity> out(width, 0.0);
  for (const auto& e : v.entries()) {
    if (e.slot < width) out[e.slot] += e.amount;
  }
  return out;
}

}  // namespace tinprov
