#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include "tinprov/noprov.hpp"
#include "tinprov/paths.hpp"
#include "tinprov/types.hpp"

namespace tinprov {

// A buffered quantity that keeps its identity until it is split.
struct Parcel {
  VertexId origin;
  Time birth_time{0};
  Quantity quantity{0};
  PathRef path{kNoPath};
  std::uint64_t seq{0};  // insertion sequence number, engine-global
};

enum class BirthOrder { least_recent, most_recent };
enum class ReceiptOrder { fifo, lifo };

namespace detail {

// True when `a` must be selected before `b`. Ties on birth time go to the
// smaller origin index, then to the earlier insertion.
template <BirthOrder Order>
constexpr bool birth_precedes(const Parcel& a, const Parcel& b) {
  if (a.birth_time != b.birth_time) {
    return Order == BirthOrder::least_recent ? a.birth_time < b.birth_time
                                             : a.birth_time > b.birth_time;
  }
  if (a.origin != b.origin) return a.origin < b.origin;
  return a.seq < b.seq;
}

}  // namespace detail

// Binary heap keyed on birth time (min-heap for least-recently-born,
// max-heap for most-recently-born).
template <BirthOrder Order>
class HeapBuffer {
 public:
  static constexpr bool kPreservesParcels = true;

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  // Mutating the quantity of the top parcel keeps the heap valid.
  Parcel& top() { return heap_.front(); }

  Parcel pop() {
    std::pop_heap(heap_.begin(), heap_.end(), after);
    Parcel p = heap_.back();
    heap_.pop_back();
    return p;
  }

  void push(const Parcel& p) {
    heap_.push_back(p);
    std::push_heap(heap_.begin(), heap_.end(), after);
  }

  // Parcels in selection order.
  std::vector<Parcel> contents() const {
    std::vector<Parcel> out = heap_;
    std::sort(out.begin(), out.end(), detail::birth_precedes<Order>);
    return out;
  }

 private:
  static bool after(const Parcel& a, const Parcel& b) {
    return detail::birth_precedes<Order>(b, a);
  }

  std::vector<Parcel> heap_;
};

// Birth-ordered buffer that merges parcels sharing (origin, birth time).
// Only valid without path tracking; selection results aggregated by
// (origin, birth time) are identical to HeapBuffer.
template <BirthOrder Order>
class CoalescedBuffer {
 public:
  static constexpr bool kPreservesParcels = false;

  bool empty() const { return parcels_.empty(); }
  std::size_t size() const { return parcels_.size(); }

  Parcel& top() { return parcels_.begin()->second; }

  Parcel pop() {
    Parcel p = parcels_.begin()->second;
    parcels_.erase(parcels_.begin());
    return p;
  }

  // Returns false when the parcel was merged into an existing one.
  bool push(const Parcel& p) {
    auto [it, inserted] = parcels_.try_emplace(Key{p.birth_time, p.origin}, p);
    if (!inserted) it->second.quantity += p.quantity;
    return inserted;
  }

  std::vector<Parcel> contents() const {
    std::vector<Parcel> out;
    out.reserve(parcels_.size());
    for (const auto& [key, p] : parcels_) out.push_back(p);
    return out;
  }

 private:
  struct Key {
    Time birth_time;
    VertexId origin;
  };
  struct KeyOrder {
    bool operator()(const Key& a, const Key& b) const {
      if (a.birth_time != b.birth_time) {
        return Order == BirthOrder::least_recent ? a.birth_time < b.birth_time
                                                 : a.birth_time > b.birth_time;
      }
      return a.origin < b.origin;
    }
  };

  std::map<Key, Parcel, KeyOrder> parcels_;
};

// Receipt-ordered buffer: a queue (FIFO) or a stack (LIFO). New parcels are
// appended at the back in both cases.
template <ReceiptOrder Order>
class OrderedBuffer {
 public:
  static constexpr bool kPreservesParcels = true;

  bool empty() const { return parcels_.empty(); }
  std::size_t size() const { return parcels_.size(); }

  Parcel& top() { return Order == ReceiptOrder::fifo ? parcels_.front() : parcels_.back(); }

  Parcel pop() {
    Parcel p;
    if constexpr (Order == ReceiptOrder::fifo) {
      p = parcels_.front();
      parcels_.pop_front();
    } else {
      p = parcels_.back();
      parcels_.pop_back();
    }
    return p;
  }

  void push(const Parcel& p) { parcels_.push_back(p); }

  // Front to back, i.e. insertion order.
  std::vector<Parcel> contents() const { return {parcels_.begin(), parcels_.end()}; }

 private:
  std::deque<Parcel> parcels_;
};

struct ElementOptions {
  Quantity epsilon{kDefaultEpsilon};
  bool track_paths{false};
};

// Replays interactions with parcel-level provenance. The buffer type
// decides which parcel is relayed first; the residue, split and newborn
// mechanics are shared by all element policies.
template <class Buffer>
class ElementEngine {
 public:
  using SelectionObserver = std::function<void(VertexId source, const Parcel& selected)>;

  explicit ElementEngine(std::size_t num_vertices = 0, ElementOptions options = {})
      : options_(options), buffers_(num_vertices), totals_(num_vertices, 0.0) {
    if (options_.track_paths && !Buffer::kPreservesParcels) {
      throw ConfigError("path tracking cannot be combined with parcel coalescing");
    }
  }

  StepResult process(const Interaction& r) {
    reserve(std::max(r.source.index, r.dest.index) + std::size_t{1});
    Buffer& src = buffers_[r.source.index];

    moving_.clear();
    Quantity resq = r.quantity;
    while (!src.empty()) {
      if (resq <= 0 || (!moving_.empty() && resq <= options_.epsilon)) break;
      Parcel& top = src.top();
      if (observer_) observer_(r.source, top);
      if (top.quantity > resq && top.quantity - resq > options_.epsilon) {
        Parcel piece = top;
        piece.quantity = resq;
        top.quantity -= resq;
        resq = 0;
        moving_.push_back(piece);
        ++parcel_count_;
      } else {
        Parcel whole = src.pop();
        resq -= whole.quantity;
        moving_.push_back(whole);
      }
    }
    for (auto& p : moving_) {
      if (options_.track_paths) p.path = paths_.on_transfer(p.path, r.source);
    }

    StepResult step;
    if (resq > options_.epsilon || (moving_.empty() && resq > 0)) {
      Parcel born;
      born.origin = r.source;
      born.birth_time = r.time;
      born.quantity = resq;
      if (options_.track_paths) born.path = paths_.on_birth(r.source);
      moving_.push_back(born);
      ++parcel_count_;
      step.newborn = resq;
    }
    step.relayed = std::min(r.quantity, totals_[r.source.index]);

    Buffer& dst = buffers_[r.dest.index];
    for (auto& p : moving_) {
      p.seq = next_seq_++;
      if constexpr (Buffer::kPreservesParcels) {
        dst.push(p);
      } else {
        if (!dst.push(p)) --parcel_count_;
      }
    }

    totals_[r.source.index] -= step.relayed;
    totals_[r.dest.index] += r.quantity;
    return step;
  }

  Quantity total(VertexId v) const {
    return v.index < totals_.size() ? totals_[v.index] : 0.0;
  }

  // Parcels of v in selection order (heap) or insertion order (queue/stack).
  std::vector<Parcel> snapshot(VertexId v) const {
    if (v.index >= buffers_.size()) return {};
    return buffers_[v.index].contents();
  }

  std::size_t num_vertices() const { return buffers_.size(); }
  std::size_t parcel_count() const { return parcel_count_; }
  const PathStore& paths() const { return paths_; }
  const ElementOptions& options() const { return options_; }

  void set_selection_observer(SelectionObserver observer) { observer_ = std::move(observer); }

  void reserve(std::size_t n) {
    if (n > buffers_.size()) {
      buffers_.resize(n);
      totals_.resize(n, 0.0);
    }
  }

 private:
  ElementOptions options_;
  std::vector<Buffer> buffers_;
  std::vector<Quantity> totals_;
  std::vector<Parcel> moving_;
  PathStore paths_;
  SelectionObserver observer_;
  std::uint64_t next_seq_{0};
  std::size_t parcel_count_{0};
};

using LeastRecentlyBornEngine = ElementEngine<HeapBuffer<BirthOrder::least_recent>>;
using MostRecentlyBornEngine = ElementEngine<HeapBuffer<BirthOrder::most_recent>>;
using FifoEngine = ElementEngine<OrderedBuffer<ReceiptOrder::fifo>>;
using LifoEngine = ElementEngine<OrderedBuffer<ReceiptOrder::lifo>>;

}  // namespace tinprov
