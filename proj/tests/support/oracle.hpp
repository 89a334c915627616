#pragma once

// Brute-force reference simulator. Buffers are flat vectors scanned
// linearly; proportional vectors are dense long double arrays whose totals
// are recomputed from scratch every step. Nothing here shares code with the
// engines beyond the Interaction record.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <tuple>
#include <vector>

#include "tinprov/types.hpp"

namespace tinprov::oracle {

enum class Rule { least_recently_born, most_recently_born, fifo, lifo };

struct Parcel {
  std::uint32_t origin{0};
  double birth_time{0};
  double quantity{0};
  std::vector<std::uint32_t> path;
  std::uint64_t seq{0};
};

class ElementOracle {
 public:
  ElementOracle(std::size_t num_vertices, Rule rule) : rule_(rule), buffers_(num_vertices) {}

  void step(const Interaction& r) {
    auto& src = buffers_.at(r.source.index);
    std::vector<Parcel> moved;
    double resq = r.quantity;
    while (resq > 0 && !src.empty()) {
      std::size_t pick = select(src);
      Parcel& p = src[pick];
      if (p.quantity > resq) {
        Parcel piece = p;
        piece.quantity = resq;
        piece.path.push_back(r.source.index);
        p.quantity -= resq;
        resq = 0;
        moved.push_back(piece);
      } else {
        Parcel whole = p;
        whole.path.push_back(r.source.index);
        resq -= whole.quantity;
        src.erase(src.begin() + static_cast<std::ptrdiff_t>(pick));
        moved.push_back(whole);
      }
    }
    if (resq > 0) {
      Parcel born;
      born.origin = r.source.index;
      born.birth_time = r.time;
      born.quantity = resq;
      born.path = {r.source.index};
      moved.push_back(born);
    }
    auto& dst = buffers_.at(r.dest.index);
    for (auto& p : moved) {
      p.seq = next_seq_++;
      dst.push_back(p);
    }
  }

  const std::vector<Parcel>& buffer(VertexId v) const { return buffers_.at(v.index); }

  double total(VertexId v) const {
    double t = 0;
    for (const auto& p : buffers_.at(v.index)) t += p.quantity;
    return t;
  }

  std::size_t num_vertices() const { return buffers_.size(); }

 private:
  std::size_t select(const std::vector<Parcel>& buf) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < buf.size(); ++i) {
      if (better(buf[i], buf[best])) best = i;
    }
    return best;
  }

  bool better(const Parcel& a, const Parcel& b) const {
    switch (rule_) {
      case Rule::least_recently_born:
        return std::tie(a.birth_time, a.origin, a.seq) < std::tie(b.birth_time, b.origin, b.seq);
      case Rule::most_recently_born:
        if (a.birth_time != b.birth_time) return a.birth_time > b.birth_time;
        return std::tie(a.origin, a.seq) < std::tie(b.origin, b.seq);
      case Rule::fifo:
        return a.seq < b.seq;
      case Rule::lifo:
        return a.seq > b.seq;
    }
    return false;
  }

  Rule rule_;
  std::vector<std::vector<Parcel>> buffers_;
  std::uint64_t next_seq_{0};
};

class ProportionalOracle {
 public:
  explicit ProportionalOracle(std::size_t num_vertices)
      : ProportionalOracle(num_vertices, num_vertices) {}

  // `width` > num_vertices leaves spare slots, e.g. a sink for forget().
  ProportionalOracle(std::size_t num_vertices, std::size_t width)
      : vectors_(num_vertices, std::vector<long double>(width, 0.0L)) {}

  // Moves every component of every vector into `sink`.
  void forget(std::size_t sink) {
    for (auto& p : vectors_) {
      long double all = 0;
      for (long double& x : p) {
        all += x;
        x = 0;
      }
      p.at(sink) = all;
    }
  }

  void step(const Interaction& r) {
    auto& ps = vectors_.at(r.source.index);
    long double held = 0;
    for (long double x : ps) held += x;
    const long double q = r.quantity;
    std::vector<long double> moving(ps.size(), 0.0L);
    long double newborn = 0;
    if (q >= held) {
      moving = ps;
      std::fill(ps.begin(), ps.end(), 0.0L);
      newborn = q - held;
    } else {
      const long double share = q / held;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        moving[i] = share * ps[i];
        ps[i] = (1.0L - share) * ps[i];
      }
    }
    auto& pd = vectors_.at(r.dest.index);
    for (std::size_t i = 0; i < pd.size(); ++i) pd[i] += moving[i];
    pd[r.source.index] += newborn;
  }

  const std::vector<long double>& vector(VertexId v) const { return vectors_.at(v.index); }

  long double total(VertexId v) const {
    long double t = 0;
    for (long double x : vectors_.at(v.index)) t += x;
    return t;
  }

  std::size_t num_vertices() const { return vectors_.size(); }

 private:
  std::vector<std::vector<long double>> vectors_;
};

// Algorithm-1 totals, written independently of NoProvEngine.
inline std::vector<double> baseline_totals(std::span<const Interaction> stream, std::size_t n) {
  std::vector<double> b(n, 0.0);
  for (const auto& r : stream) {
    const double relayed = b[r.source.index] < r.quantity ? b[r.source.index] : r.quantity;
    b[r.source.index] -= relayed;
    b[r.dest.index] += r.quantity;
  }
  return b;
}

// Replays `stream`, calling `observe(step_index, oracle)` after each step.
template <class Oracle>
void replay(Oracle& oracle, std::span<const Interaction> stream,
            const std::function<void(std::size_t, const Oracle&)>& observe = {}) {
  for (std::size_t i = 0; i < stream.size(); ++i) {
    oracle.step(stream[i]);
    if (observe) observe(i, oracle);
  }
}

}  // namespace tinprov::oracle
