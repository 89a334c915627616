#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "oracle.hpp"
#include "tinprov/element.hpp"
#include "tinprov/types.hpp"

namespace tinprov::testing {

inline VertexId V(std::uint32_t i) { return VertexId{i}; }

// The three-vertex running example: six interactions on v0, v1, v2.
inline std::vector<Interaction> running_example() {
  return {
      {V(1), V(2), 1, 3}, {V(2), V(0), 3, 5}, {V(0), V(1), 4, 3},
      {V(1), V(2), 5, 7}, {V(2), V(1), 7, 2}, {V(2), V(0), 8, 1},
  };
}

// Buffer contents after each running-example interaction, as printed in the
// worked tables: per row, one list per vertex v0, v1, v2.
struct BornTriple {
  std::uint32_t origin;
  double birth;
  double quantity;
};
using Pair = std::pair<std::uint32_t, double>;

inline std::vector<std::vector<std::vector<BornTriple>>> least_recently_born_table() {
  return {
      {{}, {}, {{1, 1, 3}}},
      {{{1, 1, 3}, {2, 3, 2}}, {}, {}},
      {{{2, 3, 2}}, {{1, 1, 3}}, {}},
      {{{2, 3, 2}}, {}, {{1, 1, 3}, {1, 5, 4}}},
      {{{2, 3, 2}}, {{1, 1, 2}}, {{1, 1, 1}, {1, 5, 4}}},
      {{{1, 1, 1}, {2, 3, 2}}, {{1, 1, 2}}, {{1, 5, 4}}},
  };
}

inline std::vector<std::vector<std::vector<Pair>>> lifo_table() {
  return {
      {{}, {}, {{1, 3}}},
      {{{1, 3}, {2, 2}}, {}, {}},
      {{{1, 2}}, {{1, 1}, {2, 2}}, {}},
      {{{1, 2}}, {}, {{1, 1}, {2, 2}, {1, 4}}},
      {{{1, 2}}, {{1, 2}}, {{1, 1}, {2, 2}, {1, 2}}},
      {{{1, 2}, {1, 1}}, {{1, 2}}, {{1, 1}, {2, 2}, {1, 1}}},
  };
}

// Proportional vectors p_v0, p_v1, p_v2 (two decimals as printed).
inline std::vector<std::vector<std::vector<double>>> proportional_table() {
  return {
      {{0, 0, 0}, {0, 0, 0}, {0, 3, 0}},
      {{0, 3, 2}, {0, 0, 0}, {0, 0, 0}},
      {{0, 1.2, 0.8}, {0, 1.8, 1.2}, {0, 0, 0}},
      {{0, 1.2, 0.8}, {0, 0, 0}, {0, 5.8, 1.2}},
      {{0, 1.2, 0.8}, {0, 1.66, 0.34}, {0, 4.14, 0.86}},
      {{0, 2.03, 0.97}, {0, 1.66, 0.34}, {0, 3.31, 0.69}},
  };
}

struct StreamSpec {
  std::uint32_t vertices{20};
  std::size_t interactions{300};
  std::uint64_t seed{1};
  bool integer_quantities{true};
  double self_loop_rate{0.02};
  double tie_rate{0.1};  // chance that a time equals the previous one
};

// Random time-ordered stream. Integer quantities keep element-policy
// arithmetic exact.
inline std::vector<Interaction> random_stream(const StreamSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::uint32_t> vertex(0, spec.vertices - 1);
  std::uniform_int_distribution<int> qty(1, 100);
  std::uniform_real_distribution<double> real_qty(0.01, 100.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Interaction> out;
  double t = 0;
  for (std::size_t i = 0; i < spec.interactions; ++i) {
    if (coin(rng) >= spec.tie_rate || i == 0) t += 1;
    const std::uint32_t s = vertex(rng);
    std::uint32_t d = vertex(rng);
    if (spec.vertices > 1 && d == s && coin(rng) >= spec.self_loop_rate) {
      d = (s + 1 + vertex(rng) % (spec.vertices - 1)) % spec.vertices;
    }
    const double q = spec.integer_quantities ? qty(rng) : real_qty(rng);
    out.push_back({V(s), V(d), t, q});
  }
  return out;
}

using ParcelKey = std::tuple<std::uint32_t, double, double, std::vector<std::uint32_t>>;

// (origin, birth, quantity, path) multiset of an engine buffer, sorted.
template <class Engine>
std::vector<ParcelKey> engine_parcels(const Engine& engine, VertexId v, bool with_birth,
                                      bool with_path) {
  std::vector<ParcelKey> out;
  for (const Parcel& p : engine.snapshot(v)) {
    std::vector<std::uint32_t> path;
    if (with_path) {
      for (VertexId x : engine.paths().materialize(p.path)) path.push_back(x.index);
    }
    out.emplace_back(p.origin.index, with_birth ? p.birth_time : 0.0, p.quantity, std::move(path));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<ParcelKey> oracle_parcels(const oracle::ElementOracle& o, VertexId v,
                                             bool with_birth, bool with_path) {
  std::vector<ParcelKey> out;
  for (const auto& p : o.buffer(v)) {
    out.emplace_back(p.origin, with_birth ? p.birth_time : 0.0, p.quantity,
                     with_path ? p.path : std::vector<std::uint32_t>{});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tinprov::testing
