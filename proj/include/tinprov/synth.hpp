#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string_view>
#include <vector>

#include "tinprov/stream.hpp"
#include "tinprov/types.hpp"

namespace tinprov {

enum class SynthShape { uniform, hub, chain };

inline std::optional<SynthShape> parse_shape(std::string_view name) {
  if (name == "uniform") return SynthShape::uniform;
  if (name == "hub") return SynthShape::hub;
  if (name == "chain") return SynthShape::chain;
  return std::nullopt;
}

struct SynthParams {
  std::size_t num_vertices{100};
  std::size_t num_interactions{1000};
  std::uint64_t seed{1};
  SynthShape shape{SynthShape::uniform};
  std::uint32_t max_quantity{1000};
  double hub_share{0.6};  // hub: fraction of interactions touching vertex 0
};

// Deterministic synthetic stream. Times are 1, 2, 3, ...; quantities are
// integers drawn log-uniformly from [1, max_quantity]. Only the raw 64-bit
// engine output is used so the stream does not depend on the standard
// library's distribution implementations.
//   uniform: distinct endpoints chosen uniformly
//   hub:     vertex 0 is an endpoint of ~hub_share of the interactions
//   chain:   interactions only on edges i -> i+1
inline std::vector<Interaction> synthesize(const SynthParams& params) {
  if (params.num_vertices == 0) throw ConfigError("synth needs at least one vertex");
  std::mt19937_64 rng(params.seed);
  const std::uint64_t n = params.num_vertices;
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto below = [&](std::uint64_t bound) { return bound == 0 ? 0 : rng() % bound; };
  auto vid = [](std::uint64_t i) { return VertexId{static_cast<std::uint32_t>(i)}; };
  // A distinct partner for `a`, uniform over the other vertices.
  auto other = [&](std::uint64_t a) {
    if (n == 1) return a;
    std::uint64_t b = below(n - 1);
    return b >= a ? b + 1 : b;
  };

  std::vector<Interaction> out;
  out.reserve(params.num_interactions);
  const double log_max = std::log(static_cast<double>(std::max<std::uint32_t>(params.max_quantity, 1)));
  for (std::size_t i = 0; i < params.num_interactions; ++i) {
    std::uint64_t s = 0, d = 0;
    switch (params.shape) {
      case SynthShape::uniform:
        s = below(n);
        d = other(s);
        break;
      case SynthShape::hub:
        if (unit() < params.hub_share) {
          const std::uint64_t partner = other(0);
          if (rng() & 1) {
            s = 0;
            d = partner;
          } else {
            s = partner;
            d = 0;
          }
        } else {
          s = below(n);
          d = other(s);
        }
        break;
      case SynthShape::chain:
        if (n == 1) break;
        s = below(n - 1);
        d = s + 1;
        break;
    }
    const double q = std::floor(std::exp(unit() * log_max));
    out.push_back({vid(s), vid(d), static_cast<Time>(i + 1), std::max(1.0, q)});
  }
  return out;
}

}  // namespace tinprov
