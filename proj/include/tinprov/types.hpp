#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace tinprov {

using Quantity = double;
using Time = double;

inline constexpr Quantity kDefaultEpsilon = 1e-9;

// Dense vertex index assigned at interning time. The label lives in a
// VertexTable owned by whoever interned the stream.
struct VertexId {
  std::uint32_t index{0};

  constexpr auto operator<=>(const VertexId&) const = default;
};

// Sentinel origin for mass whose true origin has been forgotten (window
// reset, budget eviction, dust folding). Never a valid interned index.
inline constexpr VertexId kUnknown{std::numeric_limits<std::uint32_t>::max()};

inline constexpr bool is_unknown(VertexId v) { return v == kUnknown; }

struct Interaction {
  VertexId source;
  VertexId dest;
  Time time{0};
  Quantity quantity{0};
};

// Bad flag combination or malformed scope input. Raised before any
// interaction is processed.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tinprov

template <>
struct std::hash<tinprov::VertexId> {
  std::size_t operator()(tinprov::VertexId v) const noexcept {
    return std::hash<std::uint32_t>{}(v.index);
  }
};
