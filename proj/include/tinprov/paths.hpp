#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "tinprov/types.hpp"

namespace tinprov {

// Handle into a PathStore. kNoPath marks a parcel without path tracking.
struct PathRef {
  std::uint32_t node{std::numeric_limits<std::uint32_t>::max()};

  constexpr bool valid() const { return node != std::numeric_limits<std::uint32_t>::max(); }
  constexpr bool operator==(const PathRef&) const = default;
};

inline constexpr PathRef kNoPath{};

// Append-only store of routes as reversed parent chains: a node holds one
// vertex and a link to the prefix it extends, so parcels split from the
// same ancestor share their common prefix. Parents always precede children.
class PathStore {
 public:
  PathRef on_birth(VertexId origin) { return push(origin, kNoPath); }

  PathRef on_transfer(PathRef path, VertexId transmitter) {
    return push(transmitter, path);
  }

  // Logical route origin..last transmitter. The holder is not included.
  std::vector<VertexId> materialize(PathRef path) const {
    std::vector<VertexId> out;
    for (PathRef p = path; p.valid(); p = nodes_[p.node].parent) {
      out.push_back(nodes_[p.node].vertex);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::size_t length(PathRef path) const {
    std::size_t n = 0;
    for (PathRef p = path; p.valid(); p = nodes_[p.node].parent) ++n;
    return n;
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t memory_bytes() const { return nodes_.capacity() * sizeof(Node); }

 private:
  struct Node {
    VertexId vertex;
    PathRef parent;
  };

  PathRef push(VertexId v, PathRef parent) {
    nodes_.push_back({v, parent});
    return PathRef{static_cast<std::uint32_t>(nodes_.size() - 1)};
  }

  std::vector<Node> nodes_;
};

}  // namespace tinprov
