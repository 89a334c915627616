// Replays a small stream under three policies and prints where the
// quantity held by each vertex came from.

#include <iostream>
#include <vector>

#include "tinprov/element.hpp"
#include "tinprov/noprov.hpp"
#include "tinprov/proportional.hpp"

using tinprov::Interaction;
using tinprov::VertexId;

int main() {
  const std::vector<Interaction> stream{
      {VertexId{1}, VertexId{2}, 1, 3}, {VertexId{2}, VertexId{0}, 3, 5},
      {VertexId{0}, VertexId{1}, 4, 3}, {VertexId{1}, VertexId{2}, 5, 7},
      {VertexId{2}, VertexId{1}, 7, 2}, {VertexId{2}, VertexId{0}, 8, 1},
  };

  tinprov::NoProvEngine totals(3);
  tinprov::LifoEngine lifo(3, {.track_paths = true});
  tinprov::DenseProportionalEngine mixed(3);
  for (const auto& r : stream) {
    totals.process(r);
    lifo.process(r);
    mixed.process(r);
  }

  for (std::uint32_t i = 0; i < 3; ++i) {
    const VertexId v{i};
    std::cout << "v" << i << " holds " << totals.total(v) << '\n';
    for (const auto& p : lifo.snapshot(v)) {
      std::cout << "  lifo: " << p.quantity << " from v" << p.origin.index << " via";
      for (VertexId hop : lifo.paths().materialize(p.path)) std::cout << " v" << hop.index;
      std::cout << '\n';
    }
    const auto share = mixed.vector(v);
    for (std::uint32_t u = 0; u < 3; ++u) {
      if (share[u] > 0) std::cout << "  proportional: " << share[u] << " from v" << u << '\n';
    }
  }
}
