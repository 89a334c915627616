#include <vector>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "tinprov/element.hpp"
#include "tinprov/engine.hpp"
#include "tinprov/paths.hpp"
#include "tinprov/report.hpp"

namespace tinprov {
namespace {

using testing::engine_parcels;
using testing::oracle_parcels;
using testing::random_stream;
using testing::running_example;
using testing::V;

using Route = std::vector<VertexId>;

TEST(PathStore, BirthAndTransfer) {
  PathStore store;
  const auto a = store.on_birth(V(0));
  const auto a2 = store.on_birth(V(0));
  EXPECT_EQ(store.materialize(a), (Route{V(0)}));
  EXPECT_EQ(store.materialize(a), store.materialize(a2));
  const auto ab = store.on_transfer(a, V(1));
  EXPECT_EQ(store.materialize(ab), (Route{V(0), V(1)}));
  EXPECT_EQ(store.length(ab), 2u);
  EXPECT_EQ(store.materialize(a), (Route{V(0)}));
  EXPECT_TRUE(store.materialize(kNoPath).empty());
}

TEST(Paths, ChainOfFullRelays) {
  LifoEngine engine(4, {.track_paths = true});
  engine.process({V(0), V(1), 1, 5});
  engine.process({V(1), V(2), 2, 5});
  engine.process({V(2), V(3), 3, 5});
  const auto parcels = engine.snapshot(V(3));
  ASSERT_EQ(parcels.size(), 1u);
  EXPECT_EQ(engine.paths().materialize(parcels[0].path), (Route{V(0), V(1), V(2)}));
}

TEST(Paths, RunningExampleLifo) {
  LifoEngine engine(3, {.track_paths = true});
  for (const auto& r : running_example()) engine.process(r);
  std::vector<Route> at_v0;
  for (const auto& p : engine.snapshot(V(0))) at_v0.push_back(engine.paths().materialize(p.path));
  ASSERT_EQ(at_v0.size(), 2u);
  EXPECT_EQ(at_v0[1], (Route{V(1), V(2)}));
  for (const auto& route : at_v0) EXPECT_EQ(route.front(), V(1));
  EXPECT_TRUE(engine.snapshot(V(2)).size() == 3u);
}

TEST(Paths, SplitKeepsRouteOnBothPieces) {
  FifoEngine engine(4, {.track_paths = true});
  engine.process({V(0), V(1), 1, 6});
  engine.process({V(1), V(2), 2, 2});
  const auto held = engine.snapshot(V(1));
  const auto moved = engine.snapshot(V(2));
  ASSERT_EQ(held.size(), 1u);
  ASSERT_EQ(moved.size(), 1u);
  EXPECT_EQ(engine.paths().materialize(held[0].path), (Route{V(0)}));
  EXPECT_EQ(engine.paths().materialize(moved[0].path), (Route{V(0), V(1)}));
}

TEST(Paths, NeverRelayedHasLengthOne) {
  MostRecentlyBornEngine engine(2, {.track_paths = true});
  engine.process({V(0), V(1), 1, 3});
  const auto p = engine.snapshot(V(1));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(engine.paths().length(p[0].path), 1u);
  EXPECT_TRUE(engine.snapshot(V(0)).empty());
}

TEST(Paths, AverageLengthOnChainEqualsChainLength) {
  for (std::uint32_t L : {1u, 3u, 7u}) {
    EngineConfig config;
    config.policy = Policy::fifo;
    config.track_paths = true;
    Engine engine(config, L + 1);
    for (std::uint32_t i = 0; i < L; ++i) {
      engine.process({V(i), V(i + 1), static_cast<double>(i + 1), 10});
    }
    EXPECT_EQ(average_path_length(engine), static_cast<double>(L)) << "L " << L;
  }
}

TEST(Paths, ProportionalRejectsPaths) {
  EngineConfig config;
  config.policy = Policy::proportional_sparse;
  config.track_paths = true;
  EXPECT_THROW(Engine(config, 3), ConfigError);
}

// Per-vertex (origin, quantity, path) multisets equal the naive simulator.
template <class E>
void expect_paths_match_oracle(oracle::Rule rule) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto stream = random_stream({.vertices = 15, .interactions = 200, .seed = seed});
    E engine(15, {.track_paths = true});
    oracle::ElementOracle o(15, rule);
    for (const auto& r : stream) {
      engine.process(r);
      o.step(r);
    }
    for (std::uint32_t v = 0; v < 15; ++v) {
      ASSERT_EQ(engine_parcels(engine, V(v), false, true), oracle_parcels(o, V(v), false, true))
          << "seed " << seed << " vertex " << v;
      for (const auto& p : engine.snapshot(V(v))) {
        ASSERT_EQ(engine.paths().materialize(p.path).front(), p.origin);
      }
    }
  }
}

TEST(PathsOracle, Lifo) { expect_paths_match_oracle<LifoEngine>(oracle::Rule::lifo); }
TEST(PathsOracle, Fifo) { expect_paths_match_oracle<FifoEngine>(oracle::Rule::fifo); }
TEST(PathsOracle, LeastRecentlyBorn) {
  expect_paths_match_oracle<LeastRecentlyBornEngine>(oracle::Rule::least_recently_born);
}
TEST(PathsOracle, MostRecentlyBorn) {
  expect_paths_match_oracle<MostRecentlyBornEngine>(oracle::Rule::most_recently_born);
}

TEST(PathsProperty, StoreIsAppendOnly) {
  const auto stream = random_stream({.vertices = 10, .interactions = 300, .seed = 4});
  LifoEngine engine(10, {.track_paths = true});
  std::size_t nodes = 0;
  for (const auto& r : stream) {
    engine.process(r);
    ASSERT_GE(engine.paths().node_count(), nodes);
    nodes = engine.paths().node_count();
  }
}

}  // namespace
}  // namespace tinprov
