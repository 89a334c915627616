#include <algorithm>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace tinprov {
namespace {

using testing::random_stream;
using testing::running_example;
using testing::V;

TEST(Oracle, LeastRecentlyBornReproducesTable) {
  const auto table = testing::least_recently_born_table();
  oracle::ElementOracle o(3, oracle::Rule::least_recently_born);
  oracle::replay<oracle::ElementOracle>(
      o, running_example(), [&](std::size_t i, const oracle::ElementOracle& s) {
        for (std::uint32_t v = 0; v < 3; ++v) {
          std::vector<std::tuple<std::uint32_t, double, double>> got, want;
          for (const auto& p : s.buffer(V(v))) got.emplace_back(p.origin, p.birth_time, p.quantity);
          for (const auto& t : table[i][v]) want.emplace_back(t.origin, t.birth, t.quantity);
          std::sort(got.begin(), got.end());
          std::sort(want.begin(), want.end());
          EXPECT_EQ(got, want) << "row " << i + 1 << " vertex " << v;
        }
      });
}

TEST(Oracle, LifoReproducesTable) {
  const auto table = testing::lifo_table();
  oracle::ElementOracle o(3, oracle::Rule::lifo);
  oracle::replay<oracle::ElementOracle>(
      o, running_example(), [&](std::size_t i, const oracle::ElementOracle& s) {
        for (std::uint32_t v = 0; v < 3; ++v) {
          std::vector<testing::Pair> got;
          for (const auto& p : s.buffer(V(v))) got.emplace_back(p.origin, p.quantity);
          auto want = table[i][v];
          std::sort(got.begin(), got.end());
          std::sort(want.begin(), want.end());
          EXPECT_EQ(got, want) << "row " << i + 1 << " vertex " << v;
        }
      });
}

TEST(Oracle, ProportionalReproducesTable) {
  const auto table = testing::proportional_table();
  oracle::ProportionalOracle o(3);
  oracle::replay<oracle::ProportionalOracle>(
      o, running_example(), [&](std::size_t i, const oracle::ProportionalOracle& s) {
        for (std::uint32_t v = 0; v < 3; ++v) {
          for (std::uint32_t u = 0; u < 3; ++u) {
            EXPECT_NEAR(static_cast<double>(s.vector(V(v))[u]), table[i][v][u], 0.01);
          }
        }
      });
}

TEST(Oracle, TotalsMatchBaseline) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto stream = random_stream({.vertices = 10, .interactions = 300, .seed = seed});
    const auto base = oracle::baseline_totals(stream, 10);
    oracle::ProportionalOracle prop(10);
    for (auto rule : {oracle::Rule::least_recently_born, oracle::Rule::most_recently_born,
                      oracle::Rule::fifo, oracle::Rule::lifo}) {
      oracle::ElementOracle o(10, rule);
      oracle::replay(o, stream);
      for (std::uint32_t v = 0; v < 10; ++v) ASSERT_EQ(o.total(V(v)), base[v]);
    }
    oracle::replay(prop, stream);
    for (std::uint32_t v = 0; v < 10; ++v) {
      ASSERT_NEAR(static_cast<double>(prop.total(V(v))), base[v], 1e-9);
    }
  }
}

}  // namespace
}  // namespace tinprov
