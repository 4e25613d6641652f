#include <set>

#include "coownet/nullmodel.hpp"
#include "coownet/rng.hpp"
#include "coownet/synth.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coownet;
using oracles::make_network;

namespace {

std::multiset<double> weight_multiset(const InvestorNetwork& net) {
  std::multiset<double> out;
  for (const auto& e : net.edges) out.insert(e.weight);
  return out;
}

std::set<std::pair<int, int>> edge_set(const InvestorNetwork& net) {
  std::set<std::pair<int, int>> out;
  for (const auto& e : net.edges) out.insert({e.a, e.b});
  return out;
}

}  // namespace

TEST_CASE("rewire: 3-path has a unique simple realization") {
  const auto path = make_network(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto result = configuration_rewire(path, {20, 1, false});
  CHECK(degree_sequence(result.network) == std::vector<int>{1, 1, 2});
  CHECK(edge_set(result.network) == edge_set(path));
  CHECK(result.degenerate);  // no valid swap exists
}

TEST_CASE("rewire: star with three leaves is rigid") {
  const auto star = make_network(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const auto result = configuration_rewire(star, {20, 5, false});
  CHECK(edge_set(result.network) == edge_set(star));
  CHECK(degree_sequence(result.network) == std::vector<int>{1, 1, 1, 3});
  CHECK(result.degenerate);
}

TEST_CASE("rewire: preserves degrees on random networks") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = oracles::random_network(rng, 25, 0.25);
    if (net.edge_count() < 2) continue;
    const auto result =
        configuration_rewire(net, {20, 1000ULL + trial, false});
    CHECK(degree_sequence(result.network) == degree_sequence(net));
  }
}

TEST_CASE("rewire: output stays simple") {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = oracles::random_network(rng, 30, 0.2);
    if (net.edge_count() < 2) continue;
    const auto result = configuration_rewire(net, {20, static_cast<std::uint64_t>(trial), false});
    std::set<std::pair<int, int>> seen;
    for (const auto& e : result.network.edges) {
      CHECK(e.a < e.b);
      CHECK(seen.insert({e.a, e.b}).second);
    }
  }
}

TEST_CASE("rewire: node ids, labels and weight multiset ride along") {
  Rng rng(107);
  auto net = oracles::random_network(rng, 30, 0.3);
  for (int i = 0; i < net.node_count(); ++i)
    if (i % 3 == 0) net.labels[i] = {Keiretsu::Sanwa};
  for (std::size_t i = 0; i < net.edges.size(); ++i)
    net.edges[i].weight = 0.01 * static_cast<double>(i + 1);

  const auto result = configuration_rewire(net, {20, 9, false});
  CHECK(result.network.node_ids == net.node_ids);
  CHECK(result.network.labels == net.labels);
  CHECK(weight_multiset(result.network) == weight_multiset(net));
  // Attributes stay with their edge slot while endpoints change.
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    CHECK(result.network.edges[i].weight == net.edges[i].weight);
    CHECK(result.network.edges[i].shared_count == net.edges[i].shared_count);
  }
}

TEST_CASE("rewire: actually shuffles a 50-node network") {
  // At 20 swaps per edge well under 30% of the original edges survive.
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
    Rng rng(200 + seed);
    InvestorNetwork net;
    while (net.node_count() != 50)  // G(50, 0.15), conditioned on no isolates
      net = oracles::random_network(rng, 50, 0.15);
    const auto result = configuration_rewire(net, {20, seed, false});
    const auto before = edge_set(net);
    const auto after = edge_set(result.network);
    std::size_t surviving = 0;
    for (const auto& e : after)
      if (before.contains(e)) ++surviving;
    CHECK(static_cast<double>(surviving) <
          0.3 * static_cast<double>(before.size()));
  }
}

TEST_CASE("rewire: deterministic per seed") {
  Rng rng(113);
  const auto net = oracles::random_network(rng, 20, 0.3);
  const auto a = configuration_rewire(net, {20, 4242, false});
  const auto b = configuration_rewire(net, {20, 4242, false});
  CHECK(edge_set(a.network) == edge_set(b.network));
  CHECK(a.swaps_applied == b.swaps_applied);
}

TEST_CASE("rewire: input validation") {
  const auto single = make_network(2, {{0, 1, 1.0}});
  CHECK_THROWS_AS((void)configuration_rewire(single, {20, 1, false}),
                  std::invalid_argument);
  const auto path = make_network(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK_THROWS_AS((void)configuration_rewire(path, {0, 1, false}),
                  std::invalid_argument);
}

TEST_CASE("null_battery: rejects replicas < 1") {
  const auto net = make_network(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  NullBatteryConfig cfg;
  cfg.replicas = 0;
  CHECK_THROWS_AS((void)null_battery(net, {}, cfg), std::invalid_argument);
}

TEST_CASE("null_battery: deterministic and label-complete") {
  PlantSpec spec;
  spec.groups = 3;
  spec.investors_per_group = 12;
  spec.subsidiaries = 220;
  spec.p_in = 0.85;
  spec.seed = 21;
  const auto data = generate(spec);
  const auto bg = build_bipartite(data.records);
  auto net = project(bg, {});
  attach_memberships(net, data.memberships);

  NullBatteryConfig cfg;
  cfg.replicas = 3;
  cfg.seed = 5;
  cfg.runs = 12;
  cfg.mc_samples = 499;
  cfg.threads = 2;

  const auto a = null_battery(net, data.memberships, cfg);
  const auto b = null_battery(net, data.memberships, cfg);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].p_value == b[i].p_value);
    CHECK(a[i].chi_square == b[i].chi_square);
  }
}
