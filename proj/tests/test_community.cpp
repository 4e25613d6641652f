#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "coownet/community.hpp"
#include "coownet/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coownet;
using oracles::make_network;

namespace {

const InvestorNetwork kTwoTriangles = make_network(
    6, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0},
        {3, 4, 1.0}, {4, 5, 1.0}, {3, 5, 1.0}});

Partition with_assignment(std::vector<int> assignment) {
  Partition p;
  p.assignment = std::move(assignment);
  return p;
}

// Communities as sets of node indices, independent of label order.
std::set<std::set<int>> community_sets(const Partition& p) {
  std::map<int, std::set<int>> by_label;
  for (std::size_t i = 0; i < p.assignment.size(); ++i)
    by_label[p.assignment[i]].insert(static_cast<int>(i));
  std::set<std::set<int>> out;
  for (auto& [label, members] : by_label) out.insert(members);
  return out;
}

}  // namespace

TEST_CASE("modularity: one community scores zero") {
  const auto net = make_network(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  CHECK(modularity(net, with_assignment({0, 0, 0, 0})) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("modularity: two disjoint triangles split cleanly") {
  CHECK(modularity(kTwoTriangles, with_assignment({0, 0, 0, 1, 1, 1})) ==
        doctest::Approx(0.5));
}

TEST_CASE("modularity: single edge, singleton communities") {
  const auto net = make_network(2, {{0, 1, 1.0}});
  CHECK(modularity(net, with_assignment({0, 1})) == doctest::Approx(-0.5));
}

TEST_CASE("modularity: incomplete assignment is an error") {
  const auto net = make_network(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK_THROWS_AS((void)modularity(net, with_assignment({0, 1})),
                  std::invalid_argument);
}

TEST_CASE("modularity: weighted edges change the score") {
  const auto balanced = make_network(2, {{0, 1, 1.0}});
  const auto light = make_network(2, {{0, 1, 0.25}});
  // Both split partitions score -0.5: the statistic is scale-free.
  CHECK(modularity(light, with_assignment({0, 1})) == doctest::Approx(-0.5));
  // But a mixed-weight graph is genuinely weighted.
  const auto mixed =
      make_network(3, {{0, 1, 1.0}, {1, 2, 0.1}});
  const double heavy_pair = modularity(mixed, with_assignment({0, 0, 1}));
  const double light_pair = modularity(mixed, with_assignment({0, 1, 1}));
  CHECK(heavy_pair > light_pair);
}

TEST_CASE("modularity: bounded, relabel-invariant, singletons non-positive") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = oracles::random_network(rng, 10, 0.4);
    const int n = net.node_count();

    std::vector<int> assignment(n);
    for (int& c : assignment) c = static_cast<int>(rng.below(3));
    const double q = modularity(net, with_assignment(assignment));
    CHECK(q >= -1.0);
    CHECK(q <= 1.0);

    std::vector<int> relabeled(n);
    const int labels[3] = {7, 2, 11};
    for (int i = 0; i < n; ++i) relabeled[i] = labels[assignment[i]];
    CHECK(modularity(net, with_assignment(relabeled)) == doctest::Approx(q));

    std::vector<int> singletons(n);
    std::iota(singletons.begin(), singletons.end(), 0);
    CHECK(modularity(net, with_assignment(singletons)) <= 1e-12);
  }
}

TEST_CASE("louvain: recovers the two disjoint triangles exactly") {
  const auto p = louvain(kTwoTriangles, 1);
  CHECK(p.modularity == doctest::Approx(0.5));
  CHECK(community_sets(p) ==
        std::set<std::set<int>>{{0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("louvain: complete graph collapses to one community") {
  const auto k4 = make_network(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0},
                                   {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}});
  const auto p = louvain(k4, 3);
  CHECK(p.community_count() == 1);
  CHECK(p.modularity == doctest::Approx(0.0));
}

TEST_CASE("louvain: single edge joins both endpoints") {
  const auto net = make_network(2, {{0, 1, 1.0}});
  const auto p = louvain(net, 5);
  CHECK(p.assignment == std::vector<int>{0, 0});
  CHECK(p.modularity == doctest::Approx(0.0));
}

TEST_CASE("louvain: empty network is an error") {
  CHECK_THROWS_AS((void)louvain(InvestorNetwork{}, 0), DegenerateError);
}

TEST_CASE("louvain: deterministic for a fixed seed") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto net = oracles::random_network(rng, 20, 0.2);
    const auto p1 = louvain(net, 1234 + trial);
    const auto p2 = louvain(net, 1234 + trial);
    CHECK(p1.assignment == p2.assignment);
    CHECK(p1.modularity == p2.modularity);
  }
}

TEST_CASE("louvain: never beaten badly by the exhaustive optimum") {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = oracles::random_network(rng, 8, 0.45);
    const double best = oracles::best_modularity(net);
    const auto p = louvain(net, 1000 + trial);
    CHECK(p.modularity >= best - 0.05);
    CHECK(p.modularity <= best + 1e-9);
  }
}

TEST_CASE("louvain: modularity grows monotonically across phases") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = oracles::random_network(rng, 25, 0.15);
    std::vector<double> trace;
    (void)louvain(net, trial, {}, &trace);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] >= trace[i - 1] - 1e-9);
  }
}

TEST_CASE("louvain: beats or matches the singleton partition") {
  Rng rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const auto net = oracles::random_network(rng, 14, 0.25);
    std::vector<int> singletons(net.node_count());
    std::iota(singletons.begin(), singletons.end(), 0);
    const double base = modularity(net, with_assignment(singletons));
    CHECK(louvain(net, trial).modularity >= base - 1e-12);
  }
}

TEST_CASE("run_ensemble: single run, determinism, stable optimum") {
  const auto one = run_ensemble(kTwoTriangles, 1, 42);
  REQUIRE(one.run_count() == 1);
  CHECK(one.runs[0].assignment == louvain(kTwoTriangles,
                                          derive_seed(42, "louvain-run", 0))
                                      .assignment);

  const auto a = run_ensemble(kTwoTriangles, 20, 7);
  const auto b = run_ensemble(kTwoTriangles, 20, 7);
  REQUIRE(a.run_count() == b.run_count());
  for (int i = 0; i < a.run_count(); ++i)
    CHECK(a.runs[i].assignment == b.runs[i].assignment);

  for (const auto& run : a.runs)
    CHECK(community_sets(run) ==
          std::set<std::set<int>>{{0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("run_ensemble: thread count does not change results") {
  Rng rng(41);
  const auto net = oracles::random_network(rng, 30, 0.15);
  const auto serial = run_ensemble(net, 16, 99, 1);
  const auto parallel = run_ensemble(net, 16, 99, 4);
  for (int i = 0; i < 16; ++i)
    CHECK(serial.runs[i].assignment == parallel.runs[i].assignment);
}

TEST_CASE("run_ensemble: rejects run_count < 1") {
  CHECK_THROWS_AS((void)run_ensemble(kTwoTriangles, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("nmi: identity and relabeling score 1") {
  const auto p = with_assignment({0, 0, 1, 1, 2});
  CHECK(nmi(p, p) == doctest::Approx(1.0));
  const auto relabeled = with_assignment({5, 5, 3, 3, 9});
  CHECK(nmi(p, relabeled) == doctest::Approx(1.0));
}

TEST_CASE("nmi: blocks vs all-in-one scores 0") {
  const auto blocks = with_assignment({0, 0, 1, 1});
  const auto lumped = with_assignment({0, 0, 0, 0});
  CHECK(nmi(blocks, lumped) == doctest::Approx(0.0));
  CHECK(nmi(lumped, blocks) == doctest::Approx(0.0));
}

TEST_CASE("nmi: node-set mismatch is an error") {
  CHECK_THROWS_AS((void)nmi(with_assignment({0, 1}), with_assignment({0})),
                  std::invalid_argument);
}

TEST_CASE("nmi: symmetric and bounded on random partitions") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(20));
    std::vector<int> pa(n), qa(n);
    for (int i = 0; i < n; ++i) {
      pa[i] = static_cast<int>(rng.below(4));
      qa[i] = static_cast<int>(rng.below(4));
    }
    const double v = nmi(with_assignment(pa), with_assignment(qa));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(nmi(with_assignment(qa), with_assignment(pa)) ==
          doctest::Approx(v));
  }
}

TEST_CASE("align_to_reference: permuted labels come back") {
  const std::vector<int> reference = {0, 0, 1, 1, 2};
  const std::vector<int> permuted = {2, 2, 0, 0, 1};
  CHECK(align_to_reference(reference, permuted) == reference);
}

TEST_CASE("align_to_reference: extra community gets a fresh id") {
  const std::vector<int> reference = {0, 0, 1, 1};
  const std::vector<int> split = {0, 0, 1, 2};  // community 2 is new
  const auto aligned = align_to_reference(reference, split);
  CHECK(aligned[0] == 0);
  CHECK(aligned[1] == 0);
  CHECK(aligned[2] == 1);
  CHECK(aligned[3] == 2);  // fresh label beyond the reference's two
}

TEST_CASE("consensus assignment takes the per-node majority") {
  const std::vector<std::vector<int>> aligned = {
      {0, 1, 1}, {0, 1, 0}, {0, 1, 1}};
  CHECK(consensus_assignment(aligned) == std::vector<int>{0, 1, 1});
}

TEST_CASE("partition and ensemble csv exports") {
  const auto ensemble = run_ensemble(kTwoTriangles, 3, 5);
  std::ostringstream partition_csv;
  write_partition_csv(partition_csv, ensemble.node_ids, ensemble.runs[0]);
  CHECK(partition_csv.str().find("investor_id,community_id") == 0);
  CHECK(partition_csv.str().find("N0,") != std::string::npos);

  std::ostringstream ensemble_csv;
  write_ensemble_csv(ensemble_csv, ensemble);
  CHECK(ensemble_csv.str().find("investor_id,run_0,run_1,run_2,consensus") ==
        0);
}
