#include "coownet/nullmodel.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "coownet/parallel.hpp"
#include "coownet/rng.hpp"

namespace coownet {

namespace {

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

RewireResult configuration_rewire(const InvestorNetwork& net,
                                  const RewireConfig& cfg) {
  if (cfg.swaps_per_edge < 1)
    throw std::invalid_argument(
        "configuration_rewire: swaps_per_edge must be >= 1");
  if (net.edge_count() < 2)
    throw std::invalid_argument(
        "configuration_rewire: need at least 2 edges");

  RewireResult out;
  out.network = net;
  auto& edges = out.network.edges;
  const std::size_t edge_count = edges.size();

  std::unordered_set<std::uint64_t> present;
  present.reserve(edge_count * 2);
  for (const auto& e : edges) present.insert(edge_key(e.a, e.b));

  Rng rng(cfg.seed);
  const std::size_t attempts =
      edge_count * static_cast<std::size_t>(cfg.swaps_per_edge);
  for (std::size_t t = 0; t < attempts; ++t) {
    const std::size_t i = rng.below(edge_count);
    const std::size_t j = rng.below(edge_count);
    if (i == j) continue;
    int a = edges[i].a, b = edges[i].b;
    int c = edges[j].a, d = edges[j].b;
    if (rng.below(2)) std::swap(c, d);
    // Proposal: (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b) continue;   // self-loop
    if (a == c || b == d) continue;   // edge set would be unchanged
    const std::uint64_t new1 = edge_key(a, d);
    const std::uint64_t new2 = edge_key(c, b);
    if (new1 == new2) continue;
    if (!cfg.allow_multiedges) {
      const std::uint64_t old1 = edge_key(a, b);
      const std::uint64_t old2 = edge_key(c, d);
      present.erase(old1);
      present.erase(old2);
      if (present.contains(new1) || present.contains(new2)) {
        present.insert(old1);
        present.insert(old2);
        continue;
      }
      present.insert(new1);
      present.insert(new2);
    }
    edges[i].a = std::min(a, d);
    edges[i].b = std::max(a, d);
    edges[j].a = std::min(c, b);
    edges[j].b = std::max(c, b);
    ++out.swaps_applied;
  }
  out.degenerate = out.swaps_applied == 0;
  return out;
}

std::vector<TestResult> null_battery(
    const InvestorNetwork& net,
    const std::vector<KeiretsuMembership>& memberships,
    const NullBatteryConfig& cfg) {
  if (cfg.replicas < 1)
    throw std::invalid_argument("null_battery: replicas must be >= 1");

  std::vector<TestResult> results(cfg.replicas);
  parallel_for(static_cast<std::size_t>(cfg.replicas), cfg.threads,
               [&](std::size_t r) {
                 RewireConfig rewire{cfg.swaps_per_edge,
                                     derive_seed(cfg.seed, "null-rewire", r),
                                     cfg.allow_multiedges};
                 const auto rewired = configuration_rewire(net, rewire);
                 const auto ensemble = run_ensemble(
                     rewired.network, cfg.runs,
                     derive_seed(cfg.seed, "null-ensemble", r), 1);
                 const auto table = contingency(ensemble, memberships,
                                                cfg.include_unaffiliated);
                 results[r] = mc_pvalue(table, cfg.mc_samples,
                                        derive_seed(cfg.seed, "null-mc", r), 1);
               });
  return results;
}

}  // namespace coownet
