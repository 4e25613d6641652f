#ifndef COOWNET_NULLMODEL_HPP
#define COOWNET_NULLMODEL_HPP

#include <cstdint>
#include <vector>

#include "coownet/graph.hpp"
#include "coownet/stats.hpp"

namespace coownet {

struct RewireConfig {
  int swaps_per_edge = 20;
  std::uint64_t seed = 0;
  bool allow_multiedges = false;
};

struct RewireResult {
  InvestorNetwork network;
  std::size_t swaps_applied = 0;
  // Set when the attempts budget passed without a single valid swap; the
  // network is then returned unchanged.
  bool degenerate = false;
};

// Degree-preserving randomization by repeated double-edge swaps: edges
// (a,b),(c,d) become (a,d),(c,b), rejecting self-loops and (unless
// allowed) duplicate edges. Attempts = swaps_per_edge x edge count. Node
// set, labels and per-slot edge attributes stay in place, so the weight
// multiset is preserved while its placement is randomized.
RewireResult configuration_rewire(const InvestorNetwork& net,
                                  const RewireConfig& cfg);

struct NullBatteryConfig {
  int replicas = 20;
  std::uint64_t seed = 0;
  int swaps_per_edge = 20;
  bool allow_multiedges = false;
  int runs = 200;        // louvain runs per replica
  int mc_samples = 9999;
  bool include_unaffiliated = false;
  int threads = 0;
};

// Per replica: rewire, detect communities, build the contingency table,
// run the Monte-Carlo chi-square test. With the structure destroyed the
// community/keiretsu association should vanish.
std::vector<TestResult> null_battery(
    const InvestorNetwork& net,
    const std::vector<KeiretsuMembership>& memberships,
    const NullBatteryConfig& cfg);

}  // namespace coownet

#endif
