#ifndef COOWNET_COMMUNITY_HPP
#define COOWNET_COMMUNITY_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "coownet/graph.hpp"

namespace coownet {

struct Partition {
  std::vector<int> assignment;  // node index -> community id, dense from 0
  double modularity = 0.0;

  int community_count() const;
  bool operator==(const Partition&) const = default;
};

// Weighted Newman modularity Q of a full assignment. Unweighted networks
// carry weight 1 on every edge, so one code path serves both analyses.
double modularity(const InvestorNetwork& net, const Partition& p);

struct LouvainOptions {
  double resolution = 1.0;
  // A pass ends when no single-node move gains more than this much Q.
  double min_gain = 1e-12;
};

// Greedy two-level modularity maximization: local moves over a shuffled
// node order, then aggregation, repeated until no merge happens. The same
// (network, seed) always yields the same partition. `phase_modularity`,
// when given, records Q after each local-move phase.
Partition louvain(const InvestorNetwork& net, std::uint64_t seed,
                  const LouvainOptions& opts = {},
                  std::vector<double>* phase_modularity = nullptr);

// Repeated independent louvain runs; run i is seeded from
// derive_seed(seed, "louvain-run", i).
struct RunEnsemble {
  std::vector<std::string> node_ids;
  std::vector<Partition> runs;
  std::uint64_t seed = 0;

  int run_count() const { return static_cast<int>(runs.size()); }
};

RunEnsemble run_ensemble(const InvestorNetwork& net, int run_count,
                         std::uint64_t seed, int threads = 0);

// Normalized mutual information in [0,1]; 1 iff the partitions agree up
// to relabeling.
double nmi(const Partition& p, const Partition& q);

// Relabels `assignment` so its communities take the id of the reference
// community they overlap most (greedy, largest overlap first); leftovers
// get fresh ids after the reference's. Needed before averaging tables
// across stochastic runs.
std::vector<int> align_to_reference(const std::vector<int>& reference,
                                    const std::vector<int>& assignment);

// Every run aligned to run 0.
std::vector<std::vector<int>> align_ensemble(const RunEnsemble& ensemble);

// Per-node majority label over aligned runs (ties -> smaller id).
std::vector<int> consensus_assignment(
    const std::vector<std::vector<int>>& aligned);

void write_partition_csv(std::ostream& out,
                         std::span<const std::string> node_ids,
                         const Partition& p);

// One column per run (aligned labels) plus a consensus column.
void write_ensemble_csv(std::ostream& out, const RunEnsemble& ensemble);

}  // namespace coownet

#endif
