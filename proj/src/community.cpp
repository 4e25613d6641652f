#include "coownet/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "coownet/csv.hpp"
#include "coownet/parallel.hpp"
#include "coownet/rng.hpp"

namespace coownet {

int Partition::community_count() const {
  int max_id = -1;
  for (int c : assignment) max_id = std::max(max_id, c);
  return max_id + 1;
}

double modularity(const InvestorNetwork& net, const Partition& p) {
  const std::size_t n = net.node_ids.size();
  if (p.assignment.size() != n)
    throw std::invalid_argument("modularity: partition does not assign every node");
  for (int c : p.assignment) {
    if (c < 0)
      throw std::invalid_argument("modularity: negative community id");
  }
  double m = 0.0;
  for (const auto& e : net.edges) m += e.weight;
  if (m <= 0.0)
    throw DegenerateError("modularity undefined for an edgeless network");

  double intra = 0.0;
  std::unordered_map<int, double> comm_strength;
  for (const auto& e : net.edges) {
    if (p.assignment[e.a] == p.assignment[e.b]) intra += e.weight;
    comm_strength[p.assignment[e.a]] += e.weight;
    comm_strength[p.assignment[e.b]] += e.weight;
  }
  double expected = 0.0;
  for (const auto& [c, k] : comm_strength) {
    const double frac = k / (2.0 * m);
    expected += frac * frac;
  }
  return intra / m - expected;
}

namespace {

// Internal graph for the aggregation levels: explicit self-loop weights,
// strengths counting self-loops twice.
struct WorkGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> strength;
  double two_m = 0.0;

  void finalize() {
    strength.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double k = 2.0 * self_loop[i];
      for (const auto& [j, w] : adj[i]) k += w;
      strength[i] = k;
    }
    two_m = std::accumulate(strength.begin(), strength.end(), 0.0);
  }
};

WorkGraph from_network(const InvestorNetwork& net) {
  WorkGraph g;
  g.n = net.node_count();
  g.adj.assign(g.n, {});
  g.self_loop.assign(g.n, 0.0);
  for (const auto& e : net.edges) {
    g.adj[e.a].emplace_back(e.b, e.weight);
    g.adj[e.b].emplace_back(e.a, e.weight);
  }
  g.finalize();
  return g;
}

double work_modularity(const WorkGraph& g, const std::vector<int>& community,
                       double resolution) {
  std::unordered_map<int, double> in, tot;
  for (int i = 0; i < g.n; ++i) {
    const int c = community[i];
    in[c] += 2.0 * g.self_loop[i];
    tot[c] += g.strength[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (community[j] == c) in[c] += w;
    }
  }
  double q = 0.0;
  for (const auto& [c, w_in] : in) {
    const double frac = tot[c] / g.two_m;
    q += w_in / g.two_m - resolution * frac * frac;
  }
  return q;
}

// One sweep over all nodes in shuffled order. Returns the number of moves.
int local_move_pass(const WorkGraph& g, std::vector<int>& community,
                    std::vector<double>& comm_strength, Rng& rng,
                    double resolution, double min_gain) {
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  // Scratch accumulator for weights to neighbor communities.
  std::vector<double> link(g.n, 0.0);
  std::vector<int> touched;

  int moves = 0;
  const double m = g.two_m / 2.0;
  for (int node : order) {
    const int old_comm = community[node];
    const double k = g.strength[node];

    touched.clear();
    // Candidate order fixes tie-breaking: current community first, then
    // neighbor communities as first encountered.
    touched.push_back(old_comm);
    for (const auto& [j, w] : g.adj[node]) {
      const int c = community[j];
      if (link[c] == 0.0 && c != old_comm) touched.push_back(c);
      link[c] += w;
    }

    comm_strength[old_comm] -= k;
    double best_gain = link[old_comm] -
                       resolution * comm_strength[old_comm] * k / g.two_m;
    const double stay_gain = best_gain;
    int best_comm = old_comm;
    for (std::size_t t = 1; t < touched.size(); ++t) {
      const int c = touched[t];
      const double gain =
          link[c] - resolution * comm_strength[c] * k / g.two_m;
      if (gain > best_gain) {
        best_gain = gain;
        best_comm = c;
      }
    }
    // Move only for a real modularity gain: delta Q = (gain - stay)/m.
    if (best_comm != old_comm && (best_gain - stay_gain) / m > min_gain) {
      community[node] = best_comm;
      comm_strength[best_comm] += k;
      ++moves;
    } else {
      comm_strength[old_comm] += k;
    }
    for (int c : touched) link[c] = 0.0;
  }
  return moves;
}

// Dense renumbering by first appearance in node order.
int renumber(std::vector<int>& community) {
  std::unordered_map<int, int> remap;
  for (int& c : community) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
  return static_cast<int>(remap.size());
}

WorkGraph aggregate(const WorkGraph& g, const std::vector<int>& community,
                    int community_count) {
  WorkGraph out;
  out.n = community_count;
  out.adj.assign(out.n, {});
  out.self_loop.assign(out.n, 0.0);
  std::map<std::pair<int, int>, double> between;
  for (int i = 0; i < g.n; ++i) {
    const int ci = community[i];
    out.self_loop[ci] += g.self_loop[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (j < i) continue;  // each undirected edge once
      const int cj = community[j];
      if (ci == cj) {
        out.self_loop[ci] += w;
      } else {
        between[std::minmax(ci, cj)] += w;
      }
    }
  }
  for (const auto& [pair, w] : between) {
    out.adj[pair.first].emplace_back(pair.second, w);
    out.adj[pair.second].emplace_back(pair.first, w);
  }
  out.finalize();
  return out;
}

}  // namespace

Partition louvain(const InvestorNetwork& net, std::uint64_t seed,
                  const LouvainOptions& opts,
                  std::vector<double>* phase_modularity) {
  if (net.edge_count() == 0)
    throw DegenerateError("nothing to cluster: network has no edges");

  WorkGraph g = from_network(net);
  Rng rng(seed);

  // node -> community of the current level, composed over all levels
  std::vector<int> flat(net.node_count());
  std::iota(flat.begin(), flat.end(), 0);

  if (phase_modularity) {
    std::vector<int> singletons(g.n);
    std::iota(singletons.begin(), singletons.end(), 0);
    phase_modularity->push_back(
        work_modularity(g, singletons, opts.resolution));
  }

  for (;;) {
    std::vector<int> community(g.n);
    std::iota(community.begin(), community.end(), 0);
    std::vector<double> comm_strength = g.strength;

    bool moved_any = false;
    while (local_move_pass(g, community, comm_strength, rng, opts.resolution,
                           opts.min_gain) > 0) {
      moved_any = true;
    }
    const int communities = renumber(community);

    for (int& c : flat) c = community[c];
    if (phase_modularity) {
      phase_modularity->push_back(
          work_modularity(g, community, opts.resolution));
    }
    if (!moved_any || communities == g.n) break;
    g = aggregate(g, community, communities);
  }

  Partition p;
  p.assignment = std::move(flat);
  renumber(p.assignment);
  p.modularity = modularity(net, p);
  return p;
}

RunEnsemble run_ensemble(const InvestorNetwork& net, int run_count,
                         std::uint64_t seed, int threads) {
  if (run_count < 1)
    throw std::invalid_argument("run_ensemble: run_count must be >= 1");
  RunEnsemble ensemble;
  ensemble.node_ids = net.node_ids;
  ensemble.seed = seed;
  ensemble.runs.resize(run_count);
  parallel_for(static_cast<std::size_t>(run_count), threads,
               [&](std::size_t i) {
                 ensemble.runs[i] =
                     louvain(net, derive_seed(seed, "louvain-run", i));
               });
  return ensemble;
}

double nmi(const Partition& p, const Partition& q) {
  if (p.assignment.size() != q.assignment.size())
    throw std::invalid_argument("nmi: node-set mismatch");
  const std::size_t n = p.assignment.size();
  if (n == 0) return 1.0;

  std::map<std::pair<int, int>, double> joint;
  std::unordered_map<int, double> pa, qa;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{p.assignment[i], q.assignment[i]}] += 1.0;
    pa[p.assignment[i]] += 1.0;
    qa[q.assignment[i]] += 1.0;
  }
  const double dn = static_cast<double>(n);
  auto entropy = [dn](const std::unordered_map<int, double>& counts) {
    double h = 0.0;
    for (const auto& [c, cnt] : counts) {
      const double f = cnt / dn;
      h -= f * std::log(f);
    }
    return h;
  };
  const double hp = entropy(pa);
  const double hq = entropy(qa);
  if (hp == 0.0 && hq == 0.0) return 1.0;
  if (hp == 0.0 || hq == 0.0) return 0.0;

  double mi = 0.0;
  for (const auto& [cell, cnt] : joint) {
    const double f = cnt / dn;
    mi += f * std::log(f * dn * dn / (pa[cell.first] * qa[cell.second]));
  }
  return std::clamp(2.0 * mi / (hp + hq), 0.0, 1.0);
}

std::vector<int> align_to_reference(const std::vector<int>& reference,
                                    const std::vector<int>& assignment) {
  if (reference.size() != assignment.size())
    throw std::invalid_argument("align_to_reference: node-set mismatch");

  int ref_count = 0;
  for (int c : reference) ref_count = std::max(ref_count, c + 1);
  int own_count = 0;
  for (int c : assignment) own_count = std::max(own_count, c + 1);

  std::map<std::pair<int, int>, int> overlap;  // (own, ref) -> count
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    ++overlap[{assignment[i], reference[i]}];
  }
  struct Cell {
    int count, own, ref;
  };
  std::vector<Cell> cells;
  cells.reserve(overlap.size());
  for (const auto& [key, count] : overlap)
    cells.push_back({count, key.first, key.second});
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    if (x.count != y.count) return x.count > y.count;
    return std::pair(x.own, x.ref) < std::pair(y.own, y.ref);
  });

  std::vector<int> relabel(own_count, -1);
  std::vector<bool> ref_taken(ref_count, false);
  for (const auto& cell : cells) {
    if (relabel[cell.own] < 0 && !ref_taken[cell.ref]) {
      relabel[cell.own] = cell.ref;
      ref_taken[cell.ref] = true;
    }
  }
  int next = ref_count;
  for (int c = 0; c < own_count; ++c) {
    if (relabel[c] < 0) relabel[c] = next++;
  }

  std::vector<int> out(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i)
    out[i] = relabel[assignment[i]];
  return out;
}

std::vector<std::vector<int>> align_ensemble(const RunEnsemble& ensemble) {
  std::vector<std::vector<int>> aligned;
  aligned.reserve(ensemble.runs.size());
  for (std::size_t r = 0; r < ensemble.runs.size(); ++r) {
    if (r == 0) {
      aligned.push_back(ensemble.runs[0].assignment);
    } else {
      aligned.push_back(align_to_reference(ensemble.runs[0].assignment,
                                           ensemble.runs[r].assignment));
    }
  }
  return aligned;
}

std::vector<int> consensus_assignment(
    const std::vector<std::vector<int>>& aligned) {
  if (aligned.empty()) return {};
  const std::size_t n = aligned[0].size();
  std::vector<int> out(n, 0);
  std::map<int, int> votes;
  for (std::size_t i = 0; i < n; ++i) {
    votes.clear();
    for (const auto& run : aligned) ++votes[run[i]];
    int best = -1, best_votes = 0;
    for (const auto& [label, v] : votes) {
      if (v > best_votes) {
        best = label;
        best_votes = v;
      }
    }
    out[i] = best;
  }
  return out;
}

void write_partition_csv(std::ostream& out,
                         std::span<const std::string> node_ids,
                         const Partition& p) {
  csv::write_row(out, std::vector<std::string>{"investor_id", "community_id"});
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    csv::write_row(out, std::vector<std::string>{
                            node_ids[i], std::to_string(p.assignment[i])});
  }
}

void write_ensemble_csv(std::ostream& out, const RunEnsemble& ensemble) {
  const auto aligned = align_ensemble(ensemble);
  const auto consensus = consensus_assignment(aligned);
  std::vector<std::string> row{"investor_id"};
  for (std::size_t r = 0; r < aligned.size(); ++r)
    row.push_back("run_" + std::to_string(r));
  row.push_back("consensus");
  csv::write_row(out, row);
  for (std::size_t i = 0; i < ensemble.node_ids.size(); ++i) {
    row.clear();
    row.push_back(ensemble.node_ids[i]);
    for (const auto& run : aligned) row.push_back(std::to_string(run[i]));
    row.push_back(std::to_string(consensus[i]));
    csv::write_row(out, row);
  }
}

}  // namespace coownet
