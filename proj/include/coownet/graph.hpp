#ifndef COOWNET_GRAPH_HPP
#define COOWNET_GRAPH_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coownet/records.hpp"

namespace coownet {

// Capital an investor put into one subsidiary: share x paid-up capital.
// Missing when the subsidiary did not report capital.
struct OwnershipEdge {
  int investor = 0;    // index into BipartiteGraph::investors
  int subsidiary = 0;  // index into BipartiteGraph::subsidiaries
  std::optional<double> capital;
};

struct BipartiteGraph {
  std::vector<std::string> investors;
  std::vector<std::string> subsidiaries;
  std::vector<OwnershipEdge> edges;
  std::vector<std::vector<int>> investor_edges;    // per investor, edge idx
  std::vector<std::vector<int>> subsidiary_edges;  // per subsidiary, edge idx
};

// Investors owning nothing never appear; one edge per (owner, subsidiary).
BipartiteGraph build_bipartite(const std::vector<SubsidiaryRecord>& records);

enum class Weighting { Unweighted, CosineSimilarity };

std::string_view to_string(Weighting w);

struct ProjectionConfig {
  int min_shared = 1;  // co-owned subsidiaries required for a link
  Weighting weighting = Weighting::Unweighted;
};

struct NetworkEdge {
  int a = 0;  // a < b, indices into node_ids
  int b = 0;
  int shared_count = 0;
  double weight = 1.0;  // 1 when unweighted, cosine similarity otherwise
};

// One-mode projection of the ownership graph: undirected, simple, no
// isolated nodes. Nodes carry the keiretsu groups attached to them (empty
// for unaffiliated investors, more than one entry for dual affiliations).
struct InvestorNetwork {
  std::vector<std::string> node_ids;
  std::vector<std::vector<Keiretsu>> labels;
  std::vector<NetworkEdge> edges;

  int node_count() const { return static_cast<int>(node_ids.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  std::vector<int> degrees() const;
  // Symmetric adjacency (neighbor, edge weight) lists.
  std::vector<std::vector<std::pair<int, double>>> adjacency() const;
};

// Links every pair of investors co-owning at least cfg.min_shared
// subsidiaries. In cosine mode, subsidiaries without positive reported
// capital are left out of both the shared counts and the weights.
InvestorNetwork project(const BipartiteGraph& bg, const ProjectionConfig& cfg);

void attach_memberships(InvestorNetwork& net,
                        const std::vector<KeiretsuMembership>& memberships);

// Sorted multiset of node degrees.
std::vector<int> degree_sequence(const InvestorNetwork& net);

using CapitalAllocation = std::map<std::string, double>;

// Capital vector of one investor over its subsidiaries (capital-bearing
// ownerships only).
CapitalAllocation capital_allocation(const BipartiteGraph& bg,
                                     std::string_view investor_id);

// Angle-based similarity over the union of both supports; 1 for
// proportional portfolios, 0 for disjoint ones. Throws DegenerateError on
// an all-zero vector.
double cosine_similarity(const CapitalAllocation& a,
                         const CapitalAllocation& b);

void write_graphml(std::ostream& out, const InvestorNetwork& net);
void write_dot(std::ostream& out, const InvestorNetwork& net);
void write_bipartite_dot(std::ostream& out, const BipartiteGraph& bg);

}  // namespace coownet

#endif
