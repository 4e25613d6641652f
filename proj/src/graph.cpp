#include "coownet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <unordered_map>

#include "coownet/csv.hpp"

namespace coownet {

std::string_view to_string(Weighting w) {
  return w == Weighting::Unweighted ? "unweighted" : "weighted";
}

BipartiteGraph build_bipartite(const std::vector<SubsidiaryRecord>& records) {
  BipartiteGraph bg;
  std::unordered_map<std::string, int> investor_index;
  for (const auto& rec : records) {
    const int s = static_cast<int>(bg.subsidiaries.size());
    bg.subsidiaries.push_back(rec.subsidiary_id);
    bg.subsidiary_edges.emplace_back();
    for (const auto& owner : rec.owners) {
      auto [it, inserted] =
          investor_index.emplace(owner.investor_id,
                                 static_cast<int>(bg.investors.size()));
      if (inserted) {
        bg.investors.push_back(owner.investor_id);
        bg.investor_edges.emplace_back();
      }
      const int i = it->second;
      OwnershipEdge edge;
      edge.investor = i;
      edge.subsidiary = s;
      if (rec.paidup_capital)
        edge.capital = owner.share * *rec.paidup_capital;
      const int e = static_cast<int>(bg.edges.size());
      bg.edges.push_back(edge);
      bg.investor_edges[i].push_back(e);
      bg.subsidiary_edges[s].push_back(e);
    }
  }
  return bg;
}

std::vector<int> InvestorNetwork::degrees() const {
  std::vector<int> deg(node_ids.size(), 0);
  for (const auto& e : edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

std::vector<std::vector<std::pair<int, double>>> InvestorNetwork::adjacency()
    const {
  std::vector<std::vector<std::pair<int, double>>> adj(node_ids.size());
  for (const auto& e : edges) {
    adj[e.a].emplace_back(e.b, e.weight);
    adj[e.b].emplace_back(e.a, e.weight);
  }
  return adj;
}

namespace {

using SparseVec = std::vector<std::pair<int, double>>;  // sorted by key

double sparse_cosine(const SparseVec& a, const SparseVec& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) na += v * v;
  for (const auto& [k, v] : b) nb += v * v;
  if (na <= 0.0 || nb <= 0.0)
    throw DegenerateError("degenerate allocation: zero-norm capital vector");
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  const double cs = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(cs, 0.0, 1.0);
}

}  // namespace

InvestorNetwork project(const BipartiteGraph& bg, const ProjectionConfig& cfg) {
  if (cfg.min_shared < 1)
    throw std::invalid_argument("project: min_shared must be >= 1");
  const bool weighted = cfg.weighting == Weighting::CosineSimilarity;

  // In weighted mode only capital-bearing ownerships count; a subsidiary
  // with missing or zero capital drops out of the analysis entirely.
  auto usable = [&](const OwnershipEdge& e) {
    return !weighted || (e.capital && *e.capital > 0.0);
  };

  std::unordered_map<std::uint64_t, int> pair_counts;
  std::vector<int> owners;
  for (std::size_t s = 0; s < bg.subsidiaries.size(); ++s) {
    owners.clear();
    for (int e : bg.subsidiary_edges[s]) {
      if (usable(bg.edges[e])) owners.push_back(bg.edges[e].investor);
    }
    std::sort(owners.begin(), owners.end());
    for (std::size_t i = 0; i < owners.size(); ++i) {
      for (std::size_t j = i + 1; j < owners.size(); ++j) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(owners[i]) << 32) |
            static_cast<std::uint32_t>(owners[j]);
        ++pair_counts[key];
      }
    }
  }

  struct RawEdge {
    int a, b, shared;
  };
  std::vector<RawEdge> raw;
  for (const auto& [key, count] : pair_counts) {
    if (count >= cfg.min_shared) {
      raw.push_back({static_cast<int>(key >> 32),
                     static_cast<int>(key & 0xffffffffu), count});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawEdge& x, const RawEdge& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });

  // Keep only touched investors, in bipartite order.
  std::vector<int> node_of(bg.investors.size(), -1);
  InvestorNetwork net;
  for (const auto& e : raw) {
    for (int v : {e.a, e.b}) {
      if (node_of[v] < 0) node_of[v] = 1;  // mark
    }
  }
  for (std::size_t i = 0; i < bg.investors.size(); ++i) {
    if (node_of[i] > 0) {
      node_of[i] = net.node_count();
      net.node_ids.push_back(bg.investors[i]);
    }
  }
  net.labels.assign(net.node_ids.size(), {});

  std::vector<SparseVec> alloc;
  if (weighted) {
    alloc.resize(bg.investors.size());
    for (std::size_t i = 0; i < bg.investors.size(); ++i) {
      if (node_of[i] < 0) continue;
      for (int e : bg.investor_edges[i]) {
        if (usable(bg.edges[e]))
          alloc[i].emplace_back(bg.edges[e].subsidiary, *bg.edges[e].capital);
      }
      std::sort(alloc[i].begin(), alloc[i].end());
    }
  }

  for (const auto& e : raw) {
    NetworkEdge edge;
    edge.a = node_of[e.a];
    edge.b = node_of[e.b];
    edge.shared_count = e.shared;
    edge.weight = weighted ? sparse_cosine(alloc[e.a], alloc[e.b]) : 1.0;
    net.edges.push_back(edge);
  }
  return net;
}

void attach_memberships(InvestorNetwork& net,
                        const std::vector<KeiretsuMembership>& memberships) {
  std::unordered_map<std::string_view, std::vector<Keiretsu>> by_investor;
  for (const auto& m : memberships) by_investor[m.investor_id].push_back(m.group);
  for (std::size_t i = 0; i < net.node_ids.size(); ++i) {
    auto it = by_investor.find(net.node_ids[i]);
    if (it == by_investor.end()) {
      net.labels[i].clear();
      continue;
    }
    auto groups = it->second;
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    net.labels[i] = std::move(groups);
  }
}

std::vector<int> degree_sequence(const InvestorNetwork& net) {
  auto deg = net.degrees();
  std::sort(deg.begin(), deg.end());
  return deg;
}

CapitalAllocation capital_allocation(const BipartiteGraph& bg,
                                     std::string_view investor_id) {
  CapitalAllocation out;
  for (std::size_t i = 0; i < bg.investors.size(); ++i) {
    if (bg.investors[i] != investor_id) continue;
    for (int e : bg.investor_edges[i]) {
      if (bg.edges[e].capital)
        out[bg.subsidiaries[bg.edges[e].subsidiary]] = *bg.edges[e].capital;
    }
    break;
  }
  return out;
}

double cosine_similarity(const CapitalAllocation& a,
                         const CapitalAllocation& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) na += v * v;
  for (const auto& [k, v] : b) nb += v * v;
  if (na <= 0.0 || nb <= 0.0)
    throw DegenerateError("degenerate allocation: zero-norm capital vector");
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string label_string(const std::vector<Keiretsu>& groups) {
  std::string out;
  for (Keiretsu g : groups) {
    if (!out.empty()) out.push_back('|');
    out += to_string(g);
  }
  return out;
}

}  // namespace

void write_graphml(std::ostream& out, const InvestorNetwork& net) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"d0\" for=\"node\" attr.name=\"investor_id\" "
         "attr.type=\"string\"/>\n"
      << "  <key id=\"d1\" for=\"node\" attr.name=\"keiretsu\" "
         "attr.type=\"string\"/>\n"
      << "  <key id=\"d2\" for=\"edge\" attr.name=\"shared_count\" "
         "attr.type=\"int\"/>\n"
      << "  <key id=\"d3\" for=\"edge\" attr.name=\"weight\" "
         "attr.type=\"double\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (int i = 0; i < net.node_count(); ++i) {
    out << "    <node id=\"n" << i << "\"><data key=\"d0\">"
        << xml_escape(net.node_ids[i]) << "</data><data key=\"d1\">"
        << xml_escape(label_string(net.labels[i])) << "</data></node>\n";
  }
  for (const auto& e : net.edges) {
    out << "    <edge source=\"n" << e.a << "\" target=\"n" << e.b
        << "\"><data key=\"d2\">" << e.shared_count
        << "</data><data key=\"d3\">" << csv::format_double(e.weight)
        << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const InvestorNetwork& net) {
  out << "graph investors {\n";
  for (int i = 0; i < net.node_count(); ++i) {
    out << "  n" << i << " [label=\"" << dot_escape(net.node_ids[i])
        << "\" keiretsu=\"" << dot_escape(label_string(net.labels[i]))
        << "\"];\n";
  }
  for (const auto& e : net.edges) {
    out << "  n" << e.a << " -- n" << e.b << " [shared_count="
        << e.shared_count << " weight=" << csv::format_double(e.weight)
        << "];\n";
  }
  out << "}\n";
}

void write_bipartite_dot(std::ostream& out, const BipartiteGraph& bg) {
  out << "graph ownership {\n";
  for (std::size_t i = 0; i < bg.investors.size(); ++i) {
    out << "  i" << i << " [label=\"" << dot_escape(bg.investors[i])
        << "\" class=\"investor\"];\n";
  }
  for (std::size_t s = 0; s < bg.subsidiaries.size(); ++s) {
    out << "  s" << s << " [label=\"" << dot_escape(bg.subsidiaries[s])
        << "\" class=\"subsidiary\"];\n";
  }
  for (const auto& e : bg.edges) {
    out << "  i" << e.investor << " -- s" << e.subsidiary;
    if (e.capital) out << " [capital=" << csv::format_double(*e.capital) << "]";
    out << ";\n";
  }
  out << "}\n";
}

}  // namespace coownet
