#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>
#include <sstream>

#include "coownet/ingest.hpp"
#include "coownet/nullmodel.hpp"
#include "coownet/rng.hpp"
#include "coownet/stats.hpp"
#include "coownet/synth.hpp"
#include "coownet/version.hpp"

namespace py = pybind11;
using namespace coownet;

namespace {

template <typename T, typename Parse>
std::vector<T> parse_or_raise(const std::string& text, Parse parse) {
  std::istringstream in(text);
  auto result = parse(in);
  if (!result.ok()) {
    std::ostringstream msg;
    for (const auto& issue : result.errors)
      msg << "row " << issue.row << ": " << issue.message << "\n";
    throw std::invalid_argument(msg.str());
  }
  return std::move(result.records);
}

ContingencyTable make_table(const std::vector<std::vector<double>>& cells,
                            std::optional<std::vector<std::string>> col_names) {
  if (cells.empty() || cells[0].empty())
    throw std::invalid_argument("make_table: empty matrix");
  ContingencyTable t;
  t.cells = cells;
  t.row_ids.resize(cells.size());
  std::iota(t.row_ids.begin(), t.row_ids.end(), 0);
  if (col_names) {
    if (col_names->size() != cells[0].size())
      throw std::invalid_argument("make_table: column name count mismatch");
    t.col_names = *col_names;
  } else {
    for (std::size_t c = 0; c < cells[0].size(); ++c)
      t.col_names.push_back("col" + std::to_string(c));
  }
  for (const auto& row : t.cells) {
    if (row.size() != t.cells[0].size())
      throw std::invalid_argument("make_table: ragged matrix");
    for (double v : row) t.total += v;
  }
  return t;
}

template <typename Writer, typename... Args>
std::string to_text(Writer writer, const Args&... args) {
  std::ostringstream out;
  writer(out, args...);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Co-ownership network analysis toolkit";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<DegenerateError>(m, "DegenerateError");

  py::enum_<Keiretsu>(m, "Keiretsu")
      .value("Mitsui", Keiretsu::Mitsui)
      .value("Mitsubishi", Keiretsu::Mitsubishi)
      .value("Sumitomo", Keiretsu::Sumitomo)
      .value("Sanwa", Keiretsu::Sanwa)
      .value("Fuyo", Keiretsu::Fuyo)
      .value("Ikkan", Keiretsu::Ikkan);

  py::enum_<MembershipBasis>(m, "MembershipBasis")
      .value("PresidentsClub", MembershipBasis::PresidentsClub)
      .value("Top50Equity", MembershipBasis::Top50Equity)
      .value("Both", MembershipBasis::Both);

  py::enum_<Macroarea>(m, "Macroarea")
      .value("ASEAN", Macroarea::Asean)
      .value("ChinaTaiwan", Macroarea::ChinaTaiwan)
      .value("EU", Macroarea::Eu)
      .value("NorthAmerica", Macroarea::NorthAmerica)
      .value("Other", Macroarea::Other);

  py::enum_<Weighting>(m, "Weighting")
      .value("Unweighted", Weighting::Unweighted)
      .value("CosineSimilarity", Weighting::CosineSimilarity);

  py::enum_<Verdict>(m, "Verdict")
      .value("RejectedAt001", Verdict::RejectedAt001)
      .value("RejectedAt01", Verdict::RejectedAt01)
      .value("RejectedAt05", Verdict::RejectedAt05)
      .value("NotRejected", Verdict::NotRejected);

  py::enum_<GroupBy>(m, "GroupBy")
      .value("Macroarea", GroupBy::Macroarea)
      .value("Sector", GroupBy::Sector);

  py::class_<OwnerShare>(m, "OwnerShare")
      .def(py::init<std::string, double>(), py::arg("investor_id"),
           py::arg("share"))
      .def_readwrite("investor_id", &OwnerShare::investor_id)
      .def_readwrite("share", &OwnerShare::share);

  py::class_<SubsidiaryRecord>(m, "SubsidiaryRecord")
      .def(py::init<>())
      .def_readwrite("subsidiary_id", &SubsidiaryRecord::subsidiary_id)
      .def_readwrite("name", &SubsidiaryRecord::name)
      .def_readwrite("country", &SubsidiaryRecord::country)
      .def_readwrite("sector_code", &SubsidiaryRecord::sector_code)
      .def_readwrite("paidup_capital", &SubsidiaryRecord::paidup_capital)
      .def_readwrite("num_employees", &SubsidiaryRecord::num_employees)
      .def_readwrite("year_established", &SubsidiaryRecord::year_established)
      .def_readwrite("owners", &SubsidiaryRecord::owners)
      .def_readwrite("local_share", &SubsidiaryRecord::local_share);

  py::class_<KeiretsuMembership>(m, "KeiretsuMembership")
      .def(py::init<>())
      .def_readwrite("investor_id", &KeiretsuMembership::investor_id)
      .def_readwrite("group", &KeiretsuMembership::group)
      .def_readwrite("basis", &KeiretsuMembership::basis);

  py::class_<FilterSpec>(m, "FilterSpec")
      .def(py::init<>())
      .def_readwrite("macroarea", &FilterSpec::macroarea)
      .def_readwrite("sector_codes", &FilterSpec::sector_codes)
      .def_readwrite("snapshot_year", &FilterSpec::snapshot_year)
      .def_readwrite("manufacturing_only", &FilterSpec::manufacturing_only);

  py::class_<MacroareaMap>(m, "MacroareaMap")
      .def(py::init<>())
      .def_static("builtin", &MacroareaMap::builtin)
      .def("set", &MacroareaMap::set)
      .def("lookup", [](const MacroareaMap& map, const std::string& country) {
        return map.lookup(country);
      });

  py::class_<BipartiteGraph>(m, "BipartiteGraph")
      .def_readonly("investors", &BipartiteGraph::investors)
      .def_readonly("subsidiaries", &BipartiteGraph::subsidiaries)
      .def("edge_count",
           [](const BipartiteGraph& bg) { return bg.edges.size(); });

  py::class_<NetworkEdge>(m, "NetworkEdge")
      .def_readonly("a", &NetworkEdge::a)
      .def_readonly("b", &NetworkEdge::b)
      .def_readonly("shared_count", &NetworkEdge::shared_count)
      .def_readonly("weight", &NetworkEdge::weight);

  py::class_<InvestorNetwork>(m, "InvestorNetwork")
      .def(py::init<>())
      .def_readonly("node_ids", &InvestorNetwork::node_ids)
      .def_readonly("labels", &InvestorNetwork::labels)
      .def_readonly("edges", &InvestorNetwork::edges)
      .def("node_count", &InvestorNetwork::node_count)
      .def("edge_count", &InvestorNetwork::edge_count)
      .def("degrees", &InvestorNetwork::degrees);

  py::class_<ProjectionConfig>(m, "ProjectionConfig")
      .def(py::init<>())
      .def_readwrite("min_shared", &ProjectionConfig::min_shared)
      .def_readwrite("weighting", &ProjectionConfig::weighting);

  py::class_<Partition>(m, "Partition")
      .def(py::init<>())
      .def_readwrite("assignment", &Partition::assignment)
      .def_readonly("modularity", &Partition::modularity)
      .def("community_count", &Partition::community_count);

  py::class_<RunEnsemble>(m, "RunEnsemble")
      .def_readonly("node_ids", &RunEnsemble::node_ids)
      .def_readonly("runs", &RunEnsemble::runs)
      .def_readonly("seed", &RunEnsemble::seed)
      .def("run_count", &RunEnsemble::run_count);

  py::class_<RewireConfig>(m, "RewireConfig")
      .def(py::init<>())
      .def_readwrite("swaps_per_edge", &RewireConfig::swaps_per_edge)
      .def_readwrite("seed", &RewireConfig::seed)
      .def_readwrite("allow_multiedges", &RewireConfig::allow_multiedges);

  py::class_<RewireResult>(m, "RewireResult")
      .def_readonly("network", &RewireResult::network)
      .def_readonly("swaps_applied", &RewireResult::swaps_applied)
      .def_readonly("degenerate", &RewireResult::degenerate);

  py::class_<NullBatteryConfig>(m, "NullBatteryConfig")
      .def(py::init<>())
      .def_readwrite("replicas", &NullBatteryConfig::replicas)
      .def_readwrite("seed", &NullBatteryConfig::seed)
      .def_readwrite("swaps_per_edge", &NullBatteryConfig::swaps_per_edge)
      .def_readwrite("allow_multiedges", &NullBatteryConfig::allow_multiedges)
      .def_readwrite("runs", &NullBatteryConfig::runs)
      .def_readwrite("mc_samples", &NullBatteryConfig::mc_samples)
      .def_readwrite("include_unaffiliated",
                     &NullBatteryConfig::include_unaffiliated)
      .def_readwrite("threads", &NullBatteryConfig::threads);

  py::class_<ContingencyTable>(m, "ContingencyTable")
      .def_readonly("row_ids", &ContingencyTable::row_ids)
      .def_readonly("col_names", &ContingencyTable::col_names)
      .def_readonly("cells", &ContingencyTable::cells)
      .def_readonly("total", &ContingencyTable::total);

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("chi_square", &TestResult::chi_square)
      .def_readonly("p_value", &TestResult::p_value)
      .def_readonly("mc_samples", &TestResult::mc_samples)
      .def_readonly("dof_note", &TestResult::dof_note)
      .def_readonly("verdict", &TestResult::verdict);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("runs", &PipelineConfig::runs)
      .def_readwrite("mc_samples", &PipelineConfig::mc_samples)
      .def_readwrite("seed", &PipelineConfig::seed)
      .def_readwrite("include_unaffiliated",
                     &PipelineConfig::include_unaffiliated)
      .def_readwrite("threads", &PipelineConfig::threads);

  py::class_<AnalysisOutput>(m, "AnalysisOutput")
      .def_readonly("warnings", &AnalysisOutput::warnings)
      .def_readonly("bipartite", &AnalysisOutput::bipartite)
      .def_readonly("network", &AnalysisOutput::network)
      .def_readonly("ensemble", &AnalysisOutput::ensemble)
      .def_readonly("table", &AnalysisOutput::table)
      .def_readonly("result", &AnalysisOutput::result);

  py::class_<BatteryEntry>(m, "BatteryEntry")
      .def(py::init<>())
      .def_readwrite("label", &BatteryEntry::label)
      .def_readwrite("filter", &BatteryEntry::filter)
      .def_readwrite("projection", &BatteryEntry::projection);

  py::class_<BatteryRow>(m, "BatteryRow")
      .def_readonly("label", &BatteryRow::label)
      .def_readonly("weighting", &BatteryRow::weighting)
      .def_readonly("result", &BatteryRow::result)
      .def_readonly("note", &BatteryRow::note);

  py::class_<PlantSpec>(m, "PlantSpec")
      .def(py::init<>())
      .def_readwrite("groups", &PlantSpec::groups)
      .def_readwrite("investors_per_group", &PlantSpec::investors_per_group)
      .def_readwrite("unaffiliated_investors",
                     &PlantSpec::unaffiliated_investors)
      .def_readwrite("subsidiaries", &PlantSpec::subsidiaries)
      .def_readwrite("owner_count_weights", &PlantSpec::owner_count_weights)
      .def_readwrite("p_in", &PlantSpec::p_in)
      .def_readwrite("capital_mu", &PlantSpec::capital_mu)
      .def_readwrite("capital_sigma", &PlantSpec::capital_sigma)
      .def_readwrite("seed", &PlantSpec::seed)
      .def_readwrite("countries", &PlantSpec::countries)
      .def_readwrite("sector_codes", &PlantSpec::sector_codes);

  py::class_<SynthData>(m, "SynthData")
      .def_readonly("records", &SynthData::records)
      .def_readonly("memberships", &SynthData::memberships);

  py::class_<PowerPoint>(m, "PowerPoint")
      .def_readonly("p_in", &PowerPoint::p_in)
      .def_readonly("rejection_rate", &PowerPoint::rejection_rate)
      .def_readonly("replicas", &PowerPoint::replicas);

  py::class_<StatsRow>(m, "StatsRow")
      .def_readonly("group", &StatsRow::group)
      .def_readonly("record_count", &StatsRow::record_count)
      .def_readonly("avg_owners", &StatsRow::avg_owners)
      .def_readonly("owner_hist", &StatsRow::owner_hist)
      .def_readonly("pct_two_plus", &StatsRow::pct_two_plus);

  // ingest
  m.def("parse_subsidiaries_csv", [](const std::string& text) {
    return parse_or_raise<SubsidiaryRecord>(
        text, [](std::istream& in) { return parse_subsidiaries(in); });
  });
  m.def("parse_memberships_csv", [](const std::string& text) {
    return parse_or_raise<KeiretsuMembership>(
        text, [](std::istream& in) { return parse_memberships(in); });
  });
  m.def("subsidiaries_to_csv",
        [](const std::vector<SubsidiaryRecord>& records) {
          return to_text(
              [](std::ostream& out, const std::vector<SubsidiaryRecord>& r) {
                write_subsidiaries_csv(out, r);
              },
              records);
        });
  m.def("memberships_to_csv",
        [](const std::vector<KeiretsuMembership>& records) {
          return to_text(
              [](std::ostream& out, const std::vector<KeiretsuMembership>& r) {
                write_memberships_csv(out, r);
              },
              records);
        });
  m.def(
      "apply_filter",
      [](const std::vector<SubsidiaryRecord>& records, const FilterSpec& spec,
         const MacroareaMap& map) {
        auto out = apply_filter(records, spec, map);
        return py::make_tuple(out.records, out.warnings);
      },
      py::arg("records"), py::arg("spec"), py::arg("map"));
  m.def("descriptive_stats", &descriptive_stats, py::arg("records"),
        py::arg("group_by"), py::arg("map"));

  // graph
  m.def("build_bipartite", &build_bipartite);
  m.def("project", &project, py::arg("bipartite"),
        py::arg("config") = ProjectionConfig{});
  m.def("attach_memberships", &attach_memberships);
  m.def("degree_sequence", &degree_sequence);
  m.def("cosine_similarity", &cosine_similarity, py::arg("a"), py::arg("b"));
  m.def("graphml_string", [](const InvestorNetwork& net) {
    return to_text(
        [](std::ostream& out, const InvestorNetwork& n) {
          write_graphml(out, n);
        },
        net);
  });
  m.def("dot_string", [](const InvestorNetwork& net) {
    return to_text(
        [](std::ostream& out, const InvestorNetwork& n) { write_dot(out, n); },
        net);
  });

  // community
  m.def(
      "louvain",
      [](const InvestorNetwork& net, std::uint64_t seed, double resolution) {
        LouvainOptions opts;
        opts.resolution = resolution;
        return louvain(net, seed, opts);
      },
      py::arg("network"), py::arg("seed"), py::arg("resolution") = 1.0);
  m.def("modularity", &modularity, py::arg("network"), py::arg("partition"));
  m.def("run_ensemble", &run_ensemble, py::arg("network"),
        py::arg("run_count"), py::arg("seed"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("nmi", &nmi, py::arg("p"), py::arg("q"));
  m.def("align_ensemble", &align_ensemble);
  m.def("consensus_assignment", &consensus_assignment);

  // nullmodel
  m.def("configuration_rewire", &configuration_rewire, py::arg("network"),
        py::arg("config") = RewireConfig{});
  m.def("null_battery", &null_battery, py::arg("network"),
        py::arg("memberships"), py::arg("config") = NullBatteryConfig{},
        py::call_guard<py::gil_scoped_release>());

  // stats
  m.def("make_table", &make_table, py::arg("cells"),
        py::arg("col_names") = std::nullopt);
  m.def("contingency", &contingency, py::arg("ensemble"),
        py::arg("memberships"), py::arg("include_unaffiliated") = false);
  m.def("chi_square_stat", &chi_square_stat);
  m.def("mc_pvalue", &mc_pvalue, py::arg("table"), py::arg("samples"),
        py::arg("seed"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("analyze_pipeline", &analyze_pipeline, py::arg("records"),
        py::arg("memberships"), py::arg("map"),
        py::arg("filter") = FilterSpec{},
        py::arg("projection") = ProjectionConfig{},
        py::arg("config") = PipelineConfig{}, py::arg("stream") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("test_battery", &test_battery, py::arg("records"),
        py::arg("memberships"), py::arg("map"), py::arg("entries"),
        py::arg("config") = PipelineConfig{},
        py::call_guard<py::gil_scoped_release>());

  // synth
  m.def("generate", &generate, py::arg("spec") = PlantSpec{});
  m.def("power_curve", &power_curve, py::arg("spec"), py::arg("p_in_values"),
        py::arg("replicas"), py::arg("config") = PipelineConfig{},
        py::call_guard<py::gil_scoped_release>());

  m.def("derive_seed", &derive_seed, py::arg("root"), py::arg("stage"),
        py::arg("index"));
}
