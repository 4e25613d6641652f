// coownet: reconstruct co-investment networks from subsidiary ownership
// records, detect communities, and test them against declared business-group
// memberships.
//
// Subcommands: generate | stats | analyze | null | battery
// Exit codes: 0 success, 2 input/config error, 3 degenerate analysis.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coownet/ingest.hpp"
#include "coownet/manifest.hpp"
#include "coownet/nullmodel.hpp"
#include "coownet/stats.hpp"
#include "coownet/synth.hpp"
#include "coownet/version.hpp"

namespace fs = std::filesystem;
using namespace coownet;

namespace {

struct StageTimer {
  RunManifest* manifest;
  std::string stage;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  StageTimer(RunManifest& m, std::string name)
      : manifest(&m), stage(std::move(name)) {}
  ~StageTimer() {
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    manifest->timings_ms.emplace_back(stage, ms);
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  return in;
}

void report_issues(const std::string& path,
                   const std::vector<ParseIssue>& issues) {
  std::ostringstream msg;
  msg << path << ": " << issues.size() << " invalid row(s)";
  for (std::size_t i = 0; i < issues.size() && i < 5; ++i)
    msg << "\n  row " << issues[i].row << ": " << issues[i].message;
  if (issues.size() > 5) msg << "\n  ...";
  throw ParseError(msg.str());
}

std::vector<SubsidiaryRecord> load_subsidiaries(const std::string& path) {
  auto in = open_input(path);
  auto result = parse_subsidiaries(in);
  if (!result.ok()) report_issues(path, result.errors);
  return std::move(result.records);
}

std::vector<KeiretsuMembership> load_memberships(const std::string& path) {
  auto in = open_input(path);
  auto result = parse_memberships(in);
  if (!result.ok()) report_issues(path, result.errors);
  for (const auto& w : result.warnings)
    std::cerr << "warning: " << path << " row " << w.row << ": " << w.message
              << "\n";
  return std::move(result.records);
}

MacroareaMap load_macroareas(const std::string& path) {
  if (path.empty()) return MacroareaMap::builtin();
  auto in = open_input(path);
  return MacroareaMap::from_csv(in);
}

struct FilterFlags {
  std::string region;
  std::vector<int> sectors;
  int snapshot_year = 0;
  bool manufacturing_only = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--filter-region", region,
                    "Keep only one macroarea (ASEAN, ChinaTaiwan, EU, "
                    "NorthAmerica, Other)")
        ->check(CLI::IsMember(
            {"ASEAN", "ChinaTaiwan", "EU", "NorthAmerica", "Other"}));
    cmd->add_option("--filter-sector", sectors,
                    "Keep only these sector codes (repeatable)");
    cmd->add_option("--snapshot-year", snapshot_year,
                    "Keep subsidiaries established in or before this year");
    cmd->add_flag("--manufacturing-only", manufacturing_only,
                  "Keep only manufacturing sector codes (600-2300)");
  }

  FilterSpec to_spec() const {
    FilterSpec spec;
    if (!region.empty()) spec.macroarea = macroarea_from_string(region);
    if (!sectors.empty())
      spec.sector_codes = std::set<int>(sectors.begin(), sectors.end());
    if (snapshot_year > 0) spec.snapshot_year = snapshot_year;
    spec.manufacturing_only = manufacturing_only;
    return spec;
  }

  std::string label() const {
    std::vector<std::string> parts;
    if (!region.empty()) parts.push_back(region);
    if (!sectors.empty()) {
      std::string s = "sectors ";
      for (std::size_t i = 0; i < sectors.size(); ++i) {
        if (i) s += "+";
        s += std::to_string(sectors[i]);
      }
      parts.push_back(s);
    }
    if (snapshot_year > 0)
      parts.push_back("<=" + std::to_string(snapshot_year));
    if (manufacturing_only) parts.push_back("manufacturing");
    if (parts.empty()) return "Overall";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ", ";
      out += parts[i];
    }
    return out;
  }
};

fs::path ensure_outdir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write output file: " + path.string());
  return out;
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

RunManifest make_manifest(const std::string& command_line,
                          std::uint64_t seed) {
  RunManifest manifest;
  manifest.command_line = command_line;
  manifest.tool_version = std::string(kVersion);
  manifest.seed = seed;
  return manifest;
}

void add_input_digest(RunManifest& manifest, const std::string& path) {
  if (!path.empty())
    manifest.input_digests.emplace_back(path, file_digest_hex(path));
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
  auto out = open_output(dir / "manifest.json");
  manifest.write_json(out);
}

std::string default_config_text() {
  std::ostringstream out;
  out << "coownet " << kVersion << "\n"
      << "defaults:\n"
      << "  min-shared=1 weighting=unweighted\n"
      << "  runs=1000 mc-samples=9999 seed=0\n"
      << "  replicas=20 swaps-per-edge=20\n"
      << "  groups=6 investors-per-group=50 subsidiaries=2000 p-in=0.8\n"
      << "  macroareas=builtin (ASEAN 10, China+HK+Taiwan, EU-25, US+Canada)";
  return out.str();
}

// ---- subcommand options ----

struct StatsOptions {
  std::string subsidiaries, macroareas, out;
  std::string group_by = "macroarea";
  FilterFlags filters;
};

struct AnalyzeOptions {
  std::string subsidiaries, memberships, macroareas, out;
  int min_shared = 1;
  bool weighted = false;
  int runs = 1000;
  int mc_samples = 9999;
  std::uint64_t seed = 0;
  bool include_unaffiliated = false;
  int threads = 0;
  FilterFlags filters;
};

struct NullOptions {
  AnalyzeOptions base;
  int replicas = 20;
  int swaps_per_edge = 20;
  int runs = 200;
};

struct BatteryOptions {
  std::string subsidiaries, memberships, macroareas, battery_file, out;
  int min_shared = 1;
  int runs = 1000;
  int mc_samples = 9999;
  std::uint64_t seed = 0;
  bool include_unaffiliated = false;
  int threads = 0;
};

struct GenerateOptions {
  std::string out;
  int groups = 6;
  int investors_per_group = 50;
  int unaffiliated = 0;
  int subsidiaries = 2000;
  double p_in = 0.8;
  double capital_mu = 9.5;
  double capital_sigma = 1.0;
  std::uint64_t seed = 42;
};

int run_stats(const StatsOptions& opt, const std::string& command_line) {
  RunManifest manifest = make_manifest(command_line, 0);
  std::vector<SubsidiaryRecord> records;
  MacroareaMap map;
  {
    StageTimer timer(manifest, "parse");
    records = load_subsidiaries(opt.subsidiaries);
    map = load_macroareas(opt.macroareas);
  }
  add_input_digest(manifest, opt.subsidiaries);
  add_input_digest(manifest, opt.macroareas);
  manifest.config = {{"group_by", opt.group_by},
                     {"filter", opt.filters.label()}};

  const auto dir = ensure_outdir(opt.out);
  {
    StageTimer timer(manifest, "stats");
    const auto filtered = apply_filter(records, opt.filters.to_spec(), map);
    for (const auto& w : filtered.warnings)
      std::cerr << "warning: " << w << "\n";
    const auto group_by =
        opt.group_by == "sector" ? GroupBy::Sector : GroupBy::Macroarea;
    const auto rows = descriptive_stats(filtered.records, group_by, map);
    auto out = open_output(dir / "stats.csv");
    write_stats_csv(out, rows);
  }
  write_manifest(dir, manifest);
  std::cout << "wrote " << (dir / "stats.csv").string() << "\n";
  return 0;
}

int run_analyze(const AnalyzeOptions& opt, const std::string& command_line) {
  RunManifest manifest = make_manifest(command_line, opt.seed);
  std::vector<SubsidiaryRecord> records;
  std::vector<KeiretsuMembership> memberships;
  MacroareaMap map;
  {
    StageTimer timer(manifest, "parse");
    records = load_subsidiaries(opt.subsidiaries);
    memberships = load_memberships(opt.memberships);
    map = load_macroareas(opt.macroareas);
  }
  add_input_digest(manifest, opt.subsidiaries);
  add_input_digest(manifest, opt.memberships);
  add_input_digest(manifest, opt.macroareas);

  ProjectionConfig projection;
  projection.min_shared = opt.min_shared;
  projection.weighting =
      opt.weighted ? Weighting::CosineSimilarity : Weighting::Unweighted;
  PipelineConfig cfg;
  cfg.runs = opt.runs;
  cfg.mc_samples = opt.mc_samples;
  cfg.seed = opt.seed;
  cfg.include_unaffiliated = opt.include_unaffiliated;
  cfg.threads = opt.threads;

  manifest.config = {
      {"label", opt.filters.label()},
      {"weighting", std::string(to_string(projection.weighting))},
      {"min_shared", std::to_string(opt.min_shared)},
      {"runs", std::to_string(opt.runs)},
      {"mc_samples", std::to_string(opt.mc_samples)},
      {"include_unaffiliated", opt.include_unaffiliated ? "true" : "false"}};

  AnalysisOutput analysis;
  {
    StageTimer timer(manifest, "analyze");
    analysis = analyze_pipeline(records, memberships, map,
                                opt.filters.to_spec(), projection, cfg);
  }
  for (const auto& w : analysis.warnings) std::cerr << "warning: " << w << "\n";

  const auto dir = ensure_outdir(opt.out);
  {
    StageTimer timer(manifest, "write");
    BatteryRow row;
    row.label = opt.filters.label();
    row.weighting = projection.weighting;
    row.result = analysis.result;
    std::vector<BatteryRow> rows{row};
    auto results_csv = open_output(dir / "test_result.csv");
    write_results_csv(results_csv, rows);

    auto contingency_csv = open_output(dir / "contingency.csv");
    write_contingency_csv(contingency_csv, analysis.table);

    auto graphml = open_output(dir / "network.graphml");
    write_graphml(graphml, analysis.network);
    auto dot = open_output(dir / "network.dot");
    write_dot(dot, analysis.network);
    auto bipartite_dot = open_output(dir / "bipartite.dot");
    write_bipartite_dot(bipartite_dot, analysis.bipartite);

    // Best run by modularity, first wins ties.
    std::size_t best = 0;
    for (std::size_t r = 1; r < analysis.ensemble.runs.size(); ++r) {
      if (analysis.ensemble.runs[r].modularity >
          analysis.ensemble.runs[best].modularity)
        best = r;
    }
    auto partition_csv = open_output(dir / "partition.csv");
    write_partition_csv(partition_csv, analysis.ensemble.node_ids,
                        analysis.ensemble.runs[best]);
    auto ensemble_csv = open_output(dir / "ensemble.csv");
    write_ensemble_csv(ensemble_csv, analysis.ensemble);
  }
  write_manifest(dir, manifest);

  std::cout << opt.filters.label() << " ("
            << to_string(projection.weighting)
            << "): chi2=" << analysis.result.chi_square
            << " p=" << analysis.result.p_value << " ["
            << to_string(analysis.result.verdict) << "]\n";
  return 0;
}

int run_null(const NullOptions& opt, const std::string& command_line) {
  const auto& base = opt.base;
  RunManifest manifest = make_manifest(command_line, base.seed);
  std::vector<SubsidiaryRecord> records;
  std::vector<KeiretsuMembership> memberships;
  MacroareaMap map;
  {
    StageTimer timer(manifest, "parse");
    records = load_subsidiaries(base.subsidiaries);
    memberships = load_memberships(base.memberships);
    map = load_macroareas(base.macroareas);
  }
  add_input_digest(manifest, base.subsidiaries);
  add_input_digest(manifest, base.memberships);
  add_input_digest(manifest, base.macroareas);

  ProjectionConfig projection;
  projection.min_shared = base.min_shared;
  projection.weighting =
      base.weighted ? Weighting::CosineSimilarity : Weighting::Unweighted;

  manifest.config = {{"label", base.filters.label()},
                     {"weighting", std::string(to_string(projection.weighting))},
                     {"replicas", std::to_string(opt.replicas)},
                     {"swaps_per_edge", std::to_string(opt.swaps_per_edge)},
                     {"runs", std::to_string(opt.runs)},
                     {"mc_samples", std::to_string(base.mc_samples)}};

  std::vector<TestResult> results;
  {
    StageTimer timer(manifest, "null");
    const auto filtered = apply_filter(records, base.filters.to_spec(), map);
    if (filtered.records.empty())
      throw DegenerateError("no data: filter matched no records");
    auto net = project(build_bipartite(filtered.records), projection);
    if (net.edge_count() == 0)
      throw DegenerateError(
          "insufficient co-investment structure: projected network is empty");
    attach_memberships(net, memberships);

    NullBatteryConfig cfg;
    cfg.replicas = opt.replicas;
    cfg.seed = base.seed;
    cfg.swaps_per_edge = opt.swaps_per_edge;
    cfg.runs = opt.runs;
    cfg.mc_samples = base.mc_samples;
    cfg.include_unaffiliated = base.include_unaffiliated;
    cfg.threads = base.threads;
    results = null_battery(net, memberships, cfg);
  }

  const auto dir = ensure_outdir(base.out);
  {
    auto out = open_output(dir / "null_results.csv");
    write_replica_results_csv(out, base.filters.label(), projection.weighting,
                              results);
  }
  write_manifest(dir, manifest);

  int not_rejected = 0;
  for (const auto& r : results)
    if (r.verdict == Verdict::NotRejected) ++not_rejected;
  std::cout << "null battery: " << results.size() << " replicas, "
            << not_rejected << " not rejected at 0.05\n";
  return 0;
}

std::vector<BatteryEntry> load_battery_file(const std::string& path,
                                            int default_min_shared) {
  auto in = open_input(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
  if (!doc.contains("entries") || !doc["entries"].is_array())
    throw ParseError(path + ": expected a top-level \"entries\" array");

  std::vector<BatteryEntry> entries;
  for (const auto& item : doc["entries"]) {
    BatteryEntry entry;
    entry.label = item.value("label", "entry " + std::to_string(entries.size()));
    entry.projection.min_shared = item.value("min_shared", default_min_shared);
    if (item.contains("filter")) {
      const auto& f = item["filter"];
      if (f.contains("macroarea")) {
        auto area = macroarea_from_string(f["macroarea"].get<std::string>());
        if (!area)
          throw ParseError(path + ": unknown macroarea in entry '" +
                           entry.label + "'");
        entry.filter.macroarea = area;
      }
      if (f.contains("sector_codes")) {
        std::set<int> codes;
        for (const auto& c : f["sector_codes"]) codes.insert(c.get<int>());
        entry.filter.sector_codes = std::move(codes);
      }
      if (f.contains("snapshot_year"))
        entry.filter.snapshot_year = f["snapshot_year"].get<int>();
      if (f.contains("manufacturing_only"))
        entry.filter.manufacturing_only = f["manufacturing_only"].get<bool>();
    }
    const std::string weighting = item.value("weighting", "unweighted");
    if (weighting == "both") {
      entry.projection.weighting = Weighting::Unweighted;
      entries.push_back(entry);
      entry.projection.weighting = Weighting::CosineSimilarity;
      entries.push_back(entry);
    } else if (weighting == "weighted") {
      entry.projection.weighting = Weighting::CosineSimilarity;
      entries.push_back(entry);
    } else if (weighting == "unweighted") {
      entry.projection.weighting = Weighting::Unweighted;
      entries.push_back(entry);
    } else {
      throw ParseError(path + ": unknown weighting '" + weighting +
                       "' (use unweighted, weighted or both)");
    }
  }
  if (entries.empty()) throw ParseError(path + ": no battery entries");
  return entries;
}

int run_battery(const BatteryOptions& opt, const std::string& command_line) {
  RunManifest manifest = make_manifest(command_line, opt.seed);
  std::vector<SubsidiaryRecord> records;
  std::vector<KeiretsuMembership> memberships;
  MacroareaMap map;
  std::vector<BatteryEntry> entries;
  {
    StageTimer timer(manifest, "parse");
    records = load_subsidiaries(opt.subsidiaries);
    memberships = load_memberships(opt.memberships);
    map = load_macroareas(opt.macroareas);
    entries = load_battery_file(opt.battery_file, opt.min_shared);
  }
  add_input_digest(manifest, opt.subsidiaries);
  add_input_digest(manifest, opt.memberships);
  add_input_digest(manifest, opt.macroareas);
  add_input_digest(manifest, opt.battery_file);
  manifest.config = {{"entries", std::to_string(entries.size())},
                     {"runs", std::to_string(opt.runs)},
                     {"mc_samples", std::to_string(opt.mc_samples)}};

  PipelineConfig cfg;
  cfg.runs = opt.runs;
  cfg.mc_samples = opt.mc_samples;
  cfg.seed = opt.seed;
  cfg.include_unaffiliated = opt.include_unaffiliated;
  cfg.threads = opt.threads;

  std::vector<BatteryRow> rows;
  {
    StageTimer timer(manifest, "battery");
    rows = test_battery(records, memberships, map, entries, cfg);
  }

  const auto dir = ensure_outdir(opt.out);
  {
    auto out = open_output(dir / "battery.csv");
    write_results_csv(out, rows);
  }
  write_manifest(dir, manifest);

  for (const auto& row : rows) {
    std::cout << row.label << " (" << to_string(row.weighting) << "): ";
    if (row.result) {
      std::cout << "chi2=" << row.result->chi_square
                << " p=" << row.result->p_value << " "
                << stars_for(row.result->p_value);
    } else {
      std::cout << row.note;
    }
    std::cout << "\n";
  }
  return 0;
}

int run_generate(const GenerateOptions& opt, const std::string& command_line) {
  RunManifest manifest = make_manifest(command_line, opt.seed);
  PlantSpec spec;
  spec.groups = opt.groups;
  spec.investors_per_group = opt.investors_per_group;
  spec.unaffiliated_investors = opt.unaffiliated;
  spec.subsidiaries = opt.subsidiaries;
  spec.p_in = opt.p_in;
  spec.capital_mu = opt.capital_mu;
  spec.capital_sigma = opt.capital_sigma;
  spec.seed = opt.seed;

  manifest.config = {
      {"groups", std::to_string(opt.groups)},
      {"investors_per_group", std::to_string(opt.investors_per_group)},
      {"unaffiliated", std::to_string(opt.unaffiliated)},
      {"subsidiaries", std::to_string(opt.subsidiaries)},
      {"p_in", std::to_string(opt.p_in)}};

  SynthData data;
  {
    StageTimer timer(manifest, "generate");
    data = generate(spec);
  }
  const auto dir = ensure_outdir(opt.out);
  {
    StageTimer timer(manifest, "write");
    auto subs = open_output(dir / "subsidiaries.csv");
    write_subsidiaries_csv(subs, data.records);
    auto members = open_output(dir / "memberships.csv");
    write_memberships_csv(members, data.memberships);
    auto areas = open_output(dir / "macroareas.csv");
    write_macroareas_csv(areas, MacroareaMap::builtin());
  }
  write_manifest(dir, manifest);
  std::cout << "wrote " << data.records.size() << " subsidiaries, "
            << data.memberships.size() << " memberships to " << dir.string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-ownership network analysis toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Read defaults from a key=value file ([subcommand] sections)");
  app.set_version_flag("--version", default_config_text());

  StatsOptions stats_opt;
  auto* stats_cmd = app.add_subcommand(
      "stats", "Descriptive co-investor statistics per macroarea or sector");
  stats_cmd->configurable();
  stats_cmd->add_option("--subsidiaries", stats_opt.subsidiaries,
                        "subsidiaries.csv")->required();
  stats_cmd->add_option("--macroareas", stats_opt.macroareas,
                        "macroareas.csv (default: built-in mapping)");
  stats_cmd->add_option("--group-by", stats_opt.group_by, "macroarea|sector")
      ->check(CLI::IsMember({"macroarea", "sector"}));
  stats_cmd->add_option("-o,--out", stats_opt.out, "Output directory")
      ->required();
  stats_opt.filters.attach(stats_cmd);

  AnalyzeOptions analyze_opt;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Full pipeline: project, detect communities, test");
  analyze_cmd->configurable();
  auto attach_analysis_inputs = [](CLI::App* cmd, AnalyzeOptions& opt) {
    cmd->add_option("--subsidiaries", opt.subsidiaries, "subsidiaries.csv")
        ->required();
    cmd->add_option("--memberships", opt.memberships, "memberships.csv")
        ->required();
    cmd->add_option("--macroareas", opt.macroareas,
                    "macroareas.csv (default: built-in mapping)");
    cmd->add_option("--min-shared", opt.min_shared,
                    "Co-owned subsidiaries required for a link")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--weighted", opt.weighted,
                  "Weight links by capital-allocation cosine similarity");
    cmd->add_option("--mc-samples", opt.mc_samples,
                    "Monte-Carlo samples for the chi-square p-value")
        ->check(CLI::Range(100, 100000000));
    cmd->add_option("--seed", opt.seed, "Root seed for all randomness");
    cmd->add_flag("--include-unaffiliated", opt.include_unaffiliated,
                  "Count investors without a membership in an extra column");
    cmd->add_option("--threads", opt.threads,
                    "Worker threads (0 = hardware)");
    cmd->add_option("-o,--out", opt.out, "Output directory")->required();
    opt.filters.attach(cmd);
  };
  attach_analysis_inputs(analyze_cmd, analyze_opt);
  analyze_cmd->add_option("--runs", analyze_opt.runs,
                          "Louvain runs to accumulate")
      ->check(CLI::PositiveNumber);

  NullOptions null_opt;
  auto* null_cmd = app.add_subcommand(
      "null", "Configuration-model null battery (degree-preserving rewires)");
  null_cmd->configurable();
  attach_analysis_inputs(null_cmd, null_opt.base);
  null_cmd->add_option("--replicas", null_opt.replicas,
                       "Independent rewired replicas")
      ->check(CLI::PositiveNumber);
  null_cmd->add_option("--swaps-per-edge", null_opt.swaps_per_edge,
                       "Double-edge swap attempts per edge")
      ->check(CLI::PositiveNumber);
  null_cmd->add_option("--runs", null_opt.runs,
                       "Louvain runs per replica")
      ->check(CLI::PositiveNumber);

  BatteryOptions battery_opt;
  auto* battery_cmd = app.add_subcommand(
      "battery", "Run a labelled battery of (filter, weighting) tests");
  battery_cmd->configurable();
  battery_cmd->add_option("--subsidiaries", battery_opt.subsidiaries,
                          "subsidiaries.csv")->required();
  battery_cmd->add_option("--memberships", battery_opt.memberships,
                          "memberships.csv")->required();
  battery_cmd->add_option("--macroareas", battery_opt.macroareas,
                          "macroareas.csv (default: built-in mapping)");
  battery_cmd->add_option("--battery", battery_opt.battery_file,
                          "Battery definition (JSON)")->required();
  battery_cmd->add_option("--min-shared", battery_opt.min_shared,
                          "Default min_shared for entries")
      ->check(CLI::PositiveNumber);
  battery_cmd->add_option("--runs", battery_opt.runs,
                          "Louvain runs per entry")
      ->check(CLI::PositiveNumber);
  battery_cmd->add_option("--mc-samples", battery_opt.mc_samples,
                          "Monte-Carlo samples")
      ->check(CLI::Range(100, 100000000));
  battery_cmd->add_option("--seed", battery_opt.seed, "Root seed");
  battery_cmd->add_flag("--include-unaffiliated",
                        battery_opt.include_unaffiliated,
                        "Count unaffiliated investors in an extra column");
  battery_cmd->add_option("--threads", battery_opt.threads,
                          "Worker threads (0 = hardware)");
  battery_cmd->add_option("-o,--out", battery_opt.out, "Output directory")
      ->required();

  GenerateOptions generate_opt;
  auto* generate_cmd = app.add_subcommand(
      "generate", "Emit a synthetic survey with planted group structure");
  generate_cmd->configurable();
  generate_cmd->add_option("--groups", generate_opt.groups,
                           "Business groups to plant (1-6)")
      ->check(CLI::Range(1, 6));
  generate_cmd->add_option("--investors-per-group",
                           generate_opt.investors_per_group, "")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_option("--unaffiliated", generate_opt.unaffiliated,
                           "Investors outside every group")
      ->check(CLI::NonNegativeNumber);
  generate_cmd->add_option("--subsidiaries", generate_opt.subsidiaries, "")
      ->check(CLI::NonNegativeNumber);
  generate_cmd->add_option("--p-in", generate_opt.p_in,
                           "Same-group probability for co-owners")
      ->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--capital-mu", generate_opt.capital_mu,
                           "Lognormal mu for paid-up capital");
  generate_cmd->add_option("--capital-sigma", generate_opt.capital_sigma,
                           "Lognormal sigma for paid-up capital");
  generate_cmd->add_option("--seed", generate_opt.seed, "Generator seed");
  generate_cmd->add_option("-o,--out", generate_opt.out, "Output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command_line = join_args(argc, argv);
  try {
    if (stats_cmd->parsed()) return run_stats(stats_opt, command_line);
    if (analyze_cmd->parsed()) return run_analyze(analyze_opt, command_line);
    if (null_cmd->parsed()) return run_null(null_opt, command_line);
    if (battery_cmd->parsed()) return run_battery(battery_opt, command_line);
    if (generate_cmd->parsed()) return run_generate(generate_opt, command_line);
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
