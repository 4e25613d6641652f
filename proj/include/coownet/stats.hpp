#ifndef COOWNET_STATS_HPP
#define COOWNET_STATS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coownet/community.hpp"
#include "coownet/ingest.hpp"

namespace coownet {

// Community x keiretsu joint frequencies, averaged over the run ensemble.
// Cells from a single run are integers; averaged cells generally are not.
struct ContingencyTable {
  std::vector<int> row_ids;             // aligned community labels
  std::vector<std::string> col_names;   // groups present (+ "Unaffiliated")
  std::vector<std::vector<double>> cells;
  double total = 0.0;
};

// Averages per-run counts after aligning community labels to run 0.
// Dual-affiliated investors count once per group. Throws DegenerateError
// when no network node carries a keiretsu label.
ContingencyTable contingency(const RunEnsemble& ensemble,
                             const std::vector<KeiretsuMembership>& memberships,
                             bool include_unaffiliated);

// Pearson statistic after dropping all-empty rows and columns. Throws
// DegenerateError if fewer than two rows or columns remain.
double chi_square_stat(const ContingencyTable& t);

enum class Verdict { RejectedAt001, RejectedAt01, RejectedAt05, NotRejected };

std::string_view to_string(Verdict v);
Verdict verdict_for(double p);
std::string_view stars_for(double p);  // "***" / "**" / "*" / ""

struct TestResult {
  double chi_square = 0.0;
  double p_value = 1.0;
  int mc_samples = 0;
  std::string dof_note;
  Verdict verdict = Verdict::NotRejected;
};

// Monte-Carlo p-value with both margins held fixed: tables are sampled by
// randomly pairing row and column labels (the independence null), and
// p = (1 + #{sampled chi2 >= observed}) / (samples + 1). Averaged tables
// use largest-remainder rounded margins so the sampled total is integral.
TestResult mc_pvalue(const ContingencyTable& t, int samples,
                     std::uint64_t seed, int threads = 0);

// Shared knobs for the filter -> project -> detect -> test pipeline.
struct PipelineConfig {
  int runs = 1000;
  int mc_samples = 9999;
  std::uint64_t seed = 0;
  bool include_unaffiliated = false;
  int threads = 0;
  LouvainOptions louvain;
};

struct AnalysisOutput {
  std::vector<std::string> warnings;
  BipartiteGraph bipartite;
  InvestorNetwork network;
  RunEnsemble ensemble;
  ContingencyTable table;
  TestResult result;
};

// Runs one full analysis. `stream` separates the random streams of
// independent battery entries under the same root seed.
AnalysisOutput analyze_pipeline(const std::vector<SubsidiaryRecord>& records,
                                const std::vector<KeiretsuMembership>& memberships,
                                const MacroareaMap& map, const FilterSpec& filter,
                                const ProjectionConfig& projection,
                                const PipelineConfig& cfg,
                                std::uint64_t stream = 0);

struct BatteryEntry {
  std::string label;
  FilterSpec filter;
  ProjectionConfig projection;
};

struct BatteryRow {
  std::string label;
  Weighting weighting = Weighting::Unweighted;
  std::optional<TestResult> result;
  std::string note;  // degenerate-entry explanation when result is empty
};

// One row per entry; degenerate entries are reported in-row, not fatal.
std::vector<BatteryRow> test_battery(
    const std::vector<SubsidiaryRecord>& records,
    const std::vector<KeiretsuMembership>& memberships, const MacroareaMap& map,
    const std::vector<BatteryEntry>& entries, const PipelineConfig& cfg);

void write_contingency_csv(std::ostream& out, const ContingencyTable& t);

// Columns: label,weighting,mrh_rejected,chi_square,p_value,stars,note
void write_results_csv(std::ostream& out, std::span<const BatteryRow> rows);

// Same schema with a leading replica column.
void write_replica_results_csv(std::ostream& out, std::string_view label,
                               Weighting weighting,
                               std::span<const TestResult> results);

}  // namespace coownet

#endif
