#include "coownet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "coownet/csv.hpp"
#include "coownet/parallel.hpp"
#include "coownet/rng.hpp"

namespace coownet {

ContingencyTable contingency(const RunEnsemble& ensemble,
                             const std::vector<KeiretsuMembership>& memberships,
                             bool include_unaffiliated) {
  if (ensemble.runs.empty())
    throw std::invalid_argument("contingency: empty ensemble");

  std::unordered_map<std::string_view, std::vector<Keiretsu>> groups_of;
  for (const auto& m : memberships) groups_of[m.investor_id].push_back(m.group);
  for (auto& [id, groups] : groups_of) {
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  }

  const std::size_t n = ensemble.node_ids.size();
  std::vector<const std::vector<Keiretsu>*> node_groups(n, nullptr);
  bool any_labeled = false;
  bool any_unaffiliated = false;
  std::vector<bool> group_present(kAllKeiretsu.size(), false);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = groups_of.find(ensemble.node_ids[i]);
    if (it != groups_of.end() && !it->second.empty()) {
      node_groups[i] = &it->second;
      any_labeled = true;
      for (Keiretsu g : it->second) group_present[static_cast<int>(g)] = true;
    } else {
      any_unaffiliated = true;
    }
  }
  if (!any_labeled)
    throw DegenerateError(
        "no keiretsu overlap: no network node carries a membership");

  // Columns: groups with members, in enum order, then Unaffiliated.
  std::vector<int> col_of_group(kAllKeiretsu.size(), -1);
  ContingencyTable table;
  for (std::size_t g = 0; g < kAllKeiretsu.size(); ++g) {
    if (group_present[g]) {
      col_of_group[g] = static_cast<int>(table.col_names.size());
      table.col_names.emplace_back(to_string(kAllKeiretsu[g]));
    }
  }
  int unaffiliated_col = -1;
  if (include_unaffiliated && any_unaffiliated) {
    unaffiliated_col = static_cast<int>(table.col_names.size());
    table.col_names.emplace_back("Unaffiliated");
  }

  const auto aligned = align_ensemble(ensemble);
  int max_label = -1;
  for (const auto& run : aligned)
    for (int c : run) max_label = std::max(max_label, c);
  const int rows = max_label + 1;
  const int cols = static_cast<int>(table.col_names.size());

  std::vector<std::vector<double>> cells(rows, std::vector<double>(cols, 0.0));
  for (const auto& run : aligned) {
    for (std::size_t i = 0; i < n; ++i) {
      const int row = run[i];
      if (node_groups[i]) {
        for (Keiretsu g : *node_groups[i])
          cells[row][col_of_group[static_cast<int>(g)]] += 1.0;
      } else if (unaffiliated_col >= 0) {
        cells[row][unaffiliated_col] += 1.0;
      }
    }
  }
  const double run_count = static_cast<double>(aligned.size());
  for (auto& row : cells)
    for (double& v : row) v /= run_count;

  table.cells = std::move(cells);
  table.row_ids.resize(rows);
  std::iota(table.row_ids.begin(), table.row_ids.end(), 0);
  for (const auto& row : table.cells)
    for (double v : row) table.total += v;
  return table;
}

namespace {

struct DenseTable {
  std::vector<std::vector<double>> cells;
  std::vector<double> row_sums;
  std::vector<double> col_sums;
  double total = 0.0;
};

// Drops all-empty rows/columns; requires a 2x2 or larger remainder.
DenseTable compact(const ContingencyTable& t) {
  const std::size_t rows = t.cells.size();
  const std::size_t cols = rows ? t.cells[0].size() : 0;
  std::vector<double> row_sums(rows, 0.0), col_sums(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (t.cells[r][c] < 0.0)
        throw std::invalid_argument("chi_square_stat: negative cell");
      row_sums[r] += t.cells[r][c];
      col_sums[c] += t.cells[r][c];
    }
  }
  DenseTable d;
  std::vector<std::size_t> keep_rows, keep_cols;
  for (std::size_t r = 0; r < rows; ++r)
    if (row_sums[r] > 0.0) keep_rows.push_back(r);
  for (std::size_t c = 0; c < cols; ++c)
    if (col_sums[c] > 0.0) keep_cols.push_back(c);
  if (keep_rows.size() < 2 || keep_cols.size() < 2)
    throw DegenerateError(
        "degenerate table: fewer than 2 non-empty rows or columns");
  for (std::size_t r : keep_rows) {
    std::vector<double> row;
    row.reserve(keep_cols.size());
    for (std::size_t c : keep_cols) row.push_back(t.cells[r][c]);
    d.cells.push_back(std::move(row));
    d.row_sums.push_back(row_sums[r]);
    d.total += row_sums[r];
  }
  for (std::size_t c : keep_cols) d.col_sums.push_back(col_sums[c]);
  return d;
}

double pearson_stat(const DenseTable& d) {
  double stat = 0.0;
  for (std::size_t r = 0; r < d.cells.size(); ++r) {
    for (std::size_t c = 0; c < d.cells[r].size(); ++c) {
      const double expected = d.row_sums[r] * d.col_sums[c] / d.total;
      const double diff = d.cells[r][c] - expected;
      stat += diff * diff / expected;
    }
  }
  return stat;
}

// Largest-remainder rounding of `values` to integers summing to `target`.
std::vector<long long> round_margins(const std::vector<double>& values,
                                     long long target) {
  std::vector<long long> out(values.size());
  std::vector<std::pair<double, std::size_t>> fractions;
  long long floor_sum = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<long long>(std::floor(values[i]));
    floor_sum += out[i];
    fractions.emplace_back(values[i] - std::floor(values[i]), i);
  }
  long long remainder = target - floor_sum;
  std::sort(fractions.begin(), fractions.end(), [](auto& a, auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t k = 0; remainder > 0 && k < fractions.size();
       ++k, --remainder) {
    ++out[fractions[k].second];
  }
  // A negative remainder can only come from float drift; absorb it.
  for (std::size_t k = fractions.size(); remainder < 0 && k-- > 0;) {
    if (out[fractions[k].second] > 0) {
      --out[fractions[k].second];
      ++remainder;
    }
  }
  return out;
}

}  // namespace

double chi_square_stat(const ContingencyTable& t) {
  return pearson_stat(compact(t));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::RejectedAt001: return "RejectedAt001";
    case Verdict::RejectedAt01: return "RejectedAt01";
    case Verdict::RejectedAt05: return "RejectedAt05";
    case Verdict::NotRejected: return "NotRejected";
  }
  return "?";
}

Verdict verdict_for(double p) {
  if (p < 0.001) return Verdict::RejectedAt001;
  if (p < 0.01) return Verdict::RejectedAt01;
  if (p < 0.05) return Verdict::RejectedAt05;
  return Verdict::NotRejected;
}

std::string_view stars_for(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

TestResult mc_pvalue(const ContingencyTable& t, int samples,
                     std::uint64_t seed, int threads) {
  if (samples < 100)
    throw std::invalid_argument("mc_pvalue: samples must be >= 100");

  const DenseTable d = compact(t);
  const double observed = pearson_stat(d);

  const long long total = std::llround(d.total);
  auto row_margin = round_margins(d.row_sums, total);
  auto col_margin = round_margins(d.col_sums, total);

  // Rounding can zero out a margin that was fractional; those rows or
  // columns cannot receive counts and are left out of the sampled tables.
  std::vector<int> row_keep, col_keep;
  for (std::size_t r = 0; r < row_margin.size(); ++r)
    if (row_margin[r] > 0) row_keep.push_back(static_cast<int>(r));
  for (std::size_t c = 0; c < col_margin.size(); ++c)
    if (col_margin[c] > 0) col_keep.push_back(static_cast<int>(c));
  if (row_keep.size() < 2 || col_keep.size() < 2)
    throw DegenerateError("degenerate table: margins collapse when rounded");

  const int rows = static_cast<int>(row_keep.size());
  const int cols = static_cast<int>(col_keep.size());
  std::vector<long long> rm(rows), cm(cols);
  for (int r = 0; r < rows; ++r) rm[r] = row_margin[row_keep[r]];
  for (int c = 0; c < cols; ++c) cm[c] = col_margin[col_keep[c]];
  const long long t_rows = std::accumulate(rm.begin(), rm.end(), 0LL);
  const long long t_cols = std::accumulate(cm.begin(), cm.end(), 0LL);
  const long long items = std::min(t_rows, t_cols);

  std::vector<int> row_label;
  row_label.reserve(items);
  for (int r = 0; r < rows && std::ssize(row_label) < items; ++r)
    for (long long k = 0; k < rm[r] && std::ssize(row_label) < items; ++k)
      row_label.push_back(r);
  std::vector<int> col_label_base;
  col_label_base.reserve(items);
  for (int c = 0; c < cols && std::ssize(col_label_base) < items; ++c)
    for (long long k = 0; k < cm[c] && std::ssize(col_label_base) < items; ++k)
      col_label_base.push_back(c);

  std::vector<double> expected(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      expected[r * cols + c] = static_cast<double>(rm[r]) *
                               static_cast<double>(cm[c]) /
                               static_cast<double>(items);

  const double threshold = observed - 1e-9;
  const int workers =
      std::max(1, std::min(resolve_threads(threads), samples / 64 + 1));
  std::vector<long long> hits_per_worker(workers, 0);
  parallel_for(static_cast<std::size_t>(workers), workers,
               [&](std::size_t w) {
                 std::vector<int> col_label = col_label_base;
                 std::vector<long long> counts(rows * cols);
                 long long hits = 0;
                 for (int s = static_cast<int>(w); s < samples; s += workers) {
                   Rng rng(derive_seed(seed, "mc-sample", s));
                   // Fisher-Yates pairing of column labels with row labels;
                   // restart from the base arrangement so sample s is the
                   // same no matter which worker runs it.
                   col_label = col_label_base;
                   for (std::size_t i = col_label.size(); i > 1; --i)
                     std::swap(col_label[i - 1], col_label[rng.below(i)]);
                   std::fill(counts.begin(), counts.end(), 0);
                   for (long long k = 0; k < items; ++k)
                     ++counts[row_label[k] * cols + col_label[k]];
                   double stat = 0.0;
                   for (int idx = 0; idx < rows * cols; ++idx) {
                     const double diff =
                         static_cast<double>(counts[idx]) - expected[idx];
                     stat += diff * diff / expected[idx];
                   }
                   if (stat >= threshold) ++hits;
                 }
                 hits_per_worker[w] = hits;
               });
  const long long hits =
      std::accumulate(hits_per_worker.begin(), hits_per_worker.end(), 0LL);

  TestResult result;
  result.chi_square = observed;
  result.p_value = static_cast<double>(hits + 1) /
                   static_cast<double>(samples + 1);
  result.mc_samples = samples;
  result.verdict = verdict_for(result.p_value);
  std::ostringstream note;
  note << rows << "x" << cols << " table, (r-1)(c-1)=" << (rows - 1) * (cols - 1)
       << "; Monte-Carlo p with fixed margins, n=" << items;
  result.dof_note = note.str();
  return result;
}

AnalysisOutput analyze_pipeline(const std::vector<SubsidiaryRecord>& records,
                                const std::vector<KeiretsuMembership>& memberships,
                                const MacroareaMap& map, const FilterSpec& filter,
                                const ProjectionConfig& projection,
                                const PipelineConfig& cfg, std::uint64_t stream) {
  AnalysisOutput out;
  auto filtered = apply_filter(records, filter, map);
  out.warnings = std::move(filtered.warnings);
  if (filtered.records.empty())
    throw DegenerateError("no data: filter matched no records");

  out.bipartite = build_bipartite(filtered.records);
  out.network = project(out.bipartite, projection);
  if (out.network.edge_count() == 0)
    throw DegenerateError(
        "insufficient co-investment structure: projected network is empty");
  attach_memberships(out.network, memberships);

  out.ensemble =
      run_ensemble(out.network, cfg.runs,
                   derive_seed(cfg.seed, "ensemble", stream), cfg.threads);
  out.table =
      contingency(out.ensemble, memberships, cfg.include_unaffiliated);
  out.result = mc_pvalue(out.table, cfg.mc_samples,
                         derive_seed(cfg.seed, "mc", stream), cfg.threads);
  return out;
}

std::vector<BatteryRow> test_battery(
    const std::vector<SubsidiaryRecord>& records,
    const std::vector<KeiretsuMembership>& memberships, const MacroareaMap& map,
    const std::vector<BatteryEntry>& entries, const PipelineConfig& cfg) {
  std::vector<BatteryRow> rows;
  rows.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& entry = entries[i];
    BatteryRow row;
    row.label = entry.label;
    row.weighting = entry.projection.weighting;
    try {
      row.result = analyze_pipeline(records, memberships, map, entry.filter,
                                    entry.projection, cfg, i)
                       .result;
    } catch (const DegenerateError& e) {
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_contingency_csv(std::ostream& out, const ContingencyTable& t) {
  std::vector<std::string> row{"community"};
  row.insert(row.end(), t.col_names.begin(), t.col_names.end());
  csv::write_row(out, row);
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    row.clear();
    row.push_back(std::to_string(t.row_ids[r]));
    for (double v : t.cells[r]) row.push_back(csv::format_double(v));
    csv::write_row(out, row);
  }
}

namespace {

void append_result_fields(std::vector<std::string>& row,
                          const TestResult& r) {
  row.push_back(r.p_value < 0.05 ? "YES" : "NO");
  row.push_back(csv::format_double(r.chi_square));
  row.push_back(csv::format_double(r.p_value));
  row.emplace_back(stars_for(r.p_value));
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const BatteryRow> rows) {
  csv::write_row(out, std::vector<std::string>{"label", "weighting",
                                               "mrh_rejected", "chi_square",
                                               "p_value", "stars", "note"});
  for (const auto& r : rows) {
    std::vector<std::string> row{r.label, std::string(to_string(r.weighting))};
    if (r.result) {
      append_result_fields(row, *r.result);
      row.emplace_back();
    } else {
      row.insert(row.end(), {"", "", "", ""});
      row.push_back(r.note.starts_with("no data") ? "no data" : r.note);
    }
    csv::write_row(out, row);
  }
}

void write_replica_results_csv(std::ostream& out, std::string_view label,
                               Weighting weighting,
                               std::span<const TestResult> results) {
  csv::write_row(out, std::vector<std::string>{"replica", "label", "weighting",
                                               "mrh_rejected", "chi_square",
                                               "p_value", "stars"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), std::string(label),
                                 std::string(to_string(weighting))};
    append_result_fields(row, results[i]);
    csv::write_row(out, row);
  }
}

}  // namespace coownet
