#include "coownet/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "coownet/csv.hpp"

namespace coownet {

namespace {

const char* const kSubsidiaryColumns[] = {
    "subsidiary_id", "name",          "country",
    "sector_code",   "paidup_capital", "num_employees",
    "year_established", "owners",     "local_share"};

std::string join(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) out += p;
  return out;
}

// Parses "id:share;id:share". Returns false and sets `error` on failure.
bool parse_owner_list(std::string_view text, std::vector<OwnerShare>& owners,
                      std::string& error) {
  owners.clear();
  if (text.empty()) return true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    std::string_view item = text.substr(pos, end - pos);
    const std::size_t colon = item.rfind(':');
    if (item.empty() || colon == std::string_view::npos || colon == 0) {
      error = join({"malformed owner entry '", item, "'"});
      return false;
    }
    const auto share = csv::to_double(item.substr(colon + 1));
    if (!share) {
      error = join({"malformed owner share in '", item, "'"});
      return false;
    }
    owners.push_back({std::string(item.substr(0, colon)), *share});
    pos = end + 1;
    if (end == text.size()) break;
  }
  return true;
}

}  // namespace

ParseResult<SubsidiaryRecord> parse_subsidiaries(std::istream& in) {
  ParseResult<SubsidiaryRecord> result;
  csv::Table table;
  try {
    table = csv::read(in);
  } catch (const std::exception& e) {
    result.errors.push_back({0, e.what()});
    return result;
  }

  std::vector<std::size_t> cols;
  for (const char* name : kSubsidiaryColumns) {
    auto idx = table.column(name);
    if (!idx) {
      result.errors.push_back({1, join({"missing column '", name, "'"})});
      return result;
    }
    cols.push_back(*idx);
  }

  std::unordered_map<std::string, std::size_t> seen_ids;  // id -> file line
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = r + 2;
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      std::ostringstream msg;
      msg << "expected " << table.header.size() << " fields, got "
          << row.size();
      result.errors.push_back({line, msg.str()});
      continue;
    }
    auto field = [&](std::size_t i) -> const std::string& {
      return row[cols[i]];
    };

    SubsidiaryRecord rec;
    rec.subsidiary_id = field(0);
    rec.name = field(1);
    rec.country = field(2);
    bool bad = false;
    auto fail = [&](std::string msg) {
      result.errors.push_back({line, std::move(msg)});
      bad = true;
    };

    if (rec.subsidiary_id.empty()) fail("empty subsidiary_id");

    if (auto code = csv::to_int(field(3)); code && is_valid_sector(*code)) {
      rec.sector_code = static_cast<int>(*code);
    } else {
      fail(join({"invalid sector_code '", field(3), "'"}));
    }

    if (!field(4).empty()) {
      auto cap = csv::to_double(field(4));
      if (!cap || *cap < 0.0) {
        fail(join({"invalid paidup_capital '", field(4), "'"}));
      } else {
        rec.paidup_capital = *cap;
      }
    }
    if (!field(5).empty()) {
      auto n = csv::to_int(field(5));
      if (!n || *n < 0) {
        fail(join({"invalid num_employees '", field(5), "'"}));
      } else {
        rec.num_employees = static_cast<int>(*n);
      }
    }
    if (!field(6).empty()) {
      auto y = csv::to_int(field(6));
      if (!y || *y < 1000 || *y > 9999) {
        fail(join({"invalid year_established '", field(6), "'"}));
      } else {
        rec.year_established = static_cast<int>(*y);
      }
    }

    std::string owner_error;
    if (!parse_owner_list(field(7), rec.owners, owner_error)) {
      fail(std::move(owner_error));
    } else if (rec.owners.empty()) {
      fail("no owners");
    }

    if (auto ls = csv::to_double(field(8)); ls && *ls >= 0.0 && *ls <= 1.0) {
      rec.local_share = *ls;
    } else {
      fail(join({"invalid local_share '", field(8), "'"}));
    }

    if (!bad) {
      double share_sum = rec.local_share;
      std::unordered_set<std::string_view> owner_ids;
      for (const auto& o : rec.owners) {
        if (o.share <= 0.0 || o.share > 1.0) {
          fail(join({"share out of range for owner '", o.investor_id, "'"}));
          break;
        }
        if (!owner_ids.insert(o.investor_id).second) {
          fail(join({"duplicate owner '", o.investor_id, "'"}));
          break;
        }
        share_sum += o.share;
      }
      if (!bad && share_sum > 1.0 + kShareEpsilon) {
        std::ostringstream msg;
        msg << "shares sum to " << share_sum << " (> 1)";
        fail(msg.str());
      }
    }

    if (!bad) {
      auto [it, inserted] = seen_ids.emplace(rec.subsidiary_id, line);
      if (!inserted) {
        std::ostringstream msg;
        msg << "duplicate subsidiary_id '" << rec.subsidiary_id
            << "' (first seen at row " << it->second << ")";
        fail(msg.str());
      }
    }
    if (!bad) result.records.push_back(std::move(rec));
  }
  return result;
}

void write_subsidiaries_csv(std::ostream& out,
                            const std::vector<SubsidiaryRecord>& records) {
  std::vector<std::string> row(std::begin(kSubsidiaryColumns),
                               std::end(kSubsidiaryColumns));
  csv::write_row(out, row);
  for (const auto& rec : records) {
    std::string owners;
    for (const auto& o : rec.owners) {
      if (!owners.empty()) owners.push_back(';');
      owners += o.investor_id;
      owners.push_back(':');
      owners += csv::format_double(o.share);
    }
    row = {rec.subsidiary_id,
           rec.name,
           rec.country,
           std::to_string(rec.sector_code),
           rec.paidup_capital ? csv::format_double(*rec.paidup_capital) : "",
           rec.num_employees ? std::to_string(*rec.num_employees) : "",
           rec.year_established ? std::to_string(*rec.year_established) : "",
           owners,
           csv::format_double(rec.local_share)};
    csv::write_row(out, row);
  }
}

ParseResult<KeiretsuMembership> parse_memberships(std::istream& in) {
  ParseResult<KeiretsuMembership> result;
  csv::Table table;
  try {
    table = csv::read(in);
  } catch (const std::exception& e) {
    result.errors.push_back({0, e.what()});
    return result;
  }
  const auto id_col = table.column("investor_id");
  const auto group_col = table.column("group");
  const auto basis_col = table.column("basis");
  if (!id_col || !group_col || !basis_col) {
    result.errors.push_back(
        {1, "expected columns investor_id,group,basis"});
    return result;
  }

  std::string valid_groups;
  for (Keiretsu g : kAllKeiretsu) {
    if (!valid_groups.empty()) valid_groups += ", ";
    valid_groups += to_string(g);
  }

  // (investor, group) pair -> first file line
  std::map<std::pair<std::string, Keiretsu>, std::size_t> seen;
  std::unordered_map<std::string, int> groups_per_investor;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = r + 2;
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      result.errors.push_back({line, "wrong field count"});
      continue;
    }
    KeiretsuMembership m;
    m.investor_id = row[*id_col];
    if (m.investor_id.empty()) {
      result.errors.push_back({line, "empty investor_id"});
      continue;
    }
    auto group = keiretsu_from_string(row[*group_col]);
    if (!group) {
      result.errors.push_back(
          {line, join({"unknown group '", row[*group_col], "' (valid: ",
                       valid_groups, ")"})});
      continue;
    }
    m.group = *group;
    auto basis = basis_from_string(row[*basis_col]);
    if (!basis) {
      result.errors.push_back(
          {line, join({"unknown basis '", row[*basis_col],
                       "' (valid: PresidentsClub, Top50Equity, Both)"})});
      continue;
    }
    m.basis = *basis;

    auto [it, inserted] = seen.emplace(std::pair{m.investor_id, m.group}, line);
    if (!inserted) {
      std::ostringstream msg;
      msg << "duplicate membership for '" << m.investor_id << "' in "
          << to_string(m.group) << " (first seen at row " << it->second << ")";
      result.errors.push_back({line, msg.str()});
      continue;
    }
    if (++groups_per_investor[m.investor_id] == 2) {
      result.warnings.push_back(
          {line, join({"dual affiliation for investor '", m.investor_id,
                       "'"})});
    }
    result.records.push_back(std::move(m));
  }
  return result;
}

void write_memberships_csv(std::ostream& out,
                           const std::vector<KeiretsuMembership>& records) {
  csv::write_row(out, std::vector<std::string>{"investor_id", "group",
                                               "basis"});
  for (const auto& m : records) {
    csv::write_row(out, std::vector<std::string>{
                            m.investor_id, std::string(to_string(m.group)),
                            std::string(to_string(m.basis))});
  }
}

MacroareaMap MacroareaMap::builtin() {
  static const char* const kAsean[] = {
      "Brunei",  "Cambodia",    "Indonesia", "Laos",     "Malaysia",
      "Myanmar", "Philippines", "Singapore", "Thailand", "Vietnam",
      "Viet Nam"};
  static const char* const kChinaTaiwan[] = {"China", "Hong Kong", "Taiwan"};
  // EU membership as of the 2005 survey wave.
  static const char* const kEu[] = {
      "Austria", "Belgium", "Cyprus",  "Czech Republic", "Denmark",
      "Estonia", "Finland", "France",  "Germany",        "Greece",
      "Hungary", "Ireland", "Italy",   "Latvia",         "Lithuania",
      "Luxembourg", "Malta", "Netherlands", "Poland",    "Portugal",
      "Slovakia", "Slovenia", "Spain", "Sweden",         "United Kingdom"};
  static const char* const kNorthAmerica[] = {"USA", "United States",
                                              "Canada"};
  MacroareaMap map;
  for (auto c : kAsean) map.set(c, Macroarea::Asean);
  for (auto c : kChinaTaiwan) map.set(c, Macroarea::ChinaTaiwan);
  for (auto c : kEu) map.set(c, Macroarea::Eu);
  for (auto c : kNorthAmerica) map.set(c, Macroarea::NorthAmerica);
  return map;
}

MacroareaMap MacroareaMap::from_csv(std::istream& in) {
  csv::Table table = csv::read(in);
  const auto country_col = table.column("country");
  const auto area_col = table.column("macroarea");
  if (!country_col || !area_col) {
    throw ParseError("macroareas.csv: expected columns country,macroarea");
  }
  MacroareaMap map;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size() || row[*country_col].empty()) {
      throw ParseError("macroareas.csv: malformed row " +
                       std::to_string(r + 2));
    }
    auto area = macroarea_from_string(row[*area_col]);
    if (!area) {
      throw ParseError(join({"macroareas.csv: unknown macroarea '",
                             row[*area_col], "' at row ",
                             std::to_string(r + 2)}));
    }
    map.set(row[*country_col], *area);
  }
  return map;
}

void MacroareaMap::set(std::string country, Macroarea area) {
  entries_[std::move(country)] = area;
}

std::optional<Macroarea> MacroareaMap::lookup(std::string_view country) const {
  auto it = entries_.find(country);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void write_macroareas_csv(std::ostream& out, const MacroareaMap& map) {
  csv::write_row(out, std::vector<std::string>{"country", "macroarea"});
  for (const auto& [country, area] : map.entries()) {
    csv::write_row(out, std::vector<std::string>{
                            country, std::string(to_string(area))});
  }
}

FilterOutcome apply_filter(const std::vector<SubsidiaryRecord>& records,
                           const FilterSpec& spec, const MacroareaMap& map) {
  FilterOutcome out;
  std::set<std::string> unmapped;
  for (const auto& rec : records) {
    if (spec.macroarea) {
      auto area = map.lookup(rec.country);
      if (!area) {
        unmapped.insert(rec.country);
        area = Macroarea::Other;
      }
      if (*area != *spec.macroarea) continue;
    }
    if (spec.sector_codes && !spec.sector_codes->contains(rec.sector_code))
      continue;
    if (spec.snapshot_year &&
        !(rec.year_established && *rec.year_established <= *spec.snapshot_year))
      continue;
    if (spec.manufacturing_only && !is_manufacturing_sector(rec.sector_code))
      continue;
    out.records.push_back(rec);
  }
  for (const auto& country : unmapped) {
    out.warnings.push_back(join(
        {"country '", country, "' not in macroarea map, treated as Other"}));
  }
  return out;
}

std::vector<StatsRow> descriptive_stats(
    const std::vector<SubsidiaryRecord>& records, GroupBy group_by,
    const MacroareaMap& map) {
  struct Accum {
    std::int64_t count = 0;
    std::int64_t owner_total = 0;
    std::array<std::int64_t, 5> hist{};
  };
  std::map<std::string, Accum> groups;
  std::map<std::string, int> sector_order;

  for (const auto& rec : records) {
    std::string key;
    if (group_by == GroupBy::Macroarea) {
      key = to_string(map.lookup(rec.country).value_or(Macroarea::Other));
    } else {
      key = std::to_string(rec.sector_code);
      sector_order[key] = rec.sector_code;
    }
    auto& acc = groups[key];
    acc.count += 1;
    const auto owners = static_cast<std::int64_t>(rec.owners.size());
    acc.owner_total += owners;
    acc.hist[std::min<std::int64_t>(owners, 5) - 1] += 1;
  }

  std::vector<std::string> order;
  if (group_by == GroupBy::Macroarea) {
    for (Macroarea a : kAllMacroareas) {
      if (groups.contains(std::string(to_string(a))))
        order.emplace_back(to_string(a));
    }
  } else {
    std::vector<std::pair<int, std::string>> codes;
    for (const auto& [key, code] : sector_order) codes.emplace_back(code, key);
    std::sort(codes.begin(), codes.end());
    for (const auto& [code, key] : codes) order.push_back(key);
  }

  std::vector<StatsRow> rows;
  for (const auto& key : order) {
    const auto& acc = groups.at(key);
    StatsRow row;
    row.group = key;
    row.record_count = acc.count;
    row.avg_owners =
        static_cast<double>(acc.owner_total) / static_cast<double>(acc.count);
    row.owner_hist = acc.hist;
    row.pct_two_plus =
        static_cast<double>(acc.count - acc.hist[0]) /
        static_cast<double>(acc.count);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows) {
  csv::write_row(
      out, std::vector<std::string>{"group", "records", "avg", "owners_1",
                                    "owners_2", "owners_3", "owners_4",
                                    "owners_5plus", "pct_2plus"});
  for (const auto& r : rows) {
    csv::write_row(out,
                   std::vector<std::string>{
                       r.group, std::to_string(r.record_count),
                       csv::format_double(r.avg_owners),
                       std::to_string(r.owner_hist[0]),
                       std::to_string(r.owner_hist[1]),
                       std::to_string(r.owner_hist[2]),
                       std::to_string(r.owner_hist[3]),
                       std::to_string(r.owner_hist[4]),
                       csv::format_double(r.pct_two_plus)});
  }
}

}  // namespace coownet
