#ifndef COOWNET_INGEST_HPP
#define COOWNET_INGEST_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "coownet/records.hpp"

namespace coownet {

struct ParseIssue {
  std::size_t row = 0;  // 1-based file line (header = line 1)
  std::string message;
};

// Every input row either lands in `records` or produces an entry in
// `errors`; nothing is dropped silently.
template <typename T>
struct ParseResult {
  std::vector<T> records;
  std::vector<ParseIssue> errors;
  std::vector<ParseIssue> warnings;

  bool ok() const { return errors.empty(); }
};

// Fatal wrapper for callers that cannot act on row-level issues.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// subsidiaries.csv columns:
//   subsidiary_id,name,country,sector_code,paidup_capital,num_employees,
//   year_established,owners,local_share
// `owners` holds `id:share` pairs joined by `;`.
ParseResult<SubsidiaryRecord> parse_subsidiaries(std::istream& in);
void write_subsidiaries_csv(std::ostream& out,
                            const std::vector<SubsidiaryRecord>& records);

// memberships.csv columns: investor_id,group,basis
// Dual affiliations (one investor in several groups) are kept and flagged
// as warnings.
ParseResult<KeiretsuMembership> parse_memberships(std::istream& in);
void write_memberships_csv(std::ostream& out,
                           const std::vector<KeiretsuMembership>& records);

// macroareas.csv columns: country,macroarea
class MacroareaMap {
 public:
  MacroareaMap() = default;

  // Default mapping: the ten ASEAN members, China/Hong Kong/Taiwan, the
  // 2005 EU membership, US and Canada. Everything else resolves to Other.
  static MacroareaMap builtin();
  static MacroareaMap from_csv(std::istream& in);  // throws ParseError

  void set(std::string country, Macroarea area);
  std::optional<Macroarea> lookup(std::string_view country) const;
  const std::map<std::string, Macroarea, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, Macroarea, std::less<>> entries_;
};

void write_macroareas_csv(std::ostream& out, const MacroareaMap& map);

struct FilterOutcome {
  std::vector<SubsidiaryRecord> records;
  std::vector<std::string> warnings;  // e.g. countries routed to Other
};

FilterOutcome apply_filter(const std::vector<SubsidiaryRecord>& records,
                           const FilterSpec& spec, const MacroareaMap& map);

enum class GroupBy { Macroarea, Sector };

// One row of the co-investor summary: average owner count and the
// 1/2/3/4/5+ histogram, plus the share of records with 2+ owners.
struct StatsRow {
  std::string group;
  std::int64_t record_count = 0;
  double avg_owners = 0.0;
  std::array<std::int64_t, 5> owner_hist{};  // counts for 1,2,3,4,5+
  double pct_two_plus = 0.0;
};

std::vector<StatsRow> descriptive_stats(
    const std::vector<SubsidiaryRecord>& records, GroupBy group_by,
    const MacroareaMap& map);

void write_stats_csv(std::ostream& out, const std::vector<StatsRow>& rows);

}  // namespace coownet

#endif
