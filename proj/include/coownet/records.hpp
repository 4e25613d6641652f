#ifndef COOWNET_RECORDS_HPP
#define COOWNET_RECORDS_HPP

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coownet {

// The six horizontal business groups tracked in the membership file.
enum class Keiretsu { Mitsui, Mitsubishi, Sumitomo, Sanwa, Fuyo, Ikkan };

inline constexpr std::array<Keiretsu, 6> kAllKeiretsu = {
    Keiretsu::Mitsui, Keiretsu::Mitsubishi, Keiretsu::Sumitomo,
    Keiretsu::Sanwa,  Keiretsu::Fuyo,       Keiretsu::Ikkan};

std::string_view to_string(Keiretsu g);
std::optional<Keiretsu> keiretsu_from_string(std::string_view s);

enum class MembershipBasis { PresidentsClub, Top50Equity, Both };

std::string_view to_string(MembershipBasis b);
std::optional<MembershipBasis> basis_from_string(std::string_view s);

enum class Macroarea { Asean, ChinaTaiwan, Eu, NorthAmerica, Other };

inline constexpr std::array<Macroarea, 5> kAllMacroareas = {
    Macroarea::Asean, Macroarea::ChinaTaiwan, Macroarea::Eu,
    Macroarea::NorthAmerica, Macroarea::Other};

std::string_view to_string(Macroarea a);
std::optional<Macroarea> macroarea_from_string(std::string_view s);

struct OwnerShare {
  std::string investor_id;
  double share = 0.0;  // fraction of equity, in (0, 1]

  bool operator==(const OwnerShare&) const = default;
};

// One overseas subsidiary as reported in the survey file. Capital is in
// thousands of currency units and may be missing, in which case the record
// is excluded from weighted analyses.
struct SubsidiaryRecord {
  std::string subsidiary_id;
  std::string name;
  std::string country;
  int sector_code = 0;  // 0 = non-manufacturing sentinel
  std::optional<double> paidup_capital;
  std::optional<int> num_employees;
  std::optional<int> year_established;
  std::vector<OwnerShare> owners;
  double local_share = 0.0;

  bool operator==(const SubsidiaryRecord&) const = default;
};

struct KeiretsuMembership {
  std::string investor_id;
  Keiretsu group = Keiretsu::Mitsui;
  MembershipBasis basis = MembershipBasis::PresidentsClub;

  bool operator==(const KeiretsuMembership&) const = default;
};

// Record filter. snapshot_year selects subsidiaries established in or
// before that year; records with unknown establishment year are dropped
// when the filter is active.
struct FilterSpec {
  std::optional<Macroarea> macroarea;
  std::optional<std::set<int>> sector_codes;
  std::optional<int> snapshot_year;
  bool manufacturing_only = false;

  bool empty() const {
    return !macroarea && !sector_codes && !snapshot_year && !manufacturing_only;
  }
};

inline constexpr int kSectorNonManufacturing = 0;

// Manufacturing industrial codes run 600..2300 in steps of 100.
inline bool is_manufacturing_sector(int code) {
  return code >= 600 && code <= 2300 && code % 100 == 0;
}

inline bool is_valid_sector(int code) {
  return code == kSectorNonManufacturing || is_manufacturing_sector(code);
}

// Rounding slack when checking that owner shares plus the local share do
// not exceed 1.
inline constexpr double kShareEpsilon = 1e-6;

// Analysis cannot proceed on this input (empty network, collapsed table,
// no labeled nodes). Distinct from input/usage errors.
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace coownet

#endif
