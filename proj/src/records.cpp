#include "coownet/records.hpp"

namespace coownet {

std::string_view to_string(Keiretsu g) {
  switch (g) {
    case Keiretsu::Mitsui: return "Mitsui";
    case Keiretsu::Mitsubishi: return "Mitsubishi";
    case Keiretsu::Sumitomo: return "Sumitomo";
    case Keiretsu::Sanwa: return "Sanwa";
    case Keiretsu::Fuyo: return "Fuyo";
    case Keiretsu::Ikkan: return "Ikkan";
  }
  return "?";
}

std::optional<Keiretsu> keiretsu_from_string(std::string_view s) {
  for (Keiretsu g : kAllKeiretsu) {
    if (s == to_string(g)) return g;
  }
  return std::nullopt;
}

std::string_view to_string(MembershipBasis b) {
  switch (b) {
    case MembershipBasis::PresidentsClub: return "PresidentsClub";
    case MembershipBasis::Top50Equity: return "Top50Equity";
    case MembershipBasis::Both: return "Both";
  }
  return "?";
}

std::optional<MembershipBasis> basis_from_string(std::string_view s) {
  if (s == "PresidentsClub") return MembershipBasis::PresidentsClub;
  if (s == "Top50Equity") return MembershipBasis::Top50Equity;
  if (s == "Both") return MembershipBasis::Both;
  return std::nullopt;
}

std::string_view to_string(Macroarea a) {
  switch (a) {
    case Macroarea::Asean: return "ASEAN";
    case Macroarea::ChinaTaiwan: return "ChinaTaiwan";
    case Macroarea::Eu: return "EU";
    case Macroarea::NorthAmerica: return "NorthAmerica";
    case Macroarea::Other: return "Other";
  }
  return "?";
}

std::optional<Macroarea> macroarea_from_string(std::string_view s) {
  for (Macroarea a : kAllMacroareas) {
    if (s == to_string(a)) return a;
  }
  return std::nullopt;
}

}  // namespace coownet
