#include "coownet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "coownet/parallel.hpp"
#include "coownet/rng.hpp"

namespace coownet {

namespace {

void validate(const PlantSpec& spec) {
  if (spec.groups < 1 || spec.groups > static_cast<int>(kAllKeiretsu.size()))
    throw std::invalid_argument("generate: groups must be in [1, 6]");
  if (spec.investors_per_group < 1)
    throw std::invalid_argument("generate: investors_per_group must be >= 1");
  if (spec.unaffiliated_investors < 0)
    throw std::invalid_argument("generate: unaffiliated_investors must be >= 0");
  if (spec.subsidiaries < 0)
    throw std::invalid_argument("generate: subsidiaries must be >= 0");
  if (spec.p_in < 0.0 || spec.p_in > 1.0)
    throw std::invalid_argument("generate: p_in must be in [0, 1]");
  if (spec.countries.empty() || spec.sector_codes.empty())
    throw std::invalid_argument("generate: empty country or sector list");
  double weight_sum = 0.0;
  int max_owners = 0;
  for (std::size_t k = 0; k < spec.owner_count_weights.size(); ++k) {
    if (spec.owner_count_weights[k] < 0.0)
      throw std::invalid_argument("generate: negative owner-count weight");
    weight_sum += spec.owner_count_weights[k];
    if (spec.owner_count_weights[k] > 0.0) max_owners = static_cast<int>(k) + 1;
  }
  if (weight_sum <= 0.0)
    throw std::invalid_argument("generate: owner-count weights sum to zero");
  const int total =
      spec.groups * spec.investors_per_group + spec.unaffiliated_investors;
  if (max_owners > total)
    throw std::invalid_argument(
        "generate: owner-count distribution demands more owners than investors exist");
}

std::string padded_id(char prefix, int value) {
  std::ostringstream out;
  out << prefix;
  std::string digits = std::to_string(value);
  for (std::size_t i = digits.size(); i < 5; ++i) out << '0';
  out << digits;
  return out.str();
}

double floor6(double v) { return std::floor(v * 1e6) / 1e6; }

}  // namespace

SynthData generate(const PlantSpec& spec) {
  validate(spec);

  const int group_investors = spec.groups * spec.investors_per_group;
  const int total_investors = group_investors + spec.unaffiliated_investors;
  auto group_of = [&](int investor) {
    return investor < group_investors ? investor / spec.investors_per_group
                                      : -1;
  };

  SynthData out;
  for (int i = 0; i < group_investors; ++i) {
    static constexpr std::array<MembershipBasis, 3> kBases = {
        MembershipBasis::PresidentsClub, MembershipBasis::Top50Equity,
        MembershipBasis::Both};
    out.memberships.push_back({padded_id('I', i),
                               kAllKeiretsu[group_of(i)],
                               kBases[i % kBases.size()]});
  }

  Rng rng(spec.seed);
  std::vector<int> owners;
  std::vector<int> pool;
  std::vector<bool> chosen(total_investors, false);

  for (int s = 0; s < spec.subsidiaries; ++s) {
    const int owner_count =
        1 + rng.weighted_index(std::span<const double>(
                spec.owner_count_weights.data(),
                spec.owner_count_weights.size()));

    owners.clear();
    const int first = static_cast<int>(rng.below(total_investors));
    owners.push_back(first);
    chosen[first] = true;
    const int first_group = group_of(first);

    while (std::ssize(owners) < owner_count) {
      bool same_group = false;
      if (first_group >= 0) same_group = rng.uniform() < spec.p_in;

      pool.clear();
      auto fill_pool = [&](bool want_same) {
        pool.clear();
        for (int i = 0; i < total_investors; ++i) {
          if (chosen[i]) continue;
          const bool in_first = group_of(i) == first_group && first_group >= 0;
          if (first_group < 0 || in_first == want_same) pool.push_back(i);
        }
      };
      fill_pool(same_group);
      if (pool.empty()) fill_pool(!same_group);
      const int pick = pool[rng.below(pool.size())];
      owners.push_back(pick);
      chosen[pick] = true;
    }
    for (int i : owners) chosen[i] = false;

    SubsidiaryRecord rec;
    rec.subsidiary_id = padded_id('S', s);
    rec.name = "Subsidiary " + std::to_string(s);
    rec.country = spec.countries[rng.below(spec.countries.size())];
    rec.sector_code =
        spec.sector_codes[rng.below(spec.sector_codes.size())];
    rec.paidup_capital =
        std::round(rng.lognormal(spec.capital_mu, spec.capital_sigma) * 1e3) /
        1e3;
    rec.num_employees =
        static_cast<int>(std::lround(rng.lognormal(5.5, 0.8)));
    rec.year_established = 1965 + static_cast<int>(rng.below(41));

    // Shares: positive raw draws scaled to leave a local remainder, then
    // floored at 6 decimals so the total never exceeds 1.
    double raw_sum = 0.0;
    std::vector<double> raw(owners.size());
    for (double& v : raw) {
      v = rng.uniform(0.1, 1.0);
      raw_sum += v;
    }
    const double local_raw = rng.uniform(0.0, 0.3);
    raw_sum += local_raw;
    for (std::size_t i = 0; i < owners.size(); ++i) {
      rec.owners.push_back(
          {padded_id('I', owners[i]), floor6(raw[i] / raw_sum)});
    }
    rec.local_share = floor6(local_raw / raw_sum);
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::vector<PowerPoint> power_curve(const PlantSpec& spec,
                                    const std::vector<double>& p_in_values,
                                    int replicas, const PipelineConfig& cfg) {
  if (replicas < 10)
    throw std::invalid_argument("power_curve: replicas must be >= 10");

  const MacroareaMap map = MacroareaMap::builtin();
  std::vector<PowerPoint> points;
  for (std::size_t v = 0; v < p_in_values.size(); ++v) {
    std::vector<int> rejected(replicas, 0);
    parallel_for(static_cast<std::size_t>(replicas), cfg.threads,
                 [&](std::size_t r) {
                   const std::uint64_t idx = v * replicas + r;
                   PlantSpec rep = spec;
                   rep.p_in = p_in_values[v];
                   rep.seed = derive_seed(spec.seed, "power-data", idx);
                   const SynthData data = generate(rep);
                   PipelineConfig pcfg = cfg;
                   pcfg.seed = derive_seed(spec.seed, "power-pipeline", idx);
                   pcfg.threads = 1;
                   const auto analysis = analyze_pipeline(
                       data.records, data.memberships, map, FilterSpec{},
                       ProjectionConfig{}, pcfg);
                   rejected[r] = analysis.result.p_value < 0.05 ? 1 : 0;
                 });
    PowerPoint point;
    point.p_in = p_in_values[v];
    point.replicas = replicas;
    point.rejection_rate =
        static_cast<double>(std::count(rejected.begin(), rejected.end(), 1)) /
        static_cast<double>(replicas);
    points.push_back(point);
  }
  return points;
}

}  // namespace coownet
