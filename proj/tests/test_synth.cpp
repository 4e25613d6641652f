#include <fstream>
#include <map>
#include <sstream>

#include "coownet/ingest.hpp"
#include "coownet/synth.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coownet;

TEST_CASE("generate: zero subsidiaries still emits memberships") {
  PlantSpec spec;
  spec.subsidiaries = 0;
  const auto data = generate(spec);
  CHECK(data.records.empty());
  CHECK(data.memberships.size() == 300);  // 6 groups x 50
}

TEST_CASE("generate: counts match the spec") {
  PlantSpec spec;
  spec.groups = 3;
  spec.investors_per_group = 7;
  spec.unaffiliated_investors = 4;
  spec.subsidiaries = 57;
  const auto data = generate(spec);
  CHECK(data.records.size() == 57);
  CHECK(data.memberships.size() == 21);
  std::map<Keiretsu, int> per_group;
  for (const auto& m : data.memberships) ++per_group[m.group];
  CHECK(per_group.size() == 3);
  for (const auto& [group, count] : per_group) CHECK(count == 7);
}

TEST_CASE("generate: deterministic per seed") {
  PlantSpec spec;
  spec.subsidiaries = 120;
  spec.seed = 31;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.records == b.records);
  CHECK(a.memberships == b.memberships);
  spec.seed = 32;
  const auto c = generate(spec);
  CHECK(a.records != c.records);
}

TEST_CASE("generate: output passes ingest validation and round-trips") {
  PlantSpec spec;
  spec.subsidiaries = 150;
  spec.unaffiliated_investors = 10;
  const auto data = generate(spec);

  std::ostringstream subs, members;
  write_subsidiaries_csv(subs, data.records);
  write_memberships_csv(members, data.memberships);

  std::istringstream subs_in(subs.str());
  const auto parsed = parse_subsidiaries(subs_in);
  REQUIRE(parsed.ok());
  CHECK(parsed.records == data.records);

  std::istringstream members_in(members.str());
  const auto parsed_members = parse_memberships(members_in);
  REQUIRE(parsed_members.ok());
  CHECK(parsed_members.records == data.memberships);
}

TEST_CASE("generate: p_in = 1 keeps co-owners inside one group") {
  PlantSpec spec;
  spec.p_in = 1.0;
  spec.subsidiaries = 300;
  spec.seed = 77;
  const auto data = generate(spec);
  const int per_group = spec.investors_per_group;
  for (const auto& rec : data.records) {
    if (rec.owners.size() < 2) continue;
    std::set<int> groups;
    for (const auto& o : rec.owners) {
      const int index = std::stoi(o.investor_id.substr(1));
      groups.insert(index / per_group);
    }
    CHECK(groups.size() == 1);
  }
}

TEST_CASE("generate: p_in = 1 with multi-owner subsidiaries splits components") {
  PlantSpec spec;
  spec.p_in = 1.0;
  spec.owner_count_weights = {0, 1, 1, 1, 1};  // always 2+ owners
  spec.subsidiaries = 600;
  const auto data = generate(spec);
  const auto net = project(build_bipartite(data.records), {});
  CHECK(oracles::component_count(net) >= spec.groups);
}

TEST_CASE("generate: realized same-group fraction tracks p_in") {
  double fraction_sum = 0.0;
  int seeds = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PlantSpec spec;
    spec.seed = seed;
    const auto data = generate(spec);
    long long same = 0, additional = 0;
    for (const auto& rec : data.records) {
      if (rec.owners.size() < 2) continue;
      const int first_group =
          std::stoi(rec.owners[0].investor_id.substr(1)) /
          spec.investors_per_group;
      for (std::size_t k = 1; k < rec.owners.size(); ++k) {
        const int group = std::stoi(rec.owners[k].investor_id.substr(1)) /
                          spec.investors_per_group;
        ++additional;
        if (group == first_group) ++same;
      }
    }
    REQUIRE(additional > 0);
    fraction_sum += static_cast<double>(same) / additional;
    ++seeds;
  }
  const double mean_fraction = fraction_sum / seeds;
  CHECK(std::abs(mean_fraction - 0.8) < 0.05);
}

TEST_CASE("generate: input validation") {
  PlantSpec bad_p;
  bad_p.p_in = 1.5;
  CHECK_THROWS_AS((void)generate(bad_p), std::invalid_argument);

  PlantSpec too_many_groups;
  too_many_groups.groups = 7;
  CHECK_THROWS_AS((void)generate(too_many_groups), std::invalid_argument);

  PlantSpec too_few_investors;
  too_few_investors.groups = 1;
  too_few_investors.investors_per_group = 3;  // demand for 5 owners fails
  CHECK_THROWS_AS((void)generate(too_few_investors), std::invalid_argument);
}

TEST_CASE("generate: matches the committed golden fixture (seed 42)") {
  const auto data = generate(PlantSpec{});

  auto file_text = [](const char* name) {
    std::ifstream in(std::string(COOWNET_FIXTURE_DIR) + "/golden_seed42/" +
                     name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  std::ostringstream subs;
  write_subsidiaries_csv(subs, data.records);
  CHECK(subs.str() == file_text("subsidiaries.csv"));

  std::ostringstream members;
  write_memberships_csv(members, data.memberships);
  CHECK(members.str() == file_text("memberships.csv"));
}

TEST_CASE("power_curve: validation and smoke run") {
  PlantSpec spec;
  spec.groups = 3;
  spec.investors_per_group = 10;
  spec.subsidiaries = 150;
  spec.seed = 9;

  PipelineConfig cfg;
  cfg.runs = 15;
  cfg.mc_samples = 199;
  cfg.threads = 4;

  CHECK_THROWS_AS((void)power_curve(spec, {0.5}, 5, cfg),
                  std::invalid_argument);

  const auto points = power_curve(spec, {0.9}, 10, cfg);
  REQUIRE(points.size() == 1);
  CHECK(points[0].p_in == 0.9);
  CHECK(points[0].replicas == 10);
  CHECK(points[0].rejection_rate >= 0.0);
  CHECK(points[0].rejection_rate <= 1.0);
}
