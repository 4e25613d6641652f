#ifndef COOWNET_MANIFEST_HPP
#define COOWNET_MANIFEST_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace coownet {

// Reproducibility record written next to every output set: the exact
// command, the config snapshot, the seed, and input digests. Two runs
// with equal manifest inputs produce byte-identical analysis CSVs.
struct RunManifest {
  std::string command_line;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> input_digests;
  std::vector<std::pair<std::string, double>> timings_ms;

  void write_json(std::ostream& out) const;
};

// FNV-1a (64-bit) over the file bytes, as 16 hex digits.
std::string file_digest_hex(const std::string& path);

}  // namespace coownet

#endif
