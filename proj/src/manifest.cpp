#include "coownet/manifest.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace coownet {

void RunManifest::write_json(std::ostream& out) const {
  nlohmann::ordered_json doc;
  doc["command_line"] = command_line;
  doc["tool_version"] = tool_version;
  doc["seed"] = seed;
  nlohmann::ordered_json config_obj;
  for (const auto& [key, value] : config) config_obj[key] = value;
  doc["config"] = std::move(config_obj);
  nlohmann::ordered_json inputs_obj;
  for (const auto& [path, digest] : input_digests) inputs_obj[path] = digest;
  doc["inputs"] = std::move(inputs_obj);
  nlohmann::ordered_json timings_obj;
  for (const auto& [stage, ms] : timings_ms) timings_obj[stage] = ms;
  doc["timings_ms"] = std::move(timings_obj);
  out << doc.dump(2) << '\n';
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::uint64_t hash = 1469598103934665603ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 1099511628211ULL;
    }
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

}  // namespace coownet
