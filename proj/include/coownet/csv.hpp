#ifndef COOWNET_CSV_HPP
#define COOWNET_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coownet::csv {

// Minimal RFC-4180 style CSV: comma separated, optional double-quoting,
// "" escapes a quote inside a quoted field, rows end with \n or \r\n.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index for a header name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

Table read(std::istream& in);

std::string escape(std::string_view field);
void write_row(std::ostream& out, std::span<const std::string> fields);

// Locale-independent numeric conversions. Whole string must parse.
std::optional<double> to_double(std::string_view s);
std::optional<long long> to_int(std::string_view s);

// Shortest round-trip representation (std::to_chars).
std::string format_double(double v);

}  // namespace coownet::csv

#endif
