#pragma once

#include <charconv>
#include <span>
#include <string>
#include <system_error>

namespace rcbbo {

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buffer, ptr);
}

inline std::string join_numbers(std::span<const double> values, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out.push_back(sep);
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace rcbbo
