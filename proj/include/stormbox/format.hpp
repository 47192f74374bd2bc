#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace stormbox {

/// Shortest decimal text that reads back to exactly `value` ("0", "0.25", "1e-07").
inline std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

/// Whole-token parse; rejects trailing characters and non-finite values.
inline std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (value != value || value - value != 0.0) return std::nullopt;
  return value;
}

}  // namespace stormbox
