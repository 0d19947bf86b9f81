#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace setsumm::text {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// ASCII case fold; non-ASCII bytes pass through unchanged.
inline std::string fold(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
  });
  return out;
}

inline bool is_missing_token(std::string_view raw) {
  const std::string f = fold(trim(raw));
  return f.empty() || f == "n/a" || f == "na" || f == "-" || f == "\xE2\x80\x94";
}

inline std::optional<bool> parse_bool(std::string_view raw) {
  const std::string f = fold(trim(raw));
  if (f == "yes" || f == "true") return true;
  if (f == "no" || f == "false") return false;
  return std::nullopt;
}

namespace detail {

inline bool strip_prefix(std::string_view& s, std::string_view p) {
  if (s.substr(0, p.size()) == p) {
    s.remove_prefix(p.size());
    return true;
  }
  return false;
}

inline bool strip_suffix(std::string_view& s, std::string_view p) {
  if (s.size() >= p.size() && s.substr(s.size() - p.size()) == p) {
    s.remove_suffix(p.size());
    return true;
  }
  return false;
}

constexpr std::array<std::string_view, 3> kCurrency = {"\xC2\xA3", "$", "\xE2\x82\xAC"};

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Removes thousands separators from the integer part. Grouping must be
// exact (1-3 leading digits, then groups of 3) or the value is rejected.
inline std::optional<std::string> ungroup(std::string_view s) {
  const auto point = s.find_first_of(".eE");
  const std::string_view int_part = s.substr(0, point);
  const std::string_view rest = point == std::string_view::npos ? std::string_view{} : s.substr(point);
  if (rest.find(',') != std::string_view::npos) return std::nullopt;
  if (int_part.find(',') == std::string_view::npos) return std::string(s);

  std::string digits;
  std::size_t group = 0;
  bool first = true;
  for (char c : int_part) {
    if (c == ',') {
      if ((first && (group == 0 || group > 3)) || (!first && group != 3)) return std::nullopt;
      first = false;
      group = 0;
    } else if (is_digit(c)) {
      digits.push_back(c);
      ++group;
    } else {
      return std::nullopt;
    }
  }
  if (group != 3) return std::nullopt;
  return digits + std::string(rest);
}

}  // namespace detail

// Parses a finite decimal number after stripping one currency symbol (either
// side, after any sign) and thousands separators. "£1,299.00" -> 1299.
inline std::optional<double> parse_number(std::string_view raw) {
  std::string_view s = trim(raw);
  bool negative = false;
  if (detail::strip_prefix(s, "-")) negative = true;
  else detail::strip_prefix(s, "+");
  s = trim(s);

  for (auto sym : detail::kCurrency) {
    if (detail::strip_prefix(s, sym) || detail::strip_suffix(s, sym)) break;
  }
  s = trim(s);
  if (s.empty() || !(detail::is_digit(s.front()) || s.front() == '.')) return std::nullopt;

  const auto plain = detail::ungroup(s);
  if (!plain) return std::nullopt;

  double value = 0.0;
  const char* first = plain->data();
  const char* last = first + plain->size();
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return negative ? -value : value;
}

}  // namespace setsumm::text
