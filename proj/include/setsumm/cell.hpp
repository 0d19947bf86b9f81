#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace setsumm {

enum class FeatureKind { Boolean, Categorical, Numeric };

constexpr std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Boolean: return "boolean";
    case FeatureKind::Categorical: return "categorical";
    case FeatureKind::Numeric: return "numeric";
  }
  return "unknown";
}

struct Missing {
  friend constexpr bool operator==(Missing, Missing) { return true; }
  friend constexpr auto operator<=>(Missing, Missing) { return std::strong_ordering::equal; }
};

// One table cell. Variant order defines the cross-type ordering used for
// deterministic tie-breaking: Missing < Bool < Number < Text.
using Cell = std::variant<Missing, bool, double, std::string>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<Missing>(c); }

// Shortest text that parses back to the same double; integers print bare.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(Missing) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

struct ProductId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(ProductId, ProductId) = default;
};

}  // namespace setsumm
