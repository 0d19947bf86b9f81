#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "setsumm/cell.hpp"
#include "setsumm/csv.hpp"
#include "setsumm/error.hpp"
#include "setsumm/text.hpp"

namespace setsumm {

struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::Categorical;
  std::vector<Cell> values;

  friend bool operator==(const FeatureColumn&, const FeatureColumn&) = default;
};

struct Product {
  ProductId id;
  double price = 0.0;

  friend bool operator==(const Product&, const Product&) = default;
};

// Immutable products x features catalog. The price column is an ordinary
// Numeric feature column that is also mirrored into Product::price.
class ProductTable {
 public:
  ProductTable(std::string category, std::vector<Product> products,
               std::vector<FeatureColumn> features, std::string price_feature,
               std::vector<std::string> filters = {})
      : category_(std::move(category)),
        products_(std::move(products)),
        features_(std::move(features)),
        price_feature_(std::move(price_feature)),
        filters_(std::move(filters)) {
    for (const auto& f : features_) {
      if (f.values.size() != products_.size()) {
        throw Error(Errc::ParseError, "column '" + f.name + "' has " +
                                          std::to_string(f.values.size()) + " cells for " +
                                          std::to_string(products_.size()) + " products");
      }
    }
    if (!find(price_feature_)) throw Error(Errc::NoPriceColumn, "no column '" + price_feature_ + "'");
  }

  // Category as supplied at load time, without filter annotations.
  const std::string& base_category() const { return category_; }

  // Category annotated with the applied filter terms, e.g. "TVs [hdmi=true]".
  std::string category_name() const {
    if (filters_.empty()) return category_;
    std::string out = category_ + " [";
    for (std::size_t i = 0; i < filters_.size(); ++i) {
      if (i) out += "; ";
      out += filters_[i];
    }
    return out + "]";
  }

  const std::vector<std::string>& filter_terms() const { return filters_; }
  std::span<const Product> products() const { return products_; }
  std::span<const FeatureColumn> features() const { return features_; }
  const std::string& price_feature() const { return price_feature_; }
  std::size_t size() const { return products_.size(); }
  bool empty() const { return products_.empty(); }

  const FeatureColumn* find(std::string_view name) const {
    for (const auto& f : features_) {
      if (f.name == name) return &f;
    }
    return nullptr;
  }

  std::vector<double> prices() const {
    std::vector<double> out;
    out.reserve(products_.size());
    for (const auto& p : products_) out.push_back(p.price);
    return out;
  }

  std::optional<std::size_t> row_of(ProductId id) const {
    const auto it = std::lower_bound(products_.begin(), products_.end(), id,
                                     [](const Product& p, ProductId v) { return p.id < v; });
    if (it == products_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - products_.begin());
  }

  friend bool operator==(const ProductTable&, const ProductTable&) = default;

 private:
  std::string category_;
  std::vector<Product> products_;
  std::vector<FeatureColumn> features_;
  std::string price_feature_;
  std::vector<std::string> filters_;
};

// Boolean iff the case-folded values are all yes/no/true/false; Numeric iff at
// least 90% parse as numbers; Categorical otherwise.
inline FeatureKind infer_kind(std::span<const std::string> non_missing_values) {
  if (non_missing_values.empty()) return FeatureKind::Categorical;
  const bool all_bool = std::all_of(non_missing_values.begin(), non_missing_values.end(),
                                    [](const std::string& v) { return text::parse_bool(v).has_value(); });
  if (all_bool) return FeatureKind::Boolean;
  const auto numeric = static_cast<std::size_t>(
      std::count_if(non_missing_values.begin(), non_missing_values.end(),
                    [](const std::string& v) { return text::parse_number(v).has_value(); }));
  if (numeric * 10 >= non_missing_values.size() * 9) return FeatureKind::Numeric;
  return FeatureKind::Categorical;
}

inline Cell parse_cell(std::string_view raw, FeatureKind kind) {
  if (text::is_missing_token(raw)) return Missing{};
  switch (kind) {
    case FeatureKind::Boolean:
      if (auto b = text::parse_bool(raw)) return *b;
      return Missing{};
    case FeatureKind::Numeric:
      if (auto d = text::parse_number(raw)) return *d;
      return Missing{};
    case FeatureKind::Categorical:
      return std::string(text::trim(raw));
  }
  return Missing{};
}

struct LoadOptions {
  std::string category;
  std::optional<std::string> price_column;
};

// Parses a header + rows catalog. Rows without a usable non-negative price
// are dropped; the count is written to *dropped_rows when supplied. Product
// ids are 1-based and sequential over retained rows.
inline ProductTable load_table(std::string_view raw, const LoadOptions& options,
                               std::size_t* dropped_rows = nullptr) {
  if (text::trim(raw).empty()) throw Error(Errc::NoHeader, "input is empty");
  auto rows = csv::parse(raw);
  if (rows.empty()) throw Error(Errc::NoHeader, "input has no header row");

  std::vector<std::string> header;
  for (auto& name : rows.front()) header.emplace_back(text::trim(name));
  {
    std::unordered_set<std::string> seen;
    for (const auto& name : header) {
      if (!seen.insert(name).second) throw Error(Errc::ParseError, "duplicate column '" + name + "'");
    }
  }
  const std::size_t width = header.size();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw Error(Errc::ParseError, "row " + std::to_string(r + 1) + " has " +
                                        std::to_string(rows[r].size()) + " fields, expected " +
                                        std::to_string(width));
    }
  }

  std::optional<std::size_t> price_col;
  if (options.price_column) {
    const auto it = std::find(header.begin(), header.end(), *options.price_column);
    if (it == header.end()) {
      throw Error(Errc::NoPriceColumn, "price column '" + *options.price_column + "' not in header");
    }
    price_col = static_cast<std::size_t>(it - header.begin());
  } else {
    for (std::size_t c = 0; c < width; ++c) {
      if (text::fold(header[c]).find("price") != std::string::npos) {
        price_col = c;
        break;
      }
    }
    if (!price_col) throw Error(Errc::NoPriceColumn, "no header contains 'price'");
  }

  if (rows.size() < 2) throw Error(Errc::EmptyTable, "header has no data rows");

  std::vector<std::size_t> kept;
  std::vector<Product> products;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string& cell = rows[r][*price_col];
    if (text::is_missing_token(cell)) continue;
    const auto price = text::parse_number(cell);
    if (!price || *price < 0.0) continue;
    kept.push_back(r);
    products.push_back(Product{ProductId{static_cast<std::uint32_t>(products.size() + 1)}, *price});
  }
  if (dropped_rows) *dropped_rows = rows.size() - 1 - kept.size();
  if (products.empty()) throw Error(Errc::EmptyTable, "no row has a usable price");

  std::vector<FeatureColumn> features;
  features.reserve(width);
  for (std::size_t c = 0; c < width; ++c) {
    FeatureColumn col;
    col.name = header[c];
    if (c == *price_col) {
      col.kind = FeatureKind::Numeric;
      for (const auto& p : products) col.values.emplace_back(p.price);
    } else {
      std::vector<std::string> present;
      for (auto r : kept) {
        if (!text::is_missing_token(rows[r][c])) present.emplace_back(text::trim(rows[r][c]));
      }
      col.kind = infer_kind(present);
      col.values.reserve(kept.size());
      for (auto r : kept) col.values.push_back(parse_cell(rows[r][c], col.kind));
    }
    features.push_back(std::move(col));
  }
  return ProductTable(options.category, std::move(products), std::move(features), header[*price_col]);
}

// Canonical serialization: header row, then one row per product. Booleans
// print as yes/no, numbers in shortest round-trip form, Missing as empty.
inline std::string to_csv(const ProductTable& table) {
  std::string out;
  csv::Row row;
  for (const auto& f : table.features()) row.push_back(f.name);
  csv::append_row(out, row);
  for (std::size_t r = 0; r < table.size(); ++r) {
    row.clear();
    for (const auto& f : table.features()) {
      const Cell& cell = f.values[r];
      if (const bool* b = std::get_if<bool>(&cell)) row.emplace_back(*b ? "yes" : "no");
      else row.push_back(format_cell(cell));
    }
    csv::append_row(out, row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering

struct Equals {
  Cell value;
};
struct InRange {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};
struct HasFeature {};

struct FilterPredicate {
  std::string feature;
  std::variant<Equals, InRange, HasFeature> constraint;
};

inline std::string describe(const FilterPredicate& p) {
  struct Visitor {
    const std::string& name;
    std::string operator()(const Equals& e) const { return name + "=" + format_cell(e.value); }
    std::string operator()(const InRange& r) const {
      std::string out = name + "=";
      if (std::isfinite(r.lo)) out += format_number(r.lo);
      out += "..";
      if (std::isfinite(r.hi)) out += format_number(r.hi);
      return out;
    }
    std::string operator()(const HasFeature&) const { return name; }
  };
  return std::visit(Visitor{p.feature}, p.constraint);
}

namespace detail {

inline bool cell_matches_kind(const Cell& c, FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Boolean: return std::holds_alternative<bool>(c);
    case FeatureKind::Numeric: return std::holds_alternative<double>(c);
    case FeatureKind::Categorical: return std::holds_alternative<std::string>(c);
  }
  return false;
}

inline const FeatureColumn& checked_column(const ProductTable& table, const FilterPredicate& p) {
  const FeatureColumn* col = table.find(p.feature);
  if (!col) throw Error(Errc::UnknownFeature, "no feature '" + p.feature + "'");
  if (const auto* eq = std::get_if<Equals>(&p.constraint)) {
    if (!cell_matches_kind(eq->value, col->kind)) {
      throw Error(Errc::KindMismatch, "value '" + format_cell(eq->value) + "' does not fit " +
                                          std::string(to_string(col->kind)) + " feature '" +
                                          p.feature + "'");
    }
  } else if (std::holds_alternative<InRange>(p.constraint) && col->kind != FeatureKind::Numeric) {
    throw Error(Errc::KindMismatch, "range on non-numeric feature '" + p.feature + "'");
  }
  return *col;
}

inline bool keep(const Cell& cell, const FilterPredicate& p) {
  if (is_missing(cell)) return false;
  if (const auto* eq = std::get_if<Equals>(&p.constraint)) return cell == eq->value;
  if (const auto* r = std::get_if<InRange>(&p.constraint)) {
    const double v = std::get<double>(cell);
    return r->lo <= v && v <= r->hi;
  }
  if (const bool* b = std::get_if<bool>(&cell)) return *b;
  return true;
}

}  // namespace detail

// Conjunction of predicates. Missing cells never satisfy a predicate.
inline ProductTable filter(const ProductTable& table, std::span<const FilterPredicate> predicates) {
  if (predicates.empty()) return table;
  std::vector<const FeatureColumn*> cols;
  for (const auto& p : predicates) cols.push_back(&detail::checked_column(table, p));

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < table.size(); ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < predicates.size() && ok; ++i) ok = detail::keep(cols[i]->values[r], predicates[i]);
    if (ok) rows.push_back(r);
  }

  std::vector<Product> products;
  products.reserve(rows.size());
  for (auto r : rows) products.push_back(table.products()[r]);
  std::vector<FeatureColumn> features;
  for (const auto& f : table.features()) {
    FeatureColumn col{f.name, f.kind, {}};
    col.values.reserve(rows.size());
    for (auto r : rows) col.values.push_back(f.values[r]);
    features.push_back(std::move(col));
  }
  std::vector<std::string> terms = table.filter_terms();
  for (const auto& p : predicates) terms.push_back(describe(p));
  return ProductTable(table.base_category(), std::move(products), std::move(features),
                      table.price_feature(), std::move(terms));
}

inline ProductTable filter(const ProductTable& table, std::initializer_list<FilterPredicate> predicates) {
  return filter(table, std::span<const FilterPredicate>(predicates.begin(), predicates.size()));
}

// Parses the conjunctive query syntax: `feature=value`, `feature=lo..hi`
// (either bound may be omitted) or a bare `feature`, separated by ';'.
inline std::vector<FilterPredicate> parse_filter_query(const ProductTable& table, std::string_view query) {
  std::vector<FilterPredicate> out;
  while (!query.empty()) {
    const auto semi = query.find(';');
    const std::string_view term = text::trim(query.substr(0, semi));
    query = semi == std::string_view::npos ? std::string_view{} : query.substr(semi + 1);
    if (term.empty()) continue;

    const auto eq = term.find('=');
    FilterPredicate p;
    p.feature = std::string(text::trim(term.substr(0, eq)));
    if (p.feature.empty()) throw Error(Errc::ParseError, "empty feature name in '" + std::string(term) + "'");
    const FeatureColumn* col = table.find(p.feature);
    if (!col) throw Error(Errc::UnknownFeature, "no feature '" + p.feature + "'");

    if (eq == std::string_view::npos) {
      p.constraint = HasFeature{};
      out.push_back(std::move(p));
      continue;
    }
    const std::string_view value = text::trim(term.substr(eq + 1));
    if (value.empty()) throw Error(Errc::ParseError, "empty value for '" + p.feature + "'");
    const auto dots = value.find("..");
    if (dots != std::string_view::npos) {
      if (col->kind != FeatureKind::Numeric) {
        throw Error(Errc::KindMismatch, "range on non-numeric feature '" + p.feature + "'");
      }
      InRange range;
      const auto lo = text::trim(value.substr(0, dots));
      const auto hi = text::trim(value.substr(dots + 2));
      if (!lo.empty()) {
        auto v = text::parse_number(lo);
        if (!v) throw Error(Errc::ParseError, "bad range bound '" + std::string(lo) + "'");
        range.lo = *v;
      }
      if (!hi.empty()) {
        auto v = text::parse_number(hi);
        if (!v) throw Error(Errc::ParseError, "bad range bound '" + std::string(hi) + "'");
        range.hi = *v;
      }
      p.constraint = range;
    } else {
      Cell cell = Missing{};
      switch (col->kind) {
        case FeatureKind::Boolean:
          if (auto b = text::parse_bool(value)) cell = *b;
          break;
        case FeatureKind::Numeric:
          if (auto d = text::parse_number(value)) cell = *d;
          break;
        case FeatureKind::Categorical:
          cell = std::string(value);
          break;
      }
      if (is_missing(cell)) {
        throw Error(Errc::KindMismatch, "'" + std::string(value) + "' is not a valid " +
                                            std::string(to_string(col->kind)) + " value for '" +
                                            p.feature + "'");
      }
      p.constraint = Equals{std::move(cell)};
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace setsumm
