#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "setsumm/error.hpp"
#include "setsumm/ingest.hpp"

namespace setsumm::analysis {

enum class Quantifier { Most, Many, Some, OnlyAFew };

constexpr std::string_view phrase(Quantifier q) {
  switch (q) {
    case Quantifier::Most: return "Most";
    case Quantifier::Many: return "Many";
    case Quantifier::Some: return "Some";
    case Quantifier::OnlyAFew: return "Only a few";
  }
  return "";
}

// Inclusive lower bounds of the Most / Many / Some bands.
struct QuantifierBands {
  double most = 0.75;
  double many = 0.50;
  double some = 0.25;
};

inline Quantifier quantifier(double prevalence, const QuantifierBands& bands = {}) {
  if (!(prevalence > 0.0) || prevalence > 1.0) {
    throw Error(Errc::OutOfRange, "prevalence " + format_number(prevalence) + " outside (0, 1]");
  }
  if (prevalence >= bands.most) return Quantifier::Most;
  if (prevalence >= bands.many) return Quantifier::Many;
  if (prevalence >= bands.some) return Quantifier::Some;
  return Quantifier::OnlyAFew;
}

enum class Direction { MoreExpensive, Cheaper, NoClearEffect };

constexpr std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::MoreExpensive: return "more_expensive";
    case Direction::Cheaper: return "cheaper";
    case Direction::NoClearEffect: return "no_clear_effect";
  }
  return "";
}

struct CommonFeature {
  std::string feature;
  FeatureKind kind = FeatureKind::Categorical;
  Cell value;
  double prevalence = 0.0;
  Quantifier quantifier = Quantifier::Most;

  friend bool operator==(const CommonFeature&, const CommonFeature&) = default;
};

struct GroupMean {
  Cell value;
  double mean = 0.0;
  std::size_t support = 0;

  friend bool operator==(const GroupMean&, const GroupMean&) = default;
};

struct FeatureProfile {
  std::string feature;
  FeatureKind kind = FeatureKind::Categorical;
  Cell modal_value;
  double prevalence = 0.0;
  std::vector<GroupMean> group_means;  // qualifying groups only, ordered by value
  double impact_score = 0.0;
  std::optional<Direction> direction;

  friend bool operator==(const FeatureProfile&, const FeatureProfile&) = default;
};

struct ContrastItem {
  std::string feature;
  Cell value;
  double target_prevalence = 0.0;
  double superset_prevalence = 0.0;
  Quantifier quantifier = Quantifier::Most;  // band of target_prevalence

  double difference() const { return target_prevalence - superset_prevalence; }
  friend bool operator==(const ContrastItem&, const ContrastItem&) = default;
};

struct DirectionResult {
  std::string feature;
  Cell value;  // the "with" side: true for Boolean, the modal value otherwise
  Direction direction = Direction::NoClearEffect;
  double mean_with = 0.0;
  double mean_without = 0.0;
  std::size_t support_with = 0;
  std::size_t support_without = 0;
};

struct AnalysisConfig {
  std::size_t top_k = 7;
  std::size_t min_support = 5;
  QuantifierBands bands;
  double direction_margin = 0.10;  // more expensive at >= 1.10x, cheaper at <= 0.90x
  double contrast_delta = 0.25;
  bool normalize_impact = false;   // divide impact SD by the table's mean price
};

namespace detail {

struct Mode {
  Cell value;
  std::size_t count = 0;
  std::size_t present = 0;
  std::map<Cell, std::size_t> counts;
};

// Most frequent non-missing value; ties resolve to the smallest value.
inline std::optional<Mode> modal(const FeatureColumn& col) {
  Mode m;
  for (const auto& c : col.values) {
    if (is_missing(c)) continue;
    ++m.counts[c];
    ++m.present;
  }
  if (m.present == 0) return std::nullopt;
  for (const auto& [value, count] : m.counts) {
    if (count > m.count) {
      m.value = value;
      m.count = count;
    }
  }
  return m;
}

// Sum in ascending order so the mean is independent of row order.
inline double sorted_mean(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double population_sd(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mu = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

inline void require_rows(const ProductTable& table) {
  if (table.empty()) throw Error(Errc::EmptyInput, "table has no products");
}

}  // namespace detail

// Most prevalent value per non-price, non-numeric feature. A Boolean feature
// qualifies only when its modal value is true.
inline std::vector<CommonFeature> common_features(const ProductTable& table, std::size_t k = 7,
                                                  const QuantifierBands& bands = {}) {
  detail::require_rows(table);
  std::vector<CommonFeature> out;
  for (const auto& col : table.features()) {
    if (col.name == table.price_feature() || col.kind == FeatureKind::Numeric) continue;
    auto m = detail::modal(col);
    if (!m) continue;
    if (col.kind == FeatureKind::Boolean && m->value != Cell{true}) continue;
    const double prevalence = static_cast<double>(m->count) / static_cast<double>(m->present);
    out.push_back({col.name, col.kind, m->value, prevalence, quantifier(prevalence, bands)});
  }
  std::sort(out.begin(), out.end(), [](const CommonFeature& a, const CommonFeature& b) {
    if (a.prevalence != b.prevalence) return a.prevalence > b.prevalence;
    return a.feature < b.feature;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

// Ranks features by the population SD of per-value mean prices. Groups with
// fewer than min_support products are dropped; features left with fewer than
// two groups are skipped.
inline std::vector<FeatureProfile> price_impact(const ProductTable& table, std::size_t k = 7,
                                                std::size_t min_support = 5,
                                                bool normalize = false) {
  detail::require_rows(table);
  double mean_price = 1.0;
  if (normalize) {
    mean_price = detail::sorted_mean(table.prices());
    if (!(mean_price > 0.0)) mean_price = 1.0;
  }

  std::vector<FeatureProfile> out;
  for (const auto& col : table.features()) {
    if (col.name == table.price_feature()) continue;
    std::map<Cell, std::vector<double>> groups;
    for (std::size_t r = 0; r < table.size(); ++r) {
      if (!is_missing(col.values[r])) groups[col.values[r]].push_back(table.products()[r].price);
    }
    FeatureProfile profile;
    profile.feature = col.name;
    profile.kind = col.kind;
    std::vector<double> means;
    for (auto& [value, prices] : groups) {
      if (prices.size() < min_support) continue;
      const std::size_t support = prices.size();
      const double mean = detail::sorted_mean(std::move(prices));
      profile.group_means.push_back({value, mean, support});
      means.push_back(mean);
    }
    if (means.size() < 2) continue;
    const auto m = detail::modal(col);
    profile.modal_value = m->value;
    profile.prevalence = static_cast<double>(m->count) / static_cast<double>(m->present);
    profile.impact_score = detail::population_sd(std::move(means)) / mean_price;
    out.push_back(std::move(profile));
  }
  std::sort(out.begin(), out.end(), [](const FeatureProfile& a, const FeatureProfile& b) {
    if (a.impact_score != b.impact_score) return a.impact_score > b.impact_score;
    return a.feature < b.feature;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

// Feature values at least delta more prevalent in target than in superset,
// largest difference first. Numeric features are not contrasted; Boolean
// features contribute only their true value.
inline std::vector<ContrastItem> superset_contrast(const ProductTable& target,
                                                   const ProductTable& superset,
                                                   double delta = 0.25,
                                                   const QuantifierBands& bands = {}) {
  if (target.empty() || superset.empty()) throw Error(Errc::EmptyInput, "contrast needs non-empty tables");
  std::vector<ContrastItem> out;
  for (const auto& col : target.features()) {
    const FeatureColumn* other = superset.find(col.name);
    if (!other) throw Error(Errc::FeatureMismatch, "superset lacks feature '" + col.name + "'");
    if (other->kind != col.kind) {
      throw Error(Errc::FeatureMismatch, "feature '" + col.name + "' has a different kind in the superset");
    }
    if (col.name == target.price_feature() || col.kind == FeatureKind::Numeric) continue;
    const auto mine = detail::modal(col);
    if (!mine) continue;
    const auto theirs = detail::modal(*other);
    for (const auto& [value, count] : mine->counts) {
      if (col.kind == FeatureKind::Boolean && value != Cell{true}) continue;
      const double tp = static_cast<double>(count) / static_cast<double>(mine->present);
      double sp = 0.0;
      if (theirs) {
        const auto it = theirs->counts.find(value);
        if (it != theirs->counts.end()) sp = static_cast<double>(it->second) / static_cast<double>(theirs->present);
      }
      if (tp - sp >= delta - 1e-12) out.push_back({col.name, value, tp, sp, quantifier(tp, bands)});
    }
  }
  std::sort(out.begin(), out.end(), [](const ContrastItem& a, const ContrastItem& b) {
    if (a.difference() != b.difference()) return a.difference() > b.difference();
    if (a.feature != b.feature) return a.feature < b.feature;
    return a.value < b.value;
  });
  return out;
}

// Compares mean price of products with the feature (Boolean true, or the
// modal value) against the rest.
inline DirectionResult price_direction(const ProductTable& table, std::string_view feature,
                                       std::size_t min_support = 5, double margin = 0.10) {
  const FeatureColumn* col = table.find(feature);
  if (!col) throw Error(Errc::UnknownFeature, "no feature '" + std::string(feature) + "'");
  DirectionResult res;
  res.feature = col->name;
  if (col->kind == FeatureKind::Boolean) {
    res.value = true;
  } else {
    const auto m = detail::modal(*col);
    if (!m) throw Error(Errc::InsufficientSupport, "feature '" + col->name + "' has no values");
    res.value = m->value;
  }
  std::vector<double> with;
  std::vector<double> without;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const Cell& c = col->values[r];
    if (is_missing(c)) continue;
    (c == res.value ? with : without).push_back(table.products()[r].price);
  }
  res.support_with = with.size();
  res.support_without = without.size();
  if (with.size() < min_support || without.size() < min_support || with.empty() || without.empty()) {
    throw Error(Errc::InsufficientSupport,
                "feature '" + col->name + "' partitions have " + std::to_string(with.size()) + " and " +
                    std::to_string(without.size()) + " products, need " + std::to_string(min_support));
  }
  res.mean_with = detail::sorted_mean(std::move(with));
  res.mean_without = detail::sorted_mean(std::move(without));
  const double slack = 1e-12 * std::fabs(res.mean_without);
  if (res.mean_with >= (1.0 + margin) * res.mean_without - slack) {
    res.direction = Direction::MoreExpensive;
  } else if (res.mean_with <= (1.0 - margin) * res.mean_without + slack) {
    res.direction = Direction::Cheaper;
  } else {
    res.direction = Direction::NoClearEffect;
  }
  return res;
}

}  // namespace setsumm::analysis
