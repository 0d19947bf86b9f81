#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "setsumm/error.hpp"
#include "setsumm/ingest.hpp"

namespace setsumm::stats {

// 1 / Phi^{-1}(0.75): makes the MAD consistent with the SD for normal data.
inline constexpr double kMadConsistency = 1.4826;
inline constexpr double kDefaultMadCutoff = 3.5;

inline double median(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "median of an empty list");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

inline double mad(std::span<const double> values) {
  const double m = median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double x : values) dev.push_back(std::fabs(x - m));
  return median(dev);
}

// Modified z-score rule: flag x when |x - median| / (1.4826 * MAD) > cutoff.
// A zero MAD flags nothing.
inline std::vector<bool> detect_outliers(std::span<const double> values,
                                         double cutoff = kDefaultMadCutoff) {
  const double m = median(values);
  const double scale = kMadConsistency * mad(values);
  std::vector<bool> flags(values.size(), false);
  if (scale == 0.0) return flags;
  for (std::size_t i = 0; i < values.size(); ++i) {
    flags[i] = std::fabs(values[i] - m) / scale > cutoff;
  }
  return flags;
}

inline std::int64_t floor_to_5(double x) { return static_cast<std::int64_t>(std::floor(x / 5.0)) * 5; }
inline std::int64_t ceil_to_5(double x) { return static_cast<std::int64_t>(std::ceil(x / 5.0)) * 5; }
inline std::int64_t round_half_up_to_5(double x) {
  return static_cast<std::int64_t>(std::floor(x / 5.0 + 0.5)) * 5;
}

struct PriceCurve {
  std::size_t total_count = 0;
  std::size_t inlier_count = 0;
  std::int64_t inlier_lo = 0;
  std::int64_t inlier_hi = 0;
  std::int64_t median_rounded = 0;
  double median_raw = 0.0;
  double mad_raw = 0.0;

  friend bool operator==(const PriceCurve&, const PriceCurve&) = default;
};

inline PriceCurve price_curve(std::span<const double> prices, double cutoff = kDefaultMadCutoff) {
  if (prices.empty()) throw Error(Errc::EmptyInput, "price curve of an empty table");
  const auto flags = detect_outliers(prices, cutoff);
  double lo = 0.0;
  double hi = 0.0;
  std::size_t inliers = 0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (flags[i]) continue;
    if (inliers == 0 || prices[i] < lo) lo = prices[i];
    if (inliers == 0 || prices[i] > hi) hi = prices[i];
    ++inliers;
  }
  PriceCurve curve;
  curve.total_count = prices.size();
  curve.inlier_count = inliers;
  curve.inlier_lo = floor_to_5(lo);
  curve.inlier_hi = ceil_to_5(hi);
  curve.median_raw = median(prices);
  curve.mad_raw = mad(prices);
  curve.median_rounded = round_half_up_to_5(curve.median_raw);
  return curve;
}

inline PriceCurve price_curve(const ProductTable& table, double cutoff = kDefaultMadCutoff) {
  const auto prices = table.prices();
  return price_curve(std::span<const double>(prices), cutoff);
}

}  // namespace setsumm::stats
