#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setsumm/analysis.hpp"
#include "setsumm/error.hpp"
#include "setsumm/stats.hpp"

namespace setsumm::realize {

enum class Mode { Baseline, Full, Extended };

constexpr std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Baseline: return "baseline";
    case Mode::Full: return "full";
    case Mode::Extended: return "extended";
  }
  return "";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "baseline") return Mode::Baseline;
  if (s == "full") return Mode::Full;
  if (s == "extended") return Mode::Extended;
  return std::nullopt;
}

struct DirectionEntry {
  std::string feature;
  Cell value;
  analysis::Direction direction = analysis::Direction::NoClearEffect;

  friend bool operator==(const DirectionEntry&, const DirectionEntry&) = default;
};

// Language-neutral content plan. Every number that reaches the text is read
// from a field here; templates do no arithmetic.
struct SummaryDocument {
  Mode mode = Mode::Full;
  std::string category;
  stats::PriceCurve curve;
  std::vector<analysis::CommonFeature> common;
  std::vector<analysis::FeatureProfile> impact;
  std::optional<std::vector<analysis::ContrastItem>> contrast;
  std::string superset_category;
  std::optional<std::vector<DirectionEntry>> directions;

  friend bool operator==(const SummaryDocument&, const SummaryDocument&) = default;
};

struct RenderOptions {
  // Off reproduces the historical output whose list paragraphs carry no
  // closing period.
  bool terminal_period = true;
};

// Boolean features render as their name, categorical values as
// "{value} {name}", numeric values as "{name} {value}".
inline std::string render_feature_value(std::string_view feature, const Cell& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s + " " + std::string(feature);
  if (const auto* d = std::get_if<double>(&value)) return std::string(feature) + " " + format_number(*d);
  if (const bool* b = std::get_if<bool>(&value); b && !*b) return "no " + std::string(feature);
  return std::string(feature);
}

// One item: "A"; two: "A and B"; three or more: "A, B, and C".
inline std::string join_list(std::span<const std::string> items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) {
      if (items.size() == 2) out += " and ";
      else if (i + 1 == items.size()) out += ", and ";
      else out += ", ";
    }
    out += items[i];
  }
  return out;
}

inline std::string render_intro(std::string_view category, const stats::PriceCurve& curve) {
  return "For " + std::string(category) + ", the price of most products (" +
         std::to_string(curve.inlier_count) + " out of " + std::to_string(curve.total_count) +
         " models) falls in the range of " + std::to_string(curve.inlier_lo) + "-" +
         std::to_string(curve.inlier_hi) + " pounds with a median price of about " +
         std::to_string(curve.median_rounded) + " pounds.";
}

inline std::string render_common(std::string_view category,
                                 std::span<const analysis::CommonFeature> common,
                                 const RenderOptions& options = {}) {
  if (common.empty()) throw Error(Errc::EmptyList, "no common features to render");
  std::vector<std::string> items;
  for (const auto& c : common) items.push_back(render_feature_value(c.feature, c.value));
  std::string out = "Most " + std::string(category) + " have following features: " + join_list(items);
  if (options.terminal_period) out += ".";
  return out;
}

inline std::string render_impact(std::string_view category,
                                 std::span<const analysis::FeatureProfile> impact,
                                 const RenderOptions& options = {}) {
  if (impact.empty()) throw Error(Errc::EmptyList, "no impact features to render");
  std::vector<std::string> names;
  for (const auto& f : impact) names.push_back(f.feature);
  std::string out = "The features that have a strong impact on the price of " + std::string(category) +
                    " are: " + join_list(names);
  if (options.terminal_period) out += ".";
  return out;
}

// Quantified, contrast and price-direction sentences for the extended mode,
// joined into one paragraph. Returns an empty string when there is nothing
// to say.
inline std::string render_extended(const SummaryDocument& doc) {
  if (doc.mode != Mode::Extended) throw Error(Errc::WrongMode, "extended sentences need an extended document");
  std::vector<std::string> sentences;
  for (const auto& c : doc.common) {
    sentences.push_back(std::string(analysis::phrase(c.quantifier)) + " " + doc.category +
                        " in this category have " + render_feature_value(c.feature, c.value) + ".");
  }
  if (doc.contrast) {
    for (const auto& c : *doc.contrast) {
      sentences.push_back(std::string(analysis::phrase(c.quantifier)) + " " + doc.category + " in this category have " +
                          render_feature_value(c.feature, c.value) + " compared to " +
                          doc.superset_category + ".");
    }
  }
  if (doc.directions) {
    for (const auto& d : *doc.directions) {
      if (d.direction == analysis::Direction::NoClearEffect) continue;
      const char* verdict = d.direction == analysis::Direction::MoreExpensive ? "more expensive" : "cheaper";
      sentences.push_back(doc.category + " with " + render_feature_value(d.feature, d.value) + " are " +
                          verdict + " in average.");
    }
  }
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += " ";
    out += s;
  }
  return out;
}

// Paragraphs separated by one blank line, no trailing newline. Empty feature
// lists drop their paragraph instead of failing, so small filtered sets still
// summarize.
inline std::string render(const SummaryDocument& doc, const RenderOptions& options = {}) {
  if (doc.mode != Mode::Extended && (doc.contrast || doc.directions)) {
    throw Error(Errc::WrongMode, "contrast and directions are only valid in extended mode");
  }
  std::vector<std::string> paragraphs{render_intro(doc.category, doc.curve)};
  if (doc.mode != Mode::Baseline) {
    if (!doc.common.empty()) paragraphs.push_back(render_common(doc.category, doc.common, options));
    if (!doc.impact.empty()) paragraphs.push_back(render_impact(doc.category, doc.impact, options));
  }
  if (doc.mode == Mode::Extended) {
    if (auto extra = render_extended(doc); !extra.empty()) paragraphs.push_back(std::move(extra));
  }
  std::string out;
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    if (i) out += "\n\n";
    out += paragraphs[i];
  }
  return out;
}

}  // namespace setsumm::realize
