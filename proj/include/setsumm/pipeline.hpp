#pragma once

#include <optional>
#include <string>

#include "setsumm/analysis.hpp"
#include "setsumm/error.hpp"
#include "setsumm/ingest.hpp"
#include "setsumm/realize.hpp"
#include "setsumm/stats.hpp"

namespace setsumm {

struct SummaryConfig {
  analysis::AnalysisConfig analysis;
  double mad_cutoff = stats::kDefaultMadCutoff;
  realize::RenderOptions render;
};

inline void validate(const SummaryConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(Errc::InvalidConfig, msg); };
  const auto& a = c.analysis;
  if (a.top_k < 1 || a.top_k > 1000) fail("top_k must be in [1, 1000]");
  if (a.min_support < 1) fail("min_support must be >= 1");
  if (!(c.mad_cutoff > 0.0)) fail("mad_cutoff must be > 0");
  if (!(0.0 < a.bands.some && a.bands.some < a.bands.many && a.bands.many < a.bands.most && a.bands.most <= 1.0)) {
    fail("quantifier thresholds must satisfy 0 < some < many < most <= 1");
  }
  if (!(a.direction_margin > 0.0 && a.direction_margin < 1.0)) fail("direction margin must be in (0, 1)");
  if (!(a.contrast_delta > 0.0 && a.contrast_delta <= 1.0)) fail("contrast delta must be in (0, 1]");
}

// ingest -> stats -> analysis, producing the content plan for the realizer.
// The superset, when given, feeds the extended mode's contrast sentences.
inline realize::SummaryDocument build_document(const ProductTable& target, realize::Mode mode,
                                               const SummaryConfig& config = {},
                                               const ProductTable* superset = nullptr,
                                               std::optional<std::string> superset_category = std::nullopt) {
  validate(config);
  const auto& a = config.analysis;
  realize::SummaryDocument doc;
  doc.mode = mode;
  doc.category = target.category_name();
  doc.curve = stats::price_curve(target, config.mad_cutoff);
  if (mode == realize::Mode::Baseline) return doc;

  doc.common = analysis::common_features(target, a.top_k, a.bands);
  doc.impact = analysis::price_impact(target, a.top_k, a.min_support, a.normalize_impact);
  if (mode != realize::Mode::Extended) return doc;

  std::vector<realize::DirectionEntry> directions;
  for (auto& profile : doc.impact) {
    try {
      const auto d = analysis::price_direction(target, profile.feature, a.min_support, a.direction_margin);
      profile.direction = d.direction;
      directions.push_back({d.feature, d.value, d.direction});
    } catch (const Error& e) {
      if (e.code() != Errc::InsufficientSupport) throw;
    }
  }
  doc.directions = std::move(directions);
  if (superset) {
    doc.contrast = analysis::superset_contrast(target, *superset, a.contrast_delta, a.bands);
    doc.superset_category = superset_category.value_or(superset->category_name());
  }
  return doc;
}

inline std::string summarize(const ProductTable& target, realize::Mode mode, const SummaryConfig& config = {},
                             const ProductTable* superset = nullptr,
                             std::optional<std::string> superset_category = std::nullopt) {
  return realize::render(build_document(target, mode, config, superset, std::move(superset_category)),
                         config.render);
}

}  // namespace setsumm
