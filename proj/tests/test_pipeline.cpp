#include <gtest/gtest.h>

#include <string>

#include "setsumm/pipeline.hpp"
#include "setsumm/serialize.hpp"
#include "setsumm/synthetic.hpp"

using namespace setsumm;
using realize::Mode;

namespace {

const ProductTable& tvs() {
  static const ProductTable t = load_table(synthetic::tv_catalog_csv(), {"32 inch TVs", std::nullopt});
  return t;
}

Errc config_error(SummaryConfig c) {
  try {
    validate(c);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ParseError;
}

}  // namespace

TEST(Synthetic, ShapeAndDeterminism) {
  const std::string a = synthetic::tv_catalog_csv();
  EXPECT_EQ(a, synthetic::tv_catalog_csv());
  EXPECT_NE(a, synthetic::tv_catalog_csv(1));
  std::size_t dropped = 0;
  const auto t = load_table(a, {"TVs", std::nullopt}, &dropped);
  EXPECT_EQ(t.size() + dropped, 363u);
  EXPECT_EQ(t.features().size(), 18u);
  EXPECT_EQ(t.find("smart TV")->kind, FeatureKind::Boolean);
  EXPECT_EQ(t.find("resolution")->kind, FeatureKind::Categorical);
  EXPECT_EQ(t.find("brightness")->kind, FeatureKind::Numeric);
}

TEST(Pipeline, FullSummaryOnSyntheticCatalog) {
  const auto doc = build_document(tvs(), Mode::Full);
  EXPECT_EQ(doc.category, "32 inch TVs");
  EXPECT_EQ(doc.curve.total_count, tvs().size());
  EXPECT_LT(doc.curve.inlier_count, doc.curve.total_count);  // luxury outliers present
  EXPECT_EQ(doc.common.size(), 7u);
  EXPECT_EQ(doc.impact.size(), 7u);
  EXPECT_FALSE(doc.contrast.has_value());
  EXPECT_FALSE(doc.directions.has_value());
  const std::string text = realize::render(doc);
  EXPECT_EQ(text.rfind("For 32 inch TVs, the price of most products (", 0), 0u);
  EXPECT_EQ(text, summarize(tvs(), Mode::Full));
}

TEST(Pipeline, BaselineStopsAfterPriceCurve) {
  const auto doc = build_document(tvs(), Mode::Baseline);
  EXPECT_TRUE(doc.common.empty());
  EXPECT_TRUE(doc.impact.empty());
  EXPECT_EQ(summarize(tvs(), Mode::Baseline).find('\n'), std::string::npos);
}

TEST(Pipeline, ExtendedAddsDirectionsAndContrast) {
  const auto smart = filter(tvs(), {FilterPredicate{"smart TV", Equals{true}}});
  const auto doc = build_document(smart, Mode::Extended, {}, &tvs());
  EXPECT_EQ(doc.category, "32 inch TVs [smart TV=true]");
  EXPECT_EQ(doc.superset_category, "32 inch TVs");
  ASSERT_TRUE(doc.contrast.has_value());
  ASSERT_TRUE(doc.directions.has_value());
  // the filter column is 100% in the target, well below that in the catalog
  const auto it = std::find_if(doc.contrast->begin(), doc.contrast->end(),
                               [](const analysis::ContrastItem& c) { return c.feature == "smart TV"; });
  ASSERT_NE(it, doc.contrast->end());
  EXPECT_EQ(it->target_prevalence, 1.0);
  for (const auto& d : *doc.directions) {
    const auto p = std::find_if(doc.impact.begin(), doc.impact.end(),
                                [&](const analysis::FeatureProfile& f) { return f.feature == d.feature; });
    ASSERT_NE(p, doc.impact.end());
    EXPECT_EQ(p->direction, d.direction);
  }
  EXPECT_NE(realize::render(doc).find("compared to 32 inch TVs."), std::string::npos);
}

TEST(Pipeline, DocumentJsonRoundTrip) {
  const auto smart = filter(tvs(), {FilterPredicate{"smart TV", Equals{true}}});
  for (Mode m : {Mode::Baseline, Mode::Full, Mode::Extended}) {
    const auto doc = build_document(smart, m, {}, &tvs());
    const json j = doc;
    const auto back = json::parse(j.dump()).get<realize::SummaryDocument>();
    EXPECT_EQ(back, doc);
    EXPECT_EQ(realize::render(back), realize::render(doc));
  }
}

TEST(Pipeline, ConfigValidation) {
  SummaryConfig c;
  EXPECT_NO_THROW(validate(c));
  c.analysis.top_k = 0;
  EXPECT_EQ(config_error(c), Errc::InvalidConfig);
  c = {};
  c.analysis.min_support = 0;
  EXPECT_EQ(config_error(c), Errc::InvalidConfig);
  c = {};
  c.mad_cutoff = 0;
  EXPECT_EQ(config_error(c), Errc::InvalidConfig);
  c = {};
  c.analysis.bands.many = 0.8;  // above most
  EXPECT_EQ(config_error(c), Errc::InvalidConfig);
  c = {};
  c.analysis.direction_margin = 1.0;
  EXPECT_EQ(config_error(c), Errc::InvalidConfig);
  c = {};
  c.analysis.contrast_delta = 0.0;
  EXPECT_EQ(config_error(c), Errc::InvalidConfig);
}

TEST(Pipeline, TopKLimitsBothLists) {
  SummaryConfig c;
  c.analysis.top_k = 3;
  const auto doc = build_document(tvs(), Mode::Full, c);
  EXPECT_EQ(doc.common.size(), 3u);
  EXPECT_EQ(doc.impact.size(), 3u);
}
