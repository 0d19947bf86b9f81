#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "setsumm/analysis.hpp"
#include "setsumm/ingest.hpp"
#include "support/oracles.hpp"

using namespace setsumm;
using namespace setsumm::analysis;

namespace {

ProductTable csv_table(const std::string& text, const std::string& category = "TVs") {
  return load_table(text, {category, std::nullopt});
}

// 10 products; hdmi yes on 9, aspect 16:9 on 8, a numeric column, a
// boolean that is mostly false.
ProductTable ten_tvs() {
  std::string s = "price,hdmi,aspect,inputs,curved\n";
  for (int i = 0; i < 10; ++i) {
    s += std::to_string(100 + 10 * i) + "," + (i < 9 ? "yes" : "no") + "," + (i < 8 ? "16:9" : "4:3") + "," +
         std::to_string(i % 3) + "," + (i < 2 ? "yes" : "no") + "\n";
  }
  return csv_table(s);
}

ProductTable permuted(const ProductTable& t, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(t.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Product> ps;
  std::vector<FeatureColumn> cols(t.features().begin(), t.features().end());
  for (auto& c : cols) c.values.clear();
  for (std::size_t k = 0; k < perm.size(); ++k) {
    ps.push_back({ProductId{static_cast<std::uint32_t>(k + 1)}, t.products()[perm[k]].price});
    for (std::size_t f = 0; f < cols.size(); ++f) cols[f].values.push_back(t.features()[f].values[perm[k]]);
  }
  return ProductTable(t.base_category(), std::move(ps), std::move(cols), t.price_feature());
}

std::vector<std::string> names(const std::vector<FeatureProfile>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.feature);
  return out;
}

// Impact ranking compared across two tables whose scores should agree up to
// relative rounding noise; exact ties are not reordered by noise when the
// scores are far apart relative to 1e-9.
void expect_same_ranking(const std::vector<FeatureProfile>& a, const std::vector<FeatureProfile>& b,
                         double scale = 1.0) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].feature, b[i].feature);
    EXPECT_NEAR(a[i].impact_score * scale, b[i].impact_score, 1e-9 * std::max(1.0, b[i].impact_score));
  }
}

bool well_separated(const std::vector<FeatureProfile>& ps) {
  for (std::size_t i = 1; i < ps.size(); ++i) {
    if (ps[i - 1].impact_score - ps[i].impact_score < 1e-6 * std::max(1.0, ps[i - 1].impact_score)) return false;
  }
  return true;
}

}  // namespace

TEST(Quantifier, Bands) {
  EXPECT_EQ(quantifier(1.0), Quantifier::Most);
  EXPECT_EQ(quantifier(0.75), Quantifier::Most);
  EXPECT_EQ(quantifier(0.74), Quantifier::Many);
  EXPECT_EQ(quantifier(0.5), Quantifier::Many);
  EXPECT_EQ(quantifier(0.25), Quantifier::Some);
  EXPECT_EQ(quantifier(0.24), Quantifier::OnlyAFew);
  EXPECT_EQ(quantifier(0.1), Quantifier::OnlyAFew);
  EXPECT_EQ(phrase(Quantifier::OnlyAFew), "Only a few");
}

TEST(Quantifier, RejectsOutsideUnitInterval) {
  for (double p : {0.0, -0.1, 1.0001, std::nan("")}) {
    try {
      quantifier(p);
      ADD_FAILURE() << p;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::OutOfRange);
    }
  }
}

TEST(CommonFeatures, OrderedByPrevalence) {
  const auto common = common_features(ten_tvs());
  ASSERT_EQ(common.size(), 2u);  // inputs is numeric, curved is mostly "no"
  EXPECT_EQ(common[0].feature, "hdmi");
  EXPECT_DOUBLE_EQ(common[0].prevalence, 0.9);
  EXPECT_EQ(common[0].quantifier, Quantifier::Most);
  EXPECT_EQ(common[0].value, Cell{true});
  EXPECT_EQ(common[1].feature, "aspect");
  EXPECT_DOUBLE_EQ(common[1].prevalence, 0.8);
  EXPECT_EQ(common[1].value, Cell{std::string("16:9")});
}

TEST(CommonFeatures, TopKAndNameTieBreak) {
  const auto t = csv_table("price,b,a,c\n1,x,x,x\n2,x,x,y\n");
  const auto all = common_features(t);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].feature, "a");
  EXPECT_EQ(all[1].feature, "b");
  EXPECT_EQ(all[2].feature, "c");
  EXPECT_EQ(all[2].value, Cell{std::string("x")});  // 1:1 tie goes to the smaller value
  EXPECT_EQ(common_features(t, 1).size(), 1u);
}

TEST(CommonFeatures, NumericOnlyTableGivesEmptyList) {
  const auto t = csv_table("price,inputs,year\n100,1,2015\n200,2,2016\n300,3,2016\n");
  EXPECT_TRUE(common_features(t).empty());
}

TEST(CommonFeatures, PrevalenceIgnoresMissingCells) {
  const auto t = csv_table("price,panel\n1,Flat\n2,Flat\n3,\n4,n/a\n5,Curved\n");
  const auto c = common_features(t);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0].prevalence, 2.0 / 3.0);
  EXPECT_EQ(c[0].quantifier, Quantifier::Many);
}

TEST(PriceImpact, ResolutionExample) {
  const auto t = csv_table("price,resolution\n100,720p\n120,720p\n200,1080p\n220,1080p\n400,4K\n420,4K\n");
  const auto impact = price_impact(t, 7, 2);
  ASSERT_EQ(impact.size(), 1u);
  EXPECT_EQ(impact[0].feature, "resolution");
  EXPECT_NEAR(impact[0].impact_score, 124.72, 0.005);
  ASSERT_EQ(impact[0].group_means.size(), 3u);
  std::vector<double> means;
  for (const auto& g : impact[0].group_means) means.push_back(g.mean);
  std::sort(means.begin(), means.end());
  EXPECT_EQ(means, (std::vector<double>{110, 210, 410}));
}

TEST(PriceImpact, SingleGroupFeaturesAreSkipped) {
  const auto t = csv_table("price,panel,res\n100,Flat,a\n120,Flat,a\n200,Flat,b\n220,Flat,b\n");
  const auto impact = price_impact(t, 7, 2);
  EXPECT_EQ(names(impact), std::vector<std::string>{"res"});
}

TEST(PriceImpact, MinSupportDropsSmallGroups) {
  // "b" has only one product: with min_support 2 the feature has one group left.
  const auto t = csv_table("price,res\n100,a\n120,a\n900,b\n");
  EXPECT_TRUE(price_impact(t, 7, 2).empty());
  EXPECT_EQ(price_impact(t, 7, 1).size(), 1u);
}

TEST(PriceImpact, NormalizedScoreIsScaleFree) {
  const auto t = csv_table("price,res\n100,a\n120,a\n200,b\n220,b\n");
  const auto raw = price_impact(t, 7, 2);
  const auto norm = price_impact(t, 7, 2, true);
  ASSERT_EQ(norm.size(), 1u);
  EXPECT_NEAR(norm[0].impact_score, raw[0].impact_score / 160.0, 1e-12);
}

TEST(PriceImpact, MatchesGroupByOracle) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> np(1, 20), nf(1, 6), ms(1, 4);
  for (int iter = 0; iter < 400; ++iter) {
    const auto t = oracle::random_table(rng, np(rng), nf(rng));
    const std::size_t min_support = ms(rng);
    const auto got = price_impact(t, 1000, min_support);
    const auto want = oracle::price_impact(t, min_support);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& w : want) {
      const auto it = std::find_if(got.begin(), got.end(), [&](const FeatureProfile& p) { return p.feature == w.feature; });
      ASSERT_NE(it, got.end()) << w.feature;
      EXPECT_NEAR(it->impact_score, w.score, 1e-9 * std::max(1.0, w.score));
    }
    for (std::size_t i = 1; i < got.size(); ++i) EXPECT_GE(got[i - 1].impact_score, got[i].impact_score);
  }
}

TEST(CommonFeatures, MatchesCountingOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> np(1, 20), nf(1, 6);
  for (int iter = 0; iter < 400; ++iter) {
    const auto t = oracle::random_table(rng, np(rng), nf(rng));
    const auto got = common_features(t, 1000);
    const auto want = oracle::common_features(t);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].feature, want[i].feature);
      EXPECT_EQ(format_cell(got[i].value), want[i].value);
      EXPECT_DOUBLE_EQ(got[i].prevalence, static_cast<double>(want[i].count) / want[i].present);
    }
  }
}

TEST(Invariance, RowPermutation) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 200; ++iter) {
    const auto t = oracle::random_table(rng, 5 + iter % 16, 1 + iter % 6);
    const auto p = permuted(t, rng);
    EXPECT_EQ(common_features(t, 1000), common_features(p, 1000));
    const auto a = price_impact(t, 1000, 2);
    const auto b = price_impact(p, 1000, 2);
    // sorted sums: scores are bit-identical under permutation
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].feature, b[i].feature);
      EXPECT_EQ(a[i].impact_score, b[i].impact_score);
    }
  }
}

TEST(Invariance, PriceShiftAndPositiveScale) {
  std::mt19937_64 rng(23);
  int compared = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const auto t = oracle::random_table(rng, 8 + iter % 13, 2 + iter % 5);
    const auto base = price_impact(t, 1000, 2);
    if (!well_separated(base)) continue;
    ++compared;
    expect_same_ranking(base, price_impact(oracle::with_prices(t, 1.0, 500.0), 1000, 2));
    expect_same_ranking(base, price_impact(oracle::with_prices(t, 3.0, 0.0), 1000, 2), 3.0);
    // common features do not look at prices at all
    EXPECT_EQ(common_features(t, 1000), common_features(oracle::with_prices(t, 2.5, 40.0), 1000));
  }
  EXPECT_GT(compared, 100);
}

TEST(Contrast, IncludesLargeDifferencesOnly) {
  // target: smart on 9/10, usb on 6/10; superset: both on 5/10
  std::string target = "price,smart,usb\n";
  std::string superset = "price,smart,usb\n";
  for (int i = 0; i < 10; ++i) {
    target += std::to_string(100 + i) + "," + (i < 9 ? "yes" : "no") + "," + (i < 6 ? "yes" : "no") + "\n";
    superset += std::to_string(100 + i) + "," + (i < 5 ? "yes" : "no") + "," + (i < 5 ? "yes" : "no") + "\n";
  }
  const auto items = superset_contrast(csv_table(target), csv_table(superset, "All"));
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].feature, "smart");
  EXPECT_EQ(items[0].value, Cell{true});
  EXPECT_NEAR(items[0].difference(), 0.4, 1e-12);
  EXPECT_EQ(items[0].quantifier, Quantifier::Most);
}

TEST(Contrast, TargetEqualToSupersetIsEmpty) {
  const auto t = ten_tvs();
  EXPECT_TRUE(superset_contrast(t, t).empty());
}

TEST(Contrast, DeltaBoundaryIsInclusive) {
  // 3/4 vs 1/2: difference exactly 0.25
  const auto target = csv_table("price,panel\n1,Flat\n2,Flat\n3,Flat\n4,Curved\n");
  const auto superset = csv_table("price,panel\n1,Flat\n2,Flat\n3,Curved\n4,Curved\n", "All");
  const auto items = superset_contrast(target, superset);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].value, Cell{std::string("Flat")});
}

TEST(Contrast, ValuesAbsentFromSupersetCountAsZero) {
  const auto target = csv_table("price,panel\n1,Curved\n2,Curved\n");
  const auto superset = csv_table("price,panel\n1,Flat\n2,Flat\n", "All");
  const auto items = superset_contrast(target, superset);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].superset_prevalence, 0.0);
}

TEST(Contrast, FeatureMismatch) {
  const auto target = csv_table("price,panel\n1,Flat\n");
  try {
    superset_contrast(target, csv_table("price,other\n1,Flat\n"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FeatureMismatch);
  }
  try {
    superset_contrast(target, csv_table("price,panel\n1,yes\n"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FeatureMismatch);
  }
}

TEST(Direction, ThreeOutcomes) {
  auto table = [](int with_price, int without_price) {
    std::string s = "price,smart\n";
    for (int i = 0; i < 5; ++i) s += std::to_string(with_price) + ",yes\n";
    for (int i = 0; i < 5; ++i) s += std::to_string(without_price) + ",no\n";
    return csv_table(s);
  };
  const auto up = price_direction(table(500, 300), "smart");
  EXPECT_EQ(up.direction, Direction::MoreExpensive);
  EXPECT_EQ(up.mean_with, 500.0);
  EXPECT_EQ(up.mean_without, 300.0);
  EXPECT_EQ(price_direction(table(300, 300), "smart").direction, Direction::NoClearEffect);
  EXPECT_EQ(price_direction(table(270, 300), "smart").direction, Direction::Cheaper);
  EXPECT_EQ(price_direction(table(330, 300), "smart").direction, Direction::MoreExpensive);
  EXPECT_EQ(price_direction(table(329, 300), "smart").direction, Direction::NoClearEffect);
}

TEST(Direction, Errors) {
  const auto t = ten_tvs();
  try {
    price_direction(t, "nope");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownFeature);
  }
  try {
    price_direction(t, "hdmi");  // 9 vs 1
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InsufficientSupport);
  }
  EXPECT_NO_THROW(price_direction(t, "hdmi", 1));
}

TEST(Analysis, EmptyTableIsRejected) {
  const auto t = filter(ten_tvs(), {FilterPredicate{"price", InRange{1e9, 2e9}}});
  ASSERT_TRUE(t.empty());
  EXPECT_THROW(common_features(t), Error);
  EXPECT_THROW(price_impact(t), Error);
}
