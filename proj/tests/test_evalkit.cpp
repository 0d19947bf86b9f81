#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "setsumm/evalkit.hpp"
#include "setsumm/serialize.hpp"
#include "support/oracles.hpp"

using namespace setsumm;
using namespace setsumm::evalkit;

namespace {

IdSet ids(std::initializer_list<std::uint32_t> xs) {
  IdSet s;
  for (auto x : xs) s.insert(ProductId{x});
  return s;
}

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::ParseError;
}

// 3 products x 3 features with partial overlap.
ProductTable three_by_three() {
  return load_table(
      "price,hdmi,panel,res,inputs\n"
      "100,yes,Flat,720p,1\n"
      "200,yes,Curved,1080p,2\n"
      "300,no,Flat,1080p,3\n",
      {"TVs", std::nullopt});
}

}  // namespace

TEST(Dice, Examples) {
  EXPECT_DOUBLE_EQ(dice(ids({1, 2, 3}), ids({2, 3, 4})), 2.0 * 2 / 6);
  EXPECT_EQ(dice(ids({1}), ids({1})), 1.0);
  EXPECT_EQ(dice(ids({1}), ids({2})), 0.0);
  EXPECT_EQ(code_of([] { dice(IdSet{}, ids({1})); }), Errc::EmptySet);
}

TEST(Dice, RandomPairsAgainstEnumeration) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> size(1, 12), id(1, 30);
  for (int i = 0; i < 2000; ++i) {
    IdSet a, b;
    for (int k = size(rng); k > 0; --k) a.insert(ProductId{static_cast<std::uint32_t>(id(rng))});
    for (int k = size(rng); k > 0; --k) b.insert(ProductId{static_cast<std::uint32_t>(id(rng))});
    ASSERT_EQ(dice(a, b), oracle::dice(a, b));
    ASSERT_EQ(dice(a, b), dice(b, a));
  }
}

TEST(Cosine, MatchesDenseOracle) {
  const auto t = three_by_three();
  const std::vector<IdSet> sets{ids({1}), ids({2}), ids({3}), ids({1, 2}), ids({2, 3}), ids({1, 2, 3})};
  for (const auto& a : sets) {
    for (const auto& b : sets) {
      EXPECT_NEAR(cosine_set_similarity(a, b, t), oracle::cosine_sets(a, b, t), 1e-12);
      EXPECT_DOUBLE_EQ(cosine_set_similarity(a, b, t), cosine_set_similarity(b, a, t));
    }
  }
  EXPECT_NEAR(cosine_set_similarity(ids({1, 2}), ids({1, 2}), t), 1.0, 1e-12);
}

TEST(Cosine, DisjointFeatureValuesGiveZero) {
  const auto t = load_table("price,panel,res\n1,Flat,720p\n2,Curved,4K\n", {"X", std::nullopt});
  EXPECT_EQ(cosine_set_similarity(ids({1}), ids({2}), t), 0.0);
}

TEST(Cosine, RandomTablesAgainstOracle) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto t = oracle::random_table(rng, 6, 4);
    std::uniform_int_distribution<std::uint32_t> id(1, 6);
    IdSet a{ProductId{id(rng)}, ProductId{id(rng)}}, b{ProductId{id(rng)}};
    EXPECT_NEAR(cosine_set_similarity(a, b, t), oracle::cosine_sets(a, b, t), 1e-12);
  }
}

TEST(Cosine, Errors) {
  const auto t = three_by_three();
  EXPECT_EQ(code_of([&] { cosine_set_similarity(ids({1}), ids({9}), t); }), Errc::UnknownProduct);
  EXPECT_EQ(code_of([&] { cosine_set_similarity(IdSet{}, ids({1}), t); }), Errc::EmptySet);
}

TEST(IncompleteBeta, AgreesWithBoost) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ab(0.2, 40.0), x(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = ab(rng), b = ab(rng), xv = x(rng);
    const double want = boost::math::ibeta(a, b, xv);
    const double got = regularized_incomplete_beta(a, b, xv);
    ASSERT_NEAR(got, want, 1e-9 * std::max(want, 1e-300) + 1e-300) << a << " " << b << " " << xv;
  }
  EXPECT_EQ(regularized_incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_EQ(regularized_incomplete_beta(2, 3, 1.0), 1.0);
}

TEST(IncompleteBeta, StudentTailsAgainstBoost) {
  for (double df : {1.0, 2.0, 5.0, 15.0, 30.0, 100.0}) {
    for (double t : {0.01, 0.5, 1.0, 2.0, 3.5, 6.0, 12.0}) {
      const double want = boost::math::ibeta(df / 2, 0.5, df / (df + t * t));
      EXPECT_NEAR(t_two_tailed_p(t, df), want, 1e-9 * want) << df << " " << t;
      EXPECT_EQ(t_two_tailed_p(-t, df), t_two_tailed_p(t, df));
    }
  }
}

TEST(TTest, PublishedLikertStatistics) {
  // reference p values from an independent statistics package (pooled, df 30)
  struct Case { double m1, s1, m2, s2, p; };
  const Case cases[]{{2.50, 1.26, 4.00, 0.82, 0.00039125483055872824},
                     {2.44, 1.26, 3.69, 1.01, 0.00422424278082611},
                     {2.06, 1.00, 3.69, 0.95, 5.0310589251841797e-05},
                     {2.69, 1.14, 3.88, 0.81, 0.0019047792154005018}};
  for (const auto& c : cases) {
    const auto r = pooled_t_test(c.m1, c.s1, 16, c.m2, c.s2, 16);
    EXPECT_EQ(r.df, 30);
    EXPECT_LT(r.t, 0.0);
    EXPECT_NEAR(r.p_two_tailed, c.p, 1e-9 * c.p);
  }
}

TEST(TTest, DiceStatistics) {
  const auto r = pooled_t_test(0.1375, 0.17, 16, 0.1250, 0.26, 16);
  EXPECT_NEAR(r.t, 0.16095569499491275, 1e-12);
  EXPECT_NEAR(r.p_two_tailed, 0.873207310590373, 1e-9);
}

TEST(TTest, NullCaseAndDomain) {
  const auto r = pooled_t_test(3.0, 1.0, 10, 3.0, 1.0, 10);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p_two_tailed, 1.0);
  EXPECT_EQ(code_of([] { pooled_t_test(1, 1, 1, 2, 1, 5); }), Errc::InvalidN);
  EXPECT_EQ(code_of([] { pooled_t_test(1, 0, 5, 2, 0, 5); }), Errc::DegenerateVariance);
  EXPECT_EQ(code_of([] { pooled_t_test(1, -1, 5, 2, 1, 5); }), Errc::OutOfRange);
}

TEST(TTest, PMonotoneInMeanGap) {
  double last = 1.0;
  for (double gap = 0.0; gap <= 3.0; gap += 0.05) {
    const double p = pooled_t_test(2.0, 1.1, 16, 2.0 + gap, 0.9, 16).p_two_tailed;
    EXPECT_LE(p, last);
    last = p;
  }
}

TEST(Bonferroni, Examples) {
  EXPECT_EQ(round4(bonferroni(0.0004)), 0.0016);
  EXPECT_EQ(round4(bonferroni(0.0043)), 0.0172);
  EXPECT_EQ(bonferroni(0.5), 1.0);
  EXPECT_EQ(bonferroni(0.1, 1), 0.1);
  EXPECT_EQ(code_of([] { bonferroni(1.5); }), Errc::OutOfRange);
  EXPECT_EQ(code_of([] { bonferroni(0.1, 0); }), Errc::OutOfRange);
}

namespace {

const char* const kLikert =
    "question,group,n,mean,sd\n"
    "Q1,baseline,16,2.50,1.26\nQ1,exp,16,4.00,0.82\n"
    "Q2,baseline,16,2.44,1.26\nQ2,exp,16,3.69,1.01\n"
    "Q3,baseline,16,2.06,1.00\nQ3,exp,16,3.69,0.95\n"
    "Q4,baseline,16,2.69,1.14\nQ4,exp,16,3.88,0.81\n";

const char* const kChoices =
    "participant,condition,category,role,product_ids\n"
    "p1,baseline,TV,speeded,1 2 3\np1,baseline,TV,gold,2 3 4\n"
    "p2,baseline,TV,speeded,1\np2,baseline,TV,gold,1;5\n"
    "p3,full,TV,speeded,7 8\np3,full,TV,gold,9\n"
    "p4,full,TV,gold,7\np4,full,TV,speeded,7\n";

}  // namespace

TEST(Evaluate, ReportFromFiles) {
  const auto records = parse_choices(kChoices);
  ASSERT_EQ(records.size(), 4u);
  const auto report = evaluate(records, parse_likert(kLikert));
  EXPECT_EQ(report.dice.baseline.n, 2);
  EXPECT_DOUBLE_EQ(report.dice.baseline.mean, (4.0 / 6 + 2.0 / 3) / 2);
  EXPECT_DOUBLE_EQ(report.dice.full.mean, 0.5);
  ASSERT_EQ(report.likert.size(), 4u);
  EXPECT_EQ(report.bonferroni_family, 4);
  EXPECT_EQ(report.likert[0].question, "Q1");
  EXPECT_EQ(report.likert[0].p_raw, 0.0004);
  EXPECT_EQ(report.likert[0].p_bonferroni, 0.0016);
  EXPECT_EQ(report.likert[2].p_raw, 0.0001);
  EXPECT_EQ(report.likert[3].p_bonferroni, 0.0076);
}

TEST(Evaluate, JsonRoundTrip) {
  const auto report = evaluate(parse_choices(kChoices), parse_likert(kLikert));
  const json j = report;
  EXPECT_TRUE(j.contains("likert"));
  EXPECT_TRUE(j.contains("dice"));
  EXPECT_EQ(j["likert"]["questions"].size(), 4u);
  EXPECT_EQ(j.dump(), json(j.get<EvaluationReport>()).dump());
  EXPECT_EQ(j.get<EvaluationReport>(), report);
  EXPECT_EQ(json::parse(j.dump()).get<EvaluationReport>(), report);
}

TEST(Evaluate, InsufficientData) {
  auto records = parse_choices(kChoices);
  records.erase(records.begin() + 2, records.end());  // baseline only
  EXPECT_EQ(code_of([&] { evaluate(records, parse_likert(kLikert)); }), Errc::InsufficientData);
  const auto partial = parse_likert("question,group,n,mean,sd\nQ1,baseline,16,2.5,1.2\n");
  EXPECT_EQ(code_of([&] { compare_likert(partial); }), Errc::InsufficientData);
}

TEST(Parsing, ErrorsCarryRowNumbers) {
  auto message = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ParseError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message([] { parse_likert("question,group,n,mean,sd\nQ1,baseline,16,2.5,1\nQ1,exp,16,6,1\n"); })
                .find("row 3"),
            std::string::npos);
  EXPECT_NE(message([] { parse_likert("question,group,n,mean,sd\nQ1,control,16,2.5,1\n"); }).find("row 2"),
            std::string::npos);
  EXPECT_NE(message([] { parse_likert("question,group,n,mean\nQ1,exp,16,2.5\n"); }).find("'sd'"),
            std::string::npos);
  EXPECT_NE(message([] {
              parse_choices("participant,condition,category,role,product_ids\np1,full,TV,speeded,1 x\n");
            }).find("row 2"),
            std::string::npos);
  EXPECT_NE(message([] {
              parse_choices("participant,condition,category,role,product_ids\np1,full,TV,speeded,1\n");
            }).find("lacks a gold"),
            std::string::npos);
}
