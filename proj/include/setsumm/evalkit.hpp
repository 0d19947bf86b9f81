#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "setsumm/csv.hpp"
#include "setsumm/error.hpp"
#include "setsumm/ingest.hpp"
#include "setsumm/text.hpp"

namespace setsumm::evalkit {

using IdSet = std::set<ProductId>;

// Dice = 2|a ∩ b| / (|a| + |b|) over any ordered set type.
template <class Set>
double dice(const Set& a, const Set& b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySet, "dice of an empty set");
  std::size_t shared = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(a.size() + b.size());
}

namespace detail {

using Indicator = std::pair<std::size_t, Cell>;

// Binary (feature, value) indicator vector over Boolean and Categorical
// columns, stored as the sorted list of active indicators.
inline std::vector<Indicator> encode(const ProductTable& table, std::size_t row) {
  std::vector<Indicator> v;
  const auto features = table.features();
  for (std::size_t f = 0; f < features.size(); ++f) {
    if (features[f].kind == FeatureKind::Numeric) continue;
    const Cell& c = features[f].values[row];
    if (!is_missing(c)) v.emplace_back(f, c);
  }
  return v;
}

inline double binary_cosine(const std::vector<Indicator>& x, const std::vector<Indicator>& y) {
  if (x.empty() || y.empty()) return 0.0;
  std::vector<Indicator> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) /
         std::sqrt(static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

inline std::vector<std::vector<Indicator>> encode_all(const ProductTable& table, const IdSet& ids) {
  std::vector<std::vector<Indicator>> out;
  for (auto id : ids) {
    const auto row = table.row_of(id);
    if (!row) throw Error(Errc::UnknownProduct, "product " + std::to_string(id.value) + " not in table");
    out.push_back(encode(table, *row));
  }
  return out;
}

inline double mean_best_match(const std::vector<std::vector<Indicator>>& from,
                              const std::vector<std::vector<Indicator>>& to) {
  double total = 0.0;
  for (const auto& x : from) {
    double best = 0.0;
    for (const auto& y : to) best = std::max(best, binary_cosine(x, y));
    total += best;
  }
  return total / static_cast<double>(from.size());
}

}  // namespace detail

// Symmetrized best-match average of pairwise cosine similarities. Products
// with no non-numeric values encode to the zero vector, whose cosine with
// anything is taken as 0.
inline double cosine_set_similarity(const IdSet& a, const IdSet& b, const ProductTable& table) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySet, "cosine similarity of an empty set");
  const auto va = detail::encode_all(table, a);
  const auto vb = detail::encode_all(table, b);
  return 0.5 * (detail::mean_best_match(va, vb) + detail::mean_best_match(vb, va));
}

// ---------------------------------------------------------------------------
// t distribution

namespace detail {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b). Takes 1 - x separately so callers
// holding it exactly avoid cancellation.
inline double regularized_incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(Errc::OutOfRange, "beta parameters must be positive");
  if (x < 0.0 || x > 1.0) throw Error(Errc::OutOfRange, "x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (one_minus_x == 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log(one_minus_x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, one_minus_x) / b;
}

inline double regularized_incomplete_beta(double a, double b, double x) {
  return regularized_incomplete_beta(a, b, x, 1.0 - x);
}

// P(|T| >= |t|) for Student's t with df degrees of freedom.
inline double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw Error(Errc::OutOfRange, "degrees of freedom must be positive");
  const double t2 = t * t;
  const double denom = df + t2;
  return regularized_incomplete_beta(df / 2.0, 0.5, df / denom, t2 / denom);
}

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double p_two_tailed = 1.0;

  friend bool operator==(const TTestResult&, const TTestResult&) = default;
};

// Student's two-sample t-test with pooled variance, from summary statistics.
inline TTestResult pooled_t_test(double m1, double s1, int n1, double m2, double s2, int n2) {
  if (n1 < 2 || n2 < 2) throw Error(Errc::InvalidN, "each group needs n >= 2");
  if (s1 < 0.0 || s2 < 0.0) throw Error(Errc::OutOfRange, "standard deviations must be >= 0");
  if (s1 == 0.0 && s2 == 0.0) throw Error(Errc::DegenerateVariance, "both standard deviations are zero");
  const int df = n1 + n2 - 2;
  const double pooled_var = ((n1 - 1) * s1 * s1 + (n2 - 1) * s2 * s2) / df;
  const double se = std::sqrt(pooled_var * (1.0 / n1 + 1.0 / n2));
  const double t = (m1 - m2) / se;
  return {t, df, t_two_tailed_p(t, df)};
}

inline double bonferroni(double p, int m = 4) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::OutOfRange, "p outside [0, 1]");
  if (m < 1) throw Error(Errc::OutOfRange, "family size must be >= 1");
  return std::min(1.0, m * p);
}

// Rounds to the 4 decimals used in published tables.
inline double round4(double p) { return std::round(p * 1e4) / 1e4; }

// ---------------------------------------------------------------------------
// Experiment records

enum class Condition { BaselineSummary, FullSummary };
enum class Group { Baseline, Exp };

constexpr std::string_view to_string(Condition c) {
  return c == Condition::BaselineSummary ? "baseline" : "full";
}
constexpr std::string_view to_string(Group g) { return g == Group::Baseline ? "baseline" : "exp"; }

struct ChoiceRecord {
  std::string participant;
  Condition condition = Condition::BaselineSummary;
  std::string category;
  IdSet speeded;
  IdSet gold_standard;
};

struct LikertSummary {
  std::string question;
  Group group = Group::Baseline;
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;
};

struct SampleStats {
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample SD (n - 1)

  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

inline SampleStats sample_stats(std::span<const double> xs) {
  SampleStats s;
  s.n = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct DiceComparison {
  SampleStats baseline;
  SampleStats full;
  TTestResult test;

  friend bool operator==(const DiceComparison&, const DiceComparison&) = default;
};

inline DiceComparison compare_dice(const SampleStats& baseline, const SampleStats& full) {
  return {baseline, full, pooled_t_test(baseline.mean, baseline.sd, baseline.n, full.mean, full.sd, full.n)};
}

struct LikertRow {
  std::string question;
  SampleStats baseline;
  SampleStats exp;
  TTestResult test;
  double p_raw = 0.0;         // p_two_tailed rounded to 4 decimals
  double p_bonferroni = 0.0;  // bonferroni(p_raw, family size), 4 decimals

  friend bool operator==(const LikertRow&, const LikertRow&) = default;
};

struct EvaluationReport {
  DiceComparison dice;
  std::vector<LikertRow> likert;
  int bonferroni_family = 0;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

// Likert rows ordered by question label. The correction is applied to the
// 4-decimal raw p, the way a published table derives its corrected row.
inline std::vector<LikertRow> compare_likert(std::span<const LikertSummary> likert) {
  std::map<std::string, std::pair<const LikertSummary*, const LikertSummary*>> byq;
  for (const auto& l : likert) {
    auto& slot = byq[l.question];
    auto& target = l.group == Group::Baseline ? slot.first : slot.second;
    if (target) throw Error(Errc::InsufficientData, "duplicate " + std::string(to_string(l.group)) +
                                                        " row for " + l.question);
    target = &l;
  }
  const int family = static_cast<int>(byq.size());
  std::vector<LikertRow> rows;
  for (const auto& [q, pair] : byq) {
    if (!pair.first || !pair.second) {
      throw Error(Errc::InsufficientData, "question " + q + " needs both baseline and exp rows");
    }
    LikertRow row;
    row.question = q;
    row.baseline = {pair.first->n, pair.first->mean, pair.first->sd};
    row.exp = {pair.second->n, pair.second->mean, pair.second->sd};
    row.test = pooled_t_test(row.baseline.mean, row.baseline.sd, row.baseline.n, row.exp.mean,
                             row.exp.sd, row.exp.n);
    row.p_raw = round4(row.test.p_two_tailed);
    row.p_bonferroni = round4(bonferroni(row.p_raw, family));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline EvaluationReport evaluate(std::span<const ChoiceRecord> records, std::span<const LikertSummary> likert) {
  std::vector<double> baseline;
  std::vector<double> full;
  for (const auto& r : records) {
    (r.condition == Condition::BaselineSummary ? baseline : full).push_back(dice(r.speeded, r.gold_standard));
  }
  if (baseline.size() < 2 || full.size() < 2) {
    throw Error(Errc::InsufficientData, "need >= 2 choice records per condition, have " +
                                            std::to_string(baseline.size()) + " baseline and " +
                                            std::to_string(full.size()) + " full");
  }
  EvaluationReport report;
  report.dice = compare_dice(sample_stats(baseline), sample_stats(full));
  report.likert = compare_likert(likert);
  report.bonferroni_family = static_cast<int>(report.likert.size());
  return report;
}

// ---------------------------------------------------------------------------
// File formats
//
// Choices: header `participant,condition,category,role,product_ids` where
// condition is baseline|full, role is speeded|gold, and product_ids is a
// space- or semicolon-separated list of integer ids. Each
// (participant, condition, category) needs exactly one speeded and one gold row.
//
// Likert: header `question,group,n,mean,sd` with group baseline|exp.

namespace detail {

inline std::map<std::string, std::size_t> header_index(const csv::Row& header,
                                                       std::initializer_list<std::string_view> required) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) idx[text::fold(text::trim(header[i]))] = i;
  for (auto name : required) {
    if (!idx.count(std::string(name))) throw Error(Errc::ParseError, "row 1: missing column '" + std::string(name) + "'");
  }
  return idx;
}

[[noreturn]] inline void row_error(std::size_t row, const std::string& msg) {
  throw Error(Errc::ParseError, "row " + std::to_string(row) + ": " + msg);
}

inline IdSet parse_ids(std::string_view s, std::size_t row) {
  IdSet ids;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const auto v = text::parse_number(token);
    if (!v || *v < 0 || *v != std::floor(*v) || *v > std::numeric_limits<std::uint32_t>::max()) {
      row_error(row, "bad product id '" + token + "'");
    }
    ids.insert(ProductId{static_cast<std::uint32_t>(*v)});
    token.clear();
  };
  for (char c : s) {
    if (c == ' ' || c == ';' || c == '\t') flush();
    else token.push_back(c);
  }
  flush();
  if (ids.empty()) row_error(row, "empty product id list");
  return ids;
}

}  // namespace detail

inline std::vector<ChoiceRecord> parse_choices(std::string_view raw) {
  const auto rows = csv::parse(raw);
  if (rows.empty()) return {};
  const auto idx = detail::header_index(rows[0], {"participant", "condition", "category", "role", "product_ids"});

  struct Pending {
    ChoiceRecord record;
    bool has_speeded = false;
    bool has_gold = false;
    std::size_t first_row = 0;
  };
  std::map<std::tuple<std::string, int, std::string>, Pending> pending;
  std::vector<std::tuple<std::string, int, std::string>> order;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t rownum = r + 1;
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) detail::row_error(rownum, "wrong number of fields");
    auto field = [&](const char* name) { return std::string(text::trim(row[idx.at(name)])); };

    const std::string cond = text::fold(field("condition"));
    Condition condition;
    if (cond == "baseline") condition = Condition::BaselineSummary;
    else if (cond == "full") condition = Condition::FullSummary;
    else detail::row_error(rownum, "condition must be baseline or full, got '" + cond + "'");

    const std::string role = text::fold(field("role"));
    if (role != "speeded" && role != "gold") detail::row_error(rownum, "role must be speeded or gold, got '" + role + "'");

    const std::string participant = field("participant");
    if (participant.empty()) detail::row_error(rownum, "empty participant");
    auto key = std::make_tuple(participant, static_cast<int>(condition), field("category"));
    auto [it, inserted] = pending.try_emplace(key);
    if (inserted) {
      order.push_back(key);
      it->second.record.participant = participant;
      it->second.record.condition = condition;
      it->second.record.category = std::get<2>(key);
      it->second.first_row = rownum;
    }
    auto ids = detail::parse_ids(row[idx.at("product_ids")], rownum);
    if (role == "speeded") {
      if (it->second.has_speeded) detail::row_error(rownum, "duplicate speeded set");
      it->second.has_speeded = true;
      it->second.record.speeded = std::move(ids);
    } else {
      if (it->second.has_gold) detail::row_error(rownum, "duplicate gold set");
      it->second.has_gold = true;
      it->second.record.gold_standard = std::move(ids);
    }
  }

  std::vector<ChoiceRecord> out;
  for (const auto& key : order) {
    auto& p = pending.at(key);
    if (!p.has_speeded || !p.has_gold) {
      detail::row_error(p.first_row, "participant '" + p.record.participant + "' lacks a " +
                                         (p.has_speeded ? "gold" : "speeded") + " set");
    }
    out.push_back(std::move(p.record));
  }
  return out;
}

inline std::vector<LikertSummary> parse_likert(std::string_view raw) {
  const auto rows = csv::parse(raw);
  if (rows.empty()) return {};
  const auto idx = detail::header_index(rows[0], {"question", "group", "n", "mean", "sd"});
  std::vector<LikertSummary> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t rownum = r + 1;
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) detail::row_error(rownum, "wrong number of fields");
    LikertSummary l;
    l.question = std::string(text::trim(row[idx.at("question")]));
    if (l.question.empty()) detail::row_error(rownum, "empty question");
    const std::string group = text::fold(text::trim(row[idx.at("group")]));
    if (group == "baseline") l.group = Group::Baseline;
    else if (group == "exp") l.group = Group::Exp;
    else detail::row_error(rownum, "group must be baseline or exp, got '" + group + "'");

    const auto n = text::parse_number(row[idx.at("n")]);
    const auto mean = text::parse_number(row[idx.at("mean")]);
    const auto sd = text::parse_number(row[idx.at("sd")]);
    if (!n || *n != std::floor(*n) || *n < 2 || *n > 1e9) detail::row_error(rownum, "n must be an integer >= 2");
    if (!mean || *mean < 1.0 || *mean > 5.0) detail::row_error(rownum, "mean must lie in [1, 5]");
    if (!sd || *sd < 0.0) detail::row_error(rownum, "sd must be >= 0");
    l.n = static_cast<int>(*n);
    l.mean = *mean;
    l.sd = *sd;
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace setsumm::evalkit
