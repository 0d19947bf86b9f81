#pragma once

// JSON layouts for summary documents, evaluation reports and table views.

#include <string>

#include "json.hpp"

#include "setsumm/analysis.hpp"
#include "setsumm/evalkit.hpp"
#include "setsumm/ingest.hpp"
#include "setsumm/realize.hpp"
#include "setsumm/stats.hpp"

namespace setsumm {

using nlohmann::json;

inline json cell_to_json(const Cell& c) {
  struct Visitor {
    json operator()(Missing) const { return nullptr; }
    json operator()(bool b) const { return b; }
    json operator()(double d) const { return d; }
    json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

inline Cell cell_from_json(const json& j) {
  if (j.is_null()) return Missing{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw Error(Errc::ParseError, "cell must be null, boolean, number or string");
}

inline FeatureKind kind_from_string(std::string_view s) {
  if (s == "boolean") return FeatureKind::Boolean;
  if (s == "numeric") return FeatureKind::Numeric;
  if (s == "categorical") return FeatureKind::Categorical;
  throw Error(Errc::ParseError, "unknown feature kind '" + std::string(s) + "'");
}

// Feature names, kinds and value domains. Numeric domains report min/max.
inline json features_to_json(const ProductTable& table) {
  json out = json::array();
  for (const auto& f : table.features()) {
    json entry{{"name", f.name}, {"kind", std::string(to_string(f.kind))}, {"price", f.name == table.price_feature()}};
    std::set<Cell> distinct;
    for (const auto& c : f.values) {
      if (!is_missing(c)) distinct.insert(c);
    }
    if (f.kind == FeatureKind::Numeric) {
      entry["min"] = distinct.empty() ? json(nullptr) : cell_to_json(*distinct.begin());
      entry["max"] = distinct.empty() ? json(nullptr) : cell_to_json(*distinct.rbegin());
      entry["distinct_count"] = distinct.size();
    } else {
      json values = json::array();
      for (const auto& c : distinct) values.push_back(cell_to_json(c));
      entry["values"] = std::move(values);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

inline json products_to_json(const ProductTable& table, std::size_t offset, std::size_t limit) {
  json rows = json::array();
  const std::size_t end = std::min(table.size(), offset + limit);
  for (std::size_t r = offset; r < end; ++r) {
    json cells = json::object();
    for (const auto& f : table.features()) cells[f.name] = cell_to_json(f.values[r]);
    rows.push_back({{"id", table.products()[r].id.value}, {"price", table.products()[r].price}, {"cells", std::move(cells)}});
  }
  json columns = json::array();
  for (const auto& f : table.features()) columns.push_back(f.name);
  return {{"category", table.category_name()}, {"total", table.size()}, {"offset", offset},
          {"limit", limit}, {"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

namespace stats {

inline void to_json(json& j, const PriceCurve& c) {
  j = {{"total_count", c.total_count}, {"inlier_count", c.inlier_count}, {"inlier_lo", c.inlier_lo},
       {"inlier_hi", c.inlier_hi},     {"median_rounded", c.median_rounded}, {"median_raw", c.median_raw},
       {"mad_raw", c.mad_raw}};
}

inline void from_json(const json& j, PriceCurve& c) {
  j.at("total_count").get_to(c.total_count);
  j.at("inlier_count").get_to(c.inlier_count);
  j.at("inlier_lo").get_to(c.inlier_lo);
  j.at("inlier_hi").get_to(c.inlier_hi);
  j.at("median_rounded").get_to(c.median_rounded);
  j.at("median_raw").get_to(c.median_raw);
  j.at("mad_raw").get_to(c.mad_raw);
}

}  // namespace stats

namespace analysis {

inline std::string quantifier_key(Quantifier q) {
  switch (q) {
    case Quantifier::Most: return "most";
    case Quantifier::Many: return "many";
    case Quantifier::Some: return "some";
    case Quantifier::OnlyAFew: return "only_a_few";
  }
  return "";
}

inline Quantifier quantifier_from_key(std::string_view s) {
  if (s == "most") return Quantifier::Most;
  if (s == "many") return Quantifier::Many;
  if (s == "some") return Quantifier::Some;
  if (s == "only_a_few") return Quantifier::OnlyAFew;
  throw Error(Errc::ParseError, "unknown quantifier '" + std::string(s) + "'");
}

inline Direction direction_from_string(std::string_view s) {
  if (s == "more_expensive") return Direction::MoreExpensive;
  if (s == "cheaper") return Direction::Cheaper;
  if (s == "no_clear_effect") return Direction::NoClearEffect;
  throw Error(Errc::ParseError, "unknown direction '" + std::string(s) + "'");
}

inline void to_json(json& j, const CommonFeature& c) {
  j = {{"feature", c.feature}, {"kind", std::string(to_string(c.kind))}, {"value", cell_to_json(c.value)},
       {"prevalence", c.prevalence}, {"quantifier", quantifier_key(c.quantifier)}};
}

inline void from_json(const json& j, CommonFeature& c) {
  j.at("feature").get_to(c.feature);
  c.kind = kind_from_string(j.at("kind").get<std::string>());
  c.value = cell_from_json(j.at("value"));
  j.at("prevalence").get_to(c.prevalence);
  c.quantifier = quantifier_from_key(j.at("quantifier").get<std::string>());
}

inline void to_json(json& j, const FeatureProfile& f) {
  json groups = json::array();
  for (const auto& g : f.group_means) {
    groups.push_back({{"value", cell_to_json(g.value)}, {"mean_price", g.mean}, {"support", g.support}});
  }
  j = {{"feature", f.feature},
       {"kind", std::string(to_string(f.kind))},
       {"modal_value", cell_to_json(f.modal_value)},
       {"prevalence", f.prevalence},
       {"group_means", std::move(groups)},
       {"impact_score", f.impact_score},
       {"direction", f.direction ? json(std::string(to_string(*f.direction))) : json(nullptr)}};
}

inline void from_json(const json& j, FeatureProfile& f) {
  j.at("feature").get_to(f.feature);
  f.kind = kind_from_string(j.at("kind").get<std::string>());
  f.modal_value = cell_from_json(j.at("modal_value"));
  j.at("prevalence").get_to(f.prevalence);
  f.group_means.clear();
  for (const auto& g : j.at("group_means")) {
    f.group_means.push_back({cell_from_json(g.at("value")), g.at("mean_price").get<double>(),
                             g.at("support").get<std::size_t>()});
  }
  j.at("impact_score").get_to(f.impact_score);
  const auto& d = j.at("direction");
  f.direction = d.is_null() ? std::nullopt : std::optional(direction_from_string(d.get<std::string>()));
}

inline void to_json(json& j, const ContrastItem& c) {
  j = {{"feature", c.feature}, {"value", cell_to_json(c.value)}, {"target_prevalence", c.target_prevalence},
       {"superset_prevalence", c.superset_prevalence}, {"quantifier", quantifier_key(c.quantifier)}};
}

inline void from_json(const json& j, ContrastItem& c) {
  j.at("feature").get_to(c.feature);
  c.value = cell_from_json(j.at("value"));
  j.at("target_prevalence").get_to(c.target_prevalence);
  j.at("superset_prevalence").get_to(c.superset_prevalence);
  c.quantifier = quantifier_from_key(j.at("quantifier").get<std::string>());
}

}  // namespace analysis

namespace realize {

inline void to_json(json& j, const DirectionEntry& d) {
  j = {{"feature", d.feature}, {"value", cell_to_json(d.value)},
       {"direction", std::string(analysis::to_string(d.direction))}};
}

inline void from_json(const json& j, DirectionEntry& d) {
  j.at("feature").get_to(d.feature);
  d.value = cell_from_json(j.at("value"));
  d.direction = analysis::direction_from_string(j.at("direction").get<std::string>());
}

inline void to_json(json& j, const SummaryDocument& d) {
  j = {{"mode", std::string(to_string(d.mode))},
       {"category", d.category},
       {"curve", d.curve},
       {"common", d.common},
       {"impact", d.impact},
       {"contrast", d.contrast ? json(*d.contrast) : json(nullptr)},
       {"superset_category", d.superset_category},
       {"directions", d.directions ? json(*d.directions) : json(nullptr)}};
}

inline void from_json(const json& j, SummaryDocument& d) {
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw Error(Errc::ParseError, "unknown mode");
  d.mode = *mode;
  j.at("category").get_to(d.category);
  j.at("curve").get_to(d.curve);
  j.at("common").get_to(d.common);
  j.at("impact").get_to(d.impact);
  if (j.at("contrast").is_null()) d.contrast.reset();
  else d.contrast = j.at("contrast").get<std::vector<analysis::ContrastItem>>();
  j.at("superset_category").get_to(d.superset_category);
  if (j.at("directions").is_null()) d.directions.reset();
  else d.directions = j.at("directions").get<std::vector<DirectionEntry>>();
}

}  // namespace realize

namespace evalkit {

inline void to_json(json& j, const EvaluationReport& r) {
  json questions = json::array();
  for (const auto& q : r.likert) {
    questions.push_back({{"question", q.question},
                         {"n_baseline", q.baseline.n},
                         {"n_exp", q.exp.n},
                         {"mean_baseline", q.baseline.mean},
                         {"mean_exp", q.exp.mean},
                         {"sd_baseline", q.baseline.sd},
                         {"sd_exp", q.exp.sd},
                         {"t", q.test.t},
                         {"df", q.test.df},
                         {"p_two_tailed", q.test.p_two_tailed},
                         {"p_value_raw", q.p_raw},
                         {"p_value_bonferroni", q.p_bonferroni}});
  }
  j = {{"likert", {{"bonferroni_family", r.bonferroni_family}, {"questions", std::move(questions)}}},
       {"dice",
        {{"n_baseline", r.dice.baseline.n},
         {"n_full", r.dice.full.n},
         {"mean_baseline", r.dice.baseline.mean},
         {"mean_full", r.dice.full.mean},
         {"sd_baseline", r.dice.baseline.sd},
         {"sd_full", r.dice.full.sd},
         {"t", r.dice.test.t},
         {"df", r.dice.test.df},
         {"p_value", r.dice.test.p_two_tailed}}}};
}

inline void from_json(const json& j, EvaluationReport& r) {
  const auto& l = j.at("likert");
  l.at("bonferroni_family").get_to(r.bonferroni_family);
  r.likert.clear();
  for (const auto& q : l.at("questions")) {
    LikertRow row;
    q.at("question").get_to(row.question);
    q.at("n_baseline").get_to(row.baseline.n);
    q.at("n_exp").get_to(row.exp.n);
    q.at("mean_baseline").get_to(row.baseline.mean);
    q.at("mean_exp").get_to(row.exp.mean);
    q.at("sd_baseline").get_to(row.baseline.sd);
    q.at("sd_exp").get_to(row.exp.sd);
    q.at("t").get_to(row.test.t);
    q.at("df").get_to(row.test.df);
    q.at("p_two_tailed").get_to(row.test.p_two_tailed);
    q.at("p_value_raw").get_to(row.p_raw);
    q.at("p_value_bonferroni").get_to(row.p_bonferroni);
    r.likert.push_back(std::move(row));
  }
  const auto& d = j.at("dice");
  d.at("n_baseline").get_to(r.dice.baseline.n);
  d.at("n_full").get_to(r.dice.full.n);
  d.at("mean_baseline").get_to(r.dice.baseline.mean);
  d.at("mean_full").get_to(r.dice.full.mean);
  d.at("sd_baseline").get_to(r.dice.baseline.sd);
  d.at("sd_full").get_to(r.dice.full.sd);
  d.at("t").get_to(r.dice.test.t);
  d.at("df").get_to(r.dice.test.df);
  d.at("p_value").get_to(r.dice.test.p_two_tailed);
}

}  // namespace evalkit

}  // namespace setsumm
