// setsumm: summarize product catalogs, evaluate choice experiments, serve
// live summaries over HTTP.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "setsumm/evalkit.hpp"
#include "setsumm/ingest.hpp"
#include "setsumm/pipeline.hpp"
#include "setsumm/serialize.hpp"
#include "setsumm/server.hpp"
#include "setsumm/synthetic.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw setsumm::Error(setsumm::Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_summary_flags(CLI::App& cmd, setsumm::SummaryConfig& cfg) {
  auto& a = cfg.analysis;
  cmd.add_option("--top-k", a.top_k, "Features listed per paragraph")->capture_default_str();
  cmd.add_option("--min-support", a.min_support, "Minimum products per price group")->capture_default_str();
  cmd.add_option("--mad-cutoff", cfg.mad_cutoff, "Modified z-score outlier cutoff")->capture_default_str();
  cmd.add_option("--most", a.bands.most, "Prevalence for 'Most'")->capture_default_str();
  cmd.add_option("--many", a.bands.many, "Prevalence for 'Many'")->capture_default_str();
  cmd.add_option("--some", a.bands.some, "Prevalence for 'Some'")->capture_default_str();
  cmd.add_option("--direction-margin", a.direction_margin, "Relative price gap for direction sentences")
      ->capture_default_str();
  cmd.add_option("--contrast-delta", a.contrast_delta, "Prevalence gap for superset contrast")->capture_default_str();
  cmd.add_flag("--normalize-impact", a.normalize_impact, "Divide impact SD by the mean price");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Natural-language overviews of product sets"};
  app.require_subcommand(1);

  setsumm::SummaryConfig summary_cfg;
  std::string input;
  std::string category;
  std::string mode_text = "full";
  std::string superset_path;
  std::string superset_category;
  std::string price_column;
  std::string filter_query;
  bool compat = false;
  bool as_json = false;
  auto* summarize = app.add_subcommand("summarize", "Summarize a catalog CSV");
  summarize->add_option("--input", input, "Catalog CSV")->required();
  summarize->add_option("--category", category, "Category name used in the text")->required();
  summarize->add_option("--mode", mode_text, "baseline | full | extended")
      ->check(CLI::IsMember({"baseline", "full", "extended"}))
      ->capture_default_str();
  summarize->add_option("--superset", superset_path, "Superset catalog CSV for extended contrast");
  summarize->add_option("--superset-category", superset_category, "Superset name (default: file stem)");
  summarize->add_option("--price-column", price_column, "Price column name (default: first *price* column)");
  summarize->add_option("--filter", filter_query, "Filter terms, e.g. 'hdmi=yes;price=100..300'");
  summarize->add_flag("--no-trailing-period", compat, "Leave list paragraphs unterminated");
  summarize->add_flag("--json", as_json, "Print the structured document as JSON instead of text");
  add_summary_flags(*summarize, summary_cfg);

  std::string choices_path;
  std::string likert_path;
  auto* eval = app.add_subcommand("eval", "Dice and Likert statistics for a choice experiment");
  eval->add_option("--choices", choices_path, "Choice records CSV")->required();
  eval->add_option("--likert", likert_path, "Likert summary CSV")->required();

  setsumm::server::ServiceConfig service_cfg;
  std::string data_dir = service_cfg.data_dir.string();
  double max_upload_mb = 50.0;
  auto* serve = app.add_subcommand("serve", "Serve datasets and live summaries over HTTP");
  serve->add_option("--host", service_cfg.host, "Listen address")->capture_default_str();
  serve->add_option("--port", service_cfg.port, "Listen port")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Dataset directory")->capture_default_str();
  serve->add_option("--max-upload-mb", max_upload_mb, "Upload size limit")->capture_default_str();
  add_summary_flags(*serve, service_cfg.summary);

  std::uint64_t seed = setsumm::synthetic::kDefaultSeed;
  std::size_t rows = 363;
  auto* synth = app.add_subcommand("synth", "Write a synthetic TV catalog CSV");
  synth->add_option("--seed", seed, "Generator seed")->capture_default_str();
  synth->add_option("--rows", rows, "Number of products")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*summarize) {
      summary_cfg.render.terminal_period = !compat;
      setsumm::validate(summary_cfg);
      const auto mode = *setsumm::realize::parse_mode(mode_text);
      std::optional<std::string> price;
      if (!price_column.empty()) price = price_column;
      std::size_t dropped = 0;
      const auto base = setsumm::load_table(read_file(input), {category, price}, &dropped);
      if (dropped) std::cerr << "setsumm: dropped " << dropped << " row(s) without a usable price\n";
      const auto target = setsumm::filter(base, setsumm::parse_filter_query(base, filter_query));
      if (target.empty()) throw setsumm::Error(setsumm::Errc::EmptyInput, "filter matches no products");

      std::optional<setsumm::ProductTable> superset;
      if (!superset_path.empty()) {
        if (mode != setsumm::realize::Mode::Extended) std::cerr << "setsumm: --superset is only used in extended mode\n";
        const std::string name =
            superset_category.empty() ? std::filesystem::path(superset_path).stem().string() : superset_category;
        superset = setsumm::load_table(read_file(superset_path), {name, price});
      }
      // Without an explicit superset, a filtered run contrasts against the
      // unfiltered catalog (same rule as the HTTP service).
      const setsumm::ProductTable* contrast_with = superset ? &*superset : nullptr;
      if (!contrast_with && !target.filter_terms().empty()) contrast_with = &base;
      const auto doc = setsumm::build_document(target, mode, summary_cfg, contrast_with);
      if (as_json) std::cout << setsumm::json(doc).dump(2) << "\n";
      else std::cout << setsumm::realize::render(doc, summary_cfg.render) << "\n";
      return 0;
    }
    if (*eval) {
      const auto records = setsumm::evalkit::parse_choices(read_file(choices_path));
      const auto likert = setsumm::evalkit::parse_likert(read_file(likert_path));
      const auto report = setsumm::evalkit::evaluate(records, likert);
      std::cout << setsumm::json(report).dump(2) << "\n";
      return 0;
    }
    if (*serve) {
      service_cfg.data_dir = data_dir;
      if (!(max_upload_mb > 0)) throw setsumm::Error(setsumm::Errc::InvalidConfig, "--max-upload-mb must be > 0");
      service_cfg.max_upload_bytes = static_cast<std::size_t>(max_upload_mb * 1024 * 1024);
      setsumm::server::apply_environment(service_cfg);
      return setsumm::server::serve(service_cfg);
    }
    if (*synth) {
      std::cout << setsumm::synthetic::tv_catalog_csv(seed, rows);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "setsumm: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
