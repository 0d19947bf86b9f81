#pragma once

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "httplib.h"

#include "setsumm/error.hpp"
#include "setsumm/ingest.hpp"
#include "setsumm/pipeline.hpp"
#include "setsumm/serialize.hpp"

namespace setsumm::server {

namespace fs = std::filesystem;

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  fs::path data_dir = "data";
  std::size_t max_upload_bytes = 50u * 1024u * 1024u;
  std::size_t default_page_size = 50;
  std::size_t max_page_size = 1000;
  SummaryConfig summary;
};

// SETSUMM_PORT and SETSUMM_DATA_DIR override the file/flag configuration.
inline void apply_environment(ServiceConfig& config) {
  if (const char* port = std::getenv("SETSUMM_PORT"); port && *port) {
    const auto v = text::parse_number(port);
    if (!v || *v != static_cast<int>(*v) || *v < 0 || *v > 65535) {
      throw Error(Errc::InvalidConfig, std::string("SETSUMM_PORT is not a port: ") + port);
    }
    config.port = static_cast<int>(*v);
  }
  if (const char* dir = std::getenv("SETSUMM_DATA_DIR"); dir && *dir) config.data_dir = dir;
}

inline void validate(const ServiceConfig& config) {
  if (config.port < 0 || config.port > 65535) throw Error(Errc::InvalidConfig, "port must be in [0, 65535]");
  if (config.max_upload_bytes == 0) throw Error(Errc::InvalidConfig, "upload limit must be > 0");
  if (config.default_page_size == 0 || config.default_page_size > config.max_page_size) {
    throw Error(Errc::InvalidConfig, "page size must be in [1, max_page_size]");
  }
  setsumm::validate(config.summary);
}

struct DatasetEntry {
  std::string id;
  std::string category;
  fs::path source;
  std::optional<std::string> price_column;
  std::string loaded_at;
  std::size_t dropped_rows = 0;
  std::shared_ptr<const ProductTable> table;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string slugify(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    else if (!out.empty() && out.back() != '-') out.push_back('-');
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "dataset" : out;
}

// Maps dataset ids to immutable table snapshots. Readers get a shared_ptr to
// the entry current at lookup time; uploads and replacements swap the whole
// entry under the write lock. Each dataset's CSV is kept under the data
// directory with a JSON manifest, and the registry rebuilds from them.
class DatasetRegistry {
 public:
  explicit DatasetRegistry(fs::path data_dir) : dir_(std::move(data_dir)) {}

  const fs::path& data_dir() const { return dir_; }

  // Re-ingests every manifest entry. Entries that fail to load are reported
  // on stderr and skipped.
  void load_from_disk() {
    std::scoped_lock writer(write_mu_);
    fs::create_directories(dir_);
    const fs::path manifest = dir_ / "manifest.json";
    if (!fs::exists(manifest)) return;
    std::ifstream in(manifest);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("datasets")) {
      throw Error(Errc::ParseError, "corrupt manifest " + manifest.string());
    }
    std::map<std::string, std::shared_ptr<const DatasetEntry>> loaded;
    for (const auto& d : j.at("datasets")) {
      auto entry = std::make_shared<DatasetEntry>();
      entry->id = d.at("id").get<std::string>();
      entry->category = d.at("category").get<std::string>();
      entry->source = dir_ / d.at("file").get<std::string>();
      if (d.contains("price_column") && !d.at("price_column").is_null()) {
        entry->price_column = d.at("price_column").get<std::string>();
      }
      try {
        const std::string raw = read_file(entry->source);
        entry->table = std::make_shared<const ProductTable>(
            load_table(raw, {entry->category, entry->price_column}, &entry->dropped_rows));
        entry->loaded_at = utc_timestamp();
        loaded[entry->id] = std::move(entry);
      } catch (const std::exception& e) {
        std::cerr << "setsumm: skipping dataset '" << entry->id << "': " << e.what() << "\n";
      }
    }
    std::unique_lock lock(mu_);
    entries_ = std::move(loaded);
  }

  std::shared_ptr<const DatasetEntry> get(const std::string& id) const {
    std::shared_lock lock(mu_);
    const auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : it->second;
  }

  std::vector<std::shared_ptr<const DatasetEntry>> list() const {
    std::shared_lock lock(mu_);
    std::vector<std::shared_ptr<const DatasetEntry>> out;
    for (const auto& [id, e] : entries_) out.push_back(e);
    return out;
  }

  // Parses before touching disk or the map, so a bad upload changes nothing.
  std::shared_ptr<const DatasetEntry> add(const std::string& raw_csv, const std::string& category,
                                          std::optional<std::string> price_column = std::nullopt) {
    auto entry = ingest(raw_csv, category, std::move(price_column));
    std::scoped_lock writer(write_mu_);
    std::string id = slugify(category);
    {
      std::shared_lock lock(mu_);
      for (int n = 2; entries_.count(id); ++n) id = slugify(category) + "-" + std::to_string(n);
    }
    entry->id = id;
    return commit(std::move(entry), raw_csv);
  }

  // Atomically replaces an existing dataset. Returns nullptr for unknown ids.
  std::shared_ptr<const DatasetEntry> replace(const std::string& id, const std::string& raw_csv,
                                              std::optional<std::string> category = std::nullopt,
                                              std::optional<std::string> price_column = std::nullopt) {
    const auto current = get(id);
    if (!current) return nullptr;
    auto entry = ingest(raw_csv, category.value_or(current->category),
                        price_column ? price_column : current->price_column);
    entry->id = id;
    std::scoped_lock writer(write_mu_);
    return commit(std::move(entry), raw_csv);
  }

 private:
  static std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static void write_atomically(const fs::path& p, const std::string& bytes) {
    const fs::path tmp = p.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::ParseError, "cannot write " + tmp.string());
      out << bytes;
    }
    fs::rename(tmp, p);
  }

  static std::shared_ptr<DatasetEntry> ingest(const std::string& raw, const std::string& category,
                                              std::optional<std::string> price_column) {
    auto entry = std::make_shared<DatasetEntry>();
    entry->category = category;
    entry->price_column = std::move(price_column);
    entry->table = std::make_shared<const ProductTable>(
        load_table(raw, {category, entry->price_column}, &entry->dropped_rows));
    entry->loaded_at = utc_timestamp();
    return entry;
  }

  // Caller holds write_mu_.
  std::shared_ptr<const DatasetEntry> commit(std::shared_ptr<DatasetEntry> entry, const std::string& raw) {
    fs::create_directories(dir_);
    const std::string file = entry->id + ".csv";
    entry->source = dir_ / file;
    write_atomically(entry->source, raw);

    std::shared_ptr<const DatasetEntry> frozen = std::move(entry);
    std::map<std::string, std::shared_ptr<const DatasetEntry>> next;
    {
      std::shared_lock lock(mu_);
      next = entries_;
    }
    next[frozen->id] = frozen;
    json manifest{{"datasets", json::array()}};
    for (const auto& [id, e] : next) {
      manifest["datasets"].push_back({{"id", id},
                                      {"category", e->category},
                                      {"file", e->source.filename().string()},
                                      {"price_column", e->price_column ? json(*e->price_column) : json(nullptr)},
                                      {"loaded_at", e->loaded_at}});
    }
    write_atomically(dir_ / "manifest.json", manifest.dump(2) + "\n");
    std::unique_lock lock(mu_);
    entries_[frozen->id] = frozen;
    return frozen;
  }

  fs::path dir_;
  mutable std::shared_mutex mu_;
  std::mutex write_mu_;
  std::map<std::string, std::shared_ptr<const DatasetEntry>> entries_;
};

struct Reply {
  int status = 200;
  json body;
};

inline Reply error_reply(int status, const std::string& message) { return {status, {{"error", message}}}; }

inline int status_for(Errc code) {
  switch (code) {
    case Errc::EmptyInput:
    case Errc::InsufficientData:
      return 422;
    default:
      return 400;
  }
}

// HTTP-independent request handlers plus their httplib routing.
class Service {
 public:
  Service(ServiceConfig config, DatasetRegistry& registry) : config_(std::move(config)), registry_(registry) {
    validate(config_);
  }

  const ServiceConfig& config() const { return config_; }

  Reply list_datasets() const {
    json out = json::array();
    for (const auto& e : registry_.list()) {
      out.push_back({{"id", e->id}, {"category", e->category}, {"product_count", e->table->size()}});
    }
    return {200, out};
  }

  Reply upload(const std::string& body, const std::string& category,
               std::optional<std::string> price_column) {
    if (category.empty()) return error_reply(400, "category is required (query 'category' or header 'X-Category')");
    if (body.size() > config_.max_upload_bytes) return error_reply(413, "upload exceeds limit");
    return guarded([&] {
      const auto e = registry_.add(body, category, std::move(price_column));
      return Reply{201, entry_json(*e)};
    });
  }

  Reply replace(const std::string& id, const std::string& body, std::optional<std::string> category,
                std::optional<std::string> price_column) {
    if (body.size() > config_.max_upload_bytes) return error_reply(413, "upload exceeds limit");
    return guarded([&] {
      const auto e = registry_.replace(id, body, std::move(category), std::move(price_column));
      if (!e) return error_reply(404, "unknown dataset '" + id + "'");
      return Reply{200, entry_json(*e)};
    });
  }

  Reply features(const std::string& id) const {
    const auto e = registry_.get(id);
    if (!e) return error_reply(404, "unknown dataset '" + id + "'");
    return {200, {{"id", id}, {"features", features_to_json(*e->table)}}};
  }

  Reply products(const std::string& id, const std::string& filter_query, std::optional<std::string> offset,
                 std::optional<std::string> limit) const {
    const auto e = registry_.get(id);
    if (!e) return error_reply(404, "unknown dataset '" + id + "'");
    std::size_t off = 0;
    std::size_t lim = config_.default_page_size;
    if (offset && !parse_index(*offset, off)) return error_reply(400, "offset must be a non-negative integer");
    if (limit && (!parse_index(*limit, lim) || lim == 0 || lim > config_.max_page_size)) {
      return error_reply(400, "limit must be in [1, " + std::to_string(config_.max_page_size) + "]");
    }
    return guarded([&] {
      const auto filtered = filter(*e->table, parse_filter_query(*e->table, filter_query));
      json body = products_to_json(filtered, off, lim);
      body["id"] = id;
      return Reply{200, std::move(body)};
    });
  }

  Reply summary(const std::string& id, const std::string& mode_text, const std::string& filter_query) const {
    const auto e = registry_.get(id);
    if (!e) return error_reply(404, "unknown dataset '" + id + "'");
    const auto mode = realize::parse_mode(mode_text.empty() ? "full" : mode_text);
    if (!mode) return error_reply(400, "mode must be baseline, full or extended");
    return guarded([&] {
      const ProductTable& full = *e->table;
      const auto predicates = parse_filter_query(full, filter_query);
      const auto target = filter(full, predicates);
      if (target.empty()) throw Error(Errc::EmptyInput, "filter matches no products");
      const ProductTable* superset = predicates.empty() ? nullptr : &full;
      const auto doc = build_document(target, *mode, config_.summary, superset);
      return Reply{200,
                   {{"id", id},
                    {"mode", std::string(realize::to_string(*mode))},
                    {"filter", filter_query},
                    {"product_count", target.size()},
                    {"summary", realize::render(doc, config_.summary.render)},
                    {"document", doc}}};
    });
  }

  void mount(httplib::Server& svr) {
    svr.set_payload_max_length(config_.max_upload_bytes);
    auto send = [](httplib::Response& res, const Reply& r) {
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json; charset=utf-8");
    };
    auto param = [](const httplib::Request& req, const char* name) -> std::optional<std::string> {
      if (req.has_param(name)) return req.get_param_value(name);
      return std::nullopt;
    };
    auto header = [](const httplib::Request& req, const char* name) -> std::optional<std::string> {
      if (req.has_header(name)) return req.get_header_value(name);
      return std::nullopt;
    };

    svr.Get("/datasets", [this, send](const httplib::Request&, httplib::Response& res) { send(res, list_datasets()); });
    svr.Post("/datasets", [this, send, param, header](const httplib::Request& req, httplib::Response& res) {
      auto category = param(req, "category");
      if (!category) category = header(req, "X-Category");
      auto price = param(req, "price_column");
      if (!price) price = header(req, "X-Price-Column");
      send(res, upload(req.body, category.value_or(""), price));
    });
    svr.Put(R"(/datasets/([^/]+))", [this, send, param, header](const httplib::Request& req, httplib::Response& res) {
      auto category = param(req, "category");
      if (!category) category = header(req, "X-Category");
      auto price = param(req, "price_column");
      if (!price) price = header(req, "X-Price-Column");
      send(res, replace(req.matches[1], req.body, category, price));
    });
    svr.Get(R"(/datasets/([^/]+)/features)", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, features(req.matches[1]));
    });
    svr.Get(R"(/datasets/([^/]+)/products)", [this, send, param](const httplib::Request& req, httplib::Response& res) {
      send(res, products(req.matches[1], param(req, "filter").value_or(""), param(req, "offset"), param(req, "limit")));
    });
    svr.Get(R"(/datasets/([^/]+)/summary)", [this, send, param](const httplib::Request& req, httplib::Response& res) {
      send(res, summary(req.matches[1], param(req, "mode").value_or("full"), param(req, "filter").value_or("")));
    });
    svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      const std::string msg = res.status == 413 ? "upload exceeds limit" : "no such endpoint";
      res.set_content(json{{"error", msg}}.dump(), "application/json; charset=utf-8");
    });
  }

 private:
  static bool parse_index(const std::string& s, std::size_t& out) {
    const auto v = text::parse_number(s);
    if (!v || *v < 0 || *v != std::floor(*v) || *v > 1e12) return false;
    out = static_cast<std::size_t>(*v);
    return true;
  }

  static json entry_json(const DatasetEntry& e) {
    return {{"id", e.id},
            {"category", e.category},
            {"product_count", e.table->size()},
            {"dropped_rows", e.dropped_rows},
            {"loaded_at", e.loaded_at}};
  }

  template <class F>
  static Reply guarded(F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      return error_reply(status_for(e.code()), e.what());
    }
  }

  ServiceConfig config_;
  DatasetRegistry& registry_;
};

// Loads the registry and blocks serving HTTP until the process is stopped.
inline int serve(const ServiceConfig& config) {
  validate(config);
  if (!fs::is_directory(config.data_dir)) {
    throw Error(Errc::InvalidConfig, "data directory " + config.data_dir.string() + " does not exist");
  }
  DatasetRegistry registry(config.data_dir);
  registry.load_from_disk();
  Service service(config, registry);
  httplib::Server svr;
  service.mount(svr);
  std::cerr << "setsumm: serving " << registry.list().size() << " dataset(s) on " << config.host << ":"
            << config.port << "\n";
  if (!svr.listen(config.host, config.port)) {
    throw Error(Errc::InvalidConfig, "cannot bind " + config.host + ":" + std::to_string(config.port));
  }
  return 0;
}

}  // namespace setsumm::server
