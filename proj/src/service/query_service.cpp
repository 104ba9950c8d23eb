#include "counqer/service/query_service.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include <httplib.h>

#include "counqer/error.hpp"
#include "counqer/kb/json.hpp"
#include "counqer/version.hpp"

namespace counqer::service {

namespace {

Response json_response(int status, const nlohmann::json& body) { return {status, body.dump(), "application/json"}; }

Response error_response(int status, const std::string& message) {
  return json_response(status, nlohmann::json{{"error", message}});
}

void require_file(const std::string& path) {
  if (path.empty() || !std::filesystem::is_regular_file(path)) throw MissingArtifact("serve", path);
}

std::optional<Direction> source_direction(const align::AlignmentTable& table, std::string_view iri) {
  if (table.is_source(iri, Direction::CountingToEnumerating)) return Direction::CountingToEnumerating;
  if (table.is_source(iri, Direction::EnumeratingToCounting)) return Direction::EnumeratingToCounting;
  return std::nullopt;
}

std::string inverse_iri(const kb::PredicateId& p) {
  return p.inverted ? p.forward_iri() : p.iri + std::string(kb::kInverseMarker);
}

}  // namespace

QueryService::QueryService(kb::TripleIndex index, std::vector<stats::PredicateStats> stats,
                           align::AlignmentTable table, ServiceConfig config)
    : index_(std::move(index)), stats_(std::move(stats)), table_(std::move(table)), config_(std::move(config)) {}

std::unique_ptr<QueryService> QueryService::load(const ServiceConfig& config) {
  require_file(config.triples_path);
  require_file(config.stats_path);
  require_file(config.alignments_path);

  kb::ParseOptions opts;
  opts.kb = kb::KbTag::parse(config.kb);
  opts.file_name = config.triples_path;
  auto index = kb::TripleIndex::load(config.triples_path, opts);

  std::ifstream stats_in(config.stats_path);
  auto stats = stats::read_stats(stats_in);
  std::ifstream table_in(config.alignments_path);
  auto table = align::read_table(table_in);
  return std::make_unique<QueryService>(std::move(index), std::move(stats), std::move(table), config);
}

Response QueryService::health() const {
  return json_response(200, {{"status", "ok"},
                             {"name", "counqer"},
                             {"version", std::string(kVersion)},
                             {"triples", index_.triples().size()},
                             {"predicates", index_.predicates().size()},
                             {"pairs", table_.pairs().size()}});
}

Response QueryService::predicates(const std::optional<std::string>& kb) const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : stats_) {
    if (kb && s.predicate.kb.name() != *kb) continue;
    nlohmann::json item{{"predicate", kb::to_json(s.predicate)},
                        {"triple_count", s.triple_count},
                        {"subject_count", s.subject_count}};
    if (table_.is_source(s.predicate.iri, Direction::CountingToEnumerating)) item["kind"] = "counting";
    else if (table_.is_source(s.predicate.iri, Direction::EnumeratingToCounting)) item["kind"] = "enumerating";
    else item["kind"] = nullptr;
    list.push_back(std::move(item));
  }
  return json_response(200, {{"predicates", list}});
}

nlohmann::json QueryService::handle_spo(const SpoQuery& query) const {
  if (!query.predicate || query.predicate->empty()) throw ServiceError(400, "missing predicate");
  if (query.subject.has_value() == query.object.has_value()) {
    throw ServiceError(400, "give exactly one of subject or object");
  }
  if (!index_.has_predicate(*query.predicate)) throw ServiceError(404, "unknown predicate");
  const kb::PredicateId& p = index_.predicate(*query.predicate);

  nlohmann::json result;
  nlohmann::json q{{"predicate", kb::to_json(p)}};
  nlohmann::json answers = nlohmann::json::array();
  std::string anchor;
  std::string lookup_iri;

  if (query.subject) {
    anchor = *query.subject;
    lookup_iri = p.iri;
    q["subject"] = anchor;
    for (const auto& v : index_.objects(anchor, p.iri)) answers.push_back(kb::to_json(v));
  } else {
    anchor = *query.object;
    q["object"] = anchor;
    const std::string inv = inverse_iri(p);
    if (index_.has_predicate(inv)) {
      lookup_iri = inv;
      for (const auto& v : index_.objects(anchor, inv)) answers.push_back(kb::to_json(v));
    } else {
      for (const kb::Triple* t : index_.triples_of(p.iri)) {
        const auto* e = std::get_if<kb::Entity>(&t->object);
        if (e && e->id == anchor) answers.push_back(kb::to_json(kb::ObjectValue{kb::Entity{t->subject}}));
      }
    }
  }

  nlohmann::json aligned = nlohmann::json::array();
  if (!lookup_iri.empty()) {
    if (const auto d = source_direction(table_, lookup_iri)) {
      const auto ranked =
          align::rank_alignments(table_, lookup_iri, *d, config_.k, config_.min_support, config_.combine);
      for (const auto& pair : ranked) {
        const auto& target = pair.target(*d);
        nlohmann::json values = nlohmann::json::array();
        for (const auto& v : index_.objects(anchor, target.iri)) values.push_back(kb::to_json(v));
        const bool has_values = !values.empty();
        aligned.push_back({{"predicate", kb::to_json(target)},
                           {"combined", pair.combined(*d).value_or(0.0)},
                           {"support", pair.support},
                           {"values", std::move(values)},
                           {"has_values", has_values}});
      }
    }
  }

  result["query"] = std::move(q);
  result["answers"] = std::move(answers);
  result["alignments"] = std::move(aligned);
  return result;
}

Response QueryService::spo(const SpoQuery& query) const {
  try {
    return json_response(200, handle_spo(query));
  } catch (const ServiceError& e) {
    return error_response(e.status(), e.what());
  }
}

Response QueryService::alignments(const std::optional<std::string>& predicate,
                                  const std::optional<std::string>& k) const {
  if (!predicate || predicate->empty()) return error_response(400, "missing predicate");
  std::size_t limit = config_.k;
  if (k) {
    const auto [ptr, ec] = std::from_chars(k->data(), k->data() + k->size(), limit);
    if (ec != std::errc{} || ptr != k->data() + k->size() || limit == 0) return error_response(400, "invalid k");
  }
  const auto d = source_direction(table_, *predicate);
  if (!d) return error_response(404, "unknown predicate");
  const auto ranked = align::rank_alignments(table_, *predicate, *d, limit, config_.min_support, config_.combine);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& p : ranked) list.push_back(align::to_json(p));
  return json_response(200, {{"predicate", *predicate},
                             {"direction", std::string(direction_name(*d))},
                             {"alignments", list}});
}

Response QueryService::distribution(std::string_view pair_path) const {
  for (std::size_t pos = pair_path.find('/'); pos != std::string_view::npos; pos = pair_path.find('/', pos + 1)) {
    const std::string e(pair_path.substr(0, pos));
    const std::string c(pair_path.substr(pos + 1));
    if (!table_.find(e, c)) continue;
    const auto se = align::collect_subjects(index_, e, config_.aggregation);
    const auto sc = align::collect_subjects(index_, c, config_.aggregation);
    const auto records = align::join_records(se, sc);
    return {200, align::export_value_distribution(records), "text/csv"};
  }
  return error_response(404, "unknown pair");
}

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

}  // namespace

HttpServer::HttpServer(const QueryService& service) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  const auto& cfg = service.config();
  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  srv.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  srv.set_default_headers({{"Access-Control-Allow-Origin", cfg.cors_origin},
                           {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});

  const QueryService* svc = &service;
  srv.Get("/health", [svc](const httplib::Request&, httplib::Response& res) { reply(res, svc->health()); });
  srv.Get("/predicates", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->predicates(param(req, "kb")));
  });
  srv.Get("/spo", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->spo({param(req, "subject"), param(req, "object"), param(req, "predicate")}));
  });
  srv.Get("/alignments", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->alignments(param(req, "predicate"), param(req, "k")));
  });
  srv.Get(R"(/pairs/(.+)/distribution)", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->distribution(req.matches[1].str()));
  });
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(nlohmann::json{{"error", httplib::status_message(res.status)}}.dump(), "application/json");
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace counqer::service
