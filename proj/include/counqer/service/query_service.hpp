#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "counqer/align/alignment.hpp"
#include "counqer/kb/triple_index.hpp"
#include "counqer/stats/predicate_stats.hpp"

namespace counqer::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t workers = 4;
  std::string cors_origin = "*";

  std::string triples_path;
  std::string stats_path;
  std::string alignments_path;
  std::string kb = "custom";

  std::size_t k = 3;
  std::size_t min_support = 50;
  align::CombineConfig combine;
  align::ValueAggregation aggregation = align::ValueAggregation::Max;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct SpoQuery {
  std::optional<std::string> subject;
  std::optional<std::string> object;
  std::optional<std::string> predicate;
};

/// Request handlers over immutable loaded artifacts. Every handler is a pure
/// function of the artifacts and its arguments.
class QueryService {
 public:
  QueryService(kb::TripleIndex index, std::vector<stats::PredicateStats> stats, align::AlignmentTable table,
               ServiceConfig config);

  /// Loads the triple index, stats and alignment table named in the config.
  /// Throws MissingArtifact naming the first absent file.
  static std::unique_ptr<QueryService> load(const ServiceConfig& config);

  Response health() const;
  Response predicates(const std::optional<std::string>& kb) const;
  Response spo(const SpoQuery& query) const;
  Response alignments(const std::optional<std::string>& predicate, const std::optional<std::string>& k) const;
  /// `pair_path` is "<e iri>/<c iri>"; IRIs may themselves contain '/'.
  Response distribution(std::string_view pair_path) const;

  /// The SpoResult document. Throws ServiceError for 400/404 outcomes.
  nlohmann::json handle_spo(const SpoQuery& query) const;

  const ServiceConfig& config() const { return config_; }

 private:
  kb::TripleIndex index_;
  std::vector<stats::PredicateStats> stats_;
  align::AlignmentTable table_;
  ServiceConfig config_;
};

class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

/// HTTP front end. bind() picks the port (0 = any free port); run() blocks
/// until stop() is called from another thread.
class HttpServer {
 public:
  explicit HttpServer(const QueryService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int bind(const std::string& host, int port);
  bool run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace counqer::service
