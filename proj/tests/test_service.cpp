#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include "counqer/error.hpp"
#include "counqer/kb/catalog.hpp"
#include "counqer/kb/json.hpp"
#include "counqer/kb/parser.hpp"
#include "counqer/service/query_service.hpp"
#include "counqer/stats/predicate_stats.hpp"

// after Eigen: <resolv.h> defines _res
#include <httplib.h>

using namespace counqer;
using namespace counqer::service;
using nlohmann::json;

namespace {

const std::string kOnt = "http://kb.example.org/ontology/";
const std::string kRes = "http://kb.example.org/resource/";

std::vector<kb::Triple> fixture_triples() {
  std::ifstream in(std::string(COUNQER_FIXTURE_DIR) + "/kb.nt");
  std::vector<kb::Triple> all;
  kb::parse_triples(in, {}, [&](kb::Triple&& t) { all.push_back(std::move(t)); }, [](kb::ParseError&&) {});
  return kb::materialize_inverses(kb::deduplicate(std::move(all)));
}

const std::vector<std::string> kEnumerating{kOnt + "child", kOnt + "award", kOnt + "spouse", kOnt + "almaMater",
                                            kOnt + "employee", kOnt + "episode", kOnt + "starring^-1"};
const std::vector<std::string> kCounting{kOnt + "numberOfChildren", kOnt + "numberOfAwards",
                                         kOnt + "numberOfEmployees", kOnt + "numberOfEpisodes",
                                         kOnt + "numberOfStudents"};

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto triples = fixture_triples();
    kb::TripleIndex index(triples);
    std::map<std::string, std::vector<kb::Triple>> by_predicate;
    for (const auto& t : triples) by_predicate[t.predicate.iri].push_back(t);
    std::vector<stats::PredicateStats> st;
    for (const auto& [iri, ts] : by_predicate) st.push_back(stats::compute_stats(ts));
    embeddings_ = new text::EmbeddingTable(
        text::EmbeddingTable::load_file(std::string(COUNQER_FIXTURE_DIR) + "/embeddings.txt"));
    align::AlignmentOptions opts;
    opts.embeddings = embeddings_;
    auto table = align::AlignmentTable::build(kEnumerating, kCounting, index, opts);
    ServiceConfig cfg;
    cfg.cors_origin = "http://localhost:5173";
    service_ = new QueryService(std::move(index), std::move(st), std::move(table), cfg);
  }
  static void TearDownTestSuite() {
    delete service_;
    delete embeddings_;
  }

  static json body(const Response& r) { return json::parse(r.body); }

  // A person holding both child and numberOfChildren.
  static std::string parent() {
    const auto pairs = align::build_cooccurrence({kOnt + "child"}, {kOnt + "numberOfChildren"}, index());
    return pairs.begin()->second.front().subject;
  }
  static const kb::TripleIndex& index() {
    static const kb::TripleIndex idx(fixture_triples());
    return idx;
  }

  static inline text::EmbeddingTable* embeddings_ = nullptr;
  static inline QueryService* service_ = nullptr;
};

}  // namespace

TEST_F(ServiceTest, Health) {
  const auto r = service_->health();
  EXPECT_EQ(r.status, 200);
  const auto b = body(r);
  EXPECT_EQ(b["status"], "ok");
  EXPECT_EQ(b["version"], "0.1.0");
  EXPECT_GT(b["pairs"].get<int>(), 5);
}

TEST_F(ServiceTest, PredicatesCarryKinds) {
  const auto b = body(service_->predicates(std::nullopt));
  bool saw_counting = false, saw_enumerating = false;
  for (const auto& p : b["predicates"]) {
    if (p["predicate"]["iri"] == kOnt + "numberOfChildren") saw_counting = p["kind"] == "counting";
    if (p["predicate"]["iri"] == kOnt + "child") saw_enumerating = p["kind"] == "enumerating";
  }
  EXPECT_TRUE(saw_counting);
  EXPECT_TRUE(saw_enumerating);
  EXPECT_TRUE(body(service_->predicates("wikidata"))["predicates"].empty());
}

TEST_F(ServiceTest, SpoErrors) {
  const auto unknown = service_->spo({"x", std::nullopt, kOnt + "nope"});
  EXPECT_EQ(unknown.status, 404);
  EXPECT_EQ(body(unknown)["error"], "unknown predicate");
  EXPECT_EQ(service_->spo({"x", "y", kOnt + "child"}).status, 400);
  EXPECT_EQ(service_->spo({std::nullopt, std::nullopt, kOnt + "child"}).status, 400);
  EXPECT_EQ(service_->spo({"x", std::nullopt, std::nullopt}).status, 400);
}

TEST_F(ServiceTest, SpoMatchesOfflineJoin) {
  const std::string s = parent();
  const auto result = service_->handle_spo({s, std::nullopt, kOnt + "numberOfChildren"});
  ASSERT_EQ(result["answers"].size(), index().objects(s, kOnt + "numberOfChildren").size());
  EXPECT_EQ(result["answers"][0]["type"], "integer");
  EXPECT_EQ(result["query"]["subject"], s);
  EXPECT_FALSE(result["query"].contains("object"));

  // oracle: engine ranking joined with the subject's own values
  align::AlignmentOptions opts;
  opts.embeddings = embeddings_;
  const auto table = align::AlignmentTable::build(kEnumerating, kCounting, index(), opts);
  const auto ranked = align::rank_alignments(table, kOnt + "numberOfChildren", Direction::CountingToEnumerating);
  ASSERT_EQ(result["alignments"].size(), ranked.size());
  ASSERT_FALSE(ranked.empty());
  double previous = 2.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& a = result["alignments"][i];
    EXPECT_EQ(a["predicate"]["iri"], ranked[i].e.iri);
    EXPECT_EQ(a["combined"].get<double>(), *ranked[i].combined_c2e);
    EXPECT_EQ(a["support"].get<std::size_t>(), ranked[i].support);
    json values = json::array();
    for (const auto& v : index().objects(s, ranked[i].e.iri)) values.push_back(kb::to_json(v));
    EXPECT_EQ(a["values"], values);
    EXPECT_EQ(a["has_values"].get<bool>(), !values.empty());
    EXPECT_LE(a["combined"].get<double>(), previous);
    previous = a["combined"].get<double>();
  }
  EXPECT_EQ(result["alignments"][0]["predicate"]["iri"], kOnt + "child");
}

TEST_F(ServiceTest, SpoByObjectUsesInverse) {
  const std::string s = parent();
  const auto children = index().objects(s, kOnt + "child");
  ASSERT_FALSE(children.empty());
  const auto child = std::get<kb::Entity>(children.front()).id;
  const auto result = service_->handle_spo({std::nullopt, child, kOnt + "child"});
  bool found = false;
  for (const auto& a : result["answers"]) found = found || a["value"] == s;
  EXPECT_TRUE(found) << result.dump();
}

TEST_F(ServiceTest, RepeatedQueriesAreIdentical) {
  const SpoQuery q{parent(), std::nullopt, kOnt + "numberOfChildren"};
  const auto first = service_->spo(q).body;
  std::vector<std::future<std::string>> runs;
  for (int i = 0; i < 4; ++i) runs.push_back(std::async(std::launch::async, [&] { return service_->spo(q).body; }));
  for (auto& f : runs) EXPECT_EQ(f.get(), first);
}

TEST_F(ServiceTest, Alignments) {
  const auto r = service_->alignments(kOnt + "child", "2");
  ASSERT_EQ(r.status, 200);
  const auto b = body(r);
  EXPECT_EQ(b["direction"], "enumerating_to_counting");
  EXPECT_LE(b["alignments"].size(), 2u);
  EXPECT_EQ(service_->alignments(kOnt + "child", "zero").status, 400);
  EXPECT_EQ(service_->alignments(kOnt + "child", "0").status, 400);
  EXPECT_EQ(service_->alignments(kOnt + "birthPlace", std::nullopt).status, 404);
  EXPECT_EQ(service_->alignments(std::nullopt, std::nullopt).status, 400);
}

TEST_F(ServiceTest, Distribution) {
  const auto r = service_->distribution(kOnt + "child/" + kOnt + "numberOfChildren");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "text/csv");
  EXPECT_EQ(r.body.substr(0, r.body.find('\n')), "subject,n_e,v_c,anomaly");
  EXPECT_EQ(service_->distribution(kOnt + "child/" + kOnt + "numberOfEpisodes").status, 404);
}

TEST_F(ServiceTest, HttpRoundTrip) {
  HttpServer server(*service_);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  for (int i = 0; i < 100 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");

  const std::string s = parent();
  const std::string path = "/spo?subject=" + httplib::detail::encode_query_param(s) +
                           "&predicate=" + httplib::detail::encode_query_param(kOnt + "numberOfChildren");
  auto spo = client.Get(path);
  ASSERT_TRUE(spo);
  EXPECT_EQ(spo->status, 200);
  EXPECT_EQ(spo->body, service_->spo({s, std::nullopt, kOnt + "numberOfChildren"}).body);

  auto missing = client.Get("/spo?predicate=" + httplib::detail::encode_query_param(kOnt + "zzz") + "&subject=a");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(json::parse(missing->body)["error"], "unknown predicate");

  auto dist = client.Get("/pairs/" + httplib::detail::encode_query_param(kOnt + "child") + "/" +
                         httplib::detail::encode_query_param(kOnt + "numberOfChildren") + "/distribution");
  ASSERT_TRUE(dist);
  EXPECT_EQ(dist->status, 200);
  EXPECT_EQ(dist->get_header_value("Content-Type"), "text/csv");

  auto nowhere = client.Get("/nowhere");
  ASSERT_TRUE(nowhere);
  EXPECT_EQ(nowhere->status, 404);
  EXPECT_TRUE(json::parse(nowhere->body).contains("error"));

  server.stop();
  worker.join();
}

TEST(ServiceLoad, MissingArtifactNamesPath) {
  ServiceConfig cfg;
  const auto dir = std::filesystem::temp_directory_path() / "counqer_service_load";
  std::filesystem::create_directories(dir);
  cfg.triples_path = std::string(COUNQER_FIXTURE_DIR) + "/kb.nt";
  cfg.stats_path = cfg.triples_path;
  cfg.alignments_path = (dir / "alignments.jsonl").string();
  try {
    QueryService::load(cfg);
    FAIL();
  } catch (const MissingArtifact& e) {
    EXPECT_NE(std::string(e.what()).find(cfg.alignments_path), std::string::npos);
  }
}
