#include "counqer/classify/features.hpp"

#include "counqer/error.hpp"
#include "counqer/kb/json.hpp"

namespace counqer::classify {

namespace {

constexpr const char* kSlots[] = {"person", "place", "organization", "event", "work", "other"};
constexpr const char* kFive[] = {"mean", "max", "min", "p10", "p90"};

void push_five(std::vector<double>& v, const stats::FiveNumber& f) {
  v.push_back(f.mean);
  v.push_back(f.max);
  v.push_back(f.min);
  v.push_back(f.p10);
  v.push_back(f.p90);
}

void push_one_hot(std::vector<double>& v, typing::HighLevelClass c) {
  const int slot = one_hot_slot(c);
  for (int i = 0; i < 6; ++i) v.push_back(i == slot ? 1.0 : 0.0);
}

}  // namespace

std::vector<std::string> feature_names(SetKind kind) {
  std::vector<std::string> names{"ps_ratio"};
  for (const char* s : kSlots) names.push_back(std::string("domain_") + s);
  if (kind == SetKind::Enumerating) {
    for (const char* s : kSlots) names.push_back(std::string("range_") + s);
    for (const char* s : kFive) names.push_back(std::string("func_") + s);
    names.emplace_back("frac_entity");
  } else {
    names.emplace_back("frac_integer");
    for (const char* s : kFive) names.push_back(std::string("intval_") + s);
    for (const char* s : kFive) names.push_back(std::string("intsubj_") + s);
  }
  return names;
}

int one_hot_slot(typing::HighLevelClass c) {
  switch (c) {
    case typing::HighLevelClass::Person: return 0;
    case typing::HighLevelClass::Place: return 1;
    case typing::HighLevelClass::Organization: return 2;
    case typing::HighLevelClass::Event: return 3;
    case typing::HighLevelClass::Work: return 4;
    default: return 5;
  }
}

FeatureVector assemble_features(const stats::PredicateStats& stats, const typing::TypeProfile& profile,
                                std::optional<double> ratio, SetKind kind,
                                const std::optional<Eigen::VectorXd>& embedding) {
  if (stats.predicate.iri != profile.predicate.iri) {
    throw Error("assemble_features: stats for " + stats.predicate.iri + " but profile for " + profile.predicate.iri);
  }
  if (stats.triple_count == 0) throw Error("assemble_features: no statistics for " + stats.predicate.iri);

  FeatureVector f;
  f.predicate = stats.predicate;
  f.kind = kind;
  f.names = feature_names(kind);

  std::vector<double> v;
  std::vector<bool> mask;
  v.push_back(ratio.value_or(0.0));
  mask.push_back(!ratio.has_value());
  push_one_hot(v, profile.domain);
  if (kind == SetKind::Enumerating) {
    push_one_hot(v, profile.range);
    push_five(v, stats.functionality);
    v.push_back(stats.datatypes.frac_entity);
  } else {
    v.push_back(stats.datatypes.frac_integer);
    push_five(v, stats.int_values);
    push_five(v, stats.int_per_subject);
  }
  mask.resize(v.size(), false);
  if (kind == SetKind::Counting) {
    // intval_* start after ratio(1) + domain(6) + frac_integer(1).
    for (std::size_t i = 0; i < 5; ++i) mask[8 + i] = !stats.int_values.defined;
    for (std::size_t i = 0; i < 5; ++i) mask[13 + i] = !stats.int_per_subject.defined;
  }

  if (embedding) {
    for (Eigen::Index i = 0; i < embedding->size(); ++i) {
      f.names.push_back("emb_" + std::to_string(i));
      v.push_back((*embedding)[i]);
      mask.push_back(false);
    }
  }

  f.values = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  f.missing_mask = std::move(mask);
  return f;
}

nlohmann::json to_json(const FeatureVector& f) {
  std::vector<double> values(f.values.data(), f.values.data() + f.values.size());
  std::vector<bool> mask = f.missing_mask;
  return nlohmann::json{{"predicate", kb::to_json(f.predicate)},
                        {"kind", std::string(kind_name(f.kind))},
                        {"names", f.names},
                        {"values", values},
                        {"missing", mask}};
}

FeatureVector feature_vector_from_json(const nlohmann::json& j) {
  FeatureVector f;
  f.predicate = kb::predicate_from_json(j.at("predicate"));
  f.kind = parse_kind(j.at("kind").get<std::string>());
  f.names = j.at("names").get<std::vector<std::string>>();
  auto values = j.at("values").get<std::vector<double>>();
  f.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  f.missing_mask = j.at("missing").get<std::vector<bool>>();
  if (f.names.size() != values.size() || f.missing_mask.size() != values.size()) {
    throw Error("feature vector for " + f.predicate.iri + ": names, values and mask differ in length");
  }
  return f;
}

nlohmann::json to_json(const LabeledExample& e) {
  return nlohmann::json{{"features", to_json(e.features)}, {"label", e.label}, {"kb", e.kb.name()}};
}

LabeledExample labeled_example_from_json(const nlohmann::json& j) {
  LabeledExample e;
  e.features = feature_vector_from_json(j.at("features"));
  e.label = j.at("label").get<bool>();
  e.kb = kb::KbTag::parse(j.value("kb", e.features.predicate.kb.name()));
  return e;
}

Eigen::MatrixXd design_matrix(std::span<const LabeledExample> examples) {
  if (examples.empty()) return {};
  const auto d = examples.front().features.values.size();
  Eigen::MatrixXd X(static_cast<Eigen::Index>(examples.size()), d);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].features.values.size() != d) throw Error("design_matrix: ragged feature vectors");
    X.row(static_cast<Eigen::Index>(i)) = examples[i].features.values.transpose();
  }
  return X;
}

Eigen::VectorXd label_vector(std::span<const LabeledExample> examples) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) y[static_cast<Eigen::Index>(i)] = examples[i].label ? 1.0 : 0.0;
  return y;
}

}  // namespace counqer::classify
