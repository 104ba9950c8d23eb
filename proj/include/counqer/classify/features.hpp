#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "counqer/kb/triple.hpp"
#include "counqer/kinds.hpp"
#include "counqer/stats/predicate_stats.hpp"
#include "counqer/typing/type_profiler.hpp"

namespace counqer::classify {

/// Classifier inputs for one predicate. Column order is fixed per kind, see
/// feature_names().
struct FeatureVector {
  kb::PredicateId predicate;
  SetKind kind = SetKind::Enumerating;
  std::vector<std::string> names;
  Eigen::VectorXd values;
  std::vector<bool> missing_mask;
};

/// Column names, in order.
///
/// enumerating (19): ps_ratio, domain_{person,place,organization,event,work,other},
///   range_{same six}, func_{mean,max,min,p10,p90}, frac_entity
/// counting (18): ps_ratio, domain_{six}, frac_integer, intval_{mean,max,min,p10,p90},
///   intsubj_{mean,max,min,p10,p90}
std::vector<std::string> feature_names(SetKind kind);

/// Index of a class in the six-way one-hot block; Thing and Literal fold into
/// "other".
int one_hot_slot(typing::HighLevelClass c);

/// Builds the feature vector. A missing ratio and an undefined integer
/// summary become zeros with their mask bits set. When `embedding` is given
/// its components are appended as emb_0.. columns. Throws if stats and
/// profile describe different predicates, or if the stats are empty.
FeatureVector assemble_features(const stats::PredicateStats& stats, const typing::TypeProfile& profile,
                                std::optional<double> ratio, SetKind kind,
                                const std::optional<Eigen::VectorXd>& embedding = std::nullopt);

struct LabeledExample {
  FeatureVector features;
  bool label = false;
  kb::KbTag kb;
};

nlohmann::json to_json(const FeatureVector& f);
FeatureVector feature_vector_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LabeledExample& e);
LabeledExample labeled_example_from_json(const nlohmann::json& j);

/// Stacks feature values row-wise.
Eigen::MatrixXd design_matrix(std::span<const LabeledExample> examples);
Eigen::VectorXd label_vector(std::span<const LabeledExample> examples);

}  // namespace counqer::classify
