#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "counqer/kb/triple.hpp"
#include "counqer/kinds.hpp"

namespace counqer::eval {

enum class ClassResponse { Yes, MaybeYes, DoNotKnow, MaybeNo, No };
enum class Relatedness { High, Moderate, Low, None };
enum class Completeness { Complete, Incomplete, Unrelated };

// Grades: Yes 1, Maybe yes 0.75, Do not know 0.5, Maybe no 0.25, No 0.
double grade(ClassResponse r);
// High 1, Moderate 0.67, Low 0.33, None 0.
double grade(Relatedness r);
// Complete 1, Incomplete 0.5, Unrelated 0.
double grade(Completeness r);

struct ClassJudgment {
  kb::PredicateId predicate;
  SetKind kind = SetKind::Counting;
  std::vector<ClassResponse> responses;
};

struct RelevanceResponse {
  Relatedness relatedness = Relatedness::None;
  Completeness completeness = Completeness::Unrelated;
};

struct RelevanceJudgment {
  std::string source;
  std::string target;
  Direction direction = Direction::CountingToEnumerating;
  std::vector<RelevanceResponse> responses;
};

/// Mean grade; the label is dropped when the mean lies strictly inside
/// (0.4, 0.6), otherwise label = mean >= 0.6.
struct AggregatedClass {
  double score = 0.0;
  std::optional<bool> label;  // empty = dropped
};

AggregatedClass aggregate_class_judgments(const ClassJudgment& j);

/// Mean over both grades of every response.
double aggregate_relevance(const RelevanceJudgment& j);

ClassJudgment class_judgment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClassJudgment& j);
RelevanceJudgment relevance_judgment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RelevanceJudgment& j);

std::vector<ClassJudgment> read_class_judgments(std::istream& in);
std::vector<RelevanceJudgment> read_relevance_judgments(std::istream& in);

}  // namespace counqer::eval
