#include "counqer/eval/judgments.hpp"

#include <algorithm>
#include <cctype>
#include <istream>

#include "counqer/error.hpp"
#include "counqer/kb/json.hpp"

namespace counqer::eval {

namespace {

// "Maybe yes", "maybe_yes" and "MaybeYes" all normalise to "maybeyes".
std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

ClassResponse parse_class_response(std::string_view s) {
  const auto k = squash(s);
  if (k == "yes") return ClassResponse::Yes;
  if (k == "maybeyes") return ClassResponse::MaybeYes;
  if (k == "donotknow" || k == "dontknow") return ClassResponse::DoNotKnow;
  if (k == "maybeno") return ClassResponse::MaybeNo;
  if (k == "no") return ClassResponse::No;
  throw Error("unknown class judgment response: " + std::string(s));
}

std::string_view class_response_name(ClassResponse r) {
  switch (r) {
    case ClassResponse::Yes: return "Yes";
    case ClassResponse::MaybeYes: return "MaybeYes";
    case ClassResponse::DoNotKnow: return "DoNotKnow";
    case ClassResponse::MaybeNo: return "MaybeNo";
    case ClassResponse::No: return "No";
  }
  return "DoNotKnow";
}

Relatedness parse_relatedness(std::string_view s) {
  const auto k = squash(s);
  if (k == "high") return Relatedness::High;
  if (k == "moderate") return Relatedness::Moderate;
  if (k == "low") return Relatedness::Low;
  if (k == "none") return Relatedness::None;
  throw Error("unknown relatedness response: " + std::string(s));
}

std::string_view relatedness_name(Relatedness r) {
  switch (r) {
    case Relatedness::High: return "High";
    case Relatedness::Moderate: return "Moderate";
    case Relatedness::Low: return "Low";
    case Relatedness::None: return "None";
  }
  return "None";
}

Completeness parse_completeness(std::string_view s) {
  const auto k = squash(s);
  if (k == "complete") return Completeness::Complete;
  if (k == "incomplete") return Completeness::Incomplete;
  if (k == "unrelated") return Completeness::Unrelated;
  throw Error("unknown completeness response: " + std::string(s));
}

std::string_view completeness_name(Completeness c) {
  switch (c) {
    case Completeness::Complete: return "Complete";
    case Completeness::Incomplete: return "Incomplete";
    case Completeness::Unrelated: return "Unrelated";
  }
  return "Unrelated";
}

template <typename T, typename Parse>
std::vector<T> read_lines(std::istream& in, Parse parse) {
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw Error("judgment line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

double grade(ClassResponse r) {
  switch (r) {
    case ClassResponse::Yes: return 1.0;
    case ClassResponse::MaybeYes: return 0.75;
    case ClassResponse::DoNotKnow: return 0.5;
    case ClassResponse::MaybeNo: return 0.25;
    case ClassResponse::No: return 0.0;
  }
  return 0.5;
}

double grade(Relatedness r) {
  switch (r) {
    case Relatedness::High: return 1.0;
    case Relatedness::Moderate: return 0.67;
    case Relatedness::Low: return 0.33;
    case Relatedness::None: return 0.0;
  }
  return 0.0;
}

double grade(Completeness c) {
  switch (c) {
    case Completeness::Complete: return 1.0;
    case Completeness::Incomplete: return 0.5;
    case Completeness::Unrelated: return 0.0;
  }
  return 0.0;
}

AggregatedClass aggregate_class_judgments(const ClassJudgment& j) {
  if (j.responses.empty()) throw Error("class judgment without responses");
  // Sum the grades in sorted order so the mean is independent of response order.
  std::vector<double> grades;
  for (auto r : j.responses) grades.push_back(grade(r));
  std::sort(grades.begin(), grades.end());
  double sum = 0.0;
  for (double g : grades) sum += g;
  AggregatedClass out;
  out.score = sum / static_cast<double>(grades.size());
  if (out.score > 0.4 && out.score < 0.6) return out;
  out.label = out.score >= 0.6;
  return out;
}

double aggregate_relevance(const RelevanceJudgment& j) {
  if (j.responses.empty()) throw Error("relevance judgment without responses");
  double sum = 0.0;
  for (const auto& r : j.responses) sum += grade(r.relatedness) + grade(r.completeness);
  return sum / (2.0 * static_cast<double>(j.responses.size()));
}

ClassJudgment class_judgment_from_json(const nlohmann::json& j) {
  ClassJudgment out;
  out.predicate = kb::PredicateId::from_iri(j.at("predicate").get<std::string>(),
                                            kb::KbTag::parse(j.value("kb", "")));
  out.kind = parse_kind(j.at("kind").get<std::string>());
  for (const auto& r : j.at("responses")) out.responses.push_back(parse_class_response(r.get<std::string>()));
  if (out.responses.empty()) throw Error("class judgment without responses");
  return out;
}

nlohmann::json to_json(const ClassJudgment& j) {
  nlohmann::json responses = nlohmann::json::array();
  for (auto r : j.responses) responses.push_back(std::string(class_response_name(r)));
  return nlohmann::json{{"predicate", j.predicate.iri},
                        {"kb", j.predicate.kb.name()},
                        {"kind", std::string(kind_name(j.kind))},
                        {"responses", responses}};
}

RelevanceJudgment relevance_judgment_from_json(const nlohmann::json& j) {
  RelevanceJudgment out;
  out.source = j.at("source").get<std::string>();
  out.target = j.at("target").get<std::string>();
  out.direction = parse_direction(j.at("direction").get<std::string>());
  for (const auto& r : j.at("responses")) {
    out.responses.push_back({parse_relatedness(r.at("relatedness").get<std::string>()),
                             parse_completeness(r.at("completeness").get<std::string>())});
  }
  if (out.responses.empty()) throw Error("relevance judgment without responses");
  return out;
}

nlohmann::json to_json(const RelevanceJudgment& j) {
  nlohmann::json responses = nlohmann::json::array();
  for (const auto& r : j.responses) {
    responses.push_back({{"relatedness", std::string(relatedness_name(r.relatedness))},
                         {"completeness", std::string(completeness_name(r.completeness))}});
  }
  return nlohmann::json{{"source", j.source},
                        {"target", j.target},
                        {"direction", std::string(direction_name(j.direction))},
                        {"responses", responses}};
}

std::vector<ClassJudgment> read_class_judgments(std::istream& in) {
  return read_lines<ClassJudgment>(in, class_judgment_from_json);
}

std::vector<RelevanceJudgment> read_relevance_judgments(std::istream& in) {
  return read_lines<RelevanceJudgment>(in, relevance_judgment_from_json);
}

}  // namespace counqer::eval
