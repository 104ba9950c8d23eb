#include "counqer/stats/predicate_stats.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

#include "counqer/error.hpp"
#include "counqer/kb/json.hpp"
#include "counqer/stats/percentile.hpp"

namespace counqer::stats {

FiveNumber FiveNumber::of(std::vector<double> values) {
  FiveNumber f;
  if (values.empty()) return f;
  std::sort(values.begin(), values.end());
  // Summing in sorted order makes the mean independent of input order.
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  f.mean = sum / static_cast<double>(values.size());
  f.min = values.front();
  f.max = values.back();
  f.p10 = percentile(values, 10.0);
  f.p90 = percentile(values, 90.0);
  f.defined = true;
  return f;
}

void StatsAccumulator::add(const kb::Triple& t) {
  ++triple_count_;
  ++kind_counts_[static_cast<std::size_t>(kb::kind_of(t.object))];
  auto& s = per_subject_[t.subject];
  ++s.objects;
  if (const auto* i = std::get_if<kb::Integer>(&t.object)) {
    ++s.integers;
    int_values_.push_back(i->value);
  }
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  triple_count_ += other.triple_count_;
  for (std::size_t k = 0; k < kind_counts_.size(); ++k) kind_counts_[k] += other.kind_counts_[k];
  for (const auto& [subject, s] : other.per_subject_) {
    auto& mine = per_subject_[subject];
    mine.objects += s.objects;
    mine.integers += s.integers;
  }
  int_values_.insert(int_values_.end(), other.int_values_.begin(), other.int_values_.end());
}

PredicateStats StatsAccumulator::finish() const {
  PredicateStats out;
  out.predicate = predicate_;
  out.triple_count = triple_count_;
  out.subject_count = per_subject_.size();
  if (triple_count_ > 0) {
    const auto total = static_cast<double>(triple_count_);
    auto frac = [&](kb::ValueKind k) {
      return static_cast<double>(kind_counts_[static_cast<std::size_t>(k)]) / total;
    };
    out.datatypes.frac_entity = frac(kb::ValueKind::Entity);
    out.datatypes.frac_integer = frac(kb::ValueKind::Integer);
    out.datatypes.frac_decimal = frac(kb::ValueKind::Decimal);
    out.datatypes.frac_date = frac(kb::ValueKind::Date);
    out.datatypes.frac_csvlist = frac(kb::ValueKind::CsvList);
    out.datatypes.frac_text = frac(kb::ValueKind::Text);
  }

  std::vector<double> objects_per_subject;
  std::vector<double> ints_per_subject;
  objects_per_subject.reserve(per_subject_.size());
  for (const auto& [subject, s] : per_subject_) {
    objects_per_subject.push_back(static_cast<double>(s.objects));
    if (s.integers > 0) ints_per_subject.push_back(static_cast<double>(s.integers));
  }
  out.functionality = FiveNumber::of(std::move(objects_per_subject));
  out.int_per_subject = FiveNumber::of(std::move(ints_per_subject));
  std::vector<double> values(int_values_.begin(), int_values_.end());
  out.int_values = FiveNumber::of(std::move(values));
  return out;
}

PredicateStats compute_stats(std::span<const kb::Triple> triples) {
  if (triples.empty()) throw Error("compute_stats needs at least one triple");
  StatsAccumulator acc(triples.front().predicate);
  for (const auto& t : triples) {
    if (t.predicate.iri != acc.predicate().iri) throw Error("compute_stats over mixed predicates");
    acc.add(t);
  }
  return acc.finish();
}

StatsAccumulator merge_stats(const StatsAccumulator& a, const StatsAccumulator& b) {
  StatsAccumulator out = a;
  out.merge(b);
  return out;
}

nlohmann::json to_json(const FiveNumber& f) {
  return nlohmann::json{{"mean", f.mean}, {"min", f.min},         {"max", f.max},
                        {"p10", f.p10},   {"p90", f.p90}, {"defined", f.defined}};
}

FiveNumber five_number_from_json(const nlohmann::json& j) {
  FiveNumber f;
  f.mean = j.at("mean").get<double>();
  f.min = j.at("min").get<double>();
  f.max = j.at("max").get<double>();
  f.p10 = j.at("p10").get<double>();
  f.p90 = j.at("p90").get<double>();
  f.defined = j.at("defined").get<bool>();
  return f;
}

nlohmann::json to_json(const PredicateStats& s) {
  nlohmann::json j;
  j["predicate"] = kb::to_json(s.predicate);
  j["triple_count"] = s.triple_count;
  j["subject_count"] = s.subject_count;
  j["datatypes"] = {{"entity", s.datatypes.frac_entity},   {"integer", s.datatypes.frac_integer},
                    {"decimal", s.datatypes.frac_decimal}, {"date", s.datatypes.frac_date},
                    {"csv_list", s.datatypes.frac_csvlist}, {"text", s.datatypes.frac_text}};
  j["functionality"] = to_json(s.functionality);
  j["int_values"] = to_json(s.int_values);
  j["int_per_subject"] = to_json(s.int_per_subject);
  return j;
}

PredicateStats stats_from_json(const nlohmann::json& j) {
  PredicateStats s;
  s.predicate = kb::predicate_from_json(j.at("predicate"));
  s.triple_count = j.at("triple_count").get<std::size_t>();
  s.subject_count = j.at("subject_count").get<std::size_t>();
  const auto& d = j.at("datatypes");
  s.datatypes.frac_entity = d.at("entity").get<double>();
  s.datatypes.frac_integer = d.at("integer").get<double>();
  s.datatypes.frac_decimal = d.at("decimal").get<double>();
  s.datatypes.frac_date = d.at("date").get<double>();
  s.datatypes.frac_csvlist = d.at("csv_list").get<double>();
  s.datatypes.frac_text = d.at("text").get<double>();
  s.functionality = five_number_from_json(j.at("functionality"));
  s.int_values = five_number_from_json(j.at("int_values"));
  s.int_per_subject = five_number_from_json(j.at("int_per_subject"));
  return s;
}

void write_stats(std::ostream& out, std::span<const PredicateStats> stats) {
  for (const auto& s : stats) out << to_json(s).dump() << '\n';
}

std::vector<PredicateStats> read_stats(std::istream& in) {
  std::vector<PredicateStats> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(stats_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

}  // namespace counqer::stats
