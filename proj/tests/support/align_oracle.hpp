#pragma once

// Brute-force reference for the alignment metrics, written against raw
// triples without the library's joins or summaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "counqer/kb/parser.hpp"
#include "counqer/kb/triple.hpp"

namespace counqer::oracle {

struct PairScores {
  double absolute = 0, jaccard = 0, conditional_e = 0, conditional_c = 0, pmi = 0;
  double perfect_match_ratio = 0, correlation = 0, ptile_vm = 0;
  std::size_t records = 0;
};

inline double nearest_rank_p90(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t rank = 1;
  while (static_cast<double>(rank) * 100.0 < 90.0 * static_cast<double>(v.size())) ++rank;
  return v[rank - 1];
}

inline PairScores pair_scores(const std::vector<kb::Triple>& triples, const std::string& e, const std::string& c) {
  std::set<std::string> all, se, sc;
  std::map<std::string, std::int64_t> n_e;
  std::map<std::string, std::int64_t> v_c;
  for (const auto& t : triples) {
    all.insert(t.subject);
    if (t.predicate.iri == e) {
      se.insert(t.subject);
      if (std::holds_alternative<kb::Entity>(t.object)) n_e[t.subject] += 1;
      if (auto* l = std::get_if<kb::CsvList>(&t.object)) n_e[t.subject] += static_cast<std::int64_t>(l->items.size());
    }
    if (t.predicate.iri == c) {
      sc.insert(t.subject);
      if (auto* i = std::get_if<kb::Integer>(&t.object)) {
        auto it = v_c.find(t.subject);
        if (it == v_c.end()) v_c[t.subject] = i->value;
        else it->second = std::max(it->second, i->value);
      }
    }
  }
  double shared = 0;
  for (const auto& s : se) shared += sc.count(s) ? 1 : 0;
  PairScores out;
  const double ne = static_cast<double>(se.size()), nc = static_cast<double>(sc.size());
  const double n = static_cast<double>(all.size());
  out.absolute = shared;
  out.jaccard = shared / (ne + nc - shared);
  out.conditional_e = shared / ne;
  out.conditional_c = shared / nc;
  out.pmi = shared == 0 ? -INFINITY : std::log2(shared * n / (ne * nc));

  std::vector<double> xs, ys;
  for (const auto& s : all) {
    if (!n_e.count(s) || !v_c.count(s) || n_e[s] < 1) continue;
    xs.push_back(static_cast<double>(n_e[s]));
    ys.push_back(static_cast<double>(v_c[s]));
  }
  out.records = xs.size();
  if (xs.empty()) return out;
  double hits = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) hits += xs[i] == ys[i] ? 1 : 0;
  out.perfect_match_ratio = hits / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const double m = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double dx = xs[i] - sx / m, dy = ys[i] - sy / m;
      sxx += dx * dx;
      syy += dy * dy;
      sxy += dx * dy;
    }
    out.correlation = sxx == 0 || syy == 0 ? 0.0 : sxy / std::sqrt(sxx * syy);
  }
  const double pe = nearest_rank_p90(xs), pc = nearest_rank_p90(ys);
  out.ptile_vm = pe <= 0 || pc <= 0 ? 0.0 : std::min(pe / pc, pc / pe);
  return out;
}

/// Random KB with at most 30 subjects and six predicates: three enumerating,
/// three counting. `tokens` gives each label's words by hand, and `vectors`
/// a random word embedding where "of" is out of vocabulary.
struct MicroKb {
  std::vector<kb::Triple> triples;
  std::vector<std::string> enumerating{"http://m/member", "http://m/player", "http://m/awardList"};
  std::vector<std::string> counting{"http://m/numberOfMembers", "http://m/playerCount", "http://m/awards"};
  std::map<std::string, std::vector<std::string>> tokens{
      {"http://m/member", {"member"}},
      {"http://m/player", {"player"}},
      {"http://m/awardList", {"award", "list"}},
      {"http://m/numberOfMembers", {"number", "of", "members"}},
      {"http://m/playerCount", {"player", "count"}},
      {"http://m/awards", {"awards"}}};
  std::map<std::string, std::vector<double>> vectors;

  /// Word-vector file contents for `vectors`.
  std::string embedding_text() const {
    std::string out;
    for (const auto& [word, v] : vectors) {
      out += word;
      for (double x : v) out += " " + std::to_string(x);
      out += "\n";
    }
    return out;
  }
};

inline MicroKb micro_kb(std::uint32_t seed) {
  std::mt19937 gen(seed);
  MicroKb kb_out;
  std::normal_distribution<double> d;
  for (const char* w : {"member", "members", "player", "count", "award", "awards", "list", "number"}) {
    std::vector<double> v(5);
    // round-tripped through text, so keep six decimals
    for (auto& x : v) x = std::round(d(gen) * 1e6) / 1e6;
    kb_out.vectors[w] = v;
  }
  const int subjects = 2 + static_cast<int>(gen() % 29);
  std::set<std::string> seen;
  auto push = [&](kb::Triple t) {
    if (seen.insert(kb::to_ntriples(t)).second) kb_out.triples.push_back(std::move(t));
  };
  for (int s = 0; s < subjects; ++s) {
    const std::string subj = "http://m/s" + std::to_string(s);
    for (const auto& e : kb_out.enumerating) {
      if (gen() % 3 == 0) continue;
      const int k = 1 + static_cast<int>(gen() % 5);
      for (int j = 0; j < k; ++j) {
        push({subj, kb::PredicateId::from_iri(e), kb::Entity{"http://m/o" + std::to_string(gen() % 40)}});
      }
    }
    for (const auto& c : kb_out.counting) {
      if (gen() % 3 == 0) continue;
      const int k = 1 + static_cast<int>(gen() % 2);
      for (int j = 0; j < k; ++j) {
        push({subj, kb::PredicateId::from_iri(c), kb::Integer{static_cast<std::int64_t>(gen() % 7)}});
      }
    }
  }
  return kb_out;
}

/// Cosine of the mean in-vocabulary word vectors; 0 when either side has none.
inline double label_cosine(const MicroKb& m, const std::string& a, const std::string& b) {
  auto mean = [&](const std::string& iri) {
    std::vector<double> acc(5, 0.0);
    int n = 0;
    for (const auto& w : m.tokens.at(iri)) {
      auto it = m.vectors.find(w);
      if (it == m.vectors.end()) continue;
      for (int i = 0; i < 5; ++i) acc[i] += it->second[i];
      ++n;
    }
    for (auto& x : acc) x = n ? x / n : 0.0;
    return acc;
  };
  const auto u = mean(a), v = mean(b);
  double uv = 0, uu = 0, vv = 0;
  for (int i = 0; i < 5; ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  return uu == 0 || vv == 0 ? 0.0 : uv / std::sqrt(uu * vv);
}

}  // namespace counqer::oracle
