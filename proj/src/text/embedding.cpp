#include "counqer/text/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace counqer::text {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool is_count(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

EmbeddingTable EmbeddingTable::load(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && is_count(fields[0]) && is_count(fields[1])) continue;
    if (fields.size() < 2) throw Error("embedding line " + std::to_string(line_no) + ": no vector");
    Eigen::VectorXd v(static_cast<Eigen::Index>(fields.size() - 1));
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(fields[k].data(), fields[k].data() + fields[k].size(), x);
      if (ec != std::errc() || ptr != fields[k].data() + fields[k].size()) {
        throw Error("embedding line " + std::to_string(line_no) + ": bad number '" + std::string(fields[k]) + "'");
      }
      v[static_cast<Eigen::Index>(k - 1)] = x;
    }
    if (table.dimension_ == 0) table.dimension_ = v.size();
    if (v.size() != table.dimension_) {
      throw Error("embedding line " + std::to_string(line_no) + ": dimension " + std::to_string(v.size()) +
                  " != " + std::to_string(table.dimension_));
    }
    table.vectors_.insert_or_assign(std::string(fields[0]), std::move(v));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("features", path);
  return load(in);
}

void EmbeddingTable::add(std::string word, Eigen::VectorXd vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) throw Error("embedding dimension mismatch for '" + word + "'");
  vectors_.insert_or_assign(std::move(word), std::move(vector));
}

const Eigen::VectorXd* EmbeddingTable::find(std::string_view word) const {
  auto it = vectors_.find(std::string(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<Eigen::VectorXd> embed_label(std::span<const std::string> tokens, const EmbeddingTable& table) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dimension());
  int found = 0;
  for (const auto& t : tokens) {
    if (const auto* v = table.find(t)) {
      sum += *v;
      ++found;
    }
  }
  if (found == 0) return std::nullopt;
  return sum / found;
}

double cosine_similarity(const std::optional<Eigen::VectorXd>& u, const std::optional<Eigen::VectorXd>& v) {
  if (!u || !v) return 0.0;
  return cosine(*u, *v);
}

}  // namespace counqer::text
