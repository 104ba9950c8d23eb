#pragma once

#include <algorithm>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include <Eigen/Dense>

#include "counqer/error.hpp"

namespace counqer::text {

/// Word vectors of one fixed dimension, immutable after load.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(Eigen::Index dimension) : dimension_(dimension) {}

  /// Word-per-line text format: a token followed by whitespace-separated
  /// reals. An optional "<count> <dimension>" header line is accepted.
  /// Throws on rows whose length differs from the first row.
  static EmbeddingTable load(std::istream& in);
  static EmbeddingTable load_file(const std::string& path);

  void add(std::string word, Eigen::VectorXd vector);
  const Eigen::VectorXd* find(std::string_view word) const;

  Eigen::Index dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  Eigen::Index dimension_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

/// Mean vector of the in-vocabulary tokens; std::nullopt when none are.
std::optional<Eigen::VectorXd> embed_label(std::span<const std::string> tokens, const EmbeddingTable& table);

/// Cosine of two vectors; 0 if either has zero norm.
template <typename DerivedA, typename DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
  if (u.size() != v.size()) throw Error("cosine similarity: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

/// Cosine with the empty-label convention: an empty operand scores 0.
double cosine_similarity(const std::optional<Eigen::VectorXd>& u, const std::optional<Eigen::VectorXd>& v);

}  // namespace counqer::text
