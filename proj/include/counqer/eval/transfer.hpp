#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "counqer/classify/evaluation.hpp"

namespace counqer::eval {

/// F1 grid: rows are training sets, columns test sets. The diagonal is the
/// leave-one-out score of that set. `random` holds the positive-rate F1 of
/// each test set. A cell is empty when its training set has a single class.
struct TransferMatrix {
  std::vector<std::string> kbs;
  std::vector<std::vector<std::optional<double>>> f1;
  std::vector<double> random;
};

TransferMatrix transfer_matrix(const std::map<std::string, std::vector<classify::LabeledExample>>& datasets,
                               const classify::ModelSpec& spec, std::uint64_t seed);

nlohmann::json to_json(const TransferMatrix& m);

/// Fixed-width text rendering; unavailable cells print as "-".
std::string render_table(const TransferMatrix& m);

}  // namespace counqer::eval
