#include "counqer/eval/transfer.hpp"

#include <cstdio>

#include "counqer/error.hpp"

namespace counqer::eval {

namespace {

bool both_classes(const std::vector<classify::LabeledExample>& xs) {
  bool pos = false, neg = false;
  for (const auto& x : xs) (x.label ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

TransferMatrix transfer_matrix(const std::map<std::string, std::vector<classify::LabeledExample>>& datasets,
                               const classify::ModelSpec& spec, std::uint64_t seed) {
  TransferMatrix m;
  for (const auto& [name, _] : datasets) m.kbs.push_back(name);
  const std::size_t n = m.kbs.size();
  m.f1.assign(n, std::vector<std::optional<double>>(n));

  for (std::size_t r = 0; r < n; ++r) {
    const auto& train_set = datasets.at(m.kbs[r]);
    if (!both_classes(train_set)) continue;
    const auto model = classify::train(train_set, spec, seed);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& test_set = datasets.at(m.kbs[c]);
      if (test_set.empty()) continue;
      if (r == c) {
        if (train_set.size() >= 3) m.f1[r][c] = classify::loo_cv(train_set, spec, seed).scores.f1;
        continue;
      }
      std::vector<bool> preds, labels;
      for (const auto& x : test_set) {
        preds.push_back(classify::predict(model, x.features).label);
        labels.push_back(x.label);
      }
      m.f1[r][c] = prf1(preds, labels).f1;
    }
  }

  for (const auto& name : m.kbs) {
    const auto& test_set = datasets.at(name);
    std::size_t pos = 0;
    for (const auto& x : test_set) pos += x.label ? 1 : 0;
    m.random.push_back(test_set.empty() ? 0.0 : classify::random_baseline(pos, test_set.size() - pos).f1);
  }
  return m;
}

nlohmann::json to_json(const TransferMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.kbs.size(); ++r) {
    nlohmann::json cells = nlohmann::json::object();
    for (std::size_t c = 0; c < m.kbs.size(); ++c) {
      cells[m.kbs[c]] = m.f1[r][c] ? nlohmann::json(*m.f1[r][c]) : nlohmann::json(nullptr);
    }
    rows.push_back({{"train", m.kbs[r]}, {"f1", cells}});
  }
  nlohmann::json random = nlohmann::json::object();
  for (std::size_t c = 0; c < m.kbs.size(); ++c) random[m.kbs[c]] = m.random[c];
  return {{"kbs", m.kbs}, {"rows", rows}, {"random", random}};
}

std::string render_table(const TransferMatrix& m) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-12s", "train\\test");
  out += buf;
  for (const auto& k : m.kbs) {
    std::snprintf(buf, sizeof buf, " %10s", k.c_str());
    out += buf;
  }
  out += '\n';
  for (std::size_t r = 0; r < m.kbs.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%-12s", m.kbs[r].c_str());
    out += buf;
    for (std::size_t c = 0; c < m.kbs.size(); ++c) {
      if (m.f1[r][c]) std::snprintf(buf, sizeof buf, " %10.1f", *m.f1[r][c]);
      else std::snprintf(buf, sizeof buf, " %10s", "-");
      out += buf;
    }
    out += '\n';
  }
  std::snprintf(buf, sizeof buf, "%-12s", "Random");
  out += buf;
  for (double v : m.random) {
    std::snprintf(buf, sizeof buf, " %10.1f", v);
    out += buf;
  }
  out += '\n';
  return out;
}

}  // namespace counqer::eval
