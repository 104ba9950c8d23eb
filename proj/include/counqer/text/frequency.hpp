#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "counqer/text/inflect.hpp"

namespace counqer::text {

/// Estimated corpus frequency of a term. std::nullopt means the provider
/// could not answer (unknown term, failed lookup); callers treat the
/// dependent feature as missing.
class FrequencyProvider {
 public:
  virtual ~FrequencyProvider() = default;
  virtual std::optional<std::uint64_t> lookup(std::string_view term) const = 0;
};

/// Offline `term<TAB>count` snapshot. Terms are matched case-insensitively.
class FrequencyTable final : public FrequencyProvider {
 public:
  FrequencyTable() = default;
  static FrequencyTable load(std::istream& in);
  static FrequencyTable load_file(const std::string& path);

  void set(std::string_view term, std::uint64_t count);
  std::optional<std::uint64_t> lookup(std::string_view term) const override;
  std::size_t size() const { return counts_.size(); }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

/// Wraps a live provider (a web-search adapter, say) with an on-disk cache in
/// the same TSV format as FrequencyTable. Cached answers are served without
/// calling the upstream provider; new answers are appended to the file.
class CachedFrequencyProvider final : public FrequencyProvider {
 public:
  CachedFrequencyProvider(std::shared_ptr<const FrequencyProvider> upstream, std::string cache_path);

  std::optional<std::uint64_t> lookup(std::string_view term) const override;

 private:
  std::shared_ptr<const FrequencyProvider> upstream_;
  std::string cache_path_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::uint64_t> cache_;
};

/// freq(plural) / max(freq(singular), 1); std::nullopt if either lookup fails.
std::optional<double> plural_singular_ratio(const FrequencyProvider& provider, const InflectedForms& forms);

}  // namespace counqer::text
