#include "counqer/text/frequency.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "counqer/error.hpp"

namespace counqer::text {

namespace {

std::string normalize(std::string_view term) {
  std::string out(term);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::unordered_map<std::string, std::uint64_t> read_tsv(std::istream& in, const std::string& where) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.rfind('\t');
    std::uint64_t count = 0;
    const char* first = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (tab == std::string::npos || ec != std::errc() || ptr != last) {
      throw Error(where + " line " + std::to_string(line_no) + ": expected term<TAB>count");
    }
    counts[normalize(std::string_view(line).substr(0, tab))] = count;
  }
  return counts;
}

}  // namespace

FrequencyTable FrequencyTable::load(std::istream& in) {
  FrequencyTable t;
  t.counts_ = read_tsv(in, "frequency table");
  return t;
}

FrequencyTable FrequencyTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("features", path);
  return load(in);
}

void FrequencyTable::set(std::string_view term, std::uint64_t count) { counts_[normalize(term)] = count; }

std::optional<std::uint64_t> FrequencyTable::lookup(std::string_view term) const {
  auto it = counts_.find(normalize(term));
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

CachedFrequencyProvider::CachedFrequencyProvider(std::shared_ptr<const FrequencyProvider> upstream,
                                                 std::string cache_path)
    : upstream_(std::move(upstream)), cache_path_(std::move(cache_path)) {
  std::ifstream in(cache_path_);
  if (in) cache_ = read_tsv(in, cache_path_);
}

std::optional<std::uint64_t> CachedFrequencyProvider::lookup(std::string_view term) const {
  const auto key = normalize(term);
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  auto answer = upstream_->lookup(key);
  if (answer) {
    cache_[key] = *answer;
    std::ofstream out(cache_path_, std::ios::app);
    out << key << '\t' << *answer << '\n';
  }
  return answer;
}

std::optional<double> plural_singular_ratio(const FrequencyProvider& provider, const InflectedForms& forms) {
  auto plural = provider.lookup(forms.plural);
  auto singular = provider.lookup(forms.singular);
  if (!plural || !singular) return std::nullopt;
  return static_cast<double>(*plural) / static_cast<double>(std::max<std::uint64_t>(*singular, 1));
}

}  // namespace counqer::text
