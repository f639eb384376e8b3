#include "moran/configuration.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace moran {

Configuration::Configuration(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("configuration needs at least one part");
  for (int p : parts_) {
    if (p < 1) throw std::invalid_argument("configuration parts must be positive");
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

int Configuration::order() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

bool Configuration::all_singletons() const {
  return std::all_of(parts_.begin(), parts_.end(), [](int p) { return p == 1; });
}

std::string Configuration::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out + "}";
}

std::vector<Configuration> partitions(int k) {
  if (k <= 0) throw std::invalid_argument("partitions need k >= 1");
  std::vector<Configuration> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      current.push_back(p);
      rec(remaining - p, p);
      current.pop_back();
    }
  };
  rec(k, k);
  return out;
}

Configuration configuration_of(std::span<const std::size_t> x) {
  if (x.empty()) return {};
  std::map<std::size_t, int> counts;
  for (auto v : x) ++counts[v];
  std::vector<int> parts;
  parts.reserve(counts.size());
  for (const auto& [value, count] : counts) parts.push_back(count);
  return Configuration(std::move(parts));
}

Configuration parse_configuration(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](char c) { return c == '{' || c == '}' || c == ' '; }),
          s.end());
  std::vector<int> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const auto token = s.substr(pos, comma - pos);
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad configuration '" + std::string(text) + "'");
    }
    parts.push_back(std::stoi(token));
    pos = comma + 1;
  }
  return Configuration(std::move(parts));
}

}  // namespace moran
