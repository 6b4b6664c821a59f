#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "doublealg/rational.hpp"

namespace doublealg {

/// Ordered coordinate symbols of a polynomial chart. A chart with no
/// coordinates stands for a point.
class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (n.empty()) throw Error("empty coordinate name");
      if (!seen.insert(n).second) throw Error("duplicate coordinate '" + n + "'");
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> find(const std::string& n) const {
    auto it = std::find(names_.begin(), names_.end(), n);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  std::size_t index_of(const std::string& n) const {
    auto i = find(n);
    if (!i) throw Error("unknown coordinate '" + n + "'");
    return *i;
  }

  bool operator==(const Chart&) const = default;

 private:
  std::vector<std::string> names_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::vector<std::string> names) {
  return std::make_shared<const Chart>(std::move(names));
}

inline bool same_chart(const ChartPtr& a, const ChartPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Chart whose coordinates are `base` followed by `extra`.
inline ChartPtr extend_chart(const ChartPtr& base, const std::vector<std::string>& extra) {
  auto names = base->names();
  names.insert(names.end(), extra.begin(), extra.end());
  return make_chart(std::move(names));
}

/// `count` names `prefix1..prefixN`, each made unique against `taken`.
inline std::vector<std::string> fresh_names(const std::string& prefix, std::size_t count,
                                            const std::vector<std::string>& taken) {
  std::set<std::string> used(taken.begin(), taken.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string n = prefix + std::to_string(i + 1);
    while (used.count(n)) n += "_";
    used.insert(n);
    out.push_back(n);
  }
  return out;
}

}  // namespace doublealg
