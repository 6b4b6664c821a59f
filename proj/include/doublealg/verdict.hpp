#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doublealg/rational.hpp"

namespace doublealg {

/// Where an identity failed and the fully expanded nonzero defect.
struct Witness {
  std::string location;
  std::string defect;

  bool operator==(const Witness&) const = default;
};

struct Verdict {
  std::string check;
  bool pass = true;
  std::optional<Witness> witness;

  static Verdict ok(std::string check) { return {std::move(check), true, std::nullopt}; }
  static Verdict fail(std::string check, std::string location, std::string defect) {
    return {std::move(check), false, Witness{std::move(location), std::move(defect)}};
  }
  explicit operator bool() const { return pass; }
  bool operator==(const Verdict&) const = default;
};

/// Ordered list of verdicts; passes iff every entry passes.
struct CheckReport {
  std::vector<Verdict> verdicts;

  bool pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
  const Verdict* first_failure() const {
    for (const auto& v : verdicts)
      if (!v.pass) return &v;
    return nullptr;
  }
  void add(Verdict v) { verdicts.push_back(std::move(v)); }
  /// Appends `other`, prefixing each check id with `prefix`.
  void merge(const CheckReport& other, const std::string& prefix = "") {
    for (auto v : other.verdicts) {
      if (!prefix.empty()) v.check = prefix + "." + v.check;
      verdicts.push_back(std::move(v));
    }
  }
  /// Collapses the report into one verdict named `check`, keeping the first
  /// failing witness.
  Verdict summary(std::string check) const {
    if (const Verdict* f = first_failure()) {
      Verdict v = *f;
      if (v.witness) v.witness->location = f->check + ": " + v.witness->location;
      else v.witness = Witness{f->check, ""};
      v.check = std::move(check);
      return v;
    }
    return Verdict::ok(std::move(check));
  }
};

/// Thrown when a construction is refused because its input fails a check.
class Rejected : public Error {
 public:
  explicit Rejected(Verdict v)
      : Error("rejected: " + v.check + (v.witness ? " at " + v.witness->location + ": " + v.witness->defect : "")),
        verdict_(std::move(v)) {}
  const Verdict& verdict() const { return verdict_; }

 private:
  Verdict verdict_;
};

}  // namespace doublealg
