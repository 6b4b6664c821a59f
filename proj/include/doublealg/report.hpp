#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "doublealg/verdict.hpp"

namespace doublealg {

inline constexpr const char* kToolVersion = "1.0.0";

struct CheckResult {
  std::string id;
  bool pass = true;
  std::optional<Witness> witness;
  std::optional<double> seconds;

  bool operator==(const CheckResult&) const = default;
};

/// One run of a verb on a model file. `output` holds model-file blocks for
/// build verbs.
struct Report {
  std::string version = kToolVersion;
  std::string command;
  std::string digest;
  std::vector<CheckResult> checks;
  std::string output;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(const Verdict& v, std::optional<double> seconds = std::nullopt) {
    checks.push_back({v.check, v.pass, v.witness, seconds});
  }
  bool operator==(const Report&) const = default;
};

/// Hex SHA-256 of `data`.
inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

/// Every header line starts with `#`, so a text report is itself a model
/// file holding the output blocks.
inline std::string emit_text(const Report& r) {
  std::string out = "# doublealg " + r.version + "\n# command: " + r.command + "\n# input: sha256:" + r.digest + "\n";
  for (const auto& c : r.checks) {
    out += "# check " + c.id + ": " + (c.pass ? "PASS" : "FAIL");
    if (c.seconds) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " (%.6f s)", *c.seconds);
      out += buf;
    }
    out += "\n";
    if (c.witness) {
      out += "#   at: " + c.witness->location + "\n";
      if (!c.witness->defect.empty()) out += "#   defect: " + c.witness->defect + "\n";
    }
  }
  out += std::string("# summary: ") + (r.pass() ? "PASS" : "FAIL") + "\n";
  if (!r.output.empty()) out += "\n" + r.output;
  return out;
}

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["tool"] = "doublealg";
  j["version"] = r.version;
  j["command"] = r.command;
  j["input_sha256"] = r.digest;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["verdict"] = c.pass ? "pass" : "fail";
    if (c.witness) e["witness"] = {{"location", c.witness->location}, {"defect", c.witness->defect}};
    if (c.seconds) e["seconds"] = *c.seconds;
    j["checks"].push_back(e);
  }
  j["summary"] = r.pass() ? "pass" : "fail";
  if (!r.output.empty()) j["output"] = r.output;
  return j;
}

inline std::string emit_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

/// Inverse of emit_json. Throws Error on malformed input.
inline Report report_from_json(std::string_view text) {
  try {
    auto j = nlohmann::ordered_json::parse(text);
    Report r;
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.digest = j.at("input_sha256").get<std::string>();
    for (const auto& e : j.at("checks")) {
      CheckResult c;
      c.id = e.at("id").get<std::string>();
      c.pass = e.at("verdict").get<std::string>() == "pass";
      if (e.contains("witness"))
        c.witness = Witness{e["witness"].at("location").get<std::string>(), e["witness"].at("defect").get<std::string>()};
      if (e.contains("seconds")) c.seconds = e["seconds"].get<double>();
      r.checks.push_back(c);
    }
    if (j.contains("output")) r.output = j["output"].get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report json: ") + e.what());
  }
}

}  // namespace doublealg
