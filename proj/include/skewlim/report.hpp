#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace skewlim {

struct audit_entry {
  std::string check;
  bool pass = false;
  std::string witness;  // empty when there is nothing to show
};

// flat pass/fail list shared by the audit operations; serialized as
// [{"check":..., "status":"pass"|"fail", "witness":...}, ...]
struct audit_report {
  std::vector<audit_entry> entries;

  void add(std::string check, bool pass, std::string witness = "") {
    entries.push_back({std::move(check), pass, std::move(witness)});
  }

  bool all_pass() const {
    for (const audit_entry& e : entries)
      if (!e.pass) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const audit_entry& e : entries) {
      nlohmann::json row{{"check", e.check}, {"status", e.pass ? "pass" : "fail"}};
      if (!e.witness.empty()) row["witness"] = e.witness;
      out.push_back(std::move(row));
    }
    return out;
  }
};

}  // namespace skewlim
