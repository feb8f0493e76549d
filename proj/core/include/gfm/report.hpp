#pragma once

#include <map>
#include <string>
#include <vector>

namespace gfm {

struct CheckResult {
  std::string id;
  std::string status;  // "pass" | "fail" | "skip"
  std::string detail;  // residual text for failures, notes otherwise
  double ms = 0.0;
};

struct Report {
  std::string corpus;
  std::string suite;
  std::map<std::string, std::string> options;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
  void pass(const std::string& id, double ms = 0, const std::string& note = "") {
    checks.push_back({id, "pass", note, ms});
  }
  void fail(const std::string& id, const std::string& residual, double ms = 0) {
    checks.push_back({id, "fail", residual, ms});
  }
  void skip(const std::string& id, const std::string& why) {
    checks.push_back({id, "skip", why, 0});
  }
  void merge(const Report& r) {
    for (auto& c : r.checks) checks.push_back(c);
  }

  std::string to_text() const;
  std::string to_json() const;  // stable-keyed
};

}  // namespace gfm
