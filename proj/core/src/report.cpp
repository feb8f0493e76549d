#include "gfm/report.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace gfm {

std::string Report::to_text() const {
  std::ostringstream os;
  os << "suite " << suite << " on " << corpus;
  if (!options.empty()) {
    os << " (";
    bool first = true;
    for (auto& [k, v] : options) {
      if (!first) os << ", ";
      os << k << "=" << v;
      first = false;
    }
    os << ")";
  }
  os << "\n";
  size_t idw = 4;
  for (auto& c : checks) idw = std::max(idw, c.id.size());
  for (auto& c : checks) {
    os << "  " << std::left << std::setw((int)idw + 2) << c.id << std::setw(6)
       << c.status;
    os << std::right << std::setw(9) << std::fixed << std::setprecision(1)
       << c.ms << " ms";
    if (!c.detail.empty()) {
      std::string d = c.detail;
      if (d.size() > 120) d = d.substr(0, 117) + "...";
      os << "  " << d;
    }
    os << "\n";
  }
  size_t failures = 0, skips = 0;
  for (auto& c : checks) {
    failures += c.status == "fail";
    skips += c.status == "skip";
  }
  os << "  " << checks.size() << " checks, " << failures << " failed, " << skips
     << " skipped\n";
  return os.str();
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["corpus"] = corpus;
  j["suite"] = suite;
  j["options"] = options;
  j["checks"] = nlohmann::ordered_json::array();
  for (auto& c : checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["status"] = c.status;
    jc["residual"] = c.detail;
    jc["elapsed_ms"] = c.ms;
    j["checks"].push_back(jc);
  }
  j["all_pass"] = all_pass();
  return j.dump(2);
}

}  // namespace gfm
