#include "adscurv/report.hpp"

#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace adscurv {

double Report::value(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw std::out_of_range("report has no value " + key);
  return it->second;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["check"] = name;
  j["anchor"] = anchor;
  j["status"] = pass ? "PASS" : "FAIL";
  j["values"] = values;
  j["tolerances"] = tolerances;
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace adscurv
