#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace adscurv {

inline constexpr const char* kReportSchema = "adscurv.report/1";

struct Report {
  std::string name;
  std::string anchor;  // plain statement of the checked claim
  bool pass = false;
  std::map<std::string, double> values;
  std::map<std::string, double> tolerances;
  nlohmann::json detail = nlohmann::json::object();
  double runtime_s = 0;  // kept out of the serialized form

  double value(const std::string& key) const;
  nlohmann::json to_json() const;
};

std::string fnv1a_hex(const std::string& text);

}  // namespace adscurv
