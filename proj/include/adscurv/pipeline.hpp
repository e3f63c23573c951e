#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adscurv/conemetric.hpp"
#include "adscurv/fuchsian.hpp"
#include "adscurv/report.hpp"
#include "adscurv/surface.hpp"

namespace adscurv {

inline constexpr const char* kRunSchema = "adscurv.run/1";

struct RunConfig {
  std::string command;
  std::string fn = "zero";
  std::string src = "u0";
  std::vector<double> eps = {0.4, 0.2, 0.1};
  std::string input;  // optional triangulation JSON
  double h = 0.05;
  int steiner = 1;
  int ball_radius = 2;
  int samples = 2000;
  int pairs = 200;
  std::uint64_t seed = 1;
  std::string out_dir;  // no files written when empty
  std::vector<std::string> only;

  nlohmann::json to_json() const;
};

struct RunResult {
  std::string command;
  std::vector<Report> reports;
  std::map<std::string, std::string> files;  // file name -> contents
  std::string input_digest;

  bool all_pass() const;
  // 0 when every report passes, 1 otherwise.
  int exit_code() const;
  const Report* first_failure() const;
  nlohmann::json to_json(const RunConfig& cfg) const;
};

// Builtin height functions: zero | const:R | cone:h0 | smoothed:h0,rho | envelope:seed=N.
struct FunctionSpec {
  std::string kind;
  FunctionPtr u;  // exact on the fundamental polygon
  double constant = -1;  // R for zero/const, else negative
  bool invariant = false;
  FuchsianCConvex fc;  // exact on the polygon and its generator images
};
FunctionSpec parse_function_spec(const std::string& text, GroupPtr group);
// Region on which envelopes are exact: the polygon and its images under the generators.
double envelope_region(const FuchsianGroup& g);
// u0 | const:R, as a scaled hyperbolic source.
SourcePtr parse_source_spec(const std::string& text, GroupPtr group);
std::vector<double> parse_list(const std::string& text);

// `sources` random vertices, each paired with `per_source` random other vertices.
std::vector<std::pair<int, int>> sample_vertex_pairs(int vertices, int sources, int per_source,
                                                     std::uint64_t seed);

// d_u <= d_H + slack on every pair; slackless violations are counted as well.
Report upper_bound_check(const InducedDistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                         double slack);
// d_u >= K d_H - slack on every pair.
Report lower_bound_check(const InducedDistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                         double K, double slack);
// |d_u - scale d_H| / (scale d_H) < rel_tol on every pair.
Report scaling_check(const InducedDistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                     double scale, double rel_tol);

RunResult cmd_surface(const RunConfig& cfg);
RunResult cmd_approx(const RunConfig& cfg);
RunResult cmd_verify(const RunConfig& cfg);

// Writes reports.json, timings.json and every table into cfg.out_dir.
void write_outputs(const RunConfig& cfg, const RunResult& result);

struct PropertyCheck {
  std::string name;
  std::string module;
  std::function<Report(std::uint64_t seed)> run;
};
// One check per invariant of the library, in a fixed order.
const std::vector<PropertyCheck>& property_suite();

}  // namespace adscurv
