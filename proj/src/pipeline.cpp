#include "adscurv/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "adscurv/errors.hpp"
#include "adscurv/io.hpp"
#include "adscurv/parallel.hpp"
#include "adscurv/smoothing.hpp"

namespace adscurv {

using nlohmann::json;

namespace {

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("bad number in " + what + ": '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(x)) throw InputError("bad number in " + what + ": '" + s + "'");
  return x;
}

template <class F>
Report timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  Report r = f();
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string suffix(const std::string& name, double eps) {
  std::ostringstream os;
  os << name << "[eps=" << eps << "]";
  return os.str();
}

}  // namespace

json RunConfig::to_json() const {
  return {{"command", command}, {"fn", fn},           {"src", src},
          {"eps", eps},         {"input", input},     {"h", h},
          {"steiner", steiner}, {"ball_radius", ball_radius},
          {"samples", samples}, {"pairs", pairs},     {"seed", seed},
          {"only", only}};
}

bool RunResult::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.pass; });
}

int RunResult::exit_code() const { return all_pass() ? 0 : 1; }

const Report* RunResult::first_failure() const {
  for (const auto& r : reports)
    if (!r.pass) return &r;
  return nullptr;
}

json RunResult::to_json(const RunConfig& cfg) const {
  json j;
  j["schema"] = kRunSchema;
  j["command"] = command;
  j["config"] = cfg.to_json();
  j["input_digest"] = input_digest;
  int passed = 0;
  json reps = json::array();
  for (const auto& r : reports) {
    passed += r.pass;
    reps.push_back(r.to_json());
  }
  j["summary"] = {{"passed", passed},
                  {"failed", static_cast<int>(reports.size()) - passed},
                  {"status", all_pass() ? "PASS" : "FAIL"}};
  j["reports"] = std::move(reps);
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "list"));
  if (out.empty()) throw InputError("empty list");
  return out;
}

FunctionSpec parse_function_spec(const std::string& text, GroupPtr group) {
  FunctionSpec fs;
  auto colon = text.find(':');
  fs.kind = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (fs.kind == "zero" && arg.empty()) {
    fs.constant = 0;
    fs.u = constant_function(0.0);
    fs.invariant = true;
  } else if (fs.kind == "const") {
    double R = parse_number(arg, "const:R");
    if (!(R >= 0 && R < M_PI / 2)) throw InputError("const:R needs 0 <= R < pi/2");
    fs.constant = R;
    fs.u = constant_function(R);
    fs.invariant = true;
  } else if (fs.kind == "cone") {
    try {
      fs.u = build_cone(parse_number(arg, "cone:h0"));
    } catch (const ApexOutsideCylinder& e) {
      throw InputError(e.what());
    }
  } else if (fs.kind == "smoothed") {
    auto comma = arg.find(',');
    if (comma == std::string::npos) throw InputError("smoothed needs h0,rho");
    try {
      auto cone = build_cone(parse_number(arg.substr(0, comma), "smoothed:h0"));
      fs.u = smooth_cone(*cone, parse_number(arg.substr(comma + 1), "smoothed:rho"));
    } catch (const ApexOutsideCylinder& e) {
      throw InputError(e.what());
    } catch (const RhoTooLarge& e) {
      throw InputError(e.what());
    }
  } else if (fs.kind == "envelope") {
    if (arg.rfind("seed=", 0) != 0) throw InputError("envelope needs seed=N");
    double s = parse_number(arg.substr(5), "envelope:seed");
    if (s < 0 || s != std::floor(s)) throw InputError("envelope seed must be a non-negative integer");
    auto seed = static_cast<std::uint64_t>(s);
    fs.fc = random_orbit_envelope(group, seed, envelope_region(*group));
    fs.u = random_orbit_envelope(group, seed, group->circumradius()).u;
    fs.invariant = true;
  } else {
    throw InputError("unknown function spec '" + text + "'");
  }
  if (fs.invariant && !fs.fc.u) fs.fc = FuchsianCConvex{fs.u, group, 1e-8};
  return fs;
}

double envelope_region(const FuchsianGroup& g) { return g.circumradius() + 2 * g.inradius(); }

SourcePtr parse_source_spec(const std::string& text, GroupPtr group) {
  if (text == "u0") return std::make_shared<ScaledHyperbolicSource>(group, 1.0);
  if (text.rfind("const:", 0) == 0) {
    double R = parse_number(text.substr(6), "const:R");
    if (!(R >= 0 && R < M_PI / 2)) throw InputError("const:R needs 0 <= R < pi/2");
    return std::make_shared<ScaledHyperbolicSource>(group, std::cos(R));
  }
  throw InputError("unknown source spec '" + text + "' (expected u0 or const:R)");
}

std::vector<std::pair<int, int>> sample_vertex_pairs(int vertices, int sources, int per_source,
                                                     std::uint64_t seed) {
  if (vertices < 2) throw InputError("need at least two vertices");
  Rng rng(seed);
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < sources; ++s) {
    int a = static_cast<int>(rng() % vertices);
    for (int k = 0; k < per_source;) {
      int b = static_cast<int>(rng() % vertices);
      if (b == a) continue;
      out.push_back({a, b});
      ++k;
    }
  }
  return out;
}

namespace {

std::vector<int> pair_sources(const std::vector<std::pair<int, int>>& pairs) {
  std::set<int> s;
  for (auto [a, b] : pairs) s.insert(a);
  return {s.begin(), s.end()};
}

}  // namespace

Report upper_bound_check(const InducedDistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                         double slack) {
  field.precompute(pair_sources(pairs));
  const auto& V = field.mesh().vertices;
  double worst = -std::numeric_limits<double>::infinity();
  int violations = 0, strict_violations = 0;
  json witness;
  for (auto [a, b] : pairs) {
    double du = field.distance(a, b), dh = h2_distance(V[a], V[b]);
    if (du - dh > worst) {
      worst = du - dh;
      witness = {{"pair", {a, b}}, {"d_u", du}, {"d_H", dh}};
    }
    strict_violations += du > dh;
    violations += du > dh + slack;
  }
  Report r;
  r.name = "distance_upper";
  r.anchor = "d_u(x,y) <= d_H2(x,y)";
  r.values["max_excess"] = worst;
  r.values["violations"] = violations;
  r.values["slackless_violations"] = strict_violations;
  r.values["pairs"] = static_cast<double>(pairs.size());
  r.tolerances["slack"] = slack;
  r.detail["witness"] = witness;
  r.pass = !pairs.empty() && violations == 0;
  return r;
}

Report lower_bound_check(const InducedDistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                         double K, double slack) {
  field.precompute(pair_sources(pairs));
  const auto& V = field.mesh().vertices;
  double worst = std::numeric_limits<double>::infinity();
  int violations = 0;
  json witness;
  for (auto [a, b] : pairs) {
    double du = field.distance(a, b), dh = h2_distance(V[a], V[b]);
    double margin = du - (K * dh - slack);
    if (margin < worst) {
      worst = margin;
      witness = {{"pair", {a, b}}, {"d_u", du}, {"d_H", dh}};
    }
    violations += margin < 0;
  }
  Report r;
  r.name = "distance_lower";
  r.anchor = "d_u(x,y) >= K d_H2(x,y) with K = inf |v|_u / |v|_H2";
  r.values["K"] = K;
  r.values["min_margin"] = worst;
  r.values["violations"] = violations;
  r.values["pairs"] = static_cast<double>(pairs.size());
  r.tolerances["slack"] = slack;
  r.detail["witness"] = witness;
  r.pass = !pairs.empty() && violations == 0;
  return r;
}

Report scaling_check(const InducedDistanceField& field, const std::vector<std::pair<int, int>>& pairs,
                     double scale, double rel_tol) {
  field.precompute(pair_sources(pairs));
  const auto& V = field.mesh().vertices;
  double worst = 0, mean = 0;
  for (auto [a, b] : pairs) {
    double expect = scale * h2_distance(V[a], V[b]);
    double e = std::abs(field.distance(a, b) - expect) / expect;
    worst = std::max(worst, e);
    mean += e;
  }
  Report r;
  r.name = "distance_scaling";
  r.anchor = "constant u = R gives d_u = cos(R) d_H2";
  r.values["scale"] = scale;
  r.values["max_rel_error"] = worst;
  r.values["mean_rel_error"] = pairs.empty() ? 0 : mean / pairs.size();
  r.values["pairs"] = static_cast<double>(pairs.size());
  r.tolerances["rel_tol"] = rel_tol;
  r.pass = !pairs.empty() && worst < rel_tol;
  return r;
}

RunResult cmd_surface(const RunConfig& cfg) {
  if (!(cfg.h > 0 && cfg.h <= 1)) throw InputError("--h must lie in (0, 1]");
  if (cfg.pairs < 1 || cfg.samples < 1) throw InputError("--pairs and --samples must be positive");
  auto group = genus2_octagon_group();
  FunctionSpec fs = parse_function_spec(cfg.fn, group);
  RunResult res;
  res.command = "surface";
  res.input_digest = fnv1a_hex(cfg.to_json().dump());

  auto sampler = [&](Rng& rng) { return random_polygon_point(*group, rng); };
  Report sl = timed([&] { return spacelike_check(*fs.u, cfg.samples, cfg.seed, sampler); });
  double K = sl.value("min_ratio");
  res.reports.push_back(sl);
  if (fs.invariant) res.reports.push_back(timed([&] { return invariance_check(fs.fc, cfg.samples, cfg.seed); }));

  auto mesh = std::make_shared<GeodesicMesh>(GeodesicMesh::regular_polygon(8, group->circumradius(), cfg.h));
  if (!mesh->connected()) throw DisconnectedMesh("mesh is not connected");
  InducedDistanceField field(fs.u, mesh);
  int per_source = 20;
  int sources = std::max(1, (cfg.pairs + per_source - 1) / per_source);
  auto pairs = sample_vertex_pairs(static_cast<int>(mesh->vertices.size()), sources, per_source, cfg.seed);
  if (fs.constant >= 0)
    res.reports.push_back(timed([&] { return scaling_check(field, pairs, std::cos(fs.constant), 1e-3); }));
  res.reports.push_back(timed([&] { return upper_bound_check(field, pairs, 5 * mesh->h); }));
  res.reports.push_back(timed([&] { return lower_bound_check(field, pairs, K, 5 * mesh->h); }));

  std::vector<int> ids = pair_sources(pairs);
  res.files["mesh.json"] = mesh_to_json(*mesh).dump() + "\n";
  res.files["distances.csv"] = distance_csv(field, ids);
  return res;
}

RunResult cmd_approx(const RunConfig& cfg) {
  RunResult res;
  res.command = "approx";
  if (!cfg.input.empty()) {
    json doc = read_json_file(cfg.input);
    res.input_digest = fnv1a_hex(cfg.to_json().dump() + doc.dump());
    MetricTriangulation mt = triangulation_from_json(doc);
    ConeSurface cs = build_cone_surface(mt);
    res.reports.push_back(timed([&] { return cone_angle_check(cs); }));
    res.reports.push_back(timed([&] { return excess_budget(cs); }));
    return res;
  }
  if (cfg.eps.empty()) throw InputError("--eps needs at least one value");
  if (cfg.steiner < 1) throw InputError("--steiner must be at least 1");
  if (cfg.pairs < 1) throw InputError("--pairs must be positive");
  auto group = genus2_octagon_group();
  SourcePtr src = parse_source_spec(cfg.src, group);
  for (double e : cfg.eps)
    if (!(e > 0) || e >= src->injectivity_estimate())
      throw InputError("epsilon " + format_double(e, 6) + " must lie in (0, " +
                       format_double(src->injectivity_estimate(), 6) + ")");
  res.input_digest = fnv1a_hex(cfg.to_json().dump());

  std::string table = "epsilon,triangles,vertices,min_error,max_error,max_abs_error,window_lower,window_upper\n";
  std::string hist = "epsilon,bin_lower,bin_upper,count\n";
  std::vector<double> max_abs;
  for (double eps : cfg.eps) {
    MetricTriangulation mt = triangulate_quotient(*src, eps);
    auto add = [&](Report r) {
      r.name = suffix(r.name, eps);
      res.reports.push_back(std::move(r));
    };
    add(timed([&] { return diameter_audit(*src, mt); }));
    auto cs = std::make_shared<const ConeSurface>(build_cone_surface(mt));
    add(timed([&] { return cone_angle_check(*cs); }));
    add(timed([&] { return excess_budget(*cs); }));
    add(timed([&] { return chord_comparison_check(*src, *cs, 20, 100, cfg.seed); }));
    ConeDistanceField cdf(cs, cfg.steiner);
    Report fr = timed([&] { return distance_window_check(*src, cdf, eps, cfg.pairs, cfg.seed); });
    max_abs.push_back(fr.value("max_abs_error"));
    table += format_double(eps) + "," + std::to_string(mt.triangles.size()) + "," +
             std::to_string(mt.num_vertices) + "," + format_double(fr.value("min_error")) + "," +
             format_double(fr.value("max_error")) + "," + format_double(fr.value("max_abs_error")) + "," +
             format_double(fr.value("lower")) + "," + format_double(fr.value("upper")) + "\n";
    const auto& hj = fr.detail["histogram"];
    double lo = hj["lower"].get<double>(), hi = hj["upper"].get<double>();
    const auto& counts = hj["counts"];
    for (std::size_t b = 0; b < counts.size(); ++b)
      hist += format_double(eps) + "," + format_double(lo + (hi - lo) * b / counts.size()) + "," +
              format_double(lo + (hi - lo) * (b + 1) / counts.size()) + "," +
              std::to_string(counts[b].get<int>()) + "\n";
    add(std::move(fr));
  }

  if (cfg.eps.size() > 1) {
    Report r;
    r.name = "error_decrease";
    r.anchor = "the largest distance error shrinks as epsilon decreases";
    std::vector<std::size_t> order(cfg.eps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cfg.eps[a] > cfg.eps[b]; });
    double floor = 10 * (src->tolerance() + 1e-9);
    bool exact = std::all_of(max_abs.begin(), max_abs.end(), [&](double m) { return m <= floor; });
    bool strict = true;
    json ratios = json::array();
    for (std::size_t i = 1; i < order.size(); ++i) {
      double prev = max_abs[order[i - 1]], cur = max_abs[order[i]];
      strict = strict && cur < prev;
      ratios.push_back(prev > 0 ? cur / prev : 0.0);
    }
    r.values["largest_max_abs_error"] = *std::max_element(max_abs.begin(), max_abs.end());
    r.values["exact_reproduction"] = exact;
    r.tolerances["exact_floor"] = floor;
    r.detail["ratios"] = ratios;
    r.detail["max_abs_errors"] = max_abs;
    r.pass = strict || exact;
    res.reports.push_back(r);
  }
  res.files["error_vs_eps.csv"] = table;
  res.files["error_histogram.csv"] = hist;
  return res;
}

RunResult cmd_verify(const RunConfig& cfg) {
  RunResult res;
  res.command = "verify";
  const auto& suite = property_suite();
  for (const auto& name : cfg.only) {
    bool known = std::any_of(suite.begin(), suite.end(),
                             [&](const PropertyCheck& p) { return p.name == name || p.module == name; });
    if (!known) throw InputError("unknown check '" + name + "'");
  }
  std::string digest_text = cfg.to_json().dump();
  std::optional<MetricTriangulation> input;
  if (!cfg.input.empty()) {
    json doc = read_json_file(cfg.input);
    input = triangulation_from_json(doc);
    digest_text += doc.dump();
  }
  res.input_digest = fnv1a_hex(digest_text);
  for (const auto& p : suite) {
    if (!cfg.only.empty() &&
        std::none_of(cfg.only.begin(), cfg.only.end(),
                     [&](const std::string& n) { return n == p.name || n == p.module; }))
      continue;
    res.reports.push_back(timed([&] {
      try {
        Report r = p.run(cfg.seed);
        r.name = p.name;
        return r;
      } catch (const Error& e) {
        Report r;
        r.name = p.name;
        r.anchor = "check raised an error";
        r.detail["error"] = e.what();
        return r;
      }
    }));
  }
  if (input) {
    ConeSurface cs = build_cone_surface(*input);
    res.reports.push_back(timed([&] { return cone_angle_check(cs); }));
    res.reports.push_back(timed([&] { return excess_budget(cs); }));
  }
  return res;
}

void write_outputs(const RunConfig& cfg, const RunResult& result) {
  if (cfg.out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw InputError("cannot create " + cfg.out_dir + ": " + ec.message());
  auto path = [&](const std::string& f) { return (std::filesystem::path(cfg.out_dir) / f).string(); };
  write_text_file(path("reports.json"), result.to_json(cfg).dump(2) + "\n");
  json t = json::object();
  for (const auto& r : result.reports) t[r.name] = r.runtime_s;
  write_text_file(path("timings.json"), t.dump(2) + "\n");
  for (const auto& [name, text] : result.files) write_text_file(path(name), text);
}

}  // namespace adscurv
