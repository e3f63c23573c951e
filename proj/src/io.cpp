#include "adscurv/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "adscurv/errors.hpp"

namespace adscurv {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw InputError("schema: " + where + ": " + what);
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(key, "missing");
  return *it;
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  double x = j.get<double>();
  if (!std::isfinite(x)) schema_error(where, "not finite");
  return x;
}

const json& as_array(const json& j, const std::string& where, std::size_t size = 0) {
  if (!j.is_array()) schema_error(where, "expected an array");
  if (size && j.size() != size) schema_error(where, "expected " + std::to_string(size) + " entries");
  return j;
}

std::string pair_key(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace

std::string format_double(double x, int digits) {
  char buf[40];
  for (int d = std::min(digits, 15); d <= digits; ++d) {
    std::snprintf(buf, sizeof buf, "%.*g", d, x);
    if (d == digits || std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

json mesh_to_json(const GeodesicMesh& mesh) {
  json j;
  j["schema"] = kMeshSchema;
  j["covering_radius"] = mesh.h;
  j["neighbor_radius"] = mesh.neighbor_radius;
  json v = json::array();
  for (const auto& p : mesh.vertices) v.push_back({p.x0(), p.x1(), p.x2()});
  j["vertices"] = std::move(v);
  json e = json::array();
  for (std::size_t i = 0; i < mesh.edges.size(); ++i)
    e.push_back({mesh.edges[i][0], mesh.edges[i][1], mesh.lengths[i]});
  j["edges"] = std::move(e);
  return j;
}

std::string distance_csv(const InducedDistanceField& field, const std::vector<int>& ids) {
  field.precompute(ids);
  std::string out = "id";
  for (int b : ids) out += "," + std::to_string(b);
  out += "\n";
  for (int a : ids) {
    const auto& row = field.row(a);
    out += std::to_string(a);
    for (int b : ids) out += "," + format_double(row[b]);
    out += "\n";
  }
  return out;
}

json triangulation_to_json(const MetricTriangulation& mt) {
  json j;
  j["schema"] = kTriangulationSchema;
  j["genus"] = mt.genus;
  json v = json::array();
  for (int i = 0; i < mt.num_vertices; ++i) v.push_back(i);
  j["vertices"] = std::move(v);
  j["triangles"] = mt.triangles;
  json lengths = json::object();
  bool simple = true;
  for (std::size_t e = 0; e < mt.edges.size(); ++e) {
    std::string key = pair_key(mt.edges[e][0], mt.edges[e][1]);
    if (mt.edges[e][0] == mt.edges[e][1] || lengths.contains(key) ||
        lengths.contains(pair_key(mt.edges[e][1], mt.edges[e][0])))
      simple = false;
    lengths[key] = mt.edge_length[e];
  }
  j["epsilon"] = mt.epsilon;
  if (simple) {
    j["edge_lengths"] = std::move(lengths);
  } else {
    j["edge_lengths"] = json::object();
    json e = json::array();
    for (std::size_t i = 0; i < mt.edges.size(); ++i)
      e.push_back({mt.edges[i][0], mt.edges[i][1], mt.edge_length[i]});
    j["edges"] = std::move(e);
    j["triangle_edges"] = mt.triangle_edges;
    j["edge_signs"] = mt.edge_sign;
  }
  return j;
}

MetricTriangulation triangulation_from_json(const json& j) {
  if (!j.is_object()) schema_error("document", "expected an object");
  MetricTriangulation mt;
  mt.genus = as_int(require(j, "genus"), "genus");
  if (mt.genus < 0) schema_error("genus", "negative");
  if (j.contains("epsilon")) mt.epsilon = as_number(j["epsilon"], "epsilon");
  if (mt.epsilon < 0) schema_error("epsilon", "negative");

  std::map<int, int> ids;
  const json& verts = as_array(require(j, "vertices"), "vertices");
  for (std::size_t i = 0; i < verts.size(); ++i) {
    int id = as_int(verts[i], "vertices[" + std::to_string(i) + "]");
    if (!ids.emplace(id, static_cast<int>(ids.size())).second)
      schema_error("vertices[" + std::to_string(i) + "]", "duplicate id " + std::to_string(id));
  }
  mt.num_vertices = static_cast<int>(ids.size());
  if (mt.num_vertices == 0) schema_error("vertices", "empty");
  auto vertex = [&](const json& x, const std::string& where) {
    int id = as_int(x, where);
    auto it = ids.find(id);
    if (it == ids.end()) schema_error(where, "unknown vertex " + std::to_string(id));
    return it->second;
  };

  const json& tris = as_array(require(j, "triangles"), "triangles");
  if (tris.empty()) schema_error("triangles", "empty");
  for (std::size_t t = 0; t < tris.size(); ++t) {
    std::string where = "triangles[" + std::to_string(t) + "]";
    as_array(tris[t], where, 3);
    std::array<int, 3> tv{};
    for (int k = 0; k < 3; ++k) tv[k] = vertex(tris[t][k], where);
    mt.triangles.push_back(tv);
  }

  if (j.contains("edges")) {
    const json& edges = as_array(j["edges"], "edges");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      std::string where = "edges[" + std::to_string(e) + "]";
      as_array(edges[e], where, 3);
      mt.edges.push_back({vertex(edges[e][0], where), vertex(edges[e][1], where)});
      mt.edge_length.push_back(as_number(edges[e][2], where));
    }
    if (!j.contains("triangle_edges")) schema_error("triangle_edges", "required with edges");
    const json& te = as_array(j["triangle_edges"], "triangle_edges", tris.size());
    const json* signs = j.contains("edge_signs") ? &as_array(j["edge_signs"], "edge_signs", tris.size())
                                                 : nullptr;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      std::string where = "triangle_edges[" + std::to_string(t) + "]";
      as_array(te[t], where, 3);
      std::array<int, 3> row{}, sg{};
      for (int k = 0; k < 3; ++k) {
        row[k] = as_int(te[t][k], where);
        if (row[k] < 0 || row[k] >= static_cast<int>(mt.edges.size()))
          schema_error(where, "edge index out of range");
        int a = mt.triangles[t][(k + 1) % 3];
        const auto& ev = mt.edges[row[k]];
        if (signs) {
          std::string sw = "edge_signs[" + std::to_string(t) + "]";
          as_array((*signs)[t], sw, 3);
          sg[k] = as_int((*signs)[t][k], sw);
          if (sg[k] != 1 && sg[k] != -1) schema_error(sw, "signs must be +1 or -1");
        } else if (ev[0] == ev[1]) {
          schema_error(where, "loop edges need edge_signs");
        } else {
          sg[k] = ev[0] == a ? 1 : -1;
        }
      }
      mt.triangle_edges.push_back(row);
      mt.edge_sign.push_back(sg);
    }
  } else {
    const json& lengths = require(j, "edge_lengths");
    if (!lengths.is_object()) schema_error("edge_lengths", "expected an object keyed by \"v,w\"");
    std::map<std::pair<int, int>, double> table;
    for (auto it = lengths.begin(); it != lengths.end(); ++it) {
      std::string where = "edge_lengths[\"" + it.key() + "\"]";
      int a = 0, b = 0;
      char tail = 0;
      if (std::sscanf(it.key().c_str(), "%d,%d%c", &a, &b, &tail) != 2)
        schema_error(where, "key must be \"v,w\"");
      auto ia = ids.find(a), ib = ids.find(b);
      if (ia == ids.end() || ib == ids.end()) schema_error(where, "unknown vertex");
      table[std::minmax(ia->second, ib->second)] = as_number(it.value(), where);
    }
    mt.build_edges_from_vertices();
    for (const auto& e : mt.edges) {
      auto it = table.find({e[0], e[1]});
      if (it == table.end()) schema_error("edge_lengths", "no length for an edge of the triangles");
      mt.edge_length.push_back(it->second);
    }
  }
  mt.validate();
  return mt;
}

json group_to_json(const FuchsianGroup& g) {
  json j;
  j["schema"] = kGroupSchema;
  j["genus"] = g.genus();
  json gens = json::array();
  for (const auto& m : g.generators()) {
    json row = json::array();
    for (double x : {m.a(), m.b(), m.c(), m.d()}) row.push_back(std::stod(format_double(x, 16)));
    gens.push_back(std::move(row));
  }
  j["generators"] = std::move(gens);
  std::string rel;
  for (int l : g.relator()) rel += (rel.empty() ? "" : " ") + std::to_string(l);
  j["relator"] = rel;
  return j;
}

FuchsianGroup group_from_json(const json& j) {
  if (!j.is_object()) schema_error("document", "expected an object");
  int genus = as_int(require(j, "genus"), "genus");
  std::vector<Mobius> gens;
  const json& arr = as_array(require(j, "generators"), "generators");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string where = "generators[" + std::to_string(i) + "]";
    as_array(arr[i], where, 4);
    double m[4];
    for (int k = 0; k < 4; ++k) m[k] = as_number(arr[i][k], where);
    try {
      gens.emplace_back(m[0], m[1], m[2], m[3]);
    } catch (const Error& e) {
      schema_error(where, e.what());
    }
  }
  const json& rel = require(j, "relator");
  if (!rel.is_string()) schema_error("relator", "expected a signed index string");
  std::vector<int> letters;
  std::istringstream in(rel.get<std::string>());
  int l;
  while (in >> l) {
    if (l == 0 || std::abs(l) > static_cast<int>(gens.size())) schema_error("relator", "letter out of range");
    letters.push_back(l);
  }
  if (!in.eof()) schema_error("relator", "expected integers separated by spaces");
  try {
    return FuchsianGroup(std::move(gens), genus, std::move(letters));
  } catch (const Error& e) {
    schema_error("generators", e.what());
  }
}

}  // namespace adscurv
