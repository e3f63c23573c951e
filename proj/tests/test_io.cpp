#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>

#include "adscurv/errors.hpp"
#include "adscurv/io.hpp"

using namespace adscurv;
using nlohmann::json;

namespace {

json tetrahedron() {
  return json::parse(R"({"genus": 0, "vertices": [10, 20, 30, 40],
    "triangles": [[10, 20, 30], [10, 40, 20], [20, 40, 30], [10, 30, 40]],
    "edge_lengths": {"10,20": 1.0, "10,30": 1.1, "10,40": 0.9, "20,30": 1.2, "20,40": 1.0, "30,40": 0.8}})");
}

std::string schema_message(const json& j) {
  try {
    triangulation_from_json(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.4), "0.4");
  EXPECT_EQ(format_double(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  Rng rng(61);
  for (int i = 0; i < 10000; ++i) {
    double x = std::ldexp(uniform01(rng) - 0.5, static_cast<int>(rng() % 200) - 100);
    ASSERT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
}

TEST(TriangulationJson, SimpleFormRemapsIds) {
  MetricTriangulation mt = triangulation_from_json(tetrahedron());
  EXPECT_EQ(mt.num_vertices, 4);
  EXPECT_EQ(mt.edges.size(), 6u);
  EXPECT_EQ(mt.euler_characteristic(), 2);
  EXPECT_TRUE(mt.closed());
  EXPECT_EQ(mt.epsilon, 0);
  // Edge 30-40 has length 0.8 after remapping to internal indices 2, 3.
  bool found = false;
  for (std::size_t e = 0; e < mt.edges.size(); ++e)
    if (std::min(mt.edges[e][0], mt.edges[e][1]) == 2 && std::max(mt.edges[e][0], mt.edges[e][1]) == 3) {
      EXPECT_EQ(mt.edge_length[e], 0.8);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(TriangulationJson, RoundTripSimple) {
  MetricTriangulation a = triangulation_from_json(tetrahedron());
  a.epsilon = 0.25;
  json j = triangulation_to_json(a);
  EXPECT_EQ(j["schema"], kTriangulationSchema);
  EXPECT_FALSE(j.contains("edges"));
  MetricTriangulation b = triangulation_from_json(json::parse(j.dump()));
  EXPECT_EQ(b.triangles, a.triangles);
  EXPECT_EQ(b.edges, a.edges);
  EXPECT_EQ(b.edge_length, a.edge_length);
  EXPECT_EQ(b.edge_sign, a.edge_sign);
  EXPECT_EQ(b.epsilon, 0.25);
}

TEST(TriangulationJson, RoundTripOctagonWithLoops) {
  ScaledHyperbolicSource src(genus2_octagon_group(), 1.0);
  MetricTriangulation a = triangulate_octagon(src, 1);
  json j = triangulation_to_json(a);
  ASSERT_TRUE(j.contains("edges"));
  ASSERT_TRUE(j.contains("edge_signs"));
  MetricTriangulation b = triangulation_from_json(json::parse(j.dump()));
  EXPECT_EQ(b.genus, 2);
  EXPECT_EQ(b.triangles, a.triangles);
  EXPECT_EQ(b.triangle_edges, a.triangle_edges);
  EXPECT_EQ(b.edge_sign, a.edge_sign);
  EXPECT_EQ(b.edge_length, a.edge_length);
  ConeSurface ca = build_cone_surface(a), cb = build_cone_surface(b);
  EXPECT_EQ(ca.cone_angle, cb.cone_angle);
}

TEST(TriangulationJson, SchemaErrorsNameTheField) {
  json j = tetrahedron();
  j.erase("triangles");
  EXPECT_EQ(schema_message(j), "schema: triangles: missing");

  j = tetrahedron();
  j.erase("genus");
  EXPECT_EQ(schema_message(j), "schema: genus: missing");

  j = tetrahedron();
  j["genus"] = "two";
  EXPECT_EQ(schema_message(j), "schema: genus: expected an integer");

  j = tetrahedron();
  j["triangles"][1][2] = 99;
  EXPECT_NE(schema_message(j).find("unknown vertex 99"), std::string::npos);

  j = tetrahedron();
  j["edge_lengths"].erase("30,40");
  EXPECT_NE(schema_message(j).find("edge_lengths"), std::string::npos);

  j = tetrahedron();
  j["edge_lengths"]["30-40"] = 1.0;
  EXPECT_NE(schema_message(j).find("key must be"), std::string::npos);

  j = tetrahedron();
  j["vertices"].push_back(10);
  EXPECT_NE(schema_message(j).find("duplicate id"), std::string::npos);

  EXPECT_EQ(schema_message(json::array()), "schema: document: expected an object");
}

TEST(TriangulationJson, LengthErrors) {
  json j = tetrahedron();
  j["edge_lengths"]["10,20"] = -1.0;
  EXPECT_THROW(triangulation_from_json(j), InputError);
  j = tetrahedron();
  j["edge_lengths"]["20,30"] = 2.5;
  EXPECT_THROW(triangulation_from_json(j), BadTriangle);
}

TEST(Files, MissingAndCorrupt) {
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), InputError);
  auto dir = std::filesystem::temp_directory_path() / "adscurv_io_test";
  std::filesystem::create_directories(dir);
  std::string bad = (dir / "bad.json").string();
  write_text_file(bad, "{\"genus\": ");
  try {
    read_json_file(bad);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("invalid JSON"), std::string::npos);
  }
  std::string good = (dir / "good.json").string();
  write_text_file(good, tetrahedron().dump());
  EXPECT_EQ(read_json_file(good), tetrahedron());
  std::filesystem::remove_all(dir);
}

TEST(GroupJson, RoundTrip) {
  auto g = genus2_octagon_group();
  json j = group_to_json(*g);
  EXPECT_EQ(j["schema"], kGroupSchema);
  EXPECT_EQ(j["relator"], "1 -2 3 -4 -1 2 -3 4");
  FuchsianGroup h = group_from_json(json::parse(j.dump()));
  ASSERT_EQ(h.generators().size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(h.generators()[k].sign_distance(g->generators()[k]), 1e-14);
  EXPECT_LT(h.relator_residual(), 1e-8);
  EXPECT_EQ(h.ball(2).size(), 65u);
}

TEST(GroupJson, Errors) {
  json j = group_to_json(*genus2_octagon_group());
  j["relator"] = "1 -2 9";
  EXPECT_THROW(group_from_json(j), InputError);
  j = group_to_json(*genus2_octagon_group());
  j["generators"][0] = {1, 0, 0, 1};
  EXPECT_THROW(group_from_json(j), InputError);
  j = group_to_json(*genus2_octagon_group());
  j["relator"] = "1 x";
  EXPECT_THROW(group_from_json(j), InputError);
}

TEST(MeshJson, StructureAndCsv) {
  auto mesh = std::make_shared<GeodesicMesh>(GeodesicMesh::regular_polygon(8, 0.5, 0.2));
  json j = mesh_to_json(*mesh);
  EXPECT_EQ(j["schema"], kMeshSchema);
  ASSERT_EQ(j["vertices"].size(), mesh->vertices.size());
  EXPECT_EQ(j["vertices"][0].size(), 3u);
  ASSERT_EQ(j["edges"].size(), mesh->edges.size());
  EXPECT_EQ(j["edges"][0][2].get<double>(), mesh->lengths[0]);
  EXPECT_EQ(j["covering_radius"].get<double>(), mesh->h);

  InducedDistanceField f(constant_function(0), mesh);
  std::string csv = distance_csv(f, {0, 3, 5});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "id,0,3,5");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 4), "0,0,");
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "5,");
  EXPECT_EQ(std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr), 0.0);
}
