#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adscurv/conemetric.hpp"
#include "adscurv/fuchsian.hpp"
#include "adscurv/surface.hpp"

namespace adscurv {

inline constexpr const char* kMeshSchema = "adscurv.mesh/1";
inline constexpr const char* kTriangulationSchema = "adscurv.triangulation/1";
inline constexpr const char* kGroupSchema = "adscurv.group/1";

// InputError when the file is missing or not valid JSON.
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

nlohmann::json mesh_to_json(const GeodesicMesh& mesh);
// Distances among the listed vertices; header row and column carry vertex ids.
std::string distance_csv(const InducedDistanceField& field, const std::vector<int>& ids);

// {genus, vertices, triangles, edge_lengths {"v,w": len}, epsilon (optional)}, optionally with
// edges [[v, w, len]] and triangle_edges [[e, e, e]] for complexes with repeated pairs.
nlohmann::json triangulation_to_json(const MetricTriangulation& mt);
// InputError naming the offending field; the result is validated.
MetricTriangulation triangulation_from_json(const nlohmann::json& j);

// Generators row-major with 16 significant digits; relator as "1 -2 3 ...".
nlohmann::json group_to_json(const FuchsianGroup& g);
FuchsianGroup group_from_json(const nlohmann::json& j);

// Shortest of 15..digits significant digits that reads back to x (17 always does).
std::string format_double(double x, int digits = 17);

}  // namespace adscurv
