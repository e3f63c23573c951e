#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adscurv/ads3.hpp"
#include "adscurv/conemetric.hpp"
#include "adscurv/errors.hpp"
#include "adscurv/fuchsian.hpp"
#include "adscurv/hyp2.hpp"
#include "adscurv/io.hpp"
#include "adscurv/pipeline.hpp"

namespace py = pybind11;
using namespace adscurv;

namespace {

// Results cross the boundary as JSON text; the package decodes them.
std::string run_command(const std::string& command, const std::string& fn, const std::string& src,
                        const std::vector<double>& eps, const std::string& input, double h, int steiner,
                        int pairs, int samples, std::uint64_t seed, const std::vector<std::string>& only) {
  RunConfig cfg;
  cfg.command = command;
  cfg.fn = fn;
  cfg.src = src;
  cfg.eps = eps;
  cfg.input = input;
  cfg.h = h;
  cfg.steiner = steiner;
  cfg.pairs = pairs;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.only = only;
  RunResult r;
  {
    py::gil_scoped_release release;
    if (command == "surface") r = cmd_surface(cfg);
    else if (command == "approx") r = cmd_approx(cfg);
    else if (command == "verify") r = cmd_verify(cfg);
    else throw InputError("unknown command " + command);
  }
  return r.to_json(cfg).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DegenerateTriangle>(m, "DegenerateTriangle", base.ptr());
  py::register_exception<BadTriangle>(m, "BadTriangle", base.ptr());

  py::class_<H2Point>(m, "H2Point")
      .def(py::init<>())
      .def_static("polar", &H2Point::polar, py::arg("r"), py::arg("angle"))
      .def_static("from_spatial", &H2Point::from_spatial)
      .def_static("from_poincare", [](double a, double b) { return H2Point::from_poincare({a, b}); })
      .def_property_readonly("coords", [](const H2Point& p) { return std::make_tuple(p.x0(), p.x1(), p.x2()); })
      .def_property_readonly("poincare", [](const H2Point& p) { return p.poincare(); })
      .def("__repr__", [](const H2Point& p) {
        return "H2Point(" + std::to_string(p.x0()) + ", " + std::to_string(p.x1()) + ", " +
               std::to_string(p.x2()) + ")";
      });

  m.def("h2_distance", &h2_distance);
  m.def("comparison_angles", [](double c, double b, double a) {
    TriangleShape t = comparison_triangle(c, b, a);
    return std::make_tuple(t.alpha, t.beta, t.gamma);
  }, "Angles opposite sides a, b, c of the hyperbolic triangle with sides (c, b, a).");
  m.def("triangle_area", [](double c, double b, double a) { return triangle_area(comparison_triangle(c, b, a)); });
  m.def("isosceles_chord", &isosceles_chord, py::arg("leg"), py::arg("angle"));

  m.def("classify_chart_line", [](std::array<double, 3> a, std::array<double, 3> b) {
    return std::string(to_string(classify_chart_line({a[0], a[1], a[2]}, {b[0], b[1], b[2]})));
  }, "Causal type of the chart line through (xbar1, xbar2, xbar3) points a and b.");

  m.def("octagon_systole", [](int radius) { return genus2_octagon_group()->systole(radius); },
        py::arg("radius") = 4);
  m.def("octagon_ball_size", [](int radius) { return genus2_octagon_group()->ball(radius).size(); });

  m.def("triangulation_check", [](const std::string& json_text) {
    ConeSurface cs = build_cone_surface(triangulation_from_json(nlohmann::json::parse(json_text)));
    nlohmann::json out = nlohmann::json::array();
    out.push_back(cone_angle_check(cs).to_json());
    out.push_back(excess_budget(cs).to_json());
    return out.dump();
  });

  m.def("property_names", [] {
    std::vector<std::string> names;
    for (const auto& p : property_suite()) names.push_back(p.name);
    return names;
  });

  m.def("run_command", &run_command, py::arg("command"), py::arg("fn"), py::arg("src"), py::arg("eps"),
        py::arg("input"), py::arg("h"), py::arg("steiner"), py::arg("pairs"), py::arg("samples"),
        py::arg("seed"), py::arg("only"));
}
