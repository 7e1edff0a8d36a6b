#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "polybary/analysis.hpp"
#include "polybary/coords_exact.hpp"
#include "polybary/coords_harmonic.hpp"
#include "polybary/coords_sibson.hpp"
#include "polybary/io.hpp"

namespace py = pybind11;
using namespace polybary;

namespace {

py::object to_py(const nlohmann::json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

ConditionThresholds thresholds(double gamma_star, double d_star, double beta_star_max, double beta_star_min,
                               int n_star) {
    return {gamma_star, d_star, beta_star_max, beta_star_min, n_star};
}

std::vector<Point2> as_points(const std::vector<std::pair<double, double>>& pts) {
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& [x, y] : pts) out.push_back({x, y});
    return out;
}

// keeps the polygon alive next to the field it feeds
struct PyField {
    Polygon polygon;
    std::unique_ptr<CoordinateField> field;

    PyField(Polygon p, const std::string& family, int harmonic_level)
        : polygon(std::move(p)), field(make_field(family_from_string(family), polygon, harmonic_level)) {}

    py::tuple eval(double x, double y) const {
        CoordSample s = field->eval({x, y});
        py::list values, gradients;
        for (double v : s.values) values.append(v);
        for (const Vec2& g : s.gradients) gradients.append(py::make_tuple(g.x, g.y));
        return py::make_tuple(values, gradients);
    }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Barycentric coordinates (triangulation, Wachspress, Sibson, harmonic) on convex polygons";

    py::register_exception<Error>(m, "Error");

    py::class_<Polygon>(m, "Polygon")
        .def(py::init([](const std::vector<std::pair<double, double>>& pts) {
                 return validate_polygon(as_points(pts));
             }),
             py::arg("vertices"))
        .def_property_readonly("vertices",
                               [](const Polygon& p) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& v : p.vertices()) out.emplace_back(v.x, v.y);
                                   return out;
                               })
        .def("__len__", &Polygon::size)
        .def_property_readonly("diameter", &Polygon::diameter)
        .def_property_readonly("area", &Polygon::area)
        .def("contains", [](const Polygon& p, double x, double y) { return p.contains({x, y}); });

    m.def(
        "validate_polygon",
        [](const std::vector<std::pair<double, double>>& pts) { return validate_polygon(as_points(pts)); },
        py::arg("vertices"));

    m.def(
        "measure", [](const Polygon& p) { return to_py(report_to_json(measure(p))); }, py::arg("polygon"));

    m.def(
        "check_conditions",
        [](const Polygon& p, double gamma_star, double d_star, double beta_star_max, double beta_star_min,
           int n_star) {
            GeometryReport r = measure(rescaled_to_unit_diameter(p));
            auto t = thresholds(gamma_star, d_star, beta_star_max, beta_star_min, n_star);
            nlohmann::json out = flags_to_json(check_conditions(r, t));
            out["report"] = report_to_json(r);
            return to_py(out);
        },
        py::arg("polygon"), py::arg("gamma_star") = 4.0, py::arg("d_star") = 0.1,
        py::arg("beta_star_max") = 2.9, py::arg("beta_star_min") = 0.2, py::arg("n_star") = 16,
        "Checks G1-G5 on the diameter-1 rescaled polygon.");

    m.def(
        "derived_bound_constants",
        [](double gamma_star, double d_star, double beta_star_max, double beta_star_min, int n_star) {
            return to_py(bounds_to_json(
                derived_bound_constants(thresholds(gamma_star, d_star, beta_star_max, beta_star_min, n_star))));
        },
        py::arg("gamma_star") = 4.0, py::arg("d_star") = 0.1, py::arg("beta_star_max") = 2.9,
        py::arg("beta_star_min") = 0.2, py::arg("n_star") = 16);

    py::class_<PyField>(m, "Field")
        .def(py::init<Polygon, const std::string&, int>(), py::arg("polygon"), py::arg("family"),
             py::arg("harmonic_level") = -1)
        .def("eval", &PyField::eval, py::arg("x"), py::arg("y"),
             "Returns (values, gradients) of all coordinates at (x, y).");

    m.def(
        "convergence_study",
        [](const Polygon& p, const std::string& family, const std::vector<double>& scales,
           int harmonic_level) {
            ScalarField u = polynomial_field(0, 0, 0, 1, 1, 1);
            return to_py(convergence_to_json(
                convergence_study(family_from_string(family), p, u, scales, harmonic_level)));
        },
        py::arg("polygon"), py::arg("family"),
        py::arg("scales") = std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625}, py::arg("harmonic_level") = -1,
        "Interpolation errors of u = x^2 + xy + y^2 on scaled copies, with fitted rates.");

    m.def(
        "counterexample_study",
        [](const std::vector<double>& eps) { return to_py(counterexample_to_json(counterexample_study(eps))); },
        py::arg("eps") = std::vector<double>{0.1, 0.05, 0.025, 0.0125});

    m.def(
        "gradient_bound_audit",
        [](const Polygon& p, const std::string& family, double gamma_star, double d_star,
           double beta_star_max, double beta_star_min, int n_star, int samples, int seed) {
            return to_py(audit_to_json(
                gradient_bound_audit(family_from_string(family), p,
                                     thresholds(gamma_star, d_star, beta_star_max, beta_star_min, n_star),
                                     samples, seed)));
        },
        py::arg("polygon"), py::arg("family"), py::arg("gamma_star") = 4.0, py::arg("d_star") = 0.1,
        py::arg("beta_star_max") = 2.9, py::arg("beta_star_min") = 0.2, py::arg("n_star") = 16,
        py::arg("samples") = 10000, py::arg("seed") = 42);

    m.def(
        "thin_triangle_study",
        [](const std::vector<double>& max_angles) {
            nlohmann::json out = nlohmann::json::array();
            for (const auto& r : thin_triangle_study(max_angles)) out.push_back(study_record_to_json(r));
            return to_py(out);
        },
        py::arg("max_angles"), "Max angles in radians.");

    m.def("pentagon_omega_eps", &pentagon_omega_eps, py::arg("eps"),
          "The near-square pentagon with apex coordinate index 0.");
}
