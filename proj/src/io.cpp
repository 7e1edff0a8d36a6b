#include "polybary/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace polybary {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Polygon polygon_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw Error("polygon JSON must be an object with a \"vertices\" array");
    std::vector<Point2> pts;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2) throw Error("each vertex must be a [x, y] pair");
        pts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return validate_polygon(pts);
}

Polygon load_polygon_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open polygon file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("invalid JSON in " + path + ": " + e.what());
    }
    return polygon_from_json(j);
}

json polygon_to_json(const Polygon& p) {
    json verts = json::array();
    for (const auto& v : p.vertices()) verts.push_back({v.x, v.y});
    return json{{"vertices", verts}};
}

json report_to_json(const GeometryReport& r) {
    return json{{"diameter", r.diameter},
                {"inradius", r.inradius},
                {"incenter", {r.incenter.x, r.incenter.y}},
                {"aspect_ratio", r.aspect_ratio},
                {"interior_angles", r.interior_angles},
                {"min_edge", r.min_edge},
                {"max_angle", r.max_angle},
                {"min_angle", r.min_angle},
                {"vertex_count", r.vertex_count},
                {"area", r.area},
                {"perimeter", r.perimeter}};
}

json flags_to_json(const ConditionFlags& f) {
    return json{{"G1", f.g1}, {"G2", f.g2}, {"G3", f.g3}, {"G4", f.g4}, {"G5", f.g5}};
}

json bounds_to_json(const DerivedBoundConstants& c) {
    return json{{"B_star", c.B_star},           {"w_star", c.w_star},
                {"h_star", c.h_star},           {"D_star", c.D_star},
                {"wach_grad_bound", c.wach_grad_bound}, {"sibs_grad_bound", c.sibs_grad_bound}};
}

json mesh_to_json(const RefinedMesh& m) {
    json nodes = json::array();
    for (const auto& p : m.nodes) nodes.push_back({p.x, p.y});
    json tris = json::array();
    for (const auto& t : m.triangles) tris.push_back({t[0], t[1], t[2]});
    return json{{"nodes", nodes}, {"triangles", tris}};
}

json study_record_to_json(const StudyRecord& r) {
    json j{{"parameter", r.parameter},
           {"l2_error", r.l2_error},
           {"h1_semi_error", r.h1_semi_error},
           {"h1_error", r.h1_error},
           {"h2_seminorm_u", r.h2_seminorm_u},
           {"quadrature_converged", r.quadrature_converged}};
    if (r.fitted_rate) j["fitted_rate"] = *r.fitted_rate;
    return j;
}

json convergence_to_json(const ConvergenceStudy& s) {
    json records = json::array();
    for (const auto& r : s.records) records.push_back(study_record_to_json(r));
    json j{{"records", records}, {"rate_fit_skipped", s.rate_fit_skipped}};
    if (s.h1_rate) j["h1_rate"] = *s.h1_rate;
    if (s.l2_rate) j["l2_rate"] = *s.l2_rate;
    return j;
}

json counterexample_to_json(const CounterexampleStudy& s) {
    json records = json::array();
    for (const auto& r : s.records)
        records.push_back(json{{"eps", r.eps},
                               {"energy", r.energy},
                               {"quadrature_converged", r.quadrature_converged},
                               {"pointwise_ok", r.pointwise_ok},
                               {"min_pointwise_ratio", r.min_pointwise_ratio}});
    json j{{"records", records}};
    if (s.slope) j["slope"] = *s.slope;
    return j;
}

json audit_to_json(const GradientBoundAudit& a) {
    return json{{"sampled_sup_grad", a.sampled_sup_grad},
                {"theoretical_bound", a.theoretical_bound},
                {"pass", a.pass},
                {"min_D", a.min_D},
                {"D_star", a.D_star},
                {"max_facet_sum", a.max_facet_sum},
                {"perimeter", a.perimeter}};
}

std::string convergence_to_csv(const ConvergenceStudy& s) {
    std::ostringstream out;
    out << "parameter,l2_error,h1_semi_error,h1_error,fitted_rate\n";
    for (const auto& r : s.records) {
        out << format_g17(r.parameter) << ',' << format_g17(r.l2_error) << ',' << format_g17(r.h1_semi_error)
            << ',' << format_g17(r.h1_error) << ',';
        if (r.fitted_rate) out << format_g17(*r.fitted_rate);
        out << '\n';
    }
    return out.str();
}

std::string counterexample_to_csv(const CounterexampleStudy& s) {
    std::ostringstream out;
    out << "eps,energy,pointwise_ok,fitted_slope\n";
    for (size_t i = 0; i < s.records.size(); ++i) {
        const auto& r = s.records[i];
        out << format_g17(r.eps) << ',' << format_g17(r.energy) << ',' << (r.pointwise_ok ? 1 : 0) << ',';
        if (i + 1 == s.records.size() && s.slope) out << format_g17(*s.slope);
        out << '\n';
    }
    return out.str();
}

std::string thin_triangle_to_csv(const std::vector<StudyRecord>& records) {
    std::ostringstream out;
    out << "max_angle,l2_error,h1_semi_error,h1_error\n";
    for (const auto& r : records)
        out << format_g17(r.parameter) << ',' << format_g17(r.l2_error) << ',' << format_g17(r.h1_semi_error)
            << ',' << format_g17(r.h1_error) << '\n';
    return out.str();
}

}  // namespace polybary
