#pragma once

#include <string>

#include <json.hpp>

#include "polybary/analysis.hpp"
#include "polybary/coords_harmonic.hpp"

namespace polybary {

/// Round-trip-exact decimal formatting (17 significant digits).
std::string format_g17(double v);

/// Polygon file: {"vertices": [[x0,y0],[x1,y1],...]}; CW or CCW accepted.
Polygon load_polygon_json(const std::string& path);
Polygon polygon_from_json(const nlohmann::json& j);
nlohmann::json polygon_to_json(const Polygon& p);

nlohmann::json report_to_json(const GeometryReport& r);
nlohmann::json flags_to_json(const ConditionFlags& f);
nlohmann::json bounds_to_json(const DerivedBoundConstants& c);
nlohmann::json mesh_to_json(const RefinedMesh& m);

nlohmann::json study_record_to_json(const StudyRecord& r);
nlohmann::json convergence_to_json(const ConvergenceStudy& s);
nlohmann::json counterexample_to_json(const CounterexampleStudy& s);
nlohmann::json audit_to_json(const GradientBoundAudit& a);

std::string convergence_to_csv(const ConvergenceStudy& s);
std::string counterexample_to_csv(const CounterexampleStudy& s);
std::string thin_triangle_to_csv(const std::vector<StudyRecord>& records);

}  // namespace polybary
