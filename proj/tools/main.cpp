#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polybary/analysis.hpp"
#include "polybary/coords_exact.hpp"
#include "polybary/coords_harmonic.hpp"
#include "polybary/coords_sibson.hpp"
#include "polybary/io.hpp"

using nlohmann::json;
using namespace polybary;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitPointOutside = 3;
constexpr int kExitStudyFailed = 4;

struct RunConfig {
    std::string family = "wachspress";
    std::string polygon_path;
    std::vector<std::string> points;
    int grid = 0;
    int index = 1;  // one-based coordinate index for levelset
    double gamma_star = 4.0;
    double d_star = 0.1;
    double beta_star_max = 2.9;
    double beta_star_min = 0.2;
    int n_star = 16;
    std::string scales = "1,0.5,0.25,0.125,0.0625";
    std::string eps = "0.1,0.05,0.025,0.0125";
    std::string angles = "120,170,178";
    std::string out_path;
    std::string config_path;
    int seed = 42;
    int harmonic_level = -1;
    int samples = 10000;
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw Error("empty numeric list");
    return out;
}

Point2 parse_point(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw Error("point must be given as x,y");
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

// --config overrides any flag it names
void apply_config(RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) throw Error("cannot open config file: " + cfg.config_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(std::string("invalid config JSON: ") + e.what());
    }
    auto set_str = [&](const char* key, std::string& target) {
        if (j.contains(key)) target = j[key].get<std::string>();
    };
    auto set_int = [&](const char* key, int& target) {
        if (j.contains(key)) target = j[key].get<int>();
    };
    auto set_dbl = [&](const char* key, double& target) {
        if (j.contains(key)) target = j[key].get<double>();
    };
    set_str("family", cfg.family);
    set_str("polygon", cfg.polygon_path);
    set_str("scales", cfg.scales);
    set_str("eps", cfg.eps);
    set_str("angles", cfg.angles);
    set_str("out", cfg.out_path);
    set_int("grid", cfg.grid);
    set_int("index", cfg.index);
    set_int("seed", cfg.seed);
    set_int("harmonic-level", cfg.harmonic_level);
    set_int("samples", cfg.samples);
    set_int("n-star", cfg.n_star);
    set_dbl("gamma-star", cfg.gamma_star);
    set_dbl("d-star", cfg.d_star);
    set_dbl("beta-star-max", cfg.beta_star_max);
    set_dbl("beta-star-min", cfg.beta_star_min);
    if (j.contains("points")) {
        cfg.points.clear();
        for (const auto& p : j["points"]) cfg.points.push_back(p.get<std::string>());
    }
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

std::string json_sibling(const std::string& csv_path) {
    auto dot = csv_path.rfind('.');
    if (dot == std::string::npos) return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

// study commands print CSV; the JSON mirror goes next to --out when given
void emit_study(const RunConfig& cfg, const std::string& csv, json mirror) {
    write_text(cfg.out_path, csv);
    if (!cfg.out_path.empty()) write_text(json_sibling(cfg.out_path), mirror.dump(2) + "\n");
}

ConditionThresholds thresholds_of(const RunConfig& cfg) {
    return {cfg.gamma_star, cfg.d_star, cfg.beta_star_max, cfg.beta_star_min, cfg.n_star};
}

std::pair<Point2, Point2> bounding_box(const Polygon& p) {
    Point2 lo = p[0], hi = p[0];
    for (const auto& v : p.vertices()) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
    return {lo, hi};
}

int cmd_eval(const RunConfig& cfg) {
    Polygon p = load_polygon_json(cfg.polygon_path);
    auto field = make_field(family_from_string(cfg.family), p, cfg.harmonic_level);

    std::vector<Point2> pts;
    for (const auto& s : cfg.points) pts.push_back(parse_point(s));
    if (cfg.grid > 0) {
        auto [lo, hi] = bounding_box(p);
        for (int j = 0; j < cfg.grid; ++j)
            for (int i = 0; i < cfg.grid; ++i) {
                Point2 x{lo.x + (hi.x - lo.x) * (i + 0.5) / cfg.grid,
                         lo.y + (hi.y - lo.y) * (j + 0.5) / cfg.grid};
                if (p.contains(x)) pts.push_back(x);
            }
    }
    if (pts.empty()) throw Error("no evaluation points; use --point or --grid");

    std::ostringstream csv;
    const int n = p.size();
    csv << "x,y";
    for (int i = 1; i <= n; ++i) csv << ",lambda_" << i;
    for (int i = 1; i <= n; ++i) csv << ",dlambda_dx_" << i;
    for (int i = 1; i <= n; ++i) csv << ",dlambda_dy_" << i;
    csv << '\n';
    for (const Point2& x : pts) {
        CoordSample s = field->eval(x);
        csv << format_g17(x.x) << ',' << format_g17(x.y);
        for (double v : s.values) csv << ',' << format_g17(v);
        for (const Vec2& g : s.gradients) csv << ',' << format_g17(g.x);
        for (const Vec2& g : s.gradients) csv << ',' << format_g17(g.y);
        csv << '\n';
    }
    write_text(cfg.out_path, csv.str());
    return 0;
}

int cmd_levelset(const RunConfig& cfg) {
    Polygon p = load_polygon_json(cfg.polygon_path);
    auto field = make_field(family_from_string(cfg.family), p, cfg.harmonic_level);
    const int m = cfg.grid > 0 ? cfg.grid : 200;
    const int idx = cfg.index - 1;
    if (idx < 0 || idx >= p.size()) throw Error("--index out of range");

    auto [lo, hi] = bounding_box(p);
    std::ostringstream csv;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            Point2 x{lo.x + (hi.x - lo.x) * (i + 0.5) / m, lo.y + (hi.y - lo.y) * (j + 0.5) / m};
            if (i) csv << ',';
            if (p.contains(x))
                csv << format_g17(field->eval(x).values[static_cast<size_t>(idx)]);
            else
                csv << "nan";
        }
        csv << '\n';
    }
    write_text(cfg.out_path, csv.str());
    return 0;
}

int cmd_check(const RunConfig& cfg) {
    Polygon p = load_polygon_json(cfg.polygon_path);
    GeometryReport r = measure(rescaled_to_unit_diameter(p));
    ConditionFlags f = check_conditions(r, thresholds_of(cfg));
    json out = flags_to_json(f);
    out["report"] = report_to_json(r);
    out["derived"] = bounds_to_json(derived_bound_constants(thresholds_of(cfg)));
    write_text(cfg.out_path, out.dump(2) + "\n");
    return 0;
}

int cmd_convergence(const RunConfig& cfg) {
    Polygon p = load_polygon_json(cfg.polygon_path);
    Family fam = family_from_string(cfg.family);
    ScalarField u = polynomial_field(0, 0, 0, 1, 1, 1);  // x^2 + xy + y^2
    ConvergenceStudy study = convergence_study(fam, p, u, parse_list(cfg.scales), cfg.harmonic_level);

    const double h1_lo = fam == Family::Harmonic ? 0.85 : 0.9;
    const double h1_hi = fam == Family::Harmonic ? 1.15 : 1.1;
    const bool pass = study.h1_rate && study.l2_rate && *study.h1_rate >= h1_lo && *study.h1_rate <= h1_hi &&
                      *study.l2_rate >= 1.85 && *study.l2_rate <= 2.15;

    json mirror = convergence_to_json(study);
    mirror["pass"] = pass;
    emit_study(cfg, convergence_to_csv(study), mirror);
    return pass ? 0 : kExitStudyFailed;
}

int cmd_counterexample(const RunConfig& cfg) {
    CounterexampleStudy study = counterexample_study(parse_list(cfg.eps));
    bool increasing = true;
    for (size_t i = 0; i + 1 < study.records.size(); ++i)
        if (study.records[i + 1].eps < study.records[i].eps &&
            study.records[i + 1].energy <= study.records[i].energy)
            increasing = false;
    bool pointwise = true;
    for (const auto& r : study.records) pointwise = pointwise && r.pointwise_ok;
    const bool pass = increasing && pointwise && study.slope && *study.slope <= -0.9;

    json mirror = counterexample_to_json(study);
    mirror["pass"] = pass;
    emit_study(cfg, counterexample_to_csv(study), mirror);
    return pass ? 0 : kExitStudyFailed;
}

int cmd_bounds(const RunConfig& cfg) {
    Polygon p = load_polygon_json(cfg.polygon_path);
    GradientBoundAudit audit = gradient_bound_audit(family_from_string(cfg.family), p, thresholds_of(cfg),
                                                    cfg.samples, cfg.seed);
    json out = audit_to_json(audit);
    write_text(cfg.out_path, out.dump(2) + "\n");
    return audit.pass ? 0 : kExitStudyFailed;
}

int cmd_thin_tri(const RunConfig& cfg) {
    std::vector<double> degrees = parse_list(cfg.angles);
    std::vector<double> radians;
    for (double d : degrees) radians.push_back(d * std::numbers::pi / 180.0);
    auto records = thin_triangle_study(radians);
    bool increasing = true;
    for (size_t i = 0; i + 1 < records.size(); ++i)
        if (records[i + 1].parameter > records[i].parameter &&
            records[i + 1].h1_semi_error <= records[i].h1_semi_error)
            increasing = false;

    json mirror;
    mirror["records"] = json::array();
    for (const auto& r : records) mirror["records"].push_back(study_record_to_json(r));
    mirror["pass"] = increasing;
    emit_study(cfg, thin_triangle_to_csv(records), mirror);
    return increasing ? 0 : kExitStudyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Generalized barycentric coordinates on convex polygons"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool wants_polygon) {
        sub->add_option("--family", cfg.family, "tri | wachspress | sibson | harmonic");
        if (wants_polygon) sub->add_option("--polygon", cfg.polygon_path, "polygon JSON file");
        sub->add_option("--gamma-star", cfg.gamma_star, "G1 aspect-ratio threshold");
        sub->add_option("--d-star", cfg.d_star, "G2 minimum edge threshold");
        sub->add_option("--beta-star-max", cfg.beta_star_max, "G3 maximum-angle threshold (radians)");
        sub->add_option("--beta-star-min", cfg.beta_star_min, "G4 minimum-angle threshold (radians)");
        sub->add_option("--n-star", cfg.n_star, "G5 vertex-count threshold");
        sub->add_option("--harmonic-level", cfg.harmonic_level, "harmonic refinement level (-1 = auto)");
        sub->add_option("--seed", cfg.seed, "sampling seed");
        sub->add_option("--out", cfg.out_path, "output path (stdout when omitted)");
        sub->add_option("--config", cfg.config_path, "JSON config overriding flags");
    };

    auto* eval = app.add_subcommand("eval", "evaluate coordinates and gradients at points");
    add_common(eval, true);
    eval->add_option("--point", cfg.points, "evaluation point x,y (repeatable)");
    eval->add_option("--grid", cfg.grid, "evaluate on an m x m bounding-box grid (inside points)");

    auto* levelset = app.add_subcommand("levelset", "sample one coordinate on a grid (nan outside)");
    add_common(levelset, true);
    levelset->add_option("--index", cfg.index, "coordinate index, one-based");
    levelset->add_option("--grid", cfg.grid, "grid resolution m");

    auto* check = app.add_subcommand("check", "measure the polygon and check G1-G5");
    add_common(check, true);

    auto* conv = app.add_subcommand("convergence", "interpolation error rates for u=x^2+xy+y^2");
    add_common(conv, true);
    conv->add_option("--scales", cfg.scales, "comma-separated scale list");

    auto* cex = app.add_subcommand("counterexample", "pentagon Wachspress blow-up study");
    add_common(cex, false);
    cex->add_option("--eps", cfg.eps, "comma-separated epsilon list");

    auto* bounds = app.add_subcommand("bounds", "sampled gradient bound audit");
    add_common(bounds, true);
    bounds->add_option("--samples", cfg.samples, "number of quasi-random samples");

    auto* thin = app.add_subcommand("thin-tri", "quadratic interpolation on thinning triangles");
    add_common(thin, false);
    thin->add_option("--angles", cfg.angles, "comma-separated max angles in degrees");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_config(cfg);
        if (eval->parsed()) return cmd_eval(cfg);
        if (levelset->parsed()) return cmd_levelset(cfg);
        if (check->parsed()) return cmd_check(cfg);
        if (conv->parsed()) return cmd_convergence(cfg);
        if (cex->parsed()) return cmd_counterexample(cfg);
        if (bounds->parsed()) return cmd_bounds(cfg);
        if (thin->parsed()) return cmd_thin_tri(cfg);
    } catch (const PointOutside& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPointOutside;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
