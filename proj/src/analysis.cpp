#include "polybary/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "polybary/coords_exact.hpp"
#include "polybary/coords_harmonic.hpp"
#include "polybary/coords_sibson.hpp"

namespace polybary {

namespace {

// symmetric degree-5 rule, 7 points, weights normalized to 1
struct RulePoint {
    double b0, b1, b2, w;
};

const std::array<RulePoint, 7>& rule7() {
    static const std::array<RulePoint, 7> pts = [] {
        const double s15 = std::sqrt(15.0);
        const double b1 = (6.0 - s15) / 21.0, a1 = 1.0 - 2.0 * b1, w1 = (155.0 - s15) / 1200.0;
        const double b2 = (6.0 + s15) / 21.0, a2 = 1.0 - 2.0 * b2, w2 = (155.0 + s15) / 1200.0;
        return std::array<RulePoint, 7>{{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
                                         {a1, b1, b1, w1},
                                         {b1, a1, b1, w1},
                                         {b1, b1, a1, w1},
                                         {a2, b2, b2, w2},
                                         {b2, a2, b2, w2},
                                         {b2, b2, a2, w2}}};
    }();
    return pts;
}

// one pass at a fixed refinement level; f fills `k` values per point
template <typename F>
void accumulate(const QuadratureScheme& q, int refinement, int k, double* acc, F&& f) {
    std::fill(acc, acc + k, 0.0);
    const int m = 1 << refinement;
    std::vector<double> vals(static_cast<size_t>(k));
    for (const Triangle& base : q.base_cells) {
        const Vec2 du = (base.v[1] - base.v[0]) / static_cast<double>(m);
        const Vec2 dv = (base.v[2] - base.v[0]) / static_cast<double>(m);
        const double cell_area = base.area() / static_cast<double>(m) / static_cast<double>(m);
        auto corner = [&](int i, int j) { return base.v[0] + du * static_cast<double>(i) + dv * static_cast<double>(j); };
        auto add_tri = [&](const Point2& a, const Point2& b, const Point2& c) {
            for (const RulePoint& rp : rule7()) {
                Point2 x = a * rp.b0 + b * rp.b1 + c * rp.b2;
                f(x, vals.data());
                for (int t = 0; t < k; ++t) {
                    if (!std::isfinite(vals[static_cast<size_t>(t)]))
                        throw NonFiniteValue("integrand not finite at quadrature point");
                    acc[t] += rp.w * cell_area * vals[static_cast<size_t>(t)];
                }
            }
        };
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m - i; ++j) {
                add_tri(corner(i, j), corner(i + 1, j), corner(i, j + 1));
                if (i + j < m - 1) add_tri(corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1));
            }
    }
}

struct MultiResult {
    std::vector<double> values;
    bool converged = false;
    int refinement = 0;
};

template <typename F>
MultiResult integrate_many(const QuadratureScheme& q, int k, F&& f) {
    constexpr int kCap = 8;
    std::vector<double> prev(static_cast<size_t>(k)), cur(static_cast<size_t>(k));
    int r = std::min(q.refinement, kCap);
    accumulate(q, r, k, prev.data(), f);
    MultiResult out;
    while (r < kCap) {
        ++r;
        accumulate(q, r, k, cur.data(), f);
        bool ok = true;
        for (int t = 0; t < k; ++t) {
            double tol = std::max(1e-10, 1e-8 * std::abs(cur[static_cast<size_t>(t)]));
            if (std::abs(cur[static_cast<size_t>(t)] - prev[static_cast<size_t>(t)]) >= tol) ok = false;
        }
        prev.swap(cur);
        if (ok) {
            out.converged = true;
            break;
        }
    }
    out.values = std::move(prev);
    out.refinement = r;
    return out;
}

}  // namespace

ScalarField polynomial_field(double c00, double c10, double c01, double c20, double c11, double c02) {
    ScalarField f;
    f.value = [=](const Point2& p) { return c00 + c10 * p.x + c01 * p.y + c20 * p.x * p.x + c11 * p.x * p.y + c02 * p.y * p.y; };
    f.gradient = [=](const Point2& p) {
        return Vec2{c10 + 2.0 * c20 * p.x + c11 * p.y, c01 + c11 * p.x + 2.0 * c02 * p.y};
    };
    f.hessian = [=](const Point2&) { return std::array<double, 3>{2.0 * c20, c11, 2.0 * c02}; };
    return f;
}

QuadratureScheme QuadratureScheme::for_polygon(const Polygon& p, int refinement) {
    return {fan_triangulation(p, chebyshev_circle(p).center), refinement};
}

QuadratureScheme QuadratureScheme::from_cells(std::vector<Triangle> cells, int refinement) {
    return {std::move(cells), refinement};
}

IntegrationResult integrate(const QuadratureScheme& q, const std::function<double(const Point2&)>& f) {
    MultiResult r = integrate_many(q, 1, [&](const Point2& x, double* out) { out[0] = f(x); });
    return {r.values[0], r.converged, r.refinement};
}

ScalarField interpolate(const CoordinateField& family, const ScalarField& u, const Polygon& p) {
    std::vector<double> vertex_values(static_cast<size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) vertex_values[static_cast<size_t>(i)] = u.value(p[i]);

    const CoordinateField* fam = &family;
    ScalarField out;
    out.value = [fam, vertex_values](const Point2& x) {
        CoordSample s = fam->eval(x);
        double acc = 0.0;
        for (size_t i = 0; i < vertex_values.size(); ++i) acc += vertex_values[i] * s.values[i];
        return acc;
    };
    out.gradient = [fam, vertex_values](const Point2& x) {
        CoordSample s = fam->eval(x);
        Vec2 acc{};
        for (size_t i = 0; i < vertex_values.size(); ++i) acc += s.gradients[i] * vertex_values[i];
        return acc;
    };
    out.value_and_gradient = [fam, vertex_values](const Point2& x, double& v, Vec2& g) {
        CoordSample s = fam->eval(x);
        v = 0.0;
        g = Vec2{};
        for (size_t i = 0; i < vertex_values.size(); ++i) {
            v += vertex_values[i] * s.values[i];
            g += s.gradients[i] * vertex_values[i];
        }
    };
    return out;
}

StudyRecord sobolev_errors(const ScalarField& u, const ScalarField& Iu, const Polygon&,
                           const QuadratureScheme& q) {
    const bool with_h2 = static_cast<bool>(u.hessian);
    const int k = with_h2 ? 3 : 2;
    MultiResult r = integrate_many(q, k, [&](const Point2& x, double* out) {
        double uv, iv;
        Vec2 ug, ig;
        u.both(x, uv, ug);
        Iu.both(x, iv, ig);
        const double dv = uv - iv;
        out[0] = dv * dv;
        out[1] = (ug - ig).norm2();
        if (with_h2) {
            auto h = u.hessian(x);
            out[2] = h[0] * h[0] + 2.0 * h[1] * h[1] + h[2] * h[2];
        }
    });
    StudyRecord rec;
    rec.l2_error = std::sqrt(std::max(0.0, r.values[0]));
    rec.h1_semi_error = std::sqrt(std::max(0.0, r.values[1]));
    rec.h1_error = std::sqrt(std::max(0.0, r.values[0] + r.values[1]));
    rec.h2_seminorm_u = with_h2 ? std::sqrt(std::max(0.0, r.values[2])) : std::numeric_limits<double>::quiet_NaN();
    rec.quadrature_converged = r.converged;
    return rec;
}

std::unique_ptr<CoordinateField> make_field(Family kind, const Polygon& p, int harmonic_level) {
    switch (kind) {
        case Family::Triangulation:
            return std::make_unique<TriangulationCoords>(p, Triangulation::fan(p, 0));
        case Family::Wachspress:
            return std::make_unique<WachspressCoords>(p);
        case Family::Sibson:
            return std::make_unique<SibsonCoords>(p);
        case Family::Harmonic:
            return std::make_unique<HarmonicCoords>(p, harmonic_level);
    }
    throw Error("unknown family");
}

namespace {

std::optional<double> loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

QuadratureScheme study_quadrature(Family kind, const Polygon& p, const CoordinateField& field) {
    switch (kind) {
        case Family::Triangulation: {
            // cells aligned with the triangulation make the integrand polynomial per cell
            const auto& tc = static_cast<const TriangulationCoords&>(field);
            std::vector<Triangle> cells;
            for (const auto& t : tc.triangulation().triangles())
                cells.push_back({{p[t[0]], p[t[1]], p[t[2]]}});
            return QuadratureScheme::from_cells(std::move(cells), 1);
        }
        case Family::Wachspress:
            return QuadratureScheme::for_polygon(p, 2);
        case Family::Sibson:
            // the integrand is only C^1 across circumcircle arcs
            return QuadratureScheme::for_polygon(p, 4);
        case Family::Harmonic: {
            // align cells with the solve mesh: the integrand is polynomial per cell
            const auto& hc = static_cast<const HarmonicCoords&>(field);
            return QuadratureScheme::for_polygon(p, hc.basis().mesh.refinement_level);
        }
    }
    throw Error("unknown family");
}

}  // namespace

ConvergenceStudy convergence_study(Family kind, const Polygon& base, const ScalarField& u,
                                   const std::vector<double>& scales, int harmonic_level) {
    const Polygon unit = rescaled_to_unit_diameter(base);
    ConvergenceStudy study;

    for (double h : scales) {
        Polygon ph = unit.scaled(h);
        std::unique_ptr<CoordinateField> field = make_field(kind, ph, harmonic_level);
        QuadratureScheme q = study_quadrature(kind, ph, *field);
        ScalarField iu = interpolate(*field, u, ph);
        StudyRecord rec = sobolev_errors(u, iu, ph, q);
        rec.parameter = h;
        study.records.push_back(rec);
    }

    // fit on errors normalized by |u|_{H^2}; near-zero errors are dropped
    std::vector<double> hs, h1s, l2s;
    for (const StudyRecord& r : study.records) {
        const double norm = std::isfinite(r.h2_seminorm_u) && r.h2_seminorm_u > 0.0 ? r.h2_seminorm_u : 1.0;
        if (r.h1_error <= 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, norm)) continue;
        hs.push_back(r.parameter);
        h1s.push_back(r.h1_error / norm);
        l2s.push_back(r.l2_error / norm);
    }
    study.h1_rate = loglog_slope(hs, h1s);
    study.l2_rate = loglog_slope(hs, l2s);
    study.rate_fit_skipped = !study.h1_rate.has_value();
    if (!study.records.empty() && study.h1_rate) study.records.back().fitted_rate = *study.h1_rate;
    return study;
}

Polygon pentagon_omega_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error("pentagon parameter must lie in (0,1)");
    return validate_polygon({{0.0, 1.0 + eps}, {-1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}});
}

CounterexampleStudy counterexample_study(const std::vector<double>& eps_list) {
    CounterexampleStudy study;
    for (double eps : eps_list) {
        Polygon p = pentagon_omega_eps(eps);
        WachspressCoords field(p);
        QuadratureScheme q = QuadratureScheme::for_polygon(p, 3);
        IntegrationResult e = integrate(q, [&](const Point2& x) {
            const Vec2 g = field.eval(x).gradients[0];
            return g.y * g.y;
        });

        CounterexampleRecord rec;
        rec.eps = eps;
        rec.energy = e.value;
        rec.quadrature_converged = e.converged;

        // pointwise bound 1/(28 eps) on the strip 1/4 <= x <= 3/4, 1 <= y <= ytop(x)
        double min_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 50; ++i) {
            const double x = 0.25 + (i + 0.5) * 0.5 / 50.0;
            const double ytop = 1.0 + eps * (1.0 - x);
            for (int j = 0; j < 50; ++j) {
                const double y = 1.0 + (j + 0.5) / 50.0 * (ytop - 1.0);
                const Vec2 g = field.eval({x, y}).gradients[0];
                min_ratio = std::min(min_ratio, std::abs(g.y) * 28.0 * eps);
            }
        }
        rec.min_pointwise_ratio = min_ratio;
        rec.pointwise_ok = min_ratio > 1.0;
        study.records.push_back(rec);
    }

    std::vector<double> es, energies;
    for (const auto& r : study.records) {
        es.push_back(r.eps);
        energies.push_back(r.energy);
    }
    study.slope = loglog_slope(es, energies);
    return study;
}

Point2 halton_point(unsigned long long index) {
    auto radical_inverse = [](unsigned long long i, unsigned base) {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        return r;
    };
    return {radical_inverse(index, 2), radical_inverse(index, 3)};
}

std::vector<Point2> quasi_random_interior_points(const Polygon& p, int count, int seed) {
    double xmin = p[0].x, xmax = xmin, ymin = p[0].y, ymax = ymin;
    for (const auto& v : p.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    std::vector<Point2> pts;
    pts.reserve(static_cast<size_t>(count));
    unsigned long long index = static_cast<unsigned long long>(seed) * 7919ull + 1ull;
    const double inside_tol = -1e-12 * p.diameter();
    while (static_cast<int>(pts.size()) < count) {
        Point2 h = halton_point(index++);
        Point2 x{xmin + h.x * (xmax - xmin), ymin + h.y * (ymax - ymin)};
        if (p.contains(x, inside_tol)) pts.push_back(x);
    }
    return pts;
}

GradientBoundAudit gradient_bound_audit(Family kind, const Polygon& p, const ConditionThresholds& t,
                                        int samples, int seed) {
    if (kind != Family::Wachspress && kind != Family::Sibson)
        throw Error("gradient bound audit is defined for wachspress and sibson");

    const Polygon unit = rescaled_to_unit_diameter(p);
    const GeometryReport rep = measure(unit);
    const ConditionFlags flags = check_conditions(rep, t);
    const bool met = kind == Family::Wachspress ? (flags.g1 && flags.g2 && flags.g3) : (flags.g1 && flags.g2);
    if (!met) throw ConditionsNotMet("polygon does not satisfy the family's geometric conditions");

    const DerivedBoundConstants bounds = derived_bound_constants(t);
    GradientBoundAudit audit;
    audit.theoretical_bound = kind == Family::Wachspress ? bounds.wach_grad_bound : bounds.sibs_grad_bound;
    audit.D_star = bounds.D_star;
    audit.perimeter = rep.perimeter;
    audit.min_D = std::numeric_limits<double>::quiet_NaN();
    audit.max_facet_sum = std::numeric_limits<double>::quiet_NaN();

    const std::vector<Point2> pts = quasi_random_interior_points(unit, samples, seed);
    double sup = 0.0;
    if (kind == Family::Wachspress) {
        WachspressCoords field(unit);
        for (const Point2& x : pts) {
            CoordSample s = field.eval(x);
            for (const Vec2& g : s.gradients) sup = std::max(sup, g.norm());
        }
    } else {
        SibsonCoords field(unit);
        double min_d = std::numeric_limits<double>::infinity();
        double max_f = 0.0;
        for (const Point2& x : pts) {
            SibsonBreakdown b;
            CoordSample s = field.eval_with_breakdown(x, &b);
            for (const Vec2& g : s.gradients) sup = std::max(sup, g.norm());
            min_d = std::min(min_d, b.D);
            double fsum = 0.0;
            for (double fj : b.F) fsum += fj;
            max_f = std::max(max_f, fsum);
        }
        audit.min_D = min_d;
        audit.max_facet_sum = max_f;
    }
    audit.sampled_sup_grad = sup;
    audit.pass = sup <= audit.theoretical_bound;
    return audit;
}

std::vector<StudyRecord> thin_triangle_study(const std::vector<double>& max_angles) {
    const ScalarField u = polynomial_field(0.0, 0.0, 0.0, 1.0, 0.0, 0.0);  // x^2
    std::vector<StudyRecord> records;
    for (double beta : max_angles) {
        if (!(beta >= std::numbers::pi / 3.0 - 1e-12 && beta < std::numbers::pi))
            throw Error("apex angle must lie in [pi/3, pi)");
        const double h = std::cos(beta / 2.0) / std::sin(beta / 2.0);
        Polygon tri = validate_polygon({{-1.0, 0.0}, {1.0, 0.0}, {0.0, h}});
        TriangulationCoords field(tri, Triangulation::fan(tri, 0));
        std::vector<Triangle> cells{{{tri[0], tri[1], tri[2]}}};
        QuadratureScheme q = QuadratureScheme::from_cells(std::move(cells), 1);
        ScalarField iu = interpolate(field, u, tri);
        StudyRecord rec = sobolev_errors(u, iu, tri, q);
        rec.parameter = beta;
        records.push_back(rec);
    }
    return records;
}

}  // namespace polybary
