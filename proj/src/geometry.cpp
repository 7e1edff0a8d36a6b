#include "polybary/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace polybary {

namespace {

double max_pairwise_distance(const std::vector<Point2>& pts) {
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, (pts[i] - pts[j]).norm());
    return best;
}

bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

double polygon_signed_area(const std::vector<Point2>& pts) {
    double acc = 0.0;
    const size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = pts[i];
        const Point2& b = pts[(i + 1) % n];
        acc += a.cross(b);
    }
    return 0.5 * acc;
}

Polygon::Polygon(std::vector<Point2> verts) : verts_(std::move(verts)) {
    diameter_ = max_pairwise_distance(verts_);
    area_ = polygon_signed_area(verts_);
}

double Polygon::perimeter() const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += (wrapped(i + 1) - verts_[static_cast<size_t>(i)]).norm();
    return acc;
}

bool Polygon::contains(const Point2& x, double tol) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const Point2& a = verts_[static_cast<size_t>(i)];
        Vec2 e = wrapped(i + 1) - a;
        // signed distance of x from edge line, positive inside (CCW)
        double sd = e.cross(x - a) / e.norm();
        if (sd < -tol) return false;
    }
    return true;
}

Polygon Polygon::scaled(double s) const {
    std::vector<Point2> v = verts_;
    for (auto& p : v) p = p * s;
    if (s < 0.0) std::reverse(v.begin(), v.end());
    return Polygon(std::move(v));
}

Polygon Polygon::translated(const Vec2& d) const {
    std::vector<Point2> v = verts_;
    for (auto& p : v) p += d;
    return Polygon(std::move(v));
}

Polygon Polygon::rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<Point2> v = verts_;
    for (auto& p : v) p = {c * p.x - s * p.y, s * p.x + c * p.y};
    return Polygon(std::move(v));
}

Polygon validate_polygon(const std::vector<Point2>& raw_vertices) {
    if (raw_vertices.size() < 3) throw TooFewVertices("polygon needs at least 3 vertices");
    if (raw_vertices.size() > 64) throw TooManyVertices("polygon vertex count capped at 64");
    for (const auto& p : raw_vertices)
        if (!finite(p)) throw DegenerateEdge("non-finite vertex coordinate");

    std::vector<Point2> v = raw_vertices;
    const double scale = max_pairwise_distance(v);
    if (!(scale > 0.0)) throw DegenerateEdge("all vertices coincide");

    if (polygon_signed_area(v) < 0.0) std::reverse(v.begin(), v.end());

    const int n = static_cast<int>(v.size());
    const double edge_tol = 1e-12 * scale;
    const double cross_tol = 1e-12 * scale * scale;

    double turn_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Point2& prev = v[static_cast<size_t>(((i - 1) % n + n) % n)];
        const Point2& cur = v[static_cast<size_t>(i)];
        const Point2& next = v[static_cast<size_t>((i + 1) % n)];
        Vec2 e0 = cur - prev;
        Vec2 e1 = next - cur;
        if (e1.norm() <= edge_tol) throw DegenerateEdge("repeated vertices");
        double cr = e0.cross(e1);
        if (cr <= cross_tol) {
            if (cr >= -cross_tol) throw DegenerateEdge("collinear consecutive vertices");
            throw NonConvex("reflex vertex");
        }
        turn_sum += std::atan2(cr, e0.dot(e1));
    }
    // a simple convex CCW loop turns by exactly 2*pi; anything else winds
    if (std::abs(turn_sum - 2.0 * std::numbers::pi) > 1e-6) throw NonConvex("polygon winds more than once");

    return Polygon(std::move(v));
}

Circle chebyshev_circle(const Polygon& p) {
    const int n = p.size();
    // edge line i as (unit inward normal, offset): dist(c, line_i) = n_i . c - b_i
    std::vector<Vec2> nrm(static_cast<size_t>(n));
    std::vector<double> off(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec2 e = p.wrapped(i + 1) - p[i];
        Vec2 in = e.perp() / e.norm();
        nrm[static_cast<size_t>(i)] = in;
        off[static_cast<size_t>(i)] = in.dot(p[i]);
    }

    const double tie_tol = 1e-12 * p.diameter();
    const double feas_tol = 1e-9 * p.diameter();
    bool found = false;
    Point2 best_c;
    double best_r = -1.0;

    auto consider = [&](const Point2& c, double r) {
        if (!(r > 0.0) || !finite(c) || !std::isfinite(r)) return;
        for (int e = 0; e < n; ++e)
            if (nrm[static_cast<size_t>(e)].dot(c) - off[static_cast<size_t>(e)] < r - feas_tol) return;
        if (!found || r > best_r + tie_tol) {
            found = true;
            best_c = c;
            best_r = r;
        } else if (r > best_r - tie_tol) {
            // same radius: keep the lexicographically smallest center
            if (c.x < best_c.x - tie_tol || (std::abs(c.x - best_c.x) <= tie_tol && c.y < best_c.y - tie_tol)) {
                best_c = c;
                best_r = std::max(best_r, r);
            }
        }
    };

    // candidate centers equidistant (distance r) from three edge lines:
    // n_i.c - r = b_i solved as a 3x3 system in (cx, cy, r)
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const Vec2 &a = nrm[static_cast<size_t>(i)], &b = nrm[static_cast<size_t>(j)],
                           &c = nrm[static_cast<size_t>(k)];
                double m[3][4] = {{a.x, a.y, -1.0, off[static_cast<size_t>(i)]},
                                  {b.x, b.y, -1.0, off[static_cast<size_t>(j)]},
                                  {c.x, c.y, -1.0, off[static_cast<size_t>(k)]}};
                double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
                if (std::abs(det) < 1e-12) continue;
                auto solve_col = [&](int col) {
                    double t[3][3];
                    for (int r_ = 0; r_ < 3; ++r_)
                        for (int c_ = 0; c_ < 3; ++c_) t[r_][c_] = (c_ == col) ? m[r_][3] : m[r_][c_];
                    return t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
                           t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
                           t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
                };
                double cx = solve_col(0) / det;
                double cy = solve_col(1) / det;
                double r = solve_col(2) / det;
                consider({cx, cy}, r);
            }

    if (!found) throw NonConvex("no feasible inscribed circle");
    return {best_c, best_r};
}

Circle min_enclosing_circle(const Polygon& p) {
    const int n = p.size();
    const double tol = 1e-12 * p.diameter();
    bool found = false;
    Circle best;

    auto covers = [&](const Circle& c) {
        for (int i = 0; i < n; ++i)
            if ((p[i] - c.center).norm() > c.radius + tol) return false;
        return true;
    };
    auto consider = [&](const Circle& c) {
        if (!std::isfinite(c.radius) || !finite(c.center)) return;
        if (!covers(c)) return;
        if (!found || c.radius < best.radius) {
            found = true;
            best = c;
        }
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Point2 m = (p[i] + p[j]) * 0.5;
            consider({m, (p[i] - m).norm()});
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                // circumcenter of (v_i, v_j, v_k)
                Vec2 ab = p[j] - p[i], ac = p[k] - p[i];
                double d = 2.0 * ab.cross(ac);
                if (std::abs(d) < 1e-14 * p.diameter() * p.diameter()) continue;
                double ab2 = ab.norm2(), ac2 = ac.norm2();
                Point2 c = p[i] + Vec2(ac.y * ab2 - ab.y * ac2, ab.x * ac2 - ac.x * ab2) / d;
                consider({c, (p[i] - c).norm()});
            }

    return best;
}

GeometryReport measure(const Polygon& p) {
    GeometryReport r;
    const int n = p.size();
    r.vertex_count = n;
    r.diameter = p.diameter();
    r.area = p.area();
    r.perimeter = p.perimeter();

    Circle in = chebyshev_circle(p);
    r.inradius = in.radius;
    r.incenter = in.center;
    r.aspect_ratio = r.diameter / r.inradius;

    r.interior_angles.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec2 to_prev = p.wrapped(i - 1) - p[i];
        Vec2 to_next = p.wrapped(i + 1) - p[i];
        r.interior_angles[static_cast<size_t>(i)] = std::atan2(to_next.cross(to_prev), to_next.dot(to_prev));
    }
    r.max_angle = *std::max_element(r.interior_angles.begin(), r.interior_angles.end());
    r.min_angle = *std::min_element(r.interior_angles.begin(), r.interior_angles.end());

    double min_pair = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) min_pair = std::min(min_pair, (p[i] - p[j]).norm());
    r.min_edge = min_pair;

    return r;
}

void ConditionThresholds::check() const {
    if (!(gamma_star >= 2.0)) throw InvalidThresholds("gamma_star must be >= 2");
    if (!(d_star > 0.0)) throw InvalidThresholds("d_star must be positive");
    if (!(beta_star_min > 0.0 && beta_star_min < beta_star_max && beta_star_max < std::numbers::pi))
        throw InvalidThresholds("need 0 < beta_star_min < beta_star_max < pi");
    if (n_star < 3) throw InvalidThresholds("n_star must be >= 3");
}

ConditionFlags check_conditions(const GeometryReport& r, const ConditionThresholds& t) {
    t.check();
    ConditionFlags f;
    f.g1 = r.aspect_ratio < t.gamma_star;
    f.g2 = r.min_edge > t.d_star;
    f.g3 = r.max_angle < t.beta_star_max;
    f.g4 = r.min_angle > t.beta_star_min;
    f.g5 = r.vertex_count < t.n_star;
    return f;
}

DerivedBoundConstants derived_bound_constants(const ConditionThresholds& t) {
    t.check();
    DerivedBoundConstants c;
    const double d2 = t.d_star * t.d_star;
    c.B_star = d2 * std::sin(t.beta_star_min / 2.0) * std::cos(t.beta_star_max / 2.0);
    c.w_star = c.B_star * std::pow(d2 * std::sin(std::numbers::pi - t.beta_star_max) / 4.0, t.n_star - 2);
    c.h_star = t.d_star / (2.0 * t.gamma_star * (1.0 + t.d_star));
    const double h2 = c.h_star * c.h_star;
    c.D_star = std::min({t.beta_star_min * h2 / 8.0, std::numbers::pi * h2 / 32.0, t.beta_star_min * h2 / 32.0});
    if (!(c.w_star > 0.0) || !(c.D_star > 0.0)) throw InvalidThresholds("derived constants degenerate");
    c.wach_grad_bound = std::numbers::pi * std::numbers::pi / (2.0 * c.w_star);
    c.sibs_grad_bound = (1.0 + std::numbers::pi) / c.D_star;
    return c;
}

std::vector<Triangle> fan_triangulation(const Polygon& p, const Point2& apex) {
    if (!p.contains(apex, -1e-12 * p.diameter())) throw ApexOutside("fan apex must be strictly inside");
    std::vector<Triangle> tris;
    tris.reserve(static_cast<size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) tris.push_back({{apex, p[i], p.wrapped(i + 1)}});
    return tris;
}

Polygon rescaled_to_unit_diameter(const Polygon& p) { return p.scaled(1.0 / p.diameter()); }

std::vector<Point2> clip_convex(const std::vector<Point2>& pts, const Vec2& n, double c) {
    std::vector<Point2> out;
    const size_t m = pts.size();
    if (m == 0) return out;
    out.reserve(m + 1);
    for (size_t i = 0; i < m; ++i) {
        const Point2& a = pts[i];
        const Point2& b = pts[(i + 1) % m];
        const double fa = n.dot(a) - c;
        const double fb = n.dot(b) - c;
        if (fa <= 0.0) {
            out.push_back(a);
            if (fb > 0.0) out.push_back(a + (b - a) * (fa / (fa - fb)));
        } else if (fb <= 0.0) {
            out.push_back(a + (b - a) * (fa / (fa - fb)));
        }
    }
    if (out.size() < 3) out.clear();
    return out;
}

}  // namespace polybary
