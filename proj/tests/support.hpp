#pragma once

// Shared test fixtures and independent oracles. Everything here is
// deliberately implementation-independent of the library paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "polybary/geometry.hpp"

namespace testsupport {

using polybary::Point2;
using polybary::Polygon;
using polybary::Vec2;

// implementation-pinned uniform in [0,1) so fixed seeds reproduce everywhere
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Random strictly convex polygon: jittered angles on a rotated ellipse
/// (points on an ellipse in parameter order are always in convex position).
inline Polygon random_convex_polygon(int n, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> angles(static_cast<size_t>(n));
        for (auto& a : angles) a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        std::sort(angles.begin(), angles.end());
        double min_gap = 2.0 * std::numbers::pi;
        for (int i = 0; i < n; ++i) {
            double next = i + 1 < n ? angles[static_cast<size_t>(i + 1)] : angles[0] + 2.0 * std::numbers::pi;
            min_gap = std::min(min_gap, next - angles[static_cast<size_t>(i)]);
        }
        if (min_gap < 0.15 * 2.0 * std::numbers::pi / n) continue;

        const double sx = uniform(rng, 0.6, 1.4);
        const double sy = uniform(rng, 0.6, 1.4);
        const double rot = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        const double cr = std::cos(rot), sr = std::sin(rot);
        std::vector<Point2> pts;
        for (double a : angles) {
            double ex = sx * std::cos(a), ey = sy * std::sin(a);
            pts.push_back({cr * ex - sr * ey, sr * ex + cr * ey});
        }
        try {
            return polybary::validate_polygon(pts);
        } catch (const polybary::Error&) {
            continue;
        }
    }
    throw std::runtime_error("random polygon generation failed");
}

inline Polygon regular_polygon(int n, double radius = 1.0) {
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * std::numbers::pi * i / n;
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return polybary::validate_polygon(pts);
}

/// Hexagon with one interior angle of ~175 degrees (G3 fails; G1, G2 hold).
inline Polygon obtuse_hexagon() {
    const double beta = 175.0 * std::numbers::pi / 180.0;
    const double bump = std::cos(beta / 2.0) / std::sin(beta / 2.0);  // apex lift over (+-1, 1)
    return polybary::validate_polygon(
        {{0.0, 1.0 + bump}, {-1.0, 1.0}, {-1.5, -0.2}, {0.0, -1.0}, {1.5, -0.2}, {1.0, 1.0}});
}

inline std::vector<Point2> random_interior_points(const Polygon& p, int count, std::mt19937_64& rng,
                                                  double boundary_margin = 0.0) {
    double xmin = p[0].x, xmax = xmin, ymin = p[0].y, ymax = ymin;
    for (const auto& v : p.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    std::vector<Point2> out;
    while (static_cast<int>(out.size()) < count) {
        Point2 x{uniform(rng, xmin, xmax), uniform(rng, ymin, ymax)};
        if (p.contains(x, -boundary_margin)) out.push_back(x);
    }
    return out;
}

// ---- oracles ----

/// Exact integral of x^p y^q over a CCW polygon via Green's theorem and
/// 8-point Gauss-Legendre per edge (exact for p + q + 1 <= 15).
inline double monomial_integral(const std::vector<Point2>& poly, int p, int q) {
    static const double gl_x[8] = {-0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
                                   -0.18343464249564980, 0.18343464249564980,  0.52553240991632899,
                                   0.79666647741362674,  0.96028985649753623};
    static const double gl_w[8] = {0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
                                   0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
                                   0.22238103445337447, 0.10122853629037626};
    double total = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        const double dy = b.y - a.y;
        double edge = 0.0;
        for (int g = 0; g < 8; ++g) {
            const double t = 0.5 * (gl_x[g] + 1.0);
            const double x = a.x + t * (b.x - a.x);
            const double y = a.y + t * (b.y - a.y);
            edge += 0.5 * gl_w[g] * std::pow(x, p + 1) / (p + 1) * std::pow(y, q);
        }
        total += edge * dy;
    }
    return total;
}

inline double monomial_integral(const Polygon& poly, int p, int q) {
    return monomial_integral(poly.vertices(), p, q);
}

/// Central finite-difference gradient.
inline Vec2 fd_gradient(const std::function<double(const Point2&)>& f, const Point2& x, double h) {
    return {(f({x.x + h, x.y}) - f({x.x - h, x.y})) / (2.0 * h),
            (f({x.x, x.y + h}) - f({x.x, x.y - h})) / (2.0 * h)};
}

inline double point_segment_distance(const Point2& x, const Point2& a, const Point2& b) {
    const Vec2 e = b - a;
    const double t = std::clamp((x - a).dot(e) / e.norm2(), 0.0, 1.0);
    return (x - (a + e * t)).norm();
}

inline double distance_to_boundary(const Polygon& p, const Point2& x) {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.size(); ++i) d = std::min(d, point_segment_distance(x, p[i], p.wrapped(i + 1)));
    return d;
}

struct CircleOracle {
    Point2 center;
    double radius;
};

/// Circumcircles of all Delaunay triples of the polygon vertices (brute
/// force; cocircular triples are kept). Sibson coordinates are only C^1
/// across these circles.
inline std::vector<CircleOracle> delaunay_circumcircles(const Polygon& p) {
    std::vector<CircleOracle> out;
    const int n = p.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec2 ab = p[j] - p[i], ac = p[k] - p[i];
                double d = 2.0 * ab.cross(ac);
                if (std::abs(d) < 1e-12) continue;
                double ab2 = ab.norm2(), ac2 = ac.norm2();
                Point2 c = p[i] + Vec2(ac.y * ab2 - ab.y * ac2, ab.x * ac2 - ac.x * ab2) / d;
                double r = (p[i] - c).norm();
                bool empty = true;
                for (int m = 0; m < n && empty; ++m) {
                    if (m == i || m == j || m == k) continue;
                    if ((p[m] - c).norm() < r - 1e-12) empty = false;
                }
                if (empty) out.push_back({c, r});
            }
    return out;
}

inline double distance_to_circles(const std::vector<CircleOracle>& circles, const Point2& x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : circles) d = std::min(d, std::abs((x - c.center).norm() - c.radius));
    return d;
}

/// Monte Carlo membership area of {x in domain bbox : predicate(x)}.
/// Returns (estimate, standard error).
inline std::pair<double, double> monte_carlo_area(const Polygon& domain,
                                                  const std::function<bool(const Point2&)>& predicate,
                                                  int samples, std::mt19937_64& rng) {
    double xmin = domain[0].x, xmax = xmin, ymin = domain[0].y, ymax = ymin;
    for (const auto& v : domain.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    const double box = (xmax - xmin) * (ymax - ymin);
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        Point2 x{uniform(rng, xmin, xmax), uniform(rng, ymin, ymax)};
        if (predicate(x)) ++hits;
    }
    const double prob = static_cast<double>(hits) / samples;
    return {box * prob, box * std::sqrt(prob * (1.0 - prob) / samples)};
}

}  // namespace testsupport
