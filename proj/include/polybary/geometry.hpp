#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "polybary/errors.hpp"

namespace polybary {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    // counter-clockwise 90-degree rotation
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

using Point2 = Vec2;

inline double dist(const Point2& a, const Point2& b) { return (a - b).norm(); }

/// Signed area of triangle (a, b, c); positive when the turn a->b->c is CCW.
inline double signed_triangle_area(const Point2& a, const Point2& b, const Point2& c) {
    return 0.5 * (b - a).cross(c - a);
}

double polygon_signed_area(const std::vector<Point2>& pts);

/// Strictly convex CCW polygon. Construct through validate_polygon().
class Polygon {
  public:
    int size() const { return static_cast<int>(verts_.size()); }
    const std::vector<Point2>& vertices() const { return verts_; }
    const Point2& operator[](int i) const { return verts_[static_cast<size_t>(i)]; }
    // index wrapped modulo n (v_{-1} = v_{n-1}, v_n = v_0)
    const Point2& wrapped(int i) const {
        int n = size();
        return verts_[static_cast<size_t>(((i % n) + n) % n)];
    }

    double diameter() const { return diameter_; }
    double area() const { return area_; }
    double perimeter() const;

    /// True when x lies in the closed polygon, within tol (length units) of the boundary.
    bool contains(const Point2& x, double tol) const;
    bool contains(const Point2& x) const { return contains(x, 1e-12 * diameter_); }

    Polygon scaled(double s) const;
    Polygon translated(const Vec2& d) const;
    Polygon rotated(double angle) const;

    friend Polygon validate_polygon(const std::vector<Point2>& raw_vertices);

  private:
    explicit Polygon(std::vector<Point2> verts);

    std::vector<Point2> verts_;
    double diameter_ = 0.0;
    double area_ = 0.0;
};

/// Validates vertices into a strictly convex CCW polygon.
/// Clockwise input is reversed; throws TooFewVertices / TooManyVertices /
/// DegenerateEdge / NonConvex otherwise.
Polygon validate_polygon(const std::vector<Point2>& raw_vertices);

struct GeometryReport {
    double diameter = 0.0;
    double inradius = 0.0;
    Point2 incenter;
    double aspect_ratio = 0.0;
    std::vector<double> interior_angles;
    double min_edge = 0.0;  // minimum pairwise vertex distance
    double max_angle = 0.0;
    double min_angle = 0.0;
    int vertex_count = 0;
    double area = 0.0;
    double perimeter = 0.0;
};

GeometryReport measure(const Polygon& p);

struct Circle {
    Point2 center;
    double radius = 0.0;
};

/// Largest inscribed circle (Chebyshev center). Candidates are enumerated from
/// triples of edge lines; ties on the radius break to the lexicographically
/// smallest center.
Circle chebyshev_circle(const Polygon& p);

/// Smallest circle containing all vertices.
Circle min_enclosing_circle(const Polygon& p);

struct ConditionThresholds {
    double gamma_star = 0.0;     // G1
    double d_star = 0.0;         // G2
    double beta_star_max = 0.0;  // G3 (beta^*)
    double beta_star_min = 0.0;  // G4 (beta_*)
    int n_star = 0;              // G5

    /// Throws InvalidThresholds unless gamma_star >= 2, d_star > 0,
    /// 0 < beta_star_min < beta_star_max < pi, n_star >= 3.
    void check() const;
};

struct ConditionFlags {
    bool g1 = false;  // aspect ratio
    bool g2 = false;  // min edge length
    bool g3 = false;  // max interior angle
    bool g4 = false;  // min interior angle
    bool g5 = false;  // max vertex count

    bool all() const { return g1 && g2 && g3 && g4 && g5; }
};

/// Evaluates G1-G5 against thresholds. The report must come from a polygon
/// rescaled to diameter 1 (the conditions are stated at diameter 1).
ConditionFlags check_conditions(const GeometryReport& r, const ConditionThresholds& t);

struct DerivedBoundConstants {
    double B_star = 0.0;
    double w_star = 0.0;
    double h_star = 0.0;
    double D_star = 0.0;
    double wach_grad_bound = 0.0;
    double sibs_grad_bound = 0.0;
};

DerivedBoundConstants derived_bound_constants(const ConditionThresholds& t);

struct Triangle {
    std::array<Point2, 3> v;

    double area() const { return signed_triangle_area(v[0], v[1], v[2]); }
    Point2 centroid() const { return (v[0] + v[1] + v[2]) / 3.0; }
};

/// n triangles (apex, v_i, v_{i+1}); throws ApexOutside unless apex is
/// strictly interior.
std::vector<Triangle> fan_triangulation(const Polygon& p, const Point2& apex);

/// Copy of p scaled about the origin so that diameter is exactly 1.
Polygon rescaled_to_unit_diameter(const Polygon& p);

/// Intersection of a convex CCW vertex loop with the half-plane {y : n.y <= c}.
/// May return fewer than 3 points (empty cell).
std::vector<Point2> clip_convex(const std::vector<Point2>& pts, const Vec2& n, double c);

}  // namespace polybary
