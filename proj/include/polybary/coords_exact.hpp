#pragma once

#include <array>
#include <utility>

#include "polybary/coords.hpp"

namespace polybary {

struct BaryTriple {
    std::array<double, 3> values;
    std::array<Vec2, 3> gradients;
};

/// Affine barycentric coordinates of x with respect to triangle (a, b, c).
/// Throws DegenerateTriangle when the triangle area vanishes.
BaryTriple triangle_barycentric(const Point2& a, const Point2& b, const Point2& c, const Point2& x);

/// A triangulation of a polygon by vertex-index triples. Triples must be
/// positively oriented and partition the polygon.
class Triangulation {
  public:
    static Triangulation over(const Polygon& p, std::vector<std::array<int, 3>> triangles);
    /// Fan from vertex `apex_index` (n-2 triangles).
    static Triangulation fan(const Polygon& p, int apex_index);

    const std::vector<std::array<int, 3>>& triangles() const { return tris_; }

  private:
    explicit Triangulation(std::vector<std::array<int, 3>> tris) : tris_(std::move(tris)) {}
    std::vector<std::array<int, 3>> tris_;
};

/// (T_m, T_M) for vertex i: T_m is the fan from v_{i+1} (contains the edge
/// v_{i-1} v_{i+1}); T_M is the fan from v_i.
std::pair<Triangulation, Triangulation> extremal_triangulations(const Polygon& p, int i);

/// Piecewise-linear hat coordinates over t. On internal edges the gradient of
/// the containing triangle with the smallest lexicographic index triple is used.
CoordSample triangulation_coords(const Polygon& p, const Triangulation& t, const Point2& x);

class TriangulationCoords : public CoordinateField {
  public:
    TriangulationCoords(Polygon p, Triangulation t) : poly_(std::move(p)), tri_(std::move(t)) {}

    CoordSample eval(const Point2& x) const override { return triangulation_coords(poly_, tri_, x); }
    int size() const override { return poly_.size(); }
    const Polygon& polygon() const override { return poly_; }
    const Triangulation& triangulation() const { return tri_; }

  private:
    Polygon poly_;
    Triangulation tri_;
};

struct WachspressInternals {
    std::vector<double> A;       // A_j(x), signed area of (x, v_j, v_{j+1})
    std::vector<double> B;       // B_i, area of (v_{i-1}, v_i, v_{i+1})
    std::vector<double> w;       // w_i = B_i * prod_{j != i, i-1} A_j
    std::vector<Vec2> grad_A;    // grad A_j (constant; |grad A_j| = |v_j - v_{j+1}|/2)
};

class WachspressCoords : public CoordinateField {
  public:
    explicit WachspressCoords(Polygon p);

    CoordSample eval(const Point2& x) const override;
    WachspressInternals internals(const Point2& x) const;
    int size() const override { return poly_.size(); }
    const Polygon& polygon() const override { return poly_; }

  private:
    Polygon poly_;
    std::vector<double> B_;          // triangle areas B_i
    std::vector<Vec2> grad_A_;       // grad A_j, constant per edge
};

CoordSample wachspress(const Polygon& p, const Point2& x);
WachspressInternals wachspress_internals(const Polygon& p, const Point2& x);

}  // namespace polybary
