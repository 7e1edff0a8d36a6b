#pragma once

#include "polybary/coords.hpp"

namespace polybary {

/// Convex CCW cell; may be empty (no vertices, area 0).
struct ConvexCell {
    std::vector<Point2> vertices;

    bool empty() const { return vertices.size() < 3; }
    double area() const { return empty() ? 0.0 : polygon_signed_area(vertices); }
};

/// Intersection of cell with {y : |y - a| <= |y - b|} (points nearer a).
ConvexCell clip_halfplane(const ConvexCell& cell, const Point2& a, const Point2& b);

/// Voronoi cell of points[k] restricted to the domain polygon.
ConvexCell voronoi_cell(const std::vector<Point2>& points, int k, const Polygon& domain);

struct SibsonBreakdown {
    std::vector<double> C;         // C_i = |V_P(v_i) ^ Omega|
    double D = 0.0;                // D(x) = |V_{P'}(x)| (natural-neighbor cell)
    std::vector<double> overlaps;  // |V_{P'}(x) ^ V_P(v_i)| (0 when not a neighbor)
    // facet lengths of the cell restricted to the polygon (sum_j F_j <= |dOmega|,
    // each F_j <= diam); the gradient path uses the full cell internally
    std::vector<double> F;
    std::vector<Point2> facet_centroids;  // length-weighted centroid of each facet
};

/// Natural-neighbor coordinates. The coordinate ratio uses the full Voronoi
/// diagram of the vertices plus the query point (linear precision needs the
/// unclipped overlap areas); the diagram restricted to the polygon only enters
/// the reported facet bookkeeping.
class SibsonCoords : public CoordinateField {
  public:
    explicit SibsonCoords(Polygon p);

    /// At a vertex the values are the Kronecker-delta limit; within
    /// 1e-9 * diam of the boundary the linear edge limit is returned.
    /// Gradients are NaN in both cases (lambda is only C^0 there).
    CoordSample eval(const Point2& x) const override;
    SibsonBreakdown breakdown(const Point2& x) const;
    CoordSample eval_with_breakdown(const Point2& x, SibsonBreakdown* out) const;

    int size() const override { return poly_.size(); }
    const Polygon& polygon() const override { return poly_; }
    const std::vector<ConvexCell>& vertex_cells() const { return cells_; }

  private:
    Polygon poly_;
    std::vector<ConvexCell> cells_;  // C_i restricted to the polygon
    std::vector<double> cell_areas_;
};

CoordSample sibson(const Polygon& p, const Point2& x);

/// Gradients from the facet formulas; requires x strictly interior and away
/// from vertices (throws AtVertex / PointOutside).
std::vector<Vec2> sibson_gradients(const SibsonBreakdown& b, const Polygon& p, const Point2& x);

}  // namespace polybary
