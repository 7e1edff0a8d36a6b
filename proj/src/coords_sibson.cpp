#include "polybary/coords_sibson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polybary {

namespace {

// clip src by {y : n.y <= c} into dst (convex loop in, convex loop out)
void clip_to(std::vector<Point2>& dst, const std::vector<Point2>& src, const Vec2& n, double c) {
    dst.clear();
    const size_t m = src.size();
    if (m == 0) return;
    for (size_t i = 0; i < m; ++i) {
        const Point2& a = src[i];
        const Point2& b = src[(i + 1) % m];
        const double fa = n.dot(a) - c;
        const double fb = n.dot(b) - c;
        if (fa <= 0.0) {
            dst.push_back(a);
            if (fb > 0.0) dst.push_back(a + (b - a) * (fa / (fa - fb)));
        } else if (fb <= 0.0) {
            dst.push_back(a + (b - a) * (fa / (fa - fb)));
        }
    }
    if (dst.size() < 3) dst.clear();
}

// bisector half-plane of points nearer a than b: (b-a).y <= (b-a).(a+b)/2
void bisector(const Point2& a, const Point2& b, Vec2& n, double& c) {
    n = b - a;
    c = n.dot((a + b) * 0.5);
}

double point_segment_distance(const Point2& x, const Point2& a, const Point2& b) {
    const Vec2 e = b - a;
    const double t = std::clamp((x - a).dot(e) / e.norm2(), 0.0, 1.0);
    return (x - (a + e * t)).norm();
}

// facet data of the cell of the origin in the diagram of {0} u sites,
// attributed by midpoint distance to each bisector
struct FacetData {
    std::vector<double> F;
    std::vector<Point2> centroid;  // length-weighted, origin frame
};

FacetData facets_of(const std::vector<Point2>& cell, const std::vector<Vec2>& sites, double diam) {
    const size_t n = sites.size();
    FacetData out;
    out.F.assign(n, 0.0);
    out.centroid.assign(n, Point2{});
    const double tol = 1e-9 * diam;
    const size_t m = cell.size();
    for (size_t e = 0; e < m; ++e) {
        const Point2& a = cell[e];
        const Point2& b = cell[(e + 1) % m];
        const double len = (b - a).norm();
        if (len == 0.0) continue;
        const Point2 mid = (a + b) * 0.5;
        int best = -1;
        double best_d = tol;
        for (size_t j = 0; j < n; ++j) {
            // distance of mid to the bisector of 0 and s_j
            const double d = std::abs(sites[j].dot(mid) - 0.5 * sites[j].norm2()) / sites[j].norm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0) {
            out.F[static_cast<size_t>(best)] += len;
            out.centroid[static_cast<size_t>(best)] += mid * len;
        }
    }
    for (size_t j = 0; j < n; ++j)
        if (out.F[j] > 0.0) out.centroid[j] = out.centroid[j] / out.F[j];
    return out;
}

// cell of x in the natural-neighbor diagram of the polygon vertices plus x,
// computed in the frame centered at x. The diagram is NOT restricted to the
// polygon: that is what gives the coordinates their linear precision. The
// cell is bounded for strictly interior x; the start box adapts to the
// distance from the boundary.
void natural_cell(const Polygon& p, const Point2& x, double delta, std::vector<Point2>& cell,
                  std::vector<Point2>& tmp, std::vector<Vec2>& sites) {
    const int n = p.size();
    const double diam = p.diameter();
    sites.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) sites[static_cast<size_t>(j)] = p[j] - x;

    const double w = std::max(4.0 * diam, 2.0 * diam * diam / std::max(delta, 1e-9 * diam));
    cell.assign({{-w, -w}, {w, -w}, {w, w}, {-w, w}});
    for (int j = 0; j < n; ++j) {
        const Vec2& s = sites[static_cast<size_t>(j)];
        clip_to(tmp, cell, s, 0.5 * s.norm2());
        cell.swap(tmp);
        if (cell.size() < 3) break;
    }
}

}  // namespace

ConvexCell clip_halfplane(const ConvexCell& cell, const Point2& a, const Point2& b) {
    if ((b - a).norm2() == 0.0) throw DuplicatePoints("bisector of coincident points");
    Vec2 n;
    double c;
    bisector(a, b, n, c);
    ConvexCell out;
    clip_to(out.vertices, cell.vertices, n, c);
    return out;
}

ConvexCell voronoi_cell(const std::vector<Point2>& points, int k, const Polygon& domain) {
    const int m = static_cast<int>(points.size());
    const double tol2 = 1e-28 * domain.diameter() * domain.diameter();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if ((points[static_cast<size_t>(i)] - points[static_cast<size_t>(j)]).norm2() <= tol2)
                throw DuplicatePoints("voronoi sites must be distinct");

    ConvexCell cell{domain.vertices()};
    for (int j = 0; j < m; ++j) {
        if (j == k) continue;
        cell = clip_halfplane(cell, points[static_cast<size_t>(k)], points[static_cast<size_t>(j)]);
        if (cell.empty()) break;
    }
    return cell;
}

SibsonCoords::SibsonCoords(Polygon p) : poly_(std::move(p)) {
    const int n = poly_.size();
    cells_.reserve(static_cast<size_t>(n));
    cell_areas_.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        cells_.push_back(voronoi_cell(poly_.vertices(), i, poly_));
        cell_areas_.push_back(cells_.back().area());
    }
}

SibsonBreakdown SibsonCoords::breakdown(const Point2& x) const {
    SibsonBreakdown b;
    eval_with_breakdown(x, &b);
    return b;
}

CoordSample SibsonCoords::eval(const Point2& x) const { return eval_with_breakdown(x, nullptr); }

CoordSample SibsonCoords::eval_with_breakdown(const Point2& x, SibsonBreakdown* out) const {
    const int n = poly_.size();
    const double diam = poly_.diameter();
    if (!poly_.contains(x, 1e-12 * diam)) throw PointOutside("point outside polygon");

    CoordSample s;
    s.values.assign(static_cast<size_t>(n), 0.0);
    s.gradients.assign(static_cast<size_t>(n), Vec2{});
    const double nan = std::numeric_limits<double>::quiet_NaN();

    // vertex evaluation takes the Kronecker-delta limit; no gradient exists there
    for (int i = 0; i < n; ++i) {
        if ((x - poly_[i]).norm() <= 1e-13 * diam) {
            if (out) throw AtVertex("Sibson breakdown undefined at a vertex");
            s.values[static_cast<size_t>(i)] = 1.0;
            for (auto& g : s.gradients) g = {nan, nan};
            return s;
        }
    }

    // on the boundary the cell is unbounded; take the linear edge limit
    double delta = std::numeric_limits<double>::infinity();
    int near_edge = -1;
    for (int j = 0; j < n; ++j) {
        double d = point_segment_distance(x, poly_[j], poly_.wrapped(j + 1));
        if (d < delta) {
            delta = d;
            near_edge = j;
        }
    }
    if (delta <= 1e-9 * diam) {
        if (out) throw AtVertex("Sibson breakdown undefined on the boundary");
        const Point2& a = poly_[near_edge];
        const Vec2 e = poly_.wrapped(near_edge + 1) - a;
        const double t = std::clamp((x - a).dot(e) / e.norm2(), 0.0, 1.0);
        s.values[static_cast<size_t>(near_edge)] = 1.0 - t;
        s.values[static_cast<size_t>((near_edge + 1) % n)] = t;
        for (auto& g : s.gradients) g = {nan, nan};
        return s;
    }

    static thread_local std::vector<Point2> cell, tmp, ocell;
    static thread_local std::vector<Vec2> sites;

    natural_cell(poly_, x, delta, cell, tmp, sites);
    const double D = cell.size() < 3 ? 0.0 : polygon_signed_area(cell);
    if (!(D > 0.0)) throw PointOutside("empty natural-neighbor cell");

    FacetData facets = facets_of(cell, sites, diam);

    // overlaps |D(x) ^ C_i|: clip the cell toward v_i against the other vertices
    std::vector<double> overlaps(static_cast<size_t>(n), 0.0);
    Vec2 nrm;
    double c;
    for (int i = 0; i < n; ++i) {
        if (facets.F[static_cast<size_t>(i)] == 0.0) continue;  // not a natural neighbor
        ocell.assign(cell.begin(), cell.end());
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            bisector(sites[static_cast<size_t>(i)], sites[static_cast<size_t>(j)], nrm, c);
            clip_to(tmp, ocell, nrm, c);
            ocell.swap(tmp);
            if (ocell.size() < 3) break;
        }
        overlaps[static_cast<size_t>(i)] = ocell.size() < 3 ? 0.0 : polygon_signed_area(ocell);
    }

    // grad(D ^ C_i) = F_i (ybar_i - x)/|v_i - x|; grad D sums the same terms
    std::vector<Vec2> grad_o(static_cast<size_t>(n), Vec2{});
    Vec2 grad_D{};
    for (int j = 0; j < n; ++j) {
        if (facets.F[static_cast<size_t>(j)] == 0.0) continue;
        Vec2 g = facets.centroid[static_cast<size_t>(j)] *
                 (facets.F[static_cast<size_t>(j)] / sites[static_cast<size_t>(j)].norm());
        grad_o[static_cast<size_t>(j)] = g;
        grad_D += g;
    }
    for (int i = 0; i < n; ++i) {
        const double oi = overlaps[static_cast<size_t>(i)];
        s.values[static_cast<size_t>(i)] = oi / D;
        s.gradients[static_cast<size_t>(i)] = (grad_o[static_cast<size_t>(i)] * D - grad_D * oi) / (D * D);
    }

    if (out) {
        out->C = cell_areas_;
        out->D = D;
        out->overlaps = std::move(overlaps);
        // the reported facets come from the cell restricted to the polygon,
        // the object behind the sum-of-facets and facet-length bounds
        ocell.assign(cell.begin(), cell.end());
        for (int j = 0; j < n && ocell.size() >= 3; ++j) {
            const Point2 a = poly_[j] - x;
            const Vec2 edge = poly_.wrapped(j + 1) - poly_[j];
            const Vec2 inward = edge.perp();
            clip_to(tmp, ocell, inward * -1.0, -inward.dot(a));
            ocell.swap(tmp);
        }
        FacetData restricted = facets_of(ocell, sites, diam);
        out->F = std::move(restricted.F);
        out->facet_centroids.assign(static_cast<size_t>(n), Point2{});
        for (int j = 0; j < n; ++j)
            if (out->F[static_cast<size_t>(j)] > 0.0)
                out->facet_centroids[static_cast<size_t>(j)] = restricted.centroid[static_cast<size_t>(j)] + x;
    }
    return s;
}

CoordSample sibson(const Polygon& p, const Point2& x) { return SibsonCoords(p).eval(x); }

std::vector<Vec2> sibson_gradients(const SibsonBreakdown& b, const Polygon& p, const Point2& x) {
    const int n = p.size();
    const double diam = p.diameter();
    for (int i = 0; i < n; ++i)
        if ((x - p[i]).norm() <= 1e-13 * diam) throw AtVertex("Sibson gradient undefined at a vertex");
    if (!p.contains(x, -1e-12 * diam)) throw PointOutside("gradient needs a strictly interior point");

    double delta = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
        delta = std::min(delta, point_segment_distance(x, p[j], p.wrapped(j + 1)));
    if (delta <= 1e-9 * diam) throw AtVertex("Sibson gradient undefined on the boundary");

    std::vector<Point2> cell, tmp;
    std::vector<Vec2> sites;
    natural_cell(p, x, delta, cell, tmp, sites);
    FacetData facets = facets_of(cell, sites, diam);

    std::vector<Vec2> grad_o(static_cast<size_t>(n), Vec2{});
    Vec2 grad_D{};
    for (int j = 0; j < n; ++j) {
        if (facets.F[static_cast<size_t>(j)] == 0.0) continue;
        Vec2 g = facets.centroid[static_cast<size_t>(j)] *
                 (facets.F[static_cast<size_t>(j)] / sites[static_cast<size_t>(j)].norm());
        grad_o[static_cast<size_t>(j)] = g;
        grad_D += g;
    }
    std::vector<Vec2> grads(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        grads[static_cast<size_t>(i)] =
            (grad_o[static_cast<size_t>(i)] * b.D - grad_D * b.overlaps[static_cast<size_t>(i)]) / (b.D * b.D);
    return grads;
}

}  // namespace polybary
