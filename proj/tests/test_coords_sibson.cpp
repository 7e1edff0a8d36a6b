#include <doctest.h>

#include <numbers>

#include "polybary/coords_exact.hpp"
#include "polybary/coords_sibson.hpp"
#include "support.hpp"

using namespace polybary;
using namespace testsupport;
using std::numbers::pi;

namespace {

Polygon unit_square() { return validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace

TEST_CASE("half-plane clipping") {
    ConvexCell sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

    ConvexCell left = clip_halfplane(sq, {0, 0.5}, {1, 0.5});
    CHECK(left.area() == doctest::Approx(0.5).epsilon(1e-14));

    // bisector misses the cell: unchanged
    ConvexCell all = clip_halfplane(sq, {0.5, 0.5}, {9.0, 0.5});
    CHECK(all.area() == doctest::Approx(1.0).epsilon(1e-14));

    ConvexCell quarter = clip_halfplane(clip_halfplane(sq, {0, 0.5}, {1, 0.5}), {0.5, 0}, {0.5, 1});
    CHECK(quarter.area() == doctest::Approx(0.25).epsilon(1e-14));
    // shoelace oracle on the expected corner set
    CHECK(quarter.area() ==
          doctest::Approx(polygon_signed_area({{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}})).epsilon(1e-14));

    ConvexCell gone = clip_halfplane(sq, {5, 0.5}, {0.5, 0.5});
    CHECK(gone.empty());
    CHECK(gone.area() == 0.0);

    CHECK_THROWS_AS(clip_halfplane(sq, {0.5, 0.5}, {0.5, 0.5}), DuplicatePoints);
}

TEST_CASE("voronoi cells restricted to the polygon") {
    Polygon sq = unit_square();
    for (int k = 0; k < 4; ++k) {
        ConvexCell c = voronoi_cell(sq.vertices(), k, sq);
        CHECK(c.area() == doctest::Approx(0.25).epsilon(1e-14));
    }

    // adding the center: its cell is the diamond of the edge midpoints
    std::vector<Point2> pts = sq.vertices();
    pts.push_back({0.5, 0.5});
    ConvexCell center = voronoi_cell(pts, 4, sq);
    CHECK(center.area() == doctest::Approx(0.5).epsilon(1e-14));

    std::vector<Point2> dup = sq.vertices();
    dup.push_back(sq[0]);
    CHECK_THROWS_AS(voronoi_cell(dup, 0, sq), DuplicatePoints);
}

TEST_CASE("voronoi cell areas match Monte Carlo membership") {
    std::mt19937_64 rng(808);
    Polygon p = random_convex_polygon(6, rng);
    for (int k = 0; k < 3; ++k) {
        ConvexCell cell = voronoi_cell(p.vertices(), k, p);
        auto [estimate, stderr_] = monte_carlo_area(
            p,
            [&](const Point2& y) {
                if (!p.contains(y)) return false;
                int nearest = 0;
                double best = (y - p[0]).norm2();
                for (int i = 1; i < p.size(); ++i) {
                    double d = (y - p[i]).norm2();
                    if (d < best) {
                        best = d;
                        nearest = i;
                    }
                }
                return nearest == k;
            },
            100000, rng);
        CHECK(std::abs(cell.area() - estimate) <= 3.0 * stderr_);
    }
}

TEST_CASE("sibson on reference shapes") {
    SibsonCoords sq(unit_square());
    CoordSample c = sq.eval({0.5, 0.5});
    for (double v : c.values) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));

    for (int j = 0; j < 4; ++j) {
        CoordSample s = sq.eval(sq.polygon()[j]);
        for (int i = 0; i < 4; ++i)
            CHECK(s.values[static_cast<size_t>(i)] == doctest::Approx(i == j ? 1.0 : 0.0));
    }
    CHECK_THROWS_AS(sq.eval({1.5, 0.5}), PointOutside);

    SibsonBreakdown b = sq.breakdown({0.5, 0.5});
    CHECK(b.D == doctest::Approx(0.5).epsilon(1e-14));
    for (double ci : b.C) CHECK(ci == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("sibson equals barycentric on triangles") {
    Polygon tri = validate_polygon({{0, 0}, {1.7, 0.2}, {0.4, 1.5}});
    SibsonCoords field(tri);
    std::mt19937_64 rng(9);
    for (const Point2& x : random_interior_points(tri, 100, rng)) {
        CoordSample s = field.eval(x);
        BaryTriple bt = triangle_barycentric(tri[0], tri[1], tri[2], x);
        for (int i = 0; i < 3; ++i)
            CHECK(s.values[static_cast<size_t>(i)] ==
                  doctest::Approx(bt.values[static_cast<size_t>(i)]).epsilon(1e-9));
    }
}

TEST_CASE("sibson barycentric axioms and the overlap partition") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 3; ++trial) {
        Polygon p = random_convex_polygon(4 + static_cast<int>(rng() % 5), rng);
        SibsonCoords field(p);
        for (const Point2& x : random_interior_points(p, 70, rng)) {
            SibsonBreakdown b;
            CoordSample s = field.eval_with_breakdown(x, &b);
            double sum = 0.0;
            Point2 lin{};
            for (int i = 0; i < p.size(); ++i) {
                CHECK(s.values[static_cast<size_t>(i)] >= -1e-9);
                CHECK(s.values[static_cast<size_t>(i)] <= 1.0 + 1e-9);
                sum += s.values[static_cast<size_t>(i)];
                lin += p[i] * s.values[static_cast<size_t>(i)];
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(lin.x == doctest::Approx(x.x).epsilon(1e-9));
            CHECK(lin.y == doctest::Approx(x.y).epsilon(1e-9));

            CHECK(b.D > 0.0);
            double osum = 0.0;
            for (double o : b.overlaps) osum += o;
            CHECK(std::abs(osum - b.D) <= 1e-10 * p.area());
            double fsum = 0.0;
            for (double f : b.F) fsum += f;
            CHECK(fsum <= p.perimeter() + 1e-9);
        }
    }
}

TEST_CASE("sibson linear precision on a random hexagon") {
    std::mt19937_64 rng(12);
    Polygon p = random_convex_polygon(6, rng);
    SibsonCoords field(p);
    for (const Point2& x : random_interior_points(p, 200, rng)) {
        CoordSample s = field.eval(x);
        Point2 lin{};
        for (int i = 0; i < p.size(); ++i) lin += p[i] * s.values[static_cast<size_t>(i)];
        CHECK(lin.x == doctest::Approx(x.x).epsilon(1e-9));
        CHECK(lin.y == doctest::Approx(x.y).epsilon(1e-9));
    }
}

TEST_CASE("floater sandwich for sibson") {
    std::mt19937_64 rng(14);
    Polygon p = random_convex_polygon(6, rng);
    SibsonCoords field(p);
    auto pts = random_interior_points(p, 200, rng);
    for (int i = 0; i < p.size(); ++i) {
        auto [tm, tM] = extremal_triangulations(p, i);
        TriangulationCoords lo(p, tm), hi(p, tM);
        for (const Point2& x : pts) {
            const double v = field.eval(x).values[static_cast<size_t>(i)];
            CHECK(v >= lo.eval(x).values[static_cast<size_t>(i)] - 1e-9);
            CHECK(v <= hi.eval(x).values[static_cast<size_t>(i)] + 1e-9);
        }
    }
}

TEST_CASE("sibson similarity invariance") {
    std::mt19937_64 rng(15);
    Polygon p = random_convex_polygon(5, rng);
    const double scale = 1.75, angle = -0.42;
    const Vec2 shift{-0.8, 2.1};
    Polygon q = p.rotated(angle).scaled(scale).translated(shift);
    auto map = [&](const Point2& x) {
        Point2 r{std::cos(angle) * x.x - std::sin(angle) * x.y, std::sin(angle) * x.x + std::cos(angle) * x.y};
        return r * scale + shift;
    };
    SibsonCoords fp(p), fq(q);
    for (const Point2& x : random_interior_points(p, 60, rng)) {
        CoordSample a = fp.eval(x), b = fq.eval(map(x));
        for (int i = 0; i < p.size(); ++i)
            CHECK(a.values[static_cast<size_t>(i)] ==
                  doctest::Approx(b.values[static_cast<size_t>(i)]).epsilon(1e-9));
    }
}

TEST_CASE("sibson gradients match finite differences away from the C1 breaks") {
    std::mt19937_64 rng(16);
    Polygon p = rescaled_to_unit_diameter(random_convex_polygon(6, rng));
    SibsonCoords field(p);
    const double diam = 1.0;
    auto circles = delaunay_circumcircles(p);
    const double h = 2e-7;

    int checked = 0;
    for (const Point2& x : random_interior_points(p, 2000, rng)) {
        if (distance_to_boundary(p, x) < 1e-2 * diam) continue;
        bool near_vertex = false;
        for (int i = 0; i < p.size(); ++i)
            if ((x - p[i]).norm() < 1e-2 * diam) near_vertex = true;
        if (near_vertex || distance_to_circles(circles, x) < 1e-2 * diam) continue;

        SibsonBreakdown b;
        CoordSample s = field.eval_with_breakdown(x, &b);
        auto grads = sibson_gradients(b, p, x);
        for (int i = 0; i < p.size(); ++i) {
            Vec2 fd = fd_gradient(
                [&](const Point2& y) { return field.eval(y).values[static_cast<size_t>(i)]; }, x, h);
            const double scale = std::max(1.0, fd.norm());
            CHECK((s.gradients[static_cast<size_t>(i)] - fd).norm() <= 1e-5 * scale);
            CHECK((grads[static_cast<size_t>(i)] - s.gradients[static_cast<size_t>(i)]).norm() <= 1e-12);
        }
        // restricted-cell facet bounds at diameter 1
        double fsum = 0.0;
        for (int j = 0; j < p.size(); ++j) {
            CHECK(b.F[static_cast<size_t>(j)] <= 1.0 + 1e-9);
            fsum += b.F[static_cast<size_t>(j)];
        }
        CHECK(fsum <= p.perimeter() + 1e-9);
        CHECK(fsum <= pi + 1e-9);

        if (++checked >= 25) break;
    }
    CHECK(checked >= 15);
}

TEST_CASE("sibson gradient sums vanish") {
    std::mt19937_64 rng(19);
    Polygon p = random_convex_polygon(7, rng);
    SibsonCoords field(p);
    for (const Point2& x : random_interior_points(p, 50, rng)) {
        CoordSample s = field.eval(x);
        Vec2 gsum{};
        double m00 = 0, m11 = 0;
        for (int i = 0; i < p.size(); ++i) {
            gsum += s.gradients[static_cast<size_t>(i)];
            m00 += p[i].x * s.gradients[static_cast<size_t>(i)].x;
            m11 += p[i].y * s.gradients[static_cast<size_t>(i)].y;
        }
        CHECK(gsum.norm() < 1e-9);
        CHECK(m00 == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(m11 == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("sibson gradient errors at vertices") {
    Polygon sq = unit_square();
    SibsonCoords field(sq);
    CHECK_THROWS_AS(field.breakdown(sq[0]), AtVertex);
    SibsonBreakdown b = field.breakdown({0.3, 0.4});
    CHECK_THROWS_AS(sibson_gradients(b, sq, sq[2]), AtVertex);
    CHECK_THROWS_AS(sibson_gradients(b, sq, {0.5, 0.0}), PointOutside);
    // vertex evaluation returns the delta limit with NaN gradients
    CoordSample s = field.eval(sq[1]);
    CHECK(s.values[1] == doctest::Approx(1.0));
    CHECK(std::isnan(s.gradients[0].x));
}
