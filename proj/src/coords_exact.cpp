#include "polybary/coords_exact.hpp"

#include <algorithm>
#include <cmath>

namespace polybary {

BaryTriple triangle_barycentric(const Point2& a, const Point2& b, const Point2& c, const Point2& x) {
    const double area = signed_triangle_area(a, b, c);
    const double scale = std::max({(b - a).norm2(), (c - b).norm2(), (a - c).norm2()});
    if (std::abs(area) <= 1e-14 * scale) throw DegenerateTriangle("triangle area vanishes");

    BaryTriple out;
    out.values[0] = signed_triangle_area(x, b, c) / area;
    out.values[1] = signed_triangle_area(a, x, c) / area;
    out.values[2] = signed_triangle_area(a, b, x) / area;
    out.gradients[0] = (c - b).perp() * (0.5 / area);
    out.gradients[1] = (a - c).perp() * (0.5 / area);
    out.gradients[2] = (b - a).perp() * (0.5 / area);
    return out;
}

Triangulation Triangulation::over(const Polygon& p, std::vector<std::array<int, 3>> triangles) {
    const int n = p.size();
    if (static_cast<int>(triangles.size()) != n - 2)
        throw Error("a triangulation of an n-gon has n-2 triangles");
    double total = 0.0;
    for (const auto& t : triangles) {
        for (int k : t)
            if (k < 0 || k >= n) throw Error("triangle index out of range");
        double a = signed_triangle_area(p[t[0]], p[t[1]], p[t[2]]);
        if (!(a > 1e-14 * p.diameter() * p.diameter()))
            throw DegenerateTriangle("triangulation contains a degenerate or negatively oriented triangle");
        total += a;
    }
    if (std::abs(total - p.area()) > 1e-9 * p.area()) throw Error("triangles do not partition the polygon");
    return Triangulation(std::move(triangles));
}

Triangulation Triangulation::fan(const Polygon& p, int apex_index) {
    const int n = p.size();
    std::vector<std::array<int, 3>> tris;
    tris.reserve(static_cast<size_t>(n - 2));
    for (int j = 0; j < n; ++j) {
        int j1 = (j + 1) % n;
        if (j == apex_index || j1 == apex_index) continue;
        tris.push_back({apex_index, j, j1});
    }
    return over(p, std::move(tris));
}

std::pair<Triangulation, Triangulation> extremal_triangulations(const Polygon& p, int i) {
    const int n = p.size();
    return {Triangulation::fan(p, (i + 1) % n), Triangulation::fan(p, i)};
}

namespace {

// rotation-normalized key (smallest index first, cyclic order kept)
std::array<int, 3> normalized_triple(const std::array<int, 3>& t) {
    int s = 0;
    if (t[1] < t[s]) s = 1;
    if (t[2] < t[s]) s = 2;
    return {t[s], t[(s + 1) % 3], t[(s + 2) % 3]};
}

}  // namespace

CoordSample triangulation_coords(const Polygon& p, const Triangulation& t, const Point2& x) {
    const int n = p.size();
    if (!p.contains(x, 1e-12 * p.diameter())) throw PointOutside("point outside polygon");

    int chosen = -1;
    BaryTriple chosen_bary{};
    std::array<int, 3> chosen_key{};
    for (double tol : {1e-12, 1e-8}) {
        for (size_t ti = 0; ti < t.triangles().size(); ++ti) {
            const auto& tri = t.triangles()[ti];
            BaryTriple b = triangle_barycentric(p[tri[0]], p[tri[1]], p[tri[2]], x);
            if (b.values[0] < -tol || b.values[1] < -tol || b.values[2] < -tol) continue;
            auto key = normalized_triple(tri);
            if (chosen < 0 || key < chosen_key) {
                chosen = static_cast<int>(ti);
                chosen_bary = b;
                chosen_key = key;
            }
        }
        if (chosen >= 0) break;
    }
    if (chosen < 0) throw PointOutside("point not matched by any triangle");

    CoordSample s;
    s.values.assign(static_cast<size_t>(n), 0.0);
    s.gradients.assign(static_cast<size_t>(n), Vec2{});
    const auto& tri = t.triangles()[static_cast<size_t>(chosen)];
    for (int k = 0; k < 3; ++k) {
        s.values[static_cast<size_t>(tri[k])] = chosen_bary.values[static_cast<size_t>(k)];
        s.gradients[static_cast<size_t>(tri[k])] = chosen_bary.gradients[static_cast<size_t>(k)];
    }
    return s;
}

WachspressCoords::WachspressCoords(Polygon p) : poly_(std::move(p)) {
    const int n = poly_.size();
    B_.resize(static_cast<size_t>(n));
    grad_A_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        B_[static_cast<size_t>(i)] = signed_triangle_area(poly_.wrapped(i - 1), poly_[i], poly_.wrapped(i + 1));
        grad_A_[static_cast<size_t>(i)] = (poly_.wrapped(i + 1) - poly_[i]).perp() * 0.5;
    }
}

WachspressInternals WachspressCoords::internals(const Point2& x) const {
    const int n = poly_.size();
    if (!poly_.contains(x, 1e-12 * poly_.diameter())) throw PointOutside("point outside polygon");
    WachspressInternals out;
    out.A.resize(static_cast<size_t>(n));
    out.B = B_;
    out.w.resize(static_cast<size_t>(n));
    out.grad_A = grad_A_;
    for (int j = 0; j < n; ++j)
        out.A[static_cast<size_t>(j)] = signed_triangle_area(x, poly_[j], poly_.wrapped(j + 1));
    for (int i = 0; i < n; ++i) {
        double prod = B_[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) {
            if (j == i || j == ((i - 1 + n) % n)) continue;
            prod *= out.A[static_cast<size_t>(j)];
        }
        out.w[static_cast<size_t>(i)] = prod;
    }
    return out;
}

CoordSample WachspressCoords::eval(const Point2& x) const {
    const int n = poly_.size();
    WachspressInternals in = internals(x);

    // grad w_i = B_i * sum_{j != i,i-1} grad A_j * prod_{k != i,i-1,j} A_k,
    // accumulated with prefix/suffix products over the skipped-index list
    std::vector<Vec2> grad_w(static_cast<size_t>(n));
    std::vector<int> idx;
    std::vector<double> pre, suf;
    idx.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        idx.clear();
        for (int j = 0; j < n; ++j)
            if (j != i && j != ((i - 1 + n) % n)) idx.push_back(j);
        const size_t m = idx.size();
        pre.assign(m + 1, 1.0);
        suf.assign(m + 1, 1.0);
        for (size_t k = 0; k < m; ++k) pre[k + 1] = pre[k] * in.A[static_cast<size_t>(idx[k])];
        for (size_t k = m; k > 0; --k) suf[k - 1] = suf[k] * in.A[static_cast<size_t>(idx[k - 1])];
        Vec2 g{};
        for (size_t k = 0; k < m; ++k) g += grad_A_[static_cast<size_t>(idx[k])] * (pre[k] * suf[k + 1]);
        grad_w[static_cast<size_t>(i)] = g * B_[static_cast<size_t>(i)];
    }

    double W = 0.0;
    Vec2 grad_W{};
    for (int i = 0; i < n; ++i) {
        W += in.w[static_cast<size_t>(i)];
        grad_W += grad_w[static_cast<size_t>(i)];
    }

    CoordSample s;
    s.values.resize(static_cast<size_t>(n));
    s.gradients.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double wi = in.w[static_cast<size_t>(i)];
        s.values[static_cast<size_t>(i)] = wi / W;
        s.gradients[static_cast<size_t>(i)] = (grad_w[static_cast<size_t>(i)] * W - grad_W * wi) / (W * W);
    }
    return s;
}

CoordSample wachspress(const Polygon& p, const Point2& x) { return WachspressCoords(p).eval(x); }

WachspressInternals wachspress_internals(const Polygon& p, const Point2& x) {
    return WachspressCoords(p).internals(x);
}

}  // namespace polybary
