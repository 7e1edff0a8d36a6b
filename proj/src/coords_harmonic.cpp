#include "polybary/coords_harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "polybary/coords_exact.hpp"

namespace polybary {

namespace {

struct TriGeom {
    double area;
    std::array<Vec2, 3> grads;  // constant P1 basis gradients
};

TriGeom tri_geom(const Point2& a, const Point2& b, const Point2& c) {
    TriGeom g;
    g.area = signed_triangle_area(a, b, c);
    g.grads[0] = (c - b).perp() * (0.5 / g.area);
    g.grads[1] = (a - c).perp() * (0.5 / g.area);
    g.grads[2] = (b - a).perp() * (0.5 / g.area);
    return g;
}

}  // namespace

double RefinedMesh::boundary_value(int node, int i) const {
    const int n = parent.size();
    const int corner = corner_of[static_cast<size_t>(node)];
    if (corner >= 0) return corner == i ? 1.0 : 0.0;
    const auto& [edge, t] = edge_of[static_cast<size_t>(node)];
    if (edge < 0) return 0.0;
    if (edge == i) return 1.0 - t;
    if ((edge + 1) % n == i) return t;
    return 0.0;
}

RefinedMesh refine(const Polygon& p, int levels) {
    if (levels < 0) throw Error("refinement level must be non-negative");
    const int n = p.size();
    RefinedMesh mesh(p);
    mesh.refinement_level = levels;

    for (int i = 0; i < n; ++i) {
        mesh.nodes.push_back(p[i]);
        mesh.corner_of.push_back(i);
        mesh.edge_of.emplace_back(-1, 0.0);
    }
    mesh.nodes.push_back(chebyshev_circle(p).center);
    mesh.corner_of.push_back(-1);
    mesh.edge_of.emplace_back(-1, 0.0);
    for (int i = 0; i < n; ++i) mesh.triangles.push_back({n, i, (i + 1) % n});

    // polygon edges incident to a node: corner i touches edges i-1 and i
    auto on_common_edge = [&](int a, int b) -> int {
        auto edges_of = [&](int node, int out[2]) -> int {
            int c = mesh.corner_of[static_cast<size_t>(node)];
            if (c >= 0) {
                out[0] = (c - 1 + n) % n;
                out[1] = c;
                return 2;
            }
            if (mesh.edge_of[static_cast<size_t>(node)].first >= 0) {
                out[0] = mesh.edge_of[static_cast<size_t>(node)].first;
                return 1;
            }
            return 0;
        };
        int ea[2], eb[2];
        int na = edges_of(a, ea), nb = edges_of(b, eb);
        for (int i_ = 0; i_ < na; ++i_)
            for (int j_ = 0; j_ < nb; ++j_)
                if (ea[i_] == eb[j_]) return ea[i_];
        return -1;
    };
    auto param_on_edge = [&](int node, int e) -> double {
        int c = mesh.corner_of[static_cast<size_t>(node)];
        if (c >= 0) return c == e ? 0.0 : 1.0;
        return mesh.edge_of[static_cast<size_t>(node)].second;
    };

    for (int l = 0; l < levels; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid_node = [&](int a, int b) -> int {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            int id = mesh.node_count();
            int e = on_common_edge(a, b);
            if (e >= 0) {
                double t = 0.5 * (param_on_edge(a, e) + param_on_edge(b, e));
                mesh.nodes.push_back(p[e] + (p.wrapped(e + 1) - p[e]) * t);
                mesh.corner_of.push_back(-1);
                mesh.edge_of.emplace_back(e, t);
            } else {
                mesh.nodes.push_back((mesh.nodes[static_cast<size_t>(a)] + mesh.nodes[static_cast<size_t>(b)]) * 0.5);
                mesh.corner_of.push_back(-1);
                mesh.edge_of.emplace_back(-1, 0.0);
            }
            midpoint.emplace(key, id);
            return id;
        };

        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const auto& t : mesh.triangles) {
            int ab = mid_node(t[0], t[1]);
            int bc = mid_node(t[1], t[2]);
            int ca = mid_node(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({ab, t[1], bc});
            next.push_back({ca, bc, t[2]});
            next.push_back({ab, bc, ca});
        }
        mesh.triangles = std::move(next);
    }

    mesh.boundary_flags.assign(static_cast<size_t>(mesh.node_count()), 0);
    for (int v = 0; v < mesh.node_count(); ++v)
        if (mesh.corner_of[static_cast<size_t>(v)] >= 0 || mesh.edge_of[static_cast<size_t>(v)].first >= 0)
            mesh.boundary_flags[static_cast<size_t>(v)] = 1;
    return mesh;
}

int default_refinement_level(const Polygon& p) {
    const Point2 c = chebyshev_circle(p).center;
    double emax = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        emax = std::max(emax, (p[i] - c).norm());
        emax = std::max(emax, (p.wrapped(i + 1) - p[i]).norm());
    }
    const double target = 0.02 * p.diameter();
    int level = 0;
    while (emax > target && level < 8) {
        emax *= 0.5;
        ++level;
    }
    return level;
}

MaxPrincipleCheck HarmonicBasis::max_principle() const {
    MaxPrincipleCheck c;
    c.min_value = 0.0;
    c.max_value = 1.0;
    for (const auto& col : nodal_values)
        for (double v : col) {
            c.min_value = std::min(c.min_value, v);
            c.max_value = std::max(c.max_value, v);
        }
    c.ok = c.min_value >= -1e-12 && c.max_value <= 1.0 + 1e-12;
    if (!c.ok) {
        double worst = 0.0;
        for (size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tr = mesh.triangles[t];
            for (int k = 0; k < 3; ++k) {
                Vec2 u = mesh.nodes[static_cast<size_t>(tr[(k + 1) % 3])] - mesh.nodes[static_cast<size_t>(tr[k])];
                Vec2 v = mesh.nodes[static_cast<size_t>(tr[(k + 2) % 3])] - mesh.nodes[static_cast<size_t>(tr[k])];
                double ang = std::atan2(std::abs(u.cross(v)), u.dot(v));
                if (ang > worst) {
                    worst = ang;
                    c.worst_triangle = static_cast<int>(t);
                }
            }
        }
    }
    return c;
}

HarmonicBasis assemble_and_solve(const RefinedMesh& mesh) {
    const int n = mesh.parent.size();
    const int nn = mesh.node_count();

    // sparse stiffness rows (node-sorted columns)
    std::vector<std::map<int, double>> rows(static_cast<size_t>(nn));
    for (const auto& t : mesh.triangles) {
        TriGeom g = tri_geom(mesh.nodes[static_cast<size_t>(t[0])], mesh.nodes[static_cast<size_t>(t[1])],
                             mesh.nodes[static_cast<size_t>(t[2])]);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                rows[static_cast<size_t>(t[a])][t[b]] += g.area * g.grads[static_cast<size_t>(a)].dot(g.grads[static_cast<size_t>(b)]);
    }

    std::vector<int> col;
    std::vector<double> val;
    std::vector<int> row_start(static_cast<size_t>(nn) + 1, 0);
    for (int r = 0; r < nn; ++r) {
        row_start[static_cast<size_t>(r) + 1] = row_start[static_cast<size_t>(r)] + static_cast<int>(rows[static_cast<size_t>(r)].size());
        for (const auto& [c, v] : rows[static_cast<size_t>(r)]) {
            col.push_back(c);
            val.push_back(v);
        }
    }

    std::vector<int> interior;
    for (int v = 0; v < nn; ++v)
        if (!mesh.boundary_flags[static_cast<size_t>(v)]) interior.push_back(v);
    std::vector<int> interior_id(static_cast<size_t>(nn), -1);
    for (size_t k = 0; k < interior.size(); ++k) interior_id[static_cast<size_t>(interior[k])] = static_cast<int>(k);
    const size_t ni = interior.size();

    std::vector<double> diag(ni);
    for (size_t k = 0; k < ni; ++k) {
        int r = interior[k];
        double d = 0.0;
        for (int idx = row_start[static_cast<size_t>(r)]; idx < row_start[static_cast<size_t>(r) + 1]; ++idx)
            if (col[static_cast<size_t>(idx)] == r) d = val[static_cast<size_t>(idx)];
        diag[k] = d;
    }

    auto apply_interior = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (size_t k = 0; k < ni; ++k) {
            int r = interior[k];
            double acc = 0.0;
            for (int idx = row_start[static_cast<size_t>(r)]; idx < row_start[static_cast<size_t>(r) + 1]; ++idx) {
                int c = col[static_cast<size_t>(idx)];
                int ic = interior_id[static_cast<size_t>(c)];
                if (ic >= 0) acc += val[static_cast<size_t>(idx)] * x[static_cast<size_t>(ic)];
            }
            y[k] = acc;
        }
    };

    HarmonicBasis basis{mesh, {}, {}};
    basis.nodal_values.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(nn), 0.0));
    basis.energies.assign(static_cast<size_t>(n), 0.0);

    const int iter_cap = 10 * nn;
    std::vector<double> b(ni), x(ni), r(ni), z(ni), pdir(ni), ap(ni);

    for (int i = 0; i < n; ++i) {
        auto& column = basis.nodal_values[static_cast<size_t>(i)];
        for (int v = 0; v < nn; ++v)
            if (mesh.boundary_flags[static_cast<size_t>(v)]) column[static_cast<size_t>(v)] = mesh.boundary_value(v, i);

        // rhs = -K_IB g_B
        for (size_t k = 0; k < ni; ++k) {
            int rr = interior[k];
            double acc = 0.0;
            for (int idx = row_start[static_cast<size_t>(rr)]; idx < row_start[static_cast<size_t>(rr) + 1]; ++idx) {
                int c = col[static_cast<size_t>(idx)];
                if (mesh.boundary_flags[static_cast<size_t>(c)]) acc += val[static_cast<size_t>(idx)] * column[static_cast<size_t>(c)];
            }
            b[k] = -acc;
        }

        double bnorm = 0.0;
        for (double t : b) bnorm += t * t;
        bnorm = std::sqrt(bnorm);
        std::fill(x.begin(), x.end(), 0.0);
        if (bnorm > 0.0) {
            // stopping residual well below the contracted 1e-10
            const double tol = 1e-13 * bnorm;
            r = b;
            for (size_t k = 0; k < ni; ++k) z[k] = r[k] / diag[k];
            pdir = z;
            double rz = 0.0;
            for (size_t k = 0; k < ni; ++k) rz += r[k] * z[k];
            int it = 0;
            while (true) {
                double rnorm = 0.0;
                for (double t : r) rnorm += t * t;
                if (std::sqrt(rnorm) <= tol) break;
                if (++it > iter_cap) throw SolverDiverged("conjugate gradients exceeded iteration cap");
                apply_interior(pdir, ap);
                double pap = 0.0;
                for (size_t k = 0; k < ni; ++k) pap += pdir[k] * ap[k];
                double alpha = rz / pap;
                for (size_t k = 0; k < ni; ++k) {
                    x[k] += alpha * pdir[k];
                    r[k] -= alpha * ap[k];
                }
                for (size_t k = 0; k < ni; ++k) z[k] = r[k] / diag[k];
                double rz_next = 0.0;
                for (size_t k = 0; k < ni; ++k) rz_next += r[k] * z[k];
                double beta = rz_next / rz;
                rz = rz_next;
                for (size_t k = 0; k < ni; ++k) pdir[k] = z[k] + beta * pdir[k];
            }
        }
        for (size_t k = 0; k < ni; ++k) column[static_cast<size_t>(interior[k])] = x[k];
        basis.energies[static_cast<size_t>(i)] = dirichlet_energy(mesh, column);
    }
    return basis;
}

double dirichlet_energy(const RefinedMesh& mesh, const std::vector<double>& nodal) {
    double acc = 0.0;
    for (const auto& t : mesh.triangles) {
        TriGeom g = tri_geom(mesh.nodes[static_cast<size_t>(t[0])], mesh.nodes[static_cast<size_t>(t[1])],
                             mesh.nodes[static_cast<size_t>(t[2])]);
        Vec2 grad{};
        for (int k = 0; k < 3; ++k) grad += g.grads[static_cast<size_t>(k)] * nodal[static_cast<size_t>(t[k])];
        acc += g.area * grad.norm2();
    }
    return acc;
}

namespace {

CoordSample interpolate_in_triangle(const HarmonicBasis& basis, const std::array<int, 3>& tri,
                                    const BaryTriple& bary) {
    const int n = static_cast<int>(basis.nodal_values.size());
    CoordSample s;
    s.values.assign(static_cast<size_t>(n), 0.0);
    s.gradients.assign(static_cast<size_t>(n), Vec2{});
    for (int i = 0; i < n; ++i) {
        const auto& column = basis.nodal_values[static_cast<size_t>(i)];
        double v = 0.0;
        Vec2 g{};
        for (int k = 0; k < 3; ++k) {
            const double nv = column[static_cast<size_t>(tri[static_cast<size_t>(k)])];
            v += nv * bary.values[static_cast<size_t>(k)];
            g += bary.gradients[static_cast<size_t>(k)] * nv;
        }
        s.values[static_cast<size_t>(i)] = v;
        s.gradients[static_cast<size_t>(i)] = g;
    }
    return s;
}

bool bary_of(const RefinedMesh& mesh, int tri_index, const Point2& x, double tol, BaryTriple& out) {
    const auto& t = mesh.triangles[static_cast<size_t>(tri_index)];
    out = triangle_barycentric(mesh.nodes[static_cast<size_t>(t[0])], mesh.nodes[static_cast<size_t>(t[1])],
                               mesh.nodes[static_cast<size_t>(t[2])], x);
    return out.values[0] >= -tol && out.values[1] >= -tol && out.values[2] >= -tol;
}

}  // namespace

CoordSample harmonic_eval(const HarmonicBasis& basis, const Point2& x) {
    const RefinedMesh& mesh = basis.mesh;
    if (!mesh.parent.contains(x, 1e-12 * mesh.parent.diameter())) throw PointOutside("point outside polygon");
    BaryTriple bary;
    for (double tol : {1e-12, 1e-8}) {
        for (size_t t = 0; t < mesh.triangles.size(); ++t)
            if (bary_of(mesh, static_cast<int>(t), x, tol, bary))
                return interpolate_in_triangle(basis, mesh.triangles[t], bary);
    }
    throw PointOutside("point not matched by any mesh triangle");
}

struct HarmonicCoords::Locator {
    double x0, y0, inv_dx, inv_dy;
    int gw, gh;
    std::vector<std::vector<int>> cells;

    explicit Locator(const RefinedMesh& mesh) {
        double xmin = mesh.nodes[0].x, xmax = xmin, ymin = mesh.nodes[0].y, ymax = ymin;
        for (const auto& p : mesh.nodes) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        int g = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(mesh.triangles.size()))));
        gw = gh = std::clamp(g, 4, 512);
        x0 = xmin;
        y0 = ymin;
        inv_dx = gw / std::max(xmax - xmin, 1e-300);
        inv_dy = gh / std::max(ymax - ymin, 1e-300);
        cells.assign(static_cast<size_t>(gw) * static_cast<size_t>(gh), {});
        for (size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tr = mesh.triangles[t];
            double txmin = 1e300, txmax = -1e300, tymin = 1e300, tymax = -1e300;
            for (int k = 0; k < 3; ++k) {
                const Point2& p = mesh.nodes[static_cast<size_t>(tr[static_cast<size_t>(k)])];
                txmin = std::min(txmin, p.x);
                txmax = std::max(txmax, p.x);
                tymin = std::min(tymin, p.y);
                tymax = std::max(tymax, p.y);
            }
            int cx0 = std::clamp(static_cast<int>((txmin - x0) * inv_dx), 0, gw - 1);
            int cx1 = std::clamp(static_cast<int>((txmax - x0) * inv_dx), 0, gw - 1);
            int cy0 = std::clamp(static_cast<int>((tymin - y0) * inv_dy), 0, gh - 1);
            int cy1 = std::clamp(static_cast<int>((tymax - y0) * inv_dy), 0, gh - 1);
            for (int cy = cy0; cy <= cy1; ++cy)
                for (int cx = cx0; cx <= cx1; ++cx)
                    cells[static_cast<size_t>(cy) * static_cast<size_t>(gw) + static_cast<size_t>(cx)].push_back(static_cast<int>(t));
        }
    }

    const std::vector<int>& candidates(const Point2& p) const {
        int cx = std::clamp(static_cast<int>((p.x - x0) * inv_dx), 0, gw - 1);
        int cy = std::clamp(static_cast<int>((p.y - y0) * inv_dy), 0, gh - 1);
        return cells[static_cast<size_t>(cy) * static_cast<size_t>(gw) + static_cast<size_t>(cx)];
    }
};

HarmonicCoords::HarmonicCoords(Polygon p, int levels)
    : poly_(std::move(p)),
      basis_(assemble_and_solve(refine(poly_, levels < 0 ? default_refinement_level(poly_) : levels))),
      locator_(std::make_shared<Locator>(basis_.mesh)) {}

CoordSample HarmonicCoords::eval(const Point2& x) const {
    if (!poly_.contains(x, 1e-12 * poly_.diameter())) throw PointOutside("point outside polygon");
    BaryTriple bary;
    const auto& cand = locator_->candidates(x);
    for (double tol : {1e-12, 1e-8}) {
        for (int t : cand)
            if (bary_of(basis_.mesh, t, x, tol, bary))
                return interpolate_in_triangle(basis_, basis_.mesh.triangles[static_cast<size_t>(t)], bary);
    }
    // grid miss (boundary rounding): fall back to the full scan
    return harmonic_eval(basis_, x);
}

}  // namespace polybary
