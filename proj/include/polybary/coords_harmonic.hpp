#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include "polybary/coords.hpp"

namespace polybary {

/// Fan triangulation from the Chebyshev center, uniformly refined. Boundary
/// nodes carry their polygon-edge attribution so boundary data is exact.
struct RefinedMesh {
    explicit RefinedMesh(Polygon p) : parent(std::move(p)) {}

    Polygon parent;
    std::vector<Point2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<uint8_t> boundary_flags;
    int refinement_level = 0;
    // per node: polygon vertex index for corners, else -1
    std::vector<int> corner_of;
    // per node: (polygon edge index, arclength parameter in [0,1]); edge -1 off-boundary
    std::vector<std::pair<int, double>> edge_of;

    int node_count() const { return static_cast<int>(nodes.size()); }

    /// g_i at a boundary node: 1 at v_i, linear along polygon edges, 0 elsewhere.
    double boundary_value(int node, int i) const;
};

RefinedMesh refine(const Polygon& p, int levels);

/// Smallest level whose mesh edge length is at most 0.02 * diam.
int default_refinement_level(const Polygon& p);

struct MaxPrincipleCheck {
    bool ok = true;
    double min_value = 0.0;
    double max_value = 1.0;
    int worst_triangle = -1;  // largest-angle triangle, reported on violation
};

struct HarmonicBasis {
    RefinedMesh mesh;
    // nodal_values[i][node] = discrete lambda_i at node
    std::vector<std::vector<double>> nodal_values;
    std::vector<double> energies;  // Dirichlet energies |lambda_i|^2_H1

    MaxPrincipleCheck max_principle() const;
};

/// Piecewise-linear Galerkin solve of the Laplace problem for every boundary
/// hat function, by diagonally preconditioned conjugate gradients.
HarmonicBasis assemble_and_solve(const RefinedMesh& mesh);

/// Dirichlet energy of an arbitrary nodal vector on the mesh.
double dirichlet_energy(const RefinedMesh& mesh, const std::vector<double>& nodal);

/// Brute-force point location plus linear interpolation of the nodal columns.
CoordSample harmonic_eval(const HarmonicBasis& basis, const Point2& x);

class HarmonicCoords : public CoordinateField {
  public:
    /// levels < 0 picks default_refinement_level(p).
    explicit HarmonicCoords(Polygon p, int levels = -1);

    CoordSample eval(const Point2& x) const override;
    int size() const override { return poly_.size(); }
    const Polygon& polygon() const override { return poly_; }
    const HarmonicBasis& basis() const { return basis_; }

  private:
    Polygon poly_;
    HarmonicBasis basis_;

    // uniform-grid triangle index; same containment test as harmonic_eval
    struct Locator;
    std::shared_ptr<const Locator> locator_;
};

}  // namespace polybary
