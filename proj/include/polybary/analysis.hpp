#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "polybary/coords.hpp"

namespace polybary {

/// A scalar function with optional gradient / Hessian / combined evaluation.
struct ScalarField {
    std::function<double(const Point2&)> value;
    std::function<Vec2(const Point2&)> gradient;
    // (u_xx, u_xy, u_yy); present for the polynomial test functions
    std::function<std::array<double, 3>(const Point2&)> hessian;
    // fast path evaluating value and gradient together
    std::function<void(const Point2&, double&, Vec2&)> value_and_gradient;

    Vec2 grad(const Point2& x) const {
        if (!gradient) throw MissingGradient("scalar field has no gradient");
        return gradient(x);
    }
    void both(const Point2& x, double& v, Vec2& g) const {
        if (value_and_gradient) {
            value_and_gradient(x, v, g);
        } else {
            v = value(x);
            g = grad(x);
        }
    }
};

/// Quadratic/linear polynomial field c00 + c10 x + c01 y + c20 x^2 + c11 xy + c02 y^2.
ScalarField polynomial_field(double c00, double c10, double c01, double c20, double c11, double c02);

/// Triangle cells refined uniformly, with a fixed symmetric degree-5 rule
/// (7 points per cell).
struct QuadratureScheme {
    std::vector<Triangle> base_cells;
    int refinement = 0;

    /// Fan triangulation from the Chebyshev center.
    static QuadratureScheme for_polygon(const Polygon& p, int refinement);
    static QuadratureScheme from_cells(std::vector<Triangle> cells, int refinement);
};

struct IntegrationResult {
    double value = 0.0;
    bool converged = false;
    int refinement = 0;  // refinement level of the reported value
};

/// Adaptive integration: the refinement level is increased until two
/// successive values differ by < max(1e-10, 1e-8 |value|), capped at level 8.
IntegrationResult integrate(const QuadratureScheme& q, const std::function<double(const Point2&)>& f);

struct StudyRecord {
    double parameter = 0.0;
    double l2_error = 0.0;
    double h1_semi_error = 0.0;
    double h1_error = 0.0;
    double h2_seminorm_u = 0.0;
    std::optional<double> fitted_rate;  // filled on the last record of a study
    bool quadrature_converged = true;
};

/// I u = sum_i u(v_i) lambda_i. The family must outlive the returned field.
ScalarField interpolate(const CoordinateField& family, const ScalarField& u, const Polygon& p);

StudyRecord sobolev_errors(const ScalarField& u, const ScalarField& Iu, const Polygon& p,
                           const QuadratureScheme& q);

/// Constructs a coordinate field: tri = fan triangulation from vertex 0,
/// harmonic_level < 0 = default refinement level.
std::unique_ptr<CoordinateField> make_field(Family kind, const Polygon& p, int harmonic_level = -1);

struct ConvergenceStudy {
    std::vector<StudyRecord> records;
    std::optional<double> h1_rate;  // fitted on error / |u|_{H^2}
    std::optional<double> l2_rate;
    bool rate_fit_skipped = false;
};

/// Errors of I u on scaled copies of the diameter-1 base polygon, with
/// log-log rates of the normalized errors (the constant of the estimate).
ConvergenceStudy convergence_study(Family kind, const Polygon& base, const ScalarField& u,
                                   const std::vector<double>& scales, int harmonic_level = -1);

/// The near-square pentagon (0,1+eps),(-1,1),(-1,-1),(1,-1),(1,1) (CCW,
/// apex at index 0).
Polygon pentagon_omega_eps(double eps);

struct CounterexampleRecord {
    double eps = 0.0;
    double energy = 0.0;  // integral of |d lambda_1 / dy|^2
    bool quadrature_converged = true;
    bool pointwise_ok = false;   // |d lambda_1/dy| > 1/(28 eps) on the 50x50 grid
    double min_pointwise_ratio = 0.0;  // min of |d lambda_1/dy| * 28 eps
};

struct CounterexampleStudy {
    std::vector<CounterexampleRecord> records;
    std::optional<double> slope;  // log-log slope of energy vs eps
};

CounterexampleStudy counterexample_study(const std::vector<double>& eps_list);

struct GradientBoundAudit {
    double sampled_sup_grad = 0.0;
    double theoretical_bound = 0.0;
    bool pass = false;
    // Sibson extras (NaN for Wachspress)
    double min_D = 0.0;
    double D_star = 0.0;
    double max_facet_sum = 0.0;
    double perimeter = 0.0;
};

/// Samples sup |grad lambda_i| over quasi-random interior points of the
/// diameter-1 rescaled polygon and compares against the derived bound.
/// Throws ConditionsNotMet unless the family's conditions hold (G1-G3 for
/// Wachspress, G1-G2 for Sibson).
GradientBoundAudit gradient_bound_audit(Family kind, const Polygon& p, const ConditionThresholds& t,
                                        int samples = 10000, int seed = 42);

/// Interpolation of u = x^2 over triangles (-1,0),(1,0),(0,cot(beta/2));
/// records keyed by the apex (maximum) angle beta.
std::vector<StudyRecord> thin_triangle_study(const std::vector<double>& max_angles);

/// Halton low-discrepancy point, bases 2 and 3.
Point2 halton_point(unsigned long long index);

/// Deterministic quasi-random interior points (rejection from the bounding box).
std::vector<Point2> quasi_random_interior_points(const Polygon& p, int count, int seed);

}  // namespace polybary
