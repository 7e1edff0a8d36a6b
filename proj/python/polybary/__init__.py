from polybary._core import (
    Error,
    Field,
    Polygon,
    check_conditions,
    convergence_study,
    counterexample_study,
    derived_bound_constants,
    gradient_bound_audit,
    measure,
    pentagon_omega_eps,
    thin_triangle_study,
    validate_polygon,
)

__all__ = [
    "Error",
    "Field",
    "Polygon",
    "check_conditions",
    "convergence_study",
    "counterexample_study",
    "derived_bound_constants",
    "gradient_bound_audit",
    "measure",
    "pentagon_omega_eps",
    "thin_triangle_study",
    "validate_polygon",
]
