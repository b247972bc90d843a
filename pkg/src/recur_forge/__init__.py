"""Closed-form solutions of a second-order rational difference system.

The system ``x_{n+1} = (a y_n x_{n-1} + b x_{n-1} + c)/(y_n x_{n-1})`` and its
mirror for ``y`` are solved through the generalized Tribonacci sequence
``J_n``; every closed form is checked against direct iteration.
"""

__version__ = "0.1.0"

from .characteristic import (
    TRIBONACCI_CONSTANT,
    Coefficients,
    CubicRoots,
    RootCase,
    solve_characteristic,
    vieta_residuals,
)
from .errors import ForbiddenSetError, InvalidInputError
from .recurrence import (
    LinearInit,
    SequenceTable,
    j_binet,
    j_mirror,
    j_sequence,
    r_closed_form,
    ratio_limit,
    s_closed_form,
)
from .stability import (
    Equilibrium,
    StabilityReport,
    Verdict,
    equilibria,
    numeric_jacobian,
    scalar_stability_test,
    tribonacci_system_spectrum,
)
from .system import (
    InitialConditions,
    Trajectory,
    closed_form_scalar,
    closed_form_solution,
    convergence_check,
    forbidden_set_scan,
    iterate_system,
    specialize,
    uv_lift,
)
