"""Shared problem builders for the test suite.

Plain functions rather than fixtures: the problems are cheap to build
and the call sites read better when the parameters are visible.
"""

import numpy as np

from reggespec import Potential, ReggeProblem


def closed_form_problem() -> ReggeProblem:
    """a=1, q=0, alpha0=2, alpha=3, beta0=beta=0.

    Eigenvalues of the plus problem in [-7,7]x[-1,2] are known exactly:
    {0, i ln6/2, +-pi + i ln6/2, +-2pi + i ln6/2}.
    """
    return ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=3.0, beta=0.0,
                        potential=Potential.zero(1.0), real_data=True)


def worked_problem() -> ReggeProblem:
    """a=1, q=0, alpha0=2, beta0=1, alpha=3, beta=2.

    The asymptotic constants of this problem are documented:
    P0_plus = ln 6, P0_minus = ln(3/2), P = -7/(12 pi), case sign -1.
    """
    return ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=3.0, beta=2.0,
                        potential=Potential.zero(1.0), real_data=True)


def even_zero_problem() -> ReggeProblem:
    """alpha0 = alpha = 2, beta0 = beta = 1, q = 0: Delta_minus(pi) = -2."""
    return ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=2.0, beta=1.0,
                        potential=Potential.zero(1.0), real_data=True)


def below_axis_problem() -> ReggeProblem:
    """beta = -5 real-data example with one zero near -1.232i."""
    return ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=3.0, beta=-5.0,
                        potential=Potential.zero(1.0), real_data=True)


def grid_problem(seed: int, n: int = 33, complex_q: bool = False,
                 alpha0: float = 2.0, real_data: bool = False) -> ReggeProblem:
    rng = np.random.default_rng(seed)
    q = rng.uniform(-1.0, 1.0, n)
    if complex_q:
        q = q + 1j * rng.uniform(-1.0, 1.0, n)
    return ReggeProblem(a=1.0, alpha0=alpha0, beta0=0.4, alpha=1.5, beta=-0.8,
                        potential=Potential.grid(q, 1.0, "cubic"),
                        real_data=real_data)
