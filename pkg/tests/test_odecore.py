"""Integrator oracles: constant-potential closed forms, scaling, kernel."""

import math

import numpy as np
import pytest

from reggespec import (
    DEFAULT_STEPS,
    OutOfDomain,
    Potential,
    ReggeProblem,
    ValidationError,
    kernel_K,
    solve_phi,
    solve_sc,
    solve_y,
    solve_y_lambda_derivative,
    solve_y_trajectory,
    transform_rep_s,
)


def _const_problem(c, a=1.0, alpha0=2.0, beta0=0.7, alpha=1.5, beta=-0.3):
    return ReggeProblem(a=a, alpha0=alpha0, beta0=beta0, alpha=alpha,
                        beta=beta, potential=Potential.constant(c, a))


def _omega(lam, c):
    return np.sqrt(lam.astype(complex) ** 2 - c)


def _sin_over(w, x):
    # sin(wx)/w with the w -> 0 limit
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=complex)
    small = np.abs(w) < 1e-8
    out[~small] = np.sin(w[~small] * x) / w[~small]
    out[small] = x * (1.0 - (w[small] * x) ** 2 / 6.0)
    return out


def _lam_grid(rmax=20.0, imax=5.0):
    res = np.linspace(-rmax, rmax, 17)
    ims = np.linspace(-imax, imax, 5)
    lam = (res[:, None] + 1j * ims[None, :]).reshape(-1)
    return lam[np.abs(lam) <= rmax]


def test_constant_potential_closed_forms():
    """s, c, y, phi against the sqrt(lam^2 - c) trigonometric forms.

    The acceptance tolerance is 1e-8 absolute over |lam| <= 20,
    |Im lam| <= 5; at that height the states reach ~e^5, so the mesh
    is doubled twice beyond the default to buy the headroom.
    """
    for c in (1.0, 0.7 - 0.4j):
        p = _const_problem(c)
        lam = _lam_grid()
        w = _omega(lam, c)
        for x in (0.35, 1.0):
            s_ex = _sin_over(w, x)
            ds_ex = np.cos(w * x)
            c_ex = np.cos(w * x) + p.beta0 * _sin_over(w, x)
            dc_ex = -w * np.sin(w * x) + p.beta0 * np.cos(w * x)
            s, ds, cc, dc = solve_sc(p, lam, x=x, nsteps=16384)
            assert np.abs(s - s_ex).max() < 1e-8
            assert np.abs(ds - ds_ex).max() < 1e-8
            assert np.abs(cc - c_ex).max() < 1e-8
            assert np.abs(dc - dc_ex).max() < 1e-8

            coef = p.beta0 + 1j * p.alpha0 * lam
            y_ex = np.cos(w * x) + coef * _sin_over(w, x)
            st = solve_y(p, lam, x=x, nsteps=16384)
            assert np.abs(st.value - y_ex).max() < 1e-8

        span = p.a - 0.35
        phi_ex = (np.cos(w * span)
                  + (1j * p.alpha * lam + p.beta) * _sin_over(w, span))
        ph = solve_phi(p, lam, x=0.35, nsteps=16384)
        assert np.abs(ph.value - phi_ex).max() < 1e-8


def test_solve_y_is_c_plus_coef_s():
    p = _const_problem(0.9 + 0.2j)
    lam = np.array([0.5, 3.0 + 1.2j, -7.0 - 0.4j])
    s, ds, c, dc = solve_sc(p, lam)
    st = solve_y(p, lam)
    coef = 1j * p.alpha0 * lam  # c already carries beta0
    assert np.abs(st.value - (c + coef * s)).max() < 1e-10
    assert np.abs(st.derivative - (dc + coef * ds)).max() < 1e-10


def test_phi_right_boundary_values():
    p = _const_problem(0.4)
    lam = np.array([1.0 + 0.5j, -4.0])
    ph = solve_phi(p, lam, x=p.a)
    assert np.abs(ph.value - 1.0).max() < 1e-12
    assert np.abs(ph.derivative + (1j * p.alpha * lam + p.beta)).max() < 1e-12


def test_scaled_state_handles_large_imaginary_lambda():
    """At Im lam = 40 the raw solution is ~e^40; sigma absorbs it."""
    p = _const_problem(1.0)
    lam = np.array([3.0 + 40.0j])
    st = solve_y(p, lam)
    assert np.all(np.isfinite(st.u)) and np.all(np.isfinite(st.du))
    assert st.sigma[0] > 30.0
    w = _omega(lam, 1.0)
    coef = p.beta0 + 1j * p.alpha0 * lam
    y_ex = np.cos(w * 1.0) + coef * _sin_over(w, 1.0)
    rel = abs(st.value[0] - y_ex[0]) / abs(y_ex[0])
    assert rel < 1e-8


def test_lambda_derivative_matches_central_difference():
    p = _const_problem(0.6 - 0.1j)
    lam = np.array([2.0 + 0.7j, -5.5 + 0.1j])
    h = 1e-5
    st = solve_y_lambda_derivative(p, lam)
    up = solve_y(p, lam + h)
    dn = solve_y(p, lam - h)
    fd = (up.value - dn.value) / (2.0 * h)
    fdp = (up.derivative - dn.derivative) / (2.0 * h)
    assert np.abs(st.v * np.exp(st.sigma) - fd).max() < 1e-7
    assert np.abs(st.dv * np.exp(st.sigma) - fdp).max() < 1e-7


def test_trajectory_endpoint_agrees_with_solve_y():
    p = _const_problem(1.0)
    lam = np.array([1.5 + 0.3j])
    xs, traj, _ = solve_y_trajectory(p, lam)
    assert len(xs) == DEFAULT_STEPS + 1
    st = solve_y(p, lam)
    assert abs(traj[-1, 0] - st.value[0]) < 1e-10


def test_interior_evaluation_and_domain_guard():
    p = _const_problem(1.0)
    with pytest.raises(OutOfDomain):
        solve_y(p, np.array([1.0]), x=1.5)
    with pytest.raises(OutOfDomain):
        solve_phi(p, np.array([1.0]), x=-0.5)


def test_kernel_diagonal_constant_and_grid():
    """K(x, x) = (1/2) int_0^x q on every diagonal mesh point."""
    pc = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=1.0, beta=0.0,
                      potential=Potential.constant(1.0, 1.0))
    xs = np.linspace(0.0, 1.0, 129)
    pg = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=1.0, beta=0.0,
                      potential=Potential.grid(xs, 1.0, "linear"))
    for p in (pc, pg):
        ker = kernel_K(p, mesh_n=128)
        assert ker.diagonal_residual(p.potential) < 1e-6


def test_transform_rep_matches_direct_s():
    p = _const_problem(1.0, beta0=0.0)
    ker = kernel_K(p, mesh_n=256)
    lam = np.array([1.0, 4.0 + 0.5j, 9.0])
    for x in (0.5, 1.0):
        via_k = transform_rep_s(ker, lam, x)
        s, _, _, _ = solve_sc(p, lam, x=x)
        # kernel mesh h^2 error dominates the combined tolerance
        assert np.abs(via_k - s).max() < 1e-4


def test_kernel_mesh_floor():
    p = _const_problem(1.0)
    with pytest.raises(ValidationError):
        kernel_K(p, mesh_n=8)
