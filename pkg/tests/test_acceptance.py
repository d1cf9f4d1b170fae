"""Acceptance gate: one test per advertised guarantee, at the stated
tolerance.  Run with -v for the per-criterion pass/fail lines."""

import math
import time

import numpy as np

from reggespec import Potential, ReggeProblem
from reggespec.asympt import (
    appendix_P,
    asymptotic_model,
    recover_alphas,
    residual_tail,
)
from reggespec.charfn import (
    delta,
    delta_dot,
    delta_zero,
    delta_zero_dot,
    energy_identity_residual,
    identity_residual,
    robin_charfn,
)
from reggespec.model import Sign
from reggespec.odecore import (
    kernel_K,
    solve_phi,
    solve_sc,
    solve_y,
    transform_rep_s,
)
from reggespec.partialinv import (
    critical_diagnostics,
    density_check,
    f_mismatch_logabs,
    indicator_estimate,
    weighted_deviation,
)
from reggespec.reconstruct import (
    ZeroSet,
    delta0_from_pair,
    even_delta_minus,
    hadamard_build,
)
from reggespec.roots import (
    Rectangle,
    Spectrum,
    SpectrumEntry,
    compute_spectrum,
    find_zeros,
    imaginary_axis_zeros,
    interlace_and_signs,
    newton_refine,
    pair_symmetry_check,
)

from conftest import below_axis_problem, closed_form_problem, grid_problem

LN6 = math.log(6.0)


def _ok(n: int, msg: str) -> None:
    print(f"criterion {n:02d} PASS: {msg}")


def test_criterion_01_zero_potential_exact_spectrum():
    t0 = time.monotonic()
    p = closed_form_problem()
    spec = compute_spectrum(p, Sign.PLUS, Rectangle(-7.0, 7.0, -1.0, 2.0))
    c = 0.5j * LN6
    expect = [0.0 + 0j, c, math.pi + c, -math.pi + c,
              2 * math.pi + c, -2 * math.pi + c]
    assert len(spec.entries) == 6
    got = spec.lambdas()
    err = max(np.abs(got - e).min() for e in expect)
    assert err <= 1e-8
    elapsed = time.monotonic() - t0
    assert elapsed < 30.0
    _ok(1, f"6 eigenvalues, max error {err:.2e}, {elapsed:.1f}s")


def test_criterion_02_product_identity_suite():
    rng = np.random.default_rng(42)
    worst = 0.0
    runs = [(101, 2.0), (102, 2.0), (103, 0.5), (104, 2.0), (105, 0.0)]
    for seed, alpha0 in runs:
        p = grid_problem(seed, complex_q=(seed % 2 == 0), alpha0=alpha0)
        lam = 20.0 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(
            2j * math.pi * rng.uniform(0, 1, 100))
        res = np.abs(identity_residual(p, lam))
        quad = np.abs(4.0 * p.alpha * p.alpha0 * lam ** 2)
        pp = np.abs(delta(p, Sign.PLUS, lam) * delta(p, Sign.PLUS, -lam))
        pm = np.abs(delta(p, Sign.MINUS, lam) * delta(p, Sign.MINUS, -lam))
        scale = np.maximum(1.0, np.maximum(quad, np.maximum(pp, pm)))
        worst = max(worst, float((res / scale).max()))
    assert worst <= 1e-8
    _ok(2, f"5 potentials x 100 points, worst relative residual {worst:.2e}")


def test_criterion_03_energy_identity():
    rng = np.random.default_rng(7)
    p = grid_problem(106)
    lam = 8.0 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(
        2j * math.pi * rng.uniform(0, 1, 20))
    res = np.abs(energy_identity_residual(p, lam))
    t1 = np.abs(delta(p, Sign.PLUS, lam) * delta_zero_dot(p, lam))
    t2 = np.abs(delta_dot(p, Sign.PLUS, lam) * delta_zero(p, lam))
    t3 = np.abs(p.alpha * delta_zero(p, lam) ** 2)
    scale = np.maximum(1.0, np.maximum(t1, np.maximum(t2, t3)))
    worst = float((res / scale).max())
    assert worst <= 1e-6

    pc = closed_form_problem()
    piv = np.array([math.pi / 2])
    rhs = (delta(pc, Sign.PLUS, piv)[0] * delta_zero_dot(pc, piv)[0]
           - delta_dot(pc, Sign.PLUS, piv)[0] * delta_zero(pc, piv)[0]
           + 1j * pc.alpha * delta_zero(pc, piv)[0] ** 2 + 1j * pc.alpha0)
    doc_err = abs(rhs - (-1.5 * math.pi + 4j))
    assert doc_err <= 1e-9
    assert abs(energy_identity_residual(pc, piv)[0]) <= 1e-9
    _ok(3, f"worst relative residual {worst:.2e}; "
           f"documented value error {doc_err:.2e}")


def test_criterion_04_constant_potential_closed_forms():
    re = np.linspace(-20.0, 20.0, 9)
    im = np.linspace(-5.0, 5.0, 5)
    lam = (re[:, None] + 1j * im[None, :]).ravel()
    lam = lam[np.abs(lam) <= 20.0]
    worst = 0.0
    for cval in (1.0, 0.7 - 0.4j):
        p = ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=3.0, beta=2.0,
                         potential=Potential.constant(cval, 1.0),
                         real_data=False)
        w = np.sqrt(lam ** 2 - cval + 0j)
        for x in (0.6, 1.0):
            s_ex = np.sin(w * x) / w
            ds_ex = np.cos(w * x)
            c_ex = np.cos(w * x) + p.beta0 * s_ex
            dc_ex = -w * np.sin(w * x) + p.beta0 * ds_ex
            s, ds, c, dc = solve_sc(p, lam, x=x, nsteps=16384)
            for got, ex in ((s, s_ex), (ds, ds_ex), (c, c_ex), (dc, dc_ex)):
                worst = max(worst, float(np.abs(got - ex).max()))
            y = solve_y(p, lam, x=x, nsteps=16384)
            y_ex = c_ex + 1j * p.alpha0 * lam * s_ex
            dy_ex = dc_ex + 1j * p.alpha0 * lam * ds_ex
            worst = max(worst, float(np.abs(y.value - y_ex).max()))
            worst = max(worst, float(np.abs(y.derivative - dy_ex).max()))
        xp = 0.25
        ph = solve_phi(p, lam, x=xp, nsteps=16384)
        ph_ex = (np.cos(w * (xp - 1.0))
                 - (1j * p.alpha * lam + p.beta) * np.sin(w * (xp - 1.0)) / w)
        dph_ex = (-w * np.sin(w * (xp - 1.0))
                  - (1j * p.alpha * lam + p.beta) * np.cos(w * (xp - 1.0)))
        worst = max(worst, float(np.abs(ph.value - ph_ex).max()))
        worst = max(worst, float(np.abs(ph.derivative - dph_ex).max()))
    assert worst <= 1e-8
    _ok(4, f"worst absolute deviation {worst:.2e} over {lam.size} points")


def test_criterion_05_kernel_diagonal_and_transform():
    x = np.linspace(0.0, 1.0, 33)
    worst_diag = 0.0
    for pot in (Potential.constant(1.0, 1.0),
                Potential.grid(x.copy(), 1.0, "linear")):
        p = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=1.5, beta=0.3,
                         potential=pot, real_data=True)
        K = kernel_K(p, mesh_n=128)
        worst_diag = max(worst_diag, K.diagonal_residual(pot))
    assert worst_diag <= 1e-6

    p = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=1.5, beta=0.3,
                     potential=Potential.constant(1.0, 1.0), real_data=True)
    K = kernel_K(p, mesh_n=256)
    lam = np.array([1.0, 3.0 + 0.5j, 6.0 - 0.3j])
    via_kernel = transform_rep_s(K, lam, 0.7)
    s, *_ = solve_sc(p, lam, x=0.7)
    worst_rep = float(np.abs(via_kernel - s).max())
    assert worst_rep <= 1e-4
    _ok(5, f"diagonal residual {worst_diag:.2e}; "
           f"representation deviation {worst_rep:.2e}")


def test_criterion_06_tail_constant_from_appendix_arithmetic():
    p = ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=3.0, beta=2.0,
                     potential=Potential.constant(1.0, 1.0), real_data=True)
    m = asymptotic_model(p)
    # the 1/k constant recomputed from the boundary-data arithmetic
    sigma1, sigma2 = p.alpha0 + p.alpha, 1.0 + p.alpha * p.alpha0
    P_arith = appendix_P(sigma1, sigma2, complex(m.M_plus), complex(m.N_plus))
    assert abs(P_arith - m.P) <= 1e-14
    assert abs(P_arith - (-1.0 / (12.0 * math.pi))) <= 1e-14

    ks = list(range(5, 41))
    seeds = np.array([m.predicted(Sign.PLUS, k) for k in ks])
    f = lambda z: delta(p, Sign.PLUS, z)
    fp = lambda z: delta_dot(p, Sign.PLUS, z)
    z, res, okc = newton_refine(f, fp, seeds)
    assert okc.all()
    assert np.abs(z - seeds).max() < 0.4  # nobody jumped to a neighbour
    sp = Spectrum(entries=[SpectrumEntry(k=k, lam=complex(zz),
                                         multiplicity=1, residual=float(r))
                           for k, zz, r in zip(ks, z, res)],
                  sign=Sign.PLUS, region=Rectangle(-1, 130, -1, 2))
    pairs = residual_tail(sp, m, Sign.PLUS, min_abs_k=5)
    beta = {k: abs(b) for k, b in pairs}
    first = max(beta[k] for k in ks[:18])
    last = max(beta[k] for k in ks[18:])
    assert last < first
    assert beta[40] <= 0.05
    _ok(6, f"|beta_k| falls {first:.3g} -> {last:.3g} "
           f"across k=5..40; |beta_40| = {beta[40]:.3g}")


def test_criterion_07_lower_half_plane_structure():
    p = below_axis_problem()
    spec = compute_spectrum(p, Sign.PLUS, Rectangle(-10.3, 10.3, -2.0, 2.0))
    low = [e.lam for e in spec.entries
           if e.lam.imag < -1e-9 and abs(e.lam) <= 10.0]
    assert len(low) == 1
    err = abs(low[0] - (-1.231j))
    assert err <= 0.01

    taus = imaginary_axis_zeros(p, 3.0)
    rep = interlace_and_signs(p, taus)
    assert rep.ok
    assert rep.sign_values_dot[0] < 0.0
    assert rep.sign_values_zero[0] > 0.0

    sym_ok, defect = pair_symmetry_check(spec)
    assert sym_ok
    _ok(7, f"single zero at {low[0]:.6f} (offset {err:.2e}); "
           f"sign checks pass; mirror defect {defect:.2e}")


def test_criterion_08_even_potential_pipeline():
    x = np.linspace(0.0, 1.0, 129)
    worst_rel = 0.0
    worst_root = 0.0
    for pot in (Potential.constant(0.5, 1.0),
                Potential.grid(np.cos(2.0 * math.pi * x), 1.0, "cubic")):
        p = ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=2.0, beta=1.0,
                         potential=pot, real_data=True)
        dplus = lambda lam, p=p: delta(p, Sign.PLUS, lam)
        path = np.linspace(0.0, 4.0 * math.pi, 257)
        ev = even_delta_minus(dplus, p.alpha, path)
        direct = delta(p, Sign.MINUS, path.astype(complex))
        rel = (np.abs(ev.values - direct)
               / np.maximum(1.0, np.abs(direct))).max()
        worst_rel = max(worst_rel, float(rel))

        zs = find_zeros(lambda z: delta_zero(p, z),
                        lambda z: delta_zero_dot(p, z),
                        Rectangle(-12.0, 12.0, -1.5, 1.5))
        locs = np.array([z for z, _, _ in zs])
        d0_pair = np.atleast_1d(
            delta0_from_pair(dplus, ev, p.alpha, locs))
        slope = np.abs(delta_zero_dot(p, locs))
        worst_root = max(worst_root,
                         float((np.abs(d0_pair) / slope).max()))
    assert worst_rel <= 1e-6
    assert worst_root <= 1e-6

    p0 = ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=2.0, beta=1.0,
                      potential=Potential.zero(1.0), real_data=True)
    ev0 = even_delta_minus(lambda lam: delta(p0, Sign.PLUS, lam), 2.0,
                           np.linspace(0.0, 4.0, 81))
    doc = abs(ev0(math.pi) - (-2.0))
    assert doc <= 1e-8
    _ok(8, f"branch recovery rel err {worst_rel:.2e}; interior roots "
           f"reproduced to {worst_root:.2e}; documented value err {doc:.2e}")


def test_criterion_09_two_spectra_consistency():
    x = np.linspace(0.0, 1.0, 65)
    problems = [
        ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=3.0, beta=2.0,
                     potential=Potential.zero(1.0), real_data=True),
        ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=2.0, beta=1.0,
                     potential=Potential.constant(0.5, 1.0), real_data=True),
        ReggeProblem(a=1.0, alpha0=1.6, beta0=0.4, alpha=1.5, beta=-0.8,
                     potential=Potential.grid(0.3 * np.sin(3 * x), 1.0,
                                              "cubic"), real_data=True),
    ]
    rect = Rectangle(-7.0, 7.0, -2.0, 2.0)
    worst = 0.0
    for p in problems:
        favg = lambda z, p=p: 0.5 * (delta(p, Sign.PLUS, z)
                                     + delta(p, Sign.MINUS, z))
        fdot = lambda z, p=p: 0.5 * (delta_dot(p, Sign.PLUS, z)
                                     + delta_dot(p, Sign.MINUS, z))
        fdir = lambda z, p=p: robin_charfn(p, z)
        za = sorted((z for z, _, _ in find_zeros(favg, fdot, rect)),
                    key=lambda z: (round(z.real, 6), z.imag))
        zd = sorted((z for z, _, _ in find_zeros(fdir, fdot, rect)),
                    key=lambda z: (round(z.real, 6), z.imag))
        assert len(za) == len(zd) > 0
        worst = max(worst, max(abs(a - d) for a, d in zip(za, zd)))
    assert worst <= 1e-8
    _ok(9, f"3 problems, max zero displacement {worst:.2e}")


def test_criterion_10_hadamard_reconstruction():
    cos_zs = ZeroSet(zeros=[(s * (k - 0.5) * math.pi, 1)
                            for k in range(1, 7001) for s in (1.0, -1.0)],
                     order_at_origin=1)
    mc = hadamard_build(cos_zs, "c1", 1.0, N=10000)
    assert abs(mc.b) <= 1e-3
    assert abs(mc.c - 1.0) <= 1e-3

    # the plus-sign function of the zero-potential problem, made entire
    # of finite type by dividing out i: zeros on a complex-shifted lattice
    dz = ZeroSet(zeros=[(m * math.pi + 0.5j * LN6, 1)
                        for m in range(-7000, 7001)],
                 order_at_origin=1)
    md = hadamard_build(dz, "c1", 5.0, N=10000)
    xs = np.linspace(-5.0, 5.0, 101)
    exact = xs * (5.0 * np.cos(xs) + 7j * np.sin(xs))
    got = np.atleast_1d(md.eval(xs))
    rel = (np.abs(got - exact) / np.maximum(1.0, np.abs(exact))).max()
    assert rel <= 1e-3
    assert abs(md.b - 1.4j) < 1e-4
    _ok(10, f"z cos z: |b| = {abs(mc.b):.2e}, |c-1| = {abs(mc.c - 1):.2e}; "
            f"shifted lattice rebuild rel err {rel:.2e}")


def _twin_problems():
    x = np.linspace(0.0, 1.0, 257)
    q1 = 0.5 * np.cos(2.0 * x) + 0.1
    q2 = q1 + np.where(x < 0.3, 0.2 * np.sin(math.pi * x / 0.3), 0.0)
    mk = lambda q: ReggeProblem(
        a=1.0, alpha0=2.0, beta0=1.0, alpha=0.5, beta=2.0,
        potential=Potential.grid(q, 1.0, "cubic"), real_data=True)
    return mk(q1), mk(q2)


def _indexed_eigenvalues(p, model, sign, kmax):
    ks = [k for k in range(-kmax, kmax + 1)
          if model.case_sign > 0 or k != 0]
    seeds = np.array([model.predicted(sign, k) for k in ks])
    f = lambda z: delta(p, sign, z)
    fp = lambda z: delta_dot(p, sign, z)
    z, _, okc = newton_refine(f, fp, seeds)
    out = []
    for k, zz, o in zip(ks, z, okc):
        if not o or abs(zz) < 1e-9:
            continue
        if any(abs(zz - w) < 1e-8 * (1 + abs(zz)) for _, w in out[-3:]):
            continue
        out.append((k, complex(zz)))
    return out


def _nearest_subset(pairs, model, sign, b_side):
    lams = np.array([w for _, w in pairs])
    reach = np.abs(lams).max() - 0.5 * math.pi
    subset, taken = [], set()
    j = 1 if model.case_sign < 0 else 0
    sign_list = []
    for jj in range(-40, 41):
        if model.case_sign < 0 and jj == 0:
            continue
        target = model.a * model.mu(sign, jj) / b_side
        if abs(target) > reach or abs(target) < 1e-9:
            continue
        i = int(np.argmin(np.abs(lams - target)))
        if i in taken:
            continue
        taken.add(i)
        subset.append((jj, complex(lams[i])))
    return subset


def test_criterion_11_partial_inverse_diagnostics():
    p1, p2 = _twin_problems()
    b = 0.3
    est = indicator_estimate(
        lambda z: f_mismatch_logabs(p1, p2, b, z), logabs=True)
    bound = 2.0 * b * np.abs(np.sin(est.angles))
    excess = float((est.h - bound).max())
    assert len(est.angles) == 32
    assert est.radii.max() <= 200.0
    assert np.all(est.h <= bound + 0.1)

    model = asymptotic_model(p1)
    worst_density = 0.0
    full = {}
    for sign in (Sign.PLUS, Sign.MINUS):
        pairs = _indexed_eigenvalues(p1, model, sign, kmax=105)
        full[sign] = pairs
        zs = ZeroSet(zeros=[(w, 1) for _, w in pairs])
        rep = density_check(zs, 1.0,
                            np.array([25.0, 50.0, 100.0]) * math.pi)
        worst_density = max(worst_density, abs(rep.ratios[-1] - 1.0))
    assert worst_density <= 0.1

    sub_p = _nearest_subset(full[Sign.PLUS], model, Sign.PLUS, b)
    sub_m = _nearest_subset(full[Sign.MINUS], model, Sign.MINUS, b)
    dev = weighted_deviation(sub_p, sub_m, b, b, model)
    assert math.isfinite(dev.total)
    t = np.array([50.0, 100.0, 200.0, 400.0, 800.0, 1600.0])
    diag = critical_diagnostics(p1, p2, b, b, (sub_p, sub_m), t)
    mags = np.abs(diag.E0)
    assert diag.decreasing
    _ok(11, f"indicator excess {excess:+.3f} (allowed +0.1); density off by "
            f"{worst_density:.3f} at r = 100 pi; E0 falls "
            f"{mags[0]:.2e} -> {mags[-1]:.2e}")


def test_criterion_12_coupling_recovery_round_trip():
    rng = np.random.default_rng(99)
    done = 0
    worst = 0.0
    while done < 20:
        alpha0 = float(rng.uniform(0.05, 3.0))
        alpha = float(rng.uniform(0.05, 3.0))
        if abs(alpha0 - 1.0) < 0.05 or abs(alpha - 1.0) < 0.05:
            continue
        p = ReggeProblem(a=1.0, alpha0=alpha0, beta0=0.0, alpha=alpha,
                         beta=0.0, potential=Potential.zero(1.0),
                         real_data=True)
        m = asymptotic_model(p)
        a0, al = recover_alphas(m.P0_plus, m.P0_minus,
                                1 if alpha0 > 1.0 else -1, m.case_sign)
        worst = max(worst, abs(a0 - alpha0), abs(al - alpha))
        done += 1
    assert worst <= 1e-10
    _ok(12, f"20 draws, worst recovery error {worst:.2e}")
