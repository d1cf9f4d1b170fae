"""Zero location in rectangles by the argument principle.

Winding numbers are computed from adaptively refined boundary samples
(phase increments kept below pi/2), rectangles are quadrisected until
each cell isolates one zero counted with multiplicity, and zeros are
polished by (multiplicity-aware) Newton iteration.  Evaluators must be
numpy-vectorised callables of a complex argument.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from .charfn import delta, delta_dot, delta_zero
from .odecore import DEFAULT_STEPS
from .errors import (
    BoundaryZero,
    InconsistentInput,
    InterlacingViolation,
    MultiplicityCap,
    NewtonDivergence,
    NoConvergence,
    SignViolation,
)
from .model import ReggeProblem, Sign

__all__ = [
    "Rectangle",
    "SpectrumEntry",
    "Spectrum",
    "winding_count",
    "newton_refine",
    "find_zeros",
    "compute_spectrum",
    "index_eigenvalues",
    "imaginary_axis_zeros",
    "interlace_and_signs",
    "InterlaceReport",
    "pair_symmetry_check",
    "write_spectrum_csv",
]


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise InconsistentInput("rectangle must have positive extent")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max),
                       0.5 * (self.im_min + self.im_max))

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.re_max - self.re_min,
                              self.im_max - self.im_min))

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.re_min - margin <= z.real <= self.re_max + margin
                and self.im_min - margin <= z.imag <= self.im_max + margin)

    def quadrisect(self) -> list["Rectangle"]:
        cr = 0.5 * (self.re_min + self.re_max)
        ci = 0.5 * (self.im_min + self.im_max)
        return [Rectangle(self.re_min, cr, self.im_min, ci),
                Rectangle(cr, self.re_max, self.im_min, ci),
                Rectangle(self.re_min, cr, ci, self.im_max),
                Rectangle(cr, self.re_max, ci, self.im_max)]

    def expanded(self, frac: float) -> "Rectangle":
        dw = frac * (self.re_max - self.re_min)
        dh = frac * (self.im_max - self.im_min)
        return Rectangle(self.re_min - dw, self.re_max + dw,
                         self.im_min - dh, self.im_max + dh)


@dataclass
class SpectrumEntry:
    k: int | None
    lam: complex
    multiplicity: int
    residual: float


@dataclass
class Spectrum:
    entries: list[SpectrumEntry]
    sign: Sign
    region: Rectangle

    def lambdas(self) -> np.ndarray:
        return np.array([e.lam for e in self.entries], dtype=complex)

    def by_index(self) -> dict:
        return {e.k: e for e in self.entries}


# ---- winding numbers ------------------------------------------------------

def _boundary_params(rect: Rectangle, per_edge: int) -> np.ndarray:
    # parameter t in [0, 4), one unit per edge, counterclockwise
    return np.concatenate([e + np.arange(per_edge) / per_edge for e in range(4)])


def _param_to_point(rect: Rectangle, t: np.ndarray) -> np.ndarray:
    t = np.mod(t, 4.0)
    w = rect.re_max - rect.re_min
    h = rect.im_max - rect.im_min
    z = np.empty(t.shape, dtype=complex)
    e0 = t < 1.0
    e1 = (t >= 1.0) & (t < 2.0)
    e2 = (t >= 2.0) & (t < 3.0)
    e3 = t >= 3.0
    z[e0] = rect.re_min + w * t[e0] + 1j * rect.im_min
    z[e1] = rect.re_max + 1j * (rect.im_min + h * (t[e1] - 1.0))
    z[e2] = rect.re_max - w * (t[e2] - 2.0) + 1j * rect.im_max
    z[e3] = rect.re_min + 1j * (rect.im_max - h * (t[e3] - 3.0))
    return z


class _BoundaryZeroMark(Exception):
    pass


def _initial_per_edge(rect: Rectangle, per_edge, samples_per_unit: float) -> int:
    edge = max(rect.re_max - rect.re_min, rect.im_max - rect.im_min)
    auto = int(np.ceil(edge * samples_per_unit))
    base = 16 if per_edge is None else int(per_edge)
    return max(8, base, auto)


def _winding_multi(f, rects: list[Rectangle], per_edge=None,
                   samples_per_unit: float = 1.0, max_rounds: int = 16,
                   floor_rel: float = 1e-13):
    """Winding numbers for several rectangles with shared f batches.

    One call to f per refinement round evaluates the pending boundary
    points of every rectangle at once.  Returns a list whose entries are
    either an int count or a _BoundaryZeroMark instance.
    """
    state = []
    for r in rects:
        ts = _boundary_params(r, _initial_per_edge(r, per_edge, samples_per_unit))
        state.append({"rect": r, "ts": ts, "fs": None, "done": None,
                      "new_ts": ts})
    for _ in range(max_rounds + 1):
        chunks = [st["new_ts"] for st in state
                  if st["done"] is None and len(st["new_ts"])]
        zs = [(_param_to_point(st["rect"], st["new_ts"]))
              for st in state if st["done"] is None and len(st["new_ts"])]
        if zs:
            allpts = np.concatenate(zs)
            allvals = np.asarray(f(allpts), dtype=complex)
            off = 0
            for st in state:
                if st["done"] is None and len(st["new_ts"]):
                    nnew = len(st["new_ts"])
                    vals = allvals[off:off + nnew]
                    off += nnew
                    if st["fs"] is None:
                        st["fs"] = vals
                    else:
                        st["ts"] = np.concatenate([st["ts"], st["new_ts"]])
                        st["fs"] = np.concatenate([st["fs"], vals])
                        order = np.argsort(st["ts"], kind="stable")
                        st["ts"] = st["ts"][order]
                        st["fs"] = st["fs"][order]
                    st["new_ts"] = np.empty(0)
        any_active = False
        for st in state:
            if st["done"] is not None:
                continue
            fs = st["fs"]
            scale = np.max(np.abs(fs))
            if scale == 0.0 or np.any(np.abs(fs) < floor_rel * scale):
                st["done"] = _BoundaryZeroMark(
                    f"boundary magnitude below {floor_rel:g} of scale")
                continue
            dphi = np.angle(np.roll(fs, -1) / fs)
            bad = np.abs(dphi) >= 0.5 * np.pi
            if not np.any(bad):
                total = dphi.sum() / (2.0 * np.pi)
                n = int(np.rint(total))
                if abs(total - n) > 0.2:
                    st["done"] = _BoundaryZeroMark(
                        f"winding sum {total:.4f} not near an integer")
                else:
                    st["done"] = n
                continue
            ts_next = np.roll(st["ts"], -1)
            ts_next[-1] += 4.0
            st["new_ts"] = np.mod(0.5 * (st["ts"][bad] + ts_next[bad]), 4.0)
            any_active = True
        if not any_active:
            break
    out = []
    for st in state:
        if st["done"] is None:
            st["done"] = _BoundaryZeroMark(
                "phase increments still >= pi/2 after max refinement; "
                "a zero sits on or next to the rectangle boundary")
        out.append(st["done"])
    return out


def winding_count(f, rect: Rectangle, per_edge: int | None = None,
                  samples_per_unit: float = 1.0, max_rounds: int = 16,
                  floor_rel: float = 1e-13) -> int:
    """Number of zeros of f inside rect, counted with multiplicity.

    Boundary samples are refined until consecutive phase increments stay
    below pi/2.  Raises BoundaryZero when a sample magnitude collapses
    relative to the boundary scale (a zero on or next to the contour)
    or when refinement stalls the same way.
    """
    res = _winding_multi(f, [rect], per_edge=per_edge,
                         samples_per_unit=samples_per_unit,
                         max_rounds=max_rounds, floor_rel=floor_rel)[0]
    if isinstance(res, _BoundaryZeroMark):
        raise BoundaryZero(str(res))
    return res


def _windings_with_retry(f, rects: list[Rectangle], perturb: float = 1e-3,
                         tries: int = 5, **kw):
    """Batched winding counts, expanding rectangles that hit BoundaryZero.

    Returns [(possibly expanded rect, count), ...] in input order.
    """
    current = list(rects)
    attempts = [0] * len(rects)
    out: list = [None] * len(rects)
    pending = list(range(len(rects)))
    while pending:
        res = _winding_multi(f, [current[i] for i in pending], **kw)
        nxt = []
        for i, r in zip(pending, res):
            if isinstance(r, _BoundaryZeroMark):
                if attempts[i] >= tries:
                    raise BoundaryZero(str(r))
                attempts[i] += 1
                current[i] = current[i].expanded(perturb * attempts[i])
                nxt.append(i)
            else:
                out[i] = (current[i], r)
        pending = nxt
    return out


# ---- Newton refinement ----------------------------------------------------

def newton_refine(f, fprime, z0, mult=1, tol: float = 1e-12,
                  max_iter: int = 50):
    """Multiplicity-aware Newton: z -> z - mult * f/f'.

    Vectorised over an array of starting points; mult may be a scalar or
    a matching integer array.  Returns (z, residual, converged) arrays;
    convergence means |f| <= tol or the step size stagnated at rounding
    level with a small residual.  At least one step is always taken so a
    multiple zero is polished past the |f| <= tol shell around it.
    """
    z = np.atleast_1d(np.asarray(z0, dtype=complex)).copy()
    m = np.broadcast_to(np.asarray(mult, dtype=float), z.shape)
    res = np.full(z.shape, np.inf)
    done = np.zeros(z.shape, dtype=bool)
    stag = np.zeros(z.shape, dtype=bool)
    for _ in range(max_iter):
        active = ~(done | stag)
        if not np.any(active):
            break
        fz = np.asarray(f(z), dtype=complex)
        fpz = np.asarray(fprime(z), dtype=complex)
        ok = np.abs(fpz) > 0.0
        step = np.zeros_like(z)
        np.divide(m * fz, fpz, out=step, where=active & ok)
        z = z - step
        fz_new = np.asarray(f(z), dtype=complex)
        res = np.abs(fz_new)
        tiny = np.abs(step) <= 1e-15 * (1.0 + np.abs(z))
        done |= (res <= tol) & tiny
        done |= (res <= tol) & (m == 1)
        stag |= tiny & ~done
    converged = done | (res <= np.sqrt(tol))
    bad = ~np.isfinite(z)
    converged &= ~bad
    return z, res, converged


# ---- zero search ----------------------------------------------------------

def find_zeros(f, fprime, rect: Rectangle, tol: float = 1e-12,
               multiplicity_cap: int = 4, min_cell: float | None = None,
               perturb: float = 1e-3, perturb_tries: int = 5,
               newton_max: int = 50, samples_per_unit: float = 1.0):
    """All zeros of f in rect as a list of (location, multiplicity, residual).

    Quadrisection by winding count, processed breadth-first so every
    generation of sub-rectangles shares f batches; isolating cells then
    seed one vectorised Newton run.  Cells that stop separating below
    min_cell are treated as genuine multiple zeros up to multiplicity_cap.
    Zeros recovered twice through overlapping perturbed cells merge when
    closer than 10 * min_cell (multiplicity by max, not sum).
    """
    if min_cell is None:
        min_cell = 1e-6 * max(1.0, rect.diameter)
    wind_kw = dict(perturb=perturb, tries=perturb_tries,
                   samples_per_unit=samples_per_unit)

    pending = _windings_with_retry(f, [rect], **wind_kw)
    isolating: list[tuple[Rectangle, int]] = []
    while pending:
        to_split: list[Rectangle] = []
        for cell, count in pending:
            if count == 0:
                continue
            if count == 1 or cell.diameter <= min_cell:
                if count > multiplicity_cap:
                    raise MultiplicityCap(
                        f"winding {count} exceeds multiplicity cap "
                        f"{multiplicity_cap} in cell around {cell.center}")
                isolating.append((cell, count))
            else:
                to_split.extend(cell.quadrisect())
        pending = _windings_with_retry(f, to_split, **wind_kw) if to_split else []

    found: list[tuple[complex, int, float]] = []
    while isolating:
        cells = [c for c, _ in isolating]
        counts = np.array([m for _, m in isolating])
        z0 = np.array([c.center for c in cells], dtype=complex)
        z, res, ok = newton_refine(f, fprime, z0, mult=counts, tol=tol,
                                   max_iter=newton_max)
        retry: list[tuple[Rectangle, int]] = []
        for i, (cell, m) in enumerate(isolating):
            margin = 0.05 * cell.diameter + 10 * min_cell
            if ok[i] and cell.contains(complex(z[i]), margin=margin):
                found.append((complex(z[i]), int(m), float(res[i])))
            elif cell.diameter > min_cell:
                subs = _windings_with_retry(f, cell.quadrisect(), **wind_kw)
                retry.extend((c, n) for c, n in subs if n > 0)
            else:
                raise NewtonDivergence(
                    f"Newton failed from {cell.center} "
                    f"(residual {res[i]:.3e}, landed at {z[i]})")
        isolating = retry

    # cluster against every accepted zero, not just sort-neighbours: a
    # zero on a quadrisection cut reappears in two expanded siblings
    merged: list[tuple[complex, int, float]] = []
    for z, m, r in sorted(found, key=lambda t: (t[0].real, t[0].imag)):
        for j, (zp, mp, rp) in enumerate(merged):
            if abs(z - zp) < 10 * min_cell:
                keep = (z, r) if r < rp else (zp, rp)
                merged[j] = (keep[0], max(mp, m), keep[1])
                break
        else:
            merged.append((z, m, r))
    return merged


def compute_spectrum(p: ReggeProblem, sign: Sign, rect: Rectangle,
                     tol: float = 1e-12, nsteps: int | None = None,
                     search_nsteps: int | None = None,
                     model=None) -> Spectrum:
    """Eigenvalues of the chosen characteristic function inside rect.

    The subdivision search runs on a coarsened integrator mesh (winding
    counts and Newton seeds tolerate ~1e-6 relative error), then every
    zero is re-polished at the full mesh so positions and residuals are
    reported at full accuracy.
    """
    full = DEFAULT_STEPS if nsteps is None else int(nsteps)
    if search_nsteps is None:
        search_nsteps = max(512, full // 8)
    search_nsteps = min(int(search_nsteps), full)
    f_s = lambda z: delta(p, sign, z, nsteps=search_nsteps)
    fp_s = lambda z: delta_dot(p, sign, z, nsteps=search_nsteps)
    spu = max(1.0, 0.8 * p.a)
    zs = find_zeros(f_s, fp_s, rect, tol=tol, samples_per_unit=spu)
    if search_nsteps < full and zs:
        f = lambda z: delta(p, sign, z, nsteps=full)
        fp = lambda z: delta_dot(p, sign, z, nsteps=full)
        z0 = np.array([z for z, _, _ in zs], dtype=complex)
        mults = np.array([m for _, m, _ in zs])
        z, res, ok = newton_refine(f, fp, z0, mult=mults, tol=tol)
        zs = [(complex(z[i]) if ok[i] else zs[i][0], int(mults[i]),
               float(res[i])) for i in range(len(zs))]
    entries = [SpectrumEntry(k=None, lam=z, multiplicity=m, residual=r)
               for z, m, r in zs]
    spec = Spectrum(entries=entries, sign=sign, region=rect)
    if model is not None:
        index_eigenvalues(spec, model, sign)
    return spec


# ---- lattice indexing -----------------------------------------------------

def index_eigenvalues(spec: Spectrum, model, sign: Sign) -> Spectrum:
    """Assign lattice indices k by nearest asymptotic main term.

    Matches zeros to the lattice mu_k (which already carries the
    iP0/(2a) shift) by minimum total distance, so asymptotic zeros snap
    to their k while low-lying zeros take the remaining nearby indices
    in order.  A degenerate model (no lattice) falls back to ordinal
    indexing in (Re, Im) sort order.
    """
    entries = sorted(spec.entries, key=lambda e: (e.lam.real, e.lam.imag))
    spec.entries = entries
    if model is None or model.case_sign == 0:
        for i, e in enumerate(entries):
            e.k = i
        return spec

    if not entries:
        return spec
    lams = np.array([e.lam for e in entries])
    a = model.a
    lo = int(np.floor(lams.real.min() * a / np.pi)) - 3
    hi = int(np.ceil(lams.real.max() * a / np.pi)) + 3
    ks = [k for k in range(lo, hi + 1) if _k_valid(model.case_sign, k)]
    mus = np.array([model.mu(sign, k) for k in ks])
    cost = np.abs(lams[:, None] - mus[None, :])
    row, col = linear_sum_assignment(cost)
    for i, j in zip(row, col):
        entries[i].k = ks[j]
    return spec


def _k_valid(case_sign: int, k: int) -> bool:
    if case_sign > 0:
        return True
    return k != 0


# ---- imaginary axis -------------------------------------------------------

def imaginary_axis_zeros(p: ReggeProblem, tau_max: float, n_scan: int = 2000,
                         tol: float = 1e-12, nsteps: int | None = None) -> list[float]:
    """tau > 0 with Delta_+(-i tau) = 0, by dense scan plus bisection.

    Requires real_data: then Delta_+ is real on the negative imaginary
    semiaxis and its nonzero zeros there are simple, so sign changes
    capture all of them.
    """
    if not p.real_data:
        raise InconsistentInput("imaginary axis scan requires real_data")
    taus = np.linspace(tau_max / n_scan, tau_max, n_scan)
    vals = delta(p, Sign.PLUS, -1j * taus, nsteps=nsteps)
    g = vals.real
    if np.max(np.abs(vals.imag)) > 1e-8 * (1.0 + np.max(np.abs(g))):
        raise InconsistentInput("Delta_+ not real on the imaginary axis")
    roots: list[float] = []
    gfun = lambda t: delta(p, Sign.PLUS, -1j * t, nsteps=nsteps).real
    for i in np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]:
        r = brentq(gfun, taus[i], taus[i + 1], xtol=1e-14)
        if abs(delta(p, Sign.PLUS, -1j * r, nsteps=nsteps)) <= max(tol, 1e-9):
            roots.append(float(r))
    return roots


@dataclass
class InterlaceReport:
    ok: bool
    taus: list[float]
    sign_values_dot: list[float] = field(default_factory=list)
    sign_values_zero: list[float] = field(default_factory=list)
    interior_zero_counts: list[int] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)


def interlace_and_signs(p: ReggeProblem, taus, strict: bool = False,
                        n_scan: int = 400, nsteps: int | None = None) -> InterlaceReport:
    """Check the real-data sign and interlacing predictions on i R_-.

    At the ordered zeros tau_1 < ... < tau_kappa of Delta_+(-i tau):
    i * Ddot_+(-i tau_j) * (-1)^(kappa - j) < 0 and
    Delta_0(-i tau_j) * (-1)^(kappa - j) > 0, and Delta_0(-i tau) has
    exactly one zero strictly between consecutive tau_j.
    """
    if not p.real_data:
        raise InconsistentInput("interlacing check requires real_data")
    taus = sorted(float(t) for t in taus)
    kappa = len(taus)
    rep = InterlaceReport(ok=True, taus=taus)
    for j, tau in enumerate(taus, start=1):
        parity = (-1.0) ** (kappa - j)
        sdot = float((1j * delta_dot(p, Sign.PLUS, -1j * tau, nsteps=nsteps)).real) * parity
        szero = float(delta_zero(p, -1j * tau, nsteps=nsteps).real) * parity
        rep.sign_values_dot.append(sdot)
        rep.sign_values_zero.append(szero)
        if not sdot < 0.0:
            rep.violations.append(f"sign: i*Ddot_+ parity at tau_{j} = {sdot:.3e}")
        if not szero > 0.0:
            rep.violations.append(f"sign: Delta_0 parity at tau_{j} = {szero:.3e}")
    for j in range(kappa - 1):
        lo, hi = taus[j], taus[j + 1]
        grid = np.linspace(lo, hi, n_scan + 2)[1:-1]
        vals = delta_zero(p, -1j * grid, nsteps=nsteps).real
        count = int(np.sum(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0))
        rep.interior_zero_counts.append(count)
        if count != 1:
            rep.violations.append(
                f"interlacing: {count} zeros of Delta_0 in "
                f"({lo:.6f}, {hi:.6f}), expected 1")
    rep.ok = not rep.violations
    if strict and not rep.ok:
        first = rep.violations[0]
        if first.startswith("sign"):
            raise SignViolation(first)
        raise InterlacingViolation(first)
    return rep


def pair_symmetry_check(spec: Spectrum, tol: float = 1e-8):
    """Is the eigenvalue multiset closed under lam -> -conj(lam)?

    Returns (ok, max_defect) where the defect is the distance from each
    zero to the best candidate for its mirror partner.
    """
    lams = spec.lambdas()
    if len(lams) == 0:
        return True, 0.0
    mirrored = -np.conj(lams)
    dist = np.abs(lams[None, :] - mirrored[:, None])
    row, col = linear_sum_assignment(dist)
    defect = float(dist[row, col].max())
    ok = defect <= tol
    for i, j in zip(row, col):
        if spec.entries[i].multiplicity != spec.entries[j].multiplicity:
            ok = False
    return ok, defect


# ---- CSV ------------------------------------------------------------------

def write_spectrum_csv(spec: Spectrum, path: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("k,re,im,multiplicity,residual\n")
        for e in spec.entries:
            k = "" if e.k is None else str(e.k)
            fh.write(f"{k},{e.lam.real:.17g},{e.lam.imag:.17g},"
                     f"{e.multiplicity},{e.residual:.17g}\n")
    os.replace(tmp, path)
