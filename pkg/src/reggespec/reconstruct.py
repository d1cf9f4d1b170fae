"""Characteristic functions rebuilt from their zeros.

An entire function of exponential type with the two-frequency
asymptotics f(z) = z[c1 cos z + c2 sin z] + O(e^|Im z|) is pinned down
by its zeros plus one nonzero coefficient c0 from {c1, c2, c1+c2,
c1-c2}: Hadamard factorization gives f = c e^{bz} E(z) with E the
genus-1 canonical product over the zeros, and b, c follow from limits
of ln E / z and e^{bz} E(z)/z along real sampling points where the
trig combination attached to c0 dominates.

Numerically the limits need care on three fronts.  Truncating the
product at N zeros bends ln E(x) by -x^2 sum' 1/z_k^2 plus higher
powers of x over the excluded zeros, which no short polynomial basis
absorbs once x is large; since the excluded zeros continue the edge
lattice of the supplied ones, that tail is restored analytically (a
direct block of model factors plus Euler-Maclaurin power sums), and
the sample fit against {1, 1/n, ln n / n, n, n^2} only has to pick up
the genuine finite-size corrections of the limits plus the small
lattice-model mismatch.  Second, shifting b by i m (integer m) leaves
every sample at x = 2n pi + t0 unchanged (e^{i m x} is periodic), so
the log-limit only determines Im b modulo 1; the true branch is
recovered by checking which candidate makes c e^{bz} E(z)/z fit the
two-frequency class at off-lattice probe points.  Third, per-factor principal logs
are used throughout, which is exact for the product's value and keeps
the imaginary part of ln E single-valued.

The module also inverts the spectral relations tying the two boundary
sign choices together: the even-problem square root recovering the
minus function from the plus function (with branch tracking across the
double zeros of the radicand), the normalized difference recovering
the interior value function, the half-sum recovering the Robin
characteristic function, and the conjugation fix-up that turns zeros
of g(lam) = D(lam) D(-lam) in the closed upper half-plane plus a sign
sequence back into zeros of D.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchAmbiguity,
    InconsistentInput,
    LimitNotConverged,
    MisalignedInput,
    ZeroAtOrigin,
)

__all__ = [
    "ZeroSet",
    "zeroset_from_spectrum",
    "read_zeroset_csv",
    "write_zeroset_csv",
    "HadamardModel",
    "hadamard_build",
    "EvenMinusEvaluator",
    "even_delta_minus",
    "delta0_from_pair",
    "two_spectra_robin",
    "sign_disambiguate",
]

# selector -> (sampling offset t0 from 2 n pi, weight w with
# c1 cos x + c2 sin x = w * c0 at those points)
_SELECTORS = {
    "c1": (0.0, 1.0),
    "c2": (0.5 * math.pi, 1.0),
    "c1+c2": (0.25 * math.pi, 1.0 / math.sqrt(2.0)),
    "c1-c2": (-0.25 * math.pi, 1.0 / math.sqrt(2.0)),
}


@dataclass
class ZeroSet:
    """Nonzero zeros with multiplicities plus the order at the origin."""

    zeros: list
    order_at_origin: int = 0

    def __post_init__(self):
        if self.order_at_origin < 0:
            raise InconsistentInput("order_at_origin must be >= 0")
        norm = []
        for z, m in self.zeros:
            z = complex(z)
            m = int(m)
            if m < 1:
                raise InconsistentInput(f"multiplicity {m} < 1 at {z}")
            if z == 0:
                raise InconsistentInput(
                    "zero at the origin belongs in order_at_origin")
            norm.append((z, m))
        norm.sort(key=lambda t: (abs(t[0]), t[0].real, t[0].imag))
        for (z1, _), (z2, _) in zip(norm, norm[1:]):
            if abs(z1 - z2) < 1e-9 * (1.0 + abs(z1)):
                raise InconsistentInput(
                    f"duplicate zeros {z1} and {z2}; merge into multiplicity")
        self.zeros = norm

    @property
    def values(self) -> np.ndarray:
        return np.array([z for z, _ in self.zeros], dtype=complex)

    @property
    def weights(self) -> np.ndarray:
        return np.array([m for _, m in self.zeros], dtype=float)

    def count(self) -> int:
        return self.order_at_origin + int(sum(m for _, m in self.zeros))


def zeroset_from_spectrum(sp, origin_tol: float = 1e-8) -> ZeroSet:
    """Spectrum entries -> ZeroSet; entries within origin_tol of 0 set
    the origin order."""
    zeros = []
    s = 0
    for e in sp.entries:
        if abs(e.lam) <= origin_tol:
            s += e.multiplicity
        else:
            zeros.append((e.lam, e.multiplicity))
    return ZeroSet(zeros=zeros, order_at_origin=s)


def write_zeroset_csv(path: str, zs: ZeroSet) -> None:
    lines = [f"# order_at_origin={zs.order_at_origin}", "re,im,multiplicity"]
    for z, m in zs.zeros:
        lines.append(f"{z.real:.17g},{z.imag:.17g},{m}")
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_zeroset_csv(path: str) -> ZeroSet:
    order = 0
    zeros = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line.lstrip("# ").partition("=")
                if key.strip() == "order_at_origin":
                    order = int(val)
                continue
            if line.startswith("re,"):
                continue
            try:
                re_s, im_s, m_s = line.split(",")
                zeros.append((complex(float(re_s), float(im_s)), int(m_s)))
            except ValueError as exc:
                raise InconsistentInput(
                    f"{path}: expected re,im,multiplicity rows, "
                    f"got {line!r}") from exc
    return ZeroSet(zeros=zeros, order_at_origin=order)


# ---- Hadamard factorization -------------------------------------------------

@dataclass
class HadamardModel:
    """f(z) = c e^{bz} z^s prod (1 - z/z_n) e^{z/z_n}, truncated at N zeros."""

    zeroset: ZeroSet
    b: complex
    c: complex
    selector: str
    c0_value: complex
    truncation: int
    branch_shift: int = 0       # integer added to Im b by the class fit
    class_residual: float = 0.0  # relative misfit of the winning branch
    _vals: np.ndarray = field(default=None, repr=False)
    _wts: np.ndarray = field(default=None, repr=False)
    _rays: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self._vals is None:
            self._vals, self._wts = _truncated(self.zeroset, self.truncation)
        if self._rays is None:
            self._rays = _tail_rays(self._vals)

    def log_E(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return (_log_E(z, self._vals, self._wts, self.zeroset.order_at_origin)
                + _tail_log(z, self._rays))

    def log_eval(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.log(self.c) + self.b * z + self.log_E(z)

    def eval(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.exp(np.log(self.c) + self.b * z + self.log_E(z))
        if self.zeroset.order_at_origin > 0:
            out[z == 0] = 0.0
        elif np.any(z == 0):
            out[z == 0] = self.c
        return out if out.size > 1 else complex(out[0])

    __call__ = eval


def _truncated(zs: ZeroSet, n: int):
    vals, wts = zs.values, zs.weights
    if len(vals) == 0:
        return vals, wts
    counts = np.cumsum(wts)
    idx = int(np.searchsorted(counts, n))
    idx = min(idx, len(vals) - 1)
    # extend across magnitude ties so symmetric partners are not split
    cut = abs(vals[idx])
    while idx + 1 < len(vals) and abs(vals[idx + 1]) <= cut * (1 + 1e-9):
        idx += 1
    return vals[:idx + 1], wts[:idx + 1]


def _log_E(z: np.ndarray, vals: np.ndarray, wts: np.ndarray, s: int,
           block: int = 4096) -> np.ndarray:
    """Sum of per-factor principal logs of the genus-1 product.

    Ordered block reduction: deterministic regardless of evaluation
    batch shape.  Exact for the product's value since exp undoes each
    factor's log individually.
    """
    zf = z.reshape(-1)
    out = np.zeros(zf.shape, dtype=complex)
    if s > 0:
        zero = zf == 0
        lz = s * np.log(np.where(zero, 1.0, zf))
        lz[zero] = complex(-math.inf, 0.0)
        out += lz
    for i in range(0, len(vals), block):
        vb = vals[i:i + block]
        wb = wts[i:i + block]
        u = zf[:, None] / vb[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            term = np.log1p(-u) + u
        out += (term * wb[None, :]).sum(axis=1)
    return out.reshape(z.shape)


@dataclass(frozen=True)
class _TailRay:
    """Arithmetic continuation of one side of a zero set beyond its edge."""

    side: float   # +1 or -1: sign of the real parts on this ray
    start: float  # |Re| of the outermost supplied zero
    step: float
    imag: float   # shared imaginary offset of the continued zeros

    def zero(self, j: np.ndarray) -> np.ndarray:
        return self.side * (self.start + j * self.step) + 1j * self.imag


def _tail_rays(vals: np.ndarray, edge: int = 48,
               min_side: int = 16) -> tuple[_TailRay, ...]:
    """Fit a lattice ray to the outer zeros on each side of the imaginary
    axis.  A side with too few zeros or non-increasing spacing gets no
    ray (its truncation error is then left to the sample fit)."""
    rays = []
    for side in (1.0, -1.0):
        zs = vals[vals.real * side > 1e-12]
        if len(zs) < min_side:
            continue
        zs = zs[np.argsort(zs.real * side)][-edge:]
        steps = np.diff(zs.real * side)
        step = float(np.median(steps))
        if not step > 1e-9:
            continue
        rays.append(_TailRay(side=side, start=float(zs.real[-1] * side),
                             step=step, imag=float(np.median(zs.imag))))
    return tuple(rays)


def _powsum(c0: complex, a: int, p: int) -> complex:
    """Euler-Maclaurin value of sum_{j>=a} (c0+j)^-p for Re(c0+a) >> 1."""
    w = c0 + a
    return (w ** (1 - p) / (p - 1) + w ** (-p) / 2.0
            + p * w ** (-p - 1) / 12.0
            - p * (p + 1) * (p + 2) * w ** (-p - 3) / 720.0)


def _tail_log(z: np.ndarray, rays: tuple[_TailRay, ...],
              pmax: int = 6, block: int = 4096) -> np.ndarray:
    """ln of the product over the continued-lattice zeros.

    Factors up to j0 (chosen so |z| / |zero| <= 1/50 beyond it) are
    summed directly; the remainder uses the power-series expansion of
    log1p with Euler-Maclaurin sums of (c0+j)^-p, so the O(1/j) decay
    of the quadratic term never has to be summed term by term.
    """
    zf = z.reshape(-1)
    out = np.zeros(zf.shape, dtype=complex)
    zmax = float(np.max(np.abs(zf))) if zf.size else 0.0
    for ray in rays:
        j0 = max(4096, int(math.ceil((50.0 * zmax - ray.start) / ray.step)))
        j0 = min(j0, 2_000_000)
        for i in range(1, j0 + 1, block):
            zeros = ray.zero(np.arange(i, min(i + block, j0 + 1), dtype=float))
            u = zf[:, None] / zeros[None, :]
            out += (np.log1p(-u) + u).sum(axis=1)
        c0 = (ray.start + 1j * ray.side * ray.imag) / ray.step
        for p in range(2, pmax + 1):
            s_p = _powsum(c0, j0 + 1, p) * (ray.side * ray.step) ** (-p)
            out -= zf ** p * (s_p / p)
    return out.reshape(z.shape)


def _basis_fit(ns: np.ndarray, ys: np.ndarray) -> tuple[complex, np.ndarray]:
    """Least squares on {1, 1/n, ln n / n, n, n^2}; returns the constant.

    After the lattice-tail compensation the drift left in the samples
    is the genuine finite-size correction of the limits (1/n and
    ln n / n scales) plus the residual model mismatch of the continued
    tail, for which the n and n^2 columns act as a safety margin.
    """
    A = np.stack([np.ones_like(ns), 1.0 / ns, np.log(ns) / ns, ns, ns * ns],
                 axis=1)
    coef, *_ = np.linalg.lstsq(A.astype(complex), ys, rcond=None)
    return complex(coef[0]), coef


_PROBE_OFFSETS = np.array([0.37, 1.03, 1.71, 2.39, 3.17, 3.91, 4.63, 5.41])


def hadamard_build(zs: ZeroSet, selector: str, c0_value: complex,
                   N: int = 10000, tol: float = 1e-4) -> HadamardModel:
    """Recover b and c of f = c e^{bz} E(z) from the zero set.

    selector names which coefficient of the leading z[c1 cos z +
    c2 sin z] is known; sampling points are placed where that
    combination carries the full amplitude (2n pi for c1, (2n+1/2) pi
    for c2, offsets -+ pi/4 for c1 -+ c2).  Raises LimitNotConverged
    when the extrapolated limits do not settle within tol or the
    exponential branch cannot be decided.
    """
    if selector not in _SELECTORS:
        raise InconsistentInput(
            f"selector {selector!r} not one of {sorted(_SELECTORS)}")
    c0_value = complex(c0_value)
    if c0_value == 0:
        raise InconsistentInput("the known coefficient must be nonzero")
    vals, wts = _truncated(zs, N)
    if len(vals) < 32:
        raise LimitNotConverged(
            f"{len(vals)} zeros is too few to estimate the limits")
    t0, w = _SELECTORS[selector]
    # octave ladder n = 2^6 .. 2^12; the lattice-tail compensation keeps
    # the samples meaningful even past the reach of the supplied zeros
    ns = np.array([64.0 * 2 ** j for j in range(7)])
    s = zs.order_at_origin
    rays = _tail_rays(vals)
    xs = 2.0 * math.pi * ns + t0
    # fit against x/2pi rather than n: the s ln x / x part of the drift
    # then sits exactly in the span of the 1/t and ln t / t columns
    ts = xs / (2.0 * math.pi)
    lE = (_log_E(xs.astype(complex), vals, wts, s)
          + _tail_log(xs.astype(complex), rays))
    b_ns = -lE / xs
    b_est, _ = _basis_fit(ts, b_ns)
    b_drop, _ = _basis_fit(ts[:-1], b_ns[:-1])
    if abs(b_est - b_drop) > tol * max(1.0, abs(b_est)):
        raise LimitNotConverged(
            f"b estimates {b_est:.6g} and {b_drop:.6g} disagree beyond {tol:g}")

    # Branch repair: b + i m is invisible at the sampling lattice, so
    # test which m keeps e^{bz}E(z)/z inside span{cos z, sin z} at
    # off-lattice probes.  Per-block fits keep the test immune to the
    # slowly varying truncation damping of E.
    probe_ns = ns[:min(6, len(ns))]
    scores = {}
    for m in range(-3, 4):
        bm = b_est + 1j * m
        resid = []
        for n in probe_ns:
            ys = 2.0 * math.pi * n + _PROBE_OFFSETS
            lv = (bm * ys + _log_E(ys.astype(complex), vals, wts, s)
                  + _tail_log(ys.astype(complex), rays) - np.log(ys))
            v = np.exp(lv)
            A = np.stack([np.cos(ys), np.sin(ys)], axis=1).astype(complex)
            coef, *_ = np.linalg.lstsq(A, v, rcond=None)
            r = np.linalg.norm(v - A @ coef) / np.linalg.norm(v)
            resid.append(r)
        scores[m] = float(np.mean(resid))
    order = sorted(scores, key=scores.get)
    m_best, m_next = order[0], order[1]
    if scores[m_best] > 0.3 or (scores[m_next] < 1.8 * scores[m_best]
                                and scores[m_next] - scores[m_best] < 0.15):
        raise LimitNotConverged(
            "exponential branch undecided: class residuals "
            f"{scores[m_best]:.3g} (m={m_best}) vs {scores[m_next]:.3g} "
            f"(m={m_next})")
    b = b_est + 1j * m_best

    # c-limit in log space: magnitudes span many orders across the
    # schedule, so fitting L_n directly would let the largest samples
    # swamp the constant term.
    log_L = b * xs + lE - np.log(xs)
    log_L = log_L.real + 1j * np.unwrap(log_L.imag)
    lL_est, _ = _basis_fit(ts, log_L)
    lL_drop, _ = _basis_fit(ts[:-1], log_L[:-1])
    if abs(lL_est - lL_drop) > tol * max(1.0, abs(lL_est)):
        raise LimitNotConverged(
            f"c-limit log estimates {lL_est:.6g} and {lL_drop:.6g} disagree "
            f"beyond {tol:g}")
    c = c0_value * w / np.exp(lL_est)
    return HadamardModel(zeroset=zs, b=b, c=c, selector=selector,
                         c0_value=c0_value, truncation=N,
                         branch_shift=m_best,
                         class_residual=scores[m_best],
                         _vals=vals, _wts=wts, _rays=rays)


# ---- even problem: minus function from the plus function -------------------

class EvenMinusEvaluator:
    """Square-root branch of Delta_+(lam) Delta_+(-lam) - 4 a^2 lam^2.

    For an even problem the minus function squared equals that
    radicand, and its value at 0 equals Delta_+(0).  The branch is
    tracked along the real axis from 0; each step picks the root
    closer to a linear extrapolation of the previous two values, which
    flips the sign across simple real zeros (double zeros of the
    radicand) exactly as the continuous branch does.  Off-axis queries
    continue the tracking vertically from the nearest real anchor.
    """

    def __init__(self, dplus, alpha: float, path: np.ndarray):
        self.dplus = dplus
        self.alpha = float(alpha)
        path = np.asarray(path, dtype=float)
        if path.ndim != 1 or len(path) < 2:
            raise InconsistentInput("path must be a 1-D grid of >= 2 points")
        if path[0] != 0.0:
            raise InconsistentInput("path must start at 0")
        if np.any(np.diff(path) <= 0):
            raise InconsistentInput("path must increase strictly")
        v0 = complex(np.atleast_1d(dplus(np.array([0.0 + 0.0j])))[0])
        if abs(v0) < 1e-10:
            raise ZeroAtOrigin(
                "Delta_+(0) = 0: the even reconstruction is excluded "
                "(two even potentials share these eigenvalues)")
        self.path = path
        self._cache: dict[complex, complex] = {}
        self._prime(path.astype(complex))
        self.values = self._track_real(v0)

    def radicand(self, lam):
        lam = np.asarray(lam, dtype=complex)
        return (np.asarray(self.dplus(lam)) * np.asarray(self.dplus(-lam))
                - 4.0 * self.alpha ** 2 * lam * lam)

    def _prime(self, points: np.ndarray) -> None:
        """Batch the underlying evaluator over uncached points; the
        tracking and query loops then read scalars from the cache."""
        pts = [complex(t) for t in np.asarray(points).reshape(-1)]
        new = sorted({t for t in pts if t not in self._cache},
                     key=lambda t: (t.real, t.imag))
        if not new:
            return
        vals = np.atleast_1d(self.radicand(np.array(new, dtype=complex)))
        for t, r in zip(new, vals):
            self._cache[t] = complex(r)

    def _rad(self, t: complex) -> complex:
        t = complex(t)
        if t not in self._cache:
            self._cache[t] = complex(np.atleast_1d(
                self.radicand(np.array([t])))[0])
        return self._cache[t]

    def _step(self, t0: complex, v0: complex, slope: complex, t1: complex,
              depth: int) -> complex:
        c = cmath.sqrt(self._rad(t1))
        pred = v0 + slope * (t1 - t0)
        v1 = c if abs(c - pred) <= abs(-c - pred) else -c
        # candidates closer to each other than the step jump: refine
        if 2.0 * abs(c) < abs(v1 - v0) and abs(v1 - v0) > 1e-12:
            if depth >= 10:
                raise BranchAmbiguity(
                    f"square-root branch undecidable near lam = {t1}")
            tm = 0.5 * (t0 + t1)
            vm = self._step(t0, v0, slope, tm, depth + 1)
            sm = (vm - v0) / (tm - t0)
            return self._step(tm, vm, sm, t1, depth + 1)
        return v1

    def _track_real(self, v0: complex) -> np.ndarray:
        out = np.empty(len(self.path), dtype=complex)
        out[0] = v0
        slope = 0.0 + 0.0j  # even function: zero derivative at 0
        for j in range(1, len(self.path)):
            t0, t1 = self.path[j - 1], self.path[j]
            out[j] = self._step(t0, out[j - 1], slope, t1, 0)
            slope = (out[j] - out[j - 1]) / (t1 - t0)
        return out

    def _at_real(self, x: float) -> complex:
        if x > self.path[-1] + 1e-12:
            raise InconsistentInput(
                f"|Re lam| = {x:.6g} beyond the tracked path end "
                f"{self.path[-1]:.6g}")
        j = int(np.searchsorted(self.path, x))
        j = min(max(j, 1), len(self.path) - 1)
        t0 = self.path[j - 1]
        v0 = self.values[j - 1]
        if j >= 2:
            slope = (v0 - self.values[j - 2]) / (t0 - self.path[j - 2])
        else:
            slope = 0.0 + 0.0j
        # sub-steps from the anchor to x
        v, t = v0, t0
        for tt in np.linspace(t0, x, 5)[1:]:
            vn = self._step(t, v, slope, tt, 0)
            if tt != t:
                slope = (vn - v) / (tt - t)
            v, t = vn, tt
        return v

    def _vertical_nodes(self, x: float, y: float) -> np.ndarray:
        h = max(self.path[1] - self.path[0], 1e-3)
        nsub = max(4, int(math.ceil(abs(y) / h)))
        return x + 1j * np.linspace(0.0, y, nsub + 1)[1:]

    def _value(self, lam: complex) -> complex:
        lam = complex(lam)
        if lam.real < 0:
            lam = -lam  # even in lam
        x, y = lam.real, lam.imag
        v = self._at_real(x)
        if y == 0.0:
            return v
        slope = 0.0 + 0.0j
        t = complex(x)
        for t1 in self._vertical_nodes(x, y):
            vn = self._step(t, v, slope, t1, 0)
            slope = (vn - v) / (t1 - t)
            v, t = vn, t1
        return v

    def __call__(self, lam):
        arr = np.atleast_1d(np.asarray(lam, dtype=complex))
        flat = arr.reshape(-1)
        # pre-batch every node the scalar loops will ask for
        need: list[complex] = []
        for z in flat:
            z = z if z.real >= 0 else -z
            x, y = z.real, z.imag
            j = int(np.searchsorted(self.path, x))
            j = min(max(j, 1), len(self.path) - 1)
            need.extend(np.linspace(self.path[j - 1], x, 5)[1:])
            if y != 0.0:
                need.extend(self._vertical_nodes(x, y))
        self._prime(np.array(need, dtype=complex))
        out = np.array([self._value(z) for z in flat],
                       dtype=complex).reshape(arr.shape)
        if np.ndim(lam) == 0:
            return complex(out.reshape(())[()])
        return out


def even_delta_minus(dplus, alpha: float, path) -> EvenMinusEvaluator:
    """Minus-sign characteristic function of an even problem from the
    plus-sign one, as a branch-tracked evaluator along the given real
    path (a strictly increasing grid starting at 0)."""
    return EvenMinusEvaluator(dplus, alpha, np.asarray(path, dtype=float))


# ---- pairwise combinations --------------------------------------------------

def delta0_from_pair(dplus, dminus, alpha: float, lam, h: float = 1e-5):
    """Interior value function from the pair: (D+ - D-)/(2 i alpha lam).

    At lam = 0 the quotient is resolved by a central difference of the
    numerator (which vanishes at 0 by construction).
    """
    arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    out = np.empty(arr.shape, dtype=complex)
    big = np.abs(arr) >= 1e-8
    if np.any(big):
        zb = arr[big]
        num = (np.asarray(dplus(zb), dtype=complex)
               - np.asarray(dminus(zb), dtype=complex))
        out[big] = num / (2j * alpha * zb)
    if np.any(~big):
        for idx in np.argwhere(~big):
            z = arr[tuple(idx)]
            num = (complex(np.atleast_1d(dplus(z + h))[0])
                   - complex(np.atleast_1d(dminus(z + h))[0])
                   - complex(np.atleast_1d(dplus(z - h))[0])
                   + complex(np.atleast_1d(dminus(z - h))[0]))
            out[tuple(idx)] = num / (4j * alpha * h)
    if np.ndim(lam) == 0:
        return complex(out.reshape(())[()])
    return out


def two_spectra_robin(dplus, dminus, lam):
    """Characteristic function of the lam-independent Robin problem:
    the average of the two sign choices."""
    arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    out = 0.5 * (np.asarray(dplus(arr), dtype=complex)
                 + np.asarray(dminus(arr), dtype=complex))
    if np.ndim(lam) == 0:
        return complex(out.reshape(-1)[0])
    return out


def sign_disambiguate(g_zeros_upper, signs) -> ZeroSet:
    """Zeros of D from zeros of g(lam) = D(lam) D(-lam) in the closed
    upper half-plane plus the signs of Im of D's own zeros.

    sign +1 or 0 keeps the listed zero, -1 replaces it by its
    conjugate (for real data the zero set of D is closed under
    lam -> -conj(lam), so the conjugate is the partner of g's mirror
    zero that belongs to D).
    """
    if len(g_zeros_upper) != len(signs):
        raise MisalignedInput(
            f"{len(g_zeros_upper)} zeros vs {len(signs)} signs")
    resolved = []
    for xi, sg in zip(g_zeros_upper, signs):
        if sg not in (-1, 0, 1):
            raise MisalignedInput(f"sign {sg!r} not in {{-1, 0, +1}}")
        xi = complex(xi)
        if xi.imag < -1e-12:
            raise InconsistentInput(
                f"g-zero {xi} not in the closed upper half-plane")
        resolved.append(xi if sg >= 0 else xi.conjugate())
    order = 0
    merged: list[tuple[complex, int]] = []
    for z in sorted(resolved, key=lambda w: (abs(w), w.real, w.imag)):
        if abs(z) <= 1e-12:
            order += 1
            continue
        if merged and abs(z - merged[-1][0]) < 1e-9 * (1.0 + abs(z)):
            merged[-1] = (merged[-1][0], merged[-1][1] + 1)
        else:
            merged.append((z, 1))
    return ZeroSet(zeros=merged, order_at_origin=order)
