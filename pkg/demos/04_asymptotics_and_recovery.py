"""
Eigenvalue asymptotics and what they reveal
===========================================

For large |k| the eigenvalues settle on a horizontal lattice with a
fixed imaginary shift and a 1/k correction.  The lattice spacing tells
the case sign, the shift P0 encodes the lambda-coupling parameters,
and the 1/k constant P mixes the Robin offsets with the integral of q.
Running the ladder backwards recovers (alpha0, alpha) from shifts.
"""

import math

import numpy as np

from reggespec import Potential, ReggeProblem
from reggespec.asympt import asymptotic_model, recover_alphas, residual_tail
from reggespec.charfn import delta, delta_dot
from reggespec.model import Sign
from reggespec.roots import Rectangle, Spectrum, SpectrumEntry, newton_refine

p = ReggeProblem(a=1.0, alpha0=2.0, beta0=1.0, alpha=3.0, beta=2.0,
                 potential=Potential.constant(1.0, 1.0), real_data=True)
m = asymptotic_model(p)

print(f"case sign {m.case_sign}  (alpha0 - 1)(1 - alpha) < 0: "
      f"integer lattice, no k = 0")
print(f"P0+ = {m.P0_plus:.12f}   (ln 6 = {math.log(6):.12f})")
print(f"P0- = {m.P0_minus:.12f}  (ln 3/2 = {math.log(1.5):.12f})")
print(f"P   = {m.P.real:.12f}  (-1/(12 pi) = {-1 / (12 * math.pi):.12f})")

# polish true eigenvalues starting from the lattice predictions and
# watch k (lambda_k - mu_k) - P die off
ks = list(range(5, 41, 5))
seeds = np.array([m.predicted(Sign.PLUS, k) for k in ks])
z, res, ok = newton_refine(lambda t: delta(p, Sign.PLUS, t),
                           lambda t: delta_dot(p, Sign.PLUS, t), seeds)
sp = Spectrum(entries=[SpectrumEntry(k=k, lam=complex(zz), multiplicity=1,
                                     residual=float(r))
                       for k, zz, r in zip(ks, z, res)],
              sign=Sign.PLUS, region=Rectangle(0, 130, -1, 2))
print(f"\n{'k':>4} {'lambda_k':>24} {'|beta_k|':>10}")
for k, beta in residual_tail(sp, m, Sign.PLUS, min_abs_k=5):
    lam = sp.by_index()[k].lam
    print(f"{k:>4} {lam:>24.12f} {abs(beta):>10.1e}")

# inverse direction: the two shifts determine the couplings once the
# lattice type fixes which side of 1 alpha lies on
a0, al = recover_alphas(m.P0_plus, m.P0_minus,
                        sign_alpha0_minus_1=1, case_sign=m.case_sign)
print(f"\nrecovered alpha0 = {a0:.12f}, alpha = {al:.12f}")

# the shifts alone cannot tell alpha from 1/alpha.  For alpha < 1 the
# default branch lands on the reciprocal; the half-integer lattice
# (case sign +1) is what disambiguates
p2 = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=0.5, beta=0.0,
                  potential=Potential.zero(1.0), real_data=True)
m2 = asymptotic_model(p2)
_, al_amb = recover_alphas(m2.P0_plus, m2.P0_minus, 1)
_, al_fix = recover_alphas(m2.P0_plus, m2.P0_minus, 1, m2.case_sign)
print(f"alpha = 0.5 problem: default branch gives {al_amb:.3f}, "
      f"case sign corrects it to {al_fix:.3f}")
