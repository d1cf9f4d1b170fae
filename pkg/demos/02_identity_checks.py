"""
Cross checks between the three characteristic functions
=======================================================

Three identities tie Delta_plus, Delta_minus and Delta_0 together, and
they hold for every potential the solver accepts.  Each one is a
different route through the same ODE solutions, so their residuals
measure the integrator, not the algebra.
"""

import math

import numpy as np

from reggespec import Potential, ReggeProblem
from reggespec.charfn import (
    delta,
    delta_zero,
    energy_identity_residual,
    identity_residual,
    wronskian_delta,
)
from reggespec.model import Sign

rng = np.random.default_rng(3)
q = rng.uniform(-1.0, 1.0, 33) + 1j * rng.uniform(-1.0, 1.0, 33)
p = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.4, alpha=1.5, beta=-0.8,
                 potential=Potential.grid(q, 1.0, "cubic"), real_data=False)

lam = 15.0 * np.sqrt(rng.uniform(0, 1, 60)) * np.exp(
    2j * math.pi * rng.uniform(0, 1, 60))

# product identity: D+(lam) D+(-lam) - D-(lam) D-(-lam) = 4 a a0 lam^2.
# relative to the size of the products, which grow like e^{2|Im lam|}
res = np.abs(identity_residual(p, lam))
pp = np.abs(delta(p, Sign.PLUS, lam) * delta(p, Sign.PLUS, -lam))
pm = np.abs(delta(p, Sign.MINUS, lam) * delta(p, Sign.MINUS, -lam))
quad = np.abs(4.0 * p.alpha * p.alpha0 * lam ** 2)
scale = np.maximum(1.0, np.maximum(quad, np.maximum(pp, pm)))
print(f"product identity, worst relative residual:  "
      f"{(res / scale).max():.2e}")

# difference identity: D+ - D- = 2 i alpha lam Delta_0
diff = (delta(p, Sign.PLUS, lam) - delta(p, Sign.MINUS, lam)
        - 2j * p.alpha * lam * delta_zero(p, lam))
print(f"difference identity, worst residual:        "
      f"{np.abs(diff).max():.2e}")

# same Delta_+ through the x-independent Wronskian of the two
# integration directions, matched at an interior point
wr = wronskian_delta(p, Sign.PLUS, lam, x=0.5)
direct = delta(p, Sign.PLUS, lam)
print(f"two integration directions, worst mismatch: "
      f"{np.abs(wr - direct).max():.2e}")

# energy identity: 2 lam int y^2 against boundary data, at moderate lam
lam_small = lam[np.abs(lam) <= 8.0]
print(f"energy identity, worst residual at {lam_small.size} points: "
      f"{np.abs(energy_identity_residual(p, lam_small)).max():.2e}")

# a point value known by hand: for the zero-potential problem with
# alpha0 = 2, alpha = 3, the energy identity right side at lam = pi/2
# equals -3 pi/2 + 4i, and Delta_0(pi/2) = 2i
p0 = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=3.0, beta=0.0,
                  potential=Potential.zero(1.0), real_data=True)
piv = np.array([math.pi / 2])
print(f"Delta_0(pi/2) for the closed-form problem:  "
      f"{delta_zero(p0, piv)[0]:.12f}  (exact 2i)")
