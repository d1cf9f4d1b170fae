"""
Computing a spectrum in a rectangle
===================================

The zero-potential problem with alpha0 = 2, alpha = 3 and zero Robin
offsets has eigenvalues known in closed form: 0 and a horizontal
lattice pi*k shifted up by i ln(6)/2.  We compute them from the
characteristic function by winding-number search plus Newton polish
and compare.
"""

import math

import numpy as np

from reggespec import Potential, ReggeProblem
from reggespec.asympt import asymptotic_model
from reggespec.model import Sign
from reggespec.roots import Rectangle, compute_spectrum, index_eigenvalues

p = ReggeProblem(a=1.0, alpha0=2.0, beta0=0.0, alpha=3.0, beta=0.0,
                 potential=Potential.zero(1.0), real_data=True)

rect = Rectangle(-7.0, 7.0, -1.0, 2.0)
spec = compute_spectrum(p, Sign.PLUS, rect)
print(f"{len(spec.entries)} eigenvalues in "
      f"[{rect.re_min},{rect.re_max}] x [{rect.im_min},{rect.im_max}]")

# attach lattice indices so the entries can be named
model = asymptotic_model(p)
spec = index_eigenvalues(spec, model, Sign.PLUS)

shift = 0.5j * math.log(6.0)
exact = {-3: -2 * math.pi + shift, -2: -math.pi + shift, -1: 0.0,
         1: shift, 2: math.pi + shift, 3: 2 * math.pi + shift}

print(f"{'k':>4} {'eigenvalue':>24} {'residual':>10} {'vs closed form':>15}")
for e in sorted(spec.entries, key=lambda e: (e.k is None, e.k)):
    err = abs(e.lam - exact[e.k]) if e.k in exact else float("nan")
    print(f"{e.k!s:>4} {e.lam:>24.12f} {e.residual:>10.1e} {err:>15.2e}")

# the same multiset is closed under lam -> -conj(lam), the symmetry of
# problems with real data
lams = spec.lambdas()
mirror = -np.conj(lams)
defect = max(np.abs(lams - m).min() for m in mirror)
print(f"mirror defect of the multiset: {defect:.2e}")
