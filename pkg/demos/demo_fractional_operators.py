#!/usr/bin/env python3
"""Walk through the weighted fractional operators on three time geometries.

The damped exponential e_lam(t) = exp(lam*psi(t))/omega(t) is an
eigenfunction of the whole operator family: integrating of order a divides
by lam^a, differentiating multiplies by lam^a.  This script evaluates both
operators on the three reference geometries and prints the observed
eigenvalues, then closes the loop with D^a(J^a f) = f on a Gaussian packet.
"""

import numpy as np

from subjtime import QuadratureSpec, left_inverse_check
from subjtime.corpus import DampedExponential, standard_packet, standard_profiles
from subjtime.operators import weyl_derivative_marchaud, weyl_integral

q = QuadratureSpec()
lam = 1.0

print("eigen-identities: J^a e = lam^-a e,  D^a e = lam^a e")
for name, profile in standard_profiles().items():
    f = DampedExponential(profile, lam)
    t = 1.0 if not np.isfinite(profile.range_inf) else \
        float(profile.psi_inv(profile.range_inf + 50.0))
    x = float(profile.psi(t))
    sup = f.support_for(x, 1e-16)
    for a in (0.3, 0.8):
        ji = weyl_integral(a, f, profile, t, q, support=sup)
        dv = weyl_derivative_marchaud(a, f, profile, t, q, support=sup)
        fv = complex(f(t))
        print(f"  {name:13s} a={a}:  J-ratio {abs(ji / fv):.12f} "
              f"(want {lam ** -a:.12f})   D-ratio {abs(dv / fv):.12f} "
              f"(want {lam ** a:.12f})")

print("\nleft inverse D^a(J^a f) = f on a Gaussian packet:")
for name, profile in standard_profiles().items():
    pk = standard_packet(profile, width=0.5)
    grid = np.asarray(profile.psi_inv(
        np.linspace(pk.center - 1.0, pk.center + 1.0, 7)), float)
    err = left_inverse_check(0.5, pk, profile, grid, q)
    print(f"  {name:13s} sup-relative reconstruction error {err:.2e}")
