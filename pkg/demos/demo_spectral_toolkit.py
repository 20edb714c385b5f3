#!/usr/bin/env python3
"""Transform, diagonalize, convolve: the frequency side of the toolkit.

Demonstrates that the weighted transform is unitary, that the fractional
derivative becomes multiplication by (i xi)^a under it, and that the
weighted convolution maps to a pointwise product with the sqrt(2 pi)
factor forced by the symmetric normalization.
"""

import math

import numpy as np

from subjtime import QuadratureSpec
from subjtime.corpus import (frequency_grid, packet_grid, packet_gridfunction,
                             standard_packet, standard_profiles)
from subjtime.operators import weyl_derivative_marchaud
from subjtime.spectral import (apply_multiplier, forward_transform,
                               frac_power_symbol, plancherel_check,
                               weighted_convolution)

q = QuadratureSpec()
profiles = standard_profiles()

print("unitarity <f, f>_weighted = <F, F> :")
for name, p in profiles.items():
    f = packet_gridfunction(standard_packet(p, width=0.6, freq=0.7), n=1201)
    tip, fip = plancherel_check(f, f, p, frequency_grid(16.0, 641))
    print(f"  {name:13s} time {tip.real:.10f}  freq {fip.real:.10f}  "
          f"defect {abs(tip - fip) / abs(tip):.2e}")

print("\nderivative via the (i xi)^0.8 multiplier vs the singular integral:")
p = profiles["exp_scale"]
pk = standard_packet(p, width=0.5)
f = packet_gridfunction(pk, n=2049)
pts = f.grid[256:-256:256]
spec_route = apply_multiplier(frac_power_symbol(0.8), f, p,
                              frequency_grid(22.0, 1537, refine_levels=18),
                              pts, check_tail=False)
for t, v in zip(pts, spec_route.values):
    direct = weyl_derivative_marchaud(0.8, pk, p, float(t), q)
    print(f"  t={t:7.3f}  multiplier {v.real:+.8f}  integral {direct.real:+.8f}")

print("\nconvolution theorem F(f*g) = sqrt(2 pi) F(f) F(g):")
p = profiles["exp_weight"]
f = packet_gridfunction(standard_packet(p, width=0.7), n=1537)
g = packet_gridfunction(standard_packet(p, width=0.4), n=1537)
grid = packet_grid(standard_packet(p, width=1.2), n=2049)
conv = weighted_convolution(f, g, p, grid)
xi = frequency_grid(9.0 / 0.4, n_uniform=769)
lhs = forward_transform(conv, p, xi)
rhs = (math.sqrt(2 * math.pi) * forward_transform(f, p, xi).values
       * forward_transform(g, p, xi).values)
print(f"  sup defect / peak = "
      f"{np.max(np.abs(lhs.values - rhs)) / np.max(np.abs(rhs)):.2e}")
