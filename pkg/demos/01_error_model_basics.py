#!/usr/bin/env python3
"""Walk through the finite-blocklength error model on a single link.

Shows how the decoding error probability reacts to blocklength and power, and
that the largest supportable rate round-trips through the error model.
"""

import numpy as np

from fblsec import capacity, dispersion, fbl_error, max_rate, omega, q_inv

GAIN, NOISE, D = 1.5, 0.1, 320

print("== link quantities at p = 1 W ==")
gamma = 1.0 * GAIN / NOISE
print(f"SNR           : {gamma:.1f}")
print(f"capacity      : {capacity(gamma):.4f} bits/chn.use")
print(f"dispersion    : {dispersion(gamma):.6f}")

print("\n== error probability vs blocklength (rate d/m shrinks as m grows) ==")
for m in (60, 80, 100, 150, 300):
    w = omega(gamma, D, m)
    print(f"m = {m:4d}: rate = {D / m:5.2f}  exponent = {w:8.3f}  "
          f"eps = {fbl_error(gamma, D, m):.3e}")

print("\n== error probability vs power at m = 100 ==")
for p in (0.2, 0.5, 1.0, 2.0):
    g = p * GAIN / NOISE
    print(f"p = {p:4.1f} W: eps = {fbl_error(g, D, 100):.3e}")

print("\n== max_rate round trip ==")
for eps_target in (1e-3, 1e-5, 1e-7):
    r = max_rate(gamma, 200, eps_target)
    back = fbl_error(gamma, 200 * r, 200)
    print(f"target eps = {eps_target:.0e}: max rate = {r:.4f}, "
          f"achieved eps = {back:.3e}")

print("\nThe inverse tail function is exercised implicitly above; directly:")
print(f"q_inv(0.5) = {q_inv(0.5)}, q_inv(2.87e-7) = {q_inv(2.866516e-07):.4f}")
