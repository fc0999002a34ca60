#!/usr/bin/env python3
"""Walk through the rate functions on their natural grids.

Run it plain; everything is printed. The tour covers the upper-tail rate
for one row, the summed multi-row version, the explicit lower-tail rate
with its Legendre representation, and the small-x blowup.
"""

import numpy as np

from wordshape.rate_functions import (
    k_eta_asymptotic,
    rate_I_r,
    rate_J,
    rate_K_closed,
)
from wordshape.variational import legendre_S, rate_K_eta


def section(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    section("Upper-tail rate I1 (zero on (-inf, 2], grows like x log x)")
    for x in (2.0, 2.1, 2.2, 2.5, 3.0, 4.0, 6.0):
        print(f"  I1({x:4.1f}) = {float(rate_I_r([x])):.9f}")

    section("Summed rate for a nonincreasing shape vector")
    shapes = [(3.0,), (3.0, 2.5), (3.0, 2.5, 2.5), (3.0, 2.5, 2.0)]
    for xs in shapes:
        print(f"  I_r{xs} = {float(rate_I_r(list(xs))):.9f}")
    print("  (an increasing vector is outside the domain: "
          f"I_r([2.5, 3.0]) = {float(rate_I_r([2.5, 3.0]))})")

    section("Lower-tail rate K on (0, 2), explicit form")
    for x in (0.1, 0.5, 1.0, 1.5, 1.9, 1.99):
        print(f"  K({x:5.2f}) = {float(rate_K_closed(x)):.9f}")
    print("  K blows up like -log x near zero:")
    for x in (1e-2, 1e-4, 1e-6):
        print(f"    K({x:g}) + log({x:g}) = "
              f"{float(rate_K_closed(x)) + np.log(x):+.6f}")

    section("J and the Legendre family K_eta")
    print("  K_0 = J and K_1 = K; intermediate eta interpolates.")
    for x in (0.5, 1.0, 1.5):
        j = float(rate_J(x))
        k0 = float(rate_K_eta(x, 0.0))
        half = float(rate_K_eta(x, 0.5))
        k1 = float(rate_K_eta(x, 1.0))
        k = float(rate_K_closed(x))
        print(f"  x={x:3.1f}: J={j:.9f}  K_0={k0:.9f}  "
              f"K_0.5={half:.9f}  K_1={k1:.9f}  K={k:.9f}")

    section("The maximizer map S(y) behind the Legendre transform")
    for y in (0.0, -0.5, -2.0, -6.0):
        print(f"  S({y:4.1f}) = {legendre_S(y):+.9f}")

    section("Asymptotics of K_eta at the edges of its domain")
    print("  eta < 1, deep left tail (Gaussian-dominated plus a log):")
    for x in (-3.0, -10.0):
        print(f"    eta=0.25, x={x:6.1f}: asymptote = "
              f"{k_eta_asymptotic(x, 0.25):.4f}, exact = "
              f"{float(rate_K_eta(x, 0.25)):.4f}")
    print("  eta = 1, logarithmic blowup as x -> 0+:")
    for x in (1e-2, 1e-4):
        print(f"    x={x:g}: asymptote = {k_eta_asymptotic(x, 1.0):.4f}, "
              f"exact = {float(rate_K_eta(x, 1.0)):.4f}")


if __name__ == "__main__":
    main()
