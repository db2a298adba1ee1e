"""Accuracy of the closed-form Gaussian tail expansions.

Each table compares an asymptotic expansion against the exact value as
the argument pushes deeper into the tail, with the predicted error
order alongside - including where the expansions are NOT yet trustworthy.
"""

import math

from w2gauss import (density_quantile_h, h_tail_expansion, psi, psi_expansion,
                     quantile_tail_expansion, scaled_tail, std_normal_quantile)

if __name__ == "__main__":
    print("quantile tail: Phi^-1(u) vs sqrt(2L - log L - log 4pi), "
          "L = log 1/(1-u)")
    for j in (3, 4, 6, 9, 12):
        u = 1.0 - 10.0 ** (-j)
        t = quantile_tail_expansion(u)
        exact = float(std_normal_quantile(u))
        print(f"  u = 1-1e-{j:<2}  exact {exact:8.5f}  expansion "
              f"{t.value:8.5f}  ratio {exact / t.value:.5f}")
    print()

    print("density quantile h(u) = phi(Phi^-1(u)) vs sqrt(2) (1-u) sqrt(L)")
    for j in (2, 4, 8, 12):
        u = 1.0 - 10.0 ** (-j)
        t = h_tail_expansion(u)
        exact = float(density_quantile_h(u))
        print(f"  u = 1-1e-{j:<2}  ratio {exact / t.value:.4f}  "
              f"claimed error order {t.relative_error_order:.3f}")
    print("  (at u = 0.99 the error order loglog/log is only ~0.33, yet")
    print("   the ratio is already off by ~30%: the expansion needs depth)")
    print()

    print("psi(x) = -log(1 - Phi(x)) ... exact vs x^2/2 + log x + "
          "log(2pi)/2")
    for x in (2.0, 5.0, 10.0, 20.0):
        t = psi_expansion(x)
        print(f"  x = {x:4}  psi {psi(x):9.6f}  expansion {t.value:9.6f}  "
              f"gap {abs(psi(x) - t.value):.2e}")
    print()

    print("scaled tail (1-Phi(ax))/stuff: the normalization matters")
    for a in (0.5, 2.0):
        print(f"  a = {a}")
        for j in (4, 8, 12):
            s = scaled_tail(a, 1.0 - 10.0 ** (-j))
            print(f"    u = 1-1e-{j:<2}  exact/convergent = {s.ratio:8.4f}"
                  f"   exact/literal = "
                  f"{s.exact / s.asymptotic_as_stated:10.4g}")
    print("  the convergent normalization drifts to 1; the literal")
    print("  (4 pi)^((1-a^2)/2) prefactor sends a=1/2 to "
          f"{(4 * math.pi) ** -0.75:.4f} = (4pi)^-3/4 instead")
