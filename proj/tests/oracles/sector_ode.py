"""References for the cohomogeneity-one sector.

1. AdS torus data (k = 2, kappa = 3) with Pi scaled by 1 + 1e-3, integrated
   with an independent integrator; prints the separation at r = 1.
2. Schwarzschild in distance-to-sphere coordinates: the closed-form distance
   X(rho) has dX/drho = 1/V and the lapse V(x) solves the sector system.
"""
import numpy as np
import sympy as sp
from scipy.integrate import solve_ivp

K, KAPPA = 2, 3.0


def rhs(r, y):
    g = y[0:4].reshape(2, 2)
    P = y[4:8].reshape(2, 2)
    V, Vp = y[8], y[9]
    gi = np.linalg.inv(g)
    H = np.trace(gi @ P)
    dP = KAPPA * g - H * P + 2 * P @ gi @ P - Vp / V * P
    return np.concatenate([2 * P.ravel(), dP.ravel(), [Vp, -H * Vp + KAPPA * V]])


def separation(a, b):
    ea = np.sqrt(np.linalg.eigvalsh(a[0:4].reshape(2, 2)))
    eb = np.sqrt(np.linalg.eigvalsh(b[0:4].reshape(2, 2)))
    return max(abs(a[8] - b[8]), np.max(np.abs(ea - eb)))


def ads_mismatch():
    y0 = np.concatenate([np.eye(2).ravel(), np.eye(2).ravel(), [1.0, 1.0]])
    y1 = y0.copy()
    y1[4:8] *= 1.001
    rs = np.linspace(0, 1, 11)
    a = solve_ivp(rhs, (0, 1), y0, rtol=1e-13, atol=1e-13, t_eval=rs, method="DOP853")
    b = solve_ivp(rhs, (0, 1), y1, rtol=1e-13, atol=1e-13, t_eval=rs, method="DOP853")
    for i, r in enumerate(rs):
        print(f"  r = {r:.1f}  separation {separation(a.y[:, i], b.y[:, i]):.16e}")


def schwarzschild():
    rho, m, rb = sp.symbols("rho m rho_b", positive=True)
    X = sp.sqrt(rho * (rho - 2 * m)) + 2 * m * sp.log(sp.sqrt(rho) + sp.sqrt(rho - 2 * m))
    V = sp.sqrt(1 - 2 * m / rho)
    assert sp.simplify(sp.diff(X, rho) ** 2 - 1 / V**2) == 0
    # a = rho(x), a' = V, V' = m / rho^2: check a a'' = 1 - a'^2 - a a' V'/V and V'' = -2 a' V'/a
    # with d/dx = V d/drho
    dx = lambda f: V * sp.diff(f, rho)
    a, ap, Vp = rho, V, m / rho**2
    assert sp.simplify(dx(ap) * a - (1 - ap**2 - a * ap * Vp / V)) == 0
    assert sp.simplify(dx(Vp) + 2 * ap * Vp / a) == 0
    assert sp.simplify(dx(V) - Vp) == 0
    print("schwarzschild closed form: ok")


if __name__ == "__main__":
    print("AdS torus, Pi x (1 + 1e-3):")
    ads_mismatch()
    schwarzschild()
