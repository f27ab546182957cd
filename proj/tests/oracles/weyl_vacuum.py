"""References for static axisymmetric vacuum metrics.

1. For u = -m/rt and u = a rt^2 P2(cos vt) the closed-form k solves
   k_rho = rho (u_rho^2 - u_z^2), k_z = 2 rho u_rho u_z and vanishes on the axis.
2. The four-metric -e^{2u} dt^2 + e^{-2u}(e^{2k}(drho^2 + dz^2) + rho^2 dphi^2)
   is Ricci flat for both pairs.
3. Prints k at sample points for the tests.
"""
import sympy as sp

t, rho, z, phi = sp.symbols("t rho z phi", real=True)
m, a = sp.symbols("m a", positive=True)
X = [t, rho, z, phi]

r = sp.sqrt(rho**2 + z**2)
cases = {
    "curzon": (-m / r, -m**2 * rho**2 / (2 * r**4)),
    "p2": (a * (z**2 - rho**2 / 2), a**2 * (rho**4 / 4 - 2 * rho**2 * z**2)),
}


def ricci(g):
    gi = g.inv()
    n = 4
    G = [[[sum(gi[k, l] * (sp.diff(g[l, i], X[j]) + sp.diff(g[l, j], X[i]) - sp.diff(g[i, j], X[l])) for l in range(n)) / 2
           for j in range(n)] for i in range(n)] for k in range(n)]
    R = sp.zeros(n)
    for i in range(n):
        for j in range(n):
            R[i, j] = sum(sp.diff(G[k][i][j], X[k]) - sp.diff(G[k][i][k], X[j])
                          + sum(G[k][k][l] * G[l][i][j] - G[k][j][l] * G[l][i][k] for l in range(n)) for k in range(n))
    return R


for name, (u, k) in cases.items():
    lap = sp.simplify(sp.diff(u, rho, 2) + sp.diff(u, rho) / rho + sp.diff(u, z, 2))
    kr = sp.simplify(sp.diff(k, rho) - rho * (sp.diff(u, rho)**2 - sp.diff(u, z)**2))
    kz = sp.simplify(sp.diff(k, z) - 2 * rho * sp.diff(u, rho) * sp.diff(u, z))
    assert lap == 0 and kr == 0 and kz == 0, name
    assert sp.simplify(k.subs(rho, 0)) == 0, name
    g = sp.diag(-sp.exp(2 * u), sp.exp(2 * k - 2 * u), sp.exp(2 * k - 2 * u), sp.exp(-2 * u) * rho**2)
    Ric = ricci(g)
    assert all(sp.simplify(e) == 0 for e in Ric), name
    print(name, "Ricci flat")

kc = cases["curzon"][1].subs(m, 1)
for p in [(1.0, 0.5), (0.7, -1.2), (2.0, 0.0)]:
    print("curzon k", p, sp.N(kc.subs({rho: p[0], z: p[1]}), 17))
kp = cases["p2"][1].subs(a, 0.8)
for p in [(0.3, 0.4), (0.5, -0.2)]:
    print("p2 k", p, sp.N(kp.subs({rho: p[0], z: p[1]}), 17))
