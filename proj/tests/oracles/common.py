"""Symbolic curvature helpers shared by the oracle scripts."""
import sympy as sp


def christoffel(G, C):
    n = len(C)
    Gi = G.inv()
    return [[[sum(Gi[k, l] * (sp.diff(G[j, l], C[i]) + sp.diff(G[i, l], C[j]) - sp.diff(G[i, j], C[l])) for l in range(n)) / 2
              for j in range(n)] for i in range(n)] for k in range(n)]


def ricci(G, C):
    n = len(C)
    Gam = christoffel(G, C)
    R = sp.zeros(n)
    for b in range(n):
        for d in range(n):
            s = 0
            for a in range(n):
                s += sp.diff(Gam[a][d][b], C[a]) - sp.diff(Gam[a][a][b], C[d])
                for e in range(n):
                    s += Gam[a][a][e] * Gam[e][d][b] - Gam[a][d][e] * Gam[e][a][b]
            R[b, d] = s
    return R, Gam


def check(label, value, tol=1e-20):
    v = abs(sp.N(value, 30))
    status = "ok" if v <= tol else "FAIL"
    print(f"{status:4s} {label}: {sp.N(v, 5)}")
    return v <= tol
