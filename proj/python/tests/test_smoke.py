import math

import numpy as np
import pytest

import stvac


def test_exact_solutions_meet_their_tolerance():
    mk = stvac.exact_residuals("minkowski", nodes=12)
    assert max(mk["tt"], mk["ij"], mk["ti"]) <= mk["tolerance"] == 1e-10
    ads = stvac.exact_residuals("ads", nodes=33)
    assert max(ads["tt"], ads["ij"], ads["ti"]) <= ads["tolerance"]
    with pytest.raises(stvac.InputError):
        stvac.exact_residuals("kerr")


def test_flat_ball_kids():
    r = stvac.flat_ball_kid_residuals()
    assert r.pop("planted") >= 1e-3
    assert len(r) == 6
    assert max(r.values()) <= 1e-10


def test_fg_poincare_and_curved():
    nodes = stvac.fg_boundary_nodes(16, 6)
    G0 = np.zeros((len(nodes), 9))
    G0[:, 0], G0[:, 4], G0[:, 8] = -1.0, 1.0, 1.0
    out = stvac.fg_expand(G0, np.zeros_like(G0), 5, 16, 6)
    assert len(out["coefficients"]) == 6
    assert all(np.abs(c).max() < 1e-12 for c in out["coefficients"][1:])
    y = nodes[:, 0]
    G0[:, 0] = -(1 + np.cos(y) / 3)
    G0[:, 1] = G0[:, 3] = np.sin(y) / 5
    G0[:, 8] = 1 + np.sin(y) / 4
    trunc = stvac.fg_expand(G0, np.zeros_like(G0), 2, 16, 6)
    assert trunc["slope"] >= 2.8
    with pytest.raises(stvac.InputError):
        stvac.fg_expand(G0[:10], G0[:10], 3, 16, 6)


def test_carleman_and_estia():
    rep = stvac.carleman_check("flat", "shape", seed=2)
    assert rep["holds"] and rep["spread"] < 1.15
    assert [row[0] for row in rep["rows"]] == list(range(3, 11))
    s = stvac.estia_sample(3)
    assert not s["rejected"] and math.isfinite(s["ratio"])
    assert s["split_defect"] < 1e-12


def test_continuation_sector():
    a = stvac.sector_preset("ads")
    b = dict(a, Pi=[v * 1.001 for v in a["Pi"]])
    assert stvac.continuation_ode(a, a)["sup"] <= 1e-9
    assert stvac.continuation_ode(a, b, samples=11)["sup"] >= 5e-4
    s = stvac.sector_preset("schwarzschild", mass=1.0, rho_b=3.0)
    t = stvac.continuation_ode(s, s, 0.0, 10.0, 41)
    err = max(abs(v - stvac.schwarzschild_lapse(1.0, 3.0, x)) for x, v in zip(t["radius"], t["V"]))
    assert err < 1e-8


def test_weyl_curzon_and_classifier():
    curzon = stvac.AxisymmetricHarmonic([-1.0], 0.5, True)
    u, ur, uz = curzon(1.0, 0.5)
    assert u == pytest.approx(-1 / math.hypot(1.0, 0.5))
    assert stvac.weyl_k(curzon, 1.0, 0.5) == pytest.approx(-0.32, rel=1e-12)
    with pytest.raises(stvac.DomainError):
        stvac.weyl_k(curzon, 0.3, 0.0, "axis")
    quad = stvac.AxisymmetricHarmonic([0.0, 0.0, 0.8])
    v = stvac.weyl_vacuum_check(quad, 0.1, 0.6, -0.6, 0.6)
    assert v["tt"] <= v["tolerance_tt"] and v["ij"] <= v["tolerance_ij"]
    geo = stvac.synthetic_spectrum("geometric", 0.2, 0.5, seed=4)
    root = stvac.synthetic_spectrum("stretched", 1.0, 0.5, seed=5)
    assert stvac.analyticity_classify(geo)["verdict"] == "analytic"
    assert stvac.analyticity_classify(root)["verdict"] == "smooth-non-analytic"
    proj = stvac.solve_axisym_laplace(lambda th, ph: math.cos(th) ** 2, 1.0, 4)
    assert proj.coefficients[2] == pytest.approx(2 / 3)


def test_cli_in_process(tmp_path):
    assert stvac.run_cli(["--quiet", "fixture", "--dir", str(tmp_path)]) == 0
    code = stvac.run_cli(["--quiet", "--out", str(tmp_path), "kid", "check", "--input", str(tmp_path / "bad-kid.dat")])
    assert code == 2
    assert stvac.run_cli(["--quiet", "frobnicate"]) == 1
