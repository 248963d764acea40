import json
import math

import pytest

import chebgap

ESTAR = [(-1.0, -0.6), (0.6, 1.0)]


def test_estar_closed_forms():
    eq = chebgap.solve_equilibrium(chebgap.make_set(ESTAR))
    assert eq.capacity == pytest.approx(0.4, abs=1e-8)
    assert eq.pw_sum == pytest.approx(math.log(2.0), abs=1e-7)
    t2 = chebgap.chebyshev(eq, 2)
    assert t2.t_n == pytest.approx(0.32, abs=1e-9)
    c = t2.coefficients()
    assert c[0] == pytest.approx(-0.68, abs=1e-8)
    assert c[1] == pytest.approx(0.0, abs=1e-8)
    assert c[2] == 1.0
    assert t2.certificate(eq.set)


def test_widom_and_comb():
    eq = chebgap.solve_equilibrium(chebgap.make_set(ESTAR))
    w = chebgap.widom(eq, {0: 0.0})
    assert w.f_norm == pytest.approx(2.0, rel=1e-10)
    assert w.character[0] == pytest.approx(0.5, abs=1e-10)
    m = chebgap.character_match(eq, [0.5])
    assert m.gap_points[0] == pytest.approx(0.0, abs=1e-9)
    comb = chebgap.comb(eq, 10)
    assert comb["relation_found"]
    assert comb["coefficients"] == [2]


def test_diagnostics_rows():
    eq = chebgap.solve_equilibrium(chebgap.make_set(ESTAR))
    rep = chebgap.diagnostics(eq, 1, 6)
    assert [r["n"] for r in rep["rows"]] == list(range(1, 7))
    for r in rep["rows"]:
        assert r["cert_pass"]
        assert 2.0 - 1e-8 <= r["widom_factor"] <= 4.0 + 1e-8


def test_errors():
    with pytest.raises(ValueError):
        chebgap.make_set([(0.0, -1.0)])
    with pytest.raises(ValueError):
        chebgap.run("{}")
    eq = chebgap.solve_equilibrium(chebgap.make_set([(-1.0, 1.0)]))
    with pytest.raises(chebgap.CapabilityError):
        chebgap.chebyshev(eq, 200)


def test_run(tmp_path):
    cfg = json.dumps({"set": [[-1, 1]], "n_range": [1, 4], "comb": False})
    res = chebgap.run(cfg, str(tmp_path / "seg"))
    assert res["exit_code"] == 0
    assert len(res["rows"]) == 4
    assert (tmp_path / "seg" / "diagnostics.csv").exists()
