import json
import math

import pytest

import multdim as md


def test_version():
    assert md.__version__ == "0.1.0"


def test_power_psi_and_exponents():
    psi = md.ApproxFunction.power(3.0)
    assert psi(2) == pytest.approx(2.0 ** -3)
    r = md.exponent("tau", psi)
    assert r["method"] == "closed-form"
    assert r["value"] == pytest.approx(0.4)
    f = md.dimension_formulas(psi)
    assert f["dimF_M"] == pytest.approx(0.8)
    assert f["dimH_M"] == pytest.approx(1.5)
    assert f["applicable"] is True


def test_reciprocal_flags():
    psi = md.ApproxFunction.reciprocal()
    f = md.dimension_formulas(psi)
    assert f["applicable"] is False
    assert f["warning"]
    assert f["tau"] == pytest.approx(2.0 / 3.0)


def test_sqrt_identity():
    psi = md.ApproxFunction.power(3.0)
    big = md.exponent("lambda", psi.sqrt())["value"]
    assert big == pytest.approx(md.exponent("tau", psi)["value"])


def test_table_and_json_roundtrip():
    t = md.ApproxFunction.table({2: "1/8", 3: "1/27"})
    assert t(3) == pytest.approx(1.0 / 27.0)
    assert t(5) == 0.0
    desc = json.loads(t.to_json())
    again = md.ApproxFunction.parse(json.dumps(desc))
    assert again(2) == t(2)


def test_geometry():
    m = md.star_measure(0.125)
    assert m == pytest.approx(4 * 0.125 * (1 + math.log(1 / (4 * 0.125))))
    mc, se = md.monte_carlo_star_measure(17, 0.125, samples=200_000, seed=7, threads=2)
    assert abs(mc - m) < 4 * se
    r = md.cover_check(17, 0.01, samples=5000, seed=3)
    assert r["escaped"] == 0
    lo, hi = md.dyadic_index_range(8, 2.0 ** -9)
    assert (lo, hi) == (4, 12)


def test_fourier():
    psi_q = 1.0 / 64
    c00 = md.rect_fourier_coeff(4, 3, psi_q, 0, 0)
    assert c00 == pytest.approx(8 * psi_q)
    assert md.rect_fourier_coeff(4, 3, psi_q, 1, 0) == pytest.approx(0.0, abs=1e-15)
    b = md.quadratic_bound(32, 32.0 ** -3, 0.4)
    assert b["total"] > 0
    parts = b["omega0"] + b["omega1"] + b["omega2"] + b["t11"] + b["t12"] + b["t21"] + b["t22"]
    assert parts == pytest.approx(b["total"], rel=1e-9)
    assert md.quadratic_bound_rhs(32, 32.0 ** -3, 0.4, 0.05) > 0


def test_construction():
    c = md.build_construction(levels=1, mode="exact")
    assert c["levels"][0]["prime_count"] == 59
    assert c["levels"][0]["last_prime"] == "277"


def test_estimates():
    psi = md.ApproxFunction.power(3.0)
    bc = md.borel_cantelli_verdicts(psi, qmax=4096)
    assert bc == ("convergent", "convergent")
    box = md.box_counting_limsup(psi, 2048, [256, 1024, 4096])
    assert abs(box["slope"] - 1.5) < 0.2


def test_run_cli(tmp_path):
    out = tmp_path / "cli"
    out.mkdir()
    code = md.run_cli(
        ["exponent", "--psi", "power:3", "--kind", "tau", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads((out / "exponent.json").read_text())
    assert doc["value"] == pytest.approx(0.4)
    assert md.run_cli(["exponent", "--kind", "bogus"]) == 2
