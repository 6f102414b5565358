import math

import pytest

import bregman_hybrid as bh


def test_legendre_gradients():
    f = bh.Legendre("scalar-quartic")
    assert f.grad([2.0]) == pytest.approx([8.0])
    assert f.grad_conj([8.0]) == pytest.approx([2.0])
    assert bh.bregman_distance(f, [2.0], [1.0]) == pytest.approx(2.75)


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError):
        bh.Legendre("cosh")
    with pytest.raises(ValueError):
        bh.Legendre("neg-entropy").grad([-1.0])


def test_cut_and_projection():
    f = bh.Legendre("euclidean")
    a, b = bh.cut_from_distance_test(f, [-0.4455556], [-1.0], [-1.0], 1.0 / 3.0)
    assert a[0] == pytest.approx(-0.5544444, abs=1e-6)
    assert b == pytest.approx(0.4007398, abs=1e-6)
    assert bh.project(f, "paper-example-gmep", [(a, b)], [-1.0])[0] == pytest.approx(-0.7227778, abs=1e-6)


def test_resolvent():
    f = bh.Legendre("euclidean")
    z = bh.resolvent(f, "paper-example-gmep", [-1.0])[0]
    assert z == pytest.approx((-1.0 - math.sin(-1.0)) / 4.0)
    closed = bh.resolvent(f, "paper-example-gmep", [-1.0], "closed-form-affine-quadratic")[0]
    assert abs(closed - z) <= 1e-12


def test_short_solve():
    out = bh.solve([-1.0], variant="ep", max_iter=2000, trace_every=500)
    assert out["status"] == "max_iter"
    assert out["iterations"] == 2000
    ns = [row[0] for row in out["trace"]]
    assert ns == [0, 500, 1000, 1500, 2000]
    d_x0 = [row[3] for row in out["trace"]]
    assert d_x0 == sorted(d_x0)


def test_solve_from_solution():
    out = bh.solve([0.0])
    assert out["status"] == "converged"
    assert out["result"] == [0.0]


def test_verify_subset_and_fault():
    ok = bh.verify(only=["bregman.nonnegativity"])
    assert ok and all(r["passed"] for r in ok)
    bad = bh.verify(only=["equilibrium.resolvent"], inject_fault=1.0)
    assert any(not r["passed"] and r["name"].startswith("equilibrium.bfne") for r in bad)
    assert bh.verify(only=[]) == []
