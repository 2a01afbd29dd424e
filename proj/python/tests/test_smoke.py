import math

import pytest

import negmnom as nm


@pytest.fixture
def ex1():
    return nm.AffineModel(2, {(1,): 1.0, (2,): 1.0, (1, 2): -0.5})


@pytest.fixture
def ex2():
    return nm.AffineModel(3, {"1": 1, "2": 1, "3": 1, "1,2": 1, "1,3": 1, "2,3": 1})


def test_model_round_trip(ex1):
    back = nm.AffineModel.from_json(ex1.to_json())
    assert back.terms == ex1.terms
    assert ex1.n == 2
    assert ex1.coeff("1,2") == -0.5
    assert ex1.evaluate([0.5, 0.5]) == 0.125


def test_model_errors():
    with pytest.raises(nm.ModelFormatError):
        nm.AffineModel.from_json('{"n": 2, "terms": {"": 1}}')
    with pytest.raises(nm.ModelFormatError):
        nm.AffineModel(2, {(2, 1): 1.0})
    with pytest.raises(nm.Error):
        nm.AffineModel(0, {})


def test_divisibility(ex1):
    assert nm.bt_table(ex1)[(1, 2)] == pytest.approx(0.5)
    assert nm.is_infinitely_divisible(ex1)["accepted"]
    bad = nm.AffineModel(2, {(1,): 1.0, (2,): 1.0, (1, 2): -1.5})
    verdict = nm.is_infinitely_divisible(bad)
    assert not verdict["accepted"]
    assert verdict["witness"] == (1, 2)
    assert verdict["witness_value"] == pytest.approx(-0.5)


def test_expand(ex1, ex2):
    c = nm.expand(ex1, 0.5, 3)
    assert list(c)[:3] == [(0, 0), (1, 0), (0, 1)]
    assert c[(1, 1)] == pytest.approx(0.5)
    assert c[(2, 1)] == pytest.approx(9 / 16)
    c2 = nm.expand(ex2, 1.5, 3)
    assert c2[(1, 1, 1)] == pytest.approx(195 / 8)


def test_domain(ex1, ex2):
    assert nm.smallest_positive_root(nm.ps_poly(ex1, [0, 0])) == pytest.approx(2 - math.sqrt(2), rel=1e-12)
    assert nm.smallest_positive_root(nm.ps_poly(ex2, [0, 0, 0])) == pytest.approx(
        (math.sqrt(21) - 3) / 6, rel=1e-12
    )
    v = nm.classify(ex1, [-math.log(2)] * 2)
    assert v["classification"] == "inside" and v["margin"] > 1e-3
    assert nm.classify(ex1, [0, 0])["classification"] == "outside"
    theta = nm.boundary_point(ex1, [0.3, -0.3])
    assert nm.classify(ex1, theta)["classification"] == "boundary"


def test_boundary_grid(ex2):
    rows = nm.boundary_grid(ex2, "-1:1:0.5", "-1:1:0.5", threads=2)
    assert len(rows) == 25
    assert all(residual <= 1e-10 for _, _, residual in rows)
    assert nm.boundary_grid(ex2, (-1, 1, 0.5), (-1, 1, 0.5)) == rows


def test_distribution(ex1):
    d = nm.Distribution(ex1, [0.5, 0.5], 1.0)
    constant, terms = d.pgf()
    assert constant == pytest.approx(8)
    assert terms == pytest.approx({(1,): -4, (2,): -4, (1, 2): 1})
    probs, tail = d.pmf(6)
    assert probs[(1, 1)] == pytest.approx(3 / 64)
    assert 0 < tail < 1
    assert sum(probs.values()) + tail == pytest.approx(1)

    d2 = nm.Distribution(ex1, [0.5, 0.5], 2.0)
    assert d2.mean() == pytest.approx([6, 6])
    draws = d2.sample(2000, seed=5)
    assert draws == d2.sample(2000, seed=5)
    assert len(draws) == 2000 and all(len(x) == 2 for x in draws)
    avg = sum(x[0] for x in draws) / len(draws)
    assert abs(avg - 6) < 1.0


def test_distribution_rejections(ex1):
    with pytest.raises(nm.DomainRejected) as info:
        nm.Distribution(ex1, [1.0, 1.0], 1.0)
    assert info.value.margin < 0
    with pytest.raises(nm.ExcessTailMass):
        nm.Distribution(ex1, [0.5, 0.5], 2.0).sample(10, seed=1, degree=4)
    with pytest.raises(nm.DimensionMismatch):
        nm.Distribution(ex1, [0.5], 1.0)
