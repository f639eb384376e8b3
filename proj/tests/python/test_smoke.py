from fractions import Fraction

import pytest

import moran_weights as mw


def test_version():
    assert mw.__version__.count(".") == 2


def test_pedigree_is_reproducible():
    a = mw.generate_pedigree(8, steps=7, seed=3)
    b = mw.generate_pedigree(8, steps=7, seed=3)
    assert a == b
    assert len(a) == 7
    for t, (time, child, parents) in enumerate(a):
        assert time == t
        assert len(set(parents) | {child}) == 3


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        mw.generate_pedigree(3, parent_count=4, variant="distinct")


def test_k2_stationary_law():
    nu = mw.stationary(10, 2)
    assert nu["{2}"] == Fraction(4, 13)
    assert nu["{1,1}"] == Fraction(9, 13)
    assert mw.stationary(10, 2, method="tree-theorem") == nu


def test_regime_error():
    with pytest.raises(ValueError):
        mw.exact(5, 6)


def test_joint_moment_and_limit():
    value, exact = mw.joint_moment(10, [2])
    assert exact == "40/13"
    assert value == pytest.approx(40 / 13)
    assert mw.K_closed_form([3, 1]) == "24/1"
    law = mw.MixtureLaw(2)
    assert law.cdf(0.0) == pytest.approx(0.5)
    assert law.moment(3) == "24/1"
    assert law.cdf(law.quantile(0.9)) == pytest.approx(0.9)


def test_convergence_single_replicate():
    r = mw.run_to_convergence(10, tracked=[0, 1], seed=5)
    assert len(r["ancestors"]) == 2
    for a in r["ancestors"]:
        assert a["converged"]
        assert a["upper"] - a["lower"] < 1e-9


def test_simulate_summary():
    s = mw.simulate(10, replicates=300, tracked=2, seed=9, jobs=2, moments=2)
    assert len(s["samples"]) == 300
    assert s["nonconverged"] == 0
    lo, hi = s["mean_M_ci"]["1"]
    assert lo < s["mean_M"]["1"] < hi
    again = mw.simulate(10, replicates=300, tracked=2, seed=9, jobs=1, moments=2)
    assert again["samples"] == s["samples"]


def test_verify_recursion():
    (result,) = mw.verify("recursion")
    assert result["passed"]
    assert set(mw.suite_names()) == {"recursion", "tree", "asymptotics", "lumping", "limit"}
