import math

import lpplab


def test_version():
    assert lpplab.__version__ == "1.0.0"


def test_marginal_round_trip():
    law = lpplab.marginal("exp:theta=2")
    assert math.isclose(law.mean(), 0.5)
    for u in (0.1, 0.5, 0.9):
        assert math.isclose(law.survival(law.upper_quantile(u)), u, rel_tol=1e-10)
    assert math.isclose(law.premium(0.0), 0.5, rel_tol=1e-10)


def test_worst_case_law_mean():
    law = lpplab.worst_case_law("line:10", "exp:theta=1")
    assert math.isclose(law.mean(), 10.0 + math.lgamma(11.0), rel_tol=1e-9)
    assert math.isclose(law.variance(), 100.0, rel_tol=1e-9)


def test_frechet_envelope():
    env = lpplab.frechet_envelope("exp:theta=1", 4)
    assert math.isclose(env.support_min(), math.log(4.0), rel_tol=1e-10)
    assert math.isclose(env.survival(2.0), 4.0 * math.exp(-2.0), rel_tol=1e-10)


def test_simulate_is_deterministic_across_threads():
    a = lpplab.simulate("exp:theta=1", "line:6", "flat:polya", 500, seed=9, threads=1)
    b = lpplab.simulate("exp:theta=1", "line:6", "flat:polya", 500, seed=9, threads=4)
    assert a == b
    assert len(a) == 500
    assert all(x > 0 for x in a)


def test_simulate_moments():
    values = lpplab.simulate("exp:theta=1", "line:10", "flat:polya", 20000, seed=3)
    m = lpplab.moments(values)
    target = 10.0 + math.lgamma(11.0)
    assert abs(m["mean"] - target) < 4.0 * m["se_mean"]
    assert abs(m["var"] - 100.0) < 4.0 * m["se_var"]


def test_ks_against_generating_law():
    law = lpplab.marginal("unif")
    values = lpplab.simulate("unif", "line:1", "iid", 20000, seed=4)
    assert lpplab.ks_distance(values, law) < lpplab.ks_critical(20000)


def test_shape_functions():
    assert math.isclose(lpplab.shape_convex_bound(0.5), -1.0 - math.log(2.0))
    assert math.isclose(lpplab.shape_rost(0.5), 2.0)
    assert math.isclose(lpplab.harmonic(4), 25.0 / 12.0)


def test_block_calibration():
    b = lpplab.block_b_for_n(5)
    assert 0 < b < 20
    assert lpplab.variance_law("exp:theta=1", b, 5) > lpplab.variance_law(
        "exp:theta=1", b + 1.0, 5
    )
