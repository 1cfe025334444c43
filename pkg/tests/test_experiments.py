import math

import numpy as np
import pytest

from relcond.errors import InputError
from relcond.experiments import (RNG_ALGORITHM, census_v1w1, componentwise_ratio_study,
                                 fj_maxima_study, instance_rng, ratio_r_study,
                                 sample_gaussian_instance, sample_qut_instance, summarize)
from relcond.linalg import P2


def test_instance_rng_golden():
    assert instance_rng(0, 0).standard_normal(3).tolist() == [
        1.4436909546981256, -0.8959459763857414, 0.735955670177038]
    assert instance_rng(7, 3).uniform(size=2).tolist() == [0.9823227993863488, 0.06095134637418598]
    assert "PCG64" in RNG_ALGORITHM


def test_instance_streams_differ():
    a = instance_rng(1, 0).standard_normal(4)
    b = instance_rng(1, 1).standard_normal(4)
    c = instance_rng(2, 0).standard_normal(4)
    assert not np.allclose(a, b) and not np.allclose(a, c)


def test_normal_moments():
    x = instance_rng(123, 0).standard_normal(1_000_000)
    assert abs(x.mean()) < 5e-3
    assert abs(x.var() - 1.0) < 5e-3


def test_summarize_nearest_rank():
    s = summarize(np.arange(1, 11, dtype=float))
    assert s.median == 5.0 and s.decile1 == 1.0 and s.decile9 == 9.0 and s.percentile99 == 10.0
    assert s.min == 1.0 and s.max == 10.0 and s.mean == 5.5 and s.count == 10
    assert math.isnan(summarize([]).median)
    assert set(s.as_dict()) >= {"median", "decile1", "decile9"}


def test_qut_reconstruction():
    rng = instance_rng(4, 0)
    G = rng.standard_normal((5, 5))
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(R))[None, :]
    U = np.triu(rng.standard_normal((5, 5)))
    A, _ = sample_qut_instance(5, instance_rng(4, 0))
    np.testing.assert_allclose(A, Q @ U @ Q.T, atol=1e-14)
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(A).real), np.sort(np.diag(U)), atol=1e-8)


def test_samplers_reject_small_n():
    with pytest.raises(InputError):
        sample_gaussian_instance(1, instance_rng(0, 0))
    with pytest.raises(InputError):
        sample_qut_instance(1, instance_rng(0, 0))


def test_census_golden_and_deterministic():
    r = census_v1w1(5, 3, seed=0)
    assert r.records["V1"].tolist() == [0.6101614584812777, 0.5186137311679611, 0.07353290918669239]
    assert r.tallies == {"draws": 9, "real": 6}
    r2 = census_v1w1(5, 3, seed=0)
    np.testing.assert_array_equal(r.records["W1"], r2.records["W1"])


def test_census_values_in_unit_interval():
    r = census_v1w1(4, 100, seed=1)
    assert np.all((r.records["V1"] >= 0) & (r.records["V1"] <= 1))
    assert np.all((r.records["W1"] >= 0) & (r.records["W1"] <= 1))
    assert r.summary["V1"].count == 100


def test_census_empty_thresholds():
    r = census_v1w1(4, 5, seed=0, thresholds=())
    assert r.extra["pct_V1_gt"] == {}


def test_parallel_matches_serial():
    a = census_v1w1(5, 40, seed=9, workers=1)
    b = census_v1w1(5, 40, seed=9, workers=2)
    assert a.records["V1"].tobytes() == b.records["V1"].tobytes()
    assert a.tallies == b.tallies
    a = ratio_r_study(4, 6, seed=2, points=100, workers=1)
    b = ratio_r_study(4, 6, seed=2, points=100, workers=2)
    assert a.records["R"].tobytes() == b.records["R"].tobytes()


def test_gaussian_rejection_rate_small():
    r = ratio_r_study(5, 40, seed=0, rightmost="any", points=200)
    assert r.rejection_rate < 0.01


def test_ratio_balanced_alternates():
    r = ratio_r_study(4, 10, seed=0, points=200)
    assert r.meta["rightmost"] == "balanced"
    kinds = r.records["kind"].tolist()
    assert kinds[0::2] == ["real"] * 5 and kinds[1::2] == ["complex_pair"] * 5
    assert np.all(r.records["R"] > 0)


def test_ratio_symmetric_is_one():
    r = ratio_r_study(5, 30, seed=1, sampler="symmetric", norm=P2, points=400)
    np.testing.assert_allclose(r.records["R"], 1.0, rtol=0.05)


def test_ratio_rejects_unknown_options():
    with pytest.raises(InputError):
        ratio_r_study(4, 1, sampler="nope")
    with pytest.raises(InputError):
        ratio_r_study(4, 1, rightmost="left")


def test_gdpnd_study():
    r = componentwise_ratio_study("gdpnd", 3, seed=0)
    assert r.records["R"].tolist() == [11.604257051086424, 1.9079179530703763, 42.903410340611515]
    r = componentwise_ratio_study("gdpnd", 300, seed=5)
    assert r.extra["min_R"] >= math.sqrt(2)
    assert np.all(r.records["a12"] < 0) and np.all(r.records["a22"] > 0)
    r = componentwise_ratio_study("gdpnd", 50, seed=5, a22_sign=-1)
    assert np.all(r.records["a22"] < 0) and r.extra["min_R"] >= math.sqrt(2)
    with pytest.raises(InputError):
        componentwise_ratio_study("gdpnd", 5, a22_sign=0.5)


def test_general_componentwise_study():
    r = componentwise_ratio_study("general", 20, seed=0, n=30)
    for t in (0.1, 1, 10):
        assert np.all(r.records[f"R_t{t:g}"] >= 1.0)
        for M in (10, 100):
            frac = r.records[f"r_t{t:g}_M{M:g}"]
            assert np.all((frac >= 0) & (frac <= 1))
        assert np.all(r.records[f"r_t{t:g}_M100"] <= r.records[f"r_t{t:g}_M10"])
    with pytest.raises(InputError):
        componentwise_ratio_study("other", 1)


def test_fj_maxima():
    r = fj_maxima_study(10, 40, seed=0)
    assert r.extra["all_M_hat_le_M"]
    assert np.all(r.records["M_hat"] <= r.records["M"] + 1e-12)
    assert np.all(r.records["f1"] >= 1 - 1e-9)


def test_fj_maxima_symmetric_is_zero():
    r = fj_maxima_study(8, 10, seed=0, sampler="symmetric")
    np.testing.assert_allclose(r.records["M"], 0.0, atol=1e-10)
    np.testing.assert_allclose(r.records["M_hat"], 0.0, atol=1e-10)
