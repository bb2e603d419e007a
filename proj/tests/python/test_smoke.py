import json
import math
import os
import subprocess

import pytest

import archetypal as ar


def test_classify_reports_regime():
    rep = ar.classify(ar.preset("de_rham"))
    assert abs(rep["K"] - math.log(3.0)) < 1e-12
    assert rep["regime"] == "supercritical"
    assert rep["q"] == 0.0
    assert rep["kExact"] is True
    assert rep["assumptionFlags"] == {"i": True, "ii": True, "iii": True}


def test_preset_names_cover_the_demos():
    names = ar.preset_names()
    assert "de_rham" in names
    assert "bernoulli_convolution" in names
    assert len(names) == 7


def test_canonical_cdf_matches_the_uniform_limit():
    spec = ar.preset("bernoulli_convolution", {"a": 2.0})
    cc = ar.canonical_cdf(spec, 20000, 3)
    for x, want in [(-1.0, 0.25), (0.0, 0.5), (1.0, 0.75)]:
        assert cc.cdf(x) == pytest.approx(want, abs=0.02)
    assert cc.diagnostics.caveats == []
    assert cc.cdf.min() >= -2.0
    assert cc.cdf.max() <= 2.0


def test_charfn_is_normalized_at_zero():
    grid = ar.charfn(ar.preset("de_rham"), [0.0, 1.0, 5.0], 2000, 1)
    assert grid.values[0] == 1.0 + 0.0j
    assert all(abs(v) <= 1.0 + 1e-12 for v in grid.values)


def test_iterate_collapses_in_the_contracting_regime():
    spec = ar.preset("subcritical_demo")
    f0 = ar.GridFunction.sampled(-10.0, 10.0, 501, lambda x: math.cos(x))
    res = ar.iterate_operator(spec, f0, 60)
    assert res.final.interior_range(0.1) < 0.05
    assert not res.clamp_warning
    assert len(res.history) == 60
    assert res.history[-1].residual < res.history[0].residual


def test_run_suite_reports_pass():
    rep = ar.run_suite("classification")
    assert rep.passed
    assert rep.to_dict()["suite"] == "classification"
    assert rep.details["K"] == pytest.approx(math.log(3.0))


def test_same_seed_reproduces():
    spec = ar.preset("de_rham")
    a = [d.value for d in ar.sample_upsilon_batch(spec, 100, 7)]
    b = [d.value for d in ar.sample_upsilon_batch(spec, 100, 7)]
    c = [d.value for d in ar.sample_upsilon_batch(spec, 100, 8)]
    assert a == b
    assert a != c
    w1 = ar.canonical_cdf(spec, 5000, 1, workers=1)
    w4 = ar.canonical_cdf(spec, 5000, 1, workers=4)
    assert w1.cdf.sorted_samples() == w4.cdf.sorted_samples()


def test_error_taxonomy():
    degenerate = ar.MeasureSpec.discrete([(2.0, 1.0, 1.0)])
    with pytest.raises(ar.DegenerateError):
        ar.canonical_cdf(degenerate, 100, 0)
    with pytest.raises(ar.NotASolutionError):
        ar.canonical_cdf(ar.preset("negative_alpha_demo"), 100, 0)
    with pytest.raises(ar.RegimeError):
        ar.canonical_cdf(ar.preset("subcritical_demo"), 100, 0)
    assert issubclass(ar.DegenerateError, ar.Error)


def test_operator_preserves_constants():
    f = ar.GridFunction.constant(-3.0, 3.0, 101, 0.7)
    tf = ar.apply_operator(ar.preset("de_rham"), f)
    assert tf.values() == [0.7] * 101


def test_measure_spec_round_trip():
    spec = ar.preset("schilling_like")
    d = spec.to_dict()
    back = ar.MeasureSpec.from_dict(d)
    assert back.to_dict() == d
    assert 0.0 <= spec.q() <= 1.0


def test_cli_binary_classifies():
    cli = os.environ.get("ARCHETYPAL_CLI")
    if not cli or not os.path.exists(cli):
        pytest.skip("ARCHETYPAL_CLI not set")
    proc = subprocess.run([cli, "classify", "--preset", "de_rham"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["regime"] == "supercritical"
    assert rep["K"] == pytest.approx(math.log(3.0))
