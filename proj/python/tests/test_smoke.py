import math

import pytest

import bincorr


TOL = 1e-12


def test_pmf_and_table():
    spec = bincorr.ModelSpec.parallel([0.7, 0.7])
    assert abs(bincorr.pmf(spec, "00") - 0.29) < 1e-12
    table = bincorr.pmf_table(spec)
    assert len(table) == 4
    assert abs(sum(table) - 1.0) < 1e-12


def test_covariance_and_entropy():
    spec = bincorr.ModelSpec.serial_constant(4, 0.7)
    cov = bincorr.covariance_exact(spec)
    assert abs(cov[0][2] - 0.25 * 0.4**2) < 1e-12
    hb = bincorr.binary_entropy(0.7)
    assert abs(bincorr.joint_entropy_exact(spec) - (1 + 3 * hb)) < 1e-12
    assert abs(bincorr.joint_entropy_closed(spec) - (1 + 3 * hb)) < 1e-12
    report = bincorr.entropy_report(spec)
    assert report["exact"] is not None


def test_bounds_and_region():
    spec = bincorr.ModelSpec.parallel([0.7, 0.7, 0.8])
    lo, hi = bincorr.entropy_bounds(spec)
    assert lo - TOL <= bincorr.joint_entropy_exact(spec) <= hi + TOL
    constraints = bincorr.region_constraints(spec, 0.5)
    assert len(constraints) == 7
    inside, violated = bincorr.membership(spec, 0.5, [0.0, 0.0, 0.0])
    assert not inside and violated
    pts = bincorr.characteristic_points(spec, 0.5)
    assert pts["lambda_bal"] >= pts["lambda_unb"]


def test_sampling_is_reproducible():
    spec = bincorr.ModelSpec.mixed([[1.0, 0.8], [1.0, 0.8]])
    a = bincorr.sample(spec, 7, 20)
    assert a == bincorr.sample(spec, 7, 20)
    assert all(len(x) == 4 for x in a)


def test_json_round_trip():
    spec = bincorr.ModelSpec.linear(["10", "11"], [0.5, 0.7])
    again = bincorr.ModelSpec.from_json(spec.to_json())
    assert again == spec
    assert again.kind == "linear"


def test_gf2():
    assert bincorr.gf2_determinant(["11", "11"]) is False
    assert bincorr.gf2_invert(["100", "110", "111"]) == ["100", "110", "011"]
    assert bincorr.circulant_rule(9, 3) == "singular_divides_n"
    assert bincorr.toeplitz_nonsingular_fraction(1, 3) == 0.5


def test_errors():
    with pytest.raises(bincorr.InvalidSpec):
        bincorr.ModelSpec.parallel([1.0, 0.2])
    with pytest.raises(bincorr.CapExceeded):
        bincorr.pmf_table(bincorr.ModelSpec.serial_constant(30, 0.7))
    assert issubclass(bincorr.CapExceeded, bincorr.Error)
    assert math.isfinite(bincorr.asymptotic_rate(bincorr.ModelSpec.serial_constant(5, 0.9)))
