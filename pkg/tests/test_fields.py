import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wumetric.busemann import HomogeneousFunction
from wumetric.errors import InvariantError, UnsupportedPointError
from wumetric.fields import (
    Ball,
    GEps,
    MetricField,
    Polydisc,
    ex1_field,
    ex3_field,
    kobayashi_model,
    model_field,
    remark_field,
    scan,
    wu_at,
    wu_field,
)
from wumetric.hermitian import complex_gaussian
from wumetric.seminorm import MaxCombination, ProductMax, ScaledEuclidean

TOL = 1e-6
SEQ2 = [(1.0 / k, 0.0) for k in range(1, 41)]
SEQ3 = [(1.0 / k, 0.0, 0.0) for k in range(1, 41)]
GAP = math.sqrt(2) - 2 / math.sqrt(3)


# kobayashi_model


def test_ball_model():
    h = kobayashi_model(Ball(2, 1.0), [0, 0])
    assert isinstance(h, ScaledEuclidean) and h.scale == 1.0


def test_truncated_ball_model():
    h = kobayashi_model(GEps(0.5), [0, 0])
    assert isinstance(h, MaxCombination)
    assert h([0.4, 0.5]) == pytest.approx(0.8)


def test_polydisc_model():
    h = kobayashi_model(Polydisc(2), [0, 0])
    assert isinstance(h, ProductMax)
    assert h([0.2, 0.9]) == pytest.approx(0.9)
    # product formula: W of the polydisc metric at (1, 1) is sqrt(1 + 1)
    assert wu_field(model_field(Polydisc(2)), [0, 0], [1, 1]) == pytest.approx(math.sqrt(2), abs=1e-5)


@pytest.mark.parametrize("desc", [Ball(2, 1.0), GEps(0.5), Polydisc(2)])
def test_models_only_at_center(desc):
    with pytest.raises(UnsupportedPointError):
        kobayashi_model(desc, [0.1, 0])


# wu_field


def test_ex1_away_from_origin():
    assert wu_field(ex1_field(0.5), [0.3, 0], [0, 1]) == pytest.approx(math.sqrt(2), abs=1e-6)


def test_ex1_at_origin():
    assert wu_field(ex1_field(0.5), [0, 0], [0, 1]) == pytest.approx(2 / math.sqrt(3), abs=1e-3)


def test_remark_unnormalized_along_sequence():
    v = wu_field(remark_field(), [0.5, 0, 0], [0, 0, 1], normalized=False)
    assert v == pytest.approx(math.sqrt(0.5), abs=1e-6)


def test_non_convex_assignment_goes_through_busemann():
    def collapsed(Z):
        out = np.linalg.norm(Z, axis=1)
        out[np.abs(Z[:, 1]) <= 1e-14 * out] = 0.0
        return out

    f = HomogeneousFunction(None, 2, batch_evaluator=collapsed)
    field = MetricField(None, 2, lambda z: f)
    r = wu_at(field, [0, 0], directions=500)
    assert r.m == 1
    assert r([1, 0]) <= 1e-8


# scan


def test_ex1_scan_flags_usc():
    rep = scan(ex1_field(0.5), SEQ2, (0, 0), (0, 1), TOL)
    assert rep.usc_violation and not rep.lsc_violation
    assert rep.usc_gap == pytest.approx(GAP, abs=1e-3)


def test_ex3_scan_flags_lsc():
    rep = scan(ex3_field(0.3, 8.0), SEQ2, (0, 0), (0, 1), TOL)
    assert rep.lsc_violation
    assert max(rep.values[20:]) <= math.sqrt(2) / 8 + 1e-6
    assert rep.limit_value >= 0.3 - 1e-6


def test_constant_ball_field_has_no_flags():
    rep = scan(model_field(Ball(2, 2.0)), SEQ2, (0, 0), (0, 1), TOL)
    assert not rep.usc_violation and not rep.lsc_violation
    assert rep.limit_value == pytest.approx(math.sqrt(2) / 2, abs=1e-6)


def test_short_sequence_rejected():
    with pytest.raises(ValueError):
        scan(ex1_field(0.5), SEQ2[:19], (0, 0), (0, 1))


def test_flags_follow_declared_tolerance():
    rep = scan(ex1_field(0.5), SEQ2, (0, 0), (0, 1), TOL)
    assert rep.tolerance == 10 * TOL
    assert rep.usc_violation == (rep.limsup_estimate > rep.limit_value + rep.tolerance)
    assert rep.lsc_violation == (rep.liminf_estimate < rep.limit_value - rep.tolerance)


def test_parallel_scan_matches_serial():
    a = scan(ex3_field(0.3, 8.0), SEQ2, (0, 0), (0, 1), TOL)
    b = scan(ex3_field(0.3, 8.0), SEQ2, (0, 0), (0, 1), TOL, workers=4)
    assert a.values == b.values and a.limit_value == b.limit_value


def test_scan_is_stable_under_reordering_the_head():
    field = ex1_field(0.5)
    base = scan(field, SEQ2, (0, 0), (0, 1), TOL)
    shuffled = SEQ2[:20][::-1] + SEQ2[20:]
    other = scan(field, shuffled, (0, 0), (0, 1), TOL)
    assert (base.usc_violation, base.lsc_violation) == (other.usc_violation, other.lsc_violation)


@pytest.mark.parametrize("eps", [0.1, 0.3, 0.5, 0.7])
def test_ex1_flags_for_every_eps_and_not_for_control(eps):
    rep = scan(ex1_field(eps), SEQ2, (0, 0), (0, 1), TOL)
    assert rep.usc_violation
    assert rep.usc_gap == pytest.approx(math.sqrt(2) - 1 / math.sqrt(1 - eps**2), abs=1e-3)
    ctl = scan(ex1_field(eps, control=True), SEQ2, (0, 0), (0, 1), TOL)
    assert not ctl.usc_violation and not ctl.lsc_violation


def test_remark_contrast():
    f = remark_field()
    raw = scan(f, SEQ3, (0, 0, 0), (0, 0, 1), TOL, normalized=False)
    assert min(raw.values) >= math.sqrt(0.5) - 10 * TOL
    assert raw.limit_value == pytest.approx(math.sqrt(1 / 3), abs=10 * TOL)
    assert raw.usc_violation
    norm = scan(f, SEQ3, (0, 0, 0), (0, 0, 1), TOL)
    assert np.allclose(norm.values + [norm.limit_value], 1.0, atol=10 * TOL)
    assert not norm.usc_violation and not norm.lsc_violation


# ex3_field


def test_ex3_values():
    f = ex3_field(0.3, 8.0)
    assert wu_field(f, (0, 0), (0, 1)) >= 0.3
    assert wu_field(f, (0.25, 0), (0, 1)) <= math.sqrt(2) / 8


def test_ex3_parameter_condition():
    with pytest.raises(InvariantError):
        ex3_field(0.3, 4.0)


def test_ex3_values_monotone_in_delta():
    vals = [wu_field(ex3_field(0.3, 8.0, delta=d), (0.5, 0), (0, 1)) for d in (0.1, 0.05, 0.01, 0.001)]
    assert all(b <= a + 10 * TOL for a, b in zip(vals, vals[1:]))


# properties


FIELDS = [ex1_field(0.5), ex3_field(0.3, 8.0), remark_field(), model_field(Ball(3, 1.5))]


@settings(settings.get_profile("solver"))
@given(st.integers(0, len(FIELDS) - 1), st.integers(0, 2**32 - 1), st.booleans())
def test_sandwich_at_field_points(i, seed, on_axis):
    field = FIELDS[i]
    rng = np.random.default_rng(seed)
    z = np.zeros(field.dim, dtype=complex)
    if on_axis:
        z[0] = rng.uniform(0.01, 0.5)
    h = field(z)
    r = wu_at(field, z, TOL, seed)
    X = complex_gaussian(rng, (50, field.dim))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    hv, wv = h.eval_many(X), r.norm_many(X)
    assert np.all(hv - 5 * TOL <= wv) and np.all(wv <= math.sqrt(r.m) * hv + 5 * TOL)


@pytest.mark.parametrize("field", FIELDS)
def test_local_boundedness(field):
    z = np.zeros(field.dim)
    z[0] = 0.1
    assert 0 < field.local_bound(z) < np.inf
    assert 0 < field.local_bound(np.zeros(field.dim)) < np.inf
