import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from arboreal.curves import NAMED, CurvePoint, rational_point_search
from arboreal.dynamics import iterate_value_poly
from arboreal.param import (
    EXCLUDED_T,
    MembershipRecord,
    build_C_n,
    build_V_n,
    c3_gamma_base_point,
    c3_gamma_model,
    classify,
    enumerate_S_via_generators,
    normalized_V_n,
    records_to_csv,
    records_to_json,
    scan,
    scan_integers,
    section_residual,
    section_residual_at,
    surface_fiber,
    surface_report,
)


def test_v_n_sizes():
    for n in (2, 3, 4):
        assert len(build_V_n(0, n)) == 2 ** (n - 1)
    with pytest.raises(ValueError):
        build_V_n(0, 5)
    with pytest.raises(ValueError):
        build_C_n(0, 0)


def test_normalized_labels():
    labels0 = [c.label for c in normalized_V_n(0, 3)]
    assert "E1" in labels0 and "E2" in labels0
    for comp in normalized_V_n(1, 3):
        assert comp.model.contains is not None


@given(st.integers(-30, 30), st.integers(1, 30))
@settings(max_examples=40)
def test_normalization_transports_points(num, den):
    t = F(num, den)
    for comp in normalized_V_n(0, 3):
        g, h = comp.raw.g(t), comp.raw.h(t)
        if g == 0 or comp.removed(t) == 0:
            continue
        # g y^2 = h must imply g1 (s y)^2 = h1
        assert comp.model.g(t) * comp.y_factor(t) ** 2 * h == comp.model.h(t) * g


@pytest.mark.parametrize(
    "c,label,y",
    [(3, "E2", F(7, 2)), (F(-2, 3), "E2", F(5, 3)), (F(6, 19), "E2", F(103, 95)), (F(-17, 4), "E1", F(53, 8))],
)
def test_classify_members(c, label, y):
    r = classify(0, c)
    assert r.in_S is True
    assert r.witness_curve == label
    assert r.y == y
    assert NAMED[label].contains(CurvePoint(F(c), y))


@pytest.mark.parametrize("c", [0, -1, -2, 1, 2, 5])
def test_classify_non_members(c):
    r = classify(0, c)
    assert r.in_S is False
    if c in (0, -1):
        assert r.reason.startswith("degenerate")


def test_scan_integers():
    assert [r.c for r in scan_integers(0, -100, 100)] == [3]
    hits, unknown = scan(0, -20, 20)
    assert [r.c for r in hits] == [3] and unknown == []


def test_generator_enumeration():
    ts = [t for t, _ in enumerate_S_via_generators(N=3)]
    assert F(-2, 3) in ts and F(6, 19) in ts and F(-17, 4) in ts
    assert not set(ts) & set(EXCLUDED_T)
    assert enumerate_S_via_generators(N=0) == []


def test_rational_points_lie_in_S():
    for label in ("E1", "E2"):
        for P in rational_point_search(NAMED[label], 30):
            expected = P.x not in EXCLUDED_T
            assert classify(0, P.x).in_S is expected, (label, P)


def test_record_round_trip():
    r = classify(0, 3)
    back = MembershipRecord.from_json(json.loads(json.dumps(r.to_json())))
    assert back == r
    assert json.loads(records_to_json([r]))[0]["c"] == "3"
    assert records_to_csv([r]) == "c,in_S,witness_curve,y\n3,true,E2,7/2\n"


# --- surface ---------------------------------------------------------------


def test_surface_fiber_value():
    fib = surface_fiber(2)
    assert fib.a2 == F(1195, 52)
    assert fib.weierstrass().discriminant != 0


@given(st.fractions(max_denominator=20).filter(lambda v: abs(v) < 20))
@settings(max_examples=25)
def test_residual_two_paths_agree(gamma):
    assert section_residual()(gamma) == section_residual_at(gamma)


def test_base_point_on_c3():
    for gamma in (2, 3, F(1, 2), -1, F(5, 7)):
        M = c3_gamma_model(gamma)
        assert M.contains(c3_gamma_base_point(gamma))
        assert iterate_value_poly(F(gamma), 3)(0) == (F(gamma) ** 2 - gamma) ** 2


def test_surface_report():
    rep = surface_report()
    assert rep.base_point_holds and not rep.printed_base_point_holds
    assert rep.residual_is_zero is rep.residual.is_zero()
    assert json.loads(json.dumps(rep.to_json()))["residual_is_zero"] == rep.residual_is_zero
