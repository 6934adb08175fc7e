from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from quotfib.acceptance import fiber_product_example
from quotfib.classify import FibrationClass, canonical_generators
from quotfib.errors import ActionOrderMismatch, Incompatible, LevelIncompatible, ParseError
from quotfib.fiberprod import (
    DeltaGenerator,
    base_class,
    build_model,
    check_universal_property,
    combined_classes,
    compatible_tuples,
    corrupt_transport,
    factor_classes,
    factor_orbit,
    model_spec_from_json,
    model_spec_to_json,
    orbit_of,
    project_factor,
    psi_construct,
)

C1 = FibrationClass(1, 1)
C2 = FibrationClass(2, 1, canonical_generators(2, 1))
C3 = FibrationClass(3, 1, canonical_generators(3, 1))
C4 = FibrationClass(4, 2, canonical_generators(4, 2))


def statuses(entries):
    return {e["check_id"].split(".")[1]: e["status"] for e in entries}


@pytest.fixture(scope="module")
def model():
    return fiber_product_example()


def test_trivial_delta_has_singleton_orbits():
    m = build_model(2, [C1], [], rank=1)
    assert m.elements == ((0,),)
    p = ((1,), (0,))
    assert orbit_of(m, p).orbit == frozenset({p})
    assert all(s == "pass" for s in statuses(check_universal_property(m)).values())


def test_order_mismatch():
    gen = DeltaGenerator((F(1, 2), F(0)), ((1,),))
    with pytest.raises(ActionOrderMismatch):
        build_model(2, [C3], [gen])


def test_level_mismatch():
    gen = DeltaGenerator((F(1, 3), F(0)), ((1,),))
    with pytest.raises(LevelIncompatible):
        build_model(2, [C2], [gen])


def test_orbits_are_free_and_constant(model):
    for x in model.base_points():
        for alphas in [(0, 0), (1, 4), (5, 2)]:
            cls = orbit_of(model, (x, alphas))
            assert len(cls.orbit) == 2
            for p in cls.orbit:
                assert orbit_of(model, p) == cls


def test_projection_matches_factor_orbits(model):
    for cls in combined_classes(model):
        for i in range(model.r):
            images = {factor_orbit(model, i, (x, al[i])) for x, al in cls.orbit}
            assert images == {project_factor(model, cls, i)}
            assert base_class(model, project_factor(model, cls, i).representative[0]) == \
                base_class(model, cls.representative[0])


def test_hand_enumerated_factor_orbits(model):
    # Delta = <(1, 0)> acts freely on 4 base points x 6 sample points; the
    # generator's fiber action is the permutation (0 3)(1 2)
    swap = {0: 3, 3: 0, 1: 2, 2: 1, 4: 4, 5: 5}
    expected = set()
    for y in (0, 1):
        for a in range(6):
            expected.add(frozenset({((0, y), a), ((1, y), swap[a])}))
    assert {c.orbit for c in factor_classes(model, 0)} == expected
    assert len(expected) == 12


def test_psi_is_a_section(model):
    for cls in combined_classes(model):
        proj = [project_factor(model, cls, i) for i in range(model.r)]
        assert psi_construct(model, proj) == cls


def test_psi_bijection_counts(model):
    assert len(combined_classes(model)) == len(compatible_tuples(model)) == 72


def test_incompatible_classes(model):
    a = factor_orbit(model, 0, ((0, 0), 0))
    b = factor_orbit(model, 1, ((0, 1), 0))
    with pytest.raises(Incompatible):
        psi_construct(model, [a, b])


def test_universal_property_and_negative_control(model):
    assert set(statuses(check_universal_property(model)).values()) == {"pass"}
    bad = statuses(check_universal_property(corrupt_transport(model)))
    assert bad["uniqueness"] == "fail"


def test_klein_fibers_and_three_factors():
    g1 = DeltaGenerator((F(1, 2), F(0)), ((1, 0), (1,), (0,)))
    g2 = DeltaGenerator((F(0), F(1, 2)), ((0, 1), (0,), (1,)))
    m = build_model(2, [C4, C2, C2], [g1, g2])
    assert len(m.elements) == 4
    assert set(statuses(check_universal_property(m)).values()) == {"pass"}


@settings(max_examples=10)
@given(st.integers(min_value=0, max_value=1), st.integers(min_value=0, max_value=1))
def test_random_case2_actions(e1, e2):
    gen = DeltaGenerator((F(1, 2), F(1, 2)), ((e1,), (e2,)))
    m = build_model(2, [C2, C2], [gen])
    assert set(statuses(check_universal_property(m)).values()) == {"pass"}


def test_model_spec_json_round_trip(model):
    obj = model_spec_to_json(model.rank, model.factors, model.generators)
    rank, factors, delta0 = model_spec_from_json(obj)
    assert rank == model.rank and tuple(factors) == model.factors and tuple(delta0) == model.generators
    with pytest.raises(ParseError):
        model_spec_from_json({**obj, "extra": 1})
