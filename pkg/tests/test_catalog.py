from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodesy import algebra as alg
from geodesy import catalog as cat
from geodesy.errors import ParamOutOfRange, UnknownName
from geodesy.geodesic import verify_basis

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)


def all_instances():
    for entry in cat.entries():
        for params in cat.parameter_grid(entry):
            yield pytest.param(entry.name, params, id=cat.instantiate(entry.name, params).name)


@pytest.mark.parametrize("name,params", list(all_instances()))
def test_every_instance_is_a_lie_algebra(name, params):
    g = cat.instantiate(name, params)
    assert g.exact
    assert alg.validate(g) == []


@pytest.mark.parametrize("name,params", list(all_instances()))
def test_unimodular_flag_matches(name, params):
    entry, _ = cat.lookup(name)
    g = cat.instantiate(name, params)
    if entry.unimodular is not None:
        assert alg.is_unimodular(g) == entry.unimodular


@pytest.mark.parametrize("name,params", [p.values for p in all_instances() if cat.lookup(p.values[0])[0].has_witness])
def test_witnesses_are_exact_geodesic_bases(name, params):
    g = cat.instantiate(name, params)
    cert = verify_basis(g, *cat.witness(name, params))
    assert cert.passed and cert.exact and cert.max_defect == 0


@settings(max_examples=20)
@given(
    st.sampled_from(["M3", "M6", "M13", "g19", "g25"]),
    rationals,
    rationals,
)
def test_random_admissible_parameters_validate(name, a, b):
    entry, _ = cat.lookup(name)
    params = {}
    for p, v in zip(entry.params, (a, b)):
        params[p.name] = v
    try:
        resolved = cat.resolve_params(entry, params)
    except ParamOutOfRange:
        return
    g = cat.instantiate(name, resolved)
    assert alg.validate(g) == []
    if entry.has_witness:
        assert verify_basis(g, *cat.witness(name, resolved)).passed


def test_indexed_names():
    assert cat.instantiate("A_4").dim == 5
    assert cat.instantiate("R_2").dim == 2
    assert cat.instantiate("A_4").name == "A_4"


def test_unknown_and_out_of_range():
    with pytest.raises(UnknownName):
        cat.instantiate("nope")
    with pytest.raises(ParamOutOfRange):
        cat.instantiate("M3", {"a": -2})
    with pytest.raises(ParamOutOfRange):
        cat.instantiate("A_n", {"n": 7})
    with pytest.raises(ParamOutOfRange):
        cat.instantiate("g19", {"beta": 1})


def test_verdicts_are_pairs():
    for entry in cat.entries():
        gb, on = cat.verdict(entry.name)
        assert gb in ("yes", "no") and on in ("yes", "no")
        assert not (gb == "no" and on == "yes")


def test_g28_parameter_is_fixed():
    g = cat.instantiate("g28")
    assert g.c[0, 1, 1] == Fraction(-3, 2)
