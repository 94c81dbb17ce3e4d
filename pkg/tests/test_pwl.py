from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from kneadforge import (
    AmbiguousBranch,
    BimodalMap,
    CombData,
    InfeasibleMap,
    MalformedSigma,
    PLMap,
    entropy,
    feasibility,
    validate_space,
)
from kneadforge.algebra import AlgValue, IntPoly
from kneadforge.bifurcation import interval_chart
from kneadforge.pwl import J, boundary_offsets, c, turning_point_formula

lams = st.fractions(min_value=Fraction(11, 10), max_value=3, max_denominator=40).filter(lambda x: x > 1)


@st.composite
def feasible_bimodal(draw):
    lam = draw(lams)
    bound = (3 - lam) / (lam - 1)
    t = draw(st.fractions(min_value=-1, max_value=1, max_denominator=50))
    return BimodalMap(lam, t * bound)


def test_validate_bimodal():
    rep = validate_space(CombData.bimodal())
    assert rep.valid and rep.essential and rep.cyclic


def test_validate_two_interval_cycle():
    rep = validate_space(CombData(2, (2, 1), (1, 1), (-1, -1)))
    assert rep.valid and rep.cyclic


def test_validate_not_essential():
    rep = validate_space(CombData(2, (1, 1), (1, 0), (1, 1)))
    assert rep.valid and not rep.essential


def test_validate_malformed_sigma():
    with pytest.raises(MalformedSigma):
        validate_space(CombData(2, (1, 3), (1, 1), (1, 1)))


def test_bimodal_feasibility_examples():
    assert BimodalMap(2, 0).feasible
    bad = BimodalMap(2, Fraction(3, 2))
    assert not bad.feasible
    assert [v.constraint for v in bad.violations()] == ["b-range"]
    assert BimodalMap(2, 0).b_bound() == 1


def test_general_feasibility_matches_bimodal():
    m = BimodalMap(2, 0).to_plmap()
    assert m.comb == CombData.bimodal()
    assert m.to_bimodal().b == 0
    rep = feasibility(CombData.bimodal(), 2, (0, 1), [(0, Fraction(5, 2), -1)])
    assert not rep.feasible and any(v.constraint == "turning-value" for v in rep.violations)


def test_collision_feasible_example():
    # l = 3, s = +1 on [0, 1] with offsets (0, lam, b2, lam): c^2 = c^3 = (lam - b2) / (2 lam)
    lam = Fraction(3, 2)
    rep = feasibility(CombData.single(3, 1), lam, (0, 1), [(0, lam, Fraction(-1, 2), lam)])
    assert rep.feasible and rep.collisions == ((1, 2),)
    assert not rep.map.simple


def test_strict_mode_separation():
    lam = Fraction(3, 2)
    rep = feasibility(CombData.single(3, 1), lam, (0, 1), [(0, lam, Fraction(-1, 2), lam)], strict_eps=Fraction(1, 100))
    assert not rep.feasible and any(v.constraint == "turning-separation" for v in rep.violations)


def test_fixed_boundary_points():
    m = BimodalMap(2, Fraction(1, 3))
    assert m.evaluate(m.a) == m.a
    assert m.evaluate(-m.a) == -m.a


def test_turning_values_and_points():
    m = BimodalMap(2, 0)
    assert m.turning_points() == (Fraction(-1, 4), Fraction(1, 4))
    b = Fraction(1, 5)
    m = BimodalMap(2, b)
    assert m.evaluate(m.c1) == (b + 1) / 2
    assert m.evaluate(m.c2) == (b - 1) / 2


def test_turning_point_at_lambda_e(lam_e):
    m = BimodalMap(lam_e, 0)
    assert abs(float(m.c1) + 0.3931) < 1e-4
    assert m.c1 == -1 / (2 * AlgValue.lam(lam_e))


def test_turning_point_formula_symbolic():
    # the general formula agrees with the bimodal chart values
    for lam in (Fraction(3, 2), Fraction(5, 2)):
        m = BimodalMap(lam, Fraction(1, 7))
        L = m.lam
        one = AlgValue.const(1, m.alpha)
        assert turning_point_formula(L, 1, 1, one, m.b) == m.c1
        assert turning_point_formula(L, 1, 2, m.b, -one) == m.c2


def test_orbit_period_six_at_lambda_e(lam_e):
    m = BimodalMap(lam_e, 0)
    pts = m.orbit(m.c1, 6)
    assert pts[6].value == m.c1 and all(p.value != m.c1 for p in pts[1:6])


def test_ambiguous_branch_in_strict_mode():
    m = BimodalMap(2, 0)
    with pytest.raises(AmbiguousBranch):
        m.evaluate(m.c1, turning="strict")


def test_outside_domain_rejected():
    with pytest.raises(ValueError):
        BimodalMap(2, 0).evaluate(5)


def test_entropy_is_log_lambda():
    import math
    assert entropy(BimodalMap(Fraction(5, 2), 0)) == pytest.approx(math.log(2.5))


@given(feasible_bimodal())
def test_continuity_at_turning_points(m):
    for i, cp in enumerate(m.turning_points(), start=1):
        left, right = m.branch(i - 1, cp), m.branch(i, cp)
        assert left == right == m.turning_values()[i - 1]


@given(feasible_bimodal(), st.fractions(min_value=-1, max_value=1, max_denominator=30))
def test_orbits_stay_in_domain(m, t):
    lo, hi = m.domain()
    x = m.a * t
    for p in m.orbit(x, 12):
        assert lo <= p.value <= hi


@given(feasible_bimodal(), st.fractions(min_value=-1, max_value=1, max_denominator=30))
def test_odd_symmetry(m, t):
    x = m.a * t
    mirrored = m.mirror()
    assert mirrored.evaluate(-x) == -m.evaluate(x)


@given(feasible_bimodal())
def test_unit_chart_feasibility_equivalent(m):
    pl = m.to_plmap()
    assert pl.to_bimodal().b == m.b
    for x in (m.c1, m.c2, -m.a, m.a):
        assert pl.evaluate(m.to_unit(x)) == m.to_unit(m.evaluate(x))


@given(lams, st.fractions(min_value=-4, max_value=4, max_denominator=20))
def test_feasibility_equivalent_across_charts(lam, b):
    m = BimodalMap(lam, b)
    L = m.lam
    b1 = ((L + 1) + m.b * (L - 1)) / 2
    rep = feasibility(CombData.bimodal(), lam, (0, 1), [(0, b1, 1 - L)])
    assert rep.feasible == m.feasible


@pytest.mark.parametrize("l", [1, 2, 3, 4])
@pytest.mark.parametrize("s", [1, -1])
def test_boundary_offsets_match_chart(l, s):
    lam = Fraction(5, 2)
    first, last = boundary_offsets(CombData.single(l, s), lam)[0]
    ch = interval_chart(l, s)
    assert first == ch.b0(lam) and last == ch.bl(lam)


def test_orbit_symbols():
    m = BimodalMap(2, 0)
    syms = [p.symbol for p in m.orbit(Fraction(3, 10), 3)]
    assert syms == [J(2), J(0), J(1), J(0)]
    assert m.locate(m.c2) == c(2)


def test_infeasible_create_raises():
    with pytest.raises(InfeasibleMap):
        PLMap.create(CombData.bimodal(), 2, (0, 1), [(0, 5, -1)])
