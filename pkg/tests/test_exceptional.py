import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kneadforge import BimodalMap, IntPoly, Itinerary, itinerary_of
from kneadforge.algebra import NotDivisible, RatFunc, divide_exact
from kneadforge.bifurcation import derive_bifurcation_eq
from kneadforge.exceptional import (
    SingularAtLambda,
    cascade_candidates,
    cascade_search,
    classify_turning_point,
    codim1_analyze,
    extract_factor,
    hyperbolic_approx_obstruction,
    nonrigidity_scan,
    records_to_csv,
    renormalization_check,
)
from kneadforge.pwl import c
from oracles import sympy_real_roots

I_PRIME = "c1 J2 J1 J2 J0 J2 c1"
BASE = "c1 J2 c1"
OCTIC_BASE = Itinerary.parse("c1 J1 J0 J2 c1").time_reversed()
OCTIC_EXT = Itinerary.parse("c1 J1 J0 J2 J1 J1 J0 J2 J0 J1 J0 J2 c1").time_reversed()


def P(*coeffs):
    return IntPoly(coeffs)


# -- classification ---------------------------------------------------------


def test_lambda_e_is_exceptional(lam_e):
    cl = classify_turning_point(BimodalMap(lam_e, 0), 1, 20)
    assert cl.kind == "Exceptional"
    assert cl.itinerary.symbols == Itinerary.parse(I_PRIME).symbols


def test_period_two_is_ordinary():
    cl = classify_turning_point(BimodalMap(2, Fraction(-1, 3)), 1, 20)
    assert cl.kind == "Ordinary" and cl.itinerary.symbols == Itinerary.parse(BASE).symbols
    assert cl.equation.reduced_form().Q1(2) == 3


def test_generic_orbit_not_controlled():
    cl = classify_turning_point(BimodalMap(2, 0), 1, 100)
    assert cl.kind == "NotControlled" and str(cl) == "NotControlled(100)"


# -- factors ----------------------------------------------------------------


@pytest.mark.parametrize("ext,factor", [
    ("c1 J2 J0 J2 c1", P(1, 0, 1)),
    ("c1 J2 J1 J2 c1", P(-1, 0, 1)),
    ("c1 J2 J1 J2 J0 J2 c1", P(-1, 0, -1, 0, 1)),
])
def test_period_two_factors(ext, factor):
    assert extract_factor(BASE, ext) == factor


def test_octic_factor():
    assert extract_factor(OCTIC_BASE, OCTIC_EXT) == P(-1, 0, 0, 0, -1, 0, 0, 0, 1)


def test_incompatible_pair_rejected():
    with pytest.raises(NotDivisible):
        extract_factor(BASE, "c1 J0 J1 J0 c1")


@settings(max_examples=20)
@given(st.integers(1, 3), st.data())
def test_factor_divides_every_component(k, data):
    cands = cascade_candidates(BASE, k)
    ext = data.draw(st.sampled_from(cands))
    F = extract_factor(BASE, ext)
    qb, qe = derive_bifurcation_eq(BASE).Q, derive_bifurcation_eq(ext).Q
    for a, b in zip(qe, qb):
        assert divide_exact(a, F) * F == a or divide_exact(a, F) * F == -a
        assert a == F * b or a == -(F * b)
    assert F.degree == max(q.degree for q in qe) - max(q.degree for q in qb)


# -- cascades ---------------------------------------------------------------


def test_candidate_order():
    cands = [str(x) for x in cascade_candidates(BASE, 2)]
    assert cands[:2] == ["c1 J2 J0 J2 c1", "c1 J2 J1 J2 c1"]
    assert cands[2] == "c1 J2 J0 J2 J0 J2 c1" and len(cands) == 6


def test_cascade_finds_lambda_e():
    recs = cascade_search(BASE, 2, (1, 2))
    hits = [r for r in recs if r.extended == Itinerary.parse(I_PRIME)]
    assert len(hits) == 1 and hits[0].realized
    lam, ri = hits[0].realizations[0]
    assert abs(float(lam) - 1.27202) < 1e-5
    lo, hi = ri.approx()
    assert abs(lo + 0.119726) < 1e-6 and abs(hi - 0.346014) < 1e-6


def test_cascade_finds_octic_root():
    recs = cascade_search(OCTIC_BASE, 2, (1, 2))
    hits = [r for r in recs if r.extended == OCTIC_EXT]
    assert hits and hits[0].realized
    lam, ri = hits[0].realizations[0]
    assert abs(float(lam) - 1.12784) < 1e-5
    lo, hi = ri.approx()
    assert abs(lo + 0.808065) < 1e-6 and abs(hi + 0.720696) < 1e-6


def test_roots_agree_with_independent_isolation():
    for rec in cascade_search(BASE, 3, (1, 3)):
        ours = sorted(float(r) for r in rec.roots_in_window)
        ref = sympy_real_roots(rec.factor.coeffs, 1, 3)
        assert len(ours) == len(ref) and all(abs(a - b) < 1e-9 for a, b in zip(ours, ref))


@pytest.mark.parametrize("base", [BASE, "c2 J0 c2", str(OCTIC_BASE), "c1 J2 J2 c1"])
def test_nothing_realized_above_two(base):
    recs = cascade_search(base, 2, (2, 3))
    assert not any(r.realized for r in recs)


def test_realized_records_are_exceptional():
    for rec in cascade_search(BASE, 3, (1, 2)):
        for lam, ri in rec.realizations:
            for b in ri.interior_samples(2):
                cl = classify_turning_point(BimodalMap(lam, b), 1, len(rec.extended) + 2)
                assert cl.kind == "Exceptional" and cl.itinerary.symbols == rec.extended.symbols


def test_cascade_is_deterministic():
    a = cascade_search(BASE, 3, (1, 2))
    b = cascade_search(BASE, 3, (1, 2))
    p = cascade_search(BASE, 3, (1, 2), jobs=2)
    dump = lambda recs: json.dumps([r.to_json() for r in recs], sort_keys=True)
    assert dump(a) == dump(b) == dump(p)
    assert records_to_csv(a) == records_to_csv(p)


def test_csv_summary_columns():
    text = records_to_csv(cascade_search(BASE, 2, (1, 2)))
    assert text.splitlines()[0] == "itinerary,factor_degree,root_lo,root_hi,b_lo,b_hi"


# -- codimension one --------------------------------------------------------


def test_codim1_period_two():
    rep = codim1_analyze([BASE], 2)
    assert rep.curve[0] == RatFunc(P(1, -1), P(1, 1))
    assert rep.at(2)[0] == Fraction(-1, 3)
    assert rep.det_at_lambda != 0 and rep.det == P(-1, 0, 1)
    lo, hi = rep.validity_window
    assert lo < 2 < hi


def test_codim1_singular_at_lambda_e(lam_e):
    with pytest.raises(SingularAtLambda):
        codim1_analyze([I_PRIME], lam_e)


def test_codim1_arity():
    with pytest.raises(ValueError):
        codim1_analyze([BASE, "c2 J0 c2"], 2)


@pytest.mark.parametrize("text", [BASE, "c1 J2 J2 c1", "c2 J0 J0 J0 c2", "c1 J2 J0 J1 c2"])
def test_codim1_curve_solves_equation_identically(text):
    eq = derive_bifurcation_eq(text)
    lam = Fraction(5, 2)
    if eq.Q1(lam) == 0:
        pytest.skip("singular at the sample lambda")
    R = codim1_analyze([text], lam).curve[0]
    assert RatFunc(eq.Q1) * R - RatFunc(eq.Q0) == RatFunc(IntPoly())


def test_codim1_window_realizes_itinerary():
    rep = codim1_analyze([BASE], 2)
    lo, hi = rep.validity_window
    for k in range(1, 8):
        lam = lo + (hi - lo) * Fraction(k, 8)
        b = rep.at(lam)[0]
        assert itinerary_of(BimodalMap(lam, b), "c1", 2).symbols == Itinerary.parse(BASE).symbols


# -- obstruction ------------------------------------------------------------


def test_obstruction_period_two_point():
    res = hyperbolic_approx_obstruction(BimodalMap(2, Fraction(-1, 3)), 200)
    # c2 lands on c1 here, so both turning points are controlled
    assert itinerary_of(BimodalMap(2, Fraction(-1, 3)), "c2", 10, stop_at_turning=True)[-1] == c(1)
    assert res.status == "NotDetermined"


def test_obstruction_lambda_e(lam_e):
    assert hyperbolic_approx_obstruction(BimodalMap(lam_e, 0), 200).status == "NotDetermined"


def test_obstruction_certified_example():
    m = BimodalMap(Fraction(9, 4), Fraction(-5, 13))
    res = hyperbolic_approx_obstruction(m, 200)
    assert res.status == "Obstructed" and res.free_turning == 2
    assert res.report.at()[0] == m.b
    assert not any(s.is_turning for s in res.witness.symbols[1:])


def test_obstruction_without_controlled_points():
    assert hyperbolic_approx_obstruction(BimodalMap(2, 0), 100).status == "NotDetermined"


# -- renormalization and scans ----------------------------------------------


@pytest.mark.parametrize("center", [1, 2])
def test_renormalization_at_lambda_e(lam_e, center):
    m = BimodalMap(lam_e, 0)
    res = renormalization_check(m, center, 2)
    assert res.holds and res.contains_center
    orb = m.orbit(m.turning_point(center), 4)
    ends = sorted([orb[2].value, orb[4].value], key=float)
    assert list(res.interval) == ends


def test_renormalization_mirror(lam_e):
    m = BimodalMap(lam_e, 0)
    r1, r2 = renormalization_check(m, 1, 2), renormalization_check(m, 2, 2)
    assert r2.interval == (-r1.interval[1], -r1.interval[0])


def test_renormalization_fails_at_two():
    assert not renormalization_check(BimodalMap(2, 0), 1, 2).holds


def test_scan_constant_at_lambda_e(lam_e):
    grid = [Fraction(k, 100) for k in (-11, -5, 0, 5, 11)]
    rep = nonrigidity_scan(lam_e, grid)
    assert rep.all_constant
    assert [x.symbols for x in rep.distinct(1)] == [Itinerary.parse(I_PRIME).symbols]
    assert [x.symbols for x in rep.distinct(2)] == [Itinerary.parse(I_PRIME).mirrored().symbols]


def test_scan_outside_overlap(lam_e):
    m = BimodalMap(lam_e, Fraction(3, 10))
    assert itinerary_of(m, "c1", 6).symbols == Itinerary.parse(I_PRIME).symbols
    assert itinerary_of(m, "c2", 6).symbols != Itinerary.parse(I_PRIME).mirrored().symbols


def test_scan_varies_at_two():
    grid = [Fraction(k, 100) for k in range(-11, 12, 11)]
    rep = nonrigidity_scan(2, grid)
    assert not rep.all_constant and len(rep.distinct(1)) >= 2
