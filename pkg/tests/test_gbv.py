import json
import random
from fractions import Fraction

import pytest

from genutil import MonomialAlgebra, compose_operators, random_graded_operator
from loopforge.exactq import MultilinearMap
from loopforge.gbv import (
    BracketTable,
    CONVENTIONS,
    GBVError,
    GradedOperatorAlgebra,
    check_bv,
    check_bv_nplus1,
    check_gerstenhaber,
    derive_bracket,
    load_instance,
)
from loopforge.resources import fixture_path


def exterior_instance():
    with open(fixture_path("exterior1.json")) as f:
        A, _ = load_instance(json.load(f))
    return A


def u3_parity_instance():
    with open(fixture_path("u3_parity.json")) as f:
        A, _ = load_instance(json.load(f))
    return A


def polyvector_instance():
    """Q[x]/(x^3) (x) Lambda(xi) with Delta = x d^2/dx dxi.

    The plain odd Laplacian d^2/dx dxi does NOT survive the truncation
    (its symbol d/dx is not a derivation of Q[x]/(x^3)), but x d/dx is, so
    this Delta is an honest second-order BV operator with nonzero bracket.
    """
    mono = MonomialAlgebra([("x", 2, 3), ("xi", 1, 2)])
    delta = compose_operators(
        mono.space, mono.multiplication_operator((1, 0)),
        compose_operators(mono.space, mono.partial(0), mono.partial(1)))
    A = GradedOperatorAlgebra(mono.space, mono.product, mono.unit,
                              {"delta": delta})
    return A, mono


def with_zero_delta(mono, degree=-1):
    delta = MultilinearMap((mono.space,), mono.space, {}, degree=degree)
    return GradedOperatorAlgebra(mono.space, mono.product, mono.unit,
                                 {"delta": delta})


# -- derive_bracket -----------------------------------------------------------


def test_zero_delta_gives_zero_bracket():
    mono = MonomialAlgebra([("x", 1, 2)])
    A = with_zero_delta(mono)
    assert derive_bracket(A, "delta").map.is_zero()


def test_exterior_bracket_vanishes():
    A = exterior_instance()
    br = derive_bracket(A, "delta")
    assert br.map.is_zero()
    # in particular {x, x} = 0 and {1, .} = 0
    x = A.space.index("x")
    assert br.on_basis(x, x) == (Fraction(0), Fraction(0))


def test_u3_parity_bracket_table_matches_hand_oracle():
    """Delta = d/du after u -> -u on Q[u]/(u^3), |u| = 2.

    Hand expansion of all nine pairs: {u,u} = 4u, {u,u^2} = {u^2,u} = -u^2,
    everything else zero.
    """
    A = u3_parity_instance()
    br = derive_bracket(A, "delta")
    one, u, u2 = A.space.index("1"), A.space.index("u"), A.space.index("u2")
    zero = (Fraction(0),) * 3

    def vec(**kw):
        out = [Fraction(0)] * 3
        for name, c in kw.items():
            out[A.space.index(name)] = Fraction(c)
        return tuple(out)

    expected = {(u, u): vec(u=4), (u, u2): vec(u2=-1), (u2, u): vec(u2=-1)}
    for i in (one, u, u2):
        for j in (one, u, u2):
            assert br.on_basis(i, j) == expected.get((i, j), zero), (i, j)


def test_derived_bracket_convention_flip():
    A, _ = polyvector_instance()
    sw = derive_bracket(A, "delta", "sw")
    gbv = derive_bracket(A, "delta", "gbv")
    for i in range(A.dim):
        for j in range(A.dim):
            assert sw.on_basis(i, j) == tuple(-x for x in gbv.on_basis(i, j))


def test_polyvector_bracket_is_nonzero():
    A, mono = polyvector_instance()
    br = derive_bracket(A, "delta")
    x = mono.sidx((1, 0))
    xi = mono.sidx((0, 1))
    assert any(any(br.on_basis(i, j)) for i in (x, xi) for j in (x, xi))


# -- check_gerstenhaber ---------------------------------------------------------


def test_zero_bracket_passes_gerstenhaber():
    mono = MonomialAlgebra([("x", 1, 2), ("y", 2, 2)])
    A = GradedOperatorAlgebra(mono.space, mono.product, mono.unit, {})
    zero = BracketTable(A, -1, MultilinearMap((A.space, A.space), A.space, {}, -1))
    assert check_gerstenhaber(A, zero, -1).passed


def test_polyvector_bracket_passes_gerstenhaber():
    A, _ = polyvector_instance()
    for convention in CONVENTIONS:
        br = derive_bracket(A, "delta", convention)
        report = check_gerstenhaber(A, br, br.degree)
        assert report.passed, report


def test_corrupted_bracket_fails_with_witness():
    A, mono = polyvector_instance()
    br = derive_bracket(A, "delta")
    x = mono.sidx((1, 0))
    # a degree-respecting but wrong entry: {x, x} lives in degree 2+2-1 = 3
    vec = [Fraction(0)] * A.dim
    vec[mono.sidx((1, 1))] = Fraction(7)
    bad = br.corrupt(x, x, vec)
    report = check_gerstenhaber(A, bad, bad.degree)
    assert not report.passed
    failing = [name for name, ok, _ in report.clauses if not ok]
    assert failing
    for name in failing:
        ok, witness = report.clause(name)
        assert witness is not None


# -- check_bv ---------------------------------------------------------------------


def test_zero_delta_is_bv():
    mono = MonomialAlgebra([("x", 1, 2), ("y", 2, 3)])
    A = with_zero_delta(mono)
    for convention in CONVENTIONS:
        report = check_bv(A, "delta", convention)
        assert report.passed, report


def test_exterior_fixture_is_bv_under_both_conventions():
    A = exterior_instance()
    for convention in CONVENTIONS:
        report = check_bv(A, "delta", convention)
        assert report.passed, report


def test_polyvector_is_bv():
    A, _ = polyvector_instance()
    for convention in CONVENTIONS:
        report = check_bv(A, "delta", convention)
        assert report.passed, report


def test_delta_squared_nonzero_fails_at_that_clause():
    """A two-step degree shift 1 -> x -> y has a nonzero square."""
    mono = MonomialAlgebra([("x", 1, 2), ("y", 2, 2)])
    sp = mono.space
    d = {
        (mono.sidx((1, 0)), (mono.sidx((0, 0)),)): Fraction(1),  # 1 -> x
        (mono.sidx((0, 1)), (mono.sidx((1, 0)),)): Fraction(1),  # x -> y
    }
    delta = MultilinearMap((sp,), sp, d, degree=1)
    A = GradedOperatorAlgebra(sp, mono.product, mono.unit, {"delta": delta})
    report = check_bv(A, "delta")
    ok, _ = report.clause("delta_squared_zero")
    assert not ok
    assert report.clause("characterizations_agree")[0]


def test_left_multiplication_fails_both_characterizations_identically():
    """L_x passes the bare triple-commutator but is not BV; the unit
    normalization keeps the two characterizations in agreement."""
    mono = MonomialAlgebra([("x", 1, 2), ("y", 1, 2)])
    lx = mono.multiplication_operator((1, 0))
    A = GradedOperatorAlgebra(mono.space, mono.product, mono.unit, {"delta": lx})
    report = check_bv(A, "delta")
    assert report.clause("delta_squared_zero")[0]
    assert report.clause("grothendieck_triple_commutator")[0]
    assert not report.clause("delta_unit_zero")[0]
    assert not report.clause("seven_term_biderivation")[0]
    assert report.clause("characterizations_agree")[0]
    assert not report.passed


def test_even_degree_delta_rejected():
    A = u3_parity_instance()
    with pytest.raises(GBVError):
        check_bv(A, "delta")


# -- randomized corpus ----------------------------------------------------------


FACTOR_MENU = [
    [("x", 1, 2)],
    [("x", 1, 2), ("y", 1, 2)],
    [("x", 1, 2), ("y", 2, 3)],
    [("x", 2, 3), ("xi", 1, 2)],
    [("x", 1, 2), ("y", 2, 2)],
    [("x", 3, 2), ("y", 1, 2)],
    [("u", 2, 2), ("xi", 1, 2)],
]


def random_instance(rng):
    factors = rng.choice(FACTOR_MENU)
    mono = MonomialAlgebra(factors)
    odd_indices = [i for i, f in enumerate(factors) if f[1] % 2]
    even_indices = [i for i, f in enumerate(factors) if f[1] % 2 == 0]
    kind = rng.random()
    if kind < 0.3 and odd_indices:
        delta = mono.partial(rng.choice(odd_indices))
    elif kind < 0.55 and odd_indices and even_indices:
        # Euler-style second order: L_g . d/dg . d/dxi survives the truncation
        g = rng.choice(even_indices)
        e = [0] * len(factors)
        e[g] = 1
        delta = compose_operators(
            mono.space, mono.multiplication_operator(tuple(e)),
            compose_operators(mono.space, mono.partial(g),
                              mono.partial(rng.choice(odd_indices))))
    elif kind < 0.7 and odd_indices:
        e = [0] * len(factors)
        e[rng.choice(odd_indices)] = 1
        delta = mono.multiplication_operator(tuple(e))
    else:
        degree = rng.choice([-3, -1, 1, 3])
        delta = random_graded_operator(rng, mono, degree)
    if delta.degree % 2 == 0:
        delta = mono.partial(odd_indices[0]) if odd_indices else None
    if delta is None:
        delta = MultilinearMap((mono.space,), mono.space, {}, degree=1)
    return GradedOperatorAlgebra(mono.space, mono.product, mono.unit,
                                 {"delta": delta}), mono


def test_randomized_instances_bv_implies_gerstenhaber_and_verdicts_agree():
    rng = random.Random(31337)
    bv_passing = 0
    for _ in range(100):
        A, mono = random_instance(rng)
        assert A.dim <= 6
        for convention in CONVENTIONS:
            report = check_bv(A, "delta", convention)
            assert report.clause("characterizations_agree")[0], (A, convention)
            if report.passed:
                bv_passing += 1
                br = derive_bracket(A, "delta", convention)
                assert check_gerstenhaber(A, br, br.degree).passed
    assert bv_passing >= 20  # the structured families guarantee real positives


# -- BV_{n+1} -----------------------------------------------------------------


def bv4_zero_instance():
    mono = MonomialAlgebra([("x", 1, 2), ("y", 2, 2)])
    zero3 = MultilinearMap((mono.space,), mono.space, {}, degree=3)
    return GradedOperatorAlgebra(mono.space, mono.product, mono.unit,
                                 {"delta": zero3, "b1": zero3})


def test_bv_nplus1_all_zero_operators_pass():
    A = bv4_zero_instance()
    for convention in CONVENTIONS:
        report = check_bv_nplus1(A, 3, convention=convention)
        assert report.passed, report


def test_bv_nplus1_n1_matches_check_bv_on_exterior():
    A = exterior_instance()
    # n = 1 requires delta of degree 1; the fixture's is -1, so rebuild
    mono = MonomialAlgebra([("x", -1, 2)])
    delta = mono.partial(0)
    assert delta.degree == 1
    A1 = GradedOperatorAlgebra(mono.space, mono.product, mono.unit, {"delta": delta})
    for convention in CONVENTIONS:
        rep_n = check_bv_nplus1(A1, 1, convention=convention)
        rep_bv = check_bv(A1, "delta", convention)
        assert rep_n.passed == rep_bv.passed == True


def test_bv_nplus1_missing_operator():
    mono = MonomialAlgebra([("x", 1, 2)])
    A = GradedOperatorAlgebra(mono.space, mono.product, mono.unit, {})
    with pytest.raises(GBVError):
        check_bv_nplus1(A, 3)


def test_bv_nplus1_wrong_degree_rejected():
    mono = MonomialAlgebra([("x", 1, 2)])
    bad = MultilinearMap((mono.space,), mono.space, {}, degree=2)
    A = GradedOperatorAlgebra(mono.space, mono.product, mono.unit,
                              {"delta": bad, "b1": bad})
    with pytest.raises(GBVError):
        check_bv_nplus1(A, 3)


def test_bv_nplus1_even_n_needs_bracket():
    mono = MonomialAlgebra([("x", 1, 2)])
    zero3 = MultilinearMap((mono.space,), mono.space, {}, degree=3)
    A = GradedOperatorAlgebra(mono.space, mono.product, mono.unit, {"b1": zero3})
    with pytest.raises(GBVError):
        check_bv_nplus1(A, 2)
    zero2 = BracketTable(A, 2, MultilinearMap((A.space, A.space), A.space, {}, 2))
    assert check_bv_nplus1(A, 2, bracket=zero2).passed


def test_bv_nplus1_non_derivation_b_fails_at_that_clause():
    mono = MonomialAlgebra([("x", 3, 2)])
    sp = mono.space
    one, x = mono.sidx((0,)), mono.sidx((1,))
    b1 = MultilinearMap((sp,), sp, {(x, (one,)): 1}, degree=3)  # 1 -> x: not a derivation
    zero3 = MultilinearMap((sp,), sp, {}, degree=3)
    A = GradedOperatorAlgebra(sp, mono.product, mono.unit, {"delta": zero3, "b1": b1})
    report = check_bv_nplus1(A, 3)
    ok, witness = report.clause("b1_derivation_of_product")
    assert not ok and witness is not None
    # b1 squared is genuinely zero here, so only the derivation clause fails
    assert report.clause("b1_squared_zero")[0]


def test_grothendieck_clause_matches_literal_triple_commutator_oracle():
    """The optimized clause equals the plain quadruple loop, pass or fail."""
    from oracles import triple_commutator_vanishes

    rng = random.Random(555)
    checked_pass = checked_fail = 0
    for _ in range(12):
        A, _ = random_instance(rng)
        report = check_bv(A, "delta")
        got = report.clause("grothendieck_triple_commutator")[0]
        degrees = [A.space.degree(i) for i in range(A.dim)]
        mul = A._mul_table()
        dtab = A._op_table("delta")
        want = triple_commutator_vanishes(
            A.dim, degrees, lambda i, j: mul[i][j], lambda i: dtab[i],
            A.operator("delta").degree)
        assert got == want
        checked_pass += want
        checked_fail += not want
    assert checked_pass and checked_fail


def test_graded_skew_of_derived_bracket_on_bv_instances():
    A, _ = polyvector_instance()
    br = derive_bracket(A, "delta")
    n = br.degree
    for i in range(A.dim):
        for j in range(A.dim):
            s = -1 if ((A.space.degree(i) + n) * (A.space.degree(j) + n)) % 2 else 1
            assert br.on_basis(i, j) == tuple(-s * x for x in br.on_basis(j, i))
