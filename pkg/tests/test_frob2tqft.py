import json
import random
from fractions import Fraction

import pytest

from loopforge.exactq import GradedVectorSpace, MultilinearMap, RationalMatrix
from loopforge.frob2tqft import (
    CobordismError,
    CobordismWord,
    FiniteGroup,
    FrobeniusValidationError,
    GroupError,
    closed_surface_invariant,
    coalgebra_of,
    dw_center_algebra,
    dw_partition_brute,
    eval_cobordism,
    validate_frobenius,
)
from loopforge.resources import fixture_path
from loopforge.structjson import load_algebra_data


def load_frob(name):
    with open(fixture_path(name)) as f:
        data = load_algebra_data(json.load(f))
    return validate_frobenius(data["product"], data["unit"], data["trace"])


def ground_field():
    space = GradedVectorSpace.ungraded(["1"])
    product = MultilinearMap((space, space), space, {(0, (0, 0)): 1})
    return validate_frobenius(product, (1,), (1,))


def dual_numbers(trace):
    space = GradedVectorSpace.ungraded(["1", "x"])
    coeffs = {(0, (0, 0)): 1, (1, (0, 1)): 1, (1, (1, 0)): 1}
    product = MultilinearMap((space, space), space, coeffs)
    return validate_frobenius(product, (1, 0), trace)


# -- validation -------------------------------------------------------------


def test_ground_field_is_frobenius():
    f = ground_field()
    assert f.dim == 1
    assert f.pairing[0, 0] == 1


def test_dual_numbers_good_trace():
    f = dual_numbers((0, 1))
    assert f.pairing == RationalMatrix.from_rows([[0, 1], [1, 0]])


def test_dual_numbers_bad_trace_rejected():
    with pytest.raises(FrobeniusValidationError) as err:
        dual_numbers((1, 0))
    assert [v for v, _ in err.value.violations] == ["nonsingular_pairing"]


def test_noncommutative_product_rejected():
    space = GradedVectorSpace.ungraded(["1", "x"])
    coeffs = {(0, (0, 0)): 1, (1, (0, 1)): 1}  # x*1 = 0 but 1*x = x
    product = MultilinearMap((space, space), space, coeffs)
    with pytest.raises(FrobeniusValidationError) as err:
        validate_frobenius(product, (1, 0), (0, 1))
    assert any(v == "commutativity" for v, _ in err.value.violations)


def test_fixture_file_loads():
    f = load_frob("frob_dual.json")
    assert f.dim == 2


# -- coalgebra ---------------------------------------------------------------


def test_coalgebra_ground_field():
    delta, counit = coalgebra_of(ground_field())
    assert delta == RationalMatrix.from_rows([[1]])
    assert counit == (Fraction(1),)


def test_coalgebra_dual_numbers():
    f = dual_numbers((0, 1))
    delta, _ = coalgebra_of(f)
    # Delta(1) = 1 (x) x + x (x) 1, Delta(x) = x (x) x
    assert delta.apply((1, 0)) == (0, 1, 1, 0)
    assert delta.apply((0, 1)) == (0, 0, 0, 1)


def test_coalgebra_bimodule_on_s3_center():
    f = dw_center_algebra(FiniteGroup.symmetric3())
    coalgebra_of(f)  # raises on any bimodule/counit failure


def test_comultiplication_coassociative_and_cocommutative():
    for f in (ground_field(), dual_numbers((0, 1)),
              dw_center_algebra(FiniteGroup.symmetric3())):
        d = f.dim
        delta = f.comultiplication_matrix()
        ident = RationalMatrix.identity(d)
        left = delta.tensor(ident) * delta
        right = ident.tensor(delta) * delta
        assert left == right
        swap = eval_cobordism(f, CobordismWord([["swap"]]))
        assert swap * delta == delta


# -- cobordism evaluation -----------------------------------------------------


def test_unit_axiom_word():
    for f in (dual_numbers((0, 1)), dw_center_algebra(FiniteGroup.cyclic(3))):
        word = CobordismWord([["cap_unit", "cylinder"], ["pants"]])
        assert eval_cobordism(f, word) == RationalMatrix.identity(f.dim)


def test_zigzag_word_is_identity():
    with open(fixture_path("word_zigzag.json")) as fh:
        word = CobordismWord.from_json(json.load(fh))
    for f in (ground_field(), dual_numbers((0, 1)),
              dw_center_algebra(FiniteGroup.symmetric3())):
        assert eval_cobordism(f, word) == RationalMatrix.identity(f.dim)


def test_trace_equals_pairing_word():
    for f in (dual_numbers((0, 1)), dw_center_algebra(FiniteGroup.cyclic(2))):
        via_product = eval_cobordism(f, CobordismWord([["pants"], ["cap_trace"]]))
        directly = eval_cobordism(f, CobordismWord([["pairing"]]))
        assert via_product == directly


def test_associativity_two_pants_decompositions():
    for f in (dual_numbers((0, 1)), dw_center_algebra(FiniteGroup.symmetric3())):
        left = CobordismWord([["pants", "cylinder"], ["pants"]])
        right = CobordismWord([["cylinder", "pants"], ["pants"]])
        assert eval_cobordism(f, left) == eval_cobordism(f, right)


def test_word_wiring_mismatch_rejected():
    with pytest.raises(CobordismError):
        CobordismWord([["pants"], ["pants"]])


def random_word(rng, max_layers=4):
    layers = []
    wires = rng.randint(1, 3)
    first = []
    remaining = wires
    while remaining > 0:
        tok = rng.choice([t for t, (i, _) in
                          (("pants", (2, 1)), ("copants", (1, 2)), ("cap_trace", (1, 0)),
                           ("pairing", (2, 0)), ("cylinder", (1, 1)), ("swap", (2, 2)))
                          if i <= remaining])
        first.append(tok)
        remaining -= {"pants": 2, "copants": 1, "cap_trace": 1, "pairing": 2,
                      "cylinder": 1, "swap": 2}[tok]
    if rng.random() < 0.5:
        first.insert(rng.randint(0, len(first)), rng.choice(["cap_unit", "copairing"]))
    layers.append(first)
    for _ in range(rng.randint(0, max_layers - 1)):
        wires = sum({"pants": 1, "copants": 2, "cap_trace": 0, "cap_unit": 1,
                     "pairing": 0, "copairing": 2, "cylinder": 1, "swap": 2}[t]
                    for t in layers[-1])
        if wires == 0:
            break
        layer = []
        remaining = wires
        while remaining > 0:
            tok = rng.choice([t for t in ("pants", "copants", "cap_trace", "pairing",
                                          "cylinder", "swap")
                              if {"pants": 2, "copants": 1, "cap_trace": 1, "pairing": 2,
                                  "cylinder": 1, "swap": 2}[t] <= remaining])
            layer.append(tok)
            remaining -= {"pants": 2, "copants": 1, "cap_trace": 1, "pairing": 2,
                          "cylinder": 1, "swap": 2}[tok]
        layers.append(layer)
    return CobordismWord(layers)


def test_sewing_consistency_random_words():
    rng = random.Random(618)
    f = dual_numbers((0, 1))
    g = dw_center_algebra(FiniteGroup.symmetric3())
    words = [random_word(rng) for _ in range(50)]
    for wi, word in enumerate(words):
        # every word on the 2-dimensional algebra, a sample on the 3-dimensional one
        algebras = (f, g) if wi % 4 == 0 else (f,)
        for algebra in algebras:
            whole = eval_cobordism(algebra, word)
            for cut in range(1, len(word.layers)):
                w1 = CobordismWord(word.layers[:cut])
                w2 = CobordismWord(word.layers[cut:])
                assert eval_cobordism(algebra, w2) * eval_cobordism(algebra, w1) == whole


# -- closed surfaces and Dijkgraaf-Witten -------------------------------------


def test_sphere_invariant_is_trace_of_unit():
    f = dual_numbers((0, 1))
    assert closed_surface_invariant(f, 0) == f.trace_of(f.unit) == Fraction(0)
    g = dw_center_algebra(FiniteGroup.cyclic(2))
    assert closed_surface_invariant(g, 0) == Fraction(1, 2)


def test_dw_z2_genus2_is_8():
    f = dw_center_algebra(FiniteGroup.cyclic(2))
    assert closed_surface_invariant(f, 2) == 8
    assert dw_partition_brute(FiniteGroup.cyclic(2), 2) == 8


def test_dw_s3_genus1_is_3():
    f = dw_center_algebra(FiniteGroup.symmetric3())
    assert closed_surface_invariant(f, 1) == 3
    assert dw_partition_brute(FiniteGroup.symmetric3(), 1) == 3


def test_dw_z2_genus1():
    assert dw_partition_brute(FiniteGroup.cyclic(2), 1) == 2


def test_dw_agreement_full_corpus():
    groups = [FiniteGroup.cyclic(2), FiniteGroup.cyclic(3), FiniteGroup.cyclic(4),
              FiniteGroup.named("z2xz2"), FiniteGroup.symmetric3()]
    for G in groups:
        f = dw_center_algebra(G)
        for genus in (0, 1, 2):
            assert closed_surface_invariant(f, genus) == dw_partition_brute(G, genus), \
                (G.name, genus)


def test_dw_center_dimensions():
    assert dw_center_algebra(FiniteGroup.cyclic(2)).dim == 2
    assert dw_center_algebra(FiniteGroup.symmetric3()).dim == 3
    trivial = dw_center_algebra(FiniteGroup.cyclic(1))
    assert trivial.dim == 1
    assert trivial.trace == (Fraction(1),)


def test_dw_center_z2_trace_values():
    f = dw_center_algebra(FiniteGroup.cyclic(2))
    assert f.trace == (Fraction(1, 2), Fraction(0))


def test_group_table_validation():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])  # 1 has no inverse / not a latin square
    with pytest.raises(GroupError):
        FiniteGroup.named("frobnitz")


def test_brute_force_guard():
    with pytest.raises(GroupError):
        dw_partition_brute(FiniteGroup.symmetric3(), 6)
