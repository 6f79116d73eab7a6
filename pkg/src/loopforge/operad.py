"""Free operads on decorated planar rooted trees.

A tree is a plain nested structure: a leaf is its integer label (1-based), an
internal vertex is a tuple (generator name, child, ..., child).  The special
no-vertex tree of the free operad is the bare leaf 1, the operad identity.
Trees are signless; degrees of generators matter only when a tree element is
evaluated into the endomorphism operad of a graded vector space, where the
Koszul signs enter.

Composition grafts the root of one tree onto a numbered leaf of another,
erasing the graft point and relabeling leaves by insertion.  The symmetric
group acts on the right by relabeling leaves.

check_algebra evaluates the defining relation elements of the Comm, Ass, Lie
and Poisson operads against a concrete assignment of multilinear maps and
reports each relation with a witness on failure.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .exactq import GradedVectorSpace, MultilinearMap, compose_multilinear, rat


class OperadError(ValueError):
    pass


# -- trees ----------------------------------------------------------------

def is_leaf(t) -> bool:
    return isinstance(t, int)


def tree_leaves(t):
    """Leaf labels in planar (left-to-right) order."""
    if is_leaf(t):
        return [t]
    out = []
    for child in t[1:]:
        out.extend(tree_leaves(child))
    return out


def tree_arity(t) -> int:
    return len(tree_leaves(t))


def validate_tree(t, generators=None):
    leaves = tree_leaves(t)
    if sorted(leaves) != list(range(1, len(leaves) + 1)):
        raise OperadError(f"leaf labels must be a bijection with 1..n, got {leaves}")
    if generators is not None:
        _validate_decorations(t, generators)
    return t


def _validate_decorations(t, generators):
    if is_leaf(t):
        return
    name = t[0]
    if name not in generators.by_name:
        raise OperadError(f"unknown generator {name!r}")
    if generators.by_name[name][0] != len(t) - 1:
        raise OperadError(
            f"generator {name!r} has arity {generators.by_name[name][0]}, "
            f"used with {len(t) - 1} children")
    for child in t[1:]:
        _validate_decorations(child, generators)


def map_leaves(t, fn):
    if is_leaf(t):
        return fn(t)
    return (t[0],) + tuple(map_leaves(c, fn) for c in t[1:])


def graft(tree, leaf_label, subtree):
    """Replace the named leaf by the subtree; no relabeling happens here."""
    if is_leaf(tree):
        return subtree if tree == leaf_label else tree
    return (tree[0],) + tuple(graft(c, leaf_label, subtree) for c in tree[1:])


def tree_to_str(t) -> str:
    if is_leaf(t):
        return f"leaf{t}"
    return f"{t[0]}(" + ", ".join(tree_to_str(c) for c in t[1:]) + ")"


def parse_tree(s: str):
    """Inverse of tree_to_str: "dot(leaf1, bracket(leaf2, leaf3))"."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def term():
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(s) and (s[pos].isalnum() or s[pos] == "_"):
            pos += 1
        name = s[start:pos]
        if not name:
            raise OperadError(f"parse error at position {pos} in {s!r}")
        skip_ws()
        if pos < len(s) and s[pos] == "(":
            pos += 1
            children = [term()]
            skip_ws()
            while pos < len(s) and s[pos] == ",":
                pos += 1
                children.append(term())
                skip_ws()
            if pos >= len(s) or s[pos] != ")":
                raise OperadError(f"expected ')' at position {pos} in {s!r}")
            pos += 1
            return (name,) + tuple(children)
        if not name.startswith("leaf"):
            raise OperadError(f"leaf token must look like leafN, got {name!r}")
        return int(name[4:])

    t = term()
    skip_ws()
    if pos != len(s):
        raise OperadError(f"trailing input at position {pos} in {s!r}")
    return validate_tree(t)


# -- generator collections and elements ------------------------------------

class GeneratorCollection:
    """Named generators with arities (>= 1) and degrees."""

    def __init__(self, generators):
        self.by_name = {}
        for name, arity, degree in generators:
            if name in self.by_name:
                raise OperadError(f"duplicate generator {name!r}")
            if arity < 1:
                raise OperadError("generator arity must be >= 1")
            self.by_name[name] = (arity, degree)

    def arity(self, name) -> int:
        return self.by_name[name][0]

    def degree(self, name) -> int:
        return self.by_name[name][1]


class OperadElement:
    """Formal rational combination of decorated trees of one arity."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity, terms):
        self.arity = arity
        clean = {}
        for t, c in terms.items():
            c = rat(c)
            if c == 0:
                continue
            if tree_arity(t) != arity:
                raise OperadError("mixed arities in one element")
            validate_tree(t)
            clean[t] = clean.get(t, Fraction(0)) + c
        self.terms = {t: c for t, c in clean.items() if c != 0}

    @classmethod
    def from_tree(cls, t, coeff=1) -> "OperadElement":
        return cls(tree_arity(t), {t: coeff})

    @classmethod
    def unit(cls) -> "OperadElement":
        """The no-vertex tree: the operad identity."""
        return cls(1, {1: 1})

    def __add__(self, other):
        if self.arity != other.arity:
            raise OperadError("arity mismatch")
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, Fraction(0)) + c
        return OperadElement(self.arity, out)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        s = rat(scalar)
        return OperadElement(self.arity, {t: c * s for t, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, OperadElement)
                and self.arity == other.arity and self.terms == other.terms)

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.terms.items(), key=lambda kv: str(kv[0])))))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "OperadElement(0)"
        body = " + ".join(f"{c}*{tree_to_str(t)}" for t, c in
                          sorted(self.terms.items(), key=lambda kv: tree_to_str(kv[0])))
        return f"OperadElement({body})"


def _compose_trees(f_tree, i, g_tree, g_arity):
    # negative labels mark already-final values so the two relabelings cannot mix
    shift = g_arity - 1
    g_rel = map_leaves(g_tree, lambda l: -(l + i - 1))
    f_rel = map_leaves(f_tree, lambda l: l + shift if l > i else l)
    grafted = graft(f_rel, i, g_rel)
    return map_leaves(grafted, lambda l: -l if l < 0 else l)


def compose_i(f: OperadElement, i: int, g: OperadElement) -> OperadElement:
    """Graft g onto the i-th leaf of f (1-based), relabeling by insertion."""
    if not (1 <= i <= f.arity):
        raise OperadError(f"slot {i} out of range for arity {f.arity}")
    out = {}
    for tf, cf in f.terms.items():
        for tg, cg in g.terms.items():
            t = _compose_trees(tf, i, tg, g.arity)
            out[t] = out.get(t, Fraction(0)) + cf * cg
    return OperadElement(f.arity + g.arity - 1, out)


def gamma(f: OperadElement, gs) -> OperadElement:
    """Simultaneous composition: graft gs[k] onto leaf k+1 of f, all at once."""
    gs = list(gs)
    if len(gs) != f.arity:
        raise OperadError(f"gamma needs {f.arity} arguments, got {len(gs)}")
    out = f
    # right-to-left keeps the remaining slot indices stable
    for k in range(len(gs), 0, -1):
        out = compose_i(out, k, gs[k - 1])
    return out


def identity_permutation(n):
    return tuple(range(1, n + 1))


def permute_composition(p, q):
    """(p q)(i) = p(q(i)); both are tuples of 1-based images."""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def invert_permutation(p):
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v - 1] = i + 1
    return tuple(inv)


def sigma_action(p, f: OperadElement) -> OperadElement:
    """Right action of the symmetric group: relabel each leaf l to p^{-1}(l)."""
    p = tuple(p)
    if len(p) != f.arity or sorted(p) != list(range(1, f.arity + 1)):
        raise OperadError("permutation size must equal the arity")
    inv = invert_permutation(p)
    out = {}
    for t, c in f.terms.items():
        t2 = map_leaves(t, lambda l: inv[l - 1])
        out[t2] = out.get(t2, Fraction(0)) + c
    return OperadElement(f.arity, out)


# -- evaluation into an endomorphism operad --------------------------------

class EndomorphismAssignment:
    """Assignment of a multilinear map to each generator, plus an optional unit."""

    def __init__(self, space: GradedVectorSpace, maps, generators: GeneratorCollection,
                 unit=None):
        self.space = space
        self.generators = generators
        self.maps = dict(maps)
        for name, (arity, degree) in generators.by_name.items():
            if name not in self.maps:
                continue
            m = self.maps[name]
            if m.arity != arity or m.degree != degree:
                raise OperadError(
                    f"map for {name!r} must have arity {arity} and degree {degree}")
            if m.sources != (space,) * arity or m.target != space:
                raise OperadError(f"map for {name!r} must be an endomorphism-operad element")
        self.unit = tuple(rat(x) for x in unit) if unit is not None else None
        if self.unit is not None and len(self.unit) != space.dim:
            raise OperadError("unit vector has wrong dimension")


def _planar_eval(t, assignment: EndomorphismAssignment) -> MultilinearMap:
    if is_leaf(t):
        return MultilinearMap.identity(assignment.space)
    name = t[0]
    if name not in assignment.maps:
        raise OperadError(f"generator {name!r} has no assigned map")
    m = assignment.maps[name]
    for k in range(len(t) - 1, 0, -1):
        m = compose_multilinear(m, k, _planar_eval(t[k], assignment))
    return m


def _route_labels(planar: MultilinearMap, labels, space) -> MultilinearMap:
    """Reorder inputs from planar position order to label order, with Koszul signs."""
    n = len(labels)
    coeffs = {}
    for (out, ins), c in planar.coeffs.items():
        final = [None] * n
        for pos, idx in enumerate(ins):
            final[labels[pos] - 1] = idx
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if labels[a] > labels[b]:
                    d = space.degree(ins[a]) * space.degree(ins[b])
                    if d % 2:
                        sign = -sign
        key = (out, tuple(final))
        coeffs[key] = coeffs.get(key, Fraction(0)) + sign * c
    return MultilinearMap((space,) * n, space, coeffs, planar.degree)


def eval_element(elem: OperadElement, assignment: EndomorphismAssignment) -> MultilinearMap:
    """Evaluate trees bottom-up through compose_multilinear, linearly over terms."""
    space = assignment.space
    total = None
    for t, c in elem.terms.items():
        planar = _planar_eval(t, assignment)
        routed = _route_labels(planar, tree_leaves(t), space) * c
        total = routed if total is None else total + routed
    if total is None:
        # the zero element: need a degree to give the zero map; use 0
        return MultilinearMap((space,) * elem.arity, space, {}, 0)
    return total


# -- tree enumeration and the associativity move ---------------------------

def enumerate_tree_shapes(generators: GeneratorCollection, n: int):
    """All decorated trees with n leaves labeled 1..n in planar order.

    Only generators of arity >= 2 participate: with a unary generator the
    free operad is infinite-dimensional in every arity.
    """
    names = sorted(generators.by_name)

    def shapes(labels):
        if len(labels) == 1:
            yield labels[0]
            return
        for name in names:
            k = generators.arity(name)
            if k < 2 or k > len(labels):
                continue
            for split in _compositions(len(labels), k):
                parts = []
                at = 0
                for s in split:
                    parts.append(labels[at:at + s])
                    at += s
                for combo in product(*(shapes(p) for p in parts)):
                    yield (name,) + combo

    return list(shapes(tuple(range(1, n + 1))))


def _compositions(total, parts):
    """Ways to write total as an ordered sum of `parts` positive integers."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def ass_move_neighbors(t, name="dot"):
    """Trees one associativity move away: dot(dot(a,b),c) <-> dot(a,dot(b,c))."""
    out = []
    if is_leaf(t):
        return out
    if t[0] == name and len(t) == 3:
        left, right = t[1], t[2]
        if not is_leaf(left) and left[0] == name and len(left) == 3:
            out.append((name, left[1], (name, left[2], right)))
        if not is_leaf(right) and right[0] == name and len(right) == 3:
            out.append((name, (name, left, right[1]), right[2]))
    for k in range(1, len(t)):
        for sub in ass_move_neighbors(t[k], name):
            out.append(t[:k] + (sub,) + t[k + 1:])
    return out


def ass_move_classes(n: int, name="dot") -> int:
    """Number of equivalence classes of identity-labeled binary n-trees."""
    gens = GeneratorCollection([(name, 2, 0)])
    trees = set(enumerate_tree_shapes(gens, n))
    classes = 0
    seen = set()
    for t in sorted(trees, key=tree_to_str):
        if t in seen:
            continue
        classes += 1
        stack = [t]
        seen.add(t)
        while stack:
            u = stack.pop()
            for v in ass_move_neighbors(u, name):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return classes


# -- relation presets -------------------------------------------------------

PRESET_GENERATORS = {
    "comm": GeneratorCollection([("dot", 2, 0)]),
    "ass": GeneratorCollection([("dot", 2, 0)]),
    "lie": GeneratorCollection([("bracket", 2, 0)]),
    "poisson": GeneratorCollection([("dot", 2, 0), ("bracket", 2, 0)]),
}


def preset_relations(preset: str):
    """Defining relation elements, as differences/sums of decorated trees."""
    dot, br = "dot", "bracket"
    one = OperadElement.from_tree

    def rel():
        if preset == "comm":
            yield "commutativity", one((dot, 1, 2)) - one((dot, 2, 1))
            yield "associativity", one((dot, (dot, 1, 2), 3)) - one((dot, 1, (dot, 2, 3)))
        elif preset == "ass":
            yield "associativity", one((dot, (dot, 1, 2), 3)) - one((dot, 1, (dot, 2, 3)))
        elif preset == "lie":
            yield "skew_symmetry", one((br, 1, 2)) + one((br, 2, 1))
            yield "jacobi", (one((br, (br, 1, 2), 3))
                             + one((br, (br, 2, 3), 1))
                             + one((br, (br, 3, 1), 2)))
        elif preset == "poisson":
            yield "commutativity", one((dot, 1, 2)) - one((dot, 2, 1))
            yield "associativity", one((dot, (dot, 1, 2), 3)) - one((dot, 1, (dot, 2, 3)))
            yield "skew_symmetry", one((br, 1, 2)) + one((br, 2, 1))
            yield "jacobi", (one((br, (br, 1, 2), 3))
                             + one((br, (br, 2, 3), 1))
                             + one((br, (br, 3, 1), 2)))
            yield "leibniz", (one((br, 1, (dot, 2, 3)))
                              - one((dot, (br, 1, 2), 3))
                              - one((dot, 2, (br, 1, 3))))
        else:
            raise OperadError(f"unknown preset {preset!r}")

    return list(rel())


PRESETS_WITH_UNIT = {"comm", "ass", "poisson"}


class AlgebraCheckReport:
    """Per-relation verdicts; witness is the first violating basis multi-index."""

    def __init__(self, preset, clauses):
        self.preset = preset
        self.clauses = list(clauses)  # (name, passed, witness or None)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.clauses)

    def __repr__(self):
        body = ", ".join(f"{n}={'ok' if ok else 'FAIL'}" for n, ok, _ in self.clauses)
        return f"AlgebraCheckReport({self.preset}: {body})"


def _first_witness(m: MultilinearMap):
    if not m.coeffs:
        return None
    out, ins = min(m.coeffs, key=lambda k: (k[1], k[0]))
    return ins


def check_algebra(preset: str, assignment: EndomorphismAssignment) -> AlgebraCheckReport:
    """Evaluate the preset's defining relations against the assignment."""
    preset = preset.lower()
    gens = PRESET_GENERATORS[preset] if preset in PRESET_GENERATORS else None
    if gens is None:
        raise OperadError(f"unknown preset {preset!r}")
    for name in gens.by_name:
        if name not in assignment.maps:
            raise OperadError(f"preset {preset!r} needs a map for generator {name!r}")
    clauses = []
    for name, element in preset_relations(preset):
        value = eval_element(element, assignment)
        witness = _first_witness(value)
        clauses.append((name, value.is_zero(), witness))
    if preset in PRESETS_WITH_UNIT:
        if assignment.unit is None:
            raise OperadError(f"preset {preset!r} requires a unit vector")
        space = assignment.space
        dot = assignment.maps["dot"]
        bad = None
        for i in range(space.dim):
            basis_vec = tuple(Fraction(int(j == i)) for j in range(space.dim))
            left = dot.apply([assignment.unit, basis_vec])
            right = dot.apply([basis_vec, assignment.unit])
            if left != basis_vec or right != basis_vec:
                bad = (i,)
                break
        clauses.append(("unit", bad is None, bad))
    return AlgebraCheckReport(preset, clauses)
