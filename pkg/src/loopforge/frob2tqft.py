"""Frobenius algebras, 2D cobordism evaluation, and the Dijkgraaf-Witten model.

A finite-dimensional commutative associative unital algebra with a trace whose
induced pairing <a, b> = trace(a b) is nonsingular evaluates any composable
word of the basic surface generators (pants, caps, cylinders, the pairing and
its inverse, swaps) to an exact rational matrix.  Closed-surface invariants
are computed two ways, via the handle element and via the explicit pants
decomposition word, and the two must agree.

The Dijkgraaf-Witten construction assigns to a finite group G the center of
its group algebra with trace picking the coefficient of the identity divided
by |G|; the partition function of the closed genus-g surface then counts
2g-tuples with vanishing product of commutators, weighted by 1/|G|, which the
brute-force counter reproduces independently.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct

from .exactq import (
    GradedVectorSpace,
    MultilinearMap,
    RationalMatrix,
    mat_rank,
    rat,
)


class FrobeniusError(ValueError):
    pass


class FrobeniusValidationError(FrobeniusError):
    """Carries the list of violated axioms, each with a witness tuple."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{name} at {w}" for name, w in self.violations))


class CobordismError(ValueError):
    pass


class GroupError(ValueError):
    pass


# -- Frobenius algebras -----------------------------------------------------

class FrobeniusAlgebra:
    """Validated commutative Frobenius algebra over Q, concentrated in degree 0."""

    __slots__ = ("space", "product", "unit", "trace", "pairing", "pairing_inv")

    def __init__(self, space, product, unit, trace, pairing, pairing_inv):
        self.space = space
        self.product = product
        self.unit = unit
        self.trace = trace
        self.pairing = pairing
        self.pairing_inv = pairing_inv

    @property
    def dim(self) -> int:
        return self.space.dim

    def multiply(self, u, v):
        return self.product.apply([u, v])

    def trace_of(self, v) -> Fraction:
        return sum((a * b for a, b in zip(self.trace, v)), Fraction(0))

    def basis_vector(self, i):
        return tuple(Fraction(int(j == i)) for j in range(self.dim))

    def product_matrix(self) -> RationalMatrix:
        """dim x dim^2 matrix of the multiplication, inputs ordered (i, j) row-major."""
        d = self.dim
        rows = [[Fraction(0)] * (d * d) for _ in range(d)]
        for (k, (i, j)), c in self.product.coeffs.items():
            rows[k][i * d + j] += c
        return RationalMatrix.from_rows(rows)

    def comultiplication_matrix(self) -> RationalMatrix:
        """dim^2 x dim matrix of Delta(a) = sum_{i,j} g^{ij} (a e_i) (x) e_j."""
        d = self.dim
        rows = [[Fraction(0)] * d for _ in range(d * d)]
        for a in range(d):
            av = self.basis_vector(a)
            for i in range(d):
                prod = self.multiply(av, self.basis_vector(i))
                for j in range(d):
                    gij = self.pairing_inv[i, j]
                    if gij == 0:
                        continue
                    for k in range(d):
                        if prod[k]:
                            rows[k * d + j][a] += gij * prod[k]
        return RationalMatrix.from_rows(rows)

    def __repr__(self):
        return f"FrobeniusAlgebra(dim={self.dim})"


def _invert(m: RationalMatrix) -> RationalMatrix:
    n = m.rows
    aug = [list(m.row(i)) + [Fraction(int(j == i)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise FrobeniusError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return RationalMatrix.from_rows([row[n:] for row in aug])


def validate_frobenius(product: MultilinearMap, unit, trace) -> FrobeniusAlgebra:
    """Check commutativity, associativity, unit, and nonsingularity of the pairing.

    Raises FrobeniusValidationError listing every violated axiom with a witness.
    """
    space = product.sources[0]
    if product.arity != 2 or product.sources != (space, space) or product.target != space:
        raise FrobeniusError("product must be a binary endomorphism-operad element")
    d = space.dim
    unit = tuple(rat(x) for x in unit)
    trace = tuple(rat(x) for x in trace)
    if len(unit) != d or len(trace) != d:
        raise FrobeniusError("unit/trace dimension mismatch")

    basis = [tuple(Fraction(int(j == i)) for j in range(d)) for i in range(d)]
    mul = lambda u, v: product.apply([u, v])
    violations = []
    for i in range(d):
        for j in range(d):
            if mul(basis[i], basis[j]) != mul(basis[j], basis[i]):
                violations.append(("commutativity", (i, j)))
    for i in range(d):
        for j in range(d):
            for k in range(d):
                lhs = mul(mul(basis[i], basis[j]), basis[k])
                rhs = mul(basis[i], mul(basis[j], basis[k]))
                if lhs != rhs:
                    violations.append(("associativity", (i, j, k)))
    for i in range(d):
        if mul(unit, basis[i]) != basis[i] or mul(basis[i], unit) != basis[i]:
            violations.append(("unit", (i,)))

    pairing = RationalMatrix.from_rows(
        [[sum((trace[k] * c for k, c in enumerate(mul(basis[i], basis[j]))), Fraction(0))
          for j in range(d)] for i in range(d)])
    if mat_rank(pairing) != d:
        violations.append(("nonsingular_pairing", None))

    if violations:
        raise FrobeniusValidationError(violations)
    return FrobeniusAlgebra(space, product, unit, trace, pairing, _invert(pairing))


def coalgebra_of(f: FrobeniusAlgebra):
    """(comultiplication matrix, counit) with the bimodule property verified.

    The comultiplication is the dim^2 x dim matrix of
    Delta(a) = sum g^{ij} (a e_i) (x) e_j  on the basis e_k (x) e_l <-> row k*dim+l,
    and the counit is the trace.  x Delta(a) = Delta(x a) = Delta(a) x is checked
    on all basis pairs, acting on the left/right tensor leg respectively.
    """
    d = f.dim
    delta = f.comultiplication_matrix()

    def delta_of(vec):
        return delta.apply(vec)

    def act_left(x, tensor):
        out = [Fraction(0)] * (d * d)
        for k in range(d):
            for l in range(d):
                c = tensor[k * d + l]
                if c == 0:
                    continue
                prod = f.multiply(x, f.basis_vector(k))
                for k2 in range(d):
                    if prod[k2]:
                        out[k2 * d + l] += c * prod[k2]
        return tuple(out)

    def act_right(tensor, x):
        out = [Fraction(0)] * (d * d)
        for k in range(d):
            for l in range(d):
                c = tensor[k * d + l]
                if c == 0:
                    continue
                prod = f.multiply(f.basis_vector(l), x)
                for l2 in range(d):
                    if prod[l2]:
                        out[k * d + l2] += c * prod[l2]
        return tuple(out)

    for a in range(d):
        av = f.basis_vector(a)
        da = delta_of(av)
        for x in range(d):
            xv = f.basis_vector(x)
            middle = delta_of(f.multiply(xv, av))
            if act_left(xv, da) != middle or middle != act_right(da, xv):
                raise FrobeniusError(f"bimodule property fails at basis pair ({x}, {a})")
        # counit law: (trace (x) id) Delta(a) = a
        recovered = tuple(
            sum((f.trace[k] * da[k * d + l] for k in range(d)), Fraction(0))
            for l in range(d))
        if recovered != av:
            raise FrobeniusError(f"counit law fails at basis element {a}")
    return delta, f.trace


# -- cobordism words --------------------------------------------------------

GENERATOR_WIRES = {
    "pants": (2, 1),
    "copants": (1, 2),
    "cap_trace": (1, 0),
    "cap_unit": (0, 1),
    "pairing": (2, 0),
    "copairing": (0, 2),
    "cylinder": (1, 1),
    "swap": (2, 2),
}


class CobordismWord:
    """Layers of generator tokens; wire positions are the list order."""

    __slots__ = ("layers", "in_wires", "out_wires")

    def __init__(self, layers):
        layers = [tuple(layer) for layer in layers]
        if not layers:
            raise CobordismError("empty word")
        for layer in layers:
            for tok in layer:
                if tok not in GENERATOR_WIRES:
                    raise CobordismError(f"unknown generator {tok!r}")
        wires = sum(GENERATOR_WIRES[t][0] for t in layers[0])
        self.in_wires = wires
        for li, layer in enumerate(layers):
            need = sum(GENERATOR_WIRES[t][0] for t in layer)
            if need != wires:
                raise CobordismError(
                    f"layer {li} consumes {need} wires but {wires} arrive")
            wires = sum(GENERATOR_WIRES[t][1] for t in layer)
        self.out_wires = wires
        self.layers = layers

    @classmethod
    def from_json(cls, data) -> "CobordismWord":
        return cls(data["layers"])

    def to_json(self):
        return {"layers": [list(layer) for layer in self.layers]}

    def __repr__(self):
        return f"CobordismWord({' | '.join(','.join(l) for l in self.layers)})"


def _generator_matrix(f: FrobeniusAlgebra, token: str) -> RationalMatrix:
    d = f.dim
    if token == "pants":
        return f.product_matrix()
    if token == "copants":
        return f.comultiplication_matrix()
    if token == "cap_trace":
        return RationalMatrix(1, d, list(f.trace))
    if token == "cap_unit":
        return RationalMatrix(d, 1, list(f.unit))
    if token == "pairing":
        return RationalMatrix(1, d * d, [f.pairing[i, j] for i in range(d) for j in range(d)])
    if token == "copairing":
        return RationalMatrix(d * d, 1,
                              [f.pairing_inv[i, j] for i in range(d) for j in range(d)])
    if token == "cylinder":
        return RationalMatrix.identity(d)
    if token == "swap":
        entries = [[Fraction(0)] * (d * d) for _ in range(d * d)]
        for i in range(d):
            for j in range(d):
                entries[j * d + i][i * d + j] = Fraction(1)
        return RationalMatrix.from_rows(entries)
    raise CobordismError(f"unknown generator {token!r}")


def layer_matrix(f: FrobeniusAlgebra, layer) -> RationalMatrix:
    """Tensor product of the layer's generator matrices, left to right."""
    mats = [_generator_matrix(f, tok) for tok in layer]
    out = mats[0]
    for m in mats[1:]:
        out = out.tensor(m)
    return out


def eval_cobordism(f: FrobeniusAlgebra, w: CobordismWord) -> RationalMatrix:
    """Compose the layer operators into a dim^out x dim^in matrix."""
    total = None
    for layer in w.layers:
        m = layer_matrix(f, layer)
        total = m if total is None else m * total
    return total


def closed_surface_invariant(f: FrobeniusAlgebra, g: int) -> Fraction:
    """trace(h^g applied to the unit), h the handle operator product . coproduct.

    Cross-checked internally against the explicit cobordism word
    cap_trace . (pants . copants)^g . cap_unit; any disagreement raises.
    """
    if g < 0:
        raise FrobeniusError("genus must be >= 0")
    handle = f.product_matrix() * f.comultiplication_matrix()
    v = f.unit
    for _ in range(g):
        v = handle.apply(v)
    by_handle = f.trace_of(v)

    layers = [("cap_unit",)] + [("copants",), ("pants",)] * g + [("cap_trace",)]
    word_value = eval_cobordism(f, CobordismWord(layers))
    assert word_value.rows == word_value.cols == 1
    if word_value[0, 0] != by_handle:
        raise FrobeniusError("handle-power and cobordism-word invariants disagree")
    return by_handle


# -- finite groups and Dijkgraaf-Witten --------------------------------------

class FiniteGroup:
    """Multiplication table on indices 0..order-1; validated as a group law."""

    __slots__ = ("order", "cayley", "identity", "_inv", "name")

    def __init__(self, cayley, name="group"):
        cayley = tuple(tuple(int(x) for x in row) for row in cayley)
        n = len(cayley)
        if any(len(row) != n for row in cayley):
            raise GroupError("cayley table must be square")
        if any(not (0 <= x < n) for row in cayley for x in row):
            raise GroupError("cayley entries out of range")
        identity = None
        for e in range(n):
            if all(cayley[e][x] == x == cayley[x][e] for x in range(n)):
                identity = e
                break
        if identity is None:
            raise GroupError("no identity element")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]]:
                        raise GroupError(f"associativity fails at ({a}, {b}, {c})")
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if cayley[a][b] == identity and cayley[b][a] == identity:
                    inv[a] = b
                    break
            if inv[a] is None:
                raise GroupError(f"element {a} has no inverse")
        self.order = n
        self.cayley = cayley
        self.identity = identity
        self._inv = tuple(inv)
        self.name = name

    def mul(self, a, b) -> int:
        return self.cayley[a][b]

    def inv(self, a) -> int:
        return self._inv[a]

    def commutator(self, a, b) -> int:
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def conjugacy_classes(self):
        """Classes as sorted tuples, ordered by their minimal element."""
        seen = set()
        classes = []
        for a in range(self.order):
            if a in seen:
                continue
            orbit = {self.mul(self.mul(g, a), self.inv(g)) for g in range(self.order)}
            seen |= orbit
            classes.append(tuple(sorted(orbit)))
        classes.sort(key=lambda c: c[0])
        return classes

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls([[(i + j) % n for j in range(n)] for i in range(n)], name=f"z{n}")

    @classmethod
    def direct_product(cls, g1, g2) -> "FiniteGroup":
        n1, n2 = g1.order, g2.order
        def idx(a, b):
            return a * n2 + b
        table = [[0] * (n1 * n2) for _ in range(n1 * n2)]
        for a1 in range(n1):
            for b1 in range(n2):
                for a2 in range(n1):
                    for b2 in range(n2):
                        table[idx(a1, b1)][idx(a2, b2)] = idx(g1.mul(a1, a2), g2.mul(b1, b2))
        return cls(table, name=f"{g1.name}x{g2.name}")

    @classmethod
    def symmetric3(cls) -> "FiniteGroup":
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
        def compose(p, q):  # (p q)(x) = p(q(x))
            return tuple(p[q[x]] for x in range(3))
        table = [[perms.index(compose(p, q)) for q in perms] for p in perms]
        return cls(table, name="s3")

    @classmethod
    def from_json(cls, data) -> "FiniteGroup":
        g = cls(data["cayley"], name=data.get("name", "group"))
        if "order" in data and int(data["order"]) != g.order:
            raise GroupError("declared order disagrees with the table")
        if "identity" in data and int(data["identity"]) != g.identity:
            raise GroupError("declared identity disagrees with the table")
        return g

    @classmethod
    def named(cls, name: str) -> "FiniteGroup":
        name = name.lower()
        if name in ("z2xz2", "klein", "klein_four", "v4"):
            return cls.direct_product(cls.cyclic(2), cls.cyclic(2))
        if name in ("s3", "sym3", "symmetric3"):
            return cls.symmetric3()
        if name.startswith("z") and name[1:].isdigit():
            return cls.cyclic(int(name[1:]))
        if name.startswith("cyclic") and name[6:].isdigit():
            return cls.cyclic(int(name[6:]))
        raise GroupError(f"unknown built-in group {name!r}")

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def dw_center_algebra(G: FiniteGroup) -> FrobeniusAlgebra:
    """Center of Q[G]: basis the conjugacy-class sums, trace lambda_e / |G|."""
    classes = G.conjugacy_classes()
    k = len(classes)
    space = GradedVectorSpace.ungraded([f"cl{c[0]}" for c in classes])
    class_of = {}
    for ci, c in enumerate(classes):
        for x in c:
            class_of[x] = ci

    coeffs = {}
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            # multiply the class sums inside the group algebra
            acc = {}
            for a in ci:
                for b in cj:
                    x = G.mul(a, b)
                    acc[x] = acc.get(x, 0) + 1
            # the product is constant on classes; read off at the minimal element
            for ck, c in enumerate(classes):
                n = acc.get(c[0], 0)
                if n:
                    coeffs[(ck, (i, j))] = Fraction(n)
    product = MultilinearMap((space, space), space, coeffs, degree=0)

    identity_class = class_of[G.identity]
    unit = tuple(Fraction(int(i == identity_class)) for i in range(k))
    trace = tuple(Fraction(1, G.order) if i == identity_class else Fraction(0)
                  for i in range(k))
    return validate_frobenius(product, unit, trace)


DW_BRUTE_GUARD = 10 ** 8


def dw_partition_brute(G: FiniteGroup, g: int) -> Fraction:
    """|{(a_1, b_1, ..., a_g, b_g) : prod [a_i, b_i] = e}| / |G|, by enumeration."""
    if g < 0:
        raise GroupError("genus must be >= 0")
    if g == 0:
        return Fraction(1, G.order)
    size = G.order ** (2 * g)
    if size > DW_BRUTE_GUARD:
        raise GroupError(
            f"brute-force size |G|^(2g) = {size} exceeds the guard {DW_BRUTE_GUARD}")
    count = 0
    commutators = [[G.commutator(a, b) for b in range(G.order)] for a in range(G.order)]
    for tup in iproduct(range(G.order), repeat=2 * g):
        acc = G.identity
        for i in range(g):
            acc = G.mul(acc, commutators[tup[2 * i]][tup[2 * i + 1]])
        if acc == G.identity:
            count += 1
    return Fraction(count, G.order)
