"""Checkers for Gerstenhaber, BV, and BV_{n+1} structures, exhaustive over bases.

The central formula is the deviation of a unary operator D from being a
derivation of the product,

    dev(a, b) = D(ab) - (Da) b - (-1)^{|a| |D|} a D(b),

and the bracket derived from it,

    {a, b} = (-1)^{|a|} D(ab) - (-1)^{|a|} D(a) b - a D(b),

tabulated on all basis pairs.  Two sign conventions for the seven-term
relation circulate (the bracket flips sign between them):

    gbv:  dev(a, b) = (-1)^{|a|-1} [a, b]
    sw:   dev(a, b) = (-1)^{|a|}   [a, b]

The derived bracket above is the sw-normalized one; the gbv bracket is its
negative.  Every identity checked here (Leibniz, Jacobi, skew, derivation
properties) is invariant under that global flip, so the verdicts agree under
either flag; the flag changes the bracket table a caller sees.

The two classical characterizations of "BV operator" are both implemented:

* Grothendieck: D(1) = 0 and [[[D, L_a], L_b], L_c] = 0 for all a, b, c,
  graded commutators of operators, L_a left multiplication.  The
  normalization D(1) = 0 is part of this clause; without it the operator
  L_x for odd x is a counterexample to the equivalence below.
* Seven-term: the derived bracket is a graded biderivation of the product
  (equivalently, the seven-term relation defines a bracket satisfying the
  Leibniz rule).

On any graded commutative unital algebra these two characterizations agree,
and the checker reports that agreement as its own clause.

All checks run over every basis tuple, so a pass is a finite proof for the
instance at hand.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct

from .exactq import GradedVectorSpace, MultilinearMap, rat


class GBVError(ValueError):
    pass


def _apply_linear(table, v):
    dim = len(table[0]) if table else 0
    out = [Fraction(0)] * dim
    for i, c in enumerate(v):
        if c:
            for k, x in enumerate(table[i]):
                if x:
                    out[k] += c * x
    return tuple(out)


def _apply_bilinear(table, u, v):
    dim = len(u)
    out = [Fraction(0)] * dim
    for i, a in enumerate(u):
        if a == 0:
            continue
        row = table[i]
        for j, b in enumerate(v):
            if b == 0:
                continue
            for k, x in enumerate(row[j]):
                if x:
                    out[k] += a * b * x
    return tuple(out)


class GradedOperatorAlgebra:
    """Graded commutative associative unital algebra with named unary operators."""

    __slots__ = ("space", "product", "unit", "operators", "_mul", "_ops")

    def __init__(self, space, product, unit, operators=None):
        self.space = space
        self.product = product
        self.unit = tuple(rat(x) for x in unit)
        self.operators = dict(operators or {})
        if product.arity != 2 or product.degree != 0 \
                or product.sources != (space, space) or product.target != space:
            raise GBVError("product must be binary of degree 0 on the space")
        if len(self.unit) != space.dim:
            raise GBVError("unit dimension mismatch")
        for name, op in self.operators.items():
            if op.arity != 1 or op.sources != (space,) or op.target != space:
                raise GBVError(f"operator {name!r} must be unary on the space")

        basis = [self.basis_vector(i) for i in range(space.dim)]
        mul = self.multiply
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                sign = -1 if (space.degree(i) * space.degree(j)) % 2 else 1
                if mul(u, v) != tuple(sign * x for x in mul(v, u)):
                    raise GBVError(f"not graded commutative at ({i}, {j})")
        for i, u in enumerate(basis):
            for j, v in enumerate(basis):
                for k, w in enumerate(basis):
                    if mul(mul(u, v), w) != mul(u, mul(v, w)):
                        raise GBVError(f"not associative at ({i}, {j}, {k})")
        for i, u in enumerate(basis):
            if mul(self.unit, u) != u or mul(u, self.unit) != u:
                raise GBVError(f"unit law fails at {i}")

    @property
    def dim(self):
        return self.space.dim

    def basis_vector(self, i):
        return tuple(Fraction(int(j == i)) for j in range(self.dim))

    def multiply(self, u, v):
        return _apply_bilinear(self._mul_table(), u, v)

    def operator(self, name) -> MultilinearMap:
        if name not in self.operators:
            raise GBVError(f"no operator named {name!r}")
        return self.operators[name]

    def apply_op(self, name, v):
        return _apply_linear(self._op_table(name), v)

    # basis tables make the exhaustive loops cheap; the maps stay authoritative
    def _mul_table(self):
        try:
            return self._mul
        except AttributeError:
            d = self.dim
            table = [[self.product.apply([self.basis_vector(i), self.basis_vector(j)])
                      for j in range(d)] for i in range(d)]
            self._mul = table
            return table

    def _op_table(self, name):
        op = self.operator(name)
        try:
            cache = self._ops
        except AttributeError:
            cache = {}
            self._ops = cache
        if name not in cache:
            cache[name] = [op.apply([self.basis_vector(i)]) for i in range(self.dim)]
        return cache[name]

    @classmethod
    def from_structure(cls, data) -> "GradedOperatorAlgebra":
        from .structjson import load_algebra_data
        parts = load_algebra_data(data)
        if parts["unit"] is None:
            raise GBVError("instance record needs a unit")
        return cls(parts["space"], parts["product"], parts["unit"], parts["operators"])


def load_instance(data):
    """(algebra, bracket or None) from one JSON record; the optional bracket
    block {"degree": n, "table": [[i, j, [coeffs]], ...]} addresses basis
    elements by their position in the record's basis list."""
    from .structjson import load_algebra_data
    parts = load_algebra_data(data)
    if parts["unit"] is None:
        raise GBVError("instance record needs a unit")
    A = GradedOperatorAlgebra(parts["space"], parts["product"], parts["unit"],
                              parts["operators"])
    bracket = None
    if "bracket" in data:
        bracket = load_bracket(A, data["bracket"], parts["posmap"])
    return A, bracket


class BracketTable:
    """Bilinear bracket of a declared degree, tabulated on basis pairs.

    Stored as a MultilinearMap; the Gerstenhaber axioms are what
    check_gerstenhaber verifies, deliberately not enforced here so corrupted
    tables can be represented and reported.
    """

    __slots__ = ("algebra", "degree", "map", "_tab")

    def __init__(self, algebra: GradedOperatorAlgebra, degree: int, mapping: MultilinearMap):
        self.algebra = algebra
        self.degree = degree
        if mapping.degree != degree:
            raise GBVError("bracket map degree differs from the declared degree")
        self.map = mapping

    def _table(self):
        try:
            return self._tab
        except AttributeError:
            d = self.algebra.dim
            bv = self.algebra.basis_vector
            self._tab = [[self.map.apply([bv(i), bv(j)]) for j in range(d)]
                         for i in range(d)]
            return self._tab

    def of(self, u, v):
        return _apply_bilinear(self._table(), u, v)

    def on_basis(self, i, j):
        return self._table()[i][j]

    def scaled(self, c) -> "BracketTable":
        return BracketTable(self.algebra, self.degree, self.map * c)

    def corrupt(self, i, j, vector) -> "BracketTable":
        """Copy with entry (i, j) replaced; for constructing counterexamples."""
        coeffs = {k: v for k, v in self.map.coeffs.items() if k[1] != (i, j)}
        for k, c in enumerate(vector):
            c = rat(c)
            if c:
                coeffs[(k, (i, j))] = c
        return BracketTable(self.algebra, self.degree,
                            MultilinearMap(self.map.sources, self.map.target,
                                           coeffs, self.degree))

    def to_table(self):
        d = self.algebra.dim
        return {(i, j): self.on_basis(i, j) for i in range(d) for j in range(d)}


CONVENTIONS = ("gbv", "sw")


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise GBVError(f"convention must be one of {CONVENTIONS}")


def deviation(A: GradedOperatorAlgebra, delta: str, u_idx: int, v_idx: int):
    """D(ab) - (Da)b - (-1)^{|a||D|} a D(b) on basis elements."""
    op = A.operator(delta)
    a, b = A.basis_vector(u_idx), A.basis_vector(v_idx)
    da, db = A.apply_op(delta, a), A.apply_op(delta, b)
    first = A.apply_op(delta, A.multiply(a, b))
    s = -1 if (A.space.degree(u_idx) * op.degree) % 2 else 1
    return tuple(x - y - s * z for x, y, z in
                 zip(first, A.multiply(da, b), A.multiply(a, db)))


def derive_bracket(A: GradedOperatorAlgebra, delta: str, convention: str = "sw") \
        -> BracketTable:
    """Tabulate the deviation bracket of the named operator on all basis pairs.

    sw returns {a,b} = (-1)^{|a|} dev(a, b) (the deviation formula as usually
    displayed); gbv returns its negative.  The bracket degree equals the
    operator's degree.
    """
    _check_convention(convention)
    op = A.operator(delta)
    flip = -1 if convention == "gbv" else 1
    coeffs = {}
    for i in range(A.dim):
        si = -1 if A.space.degree(i) % 2 else 1
        for j in range(A.dim):
            for k, c in enumerate(deviation(A, delta, i, j)):
                if c:
                    coeffs[(k, (i, j))] = flip * si * c
    mapping = MultilinearMap((A.space, A.space), A.space, coeffs, degree=op.degree)
    return BracketTable(A, op.degree, mapping)


class CheckReport:
    """Ordered clauses (name, passed, witness); witness is a basis tuple."""

    def __init__(self, title, clauses):
        self.title = title
        self.clauses = list(clauses)

    @property
    def passed(self):
        return all(ok for _, ok, _ in self.clauses)

    def clause(self, name):
        for n, ok, w in self.clauses:
            if n == name:
                return ok, w
        raise KeyError(name)

    def __repr__(self):
        body = ", ".join(f"{n}={'ok' if ok else 'FAIL'}" for n, ok, _ in self.clauses)
        return f"CheckReport({self.title}: {body})"


def _forall(indices, predicate):
    """(passed, first witness) over all index tuples."""
    for tup in indices:
        if not predicate(*tup):
            return False, tup
    return True, None


def check_gerstenhaber(A: GradedOperatorAlgebra, bracket: BracketTable, n: int) \
        -> CheckReport:
    """Graded skew and Jacobi on the shifted space V[n], and the Leibniz rule.

    skew:    [a,b] = -(-1)^{(|a|+n)(|b|+n)} [b,a]
    jacobi:  [a,[b,c]] = [[a,b],c] + (-1)^{(|a|+n)(|b|+n)} [b,[a,c]]
    leibniz: [a,bc] = [a,b]c + (-1)^{(|a|+n)|b|} b [a,c]
    """
    if bracket.degree != n:
        raise GBVError(f"bracket degree {bracket.degree} != declared {n}")
    d = A.dim
    deg = A.space.degree
    bv = A.basis_vector

    def shifted(i):
        return deg(i) + n

    def skew(i, j):
        lhs = bracket.on_basis(i, j)
        s = -1 if (shifted(i) * shifted(j)) % 2 else 1
        rhs = tuple(-s * x for x in bracket.on_basis(j, i))
        return lhs == rhs

    def jacobi(i, j, k):
        lhs = bracket.of(bv(i), bracket.on_basis(j, k))
        first = bracket.of(bracket.on_basis(i, j), bv(k))
        s = -1 if (shifted(i) * shifted(j)) % 2 else 1
        second = bracket.of(bv(j), bracket.of(bv(i), bv(k)))
        return lhs == tuple(x + s * y for x, y in zip(first, second))

    def leibniz(i, j, k):
        lhs = bracket.of(bv(i), A.multiply(bv(j), bv(k)))
        first = A.multiply(bracket.on_basis(i, j), bv(k))
        s = -1 if ((deg(i) + n) * deg(j)) % 2 else 1
        second = A.multiply(bv(j), bracket.of(bv(i), bv(k)))
        return lhs == tuple(x + s * y for x, y in zip(first, second))

    pairs = list(iproduct(range(d), repeat=2))
    triples = list(iproduct(range(d), repeat=3))
    clauses = [
        ("skew_symmetry",) + _forall(pairs, skew),
        ("jacobi",) + _forall(triples, jacobi),
        ("leibniz",) + _forall(triples, leibniz),
    ]
    return CheckReport("gerstenhaber", clauses)


def _grothendieck_clause(A, delta):
    """[[[D, L_a], L_b], L_c] = 0 for all basis a, b, c, graded commutators.

    Checked through the equivalent finite criterion: for every pair (a, b)
    the operator E = [[D, L_a], L_b] graded-commutes with every left
    multiplication iff E is itself the left multiplication by E(1); on a
    graded commutative algebra the two are the same statement.  Returns
    (passed, witnessing pair).
    """
    op = A.operator(delta)
    deg = A.space.degree
    dd = op.degree
    d = A.dim
    mul = A._mul_table()
    dtab = A._op_table(delta)

    def D(vec):
        return _apply_linear(dtab, vec)

    for a in range(d):
        sa = -1 if (dd * deg(a)) % 2 else 1
        # Da(e_m) = D(a e_m) - (-1)^{|D||a|} a D(e_m)
        da = [tuple(x - sa * y for x, y in
                    zip(D(mul[a][m]), _apply_bilinear(mul, A.basis_vector(a), dtab[m])))
              for m in range(d)]

        def Da(vec, table=da):
            return _apply_linear(table, vec)

        for b in range(d):
            sb = -1 if ((dd + deg(a)) * deg(b)) % 2 else 1
            e_tab = [tuple(x - sb * y for x, y in
                           zip(Da(mul[b][m]),
                               _apply_bilinear(mul, A.basis_vector(b), da[m])))
                     for m in range(d)]
            e_of_unit = _apply_linear(e_tab, A.unit)
            for m in range(d):
                expected = _apply_bilinear(mul, e_of_unit, A.basis_vector(m))
                if tuple(e_tab[m]) != expected:
                    return False, (a, b, m)
    return True, None


def check_bv(A: GradedOperatorAlgebra, delta: str, convention: str = "gbv") \
        -> CheckReport:
    """BV checks for the named odd operator, under both classical definitions.

    Clauses: Delta squared zero; Delta kills the unit; the Grothendieck
    triple-commutator identity; the seven-term route (the derived bracket is
    a graded biderivation); and the agreement of the two characterizations,
    which is a theorem and so must always hold.
    """
    _check_convention(convention)
    op = A.operator(delta)
    if op.degree % 2 == 0:
        raise GBVError(f"operator {delta!r} must have odd degree, has {op.degree}")
    d = A.dim
    bv_ = A.basis_vector

    def sq(i):
        return all(x == 0 for x in A.apply_op(delta, A.apply_op(delta, bv_(i))))

    squared = _forall([(i,) for i in range(d)], sq)
    unit_killed = (all(x == 0 for x in A.apply_op(delta, A.unit)), None)

    groth = _grothendieck_clause(A, delta)

    bracket = derive_bracket(A, delta, convention)
    n = op.degree
    deg = A.space.degree

    def biderivation(i, j, k):
        lhs = bracket.of(bv_(i), A.multiply(bv_(j), bv_(k)))
        first = A.multiply(bracket.on_basis(i, j), bv_(k))
        s = -1 if ((deg(i) + n) * deg(j)) % 2 else 1
        second = A.multiply(bv_(j), bracket.of(bv_(i), bv_(k)))
        return lhs == tuple(x + s * y for x, y in zip(first, second))

    seven = _forall(iproduct(range(d), repeat=3), biderivation)

    groth_characterization = unit_killed[0] and groth[0]
    seven_characterization = seven[0]
    agreement = (groth_characterization == seven_characterization, None)

    clauses = [
        ("delta_squared_zero",) + squared,
        ("delta_unit_zero",) + unit_killed,
        ("grothendieck_triple_commutator",) + groth,
        ("seven_term_biderivation",) + seven,
        ("characterizations_agree",) + agreement,
    ]
    return CheckReport(f"bv[{convention}]", clauses)


def _required_operators(n: int):
    """(B_i names with their degrees, whether Delta is required) per the theorem."""
    if n < 1:
        raise GBVError("the checker needs n >= 1")
    if n % 2:
        count = (n - 1) // 2
        return [(f"b{i}", 4 * i - 1) for i in range(1, count + 1)], True
    return [(f"b{i}", 4 * i - 1) for i in range(1, n // 2 + 1)], False


def check_bv_nplus1(A: GradedOperatorAlgebra, n: int, bracket: BracketTable = None,
                    convention: str = "gbv") -> CheckReport:
    """Axioms of the degree-n bracket family: B_i operators, and Delta when n is odd.

    Required operators (validated before any clause runs): for n odd, "delta"
    of degree n and b1..b_{(n-1)/2} of degrees 4i-1; for n even, b1..b_{n/2}.
    The bracket defaults to the one derived from delta (n odd); for n even it
    must be supplied.
    """
    _check_convention(convention)
    required, needs_delta = _required_operators(n)
    for name, degree in required:
        op = A.operators.get(name)
        if op is None:
            raise GBVError(f"missing operator {name!r} (degree {degree})")
        if op.degree != degree:
            raise GBVError(f"operator {name!r} must have degree {degree}, has {op.degree}")
    if needs_delta:
        op = A.operators.get("delta")
        if op is None:
            raise GBVError(f"missing operator 'delta' (degree {n})")
        if op.degree != n:
            raise GBVError(f"operator 'delta' must have degree {n}, has {op.degree}")
    if bracket is None:
        if not needs_delta:
            raise GBVError("a bracket table is required when n is even")
        bracket = derive_bracket(A, "delta", convention)
    if bracket.degree != n:
        raise GBVError(f"bracket degree {bracket.degree} != n = {n}")

    d = A.dim
    deg = A.space.degree
    bv_ = A.basis_vector
    clauses = []

    lie = check_gerstenhaber(A, bracket, n)
    clauses.append(("bracket_skew_symmetry",) + lie.clause("skew_symmetry"))
    clauses.append(("bracket_jacobi",) + lie.clause("jacobi"))
    clauses.append(("bracket_leibniz",) + lie.clause("leibniz"))

    def op_checks(name, opdeg):
        def sq(i):
            return all(x == 0 for x in A.apply_op(name, A.apply_op(name, bv_(i))))

        def der_product(i, j):
            lhs = A.apply_op(name, A.multiply(bv_(i), bv_(j)))
            s = -1 if (opdeg * deg(i)) % 2 else 1
            rhs = tuple(x + s * y for x, y in zip(
                A.multiply(A.apply_op(name, bv_(i)), bv_(j)),
                A.multiply(bv_(i), A.apply_op(name, bv_(j)))))
            return lhs == rhs

        def der_bracket(i, j):
            lhs = A.apply_op(name, bracket.on_basis(i, j))
            s = -1 if (opdeg * (deg(i) + n)) % 2 else 1
            rhs = tuple(x + s * y for x, y in zip(
                bracket.of(A.apply_op(name, bv_(i)), bv_(j)),
                bracket.of(bv_(i), A.apply_op(name, bv_(j)))))
            return lhs == rhs

        singles = [(i,) for i in range(d)]
        pairs = list(iproduct(range(d), repeat=2))
        return [
            (f"{name}_squared_zero",) + _forall(singles, sq),
            (f"{name}_derivation_of_product",) + _forall(pairs, der_product),
            (f"{name}_derivation_of_bracket",) + _forall(pairs, der_bracket),
        ]

    for name, degree in required:
        clauses.extend(op_checks(name, degree))

    if needs_delta:
        def dsq(i):
            return all(x == 0 for x in A.apply_op("delta", A.apply_op("delta", bv_(i))))

        def seven(i, j):
            dev = deviation(A, "delta", i, j)
            exp = -1 if ((deg(i) + (0 if convention == "sw" else 1)) % 2) else 1
            rhs = tuple(exp * x for x in bracket.on_basis(i, j))
            return dev == rhs

        def delta_der_bracket(i, j):
            lhs = A.apply_op("delta", bracket.on_basis(i, j))
            s = -1 if deg(i) % 2 else 1
            rhs = tuple(x - s * y for x, y in zip(
                bracket.of(A.apply_op("delta", bv_(i)), bv_(j)),
                bracket.of(bv_(i), A.apply_op("delta", bv_(j)))))
            return lhs == rhs

        singles = [(i,) for i in range(d)]
        pairs = list(iproduct(range(d), repeat=2))
        clauses.append(("delta_squared_zero",) + _forall(singles, dsq))
        clauses.append(("seven_term_relation",) + _forall(pairs, seven))
        clauses.append(("delta_derivation_of_bracket",) + _forall(pairs, delta_der_bracket))

    return CheckReport(f"bv{n + 1}[{convention}]", clauses)


def load_bracket(A: GradedOperatorAlgebra, data, posmap=None) -> BracketTable:
    """Bracket table from JSON: {"degree": n, "table": [[i, j, [coeffs]], ...]}."""
    degree = int(data["degree"])
    if posmap is None:
        posmap = list(range(A.dim))
    coeffs = {}
    for i, j, vec in data.get("table", []):
        for p, c in enumerate(vec):
            c = rat(c)
            if c:
                coeffs[(posmap[p], (posmap[int(i)], posmap[int(j)]))] = c
    mapping = MultilinearMap((A.space, A.space), A.space, coeffs, degree=degree)
    return BracketTable(A, degree, mapping)
