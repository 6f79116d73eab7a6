"""Exact rational linear algebra: matrices, graded vector spaces, multilinear maps.

Everything here computes over the rationals with no rounding, ever.  Rationals
are ``fractions.Fraction`` values (arbitrary precision, always in lowest terms
with positive denominator, which is exactly the invariant we need).  Rank is
computed by fraction-free (Bareiss) elimination on integer-cleared rows;
kernels by reduced row echelon form over Fraction.

The graded pieces fix two global conventions used by every other module:

* Koszul sign: moving an element of degree p past one of degree q costs
  (-1)**(p*q).
* Basis enumeration of a graded space: degrees ascending, labels in declared
  order within a degree.  Multi-indices are tuples of flat indices, compared
  lexicographically.  This makes serialized maps bit-exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product


class CompositionNotZeroError(ValueError):
    """d_out . d_in was expected to vanish but did not."""


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_str(q: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RationalMatrix:
    """Immutable dense matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, rows, cols, entries):
        entries = tuple(rat(x) for x in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"need {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self._e = entries

    @classmethod
    def from_rows(cls, rows_list) -> "RationalMatrix":
        rows_list = [list(r) for r in rows_list]
        r = len(rows_list)
        c = len(rows_list[0]) if r else 0
        if any(len(row) != c for row in rows_list):
            raise ValueError("ragged rows")
        return cls(r, c, [x for row in rows_list for x in row])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._e[i * self.cols + j]

    def row(self, i):
        return self._e[i * self.cols:(i + 1) * self.cols]

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self._e == other._e)

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def __repr__(self):
        return f"RationalMatrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._e)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows,
            [self._e[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)])

    def __add__(self, other) -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RationalMatrix(self.rows, self.cols,
                              [a + b for a, b in zip(self._e, other._e)])

    def __sub__(self, other) -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RationalMatrix(self.rows, self.cols,
                              [a - b for a, b in zip(self._e, other._e)])

    def __mul__(self, other) -> "RationalMatrix":
        if isinstance(other, (int, Fraction)):
            return RationalMatrix(self.rows, self.cols, [x * other for x in self._e])
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        # zero-skipping: the matrices arising from tensor words are sparse
        oc = other.cols
        out = [Fraction(0)] * (self.rows * oc)
        orows = [other.row(k) for k in range(other.rows)]
        for i in range(self.rows):
            base = i * oc
            for k, a in enumerate(self.row(i)):
                if a == 0:
                    continue
                for j, b in enumerate(orows[k]):
                    if b != 0:
                        out[base + j] += a * b
        return RationalMatrix(self.rows, oc, out)

    __rmul__ = __mul__

    def apply(self, vec):
        """Matrix times column vector (any iterable of rationals)."""
        v = [rat(x) for x in vec]
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((self.row(i)[k] * v[k] for k in range(self.cols)), Fraction(0))
                     for i in range(self.rows))

    def tensor(self, other) -> "RationalMatrix":
        """Kronecker product, blocks ordered row-major."""
        zeros = (Fraction(0),) * other.cols
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row_k = other.row(k)
                for j in range(self.cols):
                    a = self._e[i * self.cols + j]
                    if a == 0:
                        out.extend(zeros)
                    else:
                        out.extend(a * x for x in row_k)
        return RationalMatrix(self.rows * other.rows, self.cols * other.cols, out)

    def to_json(self):
        return [[rat_str(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        return cls.from_rows([[rat(x) for x in row] for row in data])


def _int_rows(m: RationalMatrix):
    """Clear denominators row by row (row scaling preserves rank)."""
    out = []
    for i in range(m.rows):
        row = m.row(i)
        lcm = 1
        for x in row:
            d = x.denominator
            g = _gcd(lcm, d)
            lcm = lcm // g * d
        out.append([int(x * lcm) for x in row])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def mat_rank(m: RationalMatrix) -> int:
    """Rank over the rationals via fraction-free Bareiss elimination."""
    a = _int_rows(m)
    nr, nc = m.rows, m.cols
    rank = 0
    prev = 1
    pr = 0
    for pc in range(nc):
        piv = next((i for i in range(pr, nr) if a[i][pc] != 0), None)
        if piv is None:
            continue
        a[pr], a[piv] = a[piv], a[pr]
        p = a[pr][pc]
        for i in range(pr + 1, nr):
            f = a[i][pc]
            for j in range(pc, nc):
                # exact by Bareiss: prev divides the cross product
                a[i][j] = (p * a[i][j] - f * a[pr][j]) // prev
            a[i][pc] = 0
        prev = p
        pr += 1
        rank += 1
        if pr == nr:
            break
    return rank


def rref(m: RationalMatrix):
    """Reduced row echelon form over Fraction; returns (rows, pivot columns)."""
    a = [list(m.row(i)) for i in range(m.rows)]
    nr, nc = m.rows, m.cols
    pivots = []
    pr = 0
    for pc in range(nc):
        piv = next((i for i in range(pr, nr) if a[i][pc] != 0), None)
        if piv is None:
            continue
        a[pr], a[piv] = a[piv], a[pr]
        inv = 1 / a[pr][pc]
        a[pr] = [x * inv for x in a[pr]]
        for i in range(nr):
            if i != pr and a[i][pc] != 0:
                f = a[i][pc]
                a[i] = [x - f * y for x, y in zip(a[i], a[pr])]
        pivots.append(pc)
        pr += 1
        if pr == nr:
            break
    return a, pivots


def kernel_basis(m: RationalMatrix):
    """Basis of the null space; the count is always cols - rank."""
    a, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][f]
        basis.append(tuple(v))
    return basis


def homology_dimension(d_in: RationalMatrix, d_out: RationalMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for a two-step complex  . --d_in--> . --d_out--> .

    Raises CompositionNotZeroError unless d_out . d_in is exactly zero.
    """
    if d_in.rows != d_out.cols:
        raise ValueError("d_in target and d_out source dimensions differ")
    if not (d_out * d_in).is_zero():
        raise CompositionNotZeroError("d_out . d_in != 0, not a chain complex")
    return (d_out.cols - mat_rank(d_out)) - mat_rank(d_in)


def rank_by_minors(m: RationalMatrix) -> int:
    """Independent rank oracle: largest k with a nonvanishing k x k minor.

    Exponential; only for cross-checking small matrices in tests.
    """
    def det(rows, cols):
        if len(rows) == 1:
            return m[rows[0], cols[0]]
        return sum(((-1) ** i) * m[rows[0], cols[i]] * det(rows[1:], cols[:i] + cols[i + 1:])
                   for i in range(len(cols)))

    for k in range(min(m.rows, m.cols), 0, -1):
        for rsel in combinations(range(m.rows), k):
            for csel in combinations(range(m.cols), k):
                if det(list(rsel), list(csel)) != 0:
                    return k
    return 0


class GradedVectorSpace:
    """Finite-dimensional graded vector space with named basis elements.

    components maps an integer degree to a tuple of basis labels.  The flat
    basis enumeration (degrees ascending, labels in declared order) is the
    index space used by MultilinearMap coefficients.
    """

    __slots__ = ("components", "_basis", "_index")

    def __init__(self, components):
        comp = {}
        for deg in sorted(components):
            labels = tuple(components[deg])
            if not labels:
                continue
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate basis labels in degree {deg}")
            comp[deg] = labels
        self.components = comp
        self._basis = tuple((label, deg) for deg in comp for label in comp[deg])
        self._index = {label: i for i, (label, _) in enumerate(self._basis)}
        if len(self._index) != len(self._basis):
            raise ValueError("basis labels must be unique across degrees")

    @classmethod
    def ungraded(cls, labels) -> "GradedVectorSpace":
        return cls({0: tuple(labels)})

    @property
    def dim(self) -> int:
        return len(self._basis)

    def basis(self):
        """Tuple of (label, degree) in the fixed enumeration order."""
        return self._basis

    def label(self, i: int) -> str:
        return self._basis[i][0]

    def degree(self, i: int) -> int:
        return self._basis[i][1]

    def index(self, label: str) -> int:
        return self._index[label]

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components.items()))

    def __repr__(self):
        parts = ", ".join(f"{d}: {len(ls)}" for d, ls in self.components.items())
        return f"GradedVectorSpace({parts})"


def koszul_sign(degrees_moved_past, degree_moving) -> int:
    """Sign for moving one element of the given degree past a block of others."""
    total = sum(degrees_moved_past)
    return -1 if (total * degree_moving) % 2 else 1


class MultilinearMap:
    """Element of Hom(V_1 (x) ... (x) V_n, W), homogeneous of a fixed degree shift.

    coefficients: sparse map (output index, input multi-index) -> Fraction.
    A coefficient may be nonzero only when
    deg(output) == sum(deg(inputs)) + degree.
    """

    __slots__ = ("arity", "sources", "target", "degree", "coeffs")

    def __init__(self, sources, target, coeffs, degree=0):
        sources = tuple(sources)
        self.arity = len(sources)
        self.sources = sources
        self.target = target
        self.degree = degree
        clean = {}
        for (out, ins), c in coeffs.items():
            c = rat(c)
            if c == 0:
                continue
            ins = tuple(ins)
            if len(ins) != self.arity:
                raise ValueError("input multi-index length != arity")
            if not (0 <= out < target.dim):
                raise ValueError("output index out of range")
            for k, i in enumerate(ins):
                if not (0 <= i < sources[k].dim):
                    raise ValueError("input index out of range")
            expect = sum(sources[k].degree(i) for k, i in enumerate(ins)) + degree
            if target.degree(out) != expect:
                raise ValueError(
                    f"coefficient at {(out, ins)} violates degree shift {degree}")
            clean[(out, ins)] = c
        self.coeffs = clean

    @classmethod
    def identity(cls, space: GradedVectorSpace) -> "MultilinearMap":
        return cls((space,), space, {(i, (i,)): 1 for i in range(space.dim)})

    @classmethod
    def from_basis_action(cls, sources, target, action, degree=0) -> "MultilinearMap":
        """Build from a callable mapping an input multi-index to {out_index: coeff}."""
        sources = tuple(sources)
        coeffs = {}
        for ins in product(*(range(s.dim) for s in sources)):
            for out, c in action(*ins).items():
                if c != 0:
                    coeffs[(out, ins)] = c
        return cls(sources, target, coeffs, degree)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, MultilinearMap)
                and self.sources == other.sources
                and self.target == other.target
                and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.sources, self.target, self.degree,
                     tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        return f"MultilinearMap(arity={self.arity}, degree={self.degree}, nnz={len(self.coeffs)})"

    def __add__(self, other) -> "MultilinearMap":
        self._check_same_shape(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return MultilinearMap(self.sources, self.target, out, self.degree)

    def __sub__(self, other) -> "MultilinearMap":
        return self + (other * -1)

    def __mul__(self, scalar) -> "MultilinearMap":
        s = rat(scalar)
        return MultilinearMap(self.sources, self.target,
                              {k: c * s for k, c in self.coeffs.items()}, self.degree)

    __rmul__ = __mul__

    def _check_same_shape(self, other):
        if (self.sources, self.target, self.degree) != (other.sources, other.target, other.degree):
            raise ValueError("maps have different shapes or degrees")

    def on_basis(self, *ins):
        """Value on a basis multi-index, as a sparse {output index: coeff} dict."""
        ins = tuple(ins)
        out = {}
        for (o, jj), c in self.coeffs.items():
            if jj == ins:
                out[o] = out.get(o, Fraction(0)) + c
        return out

    def apply(self, vectors):
        """Multilinear evaluation on dense coefficient vectors; returns a dense tuple."""
        if len(vectors) != self.arity:
            raise ValueError("wrong number of arguments")
        vecs = [tuple(rat(x) for x in v) for v in vectors]
        for k, v in enumerate(vecs):
            if len(v) != self.sources[k].dim:
                raise ValueError(f"argument {k} has wrong dimension")
        out = [Fraction(0)] * self.target.dim
        for (o, ins), c in self.coeffs.items():
            w = c
            for k, i in enumerate(ins):
                w *= vecs[k][i]
                if w == 0:
                    break
            if w != 0:
                out[o] += w
        return tuple(out)

    def as_matrix(self) -> RationalMatrix:
        """Arity-1 maps as a dim(target) x dim(source) matrix."""
        if self.arity != 1:
            raise ValueError("as_matrix requires arity 1")
        src = self.sources[0]
        m = [[Fraction(0)] * src.dim for _ in range(self.target.dim)]
        for (o, (i,)), c in self.coeffs.items():
            m[o][i] += c
        return RationalMatrix.from_rows(m)


def compose_multilinear(outer: MultilinearMap, slot: int, inner: MultilinearMap) -> MultilinearMap:
    """Operadic composition outer o_slot inner in the endomorphism operad.

    slot is 1-based.  Koszul convention: the inner map moves past the inputs
    feeding slots 1..slot-1, contributing (-1)**(deg(inner) * sum of their degrees).
    """
    if not (1 <= slot <= outer.arity):
        raise ValueError(f"slot {slot} out of range for arity {outer.arity}")
    if inner.target != outer.sources[slot - 1]:
        raise ValueError("inner target does not match the outer slot source")
    s = slot - 1
    sources = outer.sources[:s] + inner.sources + outer.sources[s + 1:]
    coeffs = {}
    # index inner coefficients by their output for the contraction
    by_out = {}
    for (o, ins), c in inner.coeffs.items():
        by_out.setdefault(o, []).append((ins, c))
    for (o, ins), c in outer.coeffs.items():
        hub = ins[s]
        if hub not in by_out:
            continue
        prefix_deg = sum(outer.sources[k].degree(ins[k]) for k in range(s))
        sign = koszul_sign([prefix_deg], inner.degree)
        for jins, jc in by_out[hub]:
            key = (o, ins[:s] + jins + ins[s + 1:])
            val = coeffs.get(key, Fraction(0)) + sign * c * jc
            if val == 0:
                coeffs.pop(key, None)
            else:
                coeffs[key] = val
    return MultilinearMap(sources, outer.target, coeffs, outer.degree + inner.degree)
