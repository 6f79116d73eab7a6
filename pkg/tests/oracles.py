"""Independent brute-force oracles, written before the modules they check.

These deliberately share no code with loopforge: chains are plain tuples,
matrices are lists of Fraction lists, and ranks come from a local Gaussian
elimination.  Slow and simple on purpose.
"""

from fractions import Fraction
from itertools import product


def gauss_rank(rows):
    """Rank of a list-of-lists of Fractions."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = Fraction(1) / rows[row][col]
        rows[row] = [x * inv for x in rows[row]]
        for r in range(len(rows)):
            if r != row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[row])]
        row += 1
        rank += 1
        if row == len(rows):
            break
    return rank


def _mul(table, dim, i, j):
    """Basis product e_i e_j as a coefficient list."""
    return table.get((i, j), [Fraction(0)] * dim)


def hochschild_boundary_formula(table, dim, degrees, chain):
    """b(c (x) a_1 ... a_n) by the alternating-sum formula with the wrap Koszul sign.

    chain: (c, (a_1, ..., a_n)) of basis indices.  Returns {chain: coeff}.
    """
    c, As = chain
    n = len(As)
    out = {}

    def add(m_coeffs, rest, sign):
        for m2, coeff in enumerate(m_coeffs):
            if coeff:
                key = (m2, tuple(rest))
                out[key] = out.get(key, Fraction(0)) + sign * coeff

    if n == 0:
        return out
    add(_mul(table, dim, c, As[0]), As[1:], Fraction(1))
    for i in range(1, n):
        prod = _mul(table, dim, As[i - 1], As[i])
        for k, coeff in enumerate(prod):
            if coeff:
                rest = As[:i - 1] + (k,) + As[i + 1:]
                key = (c, rest)
                out[key] = out.get(key, Fraction(0)) + ((-1) ** i) * coeff
    wrap_koszul = (-1) ** (degrees[As[-1]] * (degrees[c] + sum(degrees[a] for a in As[:-1])))
    add([x * ((-1) ** n) * wrap_koszul for x in _mul(table, dim, As[-1], c)],
        As[:-1], Fraction(1))
    return {k: v for k, v in out.items() if v != 0}


def ungraded_hochschild_dims(table, dim, N):
    """Homology dims of the ungraded Hochschild complex, by length 0..N-1."""
    degrees = [0] * dim
    bases = [[(c, t) for c in range(dim) for t in product(range(dim), repeat=n)]
             for n in range(N + 1)]
    mats = []
    for n in range(1, N + 1):
        idx = {ch: i for i, ch in enumerate(bases[n - 1])}
        rows = [[Fraction(0)] * len(bases[n]) for _ in range(len(bases[n - 1]))]
        for j, ch in enumerate(bases[n]):
            for ch2, coeff in hochschild_boundary_formula(table, dim, degrees, ch).items():
                rows[idx[ch2]][j] += coeff
        mats.append(rows)
    dims = []
    for n in range(N):
        d_in = mats[n]                                    # C_{n+1} -> C_n
        d_out = mats[n - 1] if n >= 1 else None           # C_n -> C_{n-1}
        ker = (len(bases[n]) - gauss_rank(transpose(d_out))) if d_out else len(bases[n])
        # rank of the incoming map
        dims.append(ker - gauss_rank(transpose(d_in)))
    return dims


def transpose(rows):
    if not rows or not rows[0]:
        return []
    return [[rows[i][j] for i in range(len(rows))] for j in range(len(rows[0]))]


def graded_hochschild_dims(table, dim, degrees, N, window):
    """Homology dims per total degree t = n - internal weight, truncated at length N.

    Also verifies b . b = 0 on every materialized basis chain; raises otherwise.
    """
    chains_by_t = {}
    for n in range(N + 1):
        for c in range(dim):
            for t in product(range(dim), repeat=n):
                w = degrees[c] + sum(degrees[a] for a in t)
                chains_by_t.setdefault(n - w, []).append((c, t))
    for tlist in chains_by_t.values():
        for ch in tlist:
            second = {}
            for mid, coeff in hochschild_boundary_formula(table, dim, degrees, ch).items():
                for fin, c2 in hochschild_boundary_formula(table, dim, degrees, mid).items():
                    second[fin] = second.get(fin, Fraction(0)) + coeff * c2
            assert all(v == 0 for v in second.values()), f"b^2 != 0 at {ch}"

    def matrix(t):
        src = chains_by_t.get(t, [])
        dst = chains_by_t.get(t - 1, [])
        idx = {ch: i for i, ch in enumerate(dst)}
        rows = [[Fraction(0)] * len(src) for _ in range(len(dst))]
        for j, ch in enumerate(src):
            for ch2, coeff in hochschild_boundary_formula(table, dim, degrees, ch).items():
                if ch2 in idx:  # boundaries stay within the truncation
                    rows[idx[ch2]][j] += coeff
        return rows, len(src)

    dims = {}
    for t in window:
        m_out, n_t = matrix(t)
        m_in, _ = matrix(t + 1)
        ker = n_t - gauss_rank(transpose(m_out))
        dims[t] = ker - gauss_rank(transpose(m_in))
    return dims


DUAL_NUMBERS_TABLE = {
    (0, 0): [Fraction(1), Fraction(0)],
    (0, 1): [Fraction(0), Fraction(1)],
    (1, 0): [Fraction(0), Fraction(1)],
    (1, 1): [Fraction(0), Fraction(0)],
}


def triple_commutator_vanishes(dim, degrees, mul, dvec, ddeg):
    """Literal [[[D, L_a], L_b], L_c] = 0 check on every basis quadruple.

    mul(i, j) and dvec(i) return coefficient tuples; slow and direct, the
    oracle for the optimized clause inside the package.
    """

    def apply_lin(op, vec):
        out = [Fraction(0)] * dim
        for i, c in enumerate(vec):
            if c:
                for k, x in enumerate(op(i)):
                    out[k] += c * x
        return tuple(out)

    def L(idx):
        return lambda m: mul(idx, m)

    def commutator(T, tdeg, idx):
        s = -1 if (tdeg * degrees[idx]) % 2 else 1

        def out(m):
            first = apply_lin(T, mul(idx, m))
            second = apply_lin(L(idx), T(m))
            return tuple(x - s * y for x, y in zip(first, second))

        return out, tdeg + degrees[idx]

    for a in range(dim):
        c1, d1 = commutator(dvec, ddeg, a)
        for b in range(dim):
            c2, d2 = commutator(c1, d1, b)
            for c in range(dim):
                c3, _ = commutator(c2, d2, c)
                for m in range(dim):
                    if any(x != 0 for x in c3(m)):
                        return False
    return True
