"""Shared JSON structure-constant format for algebras, bimodules and operators.

{
  "basis":   [{"name": "1", "degree": 0}, ...],
  "product": [[i, j, [coeffs of e_i * e_j]], ...],   omitted pairs are zero
  "unit":    [coeffs],
  "trace":   [coeffs],                               optional
  "differential": [[coeffs of d(e_i)], ...],         optional, one row per e_i
  "operators": {"name": {"degree": d, "matrix": [[coeffs of op(e_i)], ...]}},
}

All coefficients are exact rational strings ("3/4") or integers.
"""

from __future__ import annotations

from fractions import Fraction

from .exactq import GradedVectorSpace, MultilinearMap, rat


class StructureError(ValueError):
    pass


def load_space(data):
    """Returns (space, position map): JSON list position -> internal basis index.

    The internal enumeration sorts degrees ascending, so files listing basis
    elements in another order still address coefficients by list position.
    """
    try:
        basis = data["basis"]
    except KeyError as exc:
        raise StructureError("missing 'basis'") from exc
    comp = {}
    for entry in basis:
        comp.setdefault(int(entry.get("degree", 0)), []).append(entry["name"])
    space = GradedVectorSpace(comp)
    posmap = [space.index(entry["name"]) for entry in basis]
    return space, posmap


def load_vector(space, posmap, coeffs):
    if len(coeffs) != space.dim:
        raise StructureError(f"vector length {len(coeffs)} != dim {space.dim}")
    v = [Fraction(0)] * space.dim
    for p, x in enumerate(coeffs):
        v[posmap[p]] = rat(x)
    return tuple(v)


def load_product(space, posmap, rows) -> MultilinearMap:
    coeffs = {}
    for i, j, vec in rows:
        v = load_vector(space, posmap, vec)
        for k, c in enumerate(v):
            if c:
                coeffs[(k, (posmap[int(i)], posmap[int(j)]))] = c
    return MultilinearMap((space, space), space, coeffs, degree=0)


def load_operator(space, posmap, matrix, degree=0) -> MultilinearMap:
    coeffs = {}
    if len(matrix) != space.dim:
        raise StructureError("operator matrix needs one row per basis element")
    for i, row in enumerate(matrix):
        v = load_vector(space, posmap, row)
        for k, c in enumerate(v):
            if c:
                coeffs[(k, (posmap[i],))] = c
    return MultilinearMap((space,), space, coeffs, degree=degree)


def load_algebra_data(data):
    """Parse the full record; returns a plain dict of typed pieces."""
    space, posmap = load_space(data)
    out = {
        "space": space,
        "posmap": posmap,
        "product": load_product(space, posmap, data.get("product", [])),
        "unit": load_vector(space, posmap, data["unit"]) if "unit" in data else None,
        "trace": load_vector(space, posmap, data["trace"]) if "trace" in data else None,
        "differential": None,
        "operators": {},
    }
    if "differential" in data:
        out["differential"] = load_operator(space, posmap, data["differential"], degree=1)
    for name, spec in data.get("operators", {}).items():
        out["operators"][name] = load_operator(space, posmap, spec["matrix"],
                                               degree=int(spec.get("degree", 0)))
    return out


def dump_vector(vec):
    from .exactq import rat_str
    return [rat_str(Fraction(x)) for x in vec]
