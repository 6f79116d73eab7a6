"""Fat (ribbon) graphs: half-edge structures with cyclic vertex orderings.

A fat graph is stored as a set of half-edge labels, a fixed-point-free
involution pairing them into edges, and a partition of the half-edges into
cyclically ordered vertex lists (counterclockwise in the plane, matching the
usual figures).  An oriented edge is encoded by its source half-edge.

Boundary cycles are the orbits of the successor permutation

    successor(h) = cyclic-next at the target vertex of the reversed half-edge,

i.e. sigma . iota, where sigma is the vertex rotation and iota the involution.
Following an oriented edge to its target vertex and turning to the next
outgoing edge in the cyclic order is exactly this permutation.

The module also validates Sullivan chord diagrams (p disjoint circles plus
ghost trees attached along them) and reduces them by collapsing ghost edges,
which preserves the genus and the number of boundary components.
"""

from __future__ import annotations

from fractions import Fraction

from .exactq import rat, rat_str


class FatGraphError(ValueError):
    """Malformed half-edge structure."""


class ChordDiagramError(FatGraphError):
    """Input fails the chord-diagram conditions; .reasons lists each failure."""

    def __init__(self, reasons):
        self.reasons = list(reasons)
        super().__init__("; ".join(self.reasons))


class FatGraph:
    """Immutable half-edge graph with cyclic orders at the vertices."""

    __slots__ = ("half_edges", "involution", "vertices", "edge_labels",
                 "lengths", "markings", "_vertex_of", "_next")

    def __init__(self, involution, vertices, edge_labels=None, lengths=None,
                 markings=None, strict=False):
        vertices = tuple(tuple(v) for v in vertices)
        halves = [h for v in vertices for h in v]
        if len(set(halves)) != len(halves):
            raise FatGraphError("vertex lists repeat a half-edge")
        self.half_edges = frozenset(halves)
        inv = dict(involution)
        if set(inv) != self.half_edges or set(inv.values()) != self.half_edges:
            raise FatGraphError("involution domain must equal the half-edge set")
        for h, k in inv.items():
            if h == k:
                raise FatGraphError(f"involution fixes {h!r}")
            if inv[k] != h:
                raise FatGraphError(f"involution not an involution at {h!r}")
        self.involution = inv
        self.vertices = vertices
        if strict:
            bad = [v for v in vertices if len(v) < 3]
            if bad:
                raise FatGraphError(
                    f"strict mode requires every vertex at least trivalent, got valences "
                    f"{sorted(len(v) for v in bad)}")
        if any(len(v) < 1 for v in vertices):
            raise FatGraphError("empty vertex")

        labels = dict(edge_labels or {})
        for name, pair in labels.items():
            pos, neg = pair
            if inv.get(pos) != neg:
                raise FatGraphError(f"edge label {name!r} does not name an involution pair")
        if labels:
            covered = {h for pair in labels.values() for h in pair}
            if covered != self.half_edges:
                raise FatGraphError("edge labels must cover every edge or be omitted")
        self.edge_labels = {name: (pair[0], pair[1]) for name, pair in labels.items()}
        self.lengths = None
        if lengths is not None:
            self.lengths = {name: rat(x) for name, x in lengths.items()}
            for name, x in self.lengths.items():
                if name not in self.edge_labels:
                    raise FatGraphError(f"length for unknown edge {name!r}")
                if x <= 0:
                    raise FatGraphError(f"edge length for {name!r} must be positive")
        self.markings = tuple(markings) if markings else None
        if self.markings and any(h not in self.half_edges for h in self.markings):
            raise FatGraphError("marking references unknown half-edge")

        self._vertex_of = {h: i for i, v in enumerate(vertices) for h in v}
        nxt = {}
        for v in vertices:
            for i, h in enumerate(v):
                nxt[h] = v[(i + 1) % len(v)]
        self._next = nxt

    # -- basic counts ------------------------------------------------------

    def edges(self):
        """Edges as sorted 2-tuples of half-edges."""
        seen = set()
        out = []
        for h in sorted(self.half_edges):
            k = self.involution[h]
            if (k, h) not in seen:
                seen.add((h, k))
                out.append((h, k))
        return out

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.half_edges) // 2

    def vertex_of(self, h) -> int:
        return self._vertex_of[h]

    def cyclic_next(self, h):
        return self._next[h]

    def successor(self, h):
        """Boundary successor of the oriented edge with source half-edge h."""
        return self._next[self.involution[h]]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for h in self.vertices[v]:
                w = self._vertex_of[self.involution[h]]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    # -- naming ------------------------------------------------------------

    def oriented_name(self, h) -> str:
        """Edge label for the oriented edge from h: "A", or "~A" for the reversal."""
        for name, (pos, neg) in self.edge_labels.items():
            if h == pos:
                return name
            if h == neg:
                return "~" + name
        return str(h)

    def relabel(self, bijection) -> "FatGraph":
        """Rename half-edges by a bijection; commutes with every operation."""
        b = dict(bijection)
        if set(b) != self.half_edges or len(set(b.values())) != len(b):
            raise FatGraphError("relabel requires a bijection on the half-edge set")
        return FatGraph(
            {b[h]: b[k] for h, k in self.involution.items()},
            [[b[h] for h in v] for v in self.vertices],
            {name: (b[p], b[n]) for name, (p, n) in self.edge_labels.items()} or None,
            self.lengths,
            [b[h] for h in self.markings] if self.markings else None)

    def __eq__(self, other):
        return (isinstance(other, FatGraph)
                and self.involution == other.involution
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"FatGraph(V={self.n_vertices}, E={self.n_edges})"

    # -- serialization -----------------------------------------------------

    def to_json(self):
        data = {
            "half_edges": sorted(self.half_edges),
            "involution": sorted([sorted(e) for e in self.edges()]),
            "vertices": [list(v) for v in self.vertices],
        }
        if self.edge_labels:
            data["edge_labels"] = {n: list(p) for n, p in sorted(self.edge_labels.items())}
        if self.lengths:
            data["lengths"] = {n: rat_str(x) for n, x in sorted(self.lengths.items())}
        if self.markings:
            data["markings"] = list(self.markings)
        return data

    @classmethod
    def from_json(cls, data, strict=False) -> "FatGraph":
        try:
            inv = {}
            for pair in data["involution"]:
                h, k = pair
                inv[h] = k
                inv[k] = h
            declared = set(data.get("half_edges", inv))
            if declared != set(inv):
                raise FatGraphError("half_edges and involution disagree")
            return cls(inv, data["vertices"],
                       {n: tuple(p) for n, p in data.get("edge_labels", {}).items()} or None,
                       data.get("lengths"), data.get("markings"), strict=strict)
        except KeyError as exc:
            raise FatGraphError(f"missing field {exc}") from exc


class BoundaryPartition:
    """Orbits of the boundary successor permutation, canonically rotated."""

    __slots__ = ("cycles",)

    def __init__(self, cycles):
        self.cycles = tuple(canonical_cycle(c) for c in cycles)

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __eq__(self, other):
        return isinstance(other, BoundaryPartition) and set(self.cycles) == set(other.cycles)

    def names(self, graph: FatGraph):
        return [tuple(graph.oriented_name(h) for h in c) for c in self.cycles]

    def __repr__(self):
        return f"BoundaryPartition({len(self.cycles)} cycles)"


def canonical_cycle(cycle):
    """Rotate a cyclic sequence to start at its minimal element."""
    cycle = tuple(cycle)
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def boundary_cycles(g: FatGraph) -> BoundaryPartition:
    """Partition the oriented edges into boundary cycles.

    Start at an oriented edge, walk to its target vertex, continue on the next
    outgoing edge in the cyclic order there; repeat until the orbit closes.
    """
    seen = set()
    cycles = []
    for h in sorted(g.half_edges):
        if h in seen:
            continue
        cyc = [h]
        seen.add(h)
        k = g.successor(h)
        while k != h:
            cyc.append(k)
            seen.add(k)
            k = g.successor(k)
        cycles.append(tuple(cyc))
    cycles.sort(key=lambda c: (min(c),))
    return BoundaryPartition(cycles)


def euler_characteristic(g: FatGraph) -> int:
    """V - E; also the Euler characteristic of the thickened surface."""
    return g.n_vertices - g.n_edges


def genus(g: FatGraph):
    """(genus, boundary components) of the thickened surface, from chi = 2 - 2g - n."""
    if not g.is_connected():
        raise FatGraphError("genus requires a connected graph")
    n = len(boundary_cycles(g))
    chi = euler_characteristic(g)
    twice = 2 - n - chi
    if twice < 0 or twice % 2:
        raise FatGraphError(
            f"no nonnegative integer genus solves {chi} = 2 - 2g - {n}; corrupted input")
    return twice // 2, n


class ChordDiagram:
    """A validated Sullivan chord diagram of type (g; p, q)."""

    __slots__ = ("graph", "incoming", "outgoing", "circular_edges", "ghost_edges",
                 "boundary", "gtype")

    def __init__(self, graph, incoming, outgoing, circular_edges, ghost_edges,
                 boundary, gtype):
        self.graph = graph
        self.incoming = tuple(incoming)
        self.outgoing = tuple(outgoing)
        self.circular_edges = frozenset(circular_edges)
        self.ghost_edges = frozenset(ghost_edges)
        self.boundary = boundary
        self.gtype = gtype

    def __repr__(self):
        g, p, q = self.gtype
        return f"ChordDiagram(type=({g}; {p}, {q}))"


def _edge_key(g: FatGraph, h):
    k = g.involution[h]
    return (h, k) if h <= k else (k, h)


def validate_chord_diagram(g: FatGraph, incoming) -> ChordDiagram:
    """Check the chord-diagram conditions and classify edges circular/ghost.

    incoming lists indices into boundary_cycles(g).  Raises ChordDiagramError
    carrying every violated condition.
    """
    if not g.is_connected():
        raise ChordDiagramError(["graph is not connected"])
    bp = boundary_cycles(g)
    incoming = list(incoming)
    reasons = []
    if len(set(incoming)) != len(incoming):
        raise ChordDiagramError(["repeated incoming cycle index"])
    if any(not (0 <= i < len(bp.cycles)) for i in incoming):
        raise ChordDiagramError(
            [f"incoming index out of range 0..{len(bp.cycles) - 1}"])

    # Circles may share vertices (a ghost component can be a single point,
    # as in the figure-8 diagram) but each must be embedded and no edge may
    # belong to two circles.
    circle_edges = set()
    circle_vertices = set()
    for i in incoming:
        cyc = bp.cycles[i]
        verts = [g.vertex_of(h) for h in cyc]
        if len(set(verts)) != len(verts):
            reasons.append(f"incoming cycle {i} is not a simple embedded circle")
            continue
        edges_here = {_edge_key(g, h) for h in cyc}
        if len(edges_here) != len(cyc):
            reasons.append(f"incoming cycle {i} traverses an edge twice")
            continue
        if circle_edges & edges_here:
            reasons.append(f"incoming cycle {i} intersects another circle in an edge")
            continue
        circle_edges |= edges_here
        circle_vertices |= set(verts)

    ghost_edges = {e for e in g.edges() if e not in circle_edges}

    # ghosts must form a forest
    adj = {}
    for (h, k) in ghost_edges:
        u, v = g.vertex_of(h), g.vertex_of(k)
        adj.setdefault(u, []).append((v, (h, k)))
        adj.setdefault(v, []).append((u, (h, k)))
    seen_v = set()
    for start in adj:
        if start in seen_v:
            continue
        stack = [(start, None)]
        seen_v.add(start)
        while stack:
            v, via = stack.pop()
            for w, e in adj[v]:
                if e == via:
                    via = None  # use each edge once as the back-step
                    continue
                if w in seen_v:
                    reasons.append("ghost edges contain a cycle")
                    stack = []
                    break
                seen_v.add(w)
                stack.append((w, e))
        if reasons and reasons[-1] == "ghost edges contain a cycle":
            break

    # ghost-tree endpoints must lie on the circles
    ghost_valence = {}
    for (h, k) in ghost_edges:
        for x in (h, k):
            ghost_valence[g.vertex_of(x)] = ghost_valence.get(g.vertex_of(x), 0) + 1
    for v, val in ghost_valence.items():
        if val == 1 and v not in circle_vertices:
            reasons.append("a ghost tree endpoint does not lie on a circle")
            break

    outgoing = [i for i in range(len(bp.cycles)) if i not in incoming]
    if not outgoing:
        reasons.append("no outgoing boundary cycle remains (q = 0)")

    if reasons:
        raise ChordDiagramError(sorted(set(reasons)))

    gg, n = genus(g)
    p, q = len(incoming), len(outgoing)
    assert p + q == n
    return ChordDiagram(g, incoming, outgoing, circle_edges, ghost_edges, bp,
                        (gg, p, q))


def _contract_edge(vertices, h, k):
    """Contract the non-loop edge {h, k}: splice the two cyclic orders."""
    iu = next(i for i, v in enumerate(vertices) if h in v)
    iv = next(i for i, v in enumerate(vertices) if k in v)
    if iu == iv:
        raise FatGraphError("cannot contract a loop")
    u, v = list(vertices[iu]), list(vertices[iv])
    pu, pv = u.index(h), v.index(k)
    # rotate so the removed halves sit first, drop them, then concatenate
    merged = tuple(u[pu + 1:] + u[:pu] + v[pv + 1:] + v[:pv])
    out = [w for i, w in enumerate(vertices) if i not in (iu, iv)]
    if merged:
        out.append(merged)
    return out


def reduce_chord_diagram(c: ChordDiagram) -> FatGraph:
    """Collapse every ghost edge; each ghost component becomes one vertex.

    The result represents a surface of the same topological type: genus and
    boundary count are preserved, and an oriented edge lies on an incoming
    cycle iff its reversal lies on an outgoing one (checked).
    """
    g = c.graph
    vertices = [tuple(v) for v in g.vertices]
    for (h, k) in sorted(c.ghost_edges):
        vertices = _contract_edge(vertices, h, k)
    keep = {h for e in c.circular_edges for h in e}
    labels = {name: pair for name, pair in g.edge_labels.items()
              if _edge_key(g, pair[0]) in c.circular_edges} or None
    reduced = FatGraph({h: g.involution[h] for h in keep}, vertices, labels)

    if (genus(reduced) != (c.gtype[0], c.gtype[1] + c.gtype[2])):
        raise FatGraphError("reduction changed the topological type")

    # reduced diagrams: incoming orientation iff reversed outgoing orientation
    bp = boundary_cycles(reduced)
    old_incoming = {h for i in c.incoming for h in c.boundary.cycles[i]}
    new_incoming_cycles = [cyc for cyc in bp.cycles if set(cyc) & old_incoming]
    new_in = {h for cyc in new_incoming_cycles for h in cyc}
    if new_in != old_incoming:
        raise FatGraphError("incoming cycles did not survive the reduction verbatim")
    for h in reduced.half_edges:
        if (h in new_in) == (reduced.involution[h] in new_in):
            raise FatGraphError(
                "reduced diagram violates: E incoming iff reversed(E) outgoing")
    return reduced
