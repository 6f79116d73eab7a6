"""Combinatorial 1-dimensional cacti with exact rational parameters.

A cactus is a tree-like configuration of parameterized circles (lobes),
labeled 1..k, each with a positive rational circumference.  Intersection
points (nodes) record, per incident lobe, the parameter at which that lobe
passes through the point, together with a cyclic order on the incident
lobes.  A global marked point carries a lobe choice, which matters exactly
when the marked point sits at a node.  Tree-likeness means the dual graph on
lobes and nodes is a tree; this also forces two lobes to meet at most once.

The pinching map wraps one circle around the whole cactus: start at the
marked point along its chosen lobe in the increasing-parameter direction;
on reaching a node, continue on the next lobe in the node's cyclic order,
starting from that node's parameter on the new lobe; stop after covering the
total circumference.  The trace is the resulting arc list.

Operad composition glues a whole cactus into one lobe: the second cactus is
dilated so its total circumference matches the host lobe, the host lobe's
points are identified with the dilated pinching trace by arc length (lobe
parameter 0 lands on the guest's marked point), and every structural point
of the host that sat on that lobe (node incidences, possibly the marked
point) is transported through the identification.  A transported point that
lands on a guest node merges into it: the host node's remaining lobes are
spliced into the guest node's cyclic order right after the arrival lobe of
that trace pass.  Labels relabel by insertion.
"""

from __future__ import annotations

from fractions import Fraction

from .exactq import rat, rat_str


class CactusError(ValueError):
    pass


class Node:
    """One intersection point: parameters per incident lobe plus a cyclic order."""

    __slots__ = ("incidences", "cyclic_order")

    def __init__(self, incidences, cyclic_order):
        self.incidences = {int(l): rat(p) for l, p in dict(incidences).items()}
        self.cyclic_order = tuple(int(l) for l in cyclic_order)
        if len(self.incidences) < 2:
            raise CactusError("a node joins at least two lobes")
        if sorted(self.cyclic_order) != sorted(self.incidences):
            raise CactusError("cyclic order must list exactly the incident lobes")

    def next_lobe(self, lobe):
        i = self.cyclic_order.index(lobe)
        return self.cyclic_order[(i + 1) % len(self.cyclic_order)]

    def __repr__(self):
        return f"Node({self.incidences}, order={self.cyclic_order})"


class Cactus:
    __slots__ = ("lobes", "nodes", "marked")

    def __init__(self, lobes, nodes, marked):
        self.lobes = {int(l): rat(c) for l, c in dict(lobes).items()}
        self.nodes = tuple(n if isinstance(n, Node) else Node(*n) for n in nodes)
        ml, mp = marked
        self.marked = (int(ml), rat(mp))
        self._validate()

    def _validate(self):
        k = len(self.lobes)
        if sorted(self.lobes) != list(range(1, k + 1)):
            raise CactusError("lobe labels must be exactly 1..k")
        for l, c in self.lobes.items():
            if c <= 0:
                raise CactusError(f"lobe {l} needs positive circumference")
        seen_points = set()
        for n in self.nodes:
            for l, p in n.incidences.items():
                if l not in self.lobes:
                    raise CactusError(f"node references unknown lobe {l}")
                if not (0 <= p < self.lobes[l]):
                    raise CactusError(
                        f"parameter {p} out of range [0, {self.lobes[l]}) on lobe {l}")
                if (l, p) in seen_points:
                    raise CactusError(f"two nodes share the point (lobe {l}, {p})")
                seen_points.add((l, p))
        ml, mp = self.marked
        if ml not in self.lobes:
            raise CactusError("marked point on unknown lobe")
        if not (0 <= mp < self.lobes[ml]):
            raise CactusError("marked parameter out of range")

        # dual graph on lobes and nodes must be a tree
        edges = sum(len(n.incidences) for n in self.nodes)
        vertices = k + len(self.nodes)
        if edges != vertices - 1:
            raise CactusError("dual graph of lobes and nodes is not a tree")
        if k > 1 or self.nodes:
            adj = {("l", l): set() for l in self.lobes}
            for i, n in enumerate(self.nodes):
                adj[("n", i)] = set()
                for l in n.incidences:
                    adj[("n", i)].add(("l", l))
                    adj[("l", l)].add(("n", i))
            stack = [("l", 1)]
            seen = {("l", 1)}
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != vertices:
                raise CactusError("dual graph of lobes and nodes is not connected")

    @property
    def k(self) -> int:
        return len(self.lobes)

    def total_circumference(self) -> Fraction:
        return sum(self.lobes.values(), Fraction(0))

    def dilated(self, factor) -> "Cactus":
        factor = rat(factor)
        if factor <= 0:
            raise CactusError("dilation factor must be positive")
        return Cactus(
            {l: c * factor for l, c in self.lobes.items()},
            [Node({l: p * factor for l, p in n.incidences.items()}, n.cyclic_order)
             for n in self.nodes],
            (self.marked[0], self.marked[1] * factor))

    def relabeled(self, mapping) -> "Cactus":
        m = {int(a): int(b) for a, b in dict(mapping).items()}
        if sorted(m) != sorted(self.lobes) or sorted(m.values()) != sorted(self.lobes):
            raise CactusError("relabeling must be a bijection on the labels")
        return Cactus(
            {m[l]: c for l, c in self.lobes.items()},
            [Node({m[l]: p for l, p in n.incidences.items()},
                  [m[l] for l in n.cyclic_order]) for n in self.nodes],
            (m[self.marked[0]], self.marked[1]))

    def node_at(self, lobe, param):
        for n in self.nodes:
            if lobe in n.incidences and n.incidences[lobe] == param:
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, Cactus):
            return NotImplemented
        a, b = canonical_form(self), canonical_form(other)
        return (a.lobes == b.lobes and a.marked == b.marked
                and [(n.incidences, n.cyclic_order) for n in a.nodes]
                == [(n.incidences, n.cyclic_order) for n in b.nodes])

    def __repr__(self):
        return f"Cactus(k={self.k}, nodes={len(self.nodes)}, total={self.total_circumference()})"

    def to_json(self):
        return {
            "lobes": [{"label": l, "circumference": rat_str(c)}
                      for l, c in sorted(self.lobes.items())],
            "nodes": [{"incidences": [{"lobe": l, "param": rat_str(p)}
                                      for l, p in sorted(n.incidences.items())],
                       "cyclic_order": list(n.cyclic_order)}
                      for n in canonical_form(self).nodes],
            "marked": {"lobe": self.marked[0], "param": rat_str(self.marked[1])},
        }

    @classmethod
    def from_json(cls, data) -> "Cactus":
        try:
            lobes = {e["label"]: e["circumference"] for e in data["lobes"]}
            nodes = [Node({i["lobe"]: i["param"] for i in n["incidences"]},
                          n["cyclic_order"]) for n in data.get("nodes", [])]
            marked = (data["marked"]["lobe"], data["marked"]["param"])
        except KeyError as exc:
            raise CactusError(f"missing field {exc}") from exc
        return cls(lobes, nodes, marked)


def identity_cactus() -> Cactus:
    """A single lobe of circumference 1, marked at parameter 0."""
    return Cactus({1: 1}, [], (1, 0))


class PinchingTrace:
    """Ordered arcs (lobe, start parameter, length) covering the whole cactus."""

    __slots__ = ("arcs", "total")

    def __init__(self, arcs):
        self.arcs = tuple((int(l), rat(s), rat(ln)) for l, s, ln in arcs)
        if any(ln <= 0 for _, _, ln in self.arcs):
            raise CactusError("arc lengths must be positive")
        self.total = sum((ln for _, _, ln in self.arcs), Fraction(0))

    def lobe_sequence(self):
        return tuple(l for l, _, _ in self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def __eq__(self, other):
        return isinstance(other, PinchingTrace) and self.arcs == other.arcs

    def __repr__(self):
        body = ", ".join(f"({l}, {rat_str(s)}, {rat_str(ln)})" for l, s, ln in self.arcs)
        return f"PinchingTrace([{body}])"


def pinching_trace(c: Cactus) -> PinchingTrace:
    """Traverse the cactus from the marked point; coverage is asserted."""
    events = {l: [] for l in c.lobes}   # param -> node index
    for i, n in enumerate(c.nodes):
        for l, p in n.incidences.items():
            events[l].append((p, i))
    for l in events:
        events[l].sort()

    ml, mp = c.marked
    total = c.total_circumference()
    arcs = []
    lobe, t = ml, mp
    accumulated = Fraction(0)
    max_arcs = sum(len(v) for v in events.values()) + 2

    while True:
        circ = c.lobes[lobe]
        nxt = None
        for p, idx in events[lobe]:
            if p > t:
                nxt = (p, idx)
                break
        if nxt is None and events[lobe]:
            nxt = events[lobe][0]
        dist_node = ((nxt[0] - t) % circ or circ) if nxt is not None else None
        if lobe == ml:
            dist_mark = (mp - t) % circ or circ
            # the trace ends exactly at the marked point once everything is covered
            if accumulated + dist_mark == total and \
                    (dist_node is None or dist_mark <= dist_node):
                arcs.append((lobe, t, dist_mark))
                accumulated += dist_mark
                break
        if dist_node is None:
            raise CactusError("traversal lost; malformed cactus")
        arcs.append((lobe, t, dist_node))
        accumulated += dist_node
        if accumulated > total or len(arcs) > max_arcs:
            raise CactusError("traversal does not close up; malformed cactus")
        node = c.nodes[nxt[1]]
        lobe = node.next_lobe(lobe)
        t = node.incidences[lobe]

    trace = PinchingTrace(arcs)
    if trace.total != total:
        raise CactusError("trace does not cover the total circumference")
    covered = {l: Fraction(0) for l in c.lobes}
    for l, _, ln in trace.arcs:
        covered[l] += ln
    if covered != dict(c.lobes):
        raise CactusError("trace does not cover every lobe exactly once")
    return trace


def trace_window(trace: PinchingTrace, start, length):
    """Sub-arcs of the trace covering arc lengths [start, start + length).

    Splits at arc boundaries; start and start + length must lie in
    [0, total].  Used to express the trace-substitution identity.
    """
    start, length = rat(start), rat(length)
    if length <= 0 or start < 0 or start + length > trace.total:
        raise CactusError("window out of range")
    out = []
    acc = Fraction(0)
    for l, s, ln in trace.arcs:
        lo = max(acc, start)
        hi = min(acc + ln, start + length)
        if lo < hi:
            out.append((l, s + (lo - acc), hi - lo))
        acc += ln
    return out


def _locate(c2: Cactus, trace: PinchingTrace, s):
    """Point of the cactus at trace arc length s in [0, total).

    Returns ("interior", lobe, param) or ("node", node, arrival_arc_index).
    """
    s = rat(s)
    if not (0 <= s < trace.total):
        raise CactusError("locate out of range")
    if s == 0:
        node = c2.node_at(*c2.marked)
        if node is None:
            return ("interior", c2.marked[0], c2.marked[1])
        return ("node", node, len(trace.arcs) - 1)
    acc = Fraction(0)
    for idx, (l, st, ln) in enumerate(trace.arcs):
        if acc < s < acc + ln:
            return ("interior", l, (st + (s - acc)) % c2.lobes[l])
        if s == acc + ln:
            endpoint = (l, (st + ln) % c2.lobes[l])
            node = c2.node_at(*endpoint)
            if node is None:
                raise CactusError("arc boundary is not a node; malformed trace")
            return ("node", node, idx)
        acc += ln
    raise CactusError("unreachable")


def compose_i(c1: Cactus, i: int, c2: Cactus) -> Cactus:
    """Glue c2 into the i-th lobe of c1 along the pinching map of c2."""
    if i not in c1.lobes:
        raise CactusError(f"lobe index {i} out of range")
    k, l2 = c1.k, c2.k
    factor = c1.lobes[i] / c2.total_circumference()
    guest = c2.dilated(factor)
    trace = pinching_trace(guest)

    # labels: host j < i keep j; guest m -> i + m - 1; host j > i -> j + l2 - 1
    host_label = {j: (j if j < i else j + l2 - 1) for j in c1.lobes if j != i}
    guest_label = {m: i + m - 1 for m in guest.lobes}

    lobes = {host_label[j]: c for j, c in c1.lobes.items() if j != i}
    lobes.update({guest_label[m]: c for m, c in guest.lobes.items()})

    new_nodes = []
    # guest nodes may absorb host decorations; collect insertions per node
    guest_nodes = {id(n): Node(dict(n.incidences), n.cyclic_order) for n in guest.nodes}
    insertions = {id(n): [] for n in guest.nodes}  # (arrival lobe, [host lobes], incidences)

    for n in c1.nodes:
        if i not in n.incidences:
            new_nodes.append(Node(
                {host_label[l]: p for l, p in n.incidences.items()},
                [host_label[l] for l in n.cyclic_order]))
            continue
        t = n.incidences[i]
        rest_incidences = {host_label[l]: p for l, p in n.incidences.items() if l != i}
        at = n.cyclic_order.index(i)
        rest_order = [host_label[l]
                      for l in n.cyclic_order[at + 1:] + n.cyclic_order[:at]]
        where = _locate(guest, trace, t)
        if where[0] == "interior":
            _, lobe2, param2 = where
            inc = dict(rest_incidences)
            inc[guest_label[lobe2]] = param2
            order = [guest_label[lobe2]] + rest_order
            new_nodes.append(Node(inc, order))
        else:
            _, node, arr_idx = where
            arrival = guest_label[trace.arcs[arr_idx][0]]
            insertions[id(node)].append((arrival, rest_order, rest_incidences))

    for n in guest.nodes:
        base = guest_nodes[id(n)]
        inc = {guest_label[l]: p for l, p in base.incidences.items()}
        order = [guest_label[l] for l in base.cyclic_order]
        for arrival, extra_order, extra_inc in insertions[id(n)]:
            pos = order.index(arrival) + 1
            order[pos:pos] = extra_order
            inc.update(extra_inc)
        new_nodes.append(Node(inc, order))

    ml, mp = c1.marked
    if ml != i:
        marked = (host_label[ml], mp)
    else:
        where = _locate(guest, trace, mp)
        if where[0] == "interior":
            marked = (guest_label[where[1]], where[2])
        else:
            _, node, arr_idx = where
            arrival_lobe = trace.arcs[arr_idx][0]
            departure = node.next_lobe(arrival_lobe)
            marked = (guest_label[departure], node.incidences[departure])

    return Cactus(lobes, new_nodes, marked)


def canonical_form(c: Cactus) -> Cactus:
    """Deterministic normal form: two cacti are equal iff their forms match.

    Node incidences are kept as mappings (range-normalized at construction);
    cyclic orders are rotated to their lexicographically least rotation and
    nodes sorted by their sorted incidence lists.
    """
    nodes = []
    for n in c.nodes:
        order = _least_rotation(n.cyclic_order)
        nodes.append(Node(n.incidences, order))
    nodes.sort(key=lambda n: sorted(n.incidences.items()))
    return Cactus(dict(c.lobes), nodes, c.marked)


def _least_rotation(seq):
    seq = tuple(seq)
    best = seq
    for r in range(1, len(seq)):
        cand = seq[r:] + seq[:r]
        if cand < best:
            best = cand
    return best
