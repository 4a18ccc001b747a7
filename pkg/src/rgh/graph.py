"""Two-coloured ribbon graphs encoded on half-edges.

A graph is a pair of permutations on half-edges ``0..H-1``: ``sigma`` rotates
the germs around each vertex, ``alpha`` pairs the two ends of an internal
edge and fixes tails.  Tail ``j`` (label ``j + 1``) is the half-edge
``tails[j]``; interior mark ``m`` (label ``m + 1``) sits on vertex
``marks[m]``, where vertices are indexed by the normalized cycle listing of
``sigma`` (each cycle rotated to start at its minimum, cycles sorted).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

NON_PERMUTATION = "NON_PERMUTATION"
NON_INVOLUTION = "NON_INVOLUTION"
TAIL_MISMATCH = "TAIL_MISMATCH"
MARK_MISMATCH = "MARK_MISMATCH"
VALENCE_V0 = "VALENCE_V0"
VALENCE_V1 = "VALENCE_V1"
DISCONNECTED = "DISCONNECTED"
BAD_SIGNATURE = "BAD_SIGNATURE"


class GraphValidationError(ValueError):
    """Raised with the complete list of violated invariants."""

    def __init__(self, violations: Sequence[str], details: Sequence[str] = ()):
        self.violations = list(violations)
        self.details = list(details)
        msg = ", ".join(self.violations)
        if self.details:
            msg += " (" + "; ".join(self.details) + ")"
        super().__init__(msg)


def is_excluded(g: int, h: int, r: int, s: int) -> bool:
    """True for the signatures whose moduli space is empty."""
    if g == 0 and h == 1 and r + 2 * s < 3:
        return True
    return g == 0 and h == 2 and r == 0 and s == 0


def cycles_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of ``perm``, each starting at its minimum, sorted by minimum."""
    seen = [False] * len(perm)
    out = []
    for x in range(len(perm)):
        if seen[x]:
            continue
        cyc = []
        y = x
        while not seen[y]:
            seen[y] = True
            cyc.append(y)
            y = perm[y]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class RibbonGraph:
    sigma: tuple[int, ...]
    alpha: tuple[int, ...]
    tails: tuple[int, ...] = ()
    marks: tuple[int, ...] = ()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_cycles(cls, sigma_cycles: Iterable[Sequence[int]],
                    alpha_pairs: Iterable[Sequence[int]] = (),
                    tails: Sequence[int] = (),
                    marks: Sequence[int] = ()) -> "RibbonGraph":
        """Build from cycle notation; ``marks`` are vertex indices.

        Raises GraphValidationError on structurally malformed input.
        """
        sigma_cycles = [list(c) for c in sigma_cycles]
        flat = [x for c in sigma_cycles for x in c]
        n = len(flat)
        if any(not isinstance(x, int) for x in flat) or sorted(flat) != list(range(n)):
            raise GraphValidationError([NON_PERMUTATION],
                                       ["sigma cycles must partition 0..H-1"])
        sigma = [0] * n
        for c in sigma_cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                sigma[a] = b
        alpha = list(range(n))
        used = set()
        for pair in alpha_pairs:
            pair = list(pair)
            if (len(pair) != 2 or pair[0] == pair[1]
                    or any(not isinstance(x, int) or not 0 <= x < n or x in used
                           for x in pair)):
                raise GraphValidationError([NON_INVOLUTION],
                                           [f"bad alpha pair {pair!r}"])
            a, b = pair
            used.update(pair)
            alpha[a], alpha[b] = b, a
        return cls(tuple(sigma), tuple(alpha), tuple(tails), tuple(marks))

    @classmethod
    def from_parts(cls, sigma: Sequence[int], alpha: Sequence[int],
                   tails: Sequence[int], mark_germs: Sequence[int]) -> "RibbonGraph":
        """Build from permutation arrays, locating marks by any germ of the vertex."""
        vertex_of = [0] * len(sigma)
        for v, cyc in enumerate(cycles_of(sigma)):
            for x in cyc:
                vertex_of[x] = v
        return cls(tuple(sigma), tuple(alpha), tuple(tails),
                   tuple(vertex_of[x] for x in mark_germs))

    @classmethod
    def from_json(cls, data: dict | str) -> "RibbonGraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_cycles(data.get("sigma", []), data.get("alpha", []),
                               data.get("tails", []), data.get("marks", []))

    def to_json(self) -> dict:
        pairs = sorted((x, y) for x, y in enumerate(self.alpha) if x < y)
        return {"sigma": [list(c) for c in self.vertices],
                "alpha": [list(p) for p in pairs],
                "tails": list(self.tails),
                "marks": list(self.marks)}

    # -- derived data ------------------------------------------------------

    @property
    def n_half_edges(self) -> int:
        return len(self.sigma)

    @property
    def r(self) -> int:
        return len(self.tails)

    @property
    def s(self) -> int:
        return len(self.marks)

    @cached_property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(cycles_of(self.sigma))

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        out = [0] * len(self.sigma)
        for v, cyc in enumerate(self.vertices):
            for x in cyc:
                out[x] = v
        return tuple(out)

    @cached_property
    def tail_label(self) -> tuple[int, ...]:
        """Per half-edge: its tail label 1..r, or 0."""
        out = [0] * len(self.sigma)
        for j, x in enumerate(self.tails):
            out[x] = j + 1
        return tuple(out)

    @cached_property
    def mark_label(self) -> tuple[int, ...]:
        """Per vertex: its interior mark label 1..s, or 0."""
        out = [0] * len(self.vertices)
        for m, v in enumerate(self.marks):
            out[v] = m + 1
        return tuple(out)

    def valence(self, v: int) -> int:
        return len(self.vertices[v])

    def is_marked(self, v: int) -> bool:
        return self.mark_label[v] != 0

    @property
    def n_edges(self) -> int:
        """Internal edge count."""
        return (len(self.sigma) - len(self.tails)) // 2

    def boundary_cycles(self) -> list[tuple[int, ...]]:
        """Cycles of x -> sigma(alpha(x)); one per boundary component."""
        sigma, alpha = self.sigma, self.alpha
        return cycles_of([sigma[alpha[x]] for x in range(len(sigma))])

    @cached_property
    def signature(self) -> tuple[int, int, int, int]:
        h = len(self.boundary_cycles())
        chi = len(self.vertices) - self.n_edges
        two_g = 2 - h - chi
        return (two_g // 2, h, self.r, self.s)

    def cell_dimension(self) -> int:
        """Sum of (valence - 3) over unmarked and (valence - 1) over marked vertices."""
        return sum(len(c) - (1 if self.mark_label[v] else 3)
                   for v, c in enumerate(self.vertices))

    def boundary_tail_sequences(self) -> list[tuple[int, ...]]:
        """Tail labels read along each boundary cycle."""
        lab = self.tail_label
        return [tuple(lab[x] for x in cyc if lab[x]) for cyc in self.boundary_cycles()]

    # -- canonical form ------------------------------------------------------

    @cached_property
    def _canon(self) -> tuple[tuple[int, ...], list[list[int]]]:
        return _canonicalize(self)

    def canonical_code(self) -> "CanonicalCode":
        code, orders = self._canon
        return CanonicalCode(code, len(orders))

    def canonical_form(self) -> "RibbonGraph":
        """The isomorphic graph relabelled by the canonical traversal."""
        return relabel(self, self._canon[1][0])

    def __repr__(self) -> str:
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.vertices)
        pairs = "".join(f"({x} {y})" for x, y in enumerate(self.alpha) if x < y)
        return f"RibbonGraph(sigma={cyc}, alpha={pairs or '()'}, tails={list(self.tails)}, marks={list(self.marks)})"


@dataclass(frozen=True, order=True)
class CanonicalCode:
    code: tuple[int, ...]
    aut_order: int


# -- validation ---------------------------------------------------------------

def violations(graph: RibbonGraph) -> list[str]:
    """Every violated invariant of ``graph`` (empty list when valid)."""
    n = len(graph.sigma)
    found: list[str] = []
    if len(graph.alpha) != n or sorted(graph.sigma) != list(range(n)):
        return [NON_PERMUTATION]
    if sorted(graph.alpha) != list(range(n)) or any(graph.alpha[graph.alpha[x]] != x for x in range(n)):
        return [NON_INVOLUTION]
    fixed = {x for x in range(n) if graph.alpha[x] == x}
    if (len(set(graph.tails)) != len(graph.tails) or set(graph.tails) != fixed):
        found.append(TAIL_MISMATCH)
    nv = len(graph.vertices)
    if (len(set(graph.marks)) != len(graph.marks)
            or any(not isinstance(v, int) or not 0 <= v < nv for v in graph.marks)):
        found.append(MARK_MISMATCH)
        marked = set()
    else:
        marked = set(graph.marks)
    if any(len(c) < 1 for v, c in enumerate(graph.vertices) if v in marked):
        found.append(VALENCE_V1)
    if any(len(c) < 3 for v, c in enumerate(graph.vertices) if v not in marked):
        found.append(VALENCE_V0)
    if n == 0 or not _is_connected(graph):
        found.append(DISCONNECTED)
    if TAIL_MISMATCH not in found and n and (n - len(graph.tails)) % 2 == 0:
        h = len(graph.boundary_cycles())
        chi = nv - (n - len(graph.tails)) // 2
        two_g = 2 - h - chi
        if two_g < 0 or two_g % 2 or is_excluded(two_g // 2, h, len(graph.tails), len(graph.marks)):
            found.append(BAD_SIGNATURE)
    return found


def validate(data: RibbonGraph | dict | str) -> RibbonGraph:
    """Return a valid RibbonGraph or raise GraphValidationError listing all violations."""
    graph = data if isinstance(data, RibbonGraph) else RibbonGraph.from_json(data)
    bad = violations(graph)
    if bad:
        raise GraphValidationError(bad)
    return graph


def _is_connected(graph: RibbonGraph) -> bool:
    n = len(graph.sigma)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        x = stack.pop()
        for y in (graph.sigma[x], graph.alpha[x]):
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    return count == n


def tails_cyclically_ordered(graph: RibbonGraph) -> bool:
    """True when the tail labels increase cyclically along every boundary cycle."""
    for seq in graph.boundary_tail_sequences():
        if len(seq) < 3:
            continue
        k = seq.index(min(seq))
        rot = seq[k:] + seq[:k]
        if any(a > b for a, b in zip(rot, rot[1:])):
            return False
    return True


# -- canonical labelling --------------------------------------------------------

def _traversal(graph: RibbonGraph, start: int) -> list[int] | None:
    n = len(graph.sigma)
    sigma, alpha = graph.sigma, graph.alpha
    label = [-1] * n
    label[start] = 0
    order = [start]
    i = 0
    while i < len(order):
        x = order[i]
        y = sigma[x]
        if label[y] < 0:
            label[y] = len(order)
            order.append(y)
        y = alpha[x]
        if label[y] < 0:
            label[y] = len(order)
            order.append(y)
        i += 1
    return order if len(order) == n else None


def _code_for(graph: RibbonGraph, order: list[int]) -> tuple[int, ...]:
    label = [0] * len(order)
    for k, x in enumerate(order):
        label[x] = k
    sigma, alpha = graph.sigma, graph.alpha
    tl, ml, vo = graph.tail_label, graph.mark_label, graph.vertex_of
    code = [len(order), graph.r, graph.s]
    for x in order:
        code += (label[sigma[x]], label[alpha[x]], tl[x], ml[vo[x]])
    return tuple(code)


def _start_candidates(graph: RibbonGraph) -> list[int]:
    # any isomorphism-invariant restriction is sound; labels pin it down fast
    if graph.tails:
        return [graph.tails[0]]
    if graph.marks:
        return list(graph.vertices[graph.marks[0]])
    bl = [0] * len(graph.sigma)
    for cyc in graph.boundary_cycles():
        for x in cyc:
            bl[x] = len(cyc)
    keys = [(len(graph.vertices[graph.vertex_of[x]]), bl[x]) for x in range(len(graph.sigma))]
    best = min(keys)
    return [x for x in range(len(graph.sigma)) if keys[x] == best]


def _canonicalize(graph: RibbonGraph) -> tuple[tuple[int, ...], list[list[int]]]:
    best = None
    best_orders: list[list[int]] = []
    for start in _start_candidates(graph):
        order = _traversal(graph, start)
        if order is None:
            raise GraphValidationError([DISCONNECTED])
        code = _code_for(graph, order)
        if best is None or code < best:
            best, best_orders = code, [order]
        elif code == best:
            best_orders.append(order)
    return best, best_orders


def canonical_code(graph: RibbonGraph) -> CanonicalCode:
    return graph.canonical_code()


def is_isomorphic(g1: RibbonGraph, g2: RibbonGraph) -> bool:
    return g1._canon[0] == g2._canon[0]


def isomorphisms(g1: RibbonGraph, g2: RibbonGraph) -> list[tuple[int, ...]]:
    """All label-preserving isomorphisms g1 -> g2 as half-edge maps."""
    code1, orders1 = g1._canon
    code2, orders2 = g2._canon
    if code1 != code2:
        return []
    base = orders1[0]
    out = []
    for order in orders2:
        phi = [0] * len(base)
        for x, y in zip(base, order):
            phi[x] = y
        out.append(tuple(phi))
    return out


def automorphisms(graph: RibbonGraph) -> list[tuple[int, ...]]:
    return isomorphisms(graph, graph)


def relabel(graph: RibbonGraph, order: Sequence[int]) -> RibbonGraph:
    """Rename half-edge ``order[k]`` to ``k``."""
    n = len(order)
    label = [0] * n
    for k, x in enumerate(order):
        label[x] = k
    sigma = [0] * n
    alpha = [0] * n
    for x in range(n):
        sigma[label[x]] = label[graph.sigma[x]]
        alpha[label[x]] = label[graph.alpha[x]]
    tails = [label[x] for x in graph.tails]
    mark_germs = [label[graph.vertices[v][0]] for v in graph.marks]
    return RibbonGraph.from_parts(sigma, alpha, tails, mark_germs)


# -- vertex splitting -------------------------------------------------------------

def vertex_splits(graph: RibbonGraph, v: int) -> Iterator[tuple[int, int]]:
    """Admissible (offset, arc length) pairs for splitting vertex ``v``.

    Unmarked vertex of valence n: arcs of 2..n-2 germs, each unordered
    chord once (lexicographically least (k, i) of its two descriptions).
    Marked vertex: the marked part keeps k = 0..n-2 germs, every offset.
    """
    n = len(graph.vertices[v])
    if graph.is_marked(v):
        for k in range(0, n - 1):
            for i in range(n):
                yield i, k
    else:
        for k in range(2, n - 1):
            for i in range(n):
                if (k, i) <= (n - k, (i + k) % n):
                    yield i, k


def split_vertex(graph: RibbonGraph, v: int, i: int, k: int) -> tuple[RibbonGraph, tuple[int, ...], tuple[int, ...]]:
    """Split ``v`` into v' = (c_i..c_{i+k-1}, e') and v'' = (e'', c_{i+k}..c_{i+n-1}).

    ``c`` is the normalized germ listing of ``v``; e' and e'' are the new
    half-edges ``H`` and ``H + 1``.  A mark on ``v`` stays on v'.  Returns
    the new graph and the germ sequences of v' and v''.
    """
    c = graph.vertices[v]
    n = len(c)
    H = len(graph.sigma)
    e1, e2 = H, H + 1
    first = tuple(c[(i + j) % n] for j in range(k)) + (e1,)
    second = (e2,) + tuple(c[(i + k + j) % n] for j in range(n - k))
    sigma = list(graph.sigma) + [0, 0]
    for cyc in (first, second):
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            sigma[a] = b
    alpha = list(graph.alpha) + [e2, e1]
    mark_germs = []
    for u in graph.marks:
        mark_germs.append(e1 if u == v else graph.vertices[u][0])
    return RibbonGraph.from_parts(sigma, alpha, graph.tails, mark_germs), first, second
