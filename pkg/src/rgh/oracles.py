"""Independent brute-force paths used to cross-check the fast engine.

Nothing here touches vertex splitting or the enumeration closure.
"""
from __future__ import annotations

import time
from collections import Counter
from typing import Iterator

from .enumeration import BudgetExceeded, Limits, Signature, as_signature
from .graph import (
    RibbonGraph,
    is_excluded,
    tails_cyclically_ordered,
    violations,
)

# -- planar trees -----------------------------------------------------------------


def planar_trees(r: int) -> list:
    """All planar trees with leaves 1..r in fixed cyclic order, internal vertices >= trivalent.

    Trees are rooted at leaf r; a tree is the nested tuple of the root's
    subtree, where a leaf is its label and an internal vertex is the tuple
    of its children in planar order.
    """
    if r < 3:
        raise ValueError("need r >= 3")
    memo: dict[tuple[int, int], list] = {}

    def over(a: int, b: int) -> list:
        # subtrees whose leaves are exactly a..b, left to right
        if (a, b) in memo:
            return memo[a, b]
        out = [a] if a == b else []
        if a < b:
            for kids in blocks(a, b):
                out.append(tuple(kids))
        memo[a, b] = out
        return out

    def blocks(a: int, b: int) -> Iterator[list]:
        # children sequences: >= 2 consecutive intervals covering a..b
        def rec(start: int, acc: list):
            if start > b:
                if len(acc) >= 2:
                    yield list(acc)
                return
            for end in range(start, b + 1):
                if start == a and end == b:
                    continue
                for t in over(start, end):
                    acc.append(t)
                    yield from rec(end + 1, acc)
                    acc.pop()
        yield from rec(a, [])

    return [t for t in over(1, r - 1) if isinstance(t, tuple)]


def _internal_vertices(tree) -> int:
    if not isinstance(tree, tuple):
        return 0
    return 1 + sum(_internal_vertices(t) for t in tree)


def tree_counts(r: int) -> dict[int, int]:
    """Number of planar trees with r cyclically ordered leaves, by internal edge count."""
    counts = Counter(_internal_vertices(t) - 1 for t in planar_trees(r))
    return dict(sorted(counts.items()))


# -- automorphisms by propagation ----------------------------------------------------


def brute_automorphisms(graph: RibbonGraph) -> list[tuple[int, ...]]:
    """Every label-preserving automorphism, found by trying each image of half-edge 0."""
    n = len(graph.sigma)
    sigma, alpha = graph.sigma, graph.alpha
    out = []
    for y0 in range(n):
        phi = [-1] * n
        phi[0] = y0
        stack = [0]
        ok = True
        while stack and ok:
            x = stack.pop()
            for nxt, img in ((sigma[x], sigma[phi[x]]), (alpha[x], alpha[phi[x]])):
                if phi[nxt] < 0:
                    phi[nxt] = img
                    stack.append(nxt)
                elif phi[nxt] != img:
                    ok = False
                    break
        if not ok or -1 in phi or len(set(phi)) != n:
            continue
        if any(phi[t] != t for t in graph.tails):
            continue
        vo = graph.vertex_of
        if any(vo[phi[graph.vertices[v][0]]] != v for v in graph.marks):
            continue
        out.append(tuple(phi))
    return out


# -- naive enumeration ---------------------------------------------------------------


class _Budget:
    def __init__(self, limits: Limits | None):
        self.limits = limits or Limits()
        self.t0 = time.monotonic()
        self.count = 0

    def tick(self) -> None:
        self.count += 1
        lim = self.limits
        if lim.max_cells is not None and self.count > lim.max_cells:
            raise BudgetExceeded(f"naive enumeration exceeded {lim.max_cells} candidates", None)
        if lim.max_seconds is not None and self.count % 1024 == 0 and time.monotonic() - self.t0 > lim.max_seconds:
            raise BudgetExceeded(f"naive enumeration exceeded {lim.max_seconds} s", None)


def _matchings_with_tails(n: int, r: int) -> Iterator[tuple[list[int], list[int]]]:
    """Every involution on 0..n-1 with exactly r fixed points, each fixed point labelled."""
    for fixed in _subsets(n, r):
        rest = [x for x in range(n) if x not in fixed]
        for pairing in _pairings(rest):
            alpha = list(range(n))
            for a, b in pairing:
                alpha[a], alpha[b] = b, a
            for labels in _perms(list(fixed)):
                yield labels, alpha


def _subsets(n: int, k: int) -> Iterator[set]:
    if k == 0:
        yield set()
        return
    if n < k:
        return
    for s in _subsets(n - 1, k):
        yield s
    for s in _subsets(n - 1, k - 1):
        yield s | {n - 1}


def _pairings(items: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    a = items[0]
    for idx in range(1, len(items)):
        b = items[idx]
        for rest in _pairings(items[1:idx] + items[idx + 1:]):
            yield [(a, b)] + rest


def _perms(items: list[int]) -> Iterator[list[int]]:
    if len(items) <= 1:
        yield list(items)
        return
    for idx in range(len(items)):
        for rest in _perms(items[:idx] + items[idx + 1:]):
            yield [items[idx]] + rest


def _valence_shapes(n_marked: int, n_plain: int, total: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(marked valences in mark order, unmarked valences non-increasing)."""
    def marked(k, left):
        if k == 0:
            yield (), left
            return
        for a in range(1, left + 1):
            for rest, rem in marked(k - 1, left - a):
                yield (a,) + rest, rem

    def plain(k, left, cap):
        if k == 0:
            if left == 0:
                yield ()
            return
        for a in range(min(cap, left - 3 * (k - 1)), 2, -1):
            for rest in plain(k - 1, left - a, a):
                yield (a,) + rest

    for mv, left in marked(n_marked, total):
        for pv in plain(n_plain, left, left):
            yield mv, pv


def _keep(g: RibbonGraph, sig: tuple, tails: str) -> bool:
    if violations(g) or g.signature != sig:
        return False
    return tails == "free" or tails_cyclically_ordered(g)


def _brute_force(sig: Signature, tails: str, budget: _Budget) -> dict[tuple[int, ...], RibbonGraph]:
    """All labelled structures with vertices laid out in consecutive blocks."""
    found = {}
    target = sig.astuple()
    chi = 2 - 2 * sig.g - sig.h
    E = max(sig.s, 1) - chi
    while sig.dim - E >= 0:
        nv = E + chi
        H = 2 * E + sig.r
        for mv, pv in _valence_shapes(sig.s, nv - sig.s, H):
            shape = mv + pv
            sigma = []
            starts = []
            for n in shape:
                b = len(sigma)
                starts.append(b)
                sigma += list(range(b + 1, b + n)) + [b]
            for labels, alpha in _matchings_with_tails(H, sig.r):
                budget.tick()
                g = RibbonGraph.from_parts(sigma, alpha, labels, starts[:sig.s])
                if _keep(g, target, tails):
                    canon = g.canonical_form()
                    found.setdefault(canon.canonical_code().code, canon)
        E += 1
    return found


def _insert_tail(g: RibbonGraph) -> Iterator[RibbonGraph]:
    """Every way of attaching a new tail labelled r + 1."""
    H = len(g.sigma)
    t = H
    mark_germs = [g.vertices[v][0] for v in g.marks]
    # into a corner of an existing vertex
    for x in range(H):
        sigma = list(g.sigma) + [g.sigma[x]]
        sigma[x] = t
        alpha = list(g.alpha) + [t]
        yield RibbonGraph.from_parts(sigma, alpha, list(g.tails) + [t], mark_germs)
    # on a new trivalent vertex subdividing an edge or a tail
    for a in range(H):
        b = g.alpha[a]
        if a > b:
            continue
        p, q = H + 1, H + 2
        for cyc in ((p, q, t), (p, t, q)):
            sigma = list(g.sigma) + [0, 0, 0]
            for u, w in zip(cyc, cyc[1:] + cyc[:1]):
                sigma[u] = w
            alpha = list(g.alpha) + [t, 0, 0]
            tails = list(g.tails) + [t]
            if a == b:  # a tail: a becomes internal, q carries its label
                alpha[a], alpha[p] = p, a
                alpha[q] = q
                tails[g.tail_label[a] - 1] = q
            else:
                alpha[a], alpha[p] = p, a
                alpha[b], alpha[q] = q, b
            yield RibbonGraph.from_parts(sigma, alpha, tails, mark_germs)


def naive_enumerate(sig, limits: Limits | None = None, tails: str = "cyclic",
                    grow_tails: bool = True) -> set[tuple[int, ...]]:
    """Canonical codes of every class, by a route disjoint from the splitting closure.

    The smallest stable number of tails is brute-forced over all labelled
    half-edge structures; larger r follow by attaching tail r + 1 in every
    possible way to every class with r tails (each graph arises this way by
    forgetting its last tail and smoothing a resulting bivalent vertex).
    With ``grow_tails=False`` the brute force runs at the full r.
    """
    sig = as_signature(sig)
    budget = _Budget(limits)
    r0 = sig.r
    while grow_tails and r0 > 0 and not is_excluded(sig.g, sig.h, r0 - 1, sig.s):
        r0 -= 1
    level = _brute_force(Signature(sig.g, sig.h, r0, sig.s), tails, budget)
    for r in range(r0 + 1, sig.r + 1):
        target = (sig.g, sig.h, r, sig.s)
        nxt = {}
        for code in sorted(level):
            for cand in _insert_tail(level[code]):
                budget.tick()
                if _keep(cand, target, tails):
                    canon = cand.canonical_form()
                    nxt.setdefault(canon.canonical_code().code, canon)
        level = nxt
    return set(level)
