"""Isomorphism classes of ribbon graphs for a signature, stratified by dimension.

Every graph contracts, edge by edge, onto a graph with no contractible edge
left: a single unmarked vertex when s = 0, otherwise the s marked vertices
alone.  Those terminal graphs all have the minimal edge count, so the whole
set is the closure of the terminal graphs under vertex splitting, generated
one edge level at a time and deduplicated by canonical code.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path
from typing import Iterator, Sequence

from . import __version__
from .graph import (
    RibbonGraph,
    automorphisms,
    is_excluded,
    split_vertex,
    tails_cyclically_ordered,
    validate,
    vertex_splits,
)

TAIL_MODES = ("cyclic", "free")


class InvalidSignature(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised when enumeration hits its limits; ``partial`` is unusable for homology."""

    def __init__(self, message: str, partial: "CellBasis"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True, order=True)
class Signature:
    g: int
    h: int
    r: int
    s: int

    def __post_init__(self):
        if min(self.g, self.r, self.s) < 0 or self.h < 1:
            raise InvalidSignature(f"need g, r, s >= 0 and h >= 1, got {self.astuple()}")
        if is_excluded(*self.astuple()):
            raise InvalidSignature(f"excluded signature {self.astuple()}: the moduli space is empty")

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.g, self.h, self.r, self.s)

    @property
    def dim(self) -> int:
        return 6 * self.g - 6 + 3 * self.h + self.r + 2 * self.s

    @property
    def chi(self) -> int:
        return 2 - 2 * self.g - self.h

    @property
    def min_edges(self) -> int:
        return max(self.s, 1) - self.chi

    def __str__(self) -> str:
        return "(%d,%d,%d,%d)" % self.astuple()


@dataclass(frozen=True)
class Limits:
    max_cells: int | None = None
    max_seconds: float | None = None


@dataclass(frozen=True)
class Cell:
    code: tuple[int, ...]
    graph: RibbonGraph
    dim: int
    aut: int
    orientable: bool

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges


@dataclass
class CellBasis:
    signature: Signature
    strata: dict[int, list[Cell]]
    tails: str = "cyclic"
    complete: bool = True
    _index: dict = field(default=None, repr=False, compare=False)

    def cells(self, d: int) -> list[Cell]:
        return self.strata.get(d, [])

    def all_cells(self) -> Iterator[Cell]:
        for d in sorted(self.strata, reverse=True):
            yield from self.strata[d]

    def locate(self, code: tuple[int, ...]) -> tuple[int, int]:
        """(dimension, position) of the class with this code."""
        if self._index is None:
            self._index = {c.code: (d, k) for d, cells in self.strata.items()
                           for k, c in enumerate(cells)}
        return self._index[code]

    def codes(self) -> set[tuple[int, ...]]:
        return {c.code for c in self.all_cells()}

    def __len__(self) -> int:
        return sum(len(v) for v in self.strata.values())


def as_signature(sig) -> Signature:
    return sig if isinstance(sig, Signature) else Signature(*sig)


def counts_by_dimension(basis: CellBasis) -> dict[int, int]:
    return {d: len(basis.strata[d]) for d in sorted(basis.strata, reverse=True) if basis.strata[d]}


def default_threads() -> int:
    env = os.environ.get("RGH_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# -- terminal graphs ---------------------------------------------------------------

def _labelings(n: int, r: int, fixed_first_tail: bool) -> Iterator[tuple[list[int], list[int]]]:
    """All (tails, alpha) on half-edges 0..n-1 with exactly r labelled tails."""
    alpha = [-1] * n
    tails = [-1] * r

    def rec(p: int, used: int):
        while p < n and alpha[p] >= 0:
            p += 1
        if p == n:
            if used == r:
                yield list(tails), list(alpha)
            return
        free = sum(1 for q in range(p, n) if alpha[q] < 0)
        if (free - (r - used)) % 2 == 0 and used < r:
            for lab in range(r):
                if tails[lab] >= 0 or (fixed_first_tail and p == 0 and lab != 0):
                    continue
                tails[lab] = p
                alpha[p] = p
                yield from rec(p + 1, used + 1)
                alpha[p] = -1
                tails[lab] = -1
        if fixed_first_tail and p == 0:
            return
        if free - 1 >= r - used:
            for q in range(p + 1, n):
                if alpha[q] < 0:
                    alpha[p], alpha[q] = q, p
                    yield from rec(p + 1, used)
                    alpha[p] = alpha[q] = -1

    yield from rec(0, 0)


def _compositions(total: int, parts: int, least: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= least:
            yield (total,)
        return
    for first in range(least, total - least * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, least):
            yield (first,) + rest


def terminal_graphs(sig: Signature, tails: str = "cyclic") -> list[RibbonGraph]:
    """Canonical forms of the graphs with no contractible edge."""
    E = sig.min_edges
    H = 2 * E + sig.r
    found: dict[tuple[int, ...], RibbonGraph] = {}
    if sig.s == 0:
        shapes = [(H,)]
    else:
        shapes = list(_compositions(H, sig.s, 1))
    for shape in shapes:
        sigma = []
        start = 0
        for n in shape:
            sigma += list(range(start + 1, start + n)) + [start]
            start += n
        starts = [sum(shape[:m]) for m in range(len(shape))]
        mark_germs = starts if sig.s else []
        # one unmarked vertex: rotate tail 1 to germ 0
        pin = sig.s == 0 and sig.r > 0
        for tl, alpha in _labelings(H, sig.r, pin):
            g = RibbonGraph.from_parts(sigma, alpha, tl, mark_germs)
            if not _accept(g, sig, tails):
                continue
            canon = g.canonical_form()
            found.setdefault(canon.canonical_code().code, canon)
    return [found[c] for c in sorted(found)]


def _accept(g: RibbonGraph, sig: Signature, tails: str) -> bool:
    try:
        validate(g)
    except ValueError:
        return False
    if g.signature != sig.astuple():
        return False
    return tails == "free" or tails_cyclically_ordered(g)


# -- closure under splitting -----------------------------------------------------------

def _split_children(graph: RibbonGraph) -> list[tuple[tuple[int, ...], RibbonGraph]]:
    out = {}
    for v in range(len(graph.vertices)):
        for i, k in vertex_splits(graph, v):
            child = split_vertex(graph, v, i, k)[0]
            canon = child.canonical_form()
            out.setdefault(canon.canonical_code().code, canon)
    return list(out.items())


def enumerate_cells(sig, limits: Limits | None = None, tails: str = "cyclic",
                    threads: int | None = 1) -> CellBasis:
    """Complete, duplicate-free list of classes for ``sig``.

    ``tails="cyclic"`` keeps only graphs whose tail labels increase
    cyclically along each boundary cycle (one boundary arrangement per
    distribution of tails); ``tails="free"`` keeps every arrangement.
    """
    sig = as_signature(sig)
    if tails not in TAIL_MODES:
        raise ValueError(f"tails must be one of {TAIL_MODES}")
    limits = limits or Limits()
    t0 = time.monotonic()
    threads = default_threads() if threads is None else max(1, threads)

    levels: dict[int, dict[tuple[int, ...], RibbonGraph]] = {}
    frontier = {g.canonical_code().code: g for g in terminal_graphs(sig, tails)}
    E = sig.min_edges
    total = 0
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        while frontier:
            levels[E] = frontier
            total += len(frontier)
            _check_budget(sig, tails, levels, limits, total, t0)
            if sig.dim - E == 0:
                break
            parents = [frontier[c] for c in sorted(frontier)]
            if pool is not None and len(parents) > 64:
                batches = pool.map(_split_children, parents, chunksize=16)
            else:
                batches = map(_split_children, parents)
            nxt: dict[tuple[int, ...], RibbonGraph] = {}
            for batch in batches:
                for code, g in batch:
                    nxt.setdefault(code, g)
                if limits.max_seconds is not None and time.monotonic() - t0 > limits.max_seconds:
                    levels[E + 1] = nxt
                    _check_budget(sig, tails, levels, limits, total + len(nxt), t0)
            frontier = nxt
            E += 1
    finally:
        if pool is not None:
            pool.shutdown()
    return _freeze(sig, tails, levels, complete=True)


def _check_budget(sig, tails, levels, limits: Limits, total: int, t0: float) -> None:
    reason = None
    if limits.max_cells is not None and total > limits.max_cells:
        reason = f"more than {limits.max_cells} cells"
    elif limits.max_seconds is not None and time.monotonic() - t0 > limits.max_seconds:
        reason = f"more than {limits.max_seconds} s"
    if reason:
        partial = _freeze(sig, tails, levels, complete=False)
        raise BudgetExceeded(f"enumeration of {sig} stopped: {reason}", partial)


def _freeze(sig: Signature, tails: str, levels, complete: bool) -> CellBasis:
    strata: dict[int, list[Cell]] = {}
    for E, graphs in levels.items():
        d = sig.dim - E
        strata[d] = [make_cell(graphs[c], d) for c in sorted(graphs)]
    return CellBasis(sig, strata, tails, complete)


def make_cell(graph: RibbonGraph, d: int | None = None) -> Cell:
    from .complex import automorphism_sign  # complex depends on this module

    cc = graph.canonical_code()
    if cc.aut_order == 1:
        orientable = True
    else:
        orientable = all(automorphism_sign(graph, phi) == 1 for phi in automorphisms(graph))
    return Cell(cc.code, graph, graph.cell_dimension() if d is None else d, cc.aut_order, orientable)


# -- catalog persistence ------------------------------------------------------------------

def write_catalog(basis: CellBasis, path: str | Path) -> None:
    """JSON lines: a header, then one record per class in basis order."""
    lines = [json.dumps({"signature": list(basis.signature.astuple()), "tool": "rgh",
                         "version": __version__, "tails": basis.tails,
                         "cells": len(basis)}, sort_keys=True)]
    for cell in basis.all_cells():
        lines.append(json.dumps({"code": list(cell.code), "graph": cell.graph.to_json(),
                                 "dim": cell.dim, "aut": cell.aut,
                                 "orientable": cell.orientable}, sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_catalog(path: str | Path, recanonicalize: bool = True) -> CellBasis:
    """Load a catalog; graphs are revalidated and, by default, recanonicalized."""
    with open(path, encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        sig = Signature(*header["signature"])
        strata: dict[int, list[Cell]] = {}
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            g = validate(rec["graph"])
            if recanonicalize:
                cell = make_cell(g.canonical_form())
            else:
                cell = Cell(tuple(rec["code"]), g, rec["dim"], rec["aut"], rec["orientable"])
            strata.setdefault(cell.dim, []).append(cell)
    for d in strata:
        strata[d].sort(key=lambda c: c.code)
    return CellBasis(sig, strata, header.get("tails", "cyclic"))
