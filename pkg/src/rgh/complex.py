"""Orientations, vertex splittings and the boundary operator.

An orientation of a cell is an ordering of its slot list: vertex blocks in
some order, each block holding the germs of the vertex in some linear order
followed by gauge slots (three for an unmarked vertex, one for a marked
one).  A block has the parity of its cell factor, so the sign of the slot
permutation relating two slot lists is the ratio of the orientations.

Incidence of a splitting of vertex v at offset i with arc length k, read
against the reference slot list of the parent, is

    (-1) ** (P + i * (n - 1) + k) * sign(declared -> target reference)

where P counts the slots in front of v's block, n is the valence of v, and
the declared slot list of the child replaces v's block by the blocks of v'
and v''.  The local factor is the outward-normal sign of the collision face
in the configuration-space model of the cell; the P factor moves the normal
to the front.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .enumeration import CellBasis, default_threads
from .graph import RibbonGraph, automorphisms, isomorphisms, split_vertex, vertex_splits


class ModeError(ValueError):
    pass


class NotAutomorphism(ValueError):
    pass


def reference_blocks(graph: RibbonGraph) -> list[tuple[int, ...]]:
    """Reference slot list: vertices in index order, germs from the minimum."""
    return list(graph.vertices)


def _parity(perm: Sequence[int]) -> int:
    """0 for even permutations of 0..len-1, 1 for odd."""
    seen = [False] * len(perm)
    odd = 0
    for x in range(len(perm)):
        if seen[x]:
            continue
        length = 0
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        odd ^= (length - 1) & 1
    return odd


def slot_sign(blocks: Sequence[Sequence[int]], phi: Sequence[int], target: RibbonGraph) -> int:
    """Sign of the slot permutation carrying ``blocks`` (through ``phi``) onto the
    reference slot list of ``target``.  Gauge slots travel with their block."""
    vertex_of = target.vertex_of
    ref = target.vertices
    odd = 0
    order = []
    for block in blocks:
        img = [phi[x] for x in block]
        w = vertex_of[img[0]]
        rw = ref[w]
        if len(rw) != len(img):
            raise NotAutomorphism("block does not map onto a vertex")
        pos = {y: p for p, y in enumerate(rw)}
        try:
            odd ^= _parity([pos[y] for y in img])
        except KeyError:
            raise NotAutomorphism("block does not map onto a vertex") from None
        order.append(w)
    # odd-sized blocks are the even-valence vertices
    odd_blocks = [w for w in order if len(ref[w]) % 2 == 0]
    inv = 0
    for a in range(len(odd_blocks)):
        for b in range(a + 1, len(odd_blocks)):
            if odd_blocks[a] > odd_blocks[b]:
                inv += 1
    odd ^= inv & 1
    return -1 if odd else 1


def automorphism_sign(graph: RibbonGraph, phi: Sequence[int]) -> int:
    n = len(graph.sigma)
    if (sorted(phi) != list(range(n))
            or any(phi[graph.sigma[x]] != graph.sigma[phi[x]] or phi[graph.alpha[x]] != graph.alpha[phi[x]]
                   for x in range(n))
            or any(phi[t] != t for t in graph.tails)
            or any(graph.vertex_of[phi[graph.vertices[v][0]]] != v for v in graph.marks)):
        raise NotAutomorphism("map does not commute with sigma, alpha and the labels")
    return slot_sign(reference_blocks(graph), phi, graph)


def is_orientable(graph: RibbonGraph) -> bool:
    return all(automorphism_sign(graph, phi) == 1 for phi in automorphisms(graph))


@dataclass(frozen=True)
class Splitting:
    vertex: int
    offset: int
    arc: int
    graph: RibbonGraph
    blocks: tuple[tuple[int, ...], ...]  # declared slot list of ``graph``
    local_sign: int


def splittings(graph: RibbonGraph) -> list[Splitting]:
    blocks = reference_blocks(graph)
    out = []
    before = 0  # parity of slots in front of the current block
    for v, block in enumerate(blocks):
        n = len(block)
        for i, k in vertex_splits(graph, v):
            child, first, second = split_vertex(graph, v, i, k)
            declared = tuple(blocks[:v]) + (first, second) + tuple(blocks[v + 1:])
            sign = -1 if (before + i * (n - 1) + k) & 1 else 1
            out.append(Splitting(v, i, k, child, declared, sign))
        before ^= (n + 1) & 1
    return out


@dataclass
class BoundaryMatrix:
    """Sparse exact matrix of the differential from dimension d to d - 1."""
    d: int
    n_rows: int
    n_cols: int
    entries: dict[tuple[int, int], int]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def to_coo(self) -> str:
        lines = [f"%dims {self.d} {self.n_rows} {self.n_cols}"]
        for (i, j) in sorted(self.entries):
            lines.append(f"{i} {j} {self.entries[i, j]}")
        return "\n".join(lines) + "\n"


def compose(a: BoundaryMatrix, b: BoundaryMatrix) -> dict[tuple[int, int], int]:
    """Nonzero entries of a @ b."""
    by_row: dict[int, list[tuple[int, int]]] = {}
    for (i, k), v in a.entries.items():
        by_row.setdefault(k, []).append((i, v))
    out: dict[tuple[int, int], int] = {}
    for (k, j), w in b.entries.items():
        for i, v in by_row.get(k, ()):
            out[i, j] = out.get((i, j), 0) + v * w
    return {key: v for key, v in out.items() if v}


def resolve_mode(basis: CellBasis, mode: str) -> str:
    if mode == "auto":
        return "integer" if basis.signature.r > 0 else "rational"
    if mode == "integer" and basis.signature.r == 0:
        raise ModeError("MODE_ERROR: integer coefficients need r > 0 (orbi-cells otherwise)")
    if mode not in ("integer", "rational"):
        raise ModeError(f"unknown mode {mode!r}")
    return mode


def generators(basis: CellBasis, d: int, mode: str) -> list[int]:
    """Positions in stratum d that index chain-group generators."""
    cells = basis.cells(d)
    if mode == "integer":
        return list(range(len(cells)))
    return [k for k, c in enumerate(cells) if c.orientable]


def incidence_column(graph: RibbonGraph, locate) -> dict[tuple[int, ...], int]:
    """Boundary of one reference cell as {target code: coefficient}.

    ``locate(code)`` returns the stored representative (or None to skip).
    """
    col: dict[tuple[int, ...], int] = {}
    for sp in splittings(graph):
        code = sp.graph.canonical_code().code
        rep = locate(code)
        if rep is None:
            continue
        phi = isomorphisms(sp.graph, rep)[0]
        eps = sp.local_sign * slot_sign(sp.blocks, phi, rep)
        col[code] = col.get(code, 0) + eps
    return col


_WORKER_TARGETS: dict = {}


def _worker_init(targets):
    _WORKER_TARGETS.clear()
    _WORKER_TARGETS.update(targets)


def _worker_column(graph: RibbonGraph):
    return incidence_column(graph, _WORKER_TARGETS.get)


def boundary_matrix(basis: CellBasis, d: int, mode: str = "auto",
                    threads: int | None = 1) -> BoundaryMatrix:
    if not basis.complete:
        raise ValueError("basis is partial; homology needs a complete enumeration")
    mode = resolve_mode(basis, mode)
    cols = generators(basis, d, mode)
    rows = generators(basis, d - 1, mode)
    row_cells = basis.cells(d - 1)
    row_pos = {row_cells[k].code: p for p, k in enumerate(rows)}
    targets = {row_cells[k].code: row_cells[k].graph for k in rows}
    col_cells = basis.cells(d)
    graphs = [col_cells[k].graph for k in cols]
    threads = default_threads() if threads is None else max(1, threads)
    if threads > 1 and len(graphs) > 64:
        with ProcessPoolExecutor(threads, initializer=_worker_init, initargs=(targets,)) as pool:
            columns = list(pool.map(_worker_column, graphs, chunksize=16))
    else:
        columns = [incidence_column(g, targets.get) for g in graphs]
    entries = {}
    for j, col in enumerate(columns):
        for code, v in col.items():
            if v:
                entries[row_pos[code], j] = v
    return BoundaryMatrix(d, len(rows), len(cols), entries)


def boundary_matrices(basis: CellBasis, mode: str = "auto",
                      threads: int | None = 1) -> dict[int, BoundaryMatrix]:
    """All nontrivial differentials, keyed by source dimension."""
    dims = [d for d in basis.strata if basis.strata[d]]
    if not dims:
        return {}
    return {d: boundary_matrix(basis, d, mode, threads)
            for d in range(min(dims) + 1, max(dims) + 1)}


def check_d_squared(mats: dict[int, BoundaryMatrix]) -> dict[int, dict]:
    """Nonzero entries of each composite d_{d} o d_{d+1}, keyed by d."""
    bad = {}
    for d in mats:
        if d + 1 in mats:
            prod = compose(mats[d], mats[d + 1])
            if prod:
                bad[d] = prod
    return bad


def matrix_json(basis: CellBasis, m: BoundaryMatrix, mode: str = "auto") -> str:
    mode = resolve_mode(basis, mode)
    rows = [list(basis.cells(m.d - 1)[k].code) for k in generators(basis, m.d - 1, mode)]
    cols = [list(basis.cells(m.d)[k].code) for k in generators(basis, m.d, mode)]
    return json.dumps({"d": m.d, "rows": rows, "cols": cols,
                       "entries": [[i, j, m.entries[i, j]] for (i, j) in sorted(m.entries)]},
                      sort_keys=True)
