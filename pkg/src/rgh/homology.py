"""Exact homology over Z and Q from sparse integer boundary matrices."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

from .complex import BoundaryMatrix, generators, resolve_mode
from .enumeration import CellBasis


def _as_rows(matrix) -> dict[int, dict[int, int]]:
    rows: dict[int, dict[int, int]] = {}
    if isinstance(matrix, BoundaryMatrix):
        items = matrix.entries.items()
    elif isinstance(matrix, Mapping):
        items = matrix.items()
    else:
        items = (((i, j), v) for i, row in enumerate(matrix) for j, v in enumerate(row))
    for (i, j), v in items:
        if v:
            rows.setdefault(i, {})[j] = int(v)
    return rows


def smith_normal_form(matrix) -> tuple[int, ...]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix.

    Accepts a BoundaryMatrix, a {(row, col): value} mapping or a dense list
    of rows.  Unit pivots are eliminated sparsely first (Markowitz order);
    whatever is left is diagonalized densely with gcd steps.
    """
    rows = _as_rows(matrix)
    cols: dict[int, set[int]] = {}
    for i, row in rows.items():
        for j in row:
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        pivot = None
        best = None
        for i, row in rows.items():
            for j, v in row.items():
                if v == 1 or v == -1:
                    cost = (len(row) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best:
                        best, pivot = cost, (i, j)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        pi, pj = pivot
        prow = rows.pop(pi)
        pv = prow[pj]
        for i in list(cols[pj]):
            if i == pi:
                continue
            row = rows[i]
            f = row[pj] * pv  # pv = +-1, so this is row[pj] / pv
            for j, v in prow.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = nv
                else:
                    row.pop(j, None)
                    cols[j].discard(i)
            if not row:
                del rows[i]
        for j in prow:
            cols[j].discard(pi)
        del cols[pj]
        units += 1
    rest = _dense_diagonal(rows)
    return (1,) * units + _invariant_factors(rest)


def _dense_diagonal(rows: dict[int, dict[int, int]]) -> list[int]:
    col_ids = sorted({j for row in rows.values() for j in row})
    cidx = {j: k for k, j in enumerate(col_ids)}
    A = []
    for row in rows.values():
        dense = [0] * len(col_ids)
        for j, v in row.items():
            dense[cidx[j]] = v
        A.append(dense)
    m, n = len(A), len(col_ids)
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the trailing block as pivot
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if not changed:
                break
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _invariant_factors(diag: list[int]) -> tuple[int, ...]:
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return tuple(d)


def rank(matrix) -> int:
    return len(smith_normal_form(matrix))


@dataclass
class HomologyResult:
    signature: tuple[int, int, int, int]
    mode: str
    cells: dict[int, int]
    betti: dict[int, int]
    torsion: dict[int, list[int]] = field(default_factory=dict)
    euler: int = 0
    euler_orbifold: Fraction = Fraction(0)

    def to_json(self) -> dict:
        return {"signature": list(self.signature), "mode": self.mode,
                "cells": {str(d): c for d, c in self.cells.items()},
                "betti": {str(d): b for d, b in self.betti.items()},
                "torsion": {str(d): t for d, t in self.torsion.items()},
                "euler": self.euler,
                "euler_orbifold": f"{self.euler_orbifold.numerator}/{self.euler_orbifold.denominator}"}

    def dumps(self, pretty: bool = False) -> str:
        if not pretty:
            return json.dumps(self.to_json(), sort_keys=True)
        lines = [f"signature {tuple(self.signature)}  mode {self.mode}"]
        for d in sorted(self.betti):
            tors = "".join(f" + Z/{t}" for t in self.torsion.get(d, []))
            ring = "Z" if self.mode == "integer" else "Q"
            lines.append(f"  H_{d} = {ring}^{self.betti[d]}{tors}")
        lines.append(f"  euler {self.euler}  orbifold euler {self.euler_orbifold}")
        return "\n".join(lines)


def euler_characteristics(basis: CellBasis) -> tuple[int, Fraction]:
    plain = 0
    orb = Fraction(0)
    for cell in basis.all_cells():
        sign = -1 if cell.dim % 2 else 1
        plain += sign
        orb += Fraction(sign, cell.aut)
    return plain, orb


def homology(basis: CellBasis, matrices: dict[int, BoundaryMatrix], mode: str = "auto") -> HomologyResult:
    """Betti numbers (and torsion in integer mode) of the cellular complex."""
    mode = resolve_mode(basis, mode)
    dims = sorted(d for d in basis.strata if basis.strata[d])
    counts = {d: len(generators(basis, d, mode)) for d in dims}
    snf = {d: smith_normal_form(m) for d, m in matrices.items()}
    betti = {}
    torsion = {}
    for d in dims:
        rk_out = len(snf.get(d, ()))
        rk_in = len(snf.get(d + 1, ()))
        betti[d] = counts[d] - rk_out - rk_in
        if mode == "integer":
            torsion[d] = [x for x in snf.get(d + 1, ()) if x > 1]
    plain, orb = euler_characteristics(basis)
    cells = {d: len(basis.strata[d]) for d in dims}
    return HomologyResult(basis.signature.astuple(), mode, cells, betti, torsion, plain, orb)
