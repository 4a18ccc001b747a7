"""The standard consistency suite behind ``rgh verify``."""
from __future__ import annotations

import time

from .complex import boundary_matrices, check_d_squared
from .enumeration import Signature, enumerate_cells
from .homology import homology

STANDARD_SUITE = (
    [(0, 1, r, 0) for r in range(3, 9)]
    + [(0, 1, r, 1) for r in range(1, 6)]
    + [(0, 1, r, 2) for r in range(1, 4)]
    + [(0, 2, r, 0) for r in range(1, 5)]
    + [(0, 2, 0, 1), (0, 3, 0, 0)]
    + [(1, 1, r, 0) for r in range(0, 4)]
    + [(1, 1, 0, 1)]
)


def check_signature(sig, threads: int = 1) -> list[tuple[str, bool, str]]:
    """(check name, passed, detail) for one signature."""
    sig = Signature(*sig)
    basis = enumerate_cells(sig, threads=threads)
    out = []
    bad_dim = [c for c in basis.all_cells()
               if c.graph.cell_dimension() != sig.dim - c.graph.n_edges or c.dim != c.graph.cell_dimension()]
    bad_sig = [c for c in basis.all_cells() if c.graph.signature != sig.astuple()]
    out.append(("dimension identity", not bad_dim and not bad_sig, f"{len(basis)} cells"))
    mats = boundary_matrices(basis, "auto", threads=threads)
    bad = check_d_squared(mats)
    out.append(("d o d = 0", not bad, f"degrees {sorted(mats)}" if not bad else f"fails in {sorted(bad)}"))
    res = homology(basis, mats)
    if sig.r > 0:
        alt = sum((-1) ** d * b for d, b in res.betti.items())
        out.append(("euler consistency", alt == res.euler, f"cells {res.euler}, betti {alt}"))
    return out


def run_standard_suite(threads: int = 1) -> tuple[list[str], bool]:
    lines = []
    ok = True
    t0 = time.monotonic()
    for sig in STANDARD_SUITE:
        for name, passed, detail in check_signature(sig, threads):
            ok &= passed
            lines.append(f"{'PASS' if passed else 'FAIL'} {Signature(*sig)} {name}: {detail}")
    lines.append(f"{'PASS' if ok else 'FAIL'} standard suite ({time.monotonic() - t0:.1f} s)")
    return lines, ok
