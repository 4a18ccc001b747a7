from __future__ import annotations

import time
from itertools import permutations
from types import SimpleNamespace

import pytest

from rgh.complex import boundary_matrices
from rgh.enumeration import enumerate_cells
from rgh.graph import RibbonGraph
from rgh.verify import STANDARD_SUITE


def corolla(n: int) -> RibbonGraph:
    """One unmarked vertex carrying tails 1..n in rotation order."""
    return RibbonGraph.from_cycles([list(range(n))], [], list(range(n)))


def theta_one_boundary() -> RibbonGraph:
    return RibbonGraph.from_cycles([[0, 1, 2], [3, 4, 5]], [[0, 3], [1, 4], [2, 5]])


def theta_three_boundaries() -> RibbonGraph:
    return RibbonGraph.from_cycles([[0, 1, 2], [3, 4, 5]], [[0, 5], [1, 4], [2, 3]])


def dumbbell() -> RibbonGraph:
    """Two loops joined by a bridge; three boundary cycles."""
    return RibbonGraph.from_cycles([[0, 1, 2], [3, 4, 5]], [[0, 1], [2, 3], [4, 5]])


def rose_genus_one() -> RibbonGraph:
    return RibbonGraph.from_cycles([[0, 1, 2, 3]], [[0, 2], [1, 3]])


def three_vertex_example() -> RibbonGraph:
    """An unmarked vertex with tails 1, 2 joined to two marked vertices (tails 3, 4)
    which are joined to each other; the rotations are searched for h = 2.

    Half-edges: A = {0: to B, 1: to C, 2: tail 1, 3: tail 2},
    B = {4: to A, 5: to C, 6: tail 3}, C = {7: to A, 8: to B, 9: tail 4}.
    """
    pairs = [[0, 4], [1, 7], [5, 8]]
    for a in permutations([1, 2, 3]):
        for b in permutations([5, 6]):
            for c in permutations([8, 9]):
                g = RibbonGraph.from_cycles([[0, *a], [4, *b], [7, *c]], pairs, [2, 3, 6, 9], [1, 2])
                if g.signature == (0, 2, 4, 2):
                    return g
    raise AssertionError("no rotation system with two boundary cycles")


@pytest.fixture(scope="session")
def suite():
    """Enumeration and boundary matrices for the standard suite, with the time taken."""
    t0 = time.monotonic()
    results = {}
    for sig in STANDARD_SUITE:
        basis = enumerate_cells(sig)
        results[sig] = (basis, boundary_matrices(basis))
    return SimpleNamespace(results=results, seconds=time.monotonic() - t0)
