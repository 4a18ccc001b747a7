"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Every quantity here is an exact integer or rational; no tolerances apply.
Run with ``pytest tests/test_acceptance.py`` (the lines print even without -s).
"""
from __future__ import annotations

import random
import subprocess
import sys

import pytest

from rgh.complex import boundary_matrices, boundary_matrix, check_d_squared
from rgh.enumeration import counts_by_dimension, enumerate_cells, read_catalog, write_catalog
from rgh.homology import homology
from rgh.oracles import brute_automorphisms, naive_enumerate, tree_counts
from rgh.verify import STANDARD_SUITE

TIME_LIMIT = 600.0


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail
    return emit


def _sig(sig) -> str:
    return "(%d,%d,%d,%d)" % tuple(sig)


def test_criterion_01_d_squared_zero(suite, report):
    bad = [_sig(sig) for sig, (_, mats) in suite.results.items() if check_d_squared(mats)]
    ok = not bad and suite.seconds < TIME_LIMIT
    report(1, ok, f"d o d = 0 on {len(suite.results)} signatures, {suite.seconds:.1f} s"
                  + (f"; nonzero for {bad}" if bad else ""))


def test_criterion_02_associahedra(suite, report):
    problems = []
    for r in range(3, 9):
        basis, mats = suite.results[(0, 1, r, 0)]
        counts = counts_by_dimension(basis)
        expected = {r - 3 - e: c for e, c in tree_counts(r).items()}
        if counts != expected:
            problems.append(f"r={r} counts {counts} != {expected}")
        res = homology(basis, mats, "integer")
        if res.betti != {d: int(d == 0) for d in res.betti} or any(res.torsion.values()):
            problems.append(f"r={r} homology {res.betti} torsion {res.torsion}")
    r5 = list(counts_by_dimension(suite.results[(0, 1, 5, 0)][0]).values())
    r4 = list(counts_by_dimension(suite.results[(0, 1, 4, 0)][0]).values())
    if r5 != [1, 5, 5] or r4 != [1, 2]:
        problems.append(f"r=5 {r5}, r=4 {r4}")
    report(2, not problems, "planar-tree counts and H = Z in degree 0 for r=3..8"
                            + (f"; {problems}" if problems else ""))


def test_criterion_03_dimension_identity(suite, report):
    checked = 0
    bad = []
    for sig, (basis, _) in suite.results.items():
        for cell in basis.all_cells():
            checked += 1
            g = cell.graph
            if g.cell_dimension() != basis.signature.dim - g.n_edges or cell.dim != g.cell_dimension():
                bad.append((_sig(sig), cell.code))
    report(3, not bad, f"cell_dimension = dim - E on {checked} graphs" + (f"; {bad[:3]}" if bad else ""))


def test_criterion_04_euler_consistency(suite, report):
    bad = []
    n = 0
    for sig, (basis, mats) in suite.results.items():
        if sig[2] == 0:
            continue
        n += 1
        res = homology(basis, mats)
        alt = sum((-1) ** d * b for d, b in res.betti.items())
        if alt != res.euler:
            bad.append((_sig(sig), res.euler, alt))
    report(4, not bad, f"plain Euler characteristic = alternating Betti sum on {n} signatures"
                       + (f"; {bad}" if bad else ""))


def test_criterion_05_genus_one(suite, report):
    basis, mats = suite.results[(1, 1, 0, 0)]
    cells = list(basis.all_cells())
    counts = counts_by_dimension(basis)
    auts = sorted(c.aut for c in cells)
    brute = sorted(len(brute_automorphisms(c.graph)) for c in cells)
    top = basis.cells(1)
    res = homology(basis, mats, "rational")
    naive = naive_enumerate((1, 1, 0, 0), grow_tails=False)
    ok = (len(cells) == 2 and counts == {1: 1, 0: 1} and auts == [4, 6] and brute == auts
          and len(top) == 1 and not top[0].orientable and res.mode == "rational"
          and res.betti == {1: 0, 0: 1} and naive == basis.codes())
    report(5, ok, f"(1,1,0,0): {len(cells)} classes, dims {counts}, aut {auts} (brute {brute}), "
                  f"dim-1 orientable={top[0].orientable if top else None}, H_Q {res.betti}, "
                  f"naive agrees={naive == basis.codes()}")


def test_criterion_06_annulus(suite, report):
    basis, mats = suite.results[(0, 2, 1, 0)]
    res = homology(basis, mats, "integer")
    ok = counts_by_dimension(basis) == {0: 1} and res.betti == {0: 1} and res.torsion == {0: []}
    report(6, ok, f"(0,2,1,0): cells {counts_by_dimension(basis)}, H_Z {res.betti}")


def test_criterion_07_dual_path(suite, report):
    checked = []
    bad = []
    for sig, (basis, _) in suite.results.items():
        if max(c.n_edges for c in basis.all_cells()) > 6:
            continue
        checked.append(_sig(sig))
        if naive_enumerate(sig) != basis.codes():
            bad.append(_sig(sig))
    report(7, not bad and len(checked) == len(STANDARD_SUITE),
           f"naive and splitting enumeration agree on {len(checked)} signatures" + (f"; differ {bad}" if bad else ""))


def test_criterion_08_marked_disc(suite, report):
    basis = enumerate_cells((0, 1, 2, 1))
    d1 = boundary_matrix(basis, 1)
    res = homology(basis, boundary_matrices(basis), "integer")
    entries = sorted(d1.entries.values())
    ok = (counts_by_dimension(basis) == {1: 1, 0: 2} and entries == [-1, 1]
          and len(d1.entries) == 2 and res.betti == {1: 0, 0: 1})
    report(8, ok, f"(0,1,2,1): strata {counts_by_dimension(basis)}, d_1 entries {entries}, H_Z {res.betti}")


def test_criterion_09_determinism_round_trip(suite, report, tmp_path):
    runs = []
    for sig in [(0, 1, 6, 0), (1, 1, 0, 1), (0, 2, 2, 0)]:
        args = [f"--{k}={v}" for k, v in zip("ghrs", sig)]
        outs = []
        for _ in range(2):
            cat = tmp_path / f"cat{len(outs)}.jsonl"
            proc = subprocess.run([sys.executable, "-m", "rgh", "homology", *args, "--threads", "2",
                                   "--catalog", str(cat)], capture_output=True, check=True)
            outs.append((proc.stdout, cat.read_bytes()))
        runs.append(outs[0] == outs[1])
    round_trip = []
    for sig, (basis, _) in suite.results.items():
        path = tmp_path / "rt.jsonl"
        write_catalog(basis, path)
        round_trip.append(read_catalog(path).codes() == basis.codes())
    ok = all(runs) and all(round_trip)
    report(9, ok, f"byte-identical repeated runs {sum(runs)}/{len(runs)}, "
                  f"catalog round-trip identity {sum(round_trip)}/{len(round_trip)}")


def test_criterion_10_automorphisms(suite, report):
    population = [c for basis, _ in suite.results.values() for c in basis.all_cells()]
    sample = random.Random(20240611).sample(population, 200)
    mismatched = [c.code for c in sample if len(brute_automorphisms(c.graph)) != c.aut]
    with_tails = [c for c in population if c.graph.r >= 1]
    nontrivial = [c.code for c in with_tails if c.aut != 1]
    ok = not mismatched and not nontrivial
    report(10, ok, f"brute-force automorphism counts match on 200/{len(population)} sampled graphs "
                   f"({len(mismatched)} mismatches); {len(with_tails)} graphs with tails, "
                   f"{len(nontrivial)} with aut > 1")
