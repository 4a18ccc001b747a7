from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corolla, rose_genus_one, theta_one_boundary
from rgh.complex import (
    ModeError,
    NotAutomorphism,
    automorphism_sign,
    boundary_matrices,
    boundary_matrix,
    check_d_squared,
    generators,
    incidence_column,
    is_orientable,
    reference_blocks,
    resolve_mode,
    slot_sign,
    splittings,
)
from rgh.enumeration import BudgetExceeded, Limits, enumerate_cells
from rgh.graph import automorphisms, isomorphisms, relabel


def _targets(basis, d, mode):
    cells = basis.cells(d)
    return {cells[k].code: cells[k].graph for k in generators(basis, d, mode)}


def test_rotation_of_four_valent_rose_reverses_orientation():
    g = rose_genus_one()
    rot = tuple(g.sigma)
    assert automorphism_sign(g, rot) == -1
    assert not is_orientable(g)


def test_theta_is_orientable():
    g = theta_one_boundary()
    assert len(automorphisms(g)) == 6
    assert is_orientable(g)


def test_identity_has_sign_one():
    g = theta_one_boundary()
    assert automorphism_sign(g, tuple(range(6))) == 1


def test_non_automorphism_rejected():
    g = theta_one_boundary()
    with pytest.raises(NotAutomorphism):
        automorphism_sign(g, (1, 0, 2, 3, 4, 5))


def test_slot_sign_of_block_reordering():
    g = theta_one_boundary()
    # swapping two blocks of odd size (even valence) would flip; trivalent blocks are even
    assert slot_sign([(3, 4, 5), (0, 1, 2)], tuple(range(6)), g) == 1
    assert slot_sign([(1, 2, 0), (3, 4, 5)], tuple(range(6)), g) == 1
    assert slot_sign([(1, 0, 2), (3, 4, 5)], tuple(range(6)), g) == -1
    r = rose_genus_one()
    assert slot_sign([(1, 2, 3, 0)], tuple(range(4)), r) == -1


def test_resolve_mode():
    disc = enumerate_cells((0, 1, 4, 0))
    closed = enumerate_cells((1, 1, 0, 0))
    assert resolve_mode(disc, "auto") == "integer"
    assert resolve_mode(closed, "auto") == "rational"
    assert resolve_mode(disc, "rational") == "rational"
    with pytest.raises(ModeError, match="MODE_ERROR"):
        resolve_mode(closed, "integer")


def test_corolla_boundary_has_opposite_signs():
    basis = enumerate_cells((0, 1, 4, 0))
    m = boundary_matrix(basis, 1)
    assert m.n_rows == 2 and m.n_cols == 1
    assert sorted(m.entries.values()) == [-1, 1]


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_corolla_column_hits_every_splitting_once(n):
    basis = enumerate_cells((0, 1, n, 0))
    m = boundary_matrix(basis, n - 3)
    assert m.n_cols == 1
    assert sum(abs(v) for v in m.entries.values()) == n * (n - 3) // 2
    assert set(map(abs, m.entries.values())) == {1}


def test_splittings_of_corolla():
    sps = splittings(corolla(5))
    assert len(sps) == 5
    assert all(sp.graph.n_edges == 1 for sp in sps)
    assert all(len(sp.blocks) == 2 for sp in sps)


def test_incidence_independent_of_isomorphism_choice():
    for sig in [(1, 1, 0, 1), (0, 3, 0, 0), (0, 2, 0, 1), (1, 1, 0, 0)]:
        basis = enumerate_cells(sig)
        for cell in basis.all_cells():
            for sp in splittings(cell.graph):
                rep = basis.cells(cell.dim - 1)[basis.locate(sp.graph.canonical_code().code)[1]]
                signs = {slot_sign(sp.blocks, phi, rep.graph) for phi in isomorphisms(sp.graph, rep.graph)}
                assert len(signs) == (1 if rep.orientable else 2)


@pytest.mark.parametrize("sig", [(0, 1, 4, 0), (0, 2, 3, 0), (1, 1, 2, 0), (0, 1, 3, 1)])
def test_d_squared_zero_with_free_tails(sig):
    basis = enumerate_cells(sig, tails="free")
    assert check_d_squared(boundary_matrices(basis)) == {}


def test_d_squared_zero_rationally_on_integer_complexes():
    basis = enumerate_cells((1, 1, 2, 0))
    assert check_d_squared(boundary_matrices(basis, "rational")) == {}


def test_partial_basis_refused():
    with pytest.raises(BudgetExceeded) as err:
        enumerate_cells((0, 1, 7, 0), Limits(max_cells=30))
    with pytest.raises(ValueError):
        boundary_matrix(err.value.partial, 2)


def test_coo_export_format():
    basis = enumerate_cells((0, 1, 5, 0))
    m = boundary_matrix(basis, 2)
    lines = m.to_coo().splitlines()
    assert lines[0] == "%dims 2 5 1"
    assert len(lines) == 1 + 5
    for line in lines[1:]:
        i, j, v = map(int, line.split())
        assert m.entries[i, j] == v


def test_threads_do_not_change_matrices():
    basis = enumerate_cells((0, 1, 7, 0))
    assert boundary_matrix(basis, 2, threads=2).entries == boundary_matrix(basis, 2, threads=1).entries


_natural_cases = []
for _sig, _mode in [((1, 1, 1, 0), "integer"), ((0, 2, 2, 0), "integer"), ((1, 1, 0, 1), "rational"),
                    ((0, 3, 0, 0), "rational"), ((0, 1, 2, 2), "integer")]:
    _basis = enumerate_cells(_sig)
    for _d in _basis.strata:
        if _d - 1 in _basis.strata:
            for _k in generators(_basis, _d, _mode):
                _natural_cases.append((_basis, _d, _mode, _basis.cells(_d)[_k].graph))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(_natural_cases), st.integers(0, 10**6))
def test_boundary_is_natural_under_relabeling(case, seed):
    """Any presentation of a cell, with its own reference orientation, has
    boundary equal to the stored one times the orientation ratio."""
    basis, d, mode, g = case
    order = list(range(len(g.sigma)))
    random.Random(seed).shuffle(order)
    h = relabel(g, order)
    ratio = slot_sign(reference_blocks(h), isomorphisms(h, g)[0], g)
    targets = _targets(basis, d - 1, mode)
    col_g = incidence_column(g, targets.get)
    col_h = incidence_column(h, targets.get)
    assert {c: v for c, v in col_h.items() if v} == {c: ratio * v for c, v in col_g.items() if v}


def test_rose_splits_twice_into_theta():
    sps = splittings(rose_genus_one())
    assert len(sps) == 2
    theta = theta_one_boundary().canonical_code()
    assert all(sp.graph.canonical_code() == theta for sp in sps)


def test_marked_vertex_with_two_tails_splits_twice():
    basis = enumerate_cells((0, 1, 2, 1))
    (top,) = basis.cells(1)
    sps = splittings(top.graph)
    assert [(sp.offset, sp.arc) for sp in sps] == [(0, 0), (1, 0)]
    assert {sp.graph.canonical_code().code for sp in sps} == {c.code for c in basis.cells(0)}


def test_theta_vertex_swap_is_even():
    g = theta_one_boundary()
    swaps = [phi for phi in automorphisms(g) if g.vertex_of[phi[0]] == 1]
    assert swaps and all(automorphism_sign(g, phi) == 1 for phi in swaps)


def test_genus_one_rational_boundary_is_empty():
    basis = enumerate_cells((1, 1, 0, 0))
    m = boundary_matrix(basis, 1, "rational")
    assert (m.n_rows, m.n_cols, m.entries) == (1, 0, {})


def test_single_cell_complex_has_no_matrices():
    assert boundary_matrices(enumerate_cells((0, 1, 3, 0))) == {}


def test_splittings_raise_edge_count_by_one():
    for sig in [(1, 1, 1, 0), (0, 2, 1, 1)]:
        for cell in enumerate_cells(sig).all_cells():
            for sp in splittings(cell.graph):
                assert sp.graph.signature == sig
                assert sp.graph.n_edges == cell.n_edges + 1
