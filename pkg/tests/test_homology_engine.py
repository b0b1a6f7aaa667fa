# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

from math import comb

import networkx as nx
import pytest
from sympy import Matrix

from conftest import RP2_FACES
from src.errors import ConfigError, InvalidFaceError
from src.homology_engine import (
    HomologySummary,
    betti,
    boundary_matrix,
    coboundary_matrix,
    homology,
    homology_is_zero,
    kernel_dimension,
    top_betti,
    torsion_bound_ok,
    torsion_order,
)
from src.lm_process import ProcessState, sample_static
from src.simplex_core import Complex, iter_faces
from src.zlinalg import Field


class TestBoundaryMatrices:
    def test_shapes(self, rp2):
        assert boundary_matrix(rp2).shape == (15, 10)
        assert boundary_matrix(rp2, 1).shape == (6, 15)
        assert coboundary_matrix(rp2).shape == (10, 15)
        with pytest.raises(InvalidFaceError):
            boundary_matrix(rp2, 0)

    def test_boundary_of_boundary_vanishes(self, rp2):
        assert (boundary_matrix(rp2, 1) @ boundary_matrix(rp2)).is_zero()
        full = Complex.full_skeleton(5, 3)
        assert (boundary_matrix(full, 2) @ boundary_matrix(full)).is_zero()

    def test_column_signs(self):
        M = boundary_matrix(Complex(3, 2, [(0, 1, 2)]))
        # rows (0,1), (0,2), (1,2)
        assert M.to_dense() == [[1], [-1], [1]]

    def test_kernel_dimension(self):
        assert kernel_dimension(4, 2) == 3
        assert kernel_dimension(6, 2) == 10
        assert kernel_dimension(5, 1) == 4
        assert kernel_dimension(6, 2, Field(2)) == comb(5, 2)


class TestHomology:
    def test_projective_plane(self, rp2):
        summary = homology(rp2)
        assert summary == HomologySummary(0, (2,))
        assert summary.to_json() == '{"free_rank":0,"torsion":[2]}'
        assert not homology_is_zero(rp2)
        assert betti(rp2) == 0
        assert betti(rp2, 2) == 1
        assert betti(rp2, Field(3)) == 0
        assert torsion_order(summary) == 2

    def test_empty_complex(self, empty_triangle_complex):
        assert homology(empty_triangle_complex) == HomologySummary(comb(3, 2))

    @pytest.mark.parametrize("field", [None, 2, 3, 5, 7])
    def test_empty_complex_over_every_field(self, field):
        for d in (1, 2, 3):
            for n in range(d + 1, 8):
                assert betti(Complex(n, d), field) == comb(n - 1, d)

    def test_betti_counts_torsion_divisible_by_q(self):
        states = [ProcessState(n, 2, seed) for n in (6, 7) for seed in range(3)]
        states.append(ProcessState.from_order(6, 2, RP2_FACES))
        for state in states:
            for m in range(0, state.total + 1, 2):
                Y = state.snapshot(m)
                summary = homology(Y)
                for q in (2, 3, 5):
                    divisible = sum(1 for t in summary.torsion if t % q == 0)
                    assert betti(Y, q) == summary.free_rank + divisible, (state, m, q)

    def test_full_skeleton_vanishes(self, tetrahedron_boundary):
        assert homology(tetrahedron_boundary).is_zero
        assert homology_is_zero(Complex.full_skeleton(6, 2))
        assert top_betti(tetrahedron_boundary) == 1

    def test_graphs_use_reduced_homology(self):
        path = Complex(4, 1, [(0, 1), (1, 2), (2, 3)])
        assert homology_is_zero(path)
        split = Complex(4, 1, [(0, 1), (2, 3)])
        assert homology(split) == HomologySummary(1)

    def test_graph_homology_counts_components(self):
        for seed in range(10):
            Y = sample_static(7, 1, 0.3, seed)
            graph = nx.Graph()
            graph.add_nodes_from(range(7))
            graph.add_edges_from(Y.faces)
            assert homology(Y).free_rank == nx.number_connected_components(graph) - 1
            assert homology_is_zero(Y) == nx.is_connected(graph)

    def test_free_rank_matches_rational_betti(self):
        for seed in range(8):
            Y = sample_static(7, 2, 0.3, seed)
            summary = homology(Y)
            top = Matrix(boundary_matrix(Y).to_dense()) if len(Y) else Matrix.zeros(comb(7, 2), 0)
            assert summary.free_rank == kernel_dimension(7, 2) - top.rank()
            assert summary.free_rank == betti(Y)
            assert torsion_bound_ok(summary, 7, 2)

    def test_vanishing_needs_enough_faces(self):
        Y = Complex(5, 2, list(iter_faces(5, 2))[:5])
        assert not homology_is_zero(Y)


class TestHomologySummary:
    def test_rejects_bad_torsion(self):
        with pytest.raises(InvalidFaceError):
            HomologySummary(0, (1,))
        with pytest.raises(InvalidFaceError):
            HomologySummary(0, (4, 6))
        with pytest.raises(InvalidFaceError):
            HomologySummary(-1)

    def test_json(self):
        summary = HomologySummary.from_json('{"free_rank": 2, "torsion": [2, 4]}')
        assert summary == HomologySummary(2, (2, 4))
        assert not summary.is_zero
        with pytest.raises(ConfigError):
            HomologySummary.from_json('{"torsion": []}')
        with pytest.raises(ConfigError):
            HomologySummary.from_json("nope")
