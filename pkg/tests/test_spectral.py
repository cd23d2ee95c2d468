from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zigzag_ldpc.errors import DisconnectedError, EmptyGraphError
from zigzag_ldpc.graph_core import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    from_edge_list,
    random_biregular,
    random_regular,
)
from zigzag_ldpc.spectral import is_expander_certificate, lambda2, normalize, ramanujan_threshold


@pytest.mark.parametrize("n", [3, 4, 7, 12])
def test_complete_graph(n) -> None:
    r = lambda2(complete_graph(n))
    assert r.lambda_max == pytest.approx(1.0, abs=1e-12)
    assert r.lambda2 == pytest.approx(-1 / (n - 1), abs=1e-12)
    assert r.lambda_abs == pytest.approx(1 / (n - 1), abs=1e-12)


@pytest.mark.parametrize("n", [5, 9, 15])
def test_odd_cycle(n) -> None:
    r = lambda2(cycle_graph(n))
    assert r.lambda2 == pytest.approx(math.cos(2 * math.pi / n), abs=1e-12)
    assert r.lambda_abs == pytest.approx(math.cos(math.pi / n), abs=1e-12)


def test_even_cycle_is_bipartite() -> None:
    assert lambda2(cycle_graph(8)).lambda_abs == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n,m", [(2, 3), (4, 4), (3, 6)])
def test_complete_bipartite(n, m) -> None:
    r = lambda2(complete_bipartite(n, m))
    assert r.sigma2 == pytest.approx(0.0, abs=1e-12)
    assert r.lambda_max == pytest.approx(1.0, abs=1e-12)
    assert r.expansion == r.sigma2


@given(st.integers(0, 10_000))
def test_power_iteration_matches_dense_regular(seed) -> None:
    g = random_regular(60, 4, seed)
    dense = lambda2(g, "dense")
    power = lambda2(g, "power-iteration", seed=seed)
    assert power.lambda2 == pytest.approx(dense.lambda2, abs=1e-4)
    assert power.lambda_abs == pytest.approx(dense.lambda_abs, abs=1e-4)


@given(st.integers(0, 10_000))
def test_power_iteration_matches_dense_bipartite(seed) -> None:
    g = random_biregular(40, 30, 3, 4, seed)
    dense = lambda2(g, "dense")
    power = lambda2(g, "power-iteration", seed=seed)
    assert power.sigma2 == pytest.approx(dense.sigma2, abs=1e-4)


def test_normalize_general_matrix() -> None:
    a = np.array([[0, 2], [2, 0]])
    assert np.allclose(normalize(a).toarray(), [[0, 1], [1, 0]])
    assert lambda2(a).lambda2 == pytest.approx(-1.0)


def test_errors() -> None:
    two_triangles = from_edge_list([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], 6)
    with pytest.raises(DisconnectedError):
        lambda2(two_triangles)
    with pytest.raises(EmptyGraphError):
        lambda2(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        lambda2(complete_graph(4), "bogus")


def test_certificate() -> None:
    r = lambda2(complete_graph(5))
    assert is_expander_certificate(r, 0.5)
    assert not is_expander_certificate(lambda2(cycle_graph(9)), 0.5)
    with pytest.raises(ValueError):
        is_expander_certificate(r, 1.0)
    with pytest.raises(ValueError):
        is_expander_certificate(r, 0.0)


def test_ramanujan_threshold() -> None:
    assert ramanujan_threshold(4) == pytest.approx(math.sqrt(3) / 2)
