from __future__ import annotations

import json

import pytest

from zigzag_ldpc import iterate
from zigzag_ldpc.errors import DivergentError, LevelBudgetError, SizeMismatchError
from zigzag_ldpc.graph_core import complete_graph, cycle_graph, from_edge_list, random_regular
from zigzag_ldpc.iterate import (
    iterate_replacement,
    iterate_zigzag,
    iterate_zigzag_modified,
    measure,
    recurrence_fixed_point,
    replacement_step,
    seed_replacement,
    seed_zigzag,
    seed_zigzag_modified,
    zigzag_modified_step,
    zigzag_original_step,
)
from zigzag_ldpc.products import replacement_bound


@pytest.fixture(scope="module")
def zz_seed():
    return seed_zigzag(2, seed=0, tries=5)


def test_zigzag_levels(zz_seed) -> None:
    h, lam, _ = zz_seed
    trace = iterate_zigzag(h, 3, budget=5000, lam_h=lam)
    assert [r.num_left for r in trace.levels] == [16, 256, 4096]
    assert all(r.degree_left == 4 for r in trace.levels)
    assert [r.constructed for r in trace.levels] == [True, True, True]
    b = trace.bounds()
    assert b[0] == pytest.approx(lam**2)
    assert b[1] == pytest.approx(min(1, b[0]) ** 2 + lam + lam**2)
    for r in trace.levels:
        assert r.measured_lambda <= r.lambda_bound + 1e-6 or r.lambda_bound >= 1


def test_budget_traces_bounds_only(zz_seed) -> None:
    h, lam, _ = zz_seed
    trace = iterate_zigzag(h, 4, budget=300, lam_h=lam)
    assert [r.constructed for r in trace.levels] == [True, True, False, False]
    assert trace.levels[3].num_left == 16**4
    assert trace.levels[3].measured_lambda is None
    assert any("exceeds budget" in n for n in trace.notes)
    with pytest.raises(LevelBudgetError):
        iterate_zigzag(h, 4, budget=300, strict=True, lam_h=lam)


def test_zigzag_modified_levels() -> None:
    h, lam, _ = seed_zigzag_modified(1, 2, seed=0, tries=3)
    trace = iterate_zigzag_modified(h, 2, budget=10_000, lam_h=lam)
    r1, r2 = trace.levels
    assert (r1.num_left, r1.num_right) == (32, 16)
    assert (r2.num_left, r2.num_right) == (32 * 32, 16 * 32)
    assert (r2.degree_left, r2.degree_right) == (2, 4)
    assert r2.lambda_bound == pytest.approx(zigzag_modified_step(lam**3, lam))


def test_replacement_levels() -> None:
    g1, h, l1, l2, _ = seed_replacement(12, 2, seed=0, tries=3)
    trace = iterate_replacement(g1, h, 2, budget=1000, lam_g1=l1, lam_h=l2)
    assert [r.num_left for r in trace.levels] == [12, 12 * 81]
    assert all(r.degree_left == 3 for r in trace.levels)
    assert trace.levels[1].lambda_bound == pytest.approx(replacement_bound(min(1, l1) ** 4, min(1, l2), 2))
    assert not trace.precondition_ok


def test_size_checks() -> None:
    with pytest.raises(SizeMismatchError):
        iterate_zigzag(complete_graph(5), 2)
    with pytest.raises(SizeMismatchError):
        iterate_replacement(random_regular(10, 3, 0), complete_graph(5), 2)
    with pytest.raises(SizeMismatchError):
        iterate_replacement(random_regular(10, 3, 0), random_regular(10, 2, 0), 2)


def test_steps() -> None:
    assert zigzag_original_step(0.3, 0.1) == pytest.approx(0.09 + 0.1 + 0.01)
    assert zigzag_original_step(1.4, 0.1) == pytest.approx(1.0 + 0.1 + 0.01)
    assert zigzag_modified_step(0.5, 0.2) == pytest.approx(0.125 + 0.2 + 0.04)
    assert replacement_step(0.5, 0.2, 6) == pytest.approx(replacement_bound(0.0625, 0.2, 6))
    assert replacement_step(0.5, 0.2, 6, power=2) == pytest.approx(replacement_bound(0.25, 0.2, 6))


def test_fixed_points() -> None:
    x = recurrence_fixed_point("zigzag_modified", {"lam": 0.296})
    assert x == pytest.approx(0.5499028700739869, abs=1e-9)
    assert x == pytest.approx(x**3 + 0.296 + 0.296**2, abs=1e-9)
    y = recurrence_fixed_point("replacement", {"lam": 0.2, "lam1": 0.2, "d": 6})
    assert y == pytest.approx(0.8574065424930186, abs=1e-9)
    assert y == pytest.approx(replacement_step(y, 0.2, 6), abs=1e-9)
    z = recurrence_fixed_point("zigzag_original", {"lam": 0.2})
    assert z == pytest.approx(z * z + 0.2 + 0.04, abs=1e-9)
    assert z < iterate.CEILING["zigzag_original"]


def test_bound_sequence_is_monotone() -> None:
    lam = 0.296
    x = lam**3
    seq = [x]
    for _ in range(50):
        x = zigzag_modified_step(x, lam)
        seq.append(x)
    assert all(a < b for a, b in zip(seq, seq[1:]))


@pytest.mark.parametrize("lam1,lam2,d", [(0.05, 0.05, 6), (0.3, 0.3, 20), (0.1, 0.25, 13)])
def test_squared_replacement_diverges(lam1, lam2, d) -> None:
    with pytest.raises(DivergentError):
        recurrence_fixed_point("replacement_squared", {"lam": lam2, "lam1": lam1, "d": d})


def test_divergence_and_errors() -> None:
    with pytest.raises(DivergentError):
        recurrence_fixed_point("zigzag_original", {"lam": 0.5})
    with pytest.raises(ValueError):
        recurrence_fixed_point("bogus", {"lam": 0.1})


def test_measure() -> None:
    two_triangles = from_edge_list([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], 6)
    assert measure(two_triangles) == 1.0
    assert measure(cycle_graph(9), limit=5) is None
    assert measure(complete_graph(5)) == pytest.approx(0.25)


def test_trace_json(zz_seed) -> None:
    h, lam, _ = zz_seed
    data = json.loads(iterate_zigzag(h, 2, lam_h=lam, seed=4).to_json())
    assert data["family"] == "zigzag_original" and data["seed"] == 4
    assert len(data["levels"]) == 2
