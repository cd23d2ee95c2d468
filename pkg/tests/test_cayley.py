from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zigzag_ldpc.cayley import (
    CayleySpec,
    SemidirectGroup,
    build_replacement_cayley,
    build_zigzag_cayley,
    check_symmetric,
    draw_reps,
    orbit,
    two_generates,
)
from zigzag_ldpc.errors import InvalidElementError, NonSymmetricError


@pytest.fixture(scope="module", params=[("shift", 5), ("shift", 3), ("mobius", 3)])
def group(request):
    return SemidirectGroup(*request.param)


def elements(group, rng, count):
    return [(int(rng.integers(group.a_size)), int(rng.integers(group.b_size))) for _ in range(count)]


def test_group_axioms(group) -> None:
    rng = np.random.default_rng(0)
    identity = (0, group.b_identity)
    for x, y, z in zip(*(elements(group, rng, 40) for _ in range(3))):
        assert group.mul(group.mul(x, y), z) == group.mul(x, group.mul(y, z))
        assert group.mul(x, identity) == x == group.mul(identity, x)
        assert group.mul(x, group.inverse(x)) == identity


def test_action_is_a_homomorphism(group) -> None:
    for b, c in itertools.product(range(min(group.b_size, 12)), repeat=2):
        assert np.array_equal(group.phi[group.b_mul[b, c]], group.phi[b][group.phi[c]])


def test_right_multiply_matches_mul(group) -> None:
    rng = np.random.default_rng(1)
    for s in elements(group, rng, 5):
        table = group.right_multiply(s)
        for x in elements(group, rng, 20):
            a, b = group.mul(x, s)
            assert table[x[1] * group.a_size + x[0]] == b * group.a_size + a


def test_sl2_orders() -> None:
    assert SemidirectGroup("mobius", 3).b_size == 24
    assert SemidirectGroup("mobius", 5).b_size == 120


def test_orbits() -> None:
    assert orbit(0b00001, "shift", 5) == {1, 2, 4, 8, 16}
    assert orbit(0b00011, "shift", 5) == {3, 6, 12, 24, 17}
    # SL2 acts transitively on the projective line
    assert orbit(1, "mobius", 3) == {1, 2, 4, 8}
    assert orbit(0, "mobius", 3) == {0}
    with pytest.raises(InvalidElementError):
        orbit(32, "shift", 5)


def test_moebius_infinity_rule() -> None:
    g = SemidirectGroup("mobius", 5)
    m = g.b_index((2, 1, 1, 1))
    perm = g.coord_perm[m]
    assert perm[5] == 2  # infinity -> a/c
    assert perm[4] == 5  # -d/c -> infinity
    assert sorted(perm) == list(range(6))
    with pytest.raises(InvalidElementError):
        g.b_index((1, 1, 1, 1))


def test_two_generates() -> None:
    assert [p for p in range(2, 30) if two_generates(p)] == [3, 5, 11, 13, 19, 29]


def test_draw_reps_deterministic() -> None:
    g = SemidirectGroup("shift", 7)
    a = draw_reps(g, 6, 3)
    assert a == draw_reps(g, 6, 3)
    assert len(set(a)) == 6 and 0 not in a


def test_example_shift_graph() -> None:
    c = build_zigzag_cayley(CayleySpec("shift", 5, 5))
    assert c.graph.num_vertices == 160 and c.degree == 20
    assert c.graph.is_simple()
    check_symmetric(c.group, c.generators)


@given(st.integers(0, 500))
def test_cayley_adjacency_is_right_multiplication(seed) -> None:
    c = build_zigzag_cayley(CayleySpec("shift", 5, 3, seed=seed))
    g, grp = c.graph, c.group
    for t, s in enumerate(c.generators):
        for b in range(grp.b_size):
            for a in (0, 7, 31):
                w, j = g.rot(b * grp.a_size + a, t)
                na, nb = grp.mul((a, b), s)
                assert w == nb * grp.a_size + na
                assert c.generators[j] == grp.inverse(s)


def test_replacement_cayley() -> None:
    c = build_replacement_cayley(CayleySpec("shift", 5, 3, "replacement", seed=2))
    assert c.degree == 5 and c.graph.num_vertices == 160


def test_mobius_double_cover() -> None:
    c = build_zigzag_cayley(CayleySpec("mobius", 3, 2))
    g = c.graph
    assert (g.num_left, g.num_right) == (384, 384)
    assert g.left_degree == g.right_degree == c.degree
    b = g.biadjacency().toarray()
    for u, v in c.arcs[:200]:
        assert b[u, v] >= 1


def test_non_symmetric() -> None:
    g = SemidirectGroup("shift", 5)
    with pytest.raises(NonSymmetricError):
        check_symmetric(g, [(1, 1)])
    # both shift generating sets are closed under inversion, so no symmetrizing is needed
    for kind, build in (("zigzag", build_zigzag_cayley), ("replacement", build_replacement_cayley)):
        c = build(CayleySpec("shift", 5, 0, kind, reps=[1, 3], symmetrize=False))
        assert not c.symmetrized
        check_symmetric(c.group, c.generators)


def test_spec_validation() -> None:
    with pytest.raises(ValueError):
        CayleySpec("shift", 6, 2)
    with pytest.raises(ValueError):
        CayleySpec("shift", 7, 2, require_primitive_two=True)
    with pytest.raises(ValueError):
        CayleySpec("shift", 5, 2, reps=[1, 1])
    with pytest.raises(ValueError):
        build_zigzag_cayley(CayleySpec("shift", 5, 2, "replacement"))
