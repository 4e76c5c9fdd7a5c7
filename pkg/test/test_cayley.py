import itertools

import pytest

from bandlab.cayley import (
    BallTooSmallError,
    ball_sizes,
    build_ball,
    compute_K,
    distance,
    finite_subgroup,
    k_table,
    star,
    star_k,
)
from bandlab.group_core import IDENTITY, LampElement, eval_word, normal_word, path_vertices, relator


def _normal_form_ball(radius):
    """Elements reached by some word of length at most ``radius``."""
    found = set()
    for length in range(radius + 1):
        for letters in itertools.product("axX", repeat=length):
            found.add(eval_word("".join(letters)))
    return found


def test_ball_sizes():
    assert ball_sizes(3) == [1, 4, 10, 22]
    sizes = ball_sizes(4)
    assert sizes == [len(_normal_form_ball(r)) for r in range(5)]
    assert len(build_ball(1, 2).vertices) == 4
    for r in range(5):
        assert set(build_ball(r, 1).vertices.values()) == _normal_form_ball(r)


def test_ball_is_deterministic():
    first, second = build_ball(3, 2), build_ball(3, 2)
    assert first.to_json() == second.to_json()
    assert first.to_dot() == second.to_dot()
    assert first.vertices[0] == IDENTITY


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cells_are_relator_loops(n):
    ball = build_ball(6, n)
    assert {cell.k for cell in ball.cells} == set(range(n))
    for cell in ball.cells:
        assert set(cell.vertices) <= set(ball.vertices)
        assert cell.vertices[0] == cell.base
        assert set(cell.edges) <= ball.edges
        path = path_vertices(relator(cell.k), ball.vertices[cell.base])
        assert path[-1] == path[0]
        assert [ball.vertex_id(g) for g in path[:-1]] == list(cell.vertices)


def test_star_holds_every_cell_it_spans():
    ball = build_ball(5, 2)
    q = star_k(ball.subcomplex({ball.vertex_id(IDENTITY)}), 2)
    expected = set()
    for g in q.elements():
        for k in range(2):
            if all(h in q for h in path_vertices(relator(k), g)):
                expected.add((ball.vertex_id(g), k))
    assert {(cell.base, cell.k) for cell in q.cells} == expected
    assert expected


def test_star_of_identity():
    ball = build_ball(3, 2)
    q = ball.subcomplex({ball.vertex_id(IDENTITY)})
    st = star(q)
    assert st.elements() == {IDENTITY, eval_word("a"), eval_word("x"), eval_word("X")}
    assert {cell.k for cell in st.cells} == {0}
    assert q <= st
    assert star_k(q, 0) == q


def test_star_refuses_the_frontier():
    ball = build_ball(1, 1)
    q = ball.subcomplex({ball.vertex_id(eval_word("x"))})
    with pytest.raises(BallTooSmallError):
        star(q)
    with pytest.raises(BallTooSmallError):
        ball.vertex_id(eval_word("xx"))


def test_finite_subgroup():
    group = finite_subgroup(3)
    assert len(group) == 8
    assert all(g.shift == 0 and g.lamps <= {0, 1, 2} for g in group)
    assert {eval_word("a"), eval_word("xaX"), eval_word("xxaXX")} <= set(group)


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 4)])
def test_compute_K(n, expected):
    assert compute_K(n) == expected
    # independent check: K is the largest distance to a subgroup element
    distances = [distance(IDENTITY, g, 3 * n) for g in finite_subgroup(n)]
    assert max(distances) == expected


def test_distance():
    assert distance(IDENTITY, eval_word("xxxxx"), 10) == 5
    assert distance(IDENTITY, eval_word("axaX"), 3) is None
    assert distance(IDENTITY, eval_word("axaX"), 4) == 4
    p = LampElement(frozenset({2}), 1)
    assert distance(p, p, 0) == 0
    for g in _normal_form_ball(3):
        d = distance(IDENTITY, g, 3)
        assert d is not None and d <= len(normal_word(g))


def test_k_table():
    table = k_table([1, 2])
    assert list(table.columns) == ["level", "K", "subgroup_order", "ball_size"]
    assert table["K"].tolist() == [1, 4]
    assert table["subgroup_order"].tolist() == [2, 4]
