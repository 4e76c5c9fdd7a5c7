import dataclasses
import json

import pytest

from bandlab.bands import (
    ANNULUS,
    BOUNDARY,
    BandError,
    all_bands,
    band_report,
    band_report_json,
    band_side_words,
    crossing_paths,
    opposite_a_edge,
    remove_annuli,
    remove_annulus,
    self_crosses,
    trace_band,
)
from bandlab.group_core import canonical, relator, word_inverse, x_exponent_sum
from bandlab.presented_group import g1_from_word, g1_is_identity
from bandlab.van_kampen import (
    DiagramError,
    area,
    boundary_word,
    diagram_from_conjugates,
    diagram_from_faces,
    empty_diagram,
    fill,
    validate,
)


class AnnulusDiagram:
    """
    Two commutator cells glued into a ring around an ``a^2``-cell.

    The ``a``-edges shared by the two commutator cells form an annulus; the
    other band runs from the boundary through all three cells.
    """

    labels = ["a", "a", "x", "a", "x", "a", "x", "a", "x", "x", "a", "x"]
    faces = [
        [0, 5, 6, 8, 2, 13, 14, 16],
        [3, 9, 10, 4, 1, 19, 20, 22],
        [7, 11],
    ]
    outer = [17, 15, 12, 23, 21, 18]
    level = 2
    boundary = "XaxXax"
    ring_edges = {0, 1}
    line_edges = {3, 5, 7, 10}
    k = 1

    @classmethod
    def build(cls):
        return diagram_from_faces(cls.labels, cls.faces, cls.outer, cls.level)


class WideAnnulusDiagram(AnnulusDiagram):
    """The same ring made of two ``relator(2)`` cells at level 3."""

    labels = ["a", "a", "x", "x", "a", "x", "x", "a", "x", "x", "a", "x", "x",
              "x", "x", "a", "x", "x"]
    faces = [
        [0, 5, 7, 8, 10, 12, 2, 17, 19, 20, 22, 24],
        [3, 13, 11, 14, 6, 4, 1, 27, 29, 30, 32, 34],
        [9, 15],
    ]
    outer = [25, 23, 21, 18, 16, 35, 33, 31, 28, 26]
    level = 3
    boundary = "XXaxxXXaxx"
    ring_edges = {0, 1}
    line_edges = {4, 7, 10, 15}
    k = 2


@pytest.fixture(params=[AnnulusDiagram, WideAnnulusDiagram], ids=["narrow", "wide"])
def annulus(request):
    return request.param


@pytest.fixture
def annulus_diagram(annulus):
    return annulus.build()


def _trivial_word(rng, sampler, n):
    parts = []
    for _ in range(int(rng.integers(1, 3))):
        u = sampler.word(2)
        r = relator(int(rng.integers(0, n)))
        parts.append(u + (r if rng.random() < 0.5 else word_inverse(r)) + word_inverse(u))
    w = canonical("".join(parts))
    pos = int(rng.integers(0, len(w) + 1))
    return w[:pos] + str(rng.choice(["xX", "Xx", "aa"])) + w[pos:]


def _corpus(rng, sampler, count):
    """Fillings found by the search, with the words they fill."""
    out = []
    for _ in range(20 * count):
        if len(out) >= count:
            break
        n = int(rng.integers(1, 4))
        w = _trivial_word(rng, sampler, n) if rng.random() < 0.8 else sampler.word(10)
        if not g1_is_identity(g1_from_word(w, n)):
            continue
        d = fill(w, n, 8, max_nodes=1_000)
        if d.found:
            out.append((n, w, d))
    return out


def test_opposite_a_edge_is_an_involution():
    d = diagram_from_conjugates([("", 2, 1)], 3)
    a_edges = d.a_edges()
    assert len(a_edges) == 4
    for e in a_edges:
        other = opposite_a_edge(d, 0, e)
        assert other != e
        assert opposite_a_edge(d, 0, other) == e
    with pytest.raises(BandError):
        opposite_a_edge(d, 0, 1)


def test_single_cell_bands():
    d = diagram_from_conjugates([("", 1, 1)], 2)
    bands = all_bands(d)
    assert len(bands) == 2
    for b in bands:
        assert b.kind == BOUNDARY
        assert b.cells == (0,)
        assert len(b.connecting_edges) == 2
        assert [x_exponent_sum(s) for s in band_side_words(b)] == [0, 0]


def test_a_squared_cell_band():
    d = diagram_from_conjugates([("x", 0, 1)], 1)
    (b,) = all_bands(d)
    assert b.kind == BOUNDARY
    assert b.sides == ("", "")


def test_wedge_of_two_cells():
    d = diagram_from_conjugates([("", 1, 1), ("x", 1, -1)], 2)
    bands = all_bands(d)
    assert len(bands) == 4
    assert all(len(b) == 1 for b in bands)


def test_empty_diagram_has_no_bands():
    assert all_bands(empty_diagram(2)) == ()


def test_trace_band_needs_an_a_edge():
    d = diagram_from_conjugates([("", 1, 1)], 2)
    with pytest.raises(BandError):
        trace_band(d, 1)
    with pytest.raises(BandError):
        trace_band(d, 99)


def test_annulus_fixture(annulus, annulus_diagram):
    d = annulus_diagram
    assert validate(d) == []
    assert area(d) == 3
    assert boundary_word(d) == annulus.boundary
    assert d.num_vertices - d.num_edges + len(d.faces) + 1 == 2
    assert len(d.a_edges()) == 6

    bands = all_bands(d)
    kinds = sorted(b.kind for b in bands)
    assert kinds == [ANNULUS, BOUNDARY]
    ring = next(b for b in bands if b.kind == ANNULUS)
    assert ring.cells == (0, 1)
    assert set(ring.connecting_edges) == annulus.ring_edges
    line = next(b for b in bands if b.kind == BOUNDARY)
    assert set(line.connecting_edges) == annulus.line_edges
    assert len(line) == 3
    assert not self_crosses(ring)

    paths = crossing_paths(d, ring, line)
    assert [p.cell for p in paths] == [0, 1]
    assert all(p.k == annulus.k and p.across == -annulus.k and p.along == 0 for p in paths)


def test_remove_annulus(annulus, annulus_diagram):
    d = annulus_diagram
    ring = next(b for b in all_bands(d) if b.kind == ANNULUS)
    smaller = remove_annulus(d, ring)
    assert validate(smaller) == []
    assert area(smaller) == 1
    assert boundary_word(smaller) == boundary_word(d)
    assert all(b.kind == BOUNDARY for b in all_bands(smaller))

    cleaned = remove_annuli(d)
    assert area(cleaned) == 1
    assert boundary_word(cleaned) == annulus.boundary


def test_remove_annulus_rejects_boundary_bands(annulus_diagram):
    line = next(b for b in all_bands(annulus_diagram) if b.kind == BOUNDARY)
    with pytest.raises(BandError):
        remove_annulus(annulus_diagram, line)


def test_crossing_paths():
    d = diagram_from_conjugates([("", 1, 1)], 2)
    b1, b2 = all_bands(d)
    (path,) = crossing_paths(d, b1, b2)
    assert path.cell == 0
    assert path.k == 1
    assert path.along == 0
    assert path.across == -1
    (back,) = crossing_paths(d, b2, b1)
    assert back.across == -1
    assert crossing_paths(d, b1, b1) == []

    d = diagram_from_conjugates([("x", 2, -1)], 3)
    b1, b2 = all_bands(d)
    assert [p.across for p in crossing_paths(d, b1, b2)] == [-2]
    assert [p.across for p in crossing_paths(d, b2, b1)] == [-2]


def test_band_corpus(rng, sampler, scale):
    count = max(100, int(100 * scale))
    corpus = _corpus(rng, sampler, count)
    assert len(corpus) == count
    for n, w, d in corpus:
        assert validate(d) == []
        assert boundary_word(d) == w
        bands = all_bands(d)
        edges = [e for b in bands for e in b.connecting_edges]
        assert sorted(edges) == sorted(d.a_edges())
        for b in bands:
            assert not self_crosses(b)
            assert [x_exponent_sum(s) for s in b.sides] == [0, 0]
            if b.kind == BOUNDARY:
                assert len(b.connecting_edges) == len(b.cells) + 1
            else:
                assert len(b.connecting_edges) == len(b.cells)
        for i, b1 in enumerate(bands):
            for b2 in bands[i + 1 :]:
                for path in crossing_paths(d, b1, b2):
                    assert 1 <= path.k <= n - 1
                    assert path.across == -path.k
                    assert path.along == 0


def test_band_report():
    d = diagram_from_conjugates([("", 1, 1), ("", 0, 1)], 2)
    report = band_report(d)
    assert report["area"] == 2
    assert report["a_edges"] == 6
    assert len(report["bands"]) == 3
    assert report["self_crossing"] == []
    assert json.loads(band_report_json(d)) == report

    broken = dataclasses.replace(d, level=1)
    with pytest.raises(DiagramError):
        band_report(broken)
