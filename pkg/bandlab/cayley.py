"""
Finite pieces of the Cayley 2-complexes
:math:`\\Gamma_{n-1} = \\Gamma(L, \\{a, x\\}, \\mathcal{R}_{n-1})`.

A ball of the Cayley graph is generated by breadth-first search; a 2-cell is
attached at a vertex for each relator whose boundary path stays inside the
ball. Star neighbourhoods :math:`st^k(Q)` and the constant ``K`` (the star
radius of the identity that swallows the finite subgroup generated by
:math:`a, x^{-1} a x, \\ldots, x^{-(n-1)} a x^{n-1}`) are computed on top.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import graphviz
import networkx as nx
import pandas as pd

from .group_core import (
    IDENTITY,
    LampElement,
    eval_word,
    lamp_distance_lower_bound,
    lamp_inv,
    lamp_mul,
    path_vertices,
    relator,
    step,
)

logger = logging.getLogger(__name__)

GENERATOR_MOVES = ("a", "x", "X")


class BallTooSmallError(ValueError):
    """Raised when an operation would read past the generated radius."""

    def __init__(self, message: str = "ambient ball too small"):
        super().__init__(message)


@dataclass(frozen=True)
class Cell:
    """A 2-cell attached at ``base`` along ``relator(k)``."""

    base: int
    k: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, str], ...]


@dataclass(frozen=True)
class Complex2:
    """
    Ball of radius ``radius`` in :math:`\\Gamma(L, \\{a, x\\}, \\mathcal{R}_{level-1})`.

    Vertex ids are assigned in breadth-first order with ties broken by the
    element order, so they are deterministic. ``a``-edges are stored once as
    ``(min id, max id, "a")``; ``x``-edges as ``(g, gx, "x")``.
    """

    vertices: dict[int, LampElement]
    edges: frozenset[tuple[int, int, str]]
    cells: tuple[Cell, ...]
    radius: int
    level: int
    depth: dict[int, int] = field(repr=False)

    @cached_property
    def index(self) -> dict[LampElement, int]:
        return {element: vid for vid, element in self.vertices.items()}

    @cached_property
    def graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        for vid, element in self.vertices.items():
            graph.add_node(vid, element=element.to_text(), depth=self.depth[vid])
        for u, v, label in sorted(self.edges):
            graph.add_edge(u, v, key=label, label=label)
        return graph

    def vertex_id(self, element: LampElement) -> int:
        try:
            return self.index[element]
        except KeyError:
            raise BallTooSmallError(
                f"ambient ball too small: {element.to_text()} is outside radius {self.radius}"
            ) from None

    def subcomplex(self, vertex_ids) -> "SubComplex":
        return SubComplex.spanned(self, vertex_ids)

    # --- exports ---
    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "level": self.level,
            "vertices": [
                {"id": vid, **self.vertices[vid].to_dict()} for vid in sorted(self.vertices)
            ],
            "edges": [
                {"source": u, "target": v, "label": label} for u, v, label in sorted(self.edges)
            ],
            "cells": [
                {"base": cell.base, "relator": cell.k, "boundary": list(cell.vertices)}
                for cell in self.cells
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        dot = graphviz.Digraph(name=f"ball_r{self.radius}_n{self.level}")
        for vid in sorted(self.vertices):
            dot.node(str(vid), label=self.vertices[vid].to_text())
        for u, v, label in sorted(self.edges):
            attrs = {"label": label}
            if label == "a":
                attrs["dir"] = "none"
            dot.edge(str(u), str(v), **attrs)
        return dot.source


@dataclass(frozen=True)
class SubComplex:
    """Full subcomplex of a :class:`Complex2` spanned by a vertex set."""

    vertex_ids: frozenset[int]
    ambient: Complex2 = field(repr=False)

    @classmethod
    def spanned(cls, ambient: Complex2, vertex_ids) -> "SubComplex":
        return cls(frozenset(vertex_ids), ambient)

    @cached_property
    def edges(self) -> frozenset[tuple[int, int, str]]:
        return frozenset(
            e for e in self.ambient.edges if e[0] in self.vertex_ids and e[1] in self.vertex_ids
        )

    @cached_property
    def cells(self) -> tuple[Cell, ...]:
        # A cell belongs iff all its vertices belong.
        return tuple(c for c in self.ambient.cells if self.vertex_ids.issuperset(c.vertices))

    def elements(self) -> set[LampElement]:
        return {self.ambient.vertices[v] for v in self.vertex_ids}

    def __contains__(self, element: LampElement) -> bool:
        vid = self.ambient.index.get(element)
        return vid is not None and vid in self.vertex_ids

    def __le__(self, other: "SubComplex") -> bool:
        return self.vertex_ids <= other.vertex_ids


# ---------------- Construction ----------------
def build_ball(radius: int, n: int) -> Complex2:
    """
    Generate the ball of the given radius about the identity.

    Parameters
    ----------
    radius : int
        Word-metric radius, ``radius >= 0``.
    n : int
        Level; cells are attached for :math:`a^2` and ``relator(k)``,
        ``1 <= k <= n - 1``.

    Returns
    -------
    Complex2

    Examples
    --------
    >>> len(build_ball(2, 2).vertices)
    10
    """
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    if n < 1:
        raise ValueError(f"level must be at least 1, got {n}")

    depth_of: dict[LampElement, int] = {IDENTITY: 0}
    layers = [[IDENTITY]]
    for d in range(radius):
        nxt = set()
        for g in layers[-1]:
            for letter in GENERATOR_MOVES:
                h = step(g, letter)
                if h not in depth_of:
                    depth_of[h] = d + 1
                    nxt.add(h)
        layers.append(sorted(nxt, key=LampElement.sort_key))

    vertices: dict[int, LampElement] = {}
    for layer in layers:
        for g in layer:
            vertices[len(vertices)] = g
    index = {g: vid for vid, g in vertices.items()}
    depth = {vid: depth_of[g] for vid, g in vertices.items()}

    edges = set()
    for vid, g in vertices.items():
        ga = step(g, "a")
        if ga in index:
            edges.add((min(vid, index[ga]), max(vid, index[ga]), "a"))
        gx = step(g, "x")
        if gx in index:
            edges.add((vid, index[gx], "x"))

    cells = []
    for vid, g in vertices.items():
        for k in range(n):
            path = path_vertices(relator(k), g)
            if all(h in index for h in path):
                ids = tuple(index[h] for h in path[:-1])
                cells.append(Cell(vid, k, ids, _cell_edges(relator(k), [index[h] for h in path])))

    logger.debug(
        f"Ball radius={radius} level={n}: {len(vertices)} vertices, "
        f"{len(edges)} edges, {len(cells)} cells"
    )
    return Complex2(vertices, frozenset(edges), tuple(cells), radius, n, depth)


def _cell_edges(word: str, ids: list[int]) -> tuple[tuple[int, int, str], ...]:
    out = []
    for letter, u, v in zip(word, ids, ids[1:]):
        if letter == "a":
            out.append((min(u, v), max(u, v), "a"))
        elif letter == "x":
            out.append((u, v, "x"))
        else:
            out.append((v, u, "x"))
    return tuple(out)


# ---------------- Stars ----------------
def star(q: SubComplex) -> SubComplex:
    """
    :math:`st(Q)`: the vertices of ``Q`` and their neighbours, with every
    cell whose vertices all lie in it.

    Raises
    ------
    BallTooSmallError
        If ``Q`` touches the frontier of the ambient ball.
    """
    ambient = q.ambient
    if any(ambient.depth[v] >= ambient.radius for v in q.vertex_ids):
        raise BallTooSmallError()
    graph = ambient.graph
    grown = set(q.vertex_ids)
    for v in q.vertex_ids:
        grown.update(graph.neighbors(v))
    return SubComplex(frozenset(grown), ambient)


def star_k(q: SubComplex, k: int) -> SubComplex:
    """:math:`st^k(Q)`; ``star_k(Q, 0)`` is ``Q``."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    for _ in range(k):
        q = star(q)
    return q


def finite_subgroup(n: int) -> list[LampElement]:
    """
    The :math:`2^n` elements of
    :math:`\\langle a, x a x^{-1}, \\ldots, x^{n-1} a x^{1-n} \\rangle`,
    i.e. lamps in :math:`\\{0, \\ldots, n-1\\}` with the walker at 0.
    """
    out = []
    for r in range(n + 1):
        for lamps in itertools.combinations(range(n), r):
            out.append(LampElement(frozenset(lamps), 0))
    return out


def compute_K(n: int, ambient_radius: int | None = None) -> int:
    """
    Least ``K`` with the finite subgroup on lamps :math:`0, \\ldots, n-1`
    contained in :math:`st^K(\\ast)`.

    Parameters
    ----------
    n : int
        Level.
    ambient_radius : int, optional
        Radius of the ambient ball; defaults to ``3 * n + 1``.

    Raises
    ------
    BallTooSmallError
        If the subgroup is not swallowed before the frontier is reached.

    Examples
    --------
    >>> compute_K(1), compute_K(2)
    (1, 4)
    """
    if n < 1:
        raise ValueError(f"level must be at least 1, got {n}")
    if ambient_radius is None:
        ambient_radius = 3 * n + 1
    ambient = build_ball(ambient_radius, n)
    targets = finite_subgroup(n)
    q = ambient.subcomplex({ambient.vertex_id(IDENTITY)})
    k = 0
    while not all(g in q for g in targets):
        q = star(q)
        k += 1
    logger.info(f"K({n}) = {k} (ambient radius {ambient_radius})")
    return k


# ---------------- Word metric ----------------
def distance(p: LampElement, q: LampElement, bound: int) -> int | None:
    """
    Word-metric distance between ``p`` and ``q``, or ``None`` if it exceeds ``bound``.

    Examples
    --------
    >>> distance(IDENTITY, eval_word("xxxxx"), 10)
    5
    >>> distance(IDENTITY, eval_word("axaX"), 3) is None
    True
    """
    target = lamp_mul(lamp_inv(p), q)
    if target.is_identity():
        return 0
    if lamp_distance_lower_bound(target) > bound:
        return None
    seen = {IDENTITY}
    frontier = deque([IDENTITY])
    for d in range(1, bound + 1):
        nxt = deque()
        for g in frontier:
            for letter in GENERATOR_MOVES:
                h = step(g, letter)
                if h in seen:
                    continue
                if h == target:
                    return d
                seen.add(h)
                nxt.append(h)
        frontier = nxt
    return None


def ball_sizes(max_radius: int) -> list[int]:
    """Number of elements of :math:`L` at distance at most ``r``, for each ``r``."""
    ball = build_ball(max_radius, 1)
    counts = [0] * (max_radius + 1)
    for d in ball.depth.values():
        counts[d] += 1
    return list(itertools.accumulate(counts))


def k_table(levels, ambient_radius: int | None = None) -> pd.DataFrame:
    """
    Tabulate ``K`` and the size of :math:`st^K(\\ast)` for several levels.

    Returns
    -------
    pandas.DataFrame
        Columns ``level``, ``K``, ``subgroup_order``, ``ball_size``.
    """
    rows = []
    for n in levels:
        k = compute_K(n, ambient_radius)
        rows.append(
            {
                "level": n,
                "K": k,
                "subgroup_order": 2**n,
                "ball_size": ball_sizes(k)[-1],
            }
        )
    return pd.DataFrame(rows)
