"""
``a``-bands in van Kampen diagrams.

A commutator cell :math:`a x^{-k} a x^k a x^{-k} a x^k` has four ``a``-edges
falling into two diametrically opposite pairs; an :math:`a^2`-cell has two
``a``-edges, opposite to each other. Chaining cells through opposite
``a``-edges gives the bands: each ``a``-edge is a connecting edge of exactly one
band. A band either runs from the boundary back to the boundary or closes up
into an annulus, which can be cut out without changing the boundary word.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass

from .group_core import canonical, relator_index, word_inverse, x_exponent_sum
from .van_kampen import Diagram, DiagramError, _MapBuilder, validate

logger = logging.getLogger(__name__)

BOUNDARY = "boundary-to-boundary"
ANNULUS = "annulus"


class BandError(ValueError):
    """Misuse of a band operation."""


@dataclass(frozen=True)
class Band:
    """
    A maximal chain of cells joined along opposite ``a``-edges.

    ``links`` holds, for every cell, the dart through which the band enters it
    and the opposite dart through which it leaves.
    """

    cells: tuple[int, ...]
    connecting_edges: tuple[int, ...]
    kind: str
    links: tuple[tuple[int, int], ...]
    sides: tuple[str, str]

    def __len__(self) -> int:
        return len(self.cells)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "cells": list(self.cells),
            "connecting_edges": list(self.connecting_edges),
            "sides": list(self.sides),
            "side_exponent_sums": [x_exponent_sum(side) for side in self.sides],
        }


@dataclass(frozen=True)
class CrossingPath:
    """
    Paths around a cell shared by two bands: along the first band's side and
    across the cell to the second band's connecting edge.
    """

    cell: int
    k: int
    along: int
    across: int


# ---------------- Opposite edges ----------------
def _opposite_dart(d: Diagram, face: int, dart: int) -> int:
    cycle = d.faces[face]
    try:
        pos = cycle.index(dart)
    except ValueError:
        raise BandError(f"dart {dart} is not on face {face}") from None
    if d.labels[dart >> 1] != "a":
        raise BandError(f"edge {dart >> 1} is not an a-edge")
    opposite = cycle[(pos + len(cycle) // 2) % len(cycle)]
    if len(cycle) % 2 or d.labels[opposite >> 1] != "a":
        raise BandError(f"face {face} is not a relator cell")
    return opposite


def opposite_a_edge(d: Diagram, face: int, a_edge: int) -> int:
    """
    The ``a``-edge diametrically opposite ``a_edge`` on ``face``.

    Examples
    --------
    >>> from bandlab.van_kampen import diagram_from_conjugates
    >>> d = diagram_from_conjugates([("", 1, 1)], 2)
    >>> opposite_a_edge(d, 0, 0)
    4
    """
    for dart in d.faces[face]:
        if dart >> 1 == a_edge:
            return _opposite_dart(d, face, dart) >> 1
    raise BandError(f"edge {a_edge} is not on face {face}")


# ---------------- Tracing ----------------
def _walk(d: Diagram, start: int) -> tuple[list[tuple[int, int, int]], bool]:
    steps = []
    dart = start
    while d.face_of[dart] != -1:
        face = d.face_of[dart]
        exit_dart = _opposite_dart(d, face, dart)
        steps.append((face, dart, exit_dart))
        dart = exit_dart ^ 1
        if dart == start:
            return steps, True
        if len(steps) > d.num_edges:
            raise BandError(f"band through dart {start} does not terminate")
    return steps, False


def _side_words(d: Diagram, steps) -> tuple[str, str]:
    left, right = [], []
    for face, entry, exit_dart in steps:
        cycle = d.faces[face]
        i, j = cycle.index(entry), cycle.index(exit_dart)
        size = len(cycle)
        first = [cycle[(i + s) % size] for s in range(1, (j - i) % size)]
        second = [cycle[(j + s) % size] for s in range(1, (i - j) % size)]
        left.append("".join(d.letter(x) for x in first))
        right.append(word_inverse("".join(d.letter(x) for x in second)))
    return canonical("".join(left)), canonical("".join(right))


def trace_band(d: Diagram, start: int) -> Band:
    """
    Trace the band through the ``a``-edge ``start`` in both directions.

    Returns
    -------
    Band
        Boundary-to-boundary bands list ``len(cells) + 1`` connecting edges,
        from one boundary edge to the other; annuli list one per cell.
    """
    if not 0 <= start < d.num_edges or d.labels[start] != "a":
        raise BandError(f"edge {start} is not an a-edge")
    forward, closed = _walk(d, 2 * start)
    if closed:
        steps = forward
        connecting = tuple(entry >> 1 for _, entry, _ in steps)
        kind = ANNULUS
    else:
        backward, _ = _walk(d, 2 * start + 1)
        steps = [(face, exit_dart, entry) for face, entry, exit_dart in reversed(backward)]
        steps += forward
        if steps:
            connecting = (steps[0][1] >> 1,) + tuple(exit_dart >> 1 for _, _, exit_dart in steps)
        else:
            connecting = (start,)
        kind = BOUNDARY
    return Band(
        cells=tuple(face for face, _, _ in steps),
        connecting_edges=connecting,
        kind=kind,
        links=tuple((entry, exit_dart) for _, entry, exit_dart in steps),
        sides=_side_words(d, steps),
    )


def all_bands(d: Diagram) -> tuple[Band, ...]:
    """
    Partition the ``a``-edges of ``d`` into bands.

    Bands are listed in order of their smallest connecting edge.
    """
    covered: set[int] = set()
    bands = []
    for e in d.a_edges():
        if e in covered:
            continue
        band = trace_band(d, e)
        covered.update(band.connecting_edges)
        bands.append(band)
    return tuple(bands)


def self_crosses(b: Band) -> bool:
    """True iff the band passes through some cell twice."""
    return len(set(b.cells)) < len(b.cells)


def band_side_words(b: Band) -> tuple[str, str]:
    """The two sides of the band, read in the direction of travel."""
    return b.sides


def _arc_sum(d: Diagram, cycle, start: int, stop: int) -> int:
    """x-exponent sum of the darts strictly between positions ``start`` and ``stop``."""
    size = len(cycle)
    arc = [cycle[(start + s) % size] for s in range(1, (stop - start) % size)]
    return x_exponent_sum("".join(d.letter(x) for x in arc))


def crossing_paths(d: Diagram, b1: Band, b2: Band) -> list[CrossingPath]:
    """
    Exponent sums around the cells shared by two bands.

    For each shared cell, ``along`` is the ``x``-exponent sum of the first
    band's side from its entry to its exit edge. ``across`` is the sum of the
    arc between the two bands' entry edges, read from the band sitting at the
    larger walker position, so a ``relator(k)`` cell gives ``-k``.
    Passing the same band twice inspects the cells it visits twice.
    """
    out = []
    counts = Counter(b1.cells)
    for cell in sorted(set(b1.cells) & set(b2.cells)):
        first = [link for c, link in zip(b1.cells, b1.links) if c == cell]
        second = [link for c, link in zip(b2.cells, b2.links) if c == cell]
        if b1 is b2 or b1 == b2:
            if counts[cell] < 2:
                continue
            second = first[1:]
        (entry, exit_dart), (other, _) = first[0], second[0]
        cycle = d.faces[cell]
        i, j = cycle.index(entry), cycle.index(other)
        across = _arc_sum(d, cycle, i, j)
        if across > 0:
            # the other arc closes the cell, whose x-exponent sum is 0
            across = _arc_sum(d, cycle, j, i)
        out.append(
            CrossingPath(
                cell=cell,
                k=relator_index(d.face_word(cell)) or 0,
                along=_arc_sum(d, cycle, i, cycle.index(exit_dart)),
                across=across,
            )
        )
    return out


# ---------------- Annulus removal ----------------
def remove_annulus(d: Diagram, b: Band) -> Diagram:
    """
    Cut out an annular band and glue its two side circles together.

    Raises
    ------
    BandError
        If ``b`` is not an annulus or the gluing does not close up.
    """
    if b.kind != ANNULUS:
        raise BandError(f"band is {b.kind}, not an annulus")
    if self_crosses(b):
        raise BandError("cannot remove a self-crossing band")

    parent = {x: x for x in d.darts()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for face, (entry, exit_dart) in zip(b.cells, b.links):
        cycle = d.faces[face]
        size = len(cycle)
        i, j = cycle.index(entry), cycle.index(exit_dart)
        first = [cycle[(i + s) % size] for s in range(1, (j - i) % size)]
        second = [cycle[(j + s) % size] for s in range(1, (i - j) % size)]
        if len(first) != len(second):
            raise BandError(f"sides of cell {face} have different lengths")
        for s, t in zip(reversed(first), second):
            if d.labels[s >> 1] != d.labels[t >> 1]:
                raise BandError(f"sides of cell {face} carry different labels")
            if d.labels[t >> 1] == "x" and d.letter(s ^ 1) != d.letter(t):
                raise BandError(f"sides of cell {face} are oriented differently")
            union(s ^ 1, t)
            union(s, t ^ 1)

    removed = set(b.cells)
    survivors: dict[int, list[int]] = {}
    for x in d.darts():
        if d.face_of[x] not in removed:
            survivors.setdefault(find(x), []).append(x)

    builder = _MapBuilder()
    new_dart: dict[int, int] = {}
    for x in sorted(x for group in survivors.values() for x in group):
        if x in new_dart:
            continue
        mine, partner = survivors.get(find(x), []), survivors.get(find(x ^ 1), [])
        if find(x) == find(x ^ 1) or len(mine) != 1 or len(partner) != 1:
            raise BandError(f"gluing along the annulus is inconsistent at dart {x}")
        new_dart[x] = builder.new_edge(d.letter(x))
        new_dart[partner[0]] = new_dart[x] ^ 1

    builder.outer = [new_dart[x] for x in d.outer_face]
    builder.faces = [
        [new_dart[x] for x in cycle] for fid, cycle in enumerate(d.faces) if fid not in removed
    ]
    result = builder.assemble(d.level)
    violations = validate(result)
    if violations:
        raise BandError("annulus removal produced an invalid diagram: " + "; ".join(violations))
    logger.debug(f"Removed annulus of {len(b)} cells; area {len(d.faces)} -> {len(result.faces)}")
    return result


def remove_annuli(d: Diagram) -> Diagram:
    """Remove annular bands one at a time until none is left."""
    while True:
        annuli = [b for b in all_bands(d) if b.kind == ANNULUS and not self_crosses(b)]
        if not annuli:
            return d
        d = remove_annulus(d, annuli[0])


# ---------------- Reports ----------------
def band_report(d: Diagram) -> dict:
    """
    Per-band summary of a valid diagram.

    Raises
    ------
    DiagramError
        If the diagram is invalid.
    """
    violations = validate(d)
    if violations:
        raise DiagramError(violations)
    bands = all_bands(d)
    return {
        "level": d.level,
        "area": len(d.faces),
        "a_edges": len(d.a_edges()),
        "bands": [b.to_dict() for b in bands],
        "self_crossing": [idx for idx, b in enumerate(bands) if self_crosses(b)],
    }


def band_report_json(d: Diagram) -> str:
    return json.dumps(band_report(d), indent=2)
