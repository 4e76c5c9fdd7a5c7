"""
Van Kampen diagrams over :math:`\\mathcal{R}_{n-1}` as labelled combinatorial maps.

Every edge ``e`` has two darts, ``2e`` and ``2e + 1``. Dart ``2e`` runs from
``tails[e]`` to ``heads[e]`` and reads ``labels[e]`` (``"a"`` or ``"x"``); dart
``2e + 1`` runs backwards and reads the inverse letter. ``a``-edges carry an
orientation only as bookkeeping: every reading through :func:`canonical`
forgets it. The rotation system lists, for each vertex, the darts leaving it in
counter-clockwise order; faces are the orbits of
``phi(d) = sigma(alpha(d))`` with ``alpha(d) = d ^ 1`` and ``sigma`` the
rotation successor. The orbit through ``outer_start`` is the outer face and
reads the boundary word from the basepoint.

Diagrams are built from products of conjugates of relators (a wedge of
lollipops) and then folded. :func:`fill` finds such a product for a word by a
bounded search over relator insertions and deletions.
"""

from __future__ import annotations

import heapq
import itertools
import json
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import graphviz
import networkx as nx

from .group_core import (
    IDENTITY,
    LampElement,
    canonical,
    cyclic_rotations,
    free_reduce,
    letter_inverse,
    relator,
    relator_index,
    relator_set,
    step,
    word_inverse,
)
from .presented_group import g1_from_word, g1_is_identity

logger = logging.getLogger(__name__)


class DiagramError(ValueError):
    """An operation needed a valid diagram."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid diagram: " + "; ".join(self.violations))


@dataclass(frozen=True)
class NotFoundWithinBound:
    """Result of :func:`fill` when no filling was found within the bound."""

    word: str
    level: int
    max_area: int
    reason: str = "search exhausted"

    found = False


@dataclass(frozen=True)
class Diagram:
    """Planar map with a designated outer face; see the module docstring."""

    level: int
    labels: tuple[str, ...]
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    rotation: tuple[tuple[int, ...], ...]
    outer_start: int | None

    found = True

    # --- darts ---
    @property
    def num_edges(self) -> int:
        return len(self.labels)

    @property
    def num_vertices(self) -> int:
        return len(self.rotation)

    def darts(self) -> range:
        return range(2 * self.num_edges)

    def tail(self, d: int) -> int:
        e = d >> 1
        return self.tails[e] if d % 2 == 0 else self.heads[e]

    def head(self, d: int) -> int:
        return self.tail(d ^ 1)

    def letter(self, d: int) -> str:
        """Signed letter read along dart ``d``."""
        label = self.labels[d >> 1]
        return label if d % 2 == 0 else letter_inverse(label)

    def is_a_edge(self, e: int) -> bool:
        return self.labels[e] == "a"

    @cached_property
    def sigma(self) -> dict[int, int]:
        nxt = {}
        for darts in self.rotation:
            for pos, d in enumerate(darts):
                nxt[d] = darts[(pos + 1) % len(darts)]
        return nxt

    def phi(self, d: int) -> int:
        return self.sigma[d ^ 1]

    # --- faces ---
    @cached_property
    def _face_data(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        sigma = self.sigma
        seen: set[int] = set()

        def orbit(d0):
            cycle = [d0]
            seen.add(d0)
            d = sigma[d0 ^ 1]
            while d != d0:
                if d in seen:
                    # rotation system is not a permutation; validate() reports it
                    break
                cycle.append(d)
                seen.add(d)
                d = sigma[d ^ 1]
            return tuple(cycle)

        outer: tuple[int, ...] = ()
        if self.outer_start is not None and self.outer_start in sigma:
            outer = orbit(self.outer_start)
        inner = []
        for d in self.darts():
            if d not in seen and d in sigma and (d ^ 1) in sigma:
                inner.append(orbit(d))
        return outer, tuple(inner)

    @property
    def outer_face(self) -> tuple[int, ...]:
        return self._face_data[0]

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Inner faces, each a cycle of darts starting at its smallest dart."""
        return self._face_data[1]

    @cached_property
    def face_of(self) -> dict[int, int]:
        """Face id of each dart; ``-1`` for the outer face."""
        out = {d: -1 for d in self.outer_face}
        for fid, cycle in enumerate(self.faces):
            for d in cycle:
                out[d] = fid
        return out

    def face_word(self, fid: int, signed: bool = False) -> str:
        cycle = self.outer_face if fid == -1 else self.faces[fid]
        word = "".join(self.letter(d) for d in cycle)
        return word if signed else canonical(word)

    def outer_word(self, signed: bool = False) -> str:
        return self.face_word(-1, signed)

    @property
    def basepoint(self) -> int:
        return 0 if self.outer_start is None else self.tail(self.outer_start)

    def a_edges(self) -> list[int]:
        return [e for e in range(self.num_edges) if self.labels[e] == "a"]

    # --- exports ---
    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "edges": [
                {"id": e, "tail": t, "head": h, "label": label}
                for e, (t, h, label) in enumerate(zip(self.tails, self.heads, self.labels))
            ],
            "rotation": [list(darts) for darts in self.rotation],
            "outer": {
                "basepoint": self.basepoint,
                "start_dart": self.outer_start,
                "direction": "ccw",
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Diagram":
        edges = sorted(data["edges"], key=lambda item: item["id"])
        if [item["id"] for item in edges] != list(range(len(edges))):
            raise ValueError("Edge ids must be 0..E-1")
        labels = tuple(str(item["label"]) for item in edges)
        if any(label not in ("a", "x") for label in labels):
            raise ValueError("Edge labels must be 'a' or 'x'")
        outer = data.get("outer", {})
        start = outer.get("start_dart")
        return cls(
            level=int(data["level"]),
            labels=labels,
            tails=tuple(int(item["tail"]) for item in edges),
            heads=tuple(int(item["head"]) for item in edges),
            rotation=tuple(tuple(int(d) for d in darts) for darts in data["rotation"]),
            outer_start=None if start is None else int(start),
        )

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        return cls.from_dict(json.loads(text))

    def to_dot(self) -> str:
        dot = graphviz.Digraph(name="diagram")
        for v in range(self.num_vertices):
            attrs = {"shape": "doublecircle"} if v == self.basepoint else {}
            dot.node(str(v), **attrs)
        for e, (t, h, label) in enumerate(zip(self.tails, self.heads, self.labels)):
            attrs = {"label": f"{label}{e}"}
            if label == "a":
                attrs["dir"] = "none"
            dot.edge(str(t), str(h), **attrs)
        return dot.source


# ---------------- Assembly from face cycles ----------------
class _MapBuilder:
    """Mutable map described by face cycles; ``outer`` is the outer face."""

    def __init__(self):
        self.labels: list[str] = []
        self.alive: list[bool] = []
        self.faces: list[list[int]] = []
        self.outer: list[int] = []

    @classmethod
    def from_diagram(cls, d: Diagram) -> "_MapBuilder":
        b = cls()
        b.labels = list(d.labels)
        b.alive = [True] * d.num_edges
        b.outer = list(d.outer_face)
        b.faces = [list(cycle) for cycle in d.faces]
        return b

    def new_edge(self, letter: str) -> int:
        """Create an edge and return the dart reading the signed ``letter``."""
        self.labels.append(letter.lower())
        self.alive.append(True)
        e = len(self.labels) - 1
        return 2 * e if letter.islower() else 2 * e + 1

    def kill(self, e: int) -> None:
        self.alive[e] = False

    def letter(self, d: int) -> str:
        label = self.labels[d >> 1]
        return label if d % 2 == 0 else letter_inverse(label)

    def tail_map(self) -> dict[int, int]:
        """Vertex (as an orbit representative) of the tail of every live dart."""
        phi = {}
        for cycle in [self.outer, *self.faces]:
            for pos, d in enumerate(cycle):
                phi[d] = cycle[(pos + 1) % len(cycle)]
        tails: dict[int, int] = {}
        for d0 in sorted(phi):
            if d0 in tails:
                continue
            d = d0
            while d not in tails:
                tails[d] = d0
                d = phi[d ^ 1]
        return tails

    def assemble(self, level: int) -> Diagram:
        live = [e for e, ok in enumerate(self.alive) if ok]
        if not live:
            return Diagram(level, (), (), (), ((),), None)
        remap_edge = {e: i for i, e in enumerate(live)}

        def remap(d):
            return 2 * remap_edge[d >> 1] + (d & 1)

        outer = [remap(d) for d in self.outer]
        faces = [[remap(d) for d in cycle] for cycle in self.faces]
        phi = {}
        for cycle in [outer, *faces]:
            for pos, d in enumerate(cycle):
                if d in phi:
                    raise DiagramError([f"dart {d} appears in two faces"])
                phi[d] = cycle[(pos + 1) % len(cycle)]
        n_darts = 2 * len(live)
        if len(phi) != n_darts:
            raise DiagramError(["face cycles do not cover every dart"])
        sigma = {x: phi[x ^ 1] for x in range(n_darts)}

        vertex_of: dict[int, int] = {}
        rotation: list[tuple[int, ...]] = []
        for d0 in [*outer, *range(n_darts)]:
            if d0 in vertex_of:
                continue
            orbit = [d0]
            d = sigma[d0]
            while d != d0:
                orbit.append(d)
                d = sigma[d]
            pivot = orbit.index(min(orbit))
            orbit = orbit[pivot:] + orbit[:pivot]
            for x in orbit:
                vertex_of[x] = len(rotation)
            rotation.append(tuple(orbit))

        labels = tuple(self.labels[e] for e in live)
        tails = tuple(vertex_of[2 * i] for i in range(len(live)))
        heads = tuple(vertex_of[2 * i + 1] for i in range(len(live)))
        return Diagram(level, labels, tails, heads, tuple(rotation), outer[0] if outer else None)


def empty_diagram(level: int) -> Diagram:
    return _MapBuilder().assemble(level)


def diagram_from_faces(labels, faces, outer, level: int) -> Diagram:
    """
    Assemble a diagram from edge labels and face cycles of darts.

    Parameters
    ----------
    labels : sequence of str
        ``"a"`` or ``"x"`` for each edge; dart ``2e`` reads ``labels[e]``.
    faces : sequence of sequence of int
        Inner faces as cycles of darts.
    outer : sequence of int
        Outer face, starting with the dart that leaves the basepoint.
    level : int

    Examples
    --------
    >>> d = diagram_from_faces("aa", [[1, 3]], [0, 2], 1)
    >>> boundary_word(d), area(d)
    ('aa', 1)
    """
    b = _MapBuilder()
    for label in labels:
        if label not in ("a", "x"):
            raise ValueError(f"Edge label must be 'a' or 'x', got {label!r}")
        b.new_edge(label)
    b.faces = [list(cycle) for cycle in faces]
    b.outer = list(outer)
    return b.assemble(level)


# ---------------- Validation ----------------
def validate(d: Diagram) -> list[str]:
    """
    Check planarity, connectivity and face labels.

    Returns
    -------
    list of str
        Empty iff the diagram is a valid van Kampen diagram over
        :math:`\\mathcal{R}_{n-1}`.
    """
    violations = []
    if d.level < 1:
        violations.append(f"level {d.level} < 1")
    if d.num_edges == 0:
        if d.num_vertices != 1:
            violations.append(f"edgeless diagram has {d.num_vertices} vertices")
        return violations
    if len(d.tails) != d.num_edges or len(d.heads) != d.num_edges:
        return violations + ["edge endpoint arrays do not match the labels"]

    listed = [x for darts in d.rotation for x in darts]
    if sorted(listed) != list(d.darts()):
        return violations + ["rotation system does not list every dart exactly once"]
    for v, darts in enumerate(d.rotation):
        for x in darts:
            if d.tail(x) != v:
                violations.append(f"dart {x} listed at vertex {v} but leaves {d.tail(x)}")
    if d.outer_start is None or not 0 <= d.outer_start < 2 * d.num_edges:
        return violations + ["outer face start dart missing"]
    if violations:
        return violations

    graph = nx.MultiGraph()
    graph.add_nodes_from(range(d.num_vertices))
    graph.add_edges_from(zip(d.tails, d.heads))
    if not nx.is_connected(graph):
        violations.append("diagram is not connected")

    n_faces = len(d.faces) + 1
    euler = d.num_vertices - d.num_edges + n_faces
    if euler != 2:
        violations.append(
            f"Euler check failed: V - E + F = {d.num_vertices} - {d.num_edges} + {n_faces} = {euler}"
        )
    for fid in range(len(d.faces)):
        word = d.face_word(fid)
        k = relator_index(word)
        if k is None or k > d.level - 1:
            violations.append(f"face {fid} reads {word!r}, not a relator of level {d.level}")
    return violations


def boundary_word(d: Diagram) -> str:
    """
    Boundary word read from the basepoint around the outer face.

    Raises
    ------
    DiagramError
        If the diagram is invalid.
    """
    violations = validate(d)
    if violations:
        raise DiagramError(violations)
    return d.outer_word()


def area(d: Diagram) -> int:
    """Number of inner faces."""
    return len(d.faces)


def vertex_elements(d: Diagram, base: LampElement = IDENTITY) -> dict[int, LampElement]:
    """Group element of every vertex when the basepoint sits at ``base``."""
    elements = {d.basepoint: base}
    queue = deque([d.basepoint])
    while queue:
        v = queue.popleft()
        for x in d.rotation[v]:
            w = d.head(x)
            if w not in elements:
                elements[w] = step(elements[v], d.letter(x))
                queue.append(w)
    return elements


# ---------------- Construction ----------------
def _signed_relator(k: int, sign: int) -> str:
    r = relator(k)
    return r if sign > 0 else word_inverse(r)


def diagram_from_conjugates(factors, n: int) -> Diagram:
    """
    Wedge of lollipops with boundary :math:`\\prod u_i r_{k_i}^{\\pm 1} u_i^{-1}`.

    Parameters
    ----------
    factors : iterable of (str, int, int)
        ``(u, k, sign)``: conjugator word (signed letters allowed), relator
        index and ``+1`` / ``-1``.
    n : int
        Level of the diagram.

    Examples
    --------
    >>> d = diagram_from_conjugates([("", 1, 1)], 2)
    >>> boundary_word(d), area(d)
    ('aXaxaXax', 1)
    """
    b = _MapBuilder()
    for u, k, sign in factors:
        if k < 0 or k > n - 1:
            raise ValueError(f"relator index {k} is not available at level {n}")
        stem = [b.new_edge(letter) for letter in u]
        cell = [b.new_edge(letter) for letter in _signed_relator(k, sign)]
        b.outer.extend(stem)
        b.outer.extend(cell)
        b.faces.append([x ^ 1 for x in reversed(cell)])
        b.outer.extend(x ^ 1 for x in reversed(stem))
    return b.assemble(n)


def fold(d: Diagram) -> Diagram:
    """
    Fold adjacent boundary darts reading :math:`s s^{-1}` until none is left.

    Spikes (an edge walked out and straight back) are pruned; two distinct
    edges are identified unless their far endpoints already coincide, which
    would pinch off a sphere. Inner faces are never created or destroyed.
    """
    if d.num_edges == 0:
        return d
    b = _MapBuilder.from_diagram(d)
    while _fold_step(b, excise=False):
        pass
    return b.assemble(d.level)


def _fold_step(b: _MapBuilder, excise: bool) -> bool:
    for i in range(len(b.outer) - 1):
        x, y = b.outer[i], b.outer[i + 1]
        if b.letter(y) != letter_inverse(b.letter(x)):
            continue
        if y == x ^ 1:
            del b.outer[i : i + 2]
            b.kill(x >> 1)
            return True
        tails = b.tail_map()
        if tails[x] == tails[y ^ 1]:
            if not excise:
                continue
            _excise_bubble(b, i)
            return True
        del b.outer[i : i + 2]
        target = y ^ 1
        for cycle in [b.outer, *b.faces]:
            if target in cycle:
                cycle[cycle.index(target)] = x
                break
        b.kill(y >> 1)
        return True
    return False


def _excise_bubble(b: _MapBuilder, i: int) -> None:
    """
    Drop the boundary pair at ``i`` together with everything it encloses.

    The two edges run between the same vertices and read the same letter,
    so they bound a disc whose boundary word is freely trivial.
    """
    x, y = b.outer[i], b.outer[i + 1]
    cut = {x >> 1, y >> 1}
    owner = {d: fid for fid, cycle in enumerate(b.faces) for d in cycle}
    if x ^ 1 not in owner:
        raise DiagramError([f"boundary edge {x >> 1} does not border an inner face"])
    inside = set()
    stack = [owner[x ^ 1]]
    while stack:
        fid = stack.pop()
        if fid in inside:
            continue
        inside.add(fid)
        for d in b.faces[fid]:
            if d >> 1 not in cut and owner.get(d ^ 1) is not None:
                stack.append(owner[d ^ 1])
    for fid in inside:
        for d in b.faces[fid]:
            b.kill(d >> 1)
    b.faces = [cycle for fid, cycle in enumerate(b.faces) if fid not in inside]
    del b.outer[i : i + 2]
    for e in cut:
        b.kill(e)


def _match_boundary(d: Diagram, word: str) -> Diagram:
    """
    Reshape a filling of ``free_reduce(word)`` so that it reads ``word`` itself.

    Backtracks left on the boundary are removed (cutting out the discs they
    enclose), then the pairs that free reduction cancels in ``word`` are
    attached again as spikes, in place.
    """
    b = _MapBuilder.from_diagram(d)
    while _fold_step(b, excise=True):
        pass
    reduced = b.outer
    if "".join(b.letter(x) for x in reduced) != free_reduce(word):
        raise DiagramError([f"filling does not reduce to {free_reduce(word)!r}"])
    darts: list[int | None] = [None] * len(word)
    stack: list[int] = []
    for pos, letter in enumerate(word):
        if stack and word[stack[-1]] == letter_inverse(letter):
            first = stack.pop()
            darts[first] = b.new_edge(word[first])
            darts[pos] = darts[first] ^ 1
        else:
            stack.append(pos)
    for pos, x in zip(stack, reduced):
        darts[pos] = x
    b.outer = darts
    return b.assemble(d.level)


# ---------------- Filling search ----------------
@dataclass(frozen=True)
class _Move:
    word: str
    k: int
    sign: int
    prefix: str  # rho = prefix^-1 * relator^sign * prefix


def _relator_moves(n: int) -> list[_Move]:
    moves = {}
    for k in range(n):
        for sign in (1, -1):
            r = _signed_relator(k, sign)
            for offset, rho in enumerate(cyclic_rotations(r)):
                moves.setdefault(rho, _Move(rho, k, sign, r[:offset]))
    return sorted(moves.values(), key=lambda m: (len(m.word), m.word))


def _successors(word: str, moves: list[_Move]):
    for move in moves:
        start = word.find(move.word)
        while start != -1:
            head = word[:start]
            new = free_reduce(head + word[start + len(move.word) :])
            conj = free_reduce(head + word_inverse(move.prefix))
            yield new, (conj, move.k, move.sign)
            start = word.find(move.word, start + 1)
    for pos in range(len(word) + 1):
        head = word[:pos]
        for move in moves:
            new = free_reduce(head + move.word + word[pos:])
            conj = free_reduce(head + word_inverse(move.prefix))
            yield new, (conj, move.k, -move.sign)


def fill_trace(word: str, n: int, max_area: int, max_nodes: int = 200_000):
    """
    Search for a product of conjugates of relators freely equal to ``word``.

    The search starts at the freely reduced word; each step deletes a cyclic
    rotation of a relator (or its inverse) occurring as a subword, or inserts
    one anywhere, and freely reduces. Each step contributes one factor. Words
    are expanded shortest first, and a word is revisited only when reached
    with a smaller area.

    Returns
    -------
    list of (str, int, int) or NotFoundWithinBound
        Factors ``(u, k, sign)`` in product order.
    """
    start = free_reduce(word)
    moves = _relator_moves(n)
    cap = len(start) + max(len(r) for r in relator_set(n))
    best = {start: 0}
    parent: dict[str, tuple[str, tuple] | None] = {start: None}
    counter = itertools.count()
    heap = [(len(start), 0, next(counter), start)]
    expanded = 0
    while heap:
        _, cost, _, current = heapq.heappop(heap)
        if cost > best[current]:
            continue
        if current == "":
            factors = []
            node = current
            while parent[node] is not None:
                node, factor = parent[node]
                factors.append(factor)
            factors.reverse()
            logger.debug(f"Filled {word!r} at level {n} with area {len(factors)}")
            return factors
        if cost >= max_area:
            continue
        expanded += 1
        if expanded > max_nodes:
            logger.warning(f"Filling search for {word!r} stopped after {max_nodes} nodes")
            return NotFoundWithinBound(word, n, max_area, "node budget exhausted")
        for new, factor in _successors(current, moves):
            if len(new) > cap:
                continue
            if cost + 1 < best.get(new, max_area + 1):
                best[new] = cost + 1
                parent[new] = (current, factor)
                heapq.heappush(heap, (len(new), cost + 1, next(counter), new))
    return NotFoundWithinBound(word, n, max_area)


def fill(
    word: str,
    n: int,
    max_area: int,
    use_oracle: bool = True,
    max_nodes: int = 200_000,
) -> Diagram | NotFoundWithinBound:
    """
    Van Kampen diagram of area at most ``max_area`` for ``word``, if one is found.

    Parameters
    ----------
    word : str
        Word over ``a``, ``x``, ``X``.
    n : int
        Level.
    max_area : int
        Area bound.
    use_oracle : bool
        Skip the search when the word problem already shows ``word`` is not
        in the normal closure of :math:`\\mathcal{R}_{n-1}`.
    max_nodes : int
        Budget of expanded search nodes.

    Returns
    -------
    Diagram or NotFoundWithinBound

    Examples
    --------
    >>> area(fill("aa", 2, 4))
    1
    >>> fill("aXXaxxaXXaxx", 2, 20).found
    False
    """
    if use_oracle and not g1_is_identity(g1_from_word(word, n)):
        logger.debug(f"{word!r} is not trivial in G1({n}); no filling exists")
        return NotFoundWithinBound(word, n, max_area, "not in the normal closure")
    factors = fill_trace(word, n, max_area, max_nodes)
    if isinstance(factors, NotFoundWithinBound):
        return factors
    return _match_boundary(fold(diagram_from_conjugates(factors, n)), word)
