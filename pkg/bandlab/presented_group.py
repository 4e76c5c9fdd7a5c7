"""
Word problem for the finitely presented approximations
:math:`G_1(n) = \\langle a, x : \\mathcal{R}_{n-1} \\rangle` of the Lamplighter group.

Reading a word left to right with a running ``x``-exponent ``c``, every ``a``
becomes the involution :math:`a_c`. The kernel of :math:`G_1(n) \\to \\mathbb{Z}`
is then presented by the :math:`a_i` subject to :math:`a_i^2 = 1` and
:math:`[a_i, a_j] = 1` for :math:`1 \\le |i - j| \\le n - 1`, a right-angled
Coxeter group. Its elements are stored as lexicographically least reduced words
(partial-commutation normal form).

The infinite-dihedral retraction :func:`dinfty_image` is an independent
certificate of non-triviality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .group_core import LampElement

__all__ = [
    "TraceWord",
    "G1Element",
    "commutes",
    "normalize",
    "g1_from_word",
    "g1_mul",
    "g1_inv",
    "g1_is_identity",
    "dinfty_image",
    "dinfty_certificate",
    "g1_to_lamp",
]


def commutes(i: int, j: int, n: int) -> bool:
    """True if :math:`a_i` and :math:`a_j` are distinct commuting generators at level ``n``."""
    return i != j and abs(i - j) <= n - 1


def _reduce(indices, n: int) -> list[int]:
    # Append letters one at a time; a new letter cancels the last equal
    # letter that it can be commuted next to.
    out: list[int] = []
    for c in indices:
        pos = len(out) - 1
        while pos >= 0 and commutes(out[pos], c, n):
            pos -= 1
        if pos >= 0 and out[pos] == c:
            del out[pos]
        else:
            out.append(c)
    return out


def _lex_least(indices: list[int], n: int) -> tuple[int, ...]:
    remaining = list(indices)
    result = []
    while remaining:
        best_pos = None
        for pos, c in enumerate(remaining):
            if all(commutes(remaining[q], c, n) for q in range(pos)):
                if best_pos is None or c < remaining[best_pos]:
                    best_pos = pos
        result.append(remaining.pop(best_pos))
    return tuple(result)


def normalize(indices, n: int) -> tuple[int, ...]:
    """
    Normal form of a product of involutions :math:`a_{i_1} \\cdots a_{i_m}`.

    Examples
    --------
    >>> normalize([1, 0, 1], 2)
    (0,)
    >>> normalize([0, -2, 0, -2], 2)
    (0, -2, 0, -2)
    """
    if n < 1:
        raise ValueError(f"Level must be at least 1, got {n}")
    return _lex_least(_reduce(indices, n), n)


@dataclass(frozen=True)
class TraceWord:
    """Kernel element of :math:`G_1(n) \\to \\mathbb{Z}` in normal form."""

    gens: tuple[int, ...]
    level: int

    @classmethod
    def from_indices(cls, indices, level: int) -> "TraceWord":
        return cls(normalize(indices, level), level)

    def shifted(self, offset: int) -> "TraceWord":
        return TraceWord(tuple(i + offset for i in self.gens), self.level)

    def __len__(self) -> int:
        return len(self.gens)


@dataclass(frozen=True)
class G1Element:
    """
    Element of :math:`G_1(n)` written as ``kernel_part * x**shift``.

    Examples
    --------
    >>> g1_from_word("xxxxx", 2).to_dict()
    {'level': 2, 'shift': 5, 'kernel': []}
    """

    kernel_part: TraceWord
    shift: int
    level: int

    def __post_init__(self):
        if self.kernel_part.level != self.level:
            raise ValueError(
                f"Kernel level {self.kernel_part.level} does not match element level {self.level}"
            )

    def is_identity(self) -> bool:
        return not self.kernel_part.gens and self.shift == 0

    def __mul__(self, other: "G1Element") -> "G1Element":
        return g1_mul(self, other)

    def to_dict(self) -> dict:
        return {"level": self.level, "shift": self.shift, "kernel": list(self.kernel_part.gens)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "G1Element":
        level = int(data["level"])
        return cls(TraceWord.from_indices(data["kernel"], level), int(data["shift"]), level)

    @classmethod
    def from_json(cls, text: str) -> "G1Element":
        return cls.from_dict(json.loads(text))


def _emitted_indices(word: str) -> tuple[list[int], int]:
    indices = []
    c = 0
    for letter in word:
        if letter in "aA":
            indices.append(c)
        elif letter == "x":
            c += 1
        elif letter == "X":
            c -= 1
        else:
            raise ValueError(f"Letter {letter!r} is not in the alphabet of G1(n)")
    return indices, c


def g1_from_word(word: str, n: int) -> G1Element:
    """
    Image of a word in :math:`G_1(n)`.

    Parameters
    ----------
    word : str
        Word over ``a``, ``A``, ``x``, ``X``.
    n : int
        Level; the relators are :math:`\\mathcal{R}_{n-1}`.

    Examples
    --------
    >>> from bandlab.group_core import relator
    >>> g1_from_word(relator(1), 2).is_identity()
    True
    >>> g1_from_word(relator(2), 2).kernel_part.gens
    (0, -2, 0, -2)
    """
    indices, shift = _emitted_indices(word)
    return G1Element(TraceWord.from_indices(indices, n), shift, n)


def _check_level(p: G1Element, q: G1Element) -> None:
    if p.level != q.level:
        raise ValueError(f"Level mismatch: {p.level} != {q.level}")


def g1_mul(p: G1Element, q: G1Element) -> G1Element:
    """Product in :math:`G_1(n)`; ``q``'s kernel indices move by ``p.shift``."""
    _check_level(p, q)
    indices = p.kernel_part.gens + tuple(i + p.shift for i in q.kernel_part.gens)
    return G1Element(TraceWord.from_indices(indices, p.level), p.shift + q.shift, p.level)


def g1_inv(p: G1Element) -> G1Element:
    """Inverse in :math:`G_1(n)`."""
    indices = tuple(i - p.shift for i in reversed(p.kernel_part.gens))
    return G1Element(TraceWord.from_indices(indices, p.level), -p.shift, p.level)


def g1_is_identity(p: G1Element) -> bool:
    """
    True iff ``p`` is the identity; for ``p = g1_from_word(w, n)`` this decides
    whether ``w`` lies in the normal closure of :math:`\\mathcal{R}_{n-1}`.
    """
    return p.is_identity()


# ---------------- Infinite dihedral retraction ----------------
def _dihedral_mul(p: tuple[int, int], q: tuple[int, int]) -> tuple[int, int]:
    t, f = p
    t2, f2 = q
    return (t + (-t2 if f else t2), f ^ f2)


def dinfty_image(word: str, i: int, j: int, n: int) -> tuple[int, int]:
    """
    Image of ``word`` under the retraction onto
    :math:`D_\\infty = \\langle r_i, r_j : r_i^2, r_j^2 \\rangle` that kills
    every :math:`a_c` with :math:`c \\notin \\{i, j\\}`.

    Elements of :math:`D_\\infty` are pairs ``(translation, flip)`` with
    :math:`r_i = (0, 1)` and :math:`r_j = (1, 1)`. A result other than
    ``(0, 0)`` certifies that ``word`` is not trivial in :math:`G_1(n)`.

    Raises
    ------
    ValueError
        If ``|i - j| < n``; the retraction would not respect the relators.

    Examples
    --------
    >>> from bandlab.group_core import relator
    >>> dinfty_image(relator(2), 0, -2, 2)
    (-2, 0)
    >>> dinfty_image(relator(1), 0, -2, 2)
    (0, 0)
    """
    if abs(i - j) < n:
        raise ValueError(f"Retraction needs |i - j| >= n, got i={i}, j={j}, n={n}")
    r_i = (0, 1)
    r_j = (1, 1)
    image = (0, 0)
    indices, _ = _emitted_indices(word)
    for c in indices:
        if c == i:
            image = _dihedral_mul(image, r_i)
        elif c == j:
            image = _dihedral_mul(image, r_j)
    return image


def dinfty_certificate(word: str, n: int) -> tuple[int, int, tuple[int, int]] | None:
    """
    Search the index pairs occurring in ``word`` for a retraction with
    non-trivial image. Returns ``(i, j, image)`` or ``None``.
    """
    indices, _ = _emitted_indices(word)
    support = sorted(set(indices))
    for pos, i in enumerate(support):
        for j in support[pos + 1 :]:
            if j - i < n:
                continue
            image = dinfty_image(word, i, j, n)
            if image != (0, 0):
                return i, j, image
    return None


def g1_to_lamp(p: G1Element) -> LampElement:
    """
    Quotient map :math:`G_1(n) \\to L`: index ``i`` lights lamp ``i`` (mod 2).

    Examples
    --------
    >>> g1_to_lamp(g1_from_word("aXXaxxaXXaxx", 2)).is_identity()
    True
    """
    lamps: set[int] = set()
    for i in p.kernel_part.gens:
        lamps ^= {i}
    return LampElement(frozenset(lamps), p.shift)
