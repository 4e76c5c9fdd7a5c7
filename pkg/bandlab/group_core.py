"""
Exact arithmetic in the Lamplighter group :math:`L = \\mathbb{Z}_2 \\wr \\mathbb{Z}`.

Words are plain strings over the letters ``a``, ``x``, ``X`` (and ``t``, ``T``
for the extended group), uppercase denoting the inverse. The letter ``A``
(:math:`a^{-1}`) is accepted everywhere; :func:`parse_word` maps it to ``a``
because :math:`a^2 = 1` in every group handled by this package. Internally the
filling search keeps ``A`` as a separate letter so that free cancellation of
:math:`a a^{-1}` stays distinguishable from the relator :math:`a^2`.

An element of :math:`L` is a finite set of lit lamps together with the walker
position. Words are evaluated left to right: ``a`` toggles the lamp under the
walker, ``x`` moves it one step right and ``X`` one step left.

- eval_word: the quotient map from words onto :math:`L`.
- lamp_mul / lamp_inv: semidirect-product multiplication and inversion.
- relator / relator_set: the commutator relators and the finite families
  :math:`\\mathcal{R}_{n-1}`.
- normal_word: a canonical word for each element.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass

# Letters understood by the package; uppercase is the inverse.
GROUP_LETTERS = frozenset("aAxXtT")
LAMP_LETTERS = frozenset("aAxX")

_INVERSE = {"a": "A", "A": "a", "x": "X", "X": "x", "t": "T", "T": "t"}


# ---------------- Words ----------------
def parse_word(text: str, alphabet: frozenset[str] = GROUP_LETTERS) -> str:
    """
    Parse a word in the single-character syntax and return its canonical form.

    Whitespace and the separators ``.``, ``*`` and ``·`` are ignored, and
    ``A`` is replaced by ``a``.

    Parameters
    ----------
    text : str
        Word such as ``"aXaxaXax"`` or ``"a X a x"``.
    alphabet : frozenset of str
        Allowed letters (before canonicalisation).

    Returns
    -------
    str
        Canonical word.

    Raises
    ------
    ValueError
        If a character is outside ``alphabet``.

    Examples
    --------
    >>> parse_word("A x . X a")
    'axXa'
    """
    letters = []
    for char in text:
        if char.isspace() or char in ".*·":
            continue
        if char not in alphabet:
            raise ValueError(f"Letter {char!r} is not in the alphabet {sorted(alphabet)}")
        letters.append(char)
    return canonical("".join(letters))


def canonical(word: str) -> str:
    """Replace every ``A`` by ``a``."""
    return word.replace("A", "a")


def word_inverse(word: str) -> str:
    """
    Formal inverse of a word (reverse it and invert every letter).

    The result may contain ``A``; pass it through :func:`canonical` for the
    stored form.

    Examples
    --------
    >>> word_inverse("axX")
    'xXA'
    """
    return "".join(_INVERSE[letter] for letter in reversed(word))


def letter_inverse(letter: str) -> str:
    return _INVERSE[letter]


def free_reduce(word: str) -> str:
    """
    Cancel adjacent inverse pairs until none is left.

    Only the pairs ``xX``, ``Xx``, ``tT``, ``Tt``, ``aA`` and ``Aa`` cancel;
    ``aa`` is kept, it is the relator :math:`a^2`, not a backtrack.

    Examples
    --------
    >>> free_reduce("axXXxa")
    'aa'
    >>> free_reduce("aA")
    ''
    """
    stack: list[str] = []
    for letter in word:
        if stack and stack[-1] == _INVERSE[letter]:
            stack.pop()
        else:
            stack.append(letter)
    return "".join(stack)


def cyclic_rotations(word: str) -> list[str]:
    """All cyclic rotations of ``word``, starting with the word itself."""
    return [word[i:] + word[:i] for i in range(len(word))] or [word]


_POWER = re.compile(r"\(([^()^]*)\)\^(-?\d+)|([aAxXtT])\^(-?\d+)")


def _expand_match(match: re.Match) -> str:
    if match.group(1) is not None:
        body, power = match.group(1), int(match.group(2))
    else:
        body, power = match.group(3), int(match.group(4))
    if any(letter not in _INVERSE for letter in body):
        raise ValueError(f"Cannot take a power of {body!r}")
    if power < 0:
        body, power = word_inverse(body), -power
    return body * power


def expand_powers(text: str) -> str:
    """
    Expand ``letter^n`` and ``(word)^n``; negative powers invert.

    Examples
    --------
    >>> expand_powers("a X^2 a x^2")
    'aXXaxx'
    >>> expand_powers("(aX)^-2")
    'xAxA'
    """
    text = "".join(char for char in text if not (char.isspace() or char in ".*·"))
    previous = None
    while previous != text:
        previous = text
        text = _POWER.sub(_expand_match, text)
    if any(char in text for char in "()^"):
        raise ValueError(f"Malformed power expression {text!r}")
    return text


def format_word(word: str) -> str:
    """
    Compress runs of equal letters into powers.

    Examples
    --------
    >>> format_word("aXXaxx")
    'a X^2 a x^2'
    >>> format_word("")
    '1'
    """
    if not word:
        return "1"
    parts = []
    for letter, run in itertools.groupby(word):
        count = len(list(run))
        parts.append(letter if count == 1 else f"{letter}^{count}")
    return " ".join(parts)


def x_exponent_sum(word: str) -> int:
    """
    Image of a word under the homomorphism onto :math:`\\mathbb{Z}` that kills
    the normal closure of ``a``.

    Examples
    --------
    >>> x_exponent_sum("aXXa")
    -2
    """
    return word.count("x") - word.count("X")


def t_exponent_sum(word: str) -> int:
    return word.count("t") - word.count("T")


def relator(k: int) -> str:
    """
    The relator :math:`a x^{-k} a x^k a x^{-k} a x^k`, i.e. the commutator
    :math:`[a, x^{-k} a x^k]` written with involutions. ``relator(0)`` is ``"aa"``.

    Parameters
    ----------
    k : int
        Relator index, ``k >= 0``.

    Returns
    -------
    str
        Word of length ``4k + 4`` (``2`` for ``k = 0``).

    Examples
    --------
    >>> relator(1)
    'aXaxaXax'
    >>> relator(0)
    'aa'
    """
    if k < 0:
        raise ValueError(f"Relator index must be non-negative, got {k}")
    if k == 0:
        return "aa"
    half = "a" + "X" * k + "a" + "x" * k
    return half + half


def relator_conjugated(k: int) -> str:
    """
    The relator conjugated by :math:`x^{-k}`, i.e. :math:`[a, x^k a x^{-k}]`.

    Examples
    --------
    >>> relator_conjugated(2)
    'axxaXXaxxaXX'
    """
    if k < 0:
        raise ValueError(f"Relator index must be non-negative, got {k}")
    if k == 0:
        return "aa"
    half = "a" + "x" * k + "a" + "X" * k
    return half + half


def relator_set(n: int) -> tuple[str, ...]:
    """
    The relator family :math:`\\mathcal{R}_{n-1} = \\{a^2, \\mathrm{relator}(1),
    \\ldots, \\mathrm{relator}(n-1)\\}` presenting :math:`G_1(n)`.
    """
    if n < 1:
        raise ValueError(f"Level must be at least 1, got {n}")
    return tuple(relator(k) for k in range(n))


def relator_index(word: str) -> int | None:
    """
    Index ``k`` such that ``word`` is a cyclic rotation of ``relator(k)`` or of
    its inverse (compared in canonical form), ``None`` otherwise.
    """
    word = canonical(word)
    if word == "aa":
        return 0
    if len(word) < 8 or (len(word) - 4) % 4:
        return None
    k = (len(word) - 4) // 4
    doubled = word + word
    for candidate in (relator(k), canonical(word_inverse(relator(k)))):
        if candidate in doubled:
            return k
    return None


# ---------------- Lamplighter elements ----------------
@dataclass(frozen=True)
class LampElement:
    """
    Element of :math:`L` as (lit lamps, walker shift).

    Examples
    --------
    >>> LampElement.from_text("lamps=[1,0];shift=-1")
    LampElement(lamps=frozenset({0, 1}), shift=-1)
    """

    lamps: frozenset[int] = frozenset()
    shift: int = 0

    def __post_init__(self):
        if not isinstance(self.lamps, frozenset):
            object.__setattr__(self, "lamps", frozenset(self.lamps))

    def is_identity(self) -> bool:
        return not self.lamps and self.shift == 0

    def sort_key(self) -> tuple:
        return (self.shift, tuple(sorted(self.lamps)))

    def __mul__(self, other: "LampElement") -> "LampElement":
        return lamp_mul(self, other)

    # --- codecs ---
    def to_text(self) -> str:
        return f"lamps=[{','.join(str(i) for i in sorted(self.lamps))}];shift={self.shift}"

    @classmethod
    def from_text(cls, text: str) -> "LampElement":
        try:
            lamps_part, shift_part = text.strip().split(";")
            key, body = lamps_part.split("=", 1)
            skey, svalue = shift_part.split("=", 1)
            if key.strip() != "lamps" or skey.strip() != "shift":
                raise ValueError
            body = body.strip().strip("[]")
            lamps = [int(item) for item in body.split(",") if item.strip()]
            shift = int(svalue)
        except ValueError as err:
            raise ValueError(f"Malformed lamp element {text!r}") from err
        if len(set(lamps)) != len(lamps):
            raise ValueError(f"Duplicate lamps in {text!r}")
        return cls(frozenset(lamps), shift)

    def to_dict(self) -> dict:
        return {"lamps": sorted(self.lamps), "shift": self.shift}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "LampElement":
        lamps = [int(i) for i in data["lamps"]]
        if len(set(lamps)) != len(lamps):
            raise ValueError(f"Duplicate lamps in {data!r}")
        return cls(frozenset(lamps), int(data["shift"]))

    @classmethod
    def from_json(cls, text: str) -> "LampElement":
        return cls.from_dict(json.loads(text))


IDENTITY = LampElement()
A_ELEMENT = LampElement(frozenset({0}), 0)
X_ELEMENT = LampElement(frozenset(), 1)


def lamp_mul(p: LampElement, q: LampElement) -> LampElement:
    """
    Product :math:`p \\cdot q`: ``q``'s lamps are read relative to ``p``'s walker.

    Examples
    --------
    >>> lamp_mul(A_ELEMENT, X_ELEMENT).to_text()
    'lamps=[0];shift=1'
    """
    return LampElement(p.lamps ^ frozenset(i + p.shift for i in q.lamps), p.shift + q.shift)


def lamp_inv(p: LampElement) -> LampElement:
    """
    Inverse element.

    Examples
    --------
    >>> lamp_inv(LampElement(frozenset({1}), 1)).to_text()
    'lamps=[0];shift=-1'
    """
    return LampElement(frozenset(i - p.shift for i in p.lamps), -p.shift)


def step(p: LampElement, letter: str) -> LampElement:
    """Right-multiply ``p`` by a single generator."""
    if letter in "aA":
        return LampElement(p.lamps ^ {p.shift}, p.shift)
    if letter == "x":
        return LampElement(p.lamps, p.shift + 1)
    if letter == "X":
        return LampElement(p.lamps, p.shift - 1)
    raise ValueError(f"Letter {letter!r} does not act on the Lamplighter group")


def eval_word(word: str, start: LampElement = IDENTITY) -> LampElement:
    """
    Evaluate a word in :math:`L` by running the walker.

    Parameters
    ----------
    word : str
        Word over ``a``, ``A``, ``x``, ``X``.
    start : LampElement
        Starting vertex; the result is ``start * eval_word(word)``.

    Examples
    --------
    >>> eval_word("a").to_text()
    'lamps=[0];shift=0'
    >>> eval_word("Xax").to_text()
    'lamps=[-1];shift=0'
    >>> eval_word(relator(3)).is_identity()
    True
    """
    lamps = set(start.lamps)
    pos = start.shift
    for letter in word:
        if letter in "aA":
            lamps ^= {pos}
        elif letter == "x":
            pos += 1
        elif letter == "X":
            pos -= 1
        else:
            raise ValueError(f"Letter {letter!r} does not act on the Lamplighter group")
    return LampElement(frozenset(lamps), pos)


def path_vertices(word: str, start: LampElement = IDENTITY) -> list[LampElement]:
    """Vertices visited by the edge path labelled ``word``, endpoints included."""
    vertices = [start]
    for letter in word:
        vertices.append(step(vertices[-1], letter))
    return vertices


def normal_word(p: LampElement) -> str:
    """
    Canonical word for ``p``: visit the lit lamps in increasing order, toggle
    each, then walk to the final position.

    Examples
    --------
    >>> normal_word(LampElement(frozenset({0, 1}), 0))
    'axaX'
    >>> normal_word(LampElement(frozenset(), -2))
    'XX'
    """
    letters = []
    pos = 0
    for lamp in sorted(p.lamps):
        letters.append(_walk(lamp - pos))
        letters.append("a")
        pos = lamp
    letters.append(_walk(p.shift - pos))
    return "".join(letters)


def _walk(delta: int) -> str:
    return "x" * delta if delta >= 0 else "X" * (-delta)


def lamp_distance_lower_bound(p: LampElement) -> int:
    """
    Cheap lower bound on the word length of ``p``: every lamp needs an ``a``
    and the walker must cover ``|shift|``.
    """
    return max(abs(p.shift), len(p.lamps))
