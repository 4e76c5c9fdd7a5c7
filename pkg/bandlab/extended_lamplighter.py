"""
Exact arithmetic in the Extended Lamplighter group
:math:`E = \\langle x, a, t : a^2, [x, t], t^{-1} a t = x^{-1} a x a \\rangle`.

:math:`E` is the ascending HNN extension of :math:`L` along the monomorphism
:math:`x \\mapsto x, a \\mapsto x^{-1} a x a`. Its normal closure of ``a`` is the
additive group of :math:`R = \\mathbb{F}_2[x^{\\pm 1}, (1+x)^{-1}]` and
:math:`E = R \\rtimes \\mathbb{Z}^2`.

An element is stored as :math:`x^m t^q \\cdot \\nu` with
:math:`\\nu = f / (1+x)^d` in lowest terms. Moving :math:`\\nu` to the right past
``x`` multiplies it by ``x``, past ``t`` by ``(1+x)``. Under this dictionary the
lamp at position ``i`` of :math:`L` is the monomial :math:`x^{-i}`.

Laurent polynomials over :math:`\\mathbb{F}_2` are bit masks: bit ``j`` of
``bits`` is the coefficient of :math:`x^{low + j}`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .group_core import LampElement, canonical, parse_word

E_LETTERS = frozenset("aAxXtT")


@dataclass(frozen=True)
class LaurentF2:
    """
    Laurent polynomial over :math:`\\mathbb{F}_2`; ``bits`` is zero or odd.

    Examples
    --------
    >>> LaurentF2.from_support([3, -1]).support
    (-1, 3)
    """

    low: int = 0
    bits: int = 0

    @classmethod
    def make(cls, low: int, bits: int) -> "LaurentF2":
        if bits == 0:
            return cls(0, 0)
        trailing = (bits & -bits).bit_length() - 1
        return cls(low + trailing, bits >> trailing)

    @classmethod
    def from_support(cls, exponents) -> "LaurentF2":
        out = cls()
        for e in exponents:
            out = out + cls(e, 1)
        return out

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.low + j for j in range(self.bits.bit_length()) if self.bits >> j & 1)

    def is_zero(self) -> bool:
        return self.bits == 0

    def terms(self) -> int:
        return self.bits.bit_count()

    def __add__(self, other: "LaurentF2") -> "LaurentF2":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        low = min(self.low, other.low)
        return LaurentF2.make(
            low, (self.bits << (self.low - low)) ^ (other.bits << (other.low - low))
        )

    def shift(self, e: int) -> "LaurentF2":
        """Multiply by :math:`x^e`."""
        return self if self.is_zero() else LaurentF2(self.low + e, self.bits)

    def times_one_plus_x(self) -> "LaurentF2":
        return LaurentF2.make(self.low, self.bits ^ (self.bits << 1))

    def divisible_by_one_plus_x(self) -> bool:
        """A polynomial over :math:`\\mathbb{F}_2` vanishes at 1 iff it has an even number of terms."""
        return self.terms() % 2 == 0

    def div_one_plus_x(self) -> "LaurentF2":
        if not self.divisible_by_one_plus_x():
            raise ValueError(f"{self.to_text()} is not divisible by 1+x")
        quotient, parity = 0, 0
        for j in range(self.bits.bit_length() - 1):
            parity ^= self.bits >> j & 1
            quotient |= parity << j
        return LaurentF2.make(self.low, quotient)

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join("1" if e == 0 else f"x^{e}" for e in self.support)


ZERO = LaurentF2()
ONE = LaurentF2(0, 1)


def _lowest_terms(num: LaurentF2, d: int) -> tuple[LaurentF2, int]:
    if num.is_zero():
        return ZERO, 0
    while d > 0 and num.divisible_by_one_plus_x():
        num = num.div_one_plus_x()
        d -= 1
    return num, d


def _scale(num: LaurentF2, d: int, m: int, q: int) -> tuple[LaurentF2, int]:
    """Multiply :math:`f / (1+x)^d` by :math:`x^m (1+x)^q`."""
    num = num.shift(m)
    if q >= 0:
        for _ in range(q):
            num = num.times_one_plus_x()
    else:
        d -= q
    return _lowest_terms(num, d)


def _add(a: tuple[LaurentF2, int], b: tuple[LaurentF2, int]) -> tuple[LaurentF2, int]:
    (fa, da), (fb, db) = a, b
    top = max(da, db)
    for _ in range(top - da):
        fa = fa.times_one_plus_x()
    for _ in range(top - db):
        fb = fb.times_one_plus_x()
    return _lowest_terms(fa + fb, top)


@dataclass(frozen=True)
class EElement:
    """
    :math:`x^m t^q \\cdot f / (1+x)^d`, always in lowest terms.

    Examples
    --------
    >>> e_from_word("TatXaxa").is_identity()
    True
    """

    num: LaurentF2 = ZERO
    denpow: int = 0
    m: int = 0
    q: int = 0

    def __post_init__(self):
        if self.denpow < 0:
            raise ValueError(f"denpow must be non-negative, got {self.denpow}")
        if self.num.is_zero() and self.denpow:
            raise ValueError("zero numerator must have denpow 0")
        if self.denpow and self.num.divisible_by_one_plus_x():
            raise ValueError("fraction is not in lowest terms")

    def is_identity(self) -> bool:
        return self.num.is_zero() and self.m == 0 and self.q == 0

    def __mul__(self, other: "EElement") -> "EElement":
        return e_mul(self, other)

    def to_text(self) -> str:
        nu = self.num.to_text()
        if self.denpow:
            nu = f"({nu}) / (1 + x)^{self.denpow}"
        return f"x^{self.m} t^{self.q} * [{nu}]"

    def to_dict(self) -> dict:
        return {"num": list(self.num.support), "denpow": self.denpow, "m": self.m, "q": self.q}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "EElement":
        exponents = [int(e) for e in data["num"]]
        if len(set(exponents)) != len(exponents):
            raise ValueError(f"Duplicate exponents in {data!r}")
        num, d = _lowest_terms(LaurentF2.from_support(exponents), int(data["denpow"]))
        return cls(num, d, int(data["m"]), int(data["q"]))

    @classmethod
    def from_json(cls, text: str) -> "EElement":
        return cls.from_dict(json.loads(text))


E_IDENTITY = EElement()


def e_mul(p: EElement, r: EElement) -> EElement:
    """
    Product in :math:`E`: :math:`\\nu_p` is carried past :math:`x^{m_r} t^{q_r}`.

    Examples
    --------
    >>> a, t = e_from_word("a"), e_from_word("t")
    >>> e_mul(e_mul(e_inv(t), a), t).to_text()
    'x^0 t^0 * [1 + x^1]'
    """
    num, d = _scale(p.num, p.denpow, r.m, r.q)
    num, d = _add((num, d), (r.num, r.denpow))
    return EElement(num, d, p.m + r.m, p.q + r.q)


def e_inv(p: EElement) -> EElement:
    """Inverse; :math:`\\nu` is carried past :math:`x^{-m} t^{-q}`."""
    num, d = _scale(p.num, p.denpow, -p.m, -p.q)
    return EElement(num, d, -p.m, -p.q)


def _generator(letter: str) -> EElement:
    if letter in "aA":
        return EElement(ONE, 0, 0, 0)
    if letter in "xX":
        return EElement(ZERO, 0, 1 if letter == "x" else -1, 0)
    if letter in "tT":
        return EElement(ZERO, 0, 0, 1 if letter == "t" else -1)
    raise ValueError(f"Letter {letter!r} is not in the alphabet of E")


def e_from_word(word: str) -> EElement:
    """
    Evaluate a word over ``a``, ``x``, ``X``, ``t``, ``T`` in :math:`E`.

    Examples
    --------
    >>> e_from_word("aa").is_identity(), e_from_word("xtXT").is_identity()
    (True, True)
    """
    out = E_IDENTITY
    for letter in parse_word(word, E_LETTERS):
        out = e_mul(out, _generator(letter))
    return out


def commutator_square(u: EElement, v: EElement) -> EElement:
    """:math:`(u v u^{-1} v^{-1})^2`, the identity for all ``u``, ``v``."""
    c = e_mul(e_mul(u, v), e_mul(e_inv(u), e_inv(v)))
    return e_mul(c, c)


def abelian_image(p: EElement) -> tuple[int, int]:
    """Image in :math:`\\mathbb{Z}^2` under :math:`x \\mapsto (1, 0)`, :math:`t \\mapsto (0, 1)`."""
    return p.m, p.q


# ---------------- The Lamplighter subgroup ----------------
def lamp_to_laurent(p: LampElement) -> LaurentF2:
    """Lamp configuration of ``p``; lamp ``i`` becomes :math:`x^{-i}`."""
    return LaurentF2.from_support(-i for i in p.lamps)


def lamp_to_e(p: LampElement) -> EElement:
    """
    Image of ``p`` in :math:`E`; agrees with ``e_from_word`` on ``t``-free words.

    Lamps times :math:`x^s` equals :math:`x^s` times the lamps conjugated by
    :math:`x^s`, which multiplies their polynomial by :math:`x^s`.
    """
    return EElement(lamp_to_laurent(p).shift(p.shift), 0, p.shift, 0)


def monomorphism_image(word: str) -> str:
    """
    Image of a word in ``a``, ``x`` under :math:`x \\mapsto x`,
    :math:`a \\mapsto x^{-1} a x a`; conjugation by ``t`` realizes it in :math:`E`.

    Examples
    --------
    >>> monomorphism_image("axa")
    'XaxaxXaxa'
    """
    out = []
    for letter in canonical(word):
        if letter == "a":
            out.append("Xaxa")
        elif letter in "xX":
            out.append(letter)
        else:
            raise ValueError(f"Letter {letter!r} is not in the alphabet of L")
    return "".join(out)
