"""The mod-2 Steenrod algebra in its admissible-monomial basis.

A monomial Sq^{i_1}...Sq^{i_k} is a tuple of positive ints; it is
admissible when i_j >= 2 i_{j+1} for all j.  Arbitrary words straighten
to sums of admissible monomials through the Adem relations

    Sq^a Sq^b = sum_c  C(b-c-1, a-2c) Sq^{a+b-c} Sq^c      (a < 2b),

with binomial coefficients mod 2 evaluated by Lucas' theorem.  Sums are
carried by :class:`SqSum`, a canonically ordered GF(2) linear
combination of admissible monomials of one degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ContractViolationError

SqMonomial = tuple  # tuple[int, ...]; the empty tuple is the unit


def choose_mod2(m: int, n: int) -> int:
    """C(m, n) mod 2; zero outside 0 <= n <= m (Lucas: n AND (m-n) == 0)."""
    if n < 0 or m < 0 or n > m:
        return 0
    return 0 if (n & (m - n)) else 1


def degree(mon: Sequence[int]) -> int:
    return sum(mon)


def is_admissible(mon: Sequence[int]) -> bool:
    return all(mon[j] >= 2 * mon[j + 1] for j in range(len(mon) - 1))


@dataclass(frozen=True)
class SqSum:
    """A GF(2) sum of admissible monomials, all of one degree.

    ``terms`` is sorted descending, which makes equality and string form
    canonical.  The zero sum is ``SqSum(())`` with degree ``None``.
    """

    terms: tuple[SqMonomial, ...]

    def __post_init__(self):
        if list(self.terms) != sorted(set(self.terms), reverse=True):
            raise ContractViolationError("SqSum terms must be distinct and sorted")
        for t in self.terms:
            if not is_admissible(t):
                raise ContractViolationError(f"inadmissible monomial {t} in SqSum")
        if len({degree(t) for t in self.terms}) > 1:
            raise ContractViolationError("SqSum mixes degrees")

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero() -> "SqSum":
        return SqSum(())

    @staticmethod
    def unit() -> "SqSum":
        return SqSum(((),))

    @staticmethod
    def of(*word: int) -> "SqSum":
        """Sq^{word[0]} ... Sq^{word[-1]}, straightened."""
        return adem_reduce(word)

    @staticmethod
    def from_terms(terms: Iterable[SqMonomial]) -> "SqSum":
        acc: set[SqMonomial] = set()
        for t in terms:
            acc.symmetric_difference_update({tuple(t)})
        return SqSum(tuple(sorted(acc, reverse=True)))

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        return degree(self.terms[0]) if self.terms else None

    def __add__(self, other: "SqSum") -> "SqSum":
        return SqSum.from_terms(self.terms + other.terms)

    def __mul__(self, other: "SqSum") -> "SqSum":
        return product(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        def mono(m):
            return "1" if m == () else "".join(f"Sq{i}" for i in m)
        return " + ".join(mono(m) for m in self.terms)


def Sq(i: int) -> SqSum:
    """The generator Sq^i (Sq^0 is the unit)."""
    if i < 0:
        raise ContractViolationError("Sq index must be non-negative")
    return SqSum.unit() if i == 0 else SqSum(((i,),))


@lru_cache(maxsize=None)
def _adem_pair(a: int, b: int) -> frozenset:
    """Straighten Sq^a Sq^b with a < 2b into admissible monomials."""
    out = set()
    for c in range(a // 2 + 1):
        if choose_mod2(b - c - 1, a - 2 * c):
            mon = (a + b - c, c) if c > 0 else (a + b - c,)
            out.symmetric_difference_update({mon})
    return frozenset(out)


@lru_cache(maxsize=None)
def _left_mul(i: int, mon: SqMonomial) -> frozenset:
    """Admissible expansion of Sq^i * mon for admissible mon, i >= 1."""
    if mon == ():
        return frozenset({(i,)})
    if i >= 2 * mon[0]:
        return frozenset({(i,) + mon})
    acc: set[SqMonomial] = set()
    for head in _adem_pair(i, mon[0]):
        # head is (a+b-c,) or (a+b-c, c); re-multiply its letters onto the
        # admissible tail from the right so every step stays memoised.
        partial = frozenset({mon[1:]})
        for letter in reversed(head):
            nxt: set[SqMonomial] = set()
            for t in partial:
                nxt.symmetric_difference_update(_left_mul(letter, t))
            partial = frozenset(nxt)
        acc.symmetric_difference_update(partial)
    return frozenset(acc)


def adem_reduce(word: Sequence[int]) -> SqSum:
    """Admissible-basis expansion of Sq^{word[0]}...Sq^{word[-1]}."""
    if any(i <= 0 for i in word):
        raise ContractViolationError("word entries must be positive")
    acc: frozenset = frozenset({()})
    for letter in reversed(tuple(word)):
        nxt: set[SqMonomial] = set()
        for t in acc:
            nxt.symmetric_difference_update(_left_mul(letter, t))
        acc = frozenset(nxt)
    return SqSum(tuple(sorted(acc, reverse=True)))


def product(a: SqSum, b: SqSum) -> SqSum:
    """Concatenate-and-reduce product, bilinear over GF(2)."""
    acc: set[SqMonomial] = set()
    for ma in a.terms:
        for mb in b.terms:
            acc.symmetric_difference_update(monomial_product(ma, mb).terms)
    return SqSum(tuple(sorted(acc, reverse=True)))


@lru_cache(maxsize=None)
def monomial_product(ma: SqMonomial, mb: SqMonomial) -> SqSum:
    acc: frozenset = frozenset({mb})
    for letter in reversed(ma):
        nxt: set[SqMonomial] = set()
        for t in acc:
            nxt.symmetric_difference_update(_left_mul(letter, t))
        acc = frozenset(nxt)
    return SqSum(tuple(sorted(acc, reverse=True)))


@lru_cache(maxsize=None)
def basis(deg: int) -> tuple[SqMonomial, ...]:
    """All admissible monomials of the given degree, lexicographically."""
    if deg < 0:
        return ()
    if deg == 0:
        return ((),)

    def gen(remaining: int, max_first: int):
        # Sequences (i_1, ..., i_k), i_1 <= max_first, i_j >= 2 i_{j+1}.
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, max_first), 0, -1):
            for tail in gen(remaining - first, first // 2):
                yield (first,) + tail

    return tuple(sorted(gen(deg, deg)))


def basis_dim(deg: int) -> int:
    return len(basis(deg))
