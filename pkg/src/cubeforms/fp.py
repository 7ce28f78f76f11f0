"""Arithmetic over F_p, alphabet sumsets, and the constants L(S, E) and beta(p, S).

Subsets of F_p are handled internally as ``p``-bit masks (bit ``v`` set iff
``v`` is a member); the public API speaks frozensets.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import InvalidInput


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise InvalidInput(f"modulus must be a prime, got {p!r}")
    return p


def _residues(p: int, values: Iterable[int], what: str) -> frozenset:
    out = set()
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            raise InvalidInput(f"{what} members must be integers, got {v!r}")
        if not 0 <= v < p:
            raise InvalidInput(f"{what} member {v} outside [0, {p})")
        out.add(v)
    return frozenset(out)


def to_mask(values: Iterable[int]) -> int:
    m = 0
    for v in values:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class Alphabet:
    p: int
    elements: frozenset

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "elements", _residues(self.p, self.elements, "alphabet"))
        if len(self.elements) < 2:
            raise InvalidInput("alphabet needs at least 2 elements")

    @classmethod
    def of(cls, p: int, elements: Iterable[int]) -> "Alphabet":
        return cls(p, frozenset(elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    @property
    def mask(self) -> int:
        return to_mask(self.elements)


@dataclass(frozen=True)
class TargetSet:
    p: int
    elements: frozenset

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "elements", _residues(self.p, self.elements, "target set"))
        if len(self.elements) >= self.p:
            raise InvalidInput("target set must be strict")

    @classmethod
    def of(cls, p: int, elements: Iterable[int]) -> "TargetSet":
        return cls(p, frozenset(elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __contains__(self, v):
        return v in self.elements

    @property
    def mask(self) -> int:
        return to_mask(self.elements)

    def shifted(self, y: int) -> "TargetSet":
        """The translate E - y."""
        return TargetSet(self.p, frozenset((e - y) % self.p for e in self.elements))


@dataclass(frozen=True)
class LWitness:
    """Value of L(S, E) together with a tuple of L - 1 nonzero coefficients
    whose sumset lands inside ``E - shift`` (``shift`` is 0 for the literal
    constant)."""

    L: int
    tuple: tuple = ()
    bound: int = 0
    shift: int = 0


def sumset(A: Iterable[int], B: Iterable[int], p: int) -> frozenset:
    A, B = frozenset(A), frozenset(B)
    if not A or not B:
        raise InvalidInput("sumset of an empty set")
    return frozenset((a + b) % p for a in A for b in B)


def _rotate(mask: int, s: int, p: int, full: int) -> int:
    s %= p
    return ((mask << s) | (mask >> (p - s))) & full


def _sum_masks(A: int, B: int, p: int) -> int:
    full = (1 << p) - 1
    out = 0
    b = 0
    while B:
        if B & 1:
            out |= _rotate(A, b, p, full)
        B >>= 1
        b += 1
    return out


def dilate(S: Iterable[int], a: int, p: int) -> frozenset:
    return frozenset(a * s % p for s in S)


def inequality_bound(s_size: int, e_size: int) -> int:
    """floor((|E| - 1) / (|S| - 1)) + 1, the Cauchy-Davenport cap on L."""
    return (e_size - 1) // (s_size - 1) + 1


def _fits_some_translate(A: int, E: int, p: int, full: int) -> int | None:
    for y in range(p):
        if _rotate(A, y, p, full) & ~E == 0:
            return y
    return None


def _search_L(S: Alphabet, E: TargetSet, translates: bool) -> LWitness:
    p = S.p
    if E.p != p:
        raise InvalidInput("alphabet and target set live over different primes")
    full = (1 << p) - 1
    Emask = E.mask
    dilates = [to_mask(dilate(S.elements, a, p)) for a in range(1, p)]
    bound = inequality_bound(len(S), len(E))

    def fit(A):
        if translates:
            return _fits_some_translate(A, Emask, p, full)
        return 0 if A & ~Emask == 0 else None

    # Level-order search over reachable sumsets.  Each level keeps its states
    # in discovery order, which is the lexicographic order of their smallest
    # coefficient tuple, so the first fitting state gives the smallest witness.
    # States with no translate inside E cannot have fitting descendants.
    level = {1: ()}
    L = 0
    while True:
        hit = None
        for A, path in level.items():
            y = fit(A)
            if y is not None:
                hit = (path, y)
                break
        if hit is None:
            break
        witness = hit
        nxt = {}
        for A, path in level.items():
            for a, D in enumerate(dilates, start=1):
                B = _sum_masks(A, D, p)
                if B not in nxt and _fits_some_translate(B, Emask, p, full) is not None:
                    nxt[B] = path + (a,)
        level = nxt
        L += 1
    if L > bound:
        raise AssertionError(f"L={L} exceeds the Cauchy-Davenport bound {bound}")
    if L == 0:
        return LWitness(0, (), bound, 0)
    return LWitness(L, witness[0], bound, witness[1])


def compute_L(S: Alphabet, E: TargetSet) -> LWitness:
    """Smallest L >= 0 such that every sumset a_1 S + ... + a_L S (a_i != 0)
    is not contained in E.  The empty sumset is {0}."""
    return _search_L(S, E, translates=False)


@lru_cache(maxsize=4096)
def _compute_L_translates_cached(S: Alphabet, E: TargetSet) -> LWitness:
    return _search_L(S, E, translates=True)


def compute_L_translates(S: Alphabet, E: TargetSet) -> LWitness:
    """Smallest L such that no sumset a_1 S + ... + a_L S fits inside any
    translate E - y.

    This is the constant the sunflower density bound actually needs: a
    condition phi(x) in E conditioned on a shared centre value y becomes
    phi(x) in E - y.  It is >= compute_L(S, E) and obeys the same
    Cauchy-Davenport cap.
    """
    return _compute_L_translates_cached(S, E)


def beta(p: int, S: Alphabet) -> Fraction:
    check_prime(p)
    s = len(S.elements) if isinstance(S, Alphabet) else len(set(S))
    if s < 2:
        raise InvalidInput("beta needs |S| >= 2")
    exponent = -(-(p - 1) // (s - 1))
    return Fraction(1, s ** exponent)


def char_mean_magnitude(S: Alphabet, t: int) -> float:
    """|E_{u in S} exp(2 pi i t u / p)|."""
    p = S.p
    t %= p
    if t == 0:
        return 1.0
    total = sum(cmath.exp(2j * math.pi * (t * u % p) / p) for u in S)
    return abs(total) / len(S)


def omega(p: int, v: int) -> complex:
    return cmath.exp(2j * math.pi * (v % p) / p)
