"""Character sums over S^N and the equidistribution inequality for r-separated
families.

Normalisation: F(a) = omega^{-a.y} * prod_z E_{s in S} omega^{c_z(a) s}, where
c(a) = sum a_i phi_i.  Then P(phi = y) = E_{a in F_p^k} F(a) exactly, F(0) = 1,
and the a = 0 term contributes p^{-k} to the average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .density import joint_distribution
from .errors import InvalidInput
from .forms import DEFAULT_ENUMERATION_CAP, LinearForm, combine, separation
from .fp import Alphabet, omega

TOLERANCE = 1e-9


@dataclass(frozen=True)
class FourierCoefficient:
    a: tuple
    value: complex
    magnitude_bound: float


def _check(forms, vec, what):
    if len(vec) != len(forms):
        raise InvalidInput(f"{what} has length {len(vec)}, expected {len(forms)}")


def _coordinate_factor(c: int, S: Alphabet) -> complex:
    p = S.p
    return sum(omega(p, c * s) for s in S) / len(S)


def fourier_coefficient(forms: Sequence[LinearForm], y: Sequence[int], a: Sequence[int], S: Alphabet) -> complex:
    forms = list(forms)
    _check(forms, y, "value vector")
    _check(forms, a, "coefficient vector")
    p = S.p
    if not forms:
        return 1 + 0j
    value = omega(p, -sum(ai * yi for ai, yi in zip(a, y)))
    for _, c in combine(a, forms).terms:
        value *= _coordinate_factor(c, S)
    return value


def coefficient(forms, y, a, S) -> FourierCoefficient:
    value = fourier_coefficient(forms, y, a, S)
    bound = 1.0 if not any(x % S.p for x in a) else bias_bound(forms, a)
    return FourierCoefficient(tuple(a), value, bound)


def bias_bound(forms: Sequence[LinearForm], a: Sequence[int]) -> float:
    """(1 - p^-2)^{|Z(sum a_i phi_i)|}."""
    forms = list(forms)
    _check(forms, a, "coefficient vector")
    if not forms:
        raise InvalidInput("bias bound of an empty family")
    p = forms[0].p
    if not any(x % p for x in a):
        raise InvalidInput("bias bound is for nonzero coefficient vectors")
    return (1 - p ** -2) ** len(combine(a, forms))


def fourier_average(forms: Sequence[LinearForm], y: Sequence[int], S: Alphabet) -> complex:
    """E_{a in F_p^k} F(a), summed with fsum for an order-independent result."""
    forms = list(forms)
    p = S.p
    values = [fourier_coefficient(forms, y, a, S) for a in product(range(p), repeat=len(forms))]
    n = len(values)
    return complex(math.fsum(v.real for v in values) / n, math.fsum(v.imag for v in values) / n)


@dataclass(frozen=True)
class EquidistributionReport:
    exact_prob: Fraction
    deviation: Fraction
    bound: float
    separation: int
    holds: bool


def equidistribution_check(forms: Sequence[LinearForm], y: Sequence[int], S: Alphabet,
                           budget: int | None = None,
                           enumeration_cap: int = DEFAULT_ENUMERATION_CAP) -> EquidistributionReport:
    """Compare |P(phi = y) - p^-k| with (1 - p^-2)^r, r the exact separation."""
    forms = list(forms)
    _check(forms, y, "value vector")
    if not forms:
        raise InvalidInput("equidistribution check needs at least one form")
    p = S.p
    k = len(forms)
    r = separation(forms, enumeration_cap)
    prob = joint_distribution(forms, budget, S=S).prob(tuple(v % p for v in y))
    deviation = abs(prob - Fraction(1, p ** k))
    exact_bound = Fraction(p * p - 1, p * p) ** r
    return EquidistributionReport(prob, deviation, float(exact_bound), r, deviation <= exact_bound)
