"""Sparse mod-p linear forms, condition systems, and separation checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._backend import kernels
from .errors import EnumerationTooLarge, InvalidInput
from .fp import Alphabet, TargetSet, check_prime, compute_L, compute_L_translates

DEFAULT_ENUMERATION_CAP = 2_000_000


@dataclass(frozen=True)
class LinearForm:
    """phi(x) = sum of coeff * x_index over the stored terms.

    ``terms`` is sorted by coordinate and never holds a zero coefficient;
    coordinates are unbounded nonnegative integers.
    """

    p: int
    terms: tuple = ()

    def __post_init__(self):
        check_prime(self.p)
        clean = {}
        for z, c in self.terms:
            if isinstance(z, bool) or not isinstance(z, int) or z < 0:
                raise InvalidInput(f"coordinate index must be a nonnegative integer, got {z!r}")
            clean[z] = (clean.get(z, 0) + c) % self.p
        object.__setattr__(
            self, "terms", tuple(sorted((z, c) for z, c in clean.items() if c))
        )

    @classmethod
    def from_dict(cls, p: int, coeffs: Mapping[int, int]) -> "LinearForm":
        return cls(p, tuple(coeffs.items()))

    @classmethod
    def zero(cls, p: int) -> "LinearForm":
        return cls(p, ())

    @classmethod
    def var(cls, p: int, z: int, c: int = 1) -> "LinearForm":
        return cls(p, ((z, c),))

    @classmethod
    def block(cls, p: int, coords: Iterable[int], coeffs: Iterable[int] | None = None) -> "LinearForm":
        coords = list(coords)
        coeffs = [1] * len(coords) if coeffs is None else list(coeffs)
        return cls(p, tuple(zip(coords, coeffs)))

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def support(self) -> frozenset:
        return frozenset(z for z, _ in self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        if other.p != self.p:
            raise InvalidInput("forms over different primes")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return LinearForm(self.p, self.terms + other.terms)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return LinearForm(self.p, tuple((z, -c) for z, c in self.terms))

    def scale(self, a: int) -> "LinearForm":
        return LinearForm(self.p, tuple((z, a * c) for z, c in self.terms))

    def __rmul__(self, a):
        if isinstance(a, int):
            return self.scale(a)
        return NotImplemented

    def __call__(self, x) -> int:
        """Evaluate on a point given as a mapping or sequence indexed by coordinate."""
        if isinstance(x, Mapping):
            return sum(c * x.get(z, 0) for z, c in self.terms) % self.p
        return sum(c * x[z] for z, c in self.terms) % self.p

    def restrict(self, fixed: Mapping[int, int]) -> tuple["LinearForm", int]:
        """Substitute fixed coordinate values; returns (remaining form, constant)."""
        const = sum(c * fixed[z] for z, c in self.terms if z in fixed) % self.p
        rest = LinearForm(self.p, tuple((z, c) for z, c in self.terms if z not in fixed))
        return rest, const

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"x{z}" if c == 1 else f"{c}*x{z}" for z, c in self.terms)


@dataclass(frozen=True)
class Condition:
    form: LinearForm
    target: TargetSet

    def __post_init__(self):
        if self.form.p != self.target.p:
            raise InvalidInput("condition form and target over different primes")


@dataclass(frozen=True)
class ConditionSystem:
    p: int
    S: Alphabet
    conditions: tuple = ()

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "conditions", tuple(self.conditions))
        if self.S.p != self.p:
            raise InvalidInput("alphabet over a different prime")
        for c in self.conditions:
            if not isinstance(c, Condition):
                raise InvalidInput(f"not a Condition: {c!r}")
            if c.form.p != self.p:
                raise InvalidInput("condition over a different prime")

    @classmethod
    def build(cls, p: int, S: Iterable[int], pairs: Iterable) -> "ConditionSystem":
        """Convenience constructor from (form, target elements) pairs."""
        conds = []
        for form, E in pairs:
            if isinstance(form, Mapping):
                form = LinearForm.from_dict(p, form)
            if not isinstance(E, TargetSet):
                E = TargetSet.of(p, E)
            conds.append(Condition(form, E))
        return cls(p, Alphabet.of(p, S), tuple(conds))

    @property
    def forms(self) -> list:
        return [c.form for c in self.conditions]

    @property
    def targets(self) -> list:
        return [c.target for c in self.conditions]

    def __len__(self):
        return len(self.conditions)

    def coordinates(self) -> list:
        return sorted(set().union(*(f.support() for f in self.forms)))

    def subsystem(self, indices: Iterable[int]) -> "ConditionSystem":
        return ConditionSystem(self.p, self.S, tuple(self.conditions[i] for i in indices))

    def with_condition(self, extra: Condition) -> "ConditionSystem":
        return ConditionSystem(self.p, self.S, self.conditions + (extra,))


def support(phi: LinearForm) -> frozenset:
    return phi.support()


def combine(coeffs: Sequence[int], forms: Sequence[LinearForm]) -> LinearForm:
    if len(coeffs) != len(forms):
        raise InvalidInput(f"{len(coeffs)} coefficients for {len(forms)} forms")
    if not forms:
        raise InvalidInput("combine needs at least one form")
    p = forms[0].p
    terms = []
    for a, f in zip(coeffs, forms):
        if f.p != p:
            raise InvalidInput("forms over different primes")
        if a % p:
            terms.extend((z, a * c) for z, c in f.terms)
    return LinearForm(p, tuple(terms))


def distance(phi: LinearForm, psi: LinearForm) -> int:
    return len(phi - psi)


def pairwise_min_distance(system) -> int:
    forms = system.forms if isinstance(system, ConditionSystem) else list(system)
    if len(forms) < 2:
        raise InvalidInput("pairwise distance needs at least 2 forms")
    best = None
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            d = distance(forms[i], forms[j])
            if best is None or d < best:
                best = d
                if best == 0:
                    return 0
    return best


def dense(forms: Sequence[LinearForm], coords: Sequence[int] | None = None):
    """(coordinate list, int64 matrix with one row per form)."""
    if coords is None:
        coords = sorted(set().union(*(f.support() for f in forms))) if forms else []
    pos = {z: j for j, z in enumerate(coords)}
    mat = np.zeros((len(forms), len(coords)), dtype=np.int64)
    for i, f in enumerate(forms):
        for z, c in f.terms:
            mat[i, pos[z]] = c
    return list(coords), mat


def min_affine_support(target: LinearForm, forms: Sequence[LinearForm], stop_below: int = -1):
    """min over a in F_p^m of |Z(target + sum a_i forms_i)| with the
    lexicographically first minimiser; stops early once below ``stop_below``."""
    coords, mat = dense([target] + list(forms))
    return kernels.scan_combinations(mat[0], mat[1:], target.p, stop_below)


def projective_count(p: int, k: int) -> int:
    return (p ** k - 1) // (p - 1)


def separation(forms: Sequence[LinearForm], enumeration_cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Exact min support of a nonzero combination, enumerating coefficient
    vectors whose first nonzero entry is 1."""
    forms = list(forms)
    if not forms:
        raise InvalidInput("separation needs at least one form")
    p = forms[0].p
    k = len(forms)
    if projective_count(p, k) > enumeration_cap:
        raise EnumerationTooLarge(
            f"{projective_count(p, k)} projective vectors exceed cap {enumeration_cap}"
        )
    coords, mat = dense(forms)
    best = None
    for lead in range(k):
        b, _ = kernels.scan_combinations(mat[lead], mat[lead + 1:], p, 1)
        if best is None or b < best:
            best = b
        if best == 0:
            break
    return best


@dataclass(frozen=True)
class AssumptionReport:
    holds: bool
    threshold: int
    Lmax: int
    min_distance: int | None
    literal_Lmax: int


def meets_main_assumption(system: ConditionSystem) -> AssumptionReport:
    """Pairwise distance >= 2 * Lmax - 1, with Lmax taken over the translate
    version of L (see fp.compute_L_translates)."""
    if not system.conditions:
        raise InvalidInput("assumption check needs at least one condition")
    Lmax = max(compute_L_translates(system.S, E).L for E in system.targets)
    literal = max(compute_L(system.S, E).L for E in system.targets)
    threshold = 2 * Lmax - 1
    if len(system) < 2:
        return AssumptionReport(True, threshold, Lmax, None, literal)
    d = pairwise_min_distance(system)
    return AssumptionReport(d >= threshold, threshold, Lmax, d, literal)
