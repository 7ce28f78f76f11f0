"""Density-bound certificates for systems of conditions.

Either a large r-separated subfamily exists (the equidistribution bound
applies to it), or the forms fall into few balls of radius r - 1; inside the
largest ball a sunflower is extracted and the sunflower bound applies.  The
pipeline records which case fired in a certificate that ``verify_certificate``
re-checks from scratch.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .density import satisfying_density
from .errors import EnumerationTooLarge, InvalidInput, PetalTooSmall, ResourceLimit
from .forms import (
    DEFAULT_ENUMERATION_CAP,
    ConditionSystem,
    LinearForm,
    combine,
    meets_main_assumption,
    min_affine_support,
    separation,
)
from .fp import Alphabet, beta, check_prime, compute_L_translates

BOUND_TOLERANCE = 1e-9


def decimal_string(x: Fraction, digits: int = 17) -> str:
    return f"{float(x):.{digits}g}"


@dataclass(frozen=True)
class SunflowerCertificate:
    center: LinearForm
    member_indices: tuple
    petals: tuple
    min_petal_support: int
    bound: Fraction = Fraction(0)
    dropped: tuple = ()

    kind = "sunflower"

    @property
    def bound_decimal(self) -> str:
        return decimal_string(self.bound)


@dataclass(frozen=True)
class EquidistributionCertificate:
    member_indices: tuple
    r: int
    per_tuple_bound: Fraction
    density_bound: Fraction

    kind = "equidistribution"

    @property
    def bound(self) -> Fraction:
        return self.density_bound

    @property
    def bound_decimal(self) -> str:
        return decimal_string(self.density_bound)


@dataclass(frozen=True)
class DensityBoundReport:
    certificate: object
    bound: Fraction
    parameters: dict
    exact_density: Fraction | None = None
    trivial: bool = False

    @property
    def case(self) -> str:
        return "A" if isinstance(self.certificate, EquidistributionCertificate) else "B"


@dataclass(frozen=True)
class SunflowerExtraction:
    offset: LinearForm
    indices: tuple
    best_effort: bool


@dataclass(frozen=True)
class GreedyResult:
    members: tuple
    complete: bool
    assignment: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Verification:
    ok: bool
    reasons: tuple = ()

    def __bool__(self):
        return self.ok


def Lmax_of(system: ConditionSystem, indices: Sequence[int] | None = None) -> int:
    idx = range(len(system)) if indices is None else indices
    return max((compute_L_translates(system.S, system.conditions[i].target).L for i in idx), default=0)


def sunflower_bound_value(p: int, S: Alphabet, t: int) -> Fraction:
    """p (1 - beta(p, S))^t."""
    return p * (1 - beta(p, S)) ** t


def sunflower_density_bound(cert: SunflowerCertificate, system: ConditionSystem) -> Fraction:
    """Upper bound on the density of the members' satisfying set."""
    need = Lmax_of(system, cert.member_indices)
    if cert.member_indices and cert.min_petal_support < need:
        raise PetalTooSmall(f"petal support {cert.min_petal_support} < {need}")
    return sunflower_bound_value(system.p, system.S, len(cert.member_indices))


def extraction_threshold(p: int, r: int, t: int) -> int:
    """p^r r! t^r: family size above which a size-t sunflower is promised."""
    return p ** r * math.factorial(r) * t ** r


def _greedy_disjoint(items):
    used = set()
    chosen = []
    for i, f in items:
        s = f.support()
        if not s & used:
            chosen.append(i)
            used |= s
    return chosen, used


def _extract(items, r, t, p):
    chosen, used = _greedy_disjoint(items)
    zero = LinearForm.zero(p)
    if len(chosen) >= t or r <= 0:
        return zero, chosen
    counts = Counter((z, c) for _, f in items for z, c in f.terms if z in used)
    if not counts:
        return zero, chosen
    top = max(counts.values())
    z, c = min(pair for pair, n in counts.items() if n == top)
    strip = LinearForm.var(p, z, c)
    bucket = [(i, f - strip) for i, f in items if f.coeffs.get(z) == c]
    offset, sub = _extract(bucket, r - 1, t, p)
    if len(sub) > len(chosen):
        return offset + strip, sub
    return zero, chosen


def extract_sunflower(petals: Sequence[LinearForm], r: int, t: int, p: int | None = None) -> SunflowerExtraction:
    """Indices I and an offset c such that petals[i] - c (i in I) have
    pairwise disjoint supports, aiming for |I| >= t.

    Recursive Erdos-Rado style search: take a maximal disjoint subfamily; if
    it is too small, strip the most common (coordinate, coefficient) pair met
    inside its support and recurse on that bucket with radius r - 1.  Below
    the p^r r! t^r threshold the largest sunflower met is returned, flagged
    ``best_effort``.
    """
    petals = list(petals)
    if not petals:
        return SunflowerExtraction(LinearForm.zero(p or 2), (), t > 0)
    p = petals[0].p
    offset, idx = _extract(list(enumerate(petals)), r, t, p)
    return SunflowerExtraction(offset, tuple(sorted(idx)), len(idx) < t)


def greedy_separated_subfamily(forms: Sequence[LinearForm], r: int, u: int,
                               enumeration_cap: int = DEFAULT_ENUMERATION_CAP) -> GreedyResult:
    """Scan forms in order, keeping phi_j whenever |Z(phi_j - sum a_i phi_i)| >= r
    for every a over the kept forms.  The kept family is r-separated.

    On failure (fewer than u kept) every other form gets the lexicographically
    smallest a with |Z(phi_j - sum a_i phi_i)| <= r - 1.
    """
    forms = list(forms)
    members = []
    p = forms[0].p if forms else 2

    def probe(j):
        if p ** len(members) > enumeration_cap:
            raise EnumerationTooLarge(f"p^{len(members)} combinations exceed cap {enumeration_cap}")
        return min_affine_support(forms[j], [-forms[i] for i in members], stop_below=r)

    for j in range(len(forms)):
        if len(members) >= u:
            break
        best, _ = probe(j)
        if best >= r:
            members.append(j)
    if len(members) >= u:
        return GreedyResult(tuple(members), True, {})
    assignment = {}
    for j in range(len(forms)):
        if j in members:
            continue
        best, vec = probe(j)
        assert best < r
        assignment[j] = vec
    return GreedyResult(tuple(members), False, assignment)


def ball_cover(forms: Sequence[LinearForm], members: Sequence[int], assignment: dict) -> dict:
    """Group form indices by coefficient vector over ``members``; member i
    gets its unit vector.  Keys are returned in sorted order."""
    members = list(members)
    buckets = {}
    for j in range(len(forms)):
        if j in members:
            vec = tuple(1 if m == j else 0 for m in members)
        elif j in assignment:
            vec = tuple(assignment[j])
        else:
            raise InvalidInput(f"form {j} has no assignment")
        buckets.setdefault(vec, []).append(j)
    return {key: buckets[key] for key in sorted(buckets)}


def bucket_center(forms: Sequence[LinearForm], members: Sequence[int], vec: Sequence[int], p: int) -> LinearForm:
    if not members:
        return LinearForm.zero(p)
    return combine(list(vec), [forms[i] for i in members])


def balls_density_bound(k: int, r: int, p: int, S: Alphabet) -> float:
    """p (1 - beta)^((k / (p^r r!))^(1/r))."""
    check_prime(p)
    if r < 1 or k < 1:
        raise InvalidInput("balls bound needs r >= 1 and k >= 1")
    exponent = (k / (p ** r * math.factorial(r))) ** (1 / r)
    return p * (1 - float(beta(p, S))) ** exponent


def parameters_from_epsilon(p: int, epsilon: float) -> tuple:
    """u = ceil(p log(2/eps)) and r = ceil(5 p^4 log(2/eps)), natural log."""
    if not 0 < epsilon < 1:
        raise InvalidInput("epsilon must lie in (0, 1)")
    ell = math.log(2 / epsilon)
    return math.ceil(p * ell), math.ceil(5 * p ** 4 * ell)


def epsilon_accounting(p: int, S: Alphabet, epsilon: float) -> dict:
    """log10 of the largest k for which the final bound is at most epsilon,
    split into its four factors 2 p^{u}, p^r, r!, (beta^-1 log(p/eps))^r with
    the real-valued u, r of the accounting (u = p log(2/eps) + 1)."""
    ell = math.log(2 / epsilon)
    u = p * ell + 1
    r = 5 * p ** 4 * ell
    b = float(beta(p, S))
    terms = {
        "2p^u": math.log10(2) + u * math.log10(p),
        "p^r": r * math.log10(p),
        "r!": math.lgamma(r + 1) / math.log(10),
        "(log(p/eps)/beta)^r": r * math.log10(math.log(p / epsilon) / b),
    }
    terms["log10_k_max"] = sum(terms.values())
    return terms


def _equidistribution_certificate(system, members, r) -> EquidistributionCertificate:
    p = system.p
    per_tuple = Fraction(1, p ** len(members)) + Fraction(p * p - 1, p * p) ** r
    size = 1
    for i in members:
        size *= len(system.conditions[i].target)
    return EquidistributionCertificate(tuple(members), r, per_tuple, size * per_tuple)


def _sunflower_certificate(system, indices, center, dropped=()) -> SunflowerCertificate:
    petals = tuple(system.forms[i] - center for i in indices)
    t = len(indices)
    return SunflowerCertificate(
        center=center,
        member_indices=tuple(indices),
        petals=petals,
        min_petal_support=min((len(f) for f in petals), default=0),
        bound=sunflower_bound_value(system.p, system.S, t),
        dropped=tuple(dropped),
    )


def certify_density_bound(system: ConditionSystem, u: int, r: int, budget: int | None = None,
                          enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                          with_exact: bool = True) -> DensityBoundReport:
    """Run the case analysis on ``system`` and return a certified upper bound
    on its satisfying density."""
    if u < 1 or r < 1:
        raise InvalidInput("u and r must be positive")
    assumption = meets_main_assumption(system)
    if not assumption.holds:
        raise InvalidInput(
            f"pairwise distance {assumption.min_distance} below threshold {assumption.threshold}"
        )
    p = system.p
    forms = system.forms
    Lmax = assumption.Lmax
    params = {"u": u, "r": r, "Lmax": Lmax, "threshold": assumption.threshold, "k": len(forms)}
    greedy = greedy_separated_subfamily(forms, r, u, enumeration_cap)
    if greedy.complete:
        cert = _equidistribution_certificate(system, greedy.members, r)
        params["case"] = "A"
    else:
        buckets = ball_cover(forms, greedy.members, greedy.assignment)
        vec, bucket = max(buckets.items(), key=lambda kv: len(kv[1]))
        center = bucket_center(forms, greedy.members, vec, p)
        dropped = [i for i in bucket if len(forms[i] - center) < Lmax]
        kept = [i for i in bucket if i not in dropped]
        ext = extract_sunflower([forms[i] - center for i in kept], r - 1, max(1, len(kept)), p)
        new_center = center + ext.offset
        members = [kept[j] for j in ext.indices]
        small = [i for i in members if len(forms[i] - new_center) < Lmax]
        members = [i for i in members if i not in small]
        cert = _sunflower_certificate(system, members, new_center, dropped + small)
        params.update(
            case="B",
            bucket_vector=list(vec),
            bucket_size=len(bucket),
            buckets=len(buckets),
            greedy_members=list(greedy.members),
            sunflower_size=len(members),
            guaranteed_size=_guaranteed_size(p, r - 1, len(kept)),
        )
    bound = min(Fraction(1), cert.bound)
    exact = None
    if with_exact:
        try:
            exact = satisfying_density(system, budget)
        except ResourceLimit:
            exact = None
    return DensityBoundReport(cert, bound, params, exact, trivial=cert.bound >= 1)


def _guaranteed_size(p: int, r: int, k: int) -> int:
    """Largest t with k >= p^r r! t^r (0 when r = 0 gives no promise beyond k)."""
    if r <= 0:
        return k
    t = 0
    while k >= extraction_threshold(p, r, t + 1):
        t += 1
    return t


def verify_certificate(cert, system: ConditionSystem,
                       enumeration_cap: int = DEFAULT_ENUMERATION_CAP) -> Verification:
    """Independent re-check of a certificate against ``system``."""
    if not isinstance(cert, (EquidistributionCertificate, SunflowerCertificate)):
        return Verification(False, ("unknown certificate kind",))
    reasons = []
    k = len(system)
    idx = list(cert.member_indices)
    if any(not isinstance(i, int) or not 0 <= i < k for i in idx) or len(set(idx)) != len(idx):
        return Verification(False, ("member indices invalid",))
    p = system.p
    if isinstance(cert, EquidistributionCertificate):
        if not idx:
            reasons.append("empty member set")
        else:
            try:
                sep = separation([system.forms[i] for i in idx], enumeration_cap)
                if sep < cert.r:
                    reasons.append(f"separation {sep} < {cert.r}")
            except EnumerationTooLarge:
                reasons.append("separation not enumerable")
        expected = _equidistribution_certificate(system, idx, cert.r)
        if expected.per_tuple_bound != cert.per_tuple_bound or expected.density_bound != cert.density_bound:
            reasons.append("bound mismatch")
    elif isinstance(cert, SunflowerCertificate):
        if len(cert.petals) != len(idx):
            reasons.append("petal identity")
        else:
            for i, petal in zip(idx, cert.petals):
                if system.forms[i] - cert.center != petal:
                    reasons.append("petal identity")
                    break
        used = set()
        for petal in cert.petals:
            s = petal.support()
            if s & used:
                reasons.append("disjointness")
                break
            used |= s
        for i, petal in zip(idx, cert.petals):
            need = compute_L_translates(system.S, system.conditions[i].target).L
            if len(petal) < need:
                reasons.append(f"petal too small at condition {i}")
                break
        if cert.min_petal_support != min((len(f) for f in cert.petals), default=0):
            reasons.append("min petal support mismatch")
        if cert.bound != sunflower_bound_value(p, system.S, len(idx)):
            reasons.append("bound mismatch")
    else:
        return Verification(False, ("unknown certificate kind",))
    return Verification(not reasons, tuple(reasons))
