"""Generators for the explicit example systems.

Each generator returns a ConstructionReport whose claims were recomputed
in the same call by the density / forms / fourier machinery.  A claim that
could not be checked is kept with ``checked=False`` and a reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable

import numpy as np

from .density import conditional_density, joint_distribution, marginal_distribution, satisfying_density
from .errors import (
    DegenerateDistribution,
    EnumerationTooLarge,
    InvalidInput,
    NoNontrivialWitness,
    ResourceLimit,
    RetryExhausted,
)
from .forms import (
    DEFAULT_ENUMERATION_CAP,
    Condition,
    ConditionSystem,
    LinearForm,
    combine,
    meets_main_assumption,
    min_affine_support,
    pairwise_min_distance,
    projective_count,
    separation,
)
from .fp import Alphabet, TargetSet, beta, check_prime, compute_L, dilate, sumset
from .rng import SplitMix64

BOOLEAN = (0, 1)


@dataclass(frozen=True)
class Claim:
    name: str
    checked: bool
    detail: str = ""


@dataclass
class ConstructionReport:
    name: str
    system: ConditionSystem
    claims: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)

    def claim(self, name: str, checked: bool, detail: str = "") -> bool:
        self.claims.append(Claim(name, bool(checked), detail))
        return bool(checked)

    @property
    def passed(self) -> bool:
        return all(c.checked for c in self.claims)

    def failed(self) -> list:
        return [c.name for c in self.claims if not c.checked]

    def __getitem__(self, name):
        for c in self.claims:
            if c.name == name:
                return c
        raise KeyError(name)


def _system(p, S, pairs) -> ConditionSystem:
    return ConditionSystem(
        p, Alphabet.of(p, S), tuple(Condition(f, TargetSet.of(p, E)) for f, E in pairs)
    )


def gen_example1(p: int, k: int) -> ConstructionReport:
    """x_0 together with x_0 + x_i (1 <= i <= k): linearly independent, yet the
    value of x_0 pins every x_0 + x_i to {x_0, x_0 + 1}."""
    check_prime(p)
    if k < 2:
        raise InvalidInput("example1 needs k >= 2")
    if p < 3:
        raise InvalidInput("example1 needs p >= 3")
    x0 = LinearForm.var(p, 0)
    pairs = [(x0, [0])] + [(x0 + LinearForm.var(p, i), [0, 1]) for i in range(1, k + 1)]
    system = _system(p, BOOLEAN, pairs)
    rep = ConstructionReport("example1", system, parameters={"p": p, "k": k})
    forms = system.forms
    try:
        sep = separation(forms)
        rep.claim("linearly_independent", sep >= 1, f"separation = {sep}")
        rep.parameters["separation"] = sep
    except EnumerationTooLarge as exc:
        rep.claim("linearly_independent", False, f"not enumerable: {exc}")
    worst = 0
    ok = True
    for i in range(1, k + 1):
        dist = joint_distribution([forms[0], forms[i]], S=system.S)
        for v in range(p):
            sup = {w for (a, w) in dist.counts if a == v}
            worst = max(worst, len(sup))
            ok &= sup <= {v, (v + 1) % p}
    rep.claim("conditional_support_two_values", ok and worst <= 2,
              f"max conditional support size {worst}")
    try:
        d = satisfying_density(system)
        rep.parameters["density"] = d
        rep.claim("density_does_not_decay", d == Fraction(1, 2), f"density = {d}")
    except ResourceLimit as exc:
        rep.claim("density_does_not_decay", False, f"exact engine: {exc}")
    return rep


def gen_example2(p: int, r: int, enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                 seed: int = 0, samples: int = 4096) -> ConstructionReport:
    """Blocks psi_i, rho_i of size q = (p-1)/2, phi_i = psi_i + rho_i with
    target {0}, and the extra form phi = psi_1 + ... + psi_k.

    Layout: psi_i on [2(i-1)q, (2i-1)q), rho_i on [(2i-1)q, 2iq), i = 1..k.
    """
    check_prime(p)
    if p < 3 or r < 1:
        raise InvalidInput("example2 needs p >= 3 and r >= 1")
    q = (p - 1) // 2
    k = -(-r // q)
    psis = [LinearForm.block(p, range(2 * i * q, (2 * i + 1) * q)) for i in range(k)]
    rhos = [LinearForm.block(p, range((2 * i + 1) * q, (2 * i + 2) * q)) for i in range(k)]
    phis = [a + b for a, b in zip(psis, rhos)]
    phi = psis[0]
    for f in psis[1:]:
        phi = phi + f
    system = _system(p, BOOLEAN, [(f, [0]) for f in phis])
    extra = Condition(phi, TargetSet.of(p, [0]))
    rep = ConstructionReport("example2", system, parameters={"p": p, "r": r, "q": q, "k": k, "extra": extra})

    if p ** k <= enumeration_cap:
        best, vec = min_affine_support(phi, phis)
        rep.claim("separated_from_system", best >= k * q >= r,
                  f"exhaustive over {p ** k} vectors: min support {best}, kq = {k * q}")
    else:
        gen = SplitMix64(seed)
        ok = True
        for _ in range(samples):
            a = [gen.below(p) for _ in range(k)]
            comb = phi - combine(a, phis)
            union = set()
            for i in range(k):
                union |= (rhos[i] if a[i] else psis[i]).support()
            ok &= union <= comb.support() and len(union) == k * q
        rep.claim("separated_from_system", ok and k * q >= r,
                  f"partial: {samples} sampled vectors, disjoint-union support of size {k * q}")
    ratio = conditional_density(system, extra)
    rep.parameters["conditional_density"] = ratio
    rep.claim("implied_condition", ratio == 1, f"P(phi = 0 | phi_i = 0 for all i) = {ratio}")
    return rep


def example3_ratio(D: dict, p: int, u: int, k: int, E: Iterable[int]) -> Fraction:
    """sum_{y in E} D(y) D(u-y)^k / sum_y D(y) D(u-y)^k."""
    E = set(E)
    num = sum(D[y] * D[(u - y) % p] ** k for y in range(p) if y in E)
    den = sum(D[y] * D[(u - y) % p] ** k for y in range(p))
    return num / den


def gen_example3(p: int, r: int, k: int, u: int) -> ConstructionReport:
    """psi_0..psi_k on consecutive blocks of size r, phi_i = psi_0 + psi_i with
    target {u}, extra form phi = psi_0.

    The extra target is the complement of the minimisers of y -> D(u - y): with
    that choice the conditional probability tends to 1 geometrically in k.
    """
    check_prime(p)
    if p < 3:
        raise InvalidInput("example3 needs p >= 3")
    if r < p - 1:
        raise InvalidInput("example3 needs r >= p - 1")
    if k < 1:
        raise InvalidInput("example3 needs k >= 1")
    u %= p
    S = Alphabet.of(p, BOOLEAN)
    psis = [LinearForm.block(p, range(i * r, (i + 1) * r)) for i in range(k + 1)]
    dist = marginal_distribution(psis[1], S)
    D = {y: dist.prob((y,)) for y in range(p)}
    if len(set(D.values())) == 1:
        raise DegenerateDistribution("D is uniform")
    low = min(D.values())
    E = sorted(y for y in range(p) if D[(u - y) % p] > low)
    minimisers = sorted(y for y in range(p) if D[(u - y) % p] == low)
    system = _system(p, BOOLEAN, [(psis[0] + psis[i], [u]) for i in range(1, k + 1)])
    extra = Condition(psis[0], TargetSet.of(p, E))
    ratios = {j: example3_ratio(D, p, u, j, E) for j in (k, k + 1, k + 2)}
    rep = ConstructionReport("example3", system, parameters={
        "p": p, "r": r, "k": k, "u": u, "D": D, "E": E, "extra": extra,
        "ratio": ratios[k], "ratio_minimiser_reading": example3_ratio(D, p, u, k, minimisers),
    })
    rep.claim("strict_target", 0 < len(E) < p, f"E = {E}")
    rep.claim("D_multiple_of_2^-r", all((v * 2 ** r).denominator == 1 for v in D.values()),
              f"D = {{{', '.join(f'{y}: {D[y]}' for y in range(p))}}}")
    rep.claim("D_not_uniform", all(v != Fraction(1, p) for v in D.values()))
    try:
        engine = conditional_density(system, extra)
        rep.claim("ratio_matches_engine", engine == ratios[k], f"engine {engine}, closed form {ratios[k]}")
    except ResourceLimit as exc:
        rep.claim("ratio_matches_engine", False, f"exact engine: {exc}")
    # 1 - ratio <= C gamma^k with C = P(phi not in E) / P(phi in E) and
    # gamma = min D / min_{y in E} D(u - y)
    p_in = sum(D[y] for y in E)
    C = (1 - p_in) / p_in
    gamma = low / min(D[(u - y) % p] for y in E)
    rep.parameters.update(C=C, gamma=gamma)
    rep.claim("geometric_convergence", gamma < 1 and 1 - ratios[k] <= C * gamma ** k,
              f"1 - ratio = {1 - ratios[k]} <= {C} * ({gamma})^{k}")
    rep.claim("monotone_in_k", ratios[k] < ratios[k + 1] < ratios[k + 2],
              ", ".join(f"k={j}: {v}" for j, v in ratios.items()))
    return rep


def minimal_T(p: int, r: int, k: int) -> int:
    """Smallest T >= 1 with p^T > p^{2r} (kT)^r."""
    T = 1
    while p ** T <= p ** (2 * r) * (k * T) ** r:
        T += 1
    return T


def _small_combinations(u: int, p: int, max_nonzero: int):
    """All a in F_p^u with at most ``max_nonzero`` nonzero entries, as
    (positions, values) pairs."""
    for size in range(0, min(max_nonzero, u) + 1):
        for pos in combinations(range(u), size):
            for vals in product(range(1, p), repeat=size):
                yield pos, vals


def _avoids_balls(cand: np.ndarray, chosen: list, p: int, r: int) -> bool:
    for pos, vals in _small_combinations(len(chosen), p, r - 1):
        acc = cand.copy()
        for i, v in zip(pos, vals):
            acc = (acc - v * chosen[i]) % p
        if np.count_nonzero(acc) < r:
            return False
    return True


def gen_example4(p: int, r: int, k: int, seed: int,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP, samples: int = 2000) -> ConstructionReport:
    """phi_i = psi_i + x_{i-1} (targets {0, 1}) with psi_i supported on the
    block [k, k + T), each psi_{u+1} drawn (seeded rejection sampling) outside
    every radius-(r-1) ball around combinations of psi_1..psi_u with at most
    r - 1 nonzero coefficients."""
    check_prime(p)
    if p < 3 or r < 1 or k < 1:
        raise InvalidInput("example4 needs p >= 3, r >= 1, k >= 1")
    T = minimal_T(p, r, k)
    gen = SplitMix64(seed)
    chosen = []
    attempts = 0
    cap = 100 * k
    while len(chosen) < k:
        if attempts >= cap:
            raise RetryExhausted(f"{attempts} draws without completing the family")
        attempts += 1
        cand = np.array([gen.below(p) for _ in range(T)], dtype=np.int64)
        if _avoids_balls(cand, chosen, p, r):
            chosen.append(cand)
    psis = [LinearForm(p, tuple((k + j, int(c)) for j, c in enumerate(row))) for row in chosen]
    phis = [psi + LinearForm.var(p, i) for i, psi in enumerate(psis)]
    system = _system(p, BOOLEAN, [(f, [0, 1]) for f in phis])
    c = T * math.log(2) / math.log(k) if k > 1 else math.inf
    rep = ConstructionReport("example4", system, parameters={
        "p": p, "r": r, "k": k, "seed": seed, "T": T, "attempts": attempts,
        "block": [k, k + T], "exponent_c": c, "heuristic_exponent": math.log(2) / math.log(p) * r,
    })

    # (a) r-separation
    small_ok = True
    worst = None
    for pos, vals in _small_combinations(k, p, r - 1):
        if not pos:
            continue
        comb = combine([dict(zip(pos, vals)).get(i, 0) for i in range(k)], psis)
        worst = len(comb) if worst is None else min(worst, len(comb))
        small_ok &= len(comb) >= r
    x_part_ok = all(
        f.coeffs.get(i) == 1 and all(g.coeffs.get(i) is None for j, g in enumerate(phis) if j != i)
        for i, f in enumerate(phis)
    ) and all(min(psi.support(), default=k) >= k for psi in psis)
    if projective_count(p, k) <= enumeration_cap:
        sep = separation(phis, enumeration_cap)
        rep.claim("r_separated", small_ok and x_part_ok and sep >= r,
                  f"exhaustive: separation {sep}; sparse combinations min psi-support {worst}")
    else:
        sample_ok = True
        for _ in range(samples):
            a = [0] * k
            weight = r + gen.below(k - r + 1) if k >= r else k
            for i in _sample_positions(gen, k, weight):
                a[i] = 1 + gen.below(p - 1)
            sample_ok &= len(combine(a, phis)) >= r
        rep.claim("r_separated", small_ok and x_part_ok and sample_ok,
                  f"combinations with <= {r - 1} nonzero coefficients exhaustive (min psi-support {worst}); "
                  f"dense combinations structural (x-part) + {samples} samples")

    # (b) witness set {x : x_z = 0 on the block} satisfies every condition
    fixed = {z: 0 for z in range(k, k + T)}
    witness_ok = True
    for cond in system.conditions:
        rest, const = cond.form.restrict(fixed)
        image = {(v + const) % p for (v,) in marginal_distribution(rest, system.S).counts}
        witness_ok &= image <= cond.target.elements
    lower = Fraction(1, 2 ** T)
    detail = f"witness set density 2^-{T} inside the satisfying set"
    try:
        d = satisfying_density(system)
        rep.parameters["density"] = d
        witness_ok &= d >= lower
        detail += f"; exact density {d}"
    except ResourceLimit:
        detail += "; exact density out of budget"
    rep.parameters["density_lower_bound"] = lower
    rep.claim("density_at_least_2^-T", witness_ok, detail)
    if k > 1:
        rep.claim("power_lower_bound", T * math.log(2) <= c * math.log(k) * (1 + 1e-12),
                  f"2^-T = k^-{c:.4f}, heuristic exponent {rep.parameters['heuristic_exponent']:.4f}")
    return rep


def _sample_positions(gen: SplitMix64, k: int, weight: int) -> list:
    idx = list(range(k))
    gen.shuffle(idx)
    return idx[:weight]


def check_full_image_remark(report: ConstructionReport, a) -> bool:
    """On the witness set of example4, a combination with at least p - 1
    nonzero coefficients takes every value of F_p."""
    p = report.system.p
    k = report.parameters["k"]
    a = [x % p for x in a]
    if len(a) != k:
        raise InvalidInput(f"coefficient vector has length {len(a)}, expected {k}")
    if sum(1 for x in a if x) < p - 1:
        raise InvalidInput("need at least p - 1 nonzero coefficients")
    T = report.parameters["T"]
    fixed = {z: 0 for z in range(k, k + T)}
    rest, const = combine(a, report.system.forms).restrict(fixed)
    image = {const}
    for _, c in rest.terms:
        image = set(sumset(image, dilate(report.system.S.elements, c, p), p))
    return image == set(range(p))


def gen_span_family(p: int, r: int, t: int) -> ConstructionReport:
    """All p^t combinations of t disjoint blocks psi_j (block j on
    [j r, (j + 1) r), all coefficients 1), each with target {0}."""
    check_prime(p)
    if t < 1 or r < 1:
        raise InvalidInput("span family needs r, t >= 1")
    S = Alphabet.of(p, BOOLEAN)
    psis = [LinearForm.block(p, range(j * r, (j + 1) * r)) for j in range(t)]
    vecs = list(product(range(p), repeat=t))
    forms = [combine(v, psis) for v in vecs]
    system = _system(p, BOOLEAN, [(f, [0]) for f in forms])
    rep = ConstructionReport("span_family", system, parameters={"p": p, "r": r, "t": t, "k": len(forms)})
    d_min = pairwise_min_distance(system)
    rep.claim("pairwise_distance", d_min >= r, f"min pairwise distance {d_min}")
    factors = [marginal_distribution(psi, S).prob((0,)) for psi in psis]
    product_density = Fraction(1)
    for f in factors:
        product_density *= f
    try:
        d = satisfying_density(system)
        rep.parameters["density"] = d
        rep.claim("same_satisfying_set", d == product_density,
                  f"density {d} = prod P(psi_j = 0) = {product_density}")
    except ResourceLimit as exc:
        d = product_density
        rep.claim("same_satisfying_set", False, f"exact engine: {exc}")
    b = beta(p, S)
    lower = Fraction(1, 2 ** ((p - 1) * t))
    rep.parameters["density_lower_bound"] = lower
    rep.claim("density_lower_bound", d >= lower and all(f >= b for f in factors),
              f"density {d} >= 2^-{(p - 1) * t}; each factor >= beta = {b}")
    return rep


def gen_tightness(p: int, S: Iterable[int], E: Iterable[int], k: int) -> ConstructionReport:
    """k forms on disjoint blocks of size L - 1 whose coefficients are the
    witness tuple of L(S, E): every form maps S^n into E."""
    check_prime(p)
    alphabet = Alphabet.of(p, S)
    target = TargetSet.of(p, E)
    if k < 2:
        raise InvalidInput("tightness construction needs k >= 2")
    w = compute_L(alphabet, target)
    L = w.L
    if L <= 1:
        raise NoNontrivialWitness(f"L(S, E) = {L}: no nontrivial witness")
    size = L - 1
    forms = [LinearForm.block(p, range(i * size, (i + 1) * size), w.tuple) for i in range(k)]
    system = ConditionSystem(p, alphabet, tuple(Condition(f, target) for f in forms))
    rep = ConstructionReport("tightness", system, parameters={
        "p": p, "S": sorted(alphabet.elements), "E": sorted(target.elements), "k": k,
        "L": L, "witness": list(w.tuple),
    })
    image_ok = all(
        {v for (v,) in marginal_distribution(f, alphabet).counts} <= target.elements for f in forms
    )
    rep.claim("image_inside_E", image_ok, f"coefficients {list(w.tuple)}")
    d_min = pairwise_min_distance(system)
    d_all = {len(forms[i] - forms[j]) for i in range(k) for j in range(i + 1, k)}
    rep.parameters["distance"] = d_min
    rep.claim("distance_2L-2", d_all == {2 * L - 2}, f"pairwise distances {sorted(d_all)}")
    d = satisfying_density(system)
    rep.parameters["density"] = d
    rep.claim("density_one", d == 1, f"density {d}")
    a = meets_main_assumption(system)
    rep.parameters["threshold"] = a.threshold
    rep.claim("assumption_fails", not a.holds, f"distance {d_min} < threshold {a.threshold}")
    rep.claim("fails_by_one", a.threshold - d_min == 1, f"threshold - distance = {a.threshold - d_min}")
    return rep


GENERATORS = {
    "example1": gen_example1,
    "example2": gen_example2,
    "example3": gen_example3,
    "example4": gen_example4,
    "span": gen_span_family,
    "tightness": gen_tightness,
}
