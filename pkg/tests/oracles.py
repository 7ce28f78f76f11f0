"""Brute-force reference computations, deliberately naive and independent of
the package's algorithms (only the value types are shared)."""

from fractions import Fraction
from itertools import combinations, product


def points(S, coords):
    for xs in product(sorted(S), repeat=len(coords)):
        yield dict(zip(coords, xs))


def evaluate(form, x, p):
    return sum(c * x[z] for z, c in form.terms) % p


def brute_density(system):
    p = system.p
    coords = sorted({z for c in system.conditions for z, _ in c.form.terms})
    hits = total = 0
    for x in points(system.S.elements, coords):
        total += 1
        if all(evaluate(c.form, x, p) in c.target.elements for c in system.conditions):
            hits += 1
    return Fraction(hits, total)


def brute_joint(forms, S, p):
    coords = sorted({z for f in forms for z, _ in f.terms})
    counts = {}
    total = 0
    for x in points(S, coords):
        y = tuple(evaluate(f, x, p) for f in forms)
        counts[y] = counts.get(y, 0) + 1
        total += 1
    return counts, total


def iterated_sumset(coeffs, S, p):
    out = {0}
    for a in coeffs:
        out = {(v + a * s) % p for v in out for s in S}
    return out


def brute_L(S, E, p):
    """Smallest L >= 0 such that no length-L tuple of nonzero residues has
    its sumset inside E (empty sum is {0})."""
    L = 0
    while True:
        if not any(iterated_sumset(t, S, p) <= set(E) for t in product(range(1, p), repeat=L)):
            return L
        L += 1


def brute_L_translates(S, E, p):
    L = 0
    while True:
        if not any(
            iterated_sumset(t, S, p) <= {(e - y) % p for e in E}
            for t in product(range(1, p), repeat=L)
            for y in range(p)
        ):
            return L
        L += 1


def combination_support(a, forms, p):
    acc = {}
    for ai, f in zip(a, forms):
        for z, c in f.terms:
            acc[z] = (acc.get(z, 0) + ai * c) % p
    return sum(1 for v in acc.values() if v)


def brute_separation(forms, p):
    return min(
        combination_support(a, forms, p)
        for a in product(range(p), repeat=len(forms))
        if any(a)
    )


def is_sunflower(petals_minus_center):
    used = set()
    for f in petals_minus_center:
        s = {z for z, _ in f.terms}
        if s & used:
            return False
        used |= s
    return True


def max_sunflower_size(forms, p):
    """Largest subfamily that is a sunflower for some center; the center can be
    taken on the union of supports, so it is enumerated there."""
    coords = sorted({z for f in forms for z, _ in f.terms})
    from cubeforms.forms import LinearForm

    best = 0
    for vals in product(range(p), repeat=len(coords)):
        center = LinearForm(p, tuple(zip(coords, vals)))
        diffs = [f - center for f in forms]
        # greedy is not enough for the max; brute force over subsets by size
        for size in range(len(forms), best, -1):
            if any(is_sunflower([diffs[i] for i in sub]) for sub in combinations(range(len(forms)), size)):
                best = size
                break
    return best
