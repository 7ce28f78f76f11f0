"""JSON documents for systems, certificates and construction reports.

Canonical form: sorted keys, residues reduced mod p, compact separators.
Every document carries ``format_version``.  Exact rationals are "num/den"
strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import InvalidInput
from .forms import Condition, ConditionSystem, LinearForm
from .fp import Alphabet, TargetSet
from .structure import (
    BOUND_TOLERANCE,
    EquidistributionCertificate,
    SunflowerCertificate,
    decimal_string,
)

FORMAT_VERSION = 1


def dumps(doc, canonical: bool = True) -> str:
    if canonical:
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return json.dumps(doc, sort_keys=True, indent=2)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed document: {exc}") from None


def read(path):
    try:
        return loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from None


def write(path, doc):
    Path(path).write_text(dumps(doc, canonical=False) + "\n", encoding="utf-8")


def rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        raise InvalidInput(f"expected a 'num/den' string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"bad rational {s!r}") from None


def _check_version(doc, kind):
    if not isinstance(doc, dict):
        raise InvalidInput(f"{kind} document must be an object")
    v = doc.get("format_version")
    if v != FORMAT_VERSION:
        raise InvalidInput(f"unsupported format_version {v!r}")


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInput(f"{what} must be an integer, got {v!r}")
    return v


def form_doc(f: LinearForm) -> dict:
    return {str(z): c for z, c in f.terms}


def parse_form(p: int, doc) -> LinearForm:
    if not isinstance(doc, dict):
        raise InvalidInput("form must be a coordinate -> coefficient map")
    terms = []
    for z, c in doc.items():
        try:
            zi = int(z)
        except ValueError:
            raise InvalidInput(f"bad coordinate {z!r}") from None
        terms.append((zi, _int(c, "coefficient") % p))
    return LinearForm(p, tuple(terms))


def residues(p: int, values, what) -> list:
    if not isinstance(values, list):
        raise InvalidInput(f"{what} must be a list")
    return sorted({_int(v, what) % p for v in values})


def system_doc(system: ConditionSystem) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "type": "system",
        "p": system.p,
        "S": sorted(system.S.elements),
        "conditions": [
            {"form": form_doc(c.form), "E": sorted(c.target.elements)} for c in system.conditions
        ],
    }


def parse_system(doc) -> ConditionSystem:
    _check_version(doc, "system")
    p = _int(doc.get("p"), "p")
    S = Alphabet.of(p, residues(p, doc.get("S"), "S"))
    conds = []
    for c in doc.get("conditions", []):
        if not isinstance(c, dict):
            raise InvalidInput("condition must be an object")
        conds.append(Condition(parse_form(p, c.get("form")), TargetSet.of(p, residues(p, c.get("E"), "E"))))
    return ConditionSystem(p, S, tuple(conds))


def _bound_doc(x: Fraction) -> dict:
    return {"decimal": decimal_string(x), "exact": rational(x)}


def certificate_doc(cert) -> dict:
    doc = {"format_version": FORMAT_VERSION, "type": "certificate", "kind": cert.kind,
           "member_indices": list(cert.member_indices), "bound": _bound_doc(cert.bound)}
    if isinstance(cert, SunflowerCertificate):
        doc.update(
            center=form_doc(cert.center),
            petals=[form_doc(f) for f in cert.petals],
            min_petal_support=cert.min_petal_support,
            dropped=list(cert.dropped),
        )
    elif isinstance(cert, EquidistributionCertificate):
        doc.update(r=cert.r, per_tuple_bound=rational(cert.per_tuple_bound))
    else:
        raise InvalidInput(f"not a certificate: {cert!r}")
    return doc


def document_reasons(doc) -> list:
    """Consistency problems visible in the document alone (the decimal bound
    must agree with the exact one)."""
    b = doc.get("bound", {})
    try:
        exact = parse_rational(b.get("exact"))
        dec = float(b.get("decimal"))
    except (InvalidInput, TypeError, ValueError):
        return ["bound mismatch"]
    if abs(dec - float(exact)) > BOUND_TOLERANCE * max(1.0, abs(float(exact))):
        return ["bound mismatch"]
    return []


def parse_certificate(doc, p: int):
    _check_version(doc, "certificate")
    kind = doc.get("kind")
    idx = tuple(_int(i, "member index") for i in doc.get("member_indices", []))
    bound = parse_rational((doc.get("bound") or {}).get("exact"))
    if kind == "sunflower":
        return SunflowerCertificate(
            center=parse_form(p, doc.get("center", {})),
            member_indices=idx,
            petals=tuple(parse_form(p, f) for f in doc.get("petals", [])),
            min_petal_support=_int(doc.get("min_petal_support"), "min_petal_support"),
            bound=bound,
            dropped=tuple(_int(i, "dropped index") for i in doc.get("dropped", [])),
        )
    if kind == "equidistribution":
        return EquidistributionCertificate(
            member_indices=idx,
            r=_int(doc.get("r"), "r"),
            per_tuple_bound=parse_rational(doc.get("per_tuple_bound")),
            density_bound=bound,
        )
    raise InvalidInput(f"unknown certificate kind {kind!r}")


def jsonable(x):
    """Plain-JSON view of report parameters."""
    if isinstance(x, Fraction):
        return rational(x)
    if isinstance(x, Condition):
        return {"form": form_doc(x.form), "E": sorted(x.target.elements)}
    if isinstance(x, LinearForm):
        return form_doc(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, float) and x != x:
        return None
    if isinstance(x, float) and x in (float("inf"), float("-inf")):
        return str(x)
    return x


def report_doc(report) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "type": "construction",
        "name": report.name,
        "parameters": jsonable(report.parameters),
        "claims": [{"name": c.name, "checked": c.checked, "detail": c.detail} for c in report.claims],
        "system": system_doc(report.system),
    }


def bound_report_doc(report) -> dict:
    doc = certificate_doc(report.certificate)
    doc["report"] = {
        "case": report.case,
        "bound": _bound_doc(report.bound),
        "parameters": jsonable(report.parameters),
        "exact_density": None if report.exact_density is None else rational(report.exact_density),
        "trivial": report.trivial,
    }
    return doc
