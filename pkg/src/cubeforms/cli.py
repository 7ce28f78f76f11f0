"""cubeforms command line.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 resource limit.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import constructions, documents
from .density import default_budget, mc_density, satisfying_density
from .errors import CubeFormsError, InvalidInput, ResourceLimit, RetryExhausted
from .fp import Alphabet, TargetSet, compute_L, compute_L_translates
from .structure import certify_density_bound, parameters_from_epsilon, verify_certificate

OK, FAILED, INVALID, RESOURCE = 0, 1, 2, 3


def residue_list(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _budget(args):
    return args.budget if getattr(args, "budget", None) is not None else default_budget()


def cmd_lse(args, out):
    S = Alphabet.of(args.p, args.S)
    E = TargetSet.of(args.p, args.E)
    w = compute_L_translates(S, E) if args.translates else compute_L(S, E)
    line = f"L={w.L} witness={','.join(map(str, w.tuple))} bound={w.bound}"
    if args.translates:
        line += f" shift={w.shift}"
    print(line, file=out)
    return OK


def cmd_density(args, out):
    system = documents.parse_system(documents.read(args.input))
    if args.mode == "exact":
        try:
            d = satisfying_density(system, _budget(args))
        except ResourceLimit as exc:
            raise type(exc)(f"{exc}; try --mode mc") from None
        if args.json:
            print(documents.dumps({"mode": "exact", "density": documents.rational(d),
                                   "decimal": documents.decimal_string(d)}), file=out)
        else:
            print(f"{d} = {float(d):.12g}", file=out)
        return OK
    est = mc_density(system, args.samples, args.seed, args.workers)
    lo, hi = est.interval()
    if args.json:
        print(documents.dumps({"mode": "mc", "estimate": est.estimate, "hoeffding_99": est.hoeffding_99,
                               "samples": est.samples, "seed": est.seed, "hits": est.hits}), file=out)
    else:
        print(f"{est.estimate:.6g} ± {est.hoeffding_99:.6g} (99% Hoeffding; interval [{lo:.6g}, {hi:.6g}];"
              f" samples={est.samples} seed={est.seed})", file=out)
    return OK


def cmd_bound(args, out):
    system = documents.parse_system(documents.read(args.input))
    if args.epsilon is not None:
        u, r = parameters_from_epsilon(system.p, args.epsilon)
    else:
        if args.u is None or args.r is None:
            raise InvalidInput("give either --epsilon or both -u and -r")
        u, r = args.u, args.r
    rep = certify_density_bound(system, u, r, _budget(args), with_exact=not args.no_exact)
    doc = documents.bound_report_doc(rep)
    if args.output:
        documents.write(args.output, doc)
    if args.json:
        print(documents.dumps(doc), file=out)
        return OK
    cert = rep.certificate
    print(f"case {rep.case} ({cert.kind})", file=out)
    params = dict(rep.parameters)
    if args.epsilon is not None:
        params["epsilon"] = args.epsilon
    print("parameters: " + " ".join(f"{k}={v}" for k, v in sorted(params.items())), file=out)
    if rep.case == "B":
        t = len(cert.member_indices)
        print(f"sunflower: center {cert.center}; t'={t}; p(1-beta)^t' = {cert.bound}", file=out)
    print(f"bound = {rep.bound} = {float(rep.bound):.12g}" + (" (trivial)" if rep.trivial else ""), file=out)
    if rep.exact_density is not None:
        ok = rep.bound >= rep.exact_density
        print(f"exact density = {rep.exact_density} = {float(rep.exact_density):.12g}", file=out)
        print(f"bound >= exact: {'yes' if ok else 'NO'}", file=out)
        if not ok:
            return FAILED
    else:
        print("exact density: not computed", file=out)
    return OK


def verify_documents(system_doc, cert_doc):
    system = documents.parse_system(system_doc)
    reasons = documents.document_reasons(cert_doc)
    cert = documents.parse_certificate(cert_doc, system.p)
    v = verify_certificate(cert, system)
    return [r for r in reasons if r not in v.reasons] + list(v.reasons)


def cmd_verify(args, out):
    reasons = verify_documents(documents.read(args.system), documents.read(args.certificate))
    if reasons:
        for r in reasons:
            print(f"FAIL: {r}", file=out)
        return FAILED
    print("ok", file=out)
    return OK


def _gen_report(args):
    name = args.name
    if name == "example1":
        return constructions.gen_example1(args.p, args.k)
    if name == "example2":
        return constructions.gen_example2(args.p, args.r, seed=args.seed)
    if name == "example3":
        return constructions.gen_example3(args.p, args.r, args.k, args.u)
    if name == "example4":
        return constructions.gen_example4(args.p, args.r, args.k, args.seed)
    if name == "span":
        return constructions.gen_span_family(args.p, args.r, args.t)
    if name == "tightness":
        return constructions.gen_tightness(args.p, args.S, args.E, args.k)
    raise InvalidInput(f"unknown construction {name!r}")


def cmd_gen(args, out):
    rep = _gen_report(args)
    if args.output:
        documents.write(args.output, documents.system_doc(rep.system))
        report_path = args.report or str(Path(args.output).with_suffix("")) + ".report.json"
        documents.write(report_path, documents.report_doc(rep))
    if args.json:
        print(documents.dumps(documents.report_doc(rep)), file=out)
    else:
        print(f"{rep.name}: {len(rep.system)} conditions", file=out)
        for key in ("T", "L", "density", "conditional_density", "ratio", "separation"):
            if key in rep.parameters:
                print(f"  {key} = {rep.parameters[key]}", file=out)
        for c in rep.claims:
            print(f"  [{'pass' if c.checked else 'FAIL'}] {c.name}: {c.detail}", file=out)
    return OK if rep.passed else FAILED


# suite

def _check_entry(root: Path, entry: dict) -> tuple:
    name = entry.get("name", "?")
    try:
        system_doc = documents.read(root / entry["system"])
        system = documents.parse_system(system_doc)
        notes = []
        exact = None
        if "density" in entry:
            exact = satisfying_density(system)
            want = documents.parse_rational(entry["density"])
            if exact != want:
                return name, False, f"density {exact} != {want}"
            notes.append(f"density {exact}")
        if "certificate" in entry:
            reasons = verify_documents(system_doc, documents.read(root / entry["certificate"]))
            if reasons:
                return name, False, "certificate: " + ", ".join(reasons)
            notes.append("certificate ok")
        if "u" in entry:
            rep = certify_density_bound(system, entry["u"], entry["r"])
            if "case" in entry and rep.case != entry["case"]:
                return name, False, f"case {rep.case} != {entry['case']}"
            if rep.exact_density is not None and rep.bound < rep.exact_density:
                return name, False, f"bound {rep.bound} < exact {rep.exact_density}"
            v = verify_certificate(rep.certificate, system)
            if not v:
                return name, False, "fresh certificate: " + ", ".join(v.reasons)
            notes.append(f"case {rep.case} bound {rep.bound}")
        return name, True, "; ".join(notes)
    except (CubeFormsError, KeyError, OSError) as exc:
        return name, False, f"{type(exc).__name__}: {exc}"


def _construction_battery():
    checks = []

    def run(name, fn):
        try:
            rep = fn()
            checks.append((name, rep.passed, ", ".join(rep.failed()) or "all claims pass"))
        except CubeFormsError as exc:
            checks.append((name, False, f"{type(exc).__name__}: {exc}"))

    for p in (3, 5):
        for r in range(1, 5):
            run(f"example2 p={p} r={r}", lambda p=p, r=r: constructions.gen_example2(p, r))
    run("example3 p=3 r=2 u=0 k=4", lambda: constructions.gen_example3(3, 2, 4, 0))
    run("example4 p=3 r=2 k=64 seed=7", lambda: constructions.gen_example4(3, 2, 64, 7))
    run("tightness p=5 S=0,1 E=0,1,2", lambda: constructions.gen_tightness(5, [0, 1], [0, 1, 2], 4))
    run("span p=3 r=2 t=2", lambda: constructions.gen_span_family(3, 2, 2))
    return checks


def run_suite(fixtures_dir, workers: int = 1) -> list:
    root = Path(fixtures_dir)
    manifest = documents.read(root / "manifest.json")
    if manifest.get("format_version") != documents.FORMAT_VERSION:
        raise InvalidInput("unsupported manifest format_version")
    entries = manifest.get("entries", [])
    with ThreadPoolExecutor(max_workers=max(1, workers)) as ex:
        results = list(ex.map(lambda e: _check_entry(root, e), entries))
    return results + _construction_battery()


def cmd_suite(args, out):
    results = run_suite(args.fixtures, args.workers)
    if args.json:
        print(documents.dumps([{"name": n, "passed": ok, "detail": d} for n, ok, d in results]), file=out)
    else:
        width = max(len(n) for n, _, _ in results)
        for n, ok, d in results:
            print(f"{n:<{width}}  {'pass' if ok else 'FAIL'}  {d}", file=out)
        print(f"{sum(ok for _, ok, _ in results)}/{len(results)} passed", file=out)
    return OK if all(ok for _, ok, _ in results) else FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cubeforms", description="Linear forms on S^n modulo p: densities, bounds, certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lse", help="compute L(S, E)")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-S", type=residue_list, required=True)
    p.add_argument("-E", type=residue_list, required=True)
    p.add_argument("--translates", action="store_true", help="translate-invariant variant")
    p.set_defaults(func=cmd_lse)

    p = sub.add_parser("density", help="satisfying density of a system document")
    p.add_argument("input")
    p.add_argument("--mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("bound", help="certified density upper bound")
    p.add_argument("input")
    p.add_argument("-u", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("-o", "--output")
    p.add_argument("--budget", type=int)
    p.add_argument("--no-exact", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="re-check a certificate against a system")
    p.add_argument("system")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate an example construction")
    p.add_argument("name", choices=sorted(constructions.GENERATORS))
    p.add_argument("-p", type=int, default=3)
    p.add_argument("-r", type=int, default=2)
    p.add_argument("-k", type=int, default=4)
    p.add_argument("-t", type=int, default=2)
    p.add_argument("-u", type=int, default=0)
    p.add_argument("-S", type=residue_list, default=[0, 1])
    p.add_argument("-E", type=residue_list, default=[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.add_argument("--report")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", help="run the fixture and construction battery")
    p.add_argument("fixtures", nargs="?", default="fixtures")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ResourceLimit, RetryExhausted) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return RESOURCE
    except (InvalidInput, CubeFormsError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
