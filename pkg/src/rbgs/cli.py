"""Command-line front end.

Every subcommand writes a deterministic report to standard output, as text or
(with ``--json``) as JSON.  Exit codes: 0 success, 1 a check failed, 2 input
error, 3 an oracle-incomplete pair was encountered.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional, Sequence

from . import __version__
from .algebra import eq3_defect, eq4_element, format_coefficient, free_long_identity
from .engine import Bounds, RewriteSystem, check_gs
from .enveloping import (Envelope, check_axioms, check_envelope, random_element, random_monomial)
from .parsing import ParseError, Presentation, default_presentation, parse_expr, parse_presentation
from .pbw import closure_report, enumerate_e, hilbert_counts
from .presentation import (OracleIncomplete, PresentationError, Report, check_doubling, doubling,
                           random_prepostlie)
from .terms import render, render_letter

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCOMPLETE = 0, 1, 2, 3
IDENTITIES = ("eq3", "eq4", "eq5", "rb", "assoc", "dendriform", "envelope")


class InputError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--presentation", help="presentation file (default: one generator y, trivial pre-Lie)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    p = argparse.ArgumentParser(prog="rbgs", description="Rota-Baxter enveloping algebras: normal forms, PBW bases, checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    nf = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    nf.add_argument("--expr", required=True)

    basis = sub.add_parser("basis", parents=[common], help="enumerate the PBW basis by degree")
    basis.add_argument("--max-degree", type=_positive, required=True)
    basis.add_argument("--count-only", action="store_true")

    cl = sub.add_parser("closure", parents=[common], help="closure and dimension check of the PBW basis")
    cl.add_argument("--max-degree", type=_positive, required=True)

    check = sub.add_parser("check", help="check suites")
    csub = check.add_subparsers(dest="suite", required=True)
    gs = csub.add_parser("gs", parents=[common], help="compositions of the relation set")
    gs.add_argument("--max-breadth", type=_positive, required=True)
    gs.add_argument("--max-rdeg", type=_nonneg, required=True)
    gs.add_argument("--max-level", type=_nonneg, required=True)
    gs.add_argument("--max-failures", type=_positive, default=20)
    gs.add_argument("--perturb", action="store_true", help="corrupt the Rota-Baxter relation (negative control)")
    gs.add_argument("--all-decompositions", action="store_true",
                    help="also use non-canonical long-relation decompositions")
    gs.add_argument("--literal-z", action="store_true", help="read the content condition literally")

    ids = csub.add_parser("identities", parents=[common], help="identity suites")
    ids.add_argument("--which", choices=IDENTITIES, required=True)
    ids.add_argument("--trials", type=_positive, default=200)
    ids.add_argument("--seed", type=int, default=0)

    dbl = csub.add_parser("doubling", parents=[common], help="doubling construction on random inputs")
    dbl.add_argument("--trials", type=_positive, default=50)
    dbl.add_argument("--seed", type=int, default=0)
    return p


# --- output -------------------------------------------------------------------

def _emit(report: dict, as_json: bool, text_lines: Sequence[str], out) -> None:
    if as_json:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _status(rep: Report) -> int:
    if not rep.ok:
        return EXIT_FAIL
    if rep.incomplete:
        return EXIT_INCOMPLETE
    return EXIT_OK


def _report_lines(rep: Report) -> List[str]:
    verdict = "ok" if rep.ok else "FAILED"
    lines = [f"{rep.name}: {verdict} ({rep.checked} checked, {len(rep.violations)} violations)"]
    for v in rep.violations[:20]:
        lines.append("  " + json.dumps(v, sort_keys=True))
    for pair in rep.incomplete:
        lines.append(f"  oracle-incomplete: {pair}")
    return lines


# --- commands ---------------------------------------------------------------------

def _load(args) -> Presentation:
    if not args.presentation:
        return default_presentation()
    try:
        with open(args.presentation, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read presentation: {exc}") from None
    return parse_presentation(text)


def _system(pres: Presentation, **options) -> RewriteSystem:
    return RewriteSystem(pres.oracle, pres.algebra.weight, **options)


def cmd_nf(args, pres: Presentation, out) -> int:
    names = pres.names
    try:
        e = parse_expr(args.expr, names)
    except ParseError as exc:
        raise InputError(f"expression: {exc}") from None
    res = _system(pres).normal_form(e)
    text = res.to_text(names)
    report = {"command": "nf", "input": args.expr, "normal_form": text,
              "terms": [{"word": w, "coefficient": c} for w, c in _terms(res, names)]}
    _emit(report, args.json, [text], out)
    return EXIT_OK


def _terms(e, names):
    return [(render(w, names), format_coefficient(c)) for w, c in e]


def cmd_basis(args, pres: Presentation, out) -> int:
    case, n, names = pres.algebra.case, pres.algebra.dim, pres.names
    counts = hilbert_counts(case, n, args.max_degree)
    report = {"command": "basis", "case": case, "generators": list(names), "max_degree": args.max_degree,
              "counts": counts}
    if args.count_only:
        lines = [",".join(str(c) for c in counts)]
    else:
        words = {d: enumerate_e(case, n, d) for d in range(1, args.max_degree + 1)}
        report["words"] = {str(d): [e.to_dict(names) for e in es] for d, es in words.items()}
        lines = [e.text(names) for es in words.values() for e in es]
    _emit(report, args.json, lines, out)
    return EXIT_OK


def cmd_closure(args, pres: Presentation, out) -> int:
    env = Envelope(_system(pres))
    a = pres.algebra
    rep = closure_report(env, a.case, a.dim, args.max_degree, a.gens)
    d = rep.to_dict()
    d.update(command="closure", case=a.case, max_degree=args.max_degree)
    lines = _report_lines(rep)
    for deg, v in sorted(rep.extra["dimensions"].items()):
        lines.append(f"  degree <= {deg}: rank {v['rank']}, |E| {v['count']}")
    d["dimensions"] = {str(k): v for k, v in rep.extra["dimensions"].items()}
    _emit(d, args.json, lines, out)
    return _status(rep)


def cmd_gs(args, pres: Presentation, out) -> int:
    system = _system(pres, perturb=args.perturb, literal_z=args.literal_z,
                     all_decompositions=args.all_decompositions)
    b = Bounds(args.max_breadth, args.max_rdeg, args.max_level, pres.algebra.dim)
    rep = check_gs(system, b, pres.names, args.max_failures)
    d = rep.to_dict()
    d.update(command="check gs", bounds={"max_breadth": b.max_size, "max_rdeg": b.max_rdeg,
                                         "max_level": b.max_level},
             options={"perturb": args.perturb, "literal_z": args.literal_z,
                      "all_decompositions": args.all_decompositions})
    verdict = "ok" if rep.ok else "FAILED"
    lines = [f"gs: {verdict} ({rep.checked} compositions, {rep.failed} nonzero residuals)"]
    for kind, tally in rep.by_kind.items():
        lines.append(f"  {kind}: {tally['checked']} checked, {tally['failed']} failed")
    for f in rep.failures:
        lines.append("  " + json.dumps(f, sort_keys=True))
    _emit(d, args.json, lines, out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def identity_report(which: str, pres: Presentation, trials: int, seed: int) -> Report:
    """Run one identity suite against the presentation's relation set."""
    rng = random.Random(seed)
    a = pres.algebra
    names, n, lam = pres.names, a.dim, a.weight
    system = _system(pres)
    env = Envelope(system)
    rep = Report(which)
    if which == "envelope":
        return check_envelope(a, env)
    if which == "eq3":
        for l in range(5):
            for y in pres.oracle.letters(2):
                for x in pres.oracle.letters(2):
                    rep.checked += 1
                    try:
                        d = system.normal_form(eq3_defect(y, x, l, pres.oracle), kinds=("comm",))
                    except OracleIncomplete as exc:
                        rep.incomplete.append(str(exc))
                        continue
                    if d:
                        rep.fail(l=l, y=render_letter(y, names), x=render_letter(x, names), defect=d.to_text(names))
    elif which == "eq4":
        for _ in range(trials):
            t = rng.randint(1, 3)
            bs = [random_element(rng, n, 2, 2, 1, 0) for _ in range(t)]
            rep.checked += 1
            d = system.normal_form(eq4_element(bs, lam), kinds=("rb",))
            if d:
                rep.fail(args=[b.to_text(names) for b in bs], defect=d.to_text(names))
    elif which == "eq5":
        for _ in range(trials):
            pre = [random_element(rng, n, 1, 2, 1, 0) for _ in range(rng.randint(0, 2))]
            suf = [random_element(rng, n, 1, 2, 1, 0) for _ in range(rng.randint(0, 1))]
            b, k = random_element(rng, n, 1, 2, 1, 0), rng.randint(0, 2)
            rep.checked += 1
            d = system.normal_form(free_long_identity(pre, b, k, suf, lam), kinds=("rb",))
            if d:
                rep.fail(prefix=[x.to_text(names) for x in pre], block=b.to_text(names), k=k,
                         suffix=[x.to_text(names) for x in suf], defect=d.to_text(names))
    else:
        if which == "dendriform" and lam:
            raise InputError("the dendriform identities apply to weight 0 only")
        samples = operation_samples(env, rng, n, 60)
        rep = check_axioms(env, which, samples, trials, rng)
    rep.incomplete = sorted(set(rep.incomplete))
    return rep


def operation_samples(env: Envelope, rng: random.Random, n_gens: int, count: int, max_degree: int = 3):
    """Sums of two random operation monomials in the generators."""
    out = []
    while len(out) < count:
        e = random_monomial(env, rng, rng.randint(1, max_degree), n_gens)
        e = e + random_monomial(env, rng, rng.randint(1, max_degree), n_gens)
        if e:
            out.append(e)
    return out


def cmd_identities(args, pres: Presentation, out) -> int:
    rep = identity_report(args.which, pres, args.trials, args.seed)
    d = rep.to_dict()
    d.update(command="check identities", which=args.which, seed=args.seed, trials=args.trials)
    lines = _report_lines(rep) + [f"  seed {args.seed}"]
    _emit(d, args.json, lines, out)
    return _status(rep)


def cmd_doubling(args, pres: Presentation, out) -> int:
    rng = random.Random(args.seed)
    rep = Report("doubling")
    for i in range(args.trials):
        case = rng.choice(("pre", "post"))
        weight = 0 if case == "pre" else rng.choice((1, 2, -1))
        c = random_prepostlie(rng, case, rng.randint(1, 2), weight)
        sub = check_doubling(doubling(c))
        rep.checked += sub.checked
        for v in sub.violations:
            rep.fail(trial=i, case=case, weight=str(weight), **v)
    d = rep.to_dict()
    d.update(command="check doubling", seed=args.seed, trials=args.trials)
    _emit(d, args.json, _report_lines(rep) + [f"  seed {args.seed}"], out)
    return _status(rep)


COMMANDS = {"nf": cmd_nf, "basis": cmd_basis, "closure": cmd_closure}
SUITES = {"gs": cmd_gs, "identities": cmd_identities, "doubling": cmd_doubling}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    handler = COMMANDS.get(args.command) or SUITES[args.suite]
    as_json = getattr(args, "json", False)
    pres = None
    try:
        pres = _load(args)
        return handler(args, pres, out)
    except (InputError, ParseError, PresentationError) as exc:
        _error(out, err, as_json, "input-error", str(exc))
        return EXIT_INPUT
    except OracleIncomplete as exc:
        _error(out, err, as_json, "oracle-incomplete", str(exc), pair=[render_letter(x, pres.names if pres else None) for x in exc.pair])
        return EXIT_INCOMPLETE


def _error(out, err, as_json: bool, kind: str, message: str, **extra) -> None:
    if as_json:
        out.write(json.dumps({"error": kind, "message": message, **extra}, sort_keys=True, indent=2) + "\n")
    else:
        err.write(f"error ({kind}): {message}\n")


def main() -> None:
    sys.exit(run())
