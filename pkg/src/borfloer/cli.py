"""Command-line front end.

Reports are JSON with sorted keys and exact rational strings. Wall-clock
data lives in a separate metadata file (``--meta``), never in the report.
Exit codes: 0 pass, 1 verification failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .azdiag.at import DegenerateOffsets, build_at, offset_family
from .azdiag.az import build_az
from .azdiag.model import InvalidCircle
from .checks import SUITES
from .domains import verify_triangle_lemma
from .dstruct.gf2 import NotACycle, homology
from .dstruct.mor import (
    basic_label,
    box_tensor_complex,
    compose,
    compose_via_evaluation,
    g_at_map,
    mor_complex,
    yoneda_product,
)
from .dstruct.typed import (
    ChainMismatch,
    IdempotentViolation,
    StructureReport,
    TypeDMorphism,
    TypeDStructure,
    check_structure_equation,
    morphism_from_json,
    structure_from_json,
)
from .pmc import PMCError, PointedMatchedCircle, genus2_antipodal, genus2_split, pmc_from_json, torus, validate_pmc
from .strands import CircleMismatch, ClosureError, algebra_for

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

BUILTIN_CIRCLES = {"torus": torus, "genus2-split": genus2_split, "genus2-antipodal": genus2_antipodal}


_human = sys.stdout


def say(line: str = ""):
    """Human-readable output; moved to stderr when the report goes to stdout."""
    print(line, file=_human)


class InputError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


def thread_count() -> int:
    raw = os.environ.get("BORFLOER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"BORFLOER_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise InputError("BORFLOER_THREADS must be at least 1")
    return n


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})")


def load_circle(ref: str) -> PointedMatchedCircle:
    """A builtin circle name, or a path to a circle JSON file."""
    if ref in BUILTIN_CIRCLES:
        return BUILTIN_CIRCLES[ref]()
    data = _read_json(Path(ref))
    if not isinstance(data, dict) or "matching" not in data:
        raise InputError(f"{ref}: expected an object with a 'matching' list")
    return pmc_from_json(data)


def parse_offsets(pmc: PointedMatchedCircle, raw: str | None) -> dict | None:
    if raw is None:
        return None
    parts = raw.split(",")
    if len(parts) != 2:
        raise InputError("--offsets takes two rationals 'scale,shift'")
    try:
        scale, shift = (Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--offsets: cannot parse {raw!r}")
    return offset_family(pmc, scale, shift)


# -- workspace ----------------------------------------------------------------

def default_manifest() -> Path:
    return Path(str(resources.files("borfloer") / "data" / "manifest.json"))


@dataclass
class Workspace:
    circles: dict[str, PointedMatchedCircle] = field(default_factory=dict)
    structures: dict[str, TypeDStructure] = field(default_factory=dict)
    morphisms: dict[str, TypeDMorphism] = field(default_factory=dict)
    quarantine: dict[str, StructureReport] = field(default_factory=dict)

    @classmethod
    def load(cls, manifest: Path) -> "Workspace":
        data = _read_json(manifest)
        root = manifest.parent
        ws = cls()

        def entry(value):
            return _read_json(root / value) if isinstance(value, str) else value

        for name, value in sorted(data.get("circles", {}).items()):
            ref = entry(value)
            ws.circles[name] = validate_pmc(ref["matching"], ref.get("points"), name)
        for name, value in sorted(data.get("structures", {}).items()):
            raw = entry(value)
            raw.setdefault("name", name)
            try:
                N = structure_from_json(raw, ws.circles)
            except KeyError as exc:
                raise InputError(f"structure {name!r}: {exc.args[0]}")
            report = check_structure_equation(N)
            if report.ok:
                ws.structures[name] = N
            else:
                ws.quarantine[name] = report
        for name, value in sorted(data.get("morphisms", {}).items()):
            raw = entry(value)
            src, dst = raw.get("source"), raw.get("target")
            if src in ws.quarantine or dst in ws.quarantine:
                continue
            ws.morphisms[name] = morphism_from_json(raw, ws.structure(src), ws.structure(dst))
        return ws

    def structure(self, name: str) -> TypeDStructure:
        if name in self.quarantine:
            raise VerificationFailure(f"fixture {name!r} is quarantined: {self.quarantine[name].describe()}",
                                      {"quarantined": {name: self.quarantine[name].to_json()}})
        if name not in self.structures:
            raise InputError(f"unknown structure {name!r}; known: {', '.join(sorted(self.structures))}")
        return self.structures[name]

    def morphism(self, name: str) -> TypeDMorphism:
        if name not in self.morphisms:
            raise InputError(f"unknown morphism {name!r}; known: {', '.join(sorted(self.morphisms))}")
        return self.morphisms[name]

    def quarantine_json(self) -> dict:
        return {name: rep.to_json() for name, rep in sorted(self.quarantine.items())}


# -- commands -----------------------------------------------------------------

def cmd_pmc_validate(args) -> tuple[dict, bool]:
    if args.matching is not None:
        try:
            labels = [int(x) for x in args.matching.split(",")]
        except ValueError:
            raise InputError("--matching takes comma separated integers")
        pmc = validate_pmc(labels)
    elif args.circle:
        pmc = load_circle(args.circle)
    else:
        raise InputError("give a circle name, a file, or --matching")
    report = {
        "status": "PASS",
        "pmc": pmc.to_json(),
        "genus": pmc.genus,
        "points": pmc.n,
        "chords": pmc.n * (pmc.n - 1) // 2,
    }
    say(f"valid pointed matched circle: {pmc.n} points, genus {pmc.genus}, matching {list(pmc.matching)}")
    return report, True


def cmd_algebra(args) -> tuple[dict, bool]:
    pmc = load_circle(args.pmc)
    checks = [c.strip() for c in args.check.split(",") if c.strip()] if args.check else []
    unknown = [c for c in checks if c not in SUITES]
    if unknown:
        raise InputError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    alg = algebra_for(pmc)
    basis = alg.basis
    kwargs = {
        "axioms": {} if pmc.genus <= 1 else {"assoc_samples": args.samples, "seed": args.seed},
        "az": {} if pmc.genus <= 1 else {"action_samples": args.samples, "seed": args.seed},
        "at": {} if pmc.genus <= 1 else {"pair_samples": args.samples, "seed": args.seed},
    }
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        futures = [pool.submit(SUITES[c], pmc, **kwargs[c]) for c in checks]
        results = [f.result() for f in futures]
    weights: dict[int, int] = {}
    for t in basis:
        weights[t.weight] = weights.get(t.weight, 0) + 1
    report = {
        "pmc": pmc.to_json(),
        "basis_size": len(basis),
        "basis_by_weight": {str(k): v for k, v in sorted(weights.items())},
        "checks": [r.to_json() for r in results],
        "status": "PASS" if all(r.passed for r in results) else "FAIL",
    }
    if len(basis) <= 64:
        report["basis"] = [repr(t) for t in sorted(basis, key=lambda t: t.sort_key())]
    say(f"A({pmc.name or list(pmc.matching)}): {len(basis)} basis elements")
    for r in results:
        counts = ", ".join(f"{k}={v}" for k, v in r.counts.items())
        say(f"  {r.name:8s} {'PASS' if r.passed else 'FAIL'}  {counts}")
        if not r.passed:
            say(f"    first failure: {r.failure}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        report["first_failing_check"] = failed[0]
    return report, not failed


def _pair_report(N1: TypeDStructure, N2: TypeDStructure) -> dict:
    M = mor_complex(N1, N2)
    H = homology(M.complex)
    box = box_tensor_complex(N1, N2)
    return {
        "source": N1.name,
        "target": N2.name,
        "dim": M.complex.dim,
        "homology_rank": H.rank,
        "homology": H.to_json(basic_label),
        "box_tensor_identical": box.columns == M.complex.columns and box.labels == M.complex.labels,
    }


def _triple_report(N1: TypeDStructure, N2: TypeDStructure, N3: TypeDStructure) -> dict:
    M12, M23, M13 = mor_complex(N1, N2), mor_complex(N2, N3), mor_complex(N1, N3)
    H12, H23, H13 = homology(M12.complex), homology(M23.complex), homology(M13.complex)
    agree = True
    chain_map = True
    basis12 = [M12.morphism(1 << i) for i in range(M12.complex.dim)]
    basis23 = [M23.morphism(1 << i) for i in range(M23.complex.dim)]
    for f in basis12:
        for g in basis23:
            c = compose(f, g)
            if c != compose_via_evaluation(f, g) or c != g_at_map(f, g):
                agree = False
            if M13.D(c) != compose(M12.D(f), g) + compose(f, M23.D(g)):
                chain_map = False
    table = []
    for i, r in enumerate(H12.representatives):
        for j, s in enumerate(H23.representatives):
            prod = yoneda_product(M12, M12.morphism(r), M23, M23.morphism(s), M13, H13)
            coords = H13.coordinates(M13.vector(prod))
            table.append({"left": i, "right": j, "product": [k for k in range(H13.rank) if coords >> k & 1]})
    return {
        "structures": [N1.name, N2.name, N3.name],
        "composition_agreement": agree,
        "leibniz": chain_map,
        "yoneda": table,
    }


def cmd_mor(args) -> tuple[dict, bool]:
    ws = Workspace.load(Path(args.manifest) if args.manifest else default_manifest())
    names = args.structures
    if len(names) not in (0, 2, 3):
        raise InputError("mor takes no structures (all shipped pairs), two, or three")
    if names:
        Ns = [ws.structure(n) for n in names]
        pairs = [(Ns[0], Ns[1])]
        triples = [tuple(Ns)] if len(Ns) == 3 else []
        if len(Ns) == 3:
            pairs += [(Ns[1], Ns[2]), (Ns[0], Ns[2])]
    else:
        Ns = [ws.structures[n] for n in sorted(ws.structures)]
        pairs = list(itertools.product(Ns, repeat=2))
        triples = list(itertools.product(Ns, repeat=3))
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        pair_reports = list(pool.map(lambda p: _pair_report(*p), pairs))
        triple_reports = list(pool.map(lambda t: _triple_report(*t), triples))
    ok = all(p["box_tensor_identical"] for p in pair_reports) and all(
        t["composition_agreement"] and t["leibniz"] for t in triple_reports)
    report = {
        "pairs": pair_reports,
        "triples": triple_reports,
        "quarantine": ws.quarantine_json(),
        "status": "PASS" if ok else "FAIL",
    }
    if len(pair_reports) == 1 or names:
        report.update({k: pair_reports[0][k] for k in ("dim", "homology_rank")})
    if len(triple_reports) == 1:
        report["composition_agreement"] = triple_reports[0]["composition_agreement"]
    say(f"{'source':>10s} {'target':>10s} {'dim':>5s} {'H':>3s}  box")
    for p in pair_reports:
        say(f"{p['source']:>10s} {p['target']:>10s} {p['dim']:5d} {p['homology_rank']:3d}  "
              f"{'same' if p['box_tensor_identical'] else 'DIFFERENT'}")
    if triple_reports:
        n_ok = sum(t["composition_agreement"] and t["leibniz"] for t in triple_reports)
        say(f"composition agreement on {n_ok}/{len(triple_reports)} triples")
    for name, rep in sorted(ws.quarantine.items()):
        say(f"quarantined {name}: {rep.describe()}")
    return report, ok


def cmd_homology(args) -> tuple[dict, bool]:
    ws = Workspace.load(Path(args.manifest) if args.manifest else default_manifest())
    N1, N2 = ws.structure(args.source), ws.structure(args.target)
    H = homology(mor_complex(N1, N2).complex)
    out = H.to_json(basic_label)
    say(f"H(Mor({N1.name}, {N2.name})) has rank {H.rank}")
    for rep in out["representatives"]:
        say("  " + " + ".join(rep))
    return out, True


def cmd_compose(args) -> tuple[dict, bool]:
    ws = Workspace.load(Path(args.manifest) if args.manifest else default_manifest())
    f, g = ws.morphism(args.f), ws.morphism(args.g)
    if f.target.name != g.source.name:
        raise InputError(f"{args.f} ends at {f.target.name} but {args.g} starts at {g.source.name}")
    c1, c2, c3 = compose(f, g), compose_via_evaluation(f, g), g_at_map(f, g)
    agree = c1 == c2 == c3
    report = {"composite": c1.to_json(), "composition_agreement": agree}
    M12, M23 = mor_complex(f.source, f.target), mor_complex(g.source, g.target)
    M13 = mor_complex(f.source, g.target)
    try:
        rep = yoneda_product(M12, f, M23, g, M13)
        report["homology_class"] = rep.to_json()
    except NotACycle:
        report["homology_class"] = None
    say(f"{args.g} o {args.f} = {c1!r}")
    say(f"compose / evaluation / g_at agree: {agree}")
    return report, agree


def _lemma_model(args):
    pmc = load_circle(args.pmc)
    return build_at(pmc, parse_offsets(pmc, args.offsets))


def cmd_verify_triangle_lemma(args) -> tuple[dict, bool]:
    if args.cap < 0:
        raise InputError("--cap must be nonnegative")
    model = _lemma_model(args)
    if args.dump_diagram:
        Path(args.dump_diagram).write_text(dumps(model.to_json()))
    rep = verify_triangle_lemma(model, args.cap, workers=thread_count())
    out = rep.to_json()
    say(f"triangle lemma, genus {rep.genus}, cap {rep.cap}: {rep.status}")
    say(f"  domains checked {rep.domains}, boundary touching {rep.boundary_touching}, "
          f"Euler measures {', '.join(rep.euler_values) or '-'}")
    if rep.witness:
        say(f"  witness: {json.dumps(rep.witness, sort_keys=True)}")
    return out, rep.passed


def cmd_dump_diagram(args) -> tuple[dict, bool]:
    pmc = load_circle(args.pmc)
    if args.model == "az":
        if args.offsets:
            raise InputError("--offsets only applies to the AT model")
        model = build_az(pmc)
    else:
        model = build_at(pmc, parse_offsets(pmc, args.offsets))
    say(f"{args.model.upper()} model: {len(model.vertices)} vertices, {len(model.regions)} regions")
    return model.to_json(), True


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="borfloer", description="Bordered Floer morphism spaces over the strands algebra.")
    p.add_argument("--version", action="version", version=f"borfloer {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def outputs(sp):
        sp.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
        sp.add_argument("--meta", metavar="PATH", help="write run metadata (timings, threads) here")

    pp = sub.add_parser("pmc", help="pointed matched circles")
    psub = pp.add_subparsers(dest="pmc_command", required=True)
    pv = psub.add_parser("validate", help="validate a circle")
    pv.add_argument("circle", nargs="?", help="builtin name or JSON file")
    pv.add_argument("--matching", help="comma separated pair ids, e.g. 1,2,1,2")
    outputs(pv)
    pv.set_defaults(func=cmd_pmc_validate)

    pa = sub.add_parser("algebra", help="build A(Z) and run checks")
    pa.add_argument("--pmc", required=True, help="builtin name or JSON file")
    pa.add_argument("--check", default="", help="comma separated subset of axioms,az,at")
    pa.add_argument("--samples", type=int, default=10_000, help="random samples for sampled checks (genus >= 2)")
    pa.add_argument("--seed", type=int, default=0)
    outputs(pa)
    pa.set_defaults(func=cmd_algebra)

    pm = sub.add_parser("mor", help="Mor complexes, homology and composition")
    pm.add_argument("structures", nargs="*", help="N1 N2 [N3]; none means every shipped pair and triple")
    pm.add_argument("--manifest", help="workspace manifest (defaults to the shipped fixtures)")
    outputs(pm)
    pm.set_defaults(func=cmd_mor)

    ph = sub.add_parser("homology", help="homology of Mor(N1, N2)")
    ph.add_argument("source")
    ph.add_argument("target")
    ph.add_argument("--manifest")
    outputs(ph)
    ph.set_defaults(func=cmd_homology)

    pc = sub.add_parser("compose", help="compose two morphism fixtures")
    pc.add_argument("f")
    pc.add_argument("g")
    pc.add_argument("--manifest")
    outputs(pc)
    pc.set_defaults(func=cmd_compose)

    pt = sub.add_parser("verify-triangle-lemma", help="bounded search for boundary-touching triangle domains")
    pt.add_argument("--pmc", default="torus")
    pt.add_argument("--cap", type=int, default=4)
    pt.add_argument("--offsets", help="'scale,shift' for the offset family")
    pt.add_argument("--dump-diagram", metavar="PATH", help="also write the AT model here")
    outputs(pt)
    pt.set_defaults(func=cmd_verify_triangle_lemma)

    pd = sub.add_parser("dump-diagram", help="write a planar model as JSON")
    pd.add_argument("--pmc", default="torus")
    pd.add_argument("--model", choices=("az", "at"), default="at")
    pd.add_argument("--offsets")
    outputs(pd)
    pd.set_defaults(func=cmd_dump_diagram)
    return p


def _emit(args, report: dict, started: float):
    if args.json == "-":
        sys.stdout.write(dumps(report))
    elif args.json:
        Path(args.json).write_text(dumps(report))
    if args.meta:
        meta = {
            "command": args.command,
            "threads": os.environ.get("BORFLOER_THREADS", "1"),
            "started": time.strftime("%Y-%m-%dT%H:%M:%S", time.localtime(started)),
            "seconds": round(time.time() - started, 3),
            "version": __version__,
        }
        Path(args.meta).write_text(dumps(meta))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    global _human
    _human = sys.stderr if args.json == "-" else sys.stdout
    started = time.time()
    try:
        report, ok = args.func(args)
    except VerificationFailure as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        _emit(args, {"status": "FAIL", "error": str(exc), **(exc.report or {})}, started)
        return EXIT_FAIL
    except (InputError, PMCError, InvalidCircle, DegenerateOffsets, CircleMismatch, IdempotentViolation,
            ChainMismatch, ClosureError, KeyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, report, started)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
