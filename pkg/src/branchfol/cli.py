"""Command-line workbench.

Exit codes: 0 when every check passes, 1 when a mathematical check fails or is
inconclusive, 2 for input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__
from .branched import BranchedMap, random_branched_map, rational_point
from .errors import BranchfolError, CheckFailure, InputError, MixedDegrees, ParseError, ZeroForm
from .foliation import ProjFoliation, euler_defect, is_integrable, normalize_representative
from .forms import saturate
from .plane import PlaneFoliation, random_plane_foliation, random_three_line_foliation, total_multiplicity
from .pullback import (expected_degree, fw_weight_report, kupka_certificate, local_model, pullback,
                       quasi_homogeneous_certificate)
from .textio import (format_foliation_text, format_form, format_map_text, format_poly, parse_foliation_text,
                     parse_map_text, parse_point)

SCHEMA_ID = "branchfol-report/1"
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class VerificationReport:
    command: str
    inputs: Dict[str, object] = field(default_factory=dict)
    checks: List[Dict[str, object]] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)
    results: Dict[str, object] = field(default_factory=dict)
    tool_version: str = __version__

    def add(self, name: str, status: str, details=None, seconds: float = 0.0) -> None:
        if any(c["name"] == name for c in self.checks):
            raise ValueError(f"check {name!r} reported twice")
        self.checks.append({"name": name, "status": status, "details": details})
        self.timing[name] = round(seconds, 6)

    def run(self, name: str, fn: Callable[[], tuple]) -> object:
        """Run ``fn`` returning ``(status, details, value)`` and record it."""
        t = time.perf_counter()
        status, details, value = fn()
        self.add(name, status, details, time.perf_counter() - t)
        return value

    @property
    def ok(self) -> bool:
        return all(c["status"] == PASS for c in self.checks)

    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_ID,
            "tool_version": self.tool_version,
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "results": self.results,
            "timing": self.timing,
            "status": PASS if self.ok else FAIL,
        }

    def to_text(self) -> str:
        lines = [f"{self.command} (branchfol {self.tool_version})"]
        for c in self.checks:
            detail = c["details"]
            if isinstance(detail, (dict, list)):
                detail = json.dumps(detail, sort_keys=True)
            lines.append(f"  {c['status'].upper():<12} {c['name']}" + (f": {detail}" if detail not in (None, "") else ""))
        lines.append("result: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_map(path: str) -> BranchedMap:
    header, polys = parse_map_text(_read(path))
    f = BranchedMap(header["n"], header["nu"], header["alpha"], header["gamma"], *polys)
    return f.validate()


def _load_foliation_form(path: str):
    return parse_foliation_text(_read(path))


def _load_plane(path: str) -> PlaneFoliation:
    n, form = _load_foliation_form(path)
    if n != 2:
        raise InputError(f"expected a foliation on P^2, got n={n}")
    return PlaneFoliation.from_foliation(ProjFoliation.from_one_form(form))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check_foliation(args) -> VerificationReport:
    n, form = _load_foliation_form(args.file)
    rep = VerificationReport("check-foliation", {"file": Path(args.file).name, "n": n, "form": format_form(form)})
    if form.is_zero():
        raise ZeroForm("the zero form does not define a foliation")
    if not form.is_homogeneous():
        raise MixedDegrees(f"coefficient degrees {sorted(form.coefficient_degrees())} are not one common degree")
    g, sat = saturate(form)
    _, sat = normalize_representative(sat)
    rep.add("saturation", PASS, {"saturant": format_poly(g), "saturated_input": g.is_constant()})
    defect = rep.run("euler", lambda: ((PASS, None, None) if not euler_defect(sat) else
                                      (FAIL, f"i_R omega = {format_poly(euler_defect(sat))}", None)))
    rep.run("integrability", lambda: ((PASS, None, None) if is_integrable(sat) else
                                      (FAIL, "omega ^ d omega != 0", None)))
    (deg,) = sat.coefficient_degrees()
    rep.add("degree", PASS, {"degree": deg - 1})
    gens = [format_poly(c) for c in sat.one_form_coeffs()]
    rep.results = {"degree": deg - 1, "euler_ok": rep.checks[1]["status"] == PASS,
                   "integrable_ok": rep.checks[2]["status"] == PASS, "saturated_ok": g.is_constant(),
                   "generators": gens}
    return rep


def cmd_pullback(args) -> VerificationReport:
    f = _load_map(args.map)
    G = _load_plane(args.foliation)
    rep = VerificationReport("pullback", {"map": Path(args.map).name, "foliation": Path(args.foliation).name,
                                          "n": f.n, "nu": f.nu, "alpha": f.alpha, "gamma": f.gamma, "d": G.d})
    expected = expected_degree(f.nu, f.alpha, f.alpha, f.gamma, G.d)
    t = time.perf_counter()
    result = pullback(f, G)
    rep.add("pullback", PASS, {"formula_agrees": result.formula_agrees}, time.perf_counter() - t)
    rep.add("euler", PASS, None)
    rep.add("integrability", PASS, None)
    rep.add("degree_bookkeeping", PASS if result.bookkeeping_ok else FAIL,
            {"raw": result.raw_degree, "saturant": result.saturant_degree, "saturated": result.degree + 1})
    if result.degree == expected:
        rep.add("degree_formula", PASS, {"expected": expected, "actual": result.degree})
    else:
        rep.add("degree_formula", FAIL, {"expected": expected, "actual": result.degree,
                                         "note": "pair is not generic; saturant accounts for the gap"})
    certs = []
    for text in args.at or []:
        pt = parse_point(text)
        t = time.perf_counter()
        cert = kupka_certificate(result.foliation, pt)
        certs.append(cert.to_json())
        rep.add(f"kupka@{text}", PASS if cert.kind == "Kupka" else FAIL, {"kind": cert.kind},
                time.perf_counter() - t)
    rep.results = {**result.to_json(), "euler_ok": True, "integrable_ok": True, "certificates": certs,
                   "foliation": format_form(result.foliation.omega, "z")}
    return rep


def cmd_singularities(args) -> VerificationReport:
    G = _load_plane(args.foliation)
    rep = VerificationReport("singularities", {"foliation": Path(args.foliation).name, "d": G.d, "mode": args.mode,
                                               "seed": args.seed})
    t = time.perf_counter()
    try:
        pts = G.singular_points(mode=args.mode, seed=args.seed, tol_residual=args.tol_residual,
                                tol_cluster=args.tol_cluster)
    except CheckFailure as exc:
        rep.add("solve", INCONCLUSIVE, str(exc), time.perf_counter() - t)
        return rep
    rep.add("solve", PASS, {"points": len(pts)}, time.perf_counter() - t)
    total = total_multiplicity(pts)
    expected = G.expected_singular_count()
    rep.add("count", PASS if total == expected else FAIL, {"found": total, "expected": expected})
    if args.mode == "exact":
        n_exact = sum(1 for p in pts if p.exact)
        if n_exact == len(pts):
            rep.add("exact_analysis", PASS, {"exact_points": n_exact})
        else:
            rep.add("exact_analysis", INCONCLUSIVE,
                    {"exact_points": n_exact, "irrational_points": len(pts) - n_exact})
    rep.results = {"singularities": [_rounded(p.to_json()) for p in pts], "total_multiplicity": total,
                   "expected": expected}
    return rep


def _rounded(obj):
    """Round floats so reports are stable across platforms."""
    if isinstance(obj, float):
        r = round(obj, 9)
        return 0.0 if r == 0 else r
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_rounded(v) for v in obj]
    return obj


def cmd_genericity(args) -> VerificationReport:
    f = _load_map(args.map)
    rep = VerificationReport("genericity", {"map": Path(args.map).name, "certify": args.certify})
    points = [parse_point(p) for p in args.points or []]
    count = f.n == 3 and not args.no_count
    cert = None
    t = time.perf_counter()
    try:
        cert = f.genericity_check(points, certify=args.certify, count=count, max_degree=args.max_degree,
                                  max_pairs=args.max_pairs)
    except CheckFailure as exc:
        rep.add("genericity", INCONCLUSIVE if "Buchberger" in str(exc) else FAIL, str(exc), time.perf_counter() - t)
        return rep
    for text, pc in zip(args.points or [], cert.checked_points):
        rep.add(f"rank3@{text}", PASS if pc.rank3 else FAIL, None)
    if count:
        numeric = []
        for z in cert.numeric_points:
            q = rational_point(z, f)
            entry = {"coords": [[round(c.real, 9) + 0.0, round(c.imag, 9) + 0.0] for c in z], "rational": q is not None}
            if q is not None:
                entry["rank3"] = f.genericity_check([q]).checked_points[0].rank3
            numeric.append(entry)
        # deterministic order
        numeric.sort(key=lambda e: json.dumps(e["coords"]))
        ok = cert.bezout_found == cert.bezout_expected and all(e.get("rank3", True) for e in numeric)
        rep.add("bezout", PASS if ok else FAIL, {"expected": int(cert.bezout_expected) if cert.bezout_expected.denominator == 1
                                                 else str(cert.bezout_expected), "found": cert.bezout_found,
                                                 "scheme_length": f.scheme_length()})
        rep.results["numeric_points"] = numeric
    if args.certify:
        rep.add("gold_standard", PASS if cert.gold_standard else FAIL, {"gold_standard": cert.gold_standard})
    rep.results.update(cert.to_json())
    return rep


def cmd_gen(args) -> VerificationReport:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rep = VerificationReport("gen", {"kind": args.kind, "seed": args.seed})
    files = {}
    if args.kind in ("branched-map", "pair"):
        if args.nu % args.alpha or args.nu % args.gamma:
            raise InputError(f"nu = {args.nu} is not divisible by alpha = {args.alpha} and gamma = {args.gamma}")
        f = random_branched_map(args.n, args.nu, args.alpha, args.gamma, args.seed)
        text = format_map_text({"n": f.n, "nu": f.nu, "alpha": f.alpha, "gamma": f.gamma}, f.components)
        files["map.txt"] = text
    if args.kind in ("plane-foliation", "pair"):
        three = args.kind == "pair" and args.alpha > 1
        G = random_three_line_foliation(args.d, args.seed) if three else random_plane_foliation(args.d, args.seed)
        files["foliation.txt"] = format_foliation_text(2, G.omega)
    manifest = {"kind": args.kind, "seed": args.seed, "tool_version": __version__, "files": sorted(files),
                "params": {k: getattr(args, k) for k in ("n", "nu", "alpha", "gamma", "d")}}
    for name, text in files.items():
        (out / name).write_text(text)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    rep.add("generate", PASS, {"files": sorted(files) + ["manifest.json"]})
    rep.results = manifest
    return rep


def cmd_local_cert(args) -> VerificationReport:
    rep = VerificationReport("local-cert", {"gamma": args.gamma})
    if args.foliation:
        G = _load_plane(args.foliation)
        if G.A is None:
            raise InputError("local models are built from foliations leaving Z = 0 invariant")
        eta = local_model(G, args.gamma)
        d = G.d
        rep.inputs.update({"foliation": Path(args.foliation).name, "d": d})
        weights = fw_weight_report(G, args.gamma)
        rep.results["fw_weights"] = weights
    elif args.form:
        n, eta = _load_foliation_form(args.form)
        rep.inputs.update({"form": Path(args.form).name})
        if args.kupka:
            pt = parse_point(args.at) if args.at else [0] * eta.nvars
            cert = kupka_certificate(eta, pt)
            rep.add("kupka", PASS if cert.kind == "Kupka" else FAIL, {"kind": cert.kind})
            rep.results["certificate"] = cert.to_json()
            return rep
        if args.d is None:
            raise InputError("--d is required with --form")
        d = args.d
    else:
        raise InputError("one of --foliation or --form is required")
    rep.inputs["local_model"] = format_form(eta, "x")
    cert = quasi_homogeneous_certificate(eta, args.gamma, d)
    names = {"i_S_eta": "euler_weighted", "lie_derivative": "lie_multiplier", "DZ_null": "dz_null",
             "bracket": "bracket"}
    for key, name in names.items():
        rep.add(name, FAIL if key in cert.failed else PASS, None)
    rep.add("kind", PASS if cert.kind == "QuasiHomogeneous" else FAIL, {"kind": cert.kind})
    rep.results["certificate"] = cert.to_json()
    return rep


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--mode", choices=("exact", "numeric"), default="numeric")
    common.add_argument("--certify", action="store_true", help="run the Groebner certification")
    common.add_argument("--tol-residual", type=float, default=1e-10)
    common.add_argument("--tol-cluster", type=float, default=1e-6)

    parser = argparse.ArgumentParser(prog="branchfol", description="Branched pull-back foliation workbench")
    parser.add_argument("--version", action="version", version=f"branchfol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-foliation", parents=[common], help="Euler, integrability and degree of a form")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_foliation)

    p = sub.add_parser("pullback", parents=[common], help="pull a plane foliation back along a branched map")
    p.add_argument("map")
    p.add_argument("foliation")
    p.add_argument("--at", action="append", metavar="POINT", help="Kupka certificate at a projective point")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("singularities", parents=[common], help="singular points of a plane foliation")
    p.add_argument("foliation")
    p.set_defaults(func=cmd_singularities)

    p = sub.add_parser("genericity", parents=[common], help="genericity of a branched map")
    p.add_argument("map")
    p.add_argument("--points", action="append", metavar="POINT")
    p.add_argument("--no-count", action="store_true", help="skip the numeric Bezout count")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--max-pairs", type=int, default=5000)
    p.set_defaults(func=cmd_genericity)

    p = sub.add_parser("gen", parents=[common], help="seeded instance generator")
    p.add_argument("kind", choices=("plane-foliation", "branched-map", "pair"))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--nu", type=int, default=2)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--gamma", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("local-cert", parents=[common], help="quasi-homogeneous or Kupka local certificate")
    p.add_argument("--foliation", help="plane foliation; the local model is built from it")
    p.add_argument("--form", help="explicit local 1-form file")
    p.add_argument("--gamma", type=int, default=2)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--kupka", action="store_true", help="Kupka test instead of the quasi-homogeneous checks")
    p.add_argument("--at", help="affine point for --kupka (default: origin)")
    p.set_defaults(func=cmd_local_cert)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        rep = args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(rep.to_text())
    if args.json:
        Path(args.json).write_text(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n")
    return rep.exit_code()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
