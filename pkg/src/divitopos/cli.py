"""``divitopos`` command line.

Exit codes: 0 success, 1 verification failure (witness on stdout), 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import equivalences as eq
from .errors import DivitoposError, TopologyError
from .heyting import boolean_witness, check_negation_laws, implies, neg
from .lattice import AmbientLattice, is_squarefree
from .omega import (
    DEFAULT_UNIQUENESS_BOUND,
    build_omega,
    char_map,
    is_closed_subpresheaf,
    subpresheaf_from_json,
    verify_characteristic,
)
from .presheaf import is_sheaf, presheaf_from_json, validate_presheaf
from .sieves import BUILTIN_TOPOLOGIES, build_topology, check_topology_axioms, topology_from_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj, out) -> None:
    if isinstance(obj, str):
        out.write(obj if obj.endswith("\n") else obj + "\n")
    else:
        out.write(json.dumps(obj, indent=2) + "\n")


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc


def _topology(name_or_path: str, lattice: AmbientLattice):
    if name_or_path in BUILTIN_TOPOLOGIES:
        return build_topology(lattice, name_or_path)
    if Path(name_or_path).is_file():
        j = topology_from_json(_load_json(name_or_path))
        if j.lattice != lattice:
            raise UsageError(f"topology modulus {j.lattice.modulus} differs from {lattice.modulus}")
        return j
    raise TopologyError(f"unknown topology {name_or_path!r}; expected one of {', '.join(BUILTIN_TOPOLOGIES)} or a JSON file")


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_lattice(args, out):
    lattice = AmbientLattice(args.modulus)
    if args.figure:
        from .plotting import plot_hasse

        plot_hasse(lattice, args.figure)
    if args.format == "dot":
        _emit(lattice.to_dot(), out)
    elif args.format == "text":
        lines = [f"D_{lattice.modulus}: {' '.join(map(str, lattice.elements))}"]
        lines += [f"{k} -> {n}" for k, n in lattice.covering_edges()]
        _emit("\n".join(lines), out)
    else:
        _emit(lattice.to_json(), out)
    return EXIT_OK


def cmd_heyting(args, out):
    lattice = AmbientLattice(args.modulus)
    if args.op in ("implies", "neg"):
        vals = _int_list(args.args or "")
        need = 2 if args.op == "implies" else 1
        if len(vals) != need:
            raise UsageError(f"--op {args.op} takes {need} argument(s) via --args")
        result = implies(lattice, *vals) if args.op == "implies" else neg(lattice, *vals)
        _emit(str(result), out)
        return EXIT_OK
    if args.op == "laws":
        report = check_negation_laws(lattice)
        _emit(report.to_json(), out)
        return EXIT_OK if report.passed else EXIT_FAIL
    w = boolean_witness(lattice)
    boolean = w is None
    payload = {"modulus": lattice.modulus, "boolean": boolean, "squarefree": is_squarefree(lattice.modulus)}
    if w is not None:
        payload["witness"] = {"n": w, "negneg": neg(lattice, neg(lattice, w))}
    _emit(payload, out)
    return EXIT_OK if boolean == payload["squarefree"] else EXIT_FAIL


def cmd_topology(args, out):
    lattice = AmbientLattice(args.modulus)
    j = _topology(args.file or args.name, lattice)
    if args.check:
        report = check_topology_axioms(lattice, j)
        payload = {"modulus": lattice.modulus, "name": j.name, "axioms": report.to_json(), "pass": report.passed}
        if args.dump:
            payload["topology"] = j.to_json()
        _emit(payload, out)
        return EXIT_OK if report.passed else EXIT_FAIL
    _emit(j.to_json(), out)
    return EXIT_OK


def _load_presheaf(path):
    f = presheaf_from_json(_load_json(path))
    valid, violation = validate_presheaf(f)
    return f, valid, violation


def cmd_sheaf(args, out):
    f, valid, violation = _load_presheaf(args.presheaf)
    if not valid:
        _emit({"valid": False, "violation": violation.to_json()}, out)
        return EXIT_FAIL
    j = _topology(args.topology, f.lattice)
    verdict = is_sheaf(f, j)
    _emit({"valid": True, "topology": j.name, **verdict.to_json()}, out)
    return EXIT_OK if verdict.is_sheaf else EXIT_FAIL


def cmd_omega(args, out):
    lattice = AmbientLattice(args.modulus)
    j = _topology(args.topology, lattice)
    omega = build_omega(lattice, j, principal=args.principal)
    if args.check:
        valid, violation = validate_presheaf(omega.underlying)
        verdict = is_sheaf(omega.underlying, j)
        payload = {
            "topology": j.name,
            "principal": args.principal,
            "valid": valid,
            "violation": violation.to_json() if violation else None,
            **verdict.to_json(),
        }
        if args.dump:
            payload["omega"] = omega.to_json()
        _emit(payload, out)
        return EXIT_OK if valid and verdict.is_sheaf else EXIT_FAIL
    _emit(omega.to_json(), out)
    return EXIT_OK


def cmd_classify(args, out):
    f, valid, violation = _load_presheaf(args.presheaf)
    if not valid:
        _emit({"valid": False, "violation": violation.to_json()}, out)
        return EXIT_FAIL
    j = _topology(args.topology, f.lattice)
    verdict = is_sheaf(f, j)
    if not verdict.is_sheaf:
        _emit({"check": "presheaf is not a sheaf", **verdict.to_json()}, out)
        return EXIT_FAIL
    a = subpresheaf_from_json(f, _load_json(args.sub))
    bad = a.closure_witness()
    if bad is not None:
        k, n, x = bad
        _emit({"check": "subpresheaf not closed under restriction", "k": k, "n": n, "element": str(x)}, out)
        return EXIT_FAIL
    omega = build_omega(f.lattice, j)
    chi = char_map(a, f, j)
    payload = {"topology": j.name, "closed": is_closed_subpresheaf(a, j), "chi": chi.to_json()}
    if not payload["closed"]:
        _emit({**payload, "check": "subpresheaf is not J-closed, so it is not a subsheaf"}, out)
        return EXIT_FAIL
    result = verify_characteristic(f, a, chi, omega, args.bound)
    _emit({**payload, **result.to_json()}, out)
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_equiv(args, out):
    lattice = AmbientLattice(args.modulus)
    family = eq.build_family(lattice, args.kind)
    payload: dict = {"modulus": lattice.modulus, "kind": family.kind}
    ok = True
    if args.check_iso:
        report = eq.check_poset_iso(family, lattice)
        payload["iso"] = report.to_json()
        ok &= report.passed
    if args.transport:
        if not eq.check_poset_iso(family, lattice).passed:
            _emit({**payload, "transport": None, "reason": "family is not order-isomorphic"}, out)
            return EXIT_FAIL
        j = _topology(args.transport, lattice)
        t, axioms = eq.transport_topology(j, family)
        payload["transport"] = {
            "topology": j.name,
            "axioms": axioms.to_json(),
            "round_trip": t.forget().covers == j.covers,
        }
        ok &= axioms.passed and payload["transport"]["round_trip"]
    if args.dump or not (args.check_iso or args.transport):
        payload["carriers"] = family.to_json()["carriers"]
    _emit(payload, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(args, out):
    from .verify import verify_all

    report = verify_all(args.modulus, args.seed, args.max_size)
    if args.figures:
        from .plotting import plot_check_summary, plot_hasse

        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        plot_hasse(AmbientLattice(args.modulus), outdir / f"hasse_{args.modulus}.png")
        plot_check_summary(report["criteria"] + report["suites"], outdir / "verification_summary.png")
    _emit(report, out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def _max_size(text):
    value = int(text)
    if not 1 <= value <= 4:
        raise argparse.ArgumentTypeError("must be between 1 and 4")
    return value


def _modulus(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="divitopos", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log check timings to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="dump D_N as JSON, DOT or text")
    p.add_argument("--modulus", type=_modulus, required=True)
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.add_argument("--figure", help="also write a Hasse diagram image to this path")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("heyting", help="implication, negation and negation laws")
    p.add_argument("--modulus", type=_modulus, required=True)
    p.add_argument("--op", choices=("implies", "neg", "laws", "boolean"), required=True)
    p.add_argument("--args", help="comma-separated operands, e.g. 4,6")
    p.set_defaults(func=cmd_heyting)

    p = sub.add_parser("topology", help="build or load a topology and check its axioms")
    p.add_argument("--modulus", type=_modulus, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--name")
    group.add_argument("--file", help="custom topology JSON")
    p.add_argument("--check", action="store_true")
    p.add_argument("--dump", action="store_true")
    p.set_defaults(func=cmd_topology)

    p = sub.add_parser("sheaf", help="check the sheaf condition for a presheaf JSON file")
    p.add_argument("--presheaf", required=True)
    p.add_argument("--topology", required=True, help="built-in name or topology JSON path")
    p.set_defaults(func=cmd_sheaf)

    p = sub.add_parser("omega", help="the subobject classifier of a site")
    p.add_argument("--modulus", type=_modulus, required=True)
    p.add_argument("--topology", required=True)
    p.add_argument("--dump", action="store_true")
    p.add_argument("--check", action="store_true", help="verify functoriality and sheafhood")
    p.add_argument("--principal", action="store_true", help="use principal sieves instead of closed sieves")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("classify", help="characteristic map of a subpresheaf")
    p.add_argument("--presheaf", required=True)
    p.add_argument("--sub", required=True, help='JSON {"selection": {"n": [labels]}}')
    p.add_argument("--topology", required=True)
    p.add_argument("--bound", type=int, default=DEFAULT_UNIQUENESS_BOUND,
                   help="largest candidate space searched for uniqueness")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("equiv", help="divisor-indexed families isomorphic to D_N")
    p.add_argument("--modulus", type=_modulus, required=True)
    p.add_argument("--kind", choices=sorted(eq.KIND_ALIASES), required=True)
    p.add_argument("--check-iso", action="store_true")
    p.add_argument("--transport", metavar="TOPOLOGY")
    p.add_argument("--dump", action="store_true")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("verify-all", help="run every verification suite")
    p.add_argument("--modulus", type=_modulus, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-size", type=_max_size, default=3)
    p.add_argument("--figures", help="directory for the Hasse diagram and summary figures")
    p.set_defaults(func=cmd_verify_all)
    return parser


def run_command(argv, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args, out)
    except (UsageError, DivitoposError) as exc:
        print(f"divitopos: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
