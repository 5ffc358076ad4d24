"""Command line entry point ``qhat``.

``qhat verify`` runs the verification suite and exits with the number of
failed checks.  The query commands take operands that name fixtures
(``P``, ``Ct``, ``I3[1]`` ...) or JSON files holding a representation
(``{"dims": ..., "maps": ...}``) or a complex (``{"bottom": ..., "objects": ...}``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bondal
from .chaincat import BoundedComplex, complex_from_json, derived_hom_dims
from .functors import (
    left_mutate,
    minimal_injective,
    minimal_projective,
    right_mutate,
    serre,
    serre_inverse,
    spherical_twist,
)
from .homalg import k0_class
from .repcore import RepresentationError, representation_from_json


class InputError(Exception):
    pass


def _load_file(fs: bondal.FixtureSet, path: str) -> BoundedComplex:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None
    try:
        if isinstance(data, dict) and "objects" in data:
            return complex_from_json(fs.algebra, data)
        if isinstance(data, dict) and "dims" in data:
            return BoundedComplex.module(representation_from_json(fs.algebra, data, name=p.stem))
    except (KeyError, TypeError, ValueError, RepresentationError) as exc:
        raise InputError(f"{path}: not a valid representation or complex ({exc})") from None
    raise InputError(f"{path}: expected a representation or a complex")


def _operands(fs: bondal.FixtureSet, names: list[str], files: list[str], count: int) -> list[BoundedComplex]:
    out = []
    for name in names:
        if name.endswith(".json"):
            out.append(_load_file(fs, name))
            continue
        try:
            out.append(fs.resolve(name))
        except KeyError:
            raise InputError(f"unknown fixture {name!r}") from None
    out.extend(_load_file(fs, f) for f in files)
    if len(out) != count:
        raise InputError(f"expected {count} operand(s), got {len(out)}")
    return out


def _range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use LO..HI") from None


def _describe(X: BoundedComplex) -> dict:
    return {str(n): list(X.obj(n).dims) for n in X.degrees if not X.obj(n).is_zero()}


def _minimal(X: BoundedComplex) -> str:
    return repr(minimal_projective(X).structured)


def _emit(result: dict, args) -> None:
    text = json.dumps(result, indent=2, sort_keys=True, default=str)
    print(text)
    if getattr(args, "json", None):
        Path(args.json).write_text(text + "\n")


def cmd_verify(args) -> int:
    fs = bondal.load_fixtures()
    names = args.check or None
    report = bondal.verify(names, seed=args.seed, fixtures=fs)
    for e in report.entries:
        line = f"{e.check:<26} {e.status.upper()}"
        if args.timings:
            line += f"  {e.seconds:.2f}s"
        print(line)
        if not e.passed:
            for s in e.witness:
                if not s["ok"]:
                    print(f"    failed: {s['claim']}")
    print(f"{len(report.entries) - report.failures}/{len(report.entries)} checks passed")
    if args.json:
        Path(args.json).write_text(report.dumps(timings=args.timings) + "\n")
    return report.failures


def cmd_hom(args, fs) -> int:
    X, Y = _operands(fs, args.operands, args.file, 2)
    d = derived_hom_dims(X, Y, [args.degree])[args.degree]
    _emit({"hom": d, "degree": args.degree}, args)
    return 0


def cmd_ext(args, fs) -> int:
    X, Y = _operands(fs, args.operands, args.file, 2)
    dims = derived_hom_dims(X, Y, args.range)
    _emit({"ext": [dims[n] for n in args.range], "degrees": [args.range.start, args.range.stop - 1]}, args)
    return 0


def cmd_resolve(args, fs) -> int:
    (X,) = _operands(fs, args.operands, args.file, 1)
    R = minimal_projective(X) if args.side == "projective" else minimal_injective(X)
    _emit({"side": args.side, "resolution": repr(R.structured), "complex": R.structured.to_json()}, args)
    return 0


def cmd_serre(args, fs) -> int:
    (X,) = _operands(fs, args.operands, args.file, 1)
    Y = serre_inverse(X) if args.inverse else serre(X)
    _emit({"serre_inverse" if args.inverse else "serre": _minimal(Y), "dims": _describe(Y)}, args)
    return 0


def cmd_mutate(args, fs) -> int:
    E, X = _operands(fs, args.operands, args.file, 2)
    Y = left_mutate(E, X) if args.side == "left" else right_mutate(E, X)
    _emit({"mutation": args.side, "result": _minimal(Y), "dims": _describe(Y)}, args)
    return 0


def cmd_twist(args, fs) -> int:
    E, X = _operands(fs, args.operands, args.file, 2)
    Y = spherical_twist(E, X)
    _emit({"twist": _minimal(Y), "dims": _describe(Y)}, args)
    return 0


def cmd_k0(args, fs) -> int:
    (X,) = _operands(fs, args.operands, args.file, 1)
    _emit({"k0": list(k0_class(X).coords)}, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qhat", description="Derived-category computations for the Bondal quiver.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--check", action="append", metavar="NAME", help="run only this check (repeatable)")
    v.add_argument("--seed", type=int, default=bondal.DEFAULT_SEED)
    v.add_argument("--json", metavar="PATH", help="write the report as JSON")
    v.add_argument("--timings", action="store_true", help="include wall-clock timings")
    v.set_defaults(func=cmd_verify)

    def query(name, func, nargs, help_):
        q = sub.add_parser(name, help=help_)
        q.add_argument("operands", nargs=nargs, metavar="X", help="fixture name or JSON file")
        q.add_argument("--file", action="append", default=[], metavar="PATH",
                       help="read an operand from a JSON file (repeatable)")
        q.add_argument("--json", metavar="PATH", help="also write the result here")
        q.set_defaults(func=func)
        return q

    query("hom", cmd_hom, "*", "dim Hom(X, Y[n])").add_argument("--degree", type=int, default=0)
    query("ext", cmd_ext, "*", "dim Hom(X, Y[n]) over a range").add_argument(
        "--range", type=_range, default=range(0, 3), metavar="LO..HI")
    query("resolve", cmd_resolve, "*", "minimal projective or injective model").add_argument(
        "--side", choices=("projective", "injective"), default="projective")
    query("serre", cmd_serre, "*", "apply the Serre functor").add_argument("--inverse", action="store_true")
    query("mutate", cmd_mutate, "*", "mutate X through the exceptional object E").add_argument(
        "--side", choices=("left", "right"), default="left")
    query("twist", cmd_twist, "*", "spherical twist of X by E")
    query("k0", cmd_k0, "*", "class in the Grothendieck group")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return args.func(args)
        return args.func(args, bondal.load_fixtures())
    except (InputError, bondal.FixtureError, bondal.UnknownCheckError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(f"qhat: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
