"""Command-line interface.

Exit codes: 0 on success, 1 when the computed verdict is negative (not a
member, no sequence found, a failed check), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import borel as bm
from . import checks
from .exact import RatFunc, as_fraction
from .green import search_mgs
from .qtorus import QTorus, quantum_mutate_check
from .quiver import Quiver, punctured_disk_quiver, quiver_to_seed, triangle_quiver
from .seed import Seed, apply_sequence
from .upper_bound import upper_bound_member
from . import uqsl2 as uq

THREADS_ENV = "CLUSTERDUAL_THREADS"


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_seed(path: str, track_variables: bool = True) -> Seed:
    """Seed JSON, or quiver JSON (as printed by ``build-quiver``)."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError("seed file must hold a JSON object")
    if "vertices" in data:
        return quiver_to_seed(Quiver.from_json(data), track_variables=track_variables)
    if "epsilon_hat" not in data:
        raise InputError("seed JSON needs 'epsilon_hat' (or quiver 'vertices'/'arrows')")
    return Seed.from_json(data, track_variables)


def _int_list(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False, ensure_ascii=False)
    sys.stdout.write("\n")


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_mutate(args) -> int:
    seed = _load_seed(args.seed)
    out = apply_sequence(seed, _int_list(args.sequence))
    _emit(out.to_json())
    return 0


def cmd_check_laurent(args) -> int:
    seed = _load_seed(args.seed, track_variables=False)
    f = RatFunc.parse(args.function, seed.labels)
    extra = set(f.used_labels) - set(seed.labels)
    if extra:
        raise InputError(f"function uses unknown symbols {sorted(extra)}")
    threads = args.threads or _default_threads()
    cert = upper_bound_member(f, seed, threads=threads)
    _emit(cert.to_json())
    return 0 if cert.member else 1


def cmd_green_search(args) -> int:
    seed = _load_seed(args.seed, track_variables=False)
    if args.budget <= 0:
        raise InputError("--budget must be positive")
    res = search_mgs(seed, budget=args.budget)
    data = res.to_json()
    data["explored"] = str(data["explored"]) if data["explored"] >= 2**53 else data["explored"]
    _emit(data)
    return 0 if res.found else 1


def cmd_build_quiver(args) -> int:
    if args.rank < 1:
        raise InputError("--rank must be at least 1")
    q = triangle_quiver(args.rank) if args.shape == "triangle" else punctured_disk_quiver(args.rank)
    _emit(q.to_json())
    return 0


GROUPS = {"sl2": (2, bm.SL), "sl3": (3, bm.SL), "pgl2": (2, bm.PGL), "pgl3": (3, bm.PGL)}


def _parse_matrix(rows, symbols, symbolic: bool):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("matrices are nested arrays")
    out = []
    for row in rows:
        line = []
        for x in row:
            if symbolic:
                f = RatFunc.parse(str(x), symbols)
                extra = set(f.used_labels) - set(symbols)
                if extra:
                    raise InputError(f"undeclared symbols {sorted(extra)}")
                line.append(f)
            else:
                try:
                    line.append(as_fraction(x))
                except (ValueError, TypeError, ZeroDivisionError):
                    raise InputError(f"not a rational number: {x!r} (use --symbolic for expressions)") from None
        out.append(line)
    return out


def cmd_braid(args) -> int:
    n, mode = GROUPS[args.group]
    data = _read_json(args.input)
    symbols = list(data.get("symbols", []))
    b1 = _parse_matrix(data.get("b1"), symbols, args.symbolic)
    b2 = _parse_matrix(data.get("b2"), symbols, args.symbolic)
    if len(b1) != n or len(b2) != n or any(len(r) != n for r in b1 + b2):
        raise InputError(f"{args.group} needs {n}x{n} matrices")
    word = _int_list(args.word)
    if any(not 1 <= i < n for i in word):
        raise InputError(f"braid generators are 1..{n - 1}")
    try:
        pair = bm.BorelPair(b1, b2, mode).normalised()
    except bm.TriangularityError as exc:
        raise InputError(str(exc)) from None
    out = bm.braid_word(word, pair)
    res = out.to_json()
    res["tau"] = bm.mat_str(bm.tau(out))
    res["in_dual_group"] = bm.in_dual_group(out)
    _emit(res)
    return 0


def cmd_quantum_check(args) -> int:
    seed = _load_seed(args.seed, track_variables=False)
    if not 1 <= args.direction <= seed.m:
        raise InputError(f"direction must be a mutable vertex 1..{seed.m}")
    rep = quantum_mutate_check(QTorus(seed), args.direction)
    _emit(rep.to_json())
    return 0 if rep.ok else 1


def cmd_uqsl2(args) -> int:
    x = uq.parse_expr(args.expr)
    if args.action == "expand":
        _emit(uq.expansion_json(uq.expand_in_theta(x, bound=args.bound)))
        return 0
    if args.action == "normal":
        _emit(x.to_json())
        return 0
    y = uq.parse_expr(args.other)
    _emit({"bracket": str(uq.sl2_bracket(x, y))})
    return 0


def cmd_verify_paper(args) -> int:
    keys = None
    if args.section:
        if args.section not in checks.SECTIONS:
            raise InputError(f"unknown section {args.section!r}; choose from {sorted(checks.SECTIONS)}")
        keys = checks.SECTIONS[args.section]
    results = checks.run_all(keys, samples=args.samples, rng_seed=args.rng_seed)
    if args.json:
        _emit([r.to_json(args.timings) for r in results])
    else:
        for r in results:
            print(r.line(args.timings))
            for label, ok, detail in r.parts:
                extra = f"  ({detail})" if detail and not ok else ""
                print(f"    {label}: {'PASS' if ok else 'FAIL'}{extra}")
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusterdual", description="Exact cluster Poisson and dual-group computations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mutate", help="apply a mutation sequence to a seed")
    s.add_argument("--seed", required=True, help="seed or quiver JSON file ('-' for stdin)")
    s.add_argument("--sequence", required=True, help="comma-separated 1-based directions")
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("check-laurent", help="upper-bound membership certificate")
    s.add_argument("--seed", required=True)
    s.add_argument("--function", required=True, help="rational function in the seed's labels")
    s.add_argument("--threads", type=int, default=None, help=f"worker cap (default ${THREADS_ENV} or 1)")
    s.set_defaults(func=cmd_check_laurent)

    s = sub.add_parser("green-search", help="breadth-first search for a maximal green sequence")
    s.add_argument("--seed", required=True)
    s.add_argument("--budget", type=int, default=10_000)
    s.set_defaults(func=cmd_green_search)

    s = sub.add_parser("build-quiver", help="triangle or once-punctured-disk quiver")
    s.add_argument("--shape", choices=["triangle", "punctured-disk"], required=True)
    s.add_argument("--rank", type=int, required=True)
    s.set_defaults(func=cmd_build_quiver)

    s = sub.add_parser("braid", help="braid group action on a Borel pair")
    s.add_argument("--group", choices=sorted(GROUPS), required=True)
    s.add_argument("--word", required=True, help="comma-separated generators, applied left to right")
    s.add_argument("--input", required=True, help='JSON {"b1": [[...]], "b2": [[...]], "symbols": [...]}')
    s.add_argument("--symbolic", action="store_true", help="entries are expressions in the declared symbols")
    s.set_defaults(func=cmd_braid)

    s = sub.add_parser("quantum-check", help="quantum mutation consistency checks")
    s.add_argument("--seed", required=True)
    s.add_argument("--direction", type=int, required=True)
    s.set_defaults(func=cmd_quantum_check)

    s = sub.add_parser("uqsl2", help="U_q(sl2) computations")
    s.add_argument("action", choices=["expand", "normal", "bracket"])
    s.add_argument("--expr", required=True, help='e.g. "E*F*K^-1"')
    s.add_argument("--other", help="second argument of 'bracket'")
    s.add_argument("--bound", type=int, default=None, help="maximal degree handled by 'expand'")
    s.set_defaults(func=cmd_uqsl2)

    s = sub.add_parser("verify-paper", help="run the acceptance battery")
    s.add_argument("--section", help="restrict to one location, e.g. 4.3")
    s.add_argument("--samples", type=int, default=None, help="override random batch sizes")
    s.add_argument("--rng-seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.add_argument("--timings", action="store_true", help="include wall-clock times (output is then not reproducible)")
    s.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "action", None) == "bracket" and not args.other:
        parser.error("bracket needs --other")
    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be positive")
    if getattr(args, "samples", None) is not None and args.samples < 1:
        parser.error("--samples must be positive")
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError, ZeroDivisionError, IndexError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
