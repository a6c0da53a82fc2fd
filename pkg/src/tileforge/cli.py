"""Command-line front end.

Exit codes: 0 computed (whatever the verdict), 1 usage or parse error,
2 input outside scope (non-integer spectrum, not a dilation), 3 point
budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from ._kernels import backend_name, set_num_threads
from .attractor import approximate, diameter_bound, export_points, rasterize
from .config import point_budget
from .connectivity import (
    DEFAULT_LEVEL_DEPTH,
    AdjacencyBasis,
    check_level_connectivity,
    components,
    digit_connectivity,
    iter_level_sets,
    pipeline_connected_digits,
    sufficient_condition,
)
from .digitset import DigitSet, centered_digit_set, is_complete_residue_system
from .errors import BudgetExceeded, OutOfScopeError, TileforgeError
from .jordan import jordan_decompose, verify_similarity
from .lattice import digits_contain_standard_basis, is_invariant_lattice, translation_lattice
from .ratmath import Matrix, det
from .spectrum import require_dilation

EXIT_OK, EXIT_USAGE, EXIT_SCOPE, EXIT_BUDGET = 0, 1, 2, 3
SAFE_INT = 2**53


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_matrix(text: str) -> Matrix:
    """Parse ``"a,b;c,d"`` (rows ';'-separated, entries ','-separated integers)."""
    rows = []
    for row in text.strip().split(";"):
        entries = []
        for tok in row.split(","):
            tok = tok.strip()
            try:
                entries.append(int(tok))
            except ValueError:
                raise UsageError(f"invalid matrix entry {tok!r}") from None
        rows.append(entries)
    if any(len(r) != len(rows[0]) for r in rows):
        raise UsageError(f"matrix rows have unequal lengths in {text!r}")
    if len(rows) != len(rows[0]):
        raise UsageError(f"matrix must be square, got {len(rows)}x{len(rows[0])}")
    return Matrix(rows)


def parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"invalid size {text!r}; expected WxH") from None
    if w < 1 or h < 1:
        raise UsageError(f"invalid size {text!r}; dimensions must be positive")
    return w, h


def jsonable(obj):
    """Convert results to JSON values: big ints and fractions become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < SAFE_INT else str(obj)
    if isinstance(obj, float):  # timings only
        return obj
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return jsonable(obj.numerator)
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Matrix):
        return [[jsonable(x) for x in row] for row in obj.rows]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "tolist"):
        return jsonable(obj.tolist())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _format(v, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_format(x, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list):
        if all(not isinstance(x, (dict, list)) for x in v):
            return json.dumps(v)
        if all(isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x) for x in v):
            return json.dumps(v)
        items = [inner + _format(x, level + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(v)


def dumps(obj) -> str:
    """Deterministic JSON text; lists of scalars (and matrices) stay on one line."""
    return _format(jsonable(obj), 0) + "\n"


def _digits_json(D: DigitSet) -> dict:
    return {"count": len(D), "provenance": D.describe(), "digits": [list(d) for d in D.digits]}


def _jordan_json(dec) -> dict:
    return {
        "J": dec.J,
        "P": dec.P,
        "blocks": [
            {"eigenvalue": lam, "size": k, "columns": list(cols)}
            for (lam, k), cols in zip(dec.blocks, dec.chains)
        ],
    }


def _residue_json(check) -> dict:
    return {"ok": check.ok, "witness": list(check.witness) if check.witness else None}


def _level_report(A, D, gamma, n_max, budget) -> dict:
    depth = 0
    while depth < n_max and len(D) ** (depth + 1) <= budget:
        depth += 1
    results = check_level_connectivity(A, D, gamma, depth, budget) if depth else []
    return {"n_max": n_max, "checked": depth, "budget_limited": depth < n_max, "connected": results}


def build_report(A: Matrix, levels: int = DEFAULT_LEVEL_DEPTH, timings: bool = False) -> dict:
    budget = point_budget()
    clock = {}

    def tick(name, t0):
        clock[name] = round(time.perf_counter() - t0, 6)

    t0 = time.perf_counter()
    spec = require_dilation(A)
    tick("spectrum", t0)

    t0 = time.perf_counter()
    dec = jordan_decompose(A)
    tick("jordan", t0)

    t0 = time.perf_counter()
    D = centered_digit_set(A, budget)
    gamma = translation_lattice(A, D)
    tick("digits_and_lattice", t0)

    t0 = time.perf_counter()
    digit_v = digit_connectivity(A, D, gamma)
    suff = sufficient_condition(A, budget)
    lvl = _level_report(A, D, gamma, levels, budget)
    tick("connectivity", t0)

    t0 = time.perf_counter()
    pipe = pipeline_connected_digits(A, budget)
    tick("pipeline", t0)

    report = {
        "matrix": A,
        "dimension": A.nrows,
        "determinant": det(A),
        "char_poly": list(spec.char_poly),
        "eigenvalues": [{"value": lam, "multiplicity": mult} for lam, mult in spec.eigenvalues],
        "jordan": dict(_jordan_json(dec), similarity_verified=verify_similarity(A, dec)),
        "digit_sets": {
            "canonical": _digits_json(D),
            "D_J": _digits_json(pipe.D_J),
            "D_A": _digits_json(pipe.D_A),
        },
        "lattice": dict(
            gamma.to_json(),
            a_invariant=is_invariant_lattice(A, gamma),
            digits_contain_standard_basis=digits_contain_standard_basis(D),
        ),
        "verdicts": {
            "digit_connectivity": digit_v.to_dict(),
            "sufficient_condition": suff.to_dict(),
            "level_connectivity": lvl,
            "shell_certificates": [c.to_dict() for c in pipe.certificates],
            "block_verdicts": [v.to_dict() for v in pipe.block_verdicts],
            "pipeline": pipe.verdict.to_dict(),
        },
        "residue_system": {
            "canonical": _residue_json(is_complete_residue_system(A, D)),
            "D_A": _residue_json(is_complete_residue_system(A, pipe.D_A)),
        },
        "diameter_bound": diameter_bound(A, D),
    }
    if timings:
        report["timings"] = clock
    return report


def _select_digits(A: Matrix, which: str) -> DigitSet:
    if which == "pipeline":
        return pipeline_connected_digits(A).D_A
    return centered_digit_set(A)


def _emit(text: str | bytes, out: str | None) -> None:
    if out is None:
        if isinstance(text, bytes):
            sys.stdout.buffer.write(text)
        else:
            sys.stdout.write(text)
        return
    mode = "wb" if isinstance(text, bytes) else "w"
    with open(out, mode) as fh:
        fh.write(text)


def cmd_analyze(args) -> int:
    _emit(dumps(build_report(args.A, args.levels, args.timings)), args.json)
    return EXIT_OK


def cmd_digits(args) -> int:
    _emit(_select_digits(args.A, args.digits).to_csv(), args.out)
    return EXIT_OK


def cmd_jordan(args) -> int:
    dec = jordan_decompose(args.A)
    _emit(dumps(dict(_jordan_json(dec), similarity_verified=verify_similarity(args.A, dec))), args.json)
    return EXIT_OK


def cmd_check(args) -> int:
    v = sufficient_condition(args.A)
    _emit(dumps({"sufficient_condition": v.status, "witness": v.witness, "diagnostics": v.diagnostics}), args.json)
    return EXIT_OK


def cmd_levels(args) -> int:
    D = _select_digits(args.A, args.digits)
    gamma = translation_lattice(args.A, D)
    basis = AdjacencyBasis.of_lattice(gamma)
    levels = []
    for ls in iter_level_sets(args.A, D, args.n, point_budget()):
        levels.append({"n": ls.n, "size": ls.size, "connected": components(ls.points, basis).connected})
    out = {"lattice": gamma.to_json(), "levels": levels}
    _emit(dumps(out), args.json)
    return EXIT_OK


def cmd_render(args) -> int:
    w, h = parse_size(args.size)
    cloud = approximate(args.A, _select_digits(args.A, args.digits), args.depth)
    _emit(rasterize(cloud, w, h).to_pgm(), args.out)
    return EXIT_OK


def cmd_points(args) -> int:
    cloud = approximate(args.A, _select_digits(args.A, args.digits), args.depth)
    _emit(export_points(cloud), args.out)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    res = pipeline_connected_digits(args.A)
    out = {
        "jordan": _jordan_json(res.decomposition),
        "D_J": _digits_json(res.D_J),
        "D_A": _digits_json(res.D_A),
        "residue_system": {"ok": res.residue_system[0], "witness": res.residue_system[1]},
        "shell_certificates": [c.to_dict() for c in res.certificates],
        "block_verdicts": [v.to_dict() for v in res.block_verdicts],
        "verdict": res.verdict.to_dict(),
    }
    _emit(dumps(out), args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tileforge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({backend_name} kernels)")
    p.add_argument("--threads", type=int, default=None, help="numba worker threads")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--matrix", required=True, help='integer matrix "a,b;c,d"')
        sp.set_defaults(func=func)
        return sp

    sp = add("analyze", cmd_analyze, "full JSON report")
    sp.add_argument("--json", metavar="FILE")
    sp.add_argument("--levels", type=int, default=DEFAULT_LEVEL_DEPTH, help="deepest level set to check")
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings (non-deterministic)")

    sp = add("digits", cmd_digits, "digit set as CSV")
    sp.add_argument("--digits", choices=("canonical", "pipeline"), default="canonical")
    sp.add_argument("--out", metavar="FILE")

    sp = add("jordan", cmd_jordan, "Jordan form and integer similarity matrix")
    sp.add_argument("--json", metavar="FILE")

    sp = add("check", cmd_check, "edge-neighbour sufficient condition")
    sp.add_argument("--json", metavar="FILE")

    sp = add("levels", cmd_levels, "lattice connectivity of level sets")
    sp.add_argument("--n", type=int, default=DEFAULT_LEVEL_DEPTH)
    sp.add_argument("--digits", choices=("canonical", "pipeline"), default="canonical")
    sp.add_argument("--json", metavar="FILE")

    sp = add("render", cmd_render, "binary PGM of a 2-D tile approximation")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--size", default="256x256", help="WxH")
    sp.add_argument("--digits", choices=("canonical", "pipeline"), default="canonical")
    sp.add_argument("--out", metavar="FILE")

    sp = add("points", cmd_points, "exact point cloud as CSV")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--digits", choices=("canonical", "pipeline"), default="canonical")
    sp.add_argument("--out", metavar="FILE")

    sp = add("pipeline", cmd_pipeline, "Jordan-form digit set with connected attractor")
    sp.add_argument("--json", metavar="FILE")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads is not None:
            set_num_threads(args.threads)
        args.A = parse_matrix(args.matrix)
        require_dilation(args.A)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OutOfScopeError as exc:
        print(f"tileforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except BudgetExceeded as exc:
        print(f"tileforge: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except TileforgeError as exc:
        print(f"tileforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # bad option values that only the library can judge
        print(f"tileforge: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
