"""Command-line front end.

Exit codes: 0 when every reported check passes, 1 for usage or mathematical
errors (and failed checks), 2 when an enumeration cap is hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import spaces
from .diagrams import Partition, family_diagram, ferrers, load_diagram, parse_cell
from .errors import CapExceeded, TogglelabError
from .lattice import enumerate_ideals
from .poset import poset_from_diagram
from .rooks import reduced_rook, rook, rook_identity_holds, support_by_cell
from .statistics import integer_vector
from .verify import DEFAULT_SEED, SUITES, run_suite


class UsageError(TogglelabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_source(p: argparse.ArgumentParser, family_only: bool = False) -> None:
    p.add_argument("--family", choices=["rect", "staircase", "typeA", "typeB"])
    p.add_argument("--m", type=int, help="rows of a rectangle")
    p.add_argument("--n", type=int, help="columns of a rectangle, or the size of the other families")
    if not family_only:
        p.add_argument("--partition", help="parts such as 5,2,1,1")
        p.add_argument("--diagram", help="diagram file: '#'/'.' text or {\"cells\": [...]} JSON")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv", "table"], default="json")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--cap", type=int, help="maximum number of order ideals to enumerate")
    p.add_argument("--element-cap", type=int, help="maximum poset size (default 40, or TOGGLELAB_ELEMENT_CAP)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="togglelab", description="Toggleability spaces of diagram posets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dims", help="rank and the dimensions of I_T and A_T")
    _add_source(p)
    _add_output(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="main")
    p.add_argument("--max", type=int, dest="max_k", help="size bound for the suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_output(p)

    p = sub.add_parser("orbits", help="rowmotion orbit sizes")
    _add_source(p)
    p.add_argument("--cycles", action="store_true", help="also list every orbit")
    _add_output(p)

    p = sub.add_parser("basis", help="export an explicit basis of I_T")
    _add_source(p, family_only=True)
    p.add_argument("--which", choices=["B1", "B2"], default="B1")
    p.add_argument("--vectors", action="store_true", help="include the values on every ideal")
    _add_output(p)

    p = sub.add_parser("rook", help="rook and reduced rook at a cell")
    _add_source(p)
    p.add_argument("--cell", required=True, help="cell as i,j")
    _add_output(p)
    return parser


def _family_params(args) -> tuple[int, ...]:
    if args.family == "rect":
        if args.m is None or args.n is None:
            raise UsageError("--family rect needs --m and --n")
        return (args.m, args.n)
    if args.n is None:
        raise UsageError(f"--family {args.family} needs --n")
    if args.m is not None:
        raise UsageError(f"--family {args.family} takes only --n")
    return (args.n,)


def _source(args):
    """``(family, params, diagram)`` from the single input source given."""
    given = [name for name in ("family", "partition", "diagram") if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --family, --partition, --diagram")
    if args.family is not None:
        params = _family_params(args)
        return args.family, params, family_diagram(args.family, params)
    if (args.m, args.n) != (None, None):
        raise UsageError("--m/--n only go with --family")
    if args.partition is not None:
        lam = Partition.parse(args.partition)
        return "partition", lam.parts, ferrers(lam)
    return "diagram", (), load_diagram(args.diagram)


def _cell_text(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, separators=(",", ":"))
    if value is None:
        return ""
    return str(value)


def _rows_of(report) -> list[dict]:
    if isinstance(report, list):
        return report
    return [report]


def render(report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows = _rows_of(report)
    keys: list[str] = []
    for row in rows:
        keys.extend(k for k in row if k not in keys)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(keys)
        for row in rows:
            writer.writerow([_cell_text(row.get(k)) for k in keys])
        return buf.getvalue()
    table = [keys] + [[_cell_text(row.get(k)) for k in keys] for row in rows]
    widths = [max(len(r[c]) for r in table) for c in range(len(keys))]
    lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def cmd_dims(args) -> tuple[dict, bool]:
    family, params, d = _source(args)
    if family == "diagram":
        row = spaces.verify_main_theorems("diagram", diagram=d, cap=args.cap)
    else:
        row = spaces.verify_main_theorems(family, params, cap=args.cap)
    if family == "partition":
        dims = spaces.partition_dims(Partition(params), cap=args.cap)
        row["N"], row["C"] = dims.N, dims.C
    return row, bool(row["pass"])


def cmd_verify(args) -> tuple[list, bool]:
    rows = run_suite(args.suite, args.max_k, args.trials, args.seed, args.jobs)
    return rows, all(r["pass"] for r in rows)


def cmd_orbits(args) -> tuple[dict, bool]:
    _, _, d = _source(args)
    lattice = enumerate_ideals(poset_from_diagram(d), args.cap)
    return lattice.orbit_report(cycles=args.cycles), True


def cmd_basis(args) -> tuple[dict, bool]:
    if args.family is None:
        raise UsageError("basis needs --family")
    params = _family_params(args)
    build = spaces.basis_B1 if args.which == "B1" else spaces.basis_B2
    stats = build(args.family, params)
    poset = poset_from_diagram(family_diagram(args.family, params))
    check = spaces.check_basis(args.family, params, args.which)
    exported = []
    for f in stats:
        item = f.to_json(poset)
        if args.vectors:
            lattice = spaces.lattice_for(poset, args.cap)
            v, den = integer_vector(lattice, f)
            item["vector"] = [str(Fraction(int(x), den)) for x in v]
        exported.append(item)
    report = {
        "family": args.family,
        "params": list(params),
        "which": args.which,
        "size": check.size,
        "dim_IT": check.dim_IT,
        "in_IT": check.in_IT,
        "independent": check.independent,
        "pass": check.passed,
        "statistics": exported,
    }
    return report, check.passed


def cmd_rook(args) -> tuple[dict, bool]:
    _, _, d = _source(args)
    cell = parse_cell(args.cell)
    poset = poset_from_diagram(d)
    full = rook(d, cell, poset)
    reduced = reduced_rook(d, cell, poset)
    lattice = enumerate_ideals(poset, args.cap)
    holds = rook_identity_holds(d, cell, lattice)
    support = support_by_cell(poset, reduced).get("aminus", {})
    report = {
        "cell": [cell.row, cell.col],
        "rook": full.to_json(poset),
        "reduced_rook": reduced.to_json(poset),
        "reduced_coefficient_sum": str(sum(support.values(), Fraction(0))),
        "rank": poset.rank,
        "identity_holds": holds,
        "pass": holds,
    }
    return report, holds


@contextmanager
def _element_cap(value: int | None):
    if value is None:
        yield
        return
    old = os.environ.get("TOGGLELAB_ELEMENT_CAP")
    os.environ["TOGGLELAB_ELEMENT_CAP"] = str(value)
    try:
        yield
    finally:
        if old is None:
            del os.environ["TOGGLELAB_ELEMENT_CAP"]
        else:
            os.environ["TOGGLELAB_ELEMENT_CAP"] = old


COMMANDS = {"dims": cmd_dims, "verify": cmd_verify, "orbits": cmd_orbits, "basis": cmd_basis, "rook": cmd_rook}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _element_cap(args.element_cap):
            report, passed = COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"togglelab: {exc} (reached {exc.reached})", file=sys.stderr)
        return 2
    except TogglelabError as exc:
        print(f"togglelab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"togglelab: {exc}", file=sys.stderr)
        return 1
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
