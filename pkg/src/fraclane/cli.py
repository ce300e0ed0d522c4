"""Command-line front end.

    fraclane solve    --example 2 --n 1 --terms 20 --out sol.json
    fraclane eval     --solution sol.json --grid 0:2:0.1 --out y.csv
    fraclane residual --eq "D2y + (2/x)*Dy - exp(-y) = 0" --alpha 0.5
    fraclane compare  --example 7 --xmax 1

Exit status: 0 on success, 2 for bad input, 3 when the march breaks down.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

from . import catalog
from .eqmodel import EquationSpec, ParseError, SpecError, parse_equation, spec_from_dict, spec_to_dict
from .fracseries import FracSeries, evaluate
from .solver import SeriesOverflowError, SeriesSolution, SingularRecurrenceError, residual, solve

DEFAULT_TERMS = 30
DEFAULT_FORMAT = {"solve": "json", "eval": "csv", "residual": "json", "compare": "json"}


class UsageError(ValueError):
    pass


@dataclass
class Problem:
    spec: EquationSpec
    entry: catalog.CatalogEntry | None = None
    coeffs: list[float] | None = None  # preset by --solution
    errata: list[str] = field(default_factory=list)


def _grid(text: str | None, xmax: float | None) -> list[float]:
    if text is None:
        text = f"0:{xmax if xmax is not None else 1.0}:0.1"
    try:
        start, end, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"grid must look like start:end:step, got {text!r}") from None
    if not all(math.isfinite(v) for v in (start, end, step)):
        raise UsageError("grid values must be finite")
    if step <= 0:
        raise UsageError("grid step must be positive")
    if start < 0:
        raise UsageError("grid start must be >= 0 (fractional powers of negative x are undefined)")
    if end < start:
        raise UsageError("grid end must not precede its start")
    count = int(math.floor((end - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(count + 1)]


def _load_problem(args) -> Problem:
    sources = [s for s in (args.eq, args.spec, args.example, getattr(args, "solution", None)) if s is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of --eq, --spec, --example" +
                         (", --solution" if hasattr(args, "solution") else ""))
    alpha = args.alpha
    if getattr(args, "solution", None) is not None:
        with open(args.solution, encoding="utf-8") as fh:
            data = json.load(fh)
        try:
            spec = spec_from_dict(data["spec"])
            coeffs = [float(c) for c in data["coefficients"]]
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed solution file: missing {exc}") from None
        return Problem(spec, coeffs=coeffs, errata=list(data.get("errata", [])))
    if args.eq is not None:
        spec = parse_equation(args.eq, 1.0 if alpha is None else alpha, args.y0 or 0.0, args.dy0 or 0.0)
        return Problem(spec)
    if args.spec is not None:
        with open(args.spec, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SpecError(f"invalid JSON in {args.spec}: {exc}") from None
        spec = spec_from_dict(data)
        spec = EquationSpec(
            spec.alpha if alpha is None else alpha, spec.k, spec.terms, spec.rhs,
            spec.y0 if args.y0 is None else args.y0, spec.dy0 if args.dy0 is None else args.dy0,
        )
        return Problem(spec)
    entry = catalog.get_entry(args.example, args.n, args.sign)
    spec = entry.spec(1.0 if alpha is None else alpha)
    if args.y0 is not None or args.dy0 is not None:
        raise UsageError("--y0/--dy0 are fixed by the catalog example")
    return Problem(spec, entry=entry, errata=list(entry.errata))


def _solution(problem: Problem, terms: int | None) -> SeriesSolution:
    if problem.coeffs is not None:
        series = FracSeries(problem.spec.alpha, problem.coeffs)
        if terms is not None:
            series = series.truncate(terms)
        return SeriesSolution(problem.spec, series)
    return solve(problem.spec, DEFAULT_TERMS if terms is None else terms)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _json(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def run_solve(args) -> str:
    problem = _load_problem(args)
    sol = _solution(problem, args.terms)
    rep = residual(sol)
    if args.format == "csv":
        return _csv(["m", "coefficient"], [[m, c] for m, c in enumerate(sol.coeffs)])
    return _json({
        "alpha": sol.spec.alpha,
        "M": sol.series.order,
        "coefficients": list(sol.coeffs),
        "spec": spec_to_dict(sol.spec),
        "residual_max": rep.max_abs,
        "residual_scale": rep.scale,
        "errata": problem.errata,
    })


def run_eval(args) -> str:
    problem = _load_problem(args)
    xs = _grid(args.grid, args.xmax)
    sol = _solution(problem, args.terms)
    rows = [[x, evaluate(sol.series, x)] for x in xs]
    if args.format == "json":
        return _json({"alpha": sol.spec.alpha, "M": sol.series.order,
                      "x": [r[0] for r in rows], "y": [r[1] for r in rows]})
    return _csv(["x", "y"], rows)


def run_residual(args) -> str:
    problem = _load_problem(args)
    rep = residual(_solution(problem, args.terms))
    if args.format == "csv":
        return _csv(["order", "residual"], [[m, r] for m, r in zip(rep.orders, rep.residual_coeffs)])
    return _json({
        "alpha": problem.spec.alpha,
        "orders": list(rep.orders),
        "residual_coeffs": list(rep.residual_coeffs),
        "max_abs": rep.max_abs,
        "scale": rep.scale,
        "relative": rep.relative,
    })


def run_compare(args) -> str:
    problem = _load_problem(args)
    entry = problem.entry
    if entry is None:
        raise UsageError("compare needs a catalog example (--example); no reference exists otherwise")
    alpha = problem.spec.alpha
    classical = alpha == 1.0
    if not classical and args.reference == "classical":
        raise UsageError(f"no classical reference exists at alpha = {alpha!r}; only alpha = 1 has one")
    sol = _solution(problem, args.terms)
    rep = residual(sol)
    xs = _grid(args.grid, args.xmax)
    series = sol.series
    if classical and entry.reference_order is not None:
        # the reference is itself a truncated series; compare like with like
        series = series.truncate(entry.reference_order)
    rows = []
    for x in xs:
        y = evaluate(series, x)
        if classical:
            ref = entry.classical(x)
            rows.append([x, y, ref, abs(y - ref)])
        else:
            rows.append([x, y])
    max_diff = max((r[3] for r in rows), default=0.0) if classical else None
    if args.format == "csv":
        header = ["x", "series", "reference", "abs_diff"] if classical else ["x", "series"]
        notes = "".join(f"# errata: {e}\n" for e in problem.errata)
        notes += "# coefficients: " + " ".join(repr(c) for c in sol.coeffs) + "\n"
        notes += f"# residual_max: {rep.max_abs!r}\n"
        if classical:
            notes += f"# max_abs_diff: {max_diff!r}\n"
        return notes + _csv(header, rows)
    out = {
        "example": entry.id,
        "name": entry.name,
        "variant": entry.variant,
        "sign": entry.sign,
        "alpha": alpha,
        "M": sol.series.order,
        "coefficients": list(sol.coeffs),
        "reference": "classical" if classical else None,
        "truncated_to": entry.reference_order if classical else None,
        "rows": [dict(zip(("x", "series", "reference", "abs_diff"), r)) for r in rows],
        "max_abs_diff": max_diff,
        "residual_max": rep.max_abs,
        "errata": problem.errata,
    }
    return _json(out)


COMMANDS = {"solve": run_solve, "eval": run_eval, "residual": run_residual, "compare": run_compare}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("equation")
    src.add_argument("--eq", help='equation text, e.g. "D2y + (2/x)*Dy + y^3 = 6 + x^6"')
    src.add_argument("--spec", help="equation spec JSON file")
    src.add_argument("--example", help="catalog example, 1..7 or its name")
    src.add_argument("--n", type=int, help="variant n for examples 2 and 4")
    src.add_argument("--sign", choices=("plus", "minus"), help="sign of y^n for example 4")
    src.add_argument("--alpha", type=float, help="fractional order in (0, 1] (default 1)")
    src.add_argument("--y0", type=float)
    src.add_argument("--dy0", type=float)
    common.add_argument("--terms", type=int, help=f"truncation order M (default {DEFAULT_TERMS})")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))

    gridded = argparse.ArgumentParser(add_help=False)
    gridded.add_argument("--grid", help="start:end:step")
    gridded.add_argument("--xmax", type=float, help="shorthand for --grid 0:XMAX:0.1")

    solution = argparse.ArgumentParser(add_help=False)
    solution.add_argument("--solution", help="solution JSON written by 'solve'")

    parser = argparse.ArgumentParser(prog="fraclane", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="march the series and write the coefficients")
    sub.add_parser("eval", parents=[common, gridded, solution], help="tabulate y(x) on a grid")
    sub.add_parser("residual", parents=[common, solution], help="substitute the series back in")
    cmp_ = sub.add_parser("compare", parents=[common, gridded], help="check against the alpha = 1 reference")
    cmp_.add_argument("--reference", choices=("auto", "classical"), default="auto")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = DEFAULT_FORMAT[args.command]
    try:
        if args.terms is not None and args.terms < 2:
            raise UsageError("--terms must be at least 2")
        text = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"fraclane: parse error: {exc}\n{exc.pointer()}", file=sys.stderr)
        return 2
    except (SeriesOverflowError, SingularRecurrenceError) as exc:
        print(f"fraclane: numerical failure at order {exc.order}: {exc}", file=sys.stderr)
        return 3
    except (SpecError, UsageError, catalog.CatalogError, ValueError, OSError) as exc:
        print(f"fraclane: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
