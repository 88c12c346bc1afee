"""Command-line front end.

Exit codes: 0 success, 1 NoMeromorphicSolution under --expect-solvable,
2 usage or parse error, 3 tolerance or expectation failure."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Sequence

from .classifier import NORMAL_FORM_TEXT, admissible_constants, classify
from .eqmodel import ParseError, UnsupportedConstant, dumps, parse_coefficient, parse_equation
from .exactalg import Surd
from .solutions import (
    CONSTRUCTIBLE,
    TOLERANCE,
    FixedSigns,
    PrincipalRoot,
    grid_points,
    growth_estimate,
    parse_complex,
    pullback,
    qrt_orbit,
    solve_form,
    verify_orbit,
)

__all__ = ["main", "run", "CorpusEntry", "corpus_fixture", "check_entry"]

EXIT_OK, EXIT_NOMERO, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2, 3
DEFAULT_GRID = "-2,2,10;-2,2,10"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# corpus

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    equation: str
    verdict: str
    form: str
    transform: str
    params: dict
    note: str


def _parse_kv(text: str) -> dict:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        k, _, v = item.partition("=")
        out[k.strip()] = v.strip()
    return out


def corpus_fixture() -> list[CorpusEntry]:
    """Entries of the shipped corpus table, in file order."""
    text = resources.files("diffclass").joinpath("corpus.tsv").read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        cols += [""] * (7 - len(cols))
        name, eq, verdict, form, tr, params, note = cols[:7]
        out.append(CorpusEntry(name, eq, verdict, form, tr, _parse_kv(params), note))
    return out


def _same_param(expected: str, got) -> bool:
    if isinstance(got, int):
        return str(got) == expected
    try:
        return parse_coefficient(expected) == Surd.coerce(got)
    except (ParseError, UnsupportedConstant, ValueError):
        return False


def check_entry(entry: CorpusEntry) -> tuple[bool, str]:
    """(ok, message) after classifying the entry's equation."""
    rep = classify(entry.equation)
    c = rep.primary
    problems = []
    if c.verdict != entry.verdict:
        problems.append(f"verdict {c.verdict} != {entry.verdict}")
    if entry.form and c.form != entry.form:
        problems.append(f"form {c.form} != {entry.form}")
    if entry.transform and str(c.transform) != entry.transform:
        problems.append(f"transform {c.transform} != {entry.transform}")
    for k, v in entry.params.items():
        if k not in c.params or not _same_param(v, c.params[k]):
            problems.append(f"param {k}={c.params.get(k)} != {v}")
    if c.verdict == "Form" and not c.replay_ok():
        problems.append("replay of the transform does not reproduce the normal form")
    return (not problems), "; ".join(problems) or "ok"


# ---------------------------------------------------------------------------
# argument helpers

def _params(items: Optional[Sequence[str]]) -> dict:
    out: dict = {}
    for item in items or []:
        for piece in item.split(","):
            piece = piece.strip()
            if not piece:
                continue
            if "=" not in piece:
                raise UsageError(f"--params expects k=v, got {piece!r}")
            k, v = piece.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _grid(spec: str) -> list[complex]:
    try:
        xs, ys = spec.split(";")
        x0, x1, nx = xs.split(",")
        y0, y1, ny = ys.split(",")
        return grid_points(float(x0), float(x1), int(nx), float(y0), float(y1), int(ny))
    except ValueError:
        raise UsageError(f'--grid expects "x0,x1,nx;y0,y1,ny", got {spec!r}') from None


def _radii(spec: str) -> list[float]:
    try:
        return [float(r) for r in spec.split(",") if r.strip()]
    except ValueError:
        raise UsageError(f"--radii expects a comma list of numbers, got {spec!r}") from None


def _jnum(z: complex):
    return [z.real, z.imag] if math.isfinite(z.real) and math.isfinite(z.imag) else "pole"


def _cnum(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _equations(args) -> list[str]:
    if args.eq:
        return [args.eq]
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from None
        return [l.strip() for l in lines if l.strip() and not l.lstrip().startswith("#")]
    raise UsageError("give --eq or --file")


def _split_params(form: str, raw: dict) -> tuple[dict, dict]:
    """Exact normal form parameters and numeric initial data."""
    exact_keys = {"delta1", "delta2", "delta3", "kappa1_sq", "kappa2_sq", "kappa3", "theta"}
    params = {k: v for k, v in raw.items() if k in exact_keys}
    init = {k: v for k, v in raw.items() if k not in exact_keys}
    if "theta" in params and form in ("F3", "F5"):
        init["theta"] = params.pop("theta")
    return params, init


def _emit(out, args, payload: dict, lines: list[str]) -> None:
    if args.json:
        out.write(dumps(payload) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# commands

def _cmd_classify(args, out) -> int:
    reports, lines = [], []
    code = EXIT_OK
    for text in _equations(args):
        rep = classify(text)
        reports.append(rep.to_json())
        lines.append(f"input: {text}")
        for k, v in enumerate(rep.variants):
            head = f"  variant {k}: {v.verdict}"
            if v.verdict == "Form":
                ps = ", ".join(f"{a}={b}" for a, b in sorted(v.params.items()))
                head += f" {v.form} via {v.transform}" + (f" [{ps}]" if ps else "")
                head += f"  normal form {NORMAL_FORM_TEXT[v.form]}"
            else:
                head += f" ({v.reason})"
            lines.append(head)
        if args.expect_solvable and rep.verdict == "NoMeromorphicSolution":
            code = EXIT_NOMERO
    payload = reports[0] if len(reports) == 1 else {"reports": reports}
    _emit(out, args, payload, lines)
    return code


def _cmd_solve(args, out) -> int:
    if not args.form:
        raise UsageError("solve needs --form")
    params, init = _split_params(args.form, _params(args.params))
    sol = solve_form(args.form, params, init)
    grid = _grid(args.grid)
    rep = verify_orbit(sol.equation, sol, grid)
    values = [(z, sol(z)) for z in grid]
    payload = {
        "solution": sol.to_json(),
        "values": [{"z": [z.real, z.imag], "f": _jnum(v)} for z, v in values],
        "orbit": rep.to_json(),
    }
    lines = [f"{sol.construction}", f"growth: {sol.growth}"]
    lines += [f"  f({_cnum(z)}) = {_cnum(v)}" for z, v in values]
    lines.append(f"max residual {rep.max_residual:.3e} over {len(rep.residuals)} points, "
                 f"{len(rep.skipped)} skipped")
    _emit(out, args, payload, lines)
    return EXIT_OK if rep.max_residual < TOLERANCE[args.form] else EXIT_TOLERANCE


def _cmd_verify(args, out) -> int:
    texts = _equations(args)
    if len(texts) != 1:
        raise UsageError("verify takes a single equation")
    eq = parse_equation(texts[0])
    raw = _params(args.params)
    if args.form:
        params, init = _split_params(args.form, raw)
        sol = solve_form(args.form, params, init)
        form, how = args.form, "as given"
    else:
        rep = classify(eq)
        c = rep.primary
        if c.verdict != "Form" or c.form not in CONSTRUCTIBLE:
            raise UsageError(f"no constructible normal form for this equation ({c.verdict} {c.form or ''})")
        params = {k: v for k, v in c.params.items() if k != "theta" or c.form == "F8"}
        _, init = _split_params(c.form, raw)
        sol = pullback(solve_form(c.form, params, init), c.transform, eq)
        form, how = c.form, f"classified, pulled back by {c.transform}"
    rep = verify_orbit(eq, sol, _grid(args.grid))
    payload = {"form": form, "how": how, "orbit": rep.to_json()}
    lines = [f"{form} solution ({how})",
             f"max residual {rep.max_residual:.3e} over {len(rep.residuals)} points, "
             f"{len(rep.skipped)} skipped"]
    _emit(out, args, payload, lines)
    return EXIT_OK if rep.max_residual < TOLERANCE[form] else EXIT_TOLERANCE


def _cmd_constants(args, out) -> int:
    if not args.form:
        raise UsageError("constants needs --form")
    cs = admissible_constants(args.form)
    items = [{k: (v if isinstance(v, int) else str(v)) for k, v in sorted(c.items())} for c in cs]
    payload = {"form": args.form, "constants": items, "note": cs.note}
    lines = [f"{args.form}:"]
    for it in items:
        lines.append("  " + ", ".join(f"{k}={v}" for k, v in it.items()))
    if cs.note:
        lines.append(f"  note: {cs.note}")
    _emit(out, args, payload, lines)
    return EXIT_OK


def _cmd_orbit(args, out) -> int:
    raw = _params(args.params)
    if "kappa2" not in raw or "f0" not in raw:
        raise UsageError("orbit needs --params kappa2=...,f0=...")
    policy = FixedSigns.parse(args.signs) if args.signs else PrincipalRoot()
    orb = qrt_orbit(parse_complex(raw["kappa2"]), parse_complex(raw["f0"]), args.steps, policy)
    lines = [f"  f{j} = {_cnum(p)}" for j, p in enumerate(orb.points)]
    lines.append(f"max pair residual {orb.max_residual:.3e}" + (f", halted: {orb.halted}" if orb.halted else ""))
    _emit(out, args, orb.to_json(), lines)
    return EXIT_OK if orb.max_residual < 1e-10 else EXIT_TOLERANCE


def _cmd_growth(args, out) -> int:
    if not args.form:
        raise UsageError("growth needs --form")
    params, init = _split_params(args.form, _params(args.params))
    sol = solve_form(args.form, params, init)
    rep = growth_estimate(sol, _radii(args.radii))
    lines = [f"{sol.construction}", f"method: {rep.method}"]
    lines += [f"  N({r:g}) = {c}" for r, c in zip(rep.radii, rep.counts)]
    if rep.rho_hat is not None:
        lines.append(f"rho_hat = {rep.rho_hat:.4f} (corr {rep.fit['corr']:.5f})")
    if rep.semilog_fit.get("slope") is not None:
        lines.append(f"log N vs r: slope {rep.semilog_fit['slope']:.4f} (corr {rep.semilog_fit['corr']:.5f})")
    lines.append(f"signature: {rep.signature}")
    _emit(out, args, rep.to_json(), lines)
    return EXIT_OK


def _cmd_corpus(args, out) -> int:
    results, lines = [], []
    ok_all = True
    for e in corpus_fixture():
        ok, msg = check_entry(e)
        ok_all &= ok
        results.append({"name": e.name, "ok": ok, "message": msg})
        lines.append(f"{'PASS' if ok else 'FAIL'} {e.name}: {msg}")
    lines.append(f"{sum(r['ok'] for r in results)}/{len(results)} entries as expected")
    _emit(out, args, {"entries": results, "ok": ok_all}, lines)
    return EXIT_OK if ok_all else EXIT_TOLERANCE


_COMMANDS = {
    "classify": _cmd_classify,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "constants": _cmd_constants,
    "orbit": _cmd_orbit,
    "growth": _cmd_growth,
    "corpus": _cmd_corpus,
}


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diffclass", description="classify and solve f(z+1)^n = R(z, f)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name in _COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--json", action="store_true", help="emit JSON")
        if name in ("classify", "verify"):
            s.add_argument("--eq", help="equation text")
            s.add_argument("--file", help="file with one equation per line")
        if name in ("solve", "verify", "constants", "growth"):
            s.add_argument("--form", help="normal form id, e.g. F10")
        if name in ("solve", "verify", "orbit", "growth"):
            s.add_argument("--params", action="append", help="k=v (repeatable or comma separated)")
        if name in ("solve", "verify"):
            s.add_argument("--grid", default=DEFAULT_GRID, help='"x0,x1,nx;y0,y1,ny"')
        if name == "classify":
            s.add_argument("--expect-solvable", action="store_true",
                           help="exit 1 when no meromorphic solution exists")
        if name == "orbit":
            s.add_argument("--steps", type=int, default=50)
            s.add_argument("--signs", help='sign sequence such as "++-+"')
        if name == "growth":
            s.add_argument("--radii", default="5,10,20,30,40,50")
    return p


_VALUE_FLAGS = ("--eq", "--file", "--form", "--params", "--grid", "--steps", "--signs", "--radii")


def _glue(argv: list[str]) -> list[str]:
    # values such as "-2,2,10;-2,2,10" or "-f^2" start with '-'; bind them to their flag
    out, k = [], 0
    while k < len(argv):
        a = argv[k]
        if a in _VALUE_FLAGS and k + 1 < len(argv):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
        else:
            out.append(a)
            k += 1
    return out


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        argv = list(argv) if argv is not None else sys.argv[1:]
        args = _build_parser().parse_args(_glue(argv))
        if not args.command:
            raise UsageError("missing command; one of " + ", ".join(_COMMANDS))
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (ParseError, UnsupportedConstant) as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
