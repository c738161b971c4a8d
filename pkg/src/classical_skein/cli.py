"""Command-line interface: normalize, eval, check, nilpotent, split.

Exit codes: 0 success, 1 a check failed, 2 bad input (parse or validation
error), 3 resource limit hit (Gröbner budget, term cap, size cap),
4 unsupported configuration.
"""

from __future__ import annotations

import json
import random
import re
import sys
from pathlib import Path

import click
import numpy as np

from .errors import (
    BudgetExceeded,
    InvalidWordError,
    ParseError,
    SizeLimitError,
    SkeinError,
    SpecError,
    StateError,
    TermLimitError,
    UnsupportedConfiguration,
)
from .evaluation import (
    DEFAULT_TOL,
    Representation,
    evaluate,
    phi_direct,
    sample_representation,
    validate_representation,
)
from .groups import MarkedManifoldSpec
from .ideals import DEFAULT_BUDGET, buchberger, is_nilpotent, manifold_ideal
from .parsing import format_manifold, format_web, parse_manifold, parse_web
from .polyring import PolyRing, parse_poly
from .randomgen import random_vertex_web, random_web
from .skein import build_ring, check_web, normalize, relation_suite
from .splitting import glue_rep, theta_split

EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_UNSUPPORTED = 4

_INPUT_ERRORS = (ParseError, SpecError, StateError, InvalidWordError)
_RESOURCE_ERRORS = (BudgetExceeded, TermLimitError, SizeLimitError)


def _complex_text(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _complex_json(z: complex) -> list[float]:
    return [float(f"{z.real:.15g}"), float(f"{z.imag:.15g}")]


def _read_arg(value: str) -> tuple[str, str]:
    """An argument may be inline text or a path to a file holding it."""
    path = Path(value)
    if len(value) < 4096 and "\n" not in value and path.is_file():
        return path.read_text(), str(path)
    return value, ""


def _load_manifold(value: str | None) -> MarkedManifoldSpec:
    if value is None:
        raise click.UsageError("--manifold is required for this command")
    text, source = _read_arg(value)
    return parse_manifold(text, source)


def _load_web(value: str | None, spec: MarkedManifoldSpec):
    if value is None:
        raise click.UsageError("--web is required for this command")
    text, source = _read_arg(value)
    web = parse_web(text, spec.n, source)
    check_web(spec, web)
    return web


def _load_rep(value: str, spec: MarkedManifoldSpec, tol: float) -> Representation:
    text, _ = _read_arg(value)
    rep = Representation.from_json(text, tol)
    if not validate_representation(spec, rep):
        raise SpecError("representation misses a block or violates the manifold constraints")
    return rep


class _Output:
    def __init__(self, fmt: str):
        self.structured = fmt == "structured"
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str) -> None:
        self.lines.append(text)

    def emit(self) -> None:
        if self.structured:
            click.echo(json.dumps(self.data, sort_keys=True, indent=2))
        else:
            for ln in self.lines:
                click.echo(ln)


def _run(fn):
    """Map library errors to exit codes with a one-line diagnostic."""
    try:
        code = fn()
    except click.UsageError:
        raise
    except _INPUT_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except _RESOURCE_ERRORS as exc:
        detail = f" (after {exc.used} pair reductions)" if isinstance(exc, BudgetExceeded) else ""
        click.echo(f"resource limit: {exc}{detail}", err=True)
        sys.exit(EXIT_RESOURCE)
    except UnsupportedConfiguration as exc:
        click.echo(f"unsupported: {exc}", err=True)
        sys.exit(EXIT_UNSUPPORTED)
    except SkeinError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    sys.exit(code or 0)


_common = [
    click.option("--manifold", "manifold", help="Manifold spec text or file."),
    click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text", show_default=True),
]


def _with(options):
    def wrap(f):
        for opt in reversed(options):
            f = opt(f)
        return f

    return wrap


@click.group()
def main() -> None:
    """Classical-limit stated skein computations."""


@main.command("normalize")
@_with(_common)
@click.option("--web", help="Web expression or file.")
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
def normalize_cmd(manifold, fmt, web, budget):
    """Print the canonical normal form of a web."""

    def go():
        spec = _load_manifold(manifold)
        w = _load_web(web, spec)
        sr = build_ring(spec, budget)
        p = normalize(sr, w)
        out = _Output(fmt)
        out.line(p.to_text())
        out.data = {"command": "normalize", "manifold": format_manifold(spec), "web": format_web(w), "normal_form": p.to_text()}
        out.emit()

    _run(go)


@main.command("eval")
@_with(_common)
@click.option("--web", help="Web expression or file.")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--rep", "rep_arg", help="Representation JSON (text or file); replaces sampling.")
def eval_cmd(manifold, fmt, web, seed, trials, budget, tol, rep_arg):
    """Evaluate a web at representations, through the normal form and directly."""

    def go():
        spec = _load_manifold(manifold)
        w = _load_web(web, spec)
        sr = build_ring(spec, budget)
        nf = normalize(sr, w)
        if rep_arg is not None:
            reps = [("given", _load_rep(rep_arg, spec, tol))]
        else:
            reps = [(str(t), sample_representation(spec, np.random.default_rng([seed, t]))) for t in range(trials)]
        out = _Output(fmt)
        rows = []
        worst = 0.0
        for label, rep in reps:
            via_nf = evaluate(nf, rep)
            direct = phi_direct(spec, w, rep)
            dev = abs(via_nf - direct)
            worst = max(worst, dev)
            out.line(f"trial {label}: {_complex_text(via_nf)}  (direct {_complex_text(direct)}, deviation {dev:.3e})")
            rows.append({"trial": label, "value": _complex_json(via_nf), "direct": _complex_json(direct), "deviation": float(f"{dev:.6e}")})
        ok = worst <= tol
        out.line(f"{'PASS' if ok else 'FAIL'}  max deviation {worst:.3e} (tol {tol:g})")
        out.data = {"command": "eval", "manifold": format_manifold(spec), "web": format_web(w), "seed": seed, "trials": rows, "max_deviation": float(f"{worst:.6e}"), "passed": ok}
        out.emit()
        return 0 if ok else EXIT_FAILED

    _run(go)


@main.command("check")
@_with(_common)
@click.option("--web", help="Extra web for the route check (default: random webs).")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--max-word", type=click.IntRange(min=0), default=3, show_default=True)
def check_cmd(manifold, fmt, web, seed, trials, budget, tol, max_word):
    """Run the relation suite and the route-consistency check."""

    def go():
        spec = _load_manifold(manifold)
        sr = build_ring(spec, budget)
        report = relation_suite(sr, trials, seed, max_word)
        out = _Output(fmt)
        out.line(report.table())
        rows = [{"relation": r.name, "checked": r.checked, "passed": r.passed, "failures": r.failures} for r in report.rows]

        rng = random.Random(seed)
        webs = [_load_web(web, spec)] if web is not None else []
        if not webs:
            webs = [random_web(spec, rng, max_len=max_word) for _ in range(3)]
            if spec.k >= 1:
                webs.append(random_vertex_web(spec, rng, 1, max_len=min(max_word, 2)))
        worst = 0.0
        checked = 0
        for t in range(min(trials, 10)):
            rep = sample_representation(spec, np.random.default_rng([seed, t]))
            for w in webs:
                worst = max(worst, abs(evaluate(normalize(sr, w), rep) - phi_direct(spec, w, rep)))
                checked += 1
        route_ok = worst <= tol
        out.line(f"{'PASS' if route_ok else 'FAIL'}  {'route consistency':<28} {checked} instances, max deviation {worst:.3e}")
        rows.append({"relation": "route consistency", "checked": checked, "passed": route_ok, "max_deviation": float(f"{worst:.6e}")})
        ok = report.passed and route_ok
        out.data = {"command": "check", "manifold": format_manifold(spec), "seed": seed, "rows": rows, "passed": ok}
        out.emit()
        return 0 if ok else EXIT_FAILED

    _run(go)


_SCRATCH_NAME = re.compile(r"(?<![\w\]])([A-Za-z_][A-Za-z0-9_]*)(?!\w|\[)")


def _scratch_ring(texts: list[str]) -> PolyRing:
    names = sorted({m.group(1) for t in texts for m in _SCRATCH_NAME.finditer(t)})
    return PolyRing.scratch(*names)


@main.command("nilpotent")
@_with(_common)
@click.option("--poly", "poly_text", required=True, help="Element to test.")
@click.option("--ideal", "ideal_texts", multiple=True, help="Ideal generator (repeatable); without --manifold the ring is built from the names used.")
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
def nilpotent_cmd(manifold, fmt, poly_text, ideal_texts, budget):
    """Decide whether an element is nilpotent modulo an ideal."""

    def go():
        if manifold is not None:
            spec = _load_manifold(manifold)
            ring = spec.ring
            gens = [parse_poly(t, ring) for t in ideal_texts]
            gb = manifold_ideal(spec, budget) if not gens else buchberger(list(ring.det_relations) + gens, budget)
            where = format_manifold(spec)
        else:
            ring = _scratch_ring([poly_text, *ideal_texts])
            gens = [parse_poly(t, ring) for t in ideal_texts]
            if not gens:
                raise SpecError("--ideal is required without --manifold")
            gb = buchberger(gens, budget)
            where = f"Q[{', '.join(ring.var_names)}]"
        p = parse_poly(poly_text, ring)
        verdict = is_nilpotent(p, gb, budget)
        member = gb.is_member(p)
        out = _Output(fmt)
        out.line("true" if verdict else "false")
        out.data = {"command": "nilpotent", "ring": where, "poly": p.to_text(), "ideal": [g.to_text() for g in gb.basis], "nilpotent": verdict, "member": member}
        out.emit()

    _run(go)


@main.command("split")
@_with(_common)
@click.option("--web", help="Web expression or file.")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--symbolic/--numeric", default=True, show_default=True, help="Also normalize the image in the cut ring.")
def split_cmd(manifold, fmt, web, seed, trials, budget, tol, symbolic):
    """Cut along the last generator's disk and check the commuting square."""

    def go():
        spec = _load_manifold(manifold)
        w = _load_web(web, spec)
        result = theta_split(spec, w, symbolic=False)
        cut = result.cut_spec
        element = None
        if symbolic:
            element = normalize(build_ring(cut, budget), result.combination)
        worst = 0.0
        for t in range(trials):
            cut_rep = sample_representation(cut, np.random.default_rng([seed, t]))
            whole = phi_direct(spec, w, glue_rep(cut_rep, spec))
            pieces = sum(complex(c) * phi_direct(cut, piece, cut_rep) for c, piece in result.combination)
            worst = max(worst, abs(whole - pieces))
            if element is not None:
                worst = max(worst, abs(whole - evaluate(element, cut_rep)))
        ok = worst <= tol
        out = _Output(fmt)
        out.line(f"cut manifold: {format_manifold(cut)}")
        out.line(f"image: {len(result.combination)} state-sum terms")
        if element is not None:
            out.line(f"normal form: {element.to_text()}")
        out.line(f"{'PASS' if ok else 'FAIL'}  commuting-square residual {worst:.3e} (tol {tol:g})")
        out.data = {
            "command": "split",
            "manifold": format_manifold(spec),
            "cut_manifold": format_manifold(cut),
            "web": format_web(w),
            "terms": [[str(c), format_web(piece)] for c, piece in result.combination],
            "normal_form": element.to_text() if element is not None else None,
            "residual": float(f"{worst:.6e}"),
            "passed": ok,
        }
        out.emit()
        return 0 if ok else EXIT_FAILED

    _run(go)


if __name__ == "__main__":
    main()
