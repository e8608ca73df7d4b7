"""Command-line experiments on the gap statistics of {n alpha}.

Subcommands write CSV (``%.12g`` numbers, header row) or JSON.  Both carry a
metadata block echoing the configuration and package version; no
timestamps are written, so equal configurations give byte-identical files.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .arc_measure import (
    TEST_FUNCTIONS,
    QuadratureError,
    empirical_gk_grid,
    lemma2_discrepancy,
    monte_carlo_gk,
    quadrature_gk,
    quantize_lambda,
)
from .closed_forms import classify_region, g1, g1_piece_A, g1_piece_C, g2
from .farey import FareyError, farey_neighbors, parse_alpha, parse_rational
from .three_gap import gap_triple, gap_word_list, sigma_permutation

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_TOLERANCE = 0, 1, 2, 3

# fixed CSV schemas, one per subcommand
COLUMNS = {
    "figure1": ["lambda", "empirical", "closed_form", "abs_diff"],
    "figure2": ["lambda1", "lambda2", "g2", "region"],
    "empirical": ["lambda", "empirical"],
    "closedform1": ["lambda", "g1", "g1_piece_A", "g1_piece_C"],
    "closedform2": ["lambda1", "lambda2", "g2", "region"],
    "g2": ["lambda1", "lambda2", "region", "g2", "quadrature", "abs_diff"],
    "convergence": ["Q", "empirical", "reference", "abs_error"],
    "lemma2": ["Q", "discrepancy"],
    "montecarlo": ["mean", "stderr", "empirical", "z"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    beta: str = "1/3"
    eta: str = "1/10"
    q: list[int] = field(default_factory=lambda: [1000])
    lambdas: list[str] = field(default_factory=list)
    lambdas2: list[str] = field(default_factory=list)
    k: int = 1
    samples: int = 100000
    seed: int = 0
    out: str | None = None
    format: str = "csv"


# ---------------------------------------------------------------------------
# argument parsing helpers

def parse_grid(text: str) -> list[Fraction]:
    """``a,b,c`` or ``min:max:step`` into exact values quantized to 1e-6."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [Fraction(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            lo, hi, step = parts
            if step <= 0 or hi < lo:
                raise ValueError
            n = int((hi - lo) / step)
            vals = [lo + i * step for i in range(n + 1)]
        else:
            vals = [Fraction(p) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad lambda specification {text!r}") from None
    if not vals:
        raise UsageError("empty lambda grid")
    if any(v < 0 for v in vals):
        raise UsageError("thresholds must be non-negative")
    return [quantize_lambda(v) for v in vals]


def _q_list(text: str) -> list[int]:
    try:
        qs = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"bad --q value {text!r}") from None
    if not qs or any(q < 2 for q in qs):
        raise UsageError("Q must be at least 2")
    return qs


def _rational(text: str, name: str) -> Fraction:
    try:
        return parse_rational(text)
    except FareyError:
        raise UsageError(f"bad --{name} value {text!r}") from None


# ---------------------------------------------------------------------------
# output

def _metadata(cfg: RunConfig) -> dict:
    meta = {"version": __version__}
    meta.update({k: v for k, v in asdict(cfg).items() if k not in ("out", "format")})
    return meta


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    if isinstance(v, Fraction):
        return "%.12g" % float(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def render(cfg: RunConfig, schema: str, rows: Sequence[Sequence], summary: dict | None = None) -> str:
    cols = COLUMNS[schema]
    if cfg.format == "json":
        doc = {
            "metadata": _metadata(cfg),
            "columns": cols,
            "rows": [[_jsonable(v) for v in r] for r in rows],
        }
        if summary is not None:
            doc["summary"] = {k: _jsonable(v) for k, v in summary.items()}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(_metadata(cfg), sort_keys=True) + "\n")
    if summary is not None:
        buf.write("# summary " + json.dumps({k: _jsonable(v) for k, v in summary.items()},
                                            sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def emit(cfg: RunConfig, text: str, summary: dict | None = None) -> None:
    """Write to --out (or stdout).  A CSV file with a summary also gets a
    companion ``<stem>.summary.json``."""
    if not cfg.out:
        sys.stdout.write(text)
        return
    with open(cfg.out, "w", newline="") as fh:
        fh.write(text)
    if summary is not None and cfg.format == "csv":
        doc = {"metadata": _metadata(cfg),
               "summary": {k: _jsonable(v) for k, v in summary.items()}}
        with open(os.path.splitext(cfg.out)[0] + ".summary.json", "w") as fh:
            fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def loglog_slope(qs: Sequence[int], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(Q); nan if any error is 0."""
    e = np.asarray(errors, dtype=float)
    if len(qs) < 2 or np.any(e <= 0):
        return math.nan
    return float(np.polyfit(np.log(np.asarray(qs, dtype=float)), np.log(e), 1)[0])


# ---------------------------------------------------------------------------
# subcommands

def cmd_gaps(alpha_text: str, Q: int, kmax: int = 3) -> dict:
    """Farey neighbours, gap lengths and counts, sigma and the word lists."""
    alpha = parse_alpha(alpha_text)
    pair = farey_neighbors(alpha, Q)
    tri = gap_triple(alpha, Q)
    words = {k: gap_word_list(alpha, Q, k) for k in range(1, min(kmax, Q) + 1)}
    return {
        "alpha": alpha_text,
        "Q": Q,
        "neighbors": [str(pair.left), str(pair.right)],
        "lengths": {s: float(tri.length(s)) for s in "ABC"},
        "counts": {s: tri.count(s) for s in "ABC"},
        "sigma": sigma_permutation(alpha, Q),
        "words": {str(k): v for k, v in words.items()},
    }


def _gaps_text(rep: dict) -> str:
    lines = [
        f"alpha = {rep['alpha']}, Q = {rep['Q']}",
        f"Farey neighbours: {rep['neighbors'][0]} < alpha < {rep['neighbors'][1]}",
    ]
    for s in "ABC":
        lines.append(f"gap {s}: length {rep['lengths'][s]:.12g}, count {rep['counts'][s]}")
    lines.append("sigma = " + ",".join(str(v) for v in rep["sigma"]))
    for k, ws in rep["words"].items():
        lines.append(f"G_{{{rep['Q']},{k}}} = {{" + ",".join(ws) + "}")
    return "\n".join(lines) + "\n"


def cmd_figure1(cfg: RunConfig):
    beta, eta = _rational(cfg.beta, "beta"), _rational(cfg.eta, "eta")
    Q = cfg.q[0]
    lams = cfg_lambdas(cfg, "0:5:0.01")
    emp = empirical_gk_grid(beta, eta, Q, [(lam,) for lam in lams])
    rows = []
    for lam, e in zip(lams, emp):
        c = g1(float(lam))
        rows.append((lam, e, c, abs(e - c)))
    max_diff = max(r[3] for r in rows)
    envelope = max((1 + float(lam)) for lam in lams) * Q ** -0.4 / float(eta)
    summary = {"max_abs_diff": max_diff, "envelope": envelope, "Q": Q}
    return rows, summary


def cmd_figure2(cfg: RunConfig):
    l1 = cfg_lambdas(cfg, "0:3:0.05")
    l2 = [quantize_lambda(Fraction(v)) for v in cfg.lambdas2] if cfg.lambdas2 else l1
    rows = []
    for a in l1:
        for b in l2:
            fa, fb = float(a), float(b)
            rows.append((a, b, g2(fa, fb), classify_region(fa, fb).tag))
    return rows, None


def cfg_lambdas(cfg: RunConfig, default: str) -> list[Fraction]:
    if cfg.lambdas:
        return [Fraction(v) for v in cfg.lambdas]
    return parse_grid(default)


def _point(cfg: RunConfig) -> tuple[float, ...]:
    lams = tuple(float(v) for v in cfg_lambdas(cfg, "0"))
    if len(lams) != cfg.k:
        raise UsageError(f"--k {cfg.k} needs exactly {cfg.k} thresholds, got {len(lams)}")
    return lams


def cmd_empirical(cfg: RunConfig):
    beta, eta = _rational(cfg.beta, "beta"), _rational(cfg.eta, "eta")
    Q = cfg.q[0]
    if cfg.k == 1:
        lams = cfg_lambdas(cfg, "0:5:0.01")
        vals = empirical_gk_grid(beta, eta, Q, [(lam,) for lam in lams])
        return [(lam, v) for lam, v in zip(lams, vals)], None
    point = _point(cfg)
    v = empirical_gk_grid(beta, eta, Q, [point])[0]
    return [(";".join(_fmt(p) for p in point), v)], None


def cmd_closedform(cfg: RunConfig):
    if cfg.k == 1:
        lams = cfg_lambdas(cfg, "0:5:0.01")
        return [(lam, g1(float(lam)), g1_piece_A(float(lam)), g1_piece_C(float(lam)))
                for lam in lams], None
    if cfg.k == 2:
        a, b = _point(cfg)
        return [(a, b, g2(a, b), classify_region(a, b).tag)], None
    raise UsageError("closed forms exist for k = 1 and k = 2 only")


def cmd_g2(cfg: RunConfig, tol: float = 1e-5):
    """g2 on a grid against the quadrature of the limiting integral."""
    l1 = cfg_lambdas(cfg, "0.25,0.75,1.25,1.75,2.5")
    l2 = [quantize_lambda(Fraction(v)) for v in cfg.lambdas2] if cfg.lambdas2 else l1
    rows = []
    for a in l1:
        for b in l2:
            fa, fb = float(a), float(b)
            closed = g2(fa, fb)
            quad = quadrature_gk((fa, fb))
            rows.append((a, b, classify_region(fa, fb).tag, closed, quad, abs(closed - quad)))
    worst = max(r[5] for r in rows)
    return rows, {"max_abs_diff": worst, "tolerance": tol, "passed": worst <= tol}


def _reference(point: tuple[float, ...]) -> float:
    if len(point) == 1:
        return g1(point[0])
    if len(point) == 2:
        return g2(*point)
    return quadrature_gk(point)


def cmd_convergence(cfg: RunConfig, max_slope: float = -0.4):
    beta, eta = _rational(cfg.beta, "beta"), _rational(cfg.eta, "eta")
    qs = cfg.q
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise UsageError("the Q list must be increasing")
    point = _point(cfg)
    ref = _reference(point)
    rows = []
    for Q in qs:
        e = empirical_gk_grid(beta, eta, Q, [point])[0]
        rows.append((Q, e, ref, abs(e - ref)))
    errs = [r[3] for r in rows]
    slope = loglog_slope(qs, errs)
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    all_zero = all(e <= 1e-12 for e in errs)
    passed = all_zero or (decreasing and slope <= max_slope)
    return rows, {"slope": slope, "strictly_decreasing": decreasing,
                  "max_slope": max_slope, "passed": passed}


def cmd_lemma2(cfg: RunConfig, function_id: str, delta: float | None, max_slope: float = -0.4):
    beta, eta = _rational(cfg.beta, "beta"), _rational(cfg.eta, "eta")
    if function_id not in TEST_FUNCTIONS:
        raise UsageError(f"unknown test function {function_id!r}; choose from {sorted(TEST_FUNCTIONS)}")
    qs = cfg.q
    rows = [(Q, lemma2_discrepancy(function_id, beta, eta, Q, delta)) for Q in qs]
    errs = [r[1] for r in rows]
    slope = loglog_slope(qs, errs)
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    return rows, {"slope": slope, "strictly_decreasing": decreasing,
                  "max_slope": max_slope, "passed": decreasing and slope <= max_slope}


def cmd_montecarlo(cfg: RunConfig, nsigma: float = 3.0):
    beta, eta = _rational(cfg.beta, "beta"), _rational(cfg.eta, "eta")
    Q = cfg.q[0]
    point = _point(cfg)
    mc = monte_carlo_gk(beta, eta, Q, point, cfg.samples, cfg.seed)
    emp = empirical_gk_grid(beta, eta, Q, [point])[0]
    diff = abs(emp - mc.mean)
    z = diff / mc.stderr if mc.stderr > 0 else (0.0 if diff <= 1e-12 else math.inf)
    return [(mc.mean, mc.stderr, emp, z)], {"nsigma": nsigma, "passed": z <= nsigma}


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="threegap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, q_default="1000", lam_help="csv list or min:max:step"):
        sp.add_argument("--beta", default="1/3", help="window start (rational)")
        sp.add_argument("--eta", default="1/10", help="window length (rational)")
        sp.add_argument("--q", default=q_default, help="order Q (or comma list)")
        sp.add_argument("--lambda", dest="lam", default=None, help=lam_help)
        sp.add_argument("--k", type=int, default=1, help="word length")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    g = sub.add_parser("gaps", help="three-gap inspector for one alpha")
    g.add_argument("--alpha", required=True, help="decimal string or p/q")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--k", type=int, default=3, help="longest word length listed")
    g.add_argument("--out", default=None)
    g.add_argument("--format", choices=("text", "json"), default="text")

    common(sub.add_parser("figure1", help="empirical g1 against the closed form"))
    f2 = sub.add_parser("figure2", help="g2 surface with region tags")
    common(f2)
    f2.add_argument("--lambda2", default=None, help="grid for lambda2 (default: same as --lambda)")
    common(sub.add_parser("empirical", help="finite-Q arc sum"))
    common(sub.add_parser("closedform", help="g1 (k=1) or g2 (k=2) closed forms"))
    g2p = sub.add_parser("g2", help="g2 closed form against quadrature (validation)")
    common(g2p)
    g2p.add_argument("--lambda2", default=None)
    g2p.add_argument("--tol", type=float, default=1e-5)
    cv = sub.add_parser("convergence", help="empirical error against Q")
    common(cv, q_default="250,1000,4000")
    cv.add_argument("--max-slope", type=float, default=-0.4)
    l2 = sub.add_parser("lemma2", help="Farey sum against integral discrepancy")
    common(l2, q_default="250,1000,4000")
    l2.add_argument("--function", default="1", help=f"one of {sorted(TEST_FUNCTIONS)}")
    l2.add_argument("--delta", type=float, default=None)
    l2.add_argument("--max-slope", type=float, default=-0.4)
    mc = sub.add_parser("montecarlo", help="Monte Carlo oracle against the arc sum")
    common(mc, q_default="100")
    mc.add_argument("--samples", type=int, default=100000)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    cfg.beta, cfg.eta = args.beta, args.eta
    cfg.q = _q_list(args.q)
    cfg.k = args.k
    if cfg.k < 1:
        raise UsageError("--k must be positive")
    cfg.seed = args.seed
    cfg.out, cfg.format = args.out, args.format
    if args.lam is not None:
        cfg.lambdas = [str(v) for v in parse_grid(args.lam)]
    if getattr(args, "lambda2", None):
        cfg.lambdas2 = [str(v) for v in parse_grid(args.lambda2)]
    cfg.samples = getattr(args, "samples", cfg.samples)
    if cfg.samples < 1:
        raise UsageError("--samples must be positive")
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on usage errors (code 1 via _Parser) and on --help (0)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.subcommand == "gaps":
            if args.q < 2 or args.k < 1:
                raise UsageError("need --q >= 2 and --k >= 1")
            rep = cmd_gaps(args.alpha, args.q, args.k)
            text = (json.dumps(rep, indent=2, sort_keys=True) + "\n"
                    if args.format == "json" else _gaps_text(rep))
            emit(RunConfig("gaps", out=args.out), text)
            return EXIT_OK
        cfg = _config(args)
        sc = args.subcommand
        schema = sc
        if sc == "figure1":
            rows, summary = cmd_figure1(cfg)
        elif sc == "figure2":
            rows, summary = cmd_figure2(cfg)
        elif sc == "empirical":
            rows, summary = cmd_empirical(cfg)
        elif sc == "closedform":
            rows, summary = cmd_closedform(cfg)
            schema = "closedform1" if cfg.k == 1 else "closedform2"
        elif sc == "g2":
            rows, summary = cmd_g2(cfg, args.tol)
        elif sc == "convergence":
            rows, summary = cmd_convergence(cfg, args.max_slope)
        elif sc == "lemma2":
            rows, summary = cmd_lemma2(cfg, args.function, args.delta, args.max_slope)
        else:
            rows, summary = cmd_montecarlo(cfg)
        emit(cfg, render(cfg, schema, rows, summary), summary)
        if summary is not None and summary.get("passed") is False:
            return EXIT_TOLERANCE
        return EXIT_OK
    except UsageError as exc:
        print(f"threegap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FareyError, ValueError, QuadratureError) as exc:
        print(f"threegap: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"threegap: I/O error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
