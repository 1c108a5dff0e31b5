"""Command-line interface: simulate, fit, acf, assess and grid.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .assess import l_measure, model_grid, posterior_predictive
from .distributions import DomainError, InfeasibleError, RngStream
from .inference import MODEL_KINDS, GibbsConfig, GibbsError, PosteriorDraws, Priors, gibbs_run
from .io import ParseError, ingest_csv, series_to_csv
from .moments import bartlett_se, empirical_acf, theoretical_acf
from .simulate import simulate_inar1, simulate_type_a, simulate_type_b
from .structures import (Inar1Params, TypeAParams, TypeBParams, build_order_p,
                         build_periodic, build_seasonal, build_spatial, params_to_json,
                         structure_from_json, structure_to_json)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def parse_p_range(text: str):
    """``"0..6"``, ``"1,3,5"`` or ``"2"``."""
    try:
        if ".." in text:
            a, b = text.split("..")
            vals = list(range(int(a), int(b) + 1))
        else:
            vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse order range {text!r}") from None
    if not vals or min(vals) < 0:
        raise UsageError(f"order range {text!r} must list nonnegative integers")
    return vals


def _floats(text: str):
    try:
        v = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"cannot parse numbers from {text!r}") from None
    if not v:
        raise UsageError("empty number list")
    return v[0] if len(v) == 1 else np.asarray(v)


def _seed(text, required=True):
    if text is None:
        if required:
            raise UsageError("--seed is required (an integer, or 'auto')")
        return 0
    if text == "auto":
        return int(np.random.SeedSequence().entropy % 2**64)
    try:
        v = int(text)
    except ValueError:
        raise UsageError(f"--seed must be an integer or 'auto', got {text!r}") from None
    if not 0 <= v < 2**64:
        raise UsageError("--seed must fit in 64 unsigned bits")
    return v


def _fmt(v):
    return format(float(v), ".17g")


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _json_value(v, pad):
    # json.dumps offers no float format hook; floats go out at 17 significant digits
    if isinstance(v, dict):
        if not v:
            return "{}"
        inner = pad + "  "
        items = [f"{inner}{json.dumps(str(k))}: {_json_value(v[k], inner)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        inner = pad + "  "
        items = [inner + _json_value(e, inner) for e in v]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        text = format(v, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(v, np.integer):
        v = int(v)
    return json.dumps(v)


def _dump_json(doc):
    return _json_value(doc, "") + "\n"


def _structure(args, T):
    if getattr(args, "structure_json", None):
        s = structure_from_json(Path(args.structure_json).read_text())
        if s.T != T:
            raise UsageError(f"structure has T={s.T}, requested T={T}")
        return s
    if getattr(args, "adjacency", None):
        adj = json.loads(Path(args.adjacency).read_text())
        return build_spatial(adj)
    if getattr(args, "periodic", None):
        if args.season is None:
            raise UsageError("--periodic needs --season")
        return build_periodic(T, args.season, [int(v) for v in args.periodic.split(",")])
    if getattr(args, "season", None):
        return build_seasonal(T, args.p, args.season)
    return build_order_p(T, args.p)


def _priors(args):
    return Priors(args.a_alpha, args.b_alpha, args.a_mu, args.b_mu)


def _config(args, seed, stream_id=0):
    return GibbsConfig(iterations=args.iterations, burn_in=args.burn_in, thin=args.thin,
                       seed=seed, stream_id=stream_id, alpha_grid_n=args.grid_n,
                       w_tail_tol=args.tail_tol, tied_alpha=args.tied_alpha,
                       store_latents=not getattr(args, "no_latents", False))


def _load_series(args):
    series = ingest_csv(args.data, args.layout)
    if args.series is None:
        return series[0]
    for s in series:
        if s.name == args.series:
            return s
    try:
        return series[int(args.series) - 1]
    except (ValueError, IndexError):
        raise UsageError(f"no series named {args.series!r} in {args.data}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args):
    seed = _seed(args.seed, required=False)
    rng = RngStream(seed, args.stream_id)
    if args.kind == "inar1":
        if np.ndim(args.alpha) != 0:
            raise UsageError("INAR(1) takes a single --alpha")
        params = Inar1Params(args.mu, float(args.alpha))
        out = simulate_inar1(params, args.T, rng)
        structure = None
    else:
        structure = _structure(args, args.T)
        alpha = np.broadcast_to(np.asarray(args.alpha, dtype=float), (structure.T,)).copy()
        if args.kind == "typeA":
            params = TypeAParams(args.mu, alpha)
            out = simulate_type_a(params, structure, rng=rng)
        else:
            params = TypeBParams(args.mu, alpha, args.w_divisor)
            out = simulate_type_b(params, structure, rng=rng)
    _write(args.out, series_to_csv(out.x))
    if args.latents:
        doc = {"seed": seed, "stream_id": args.stream_id,
               "params": json.loads(params_to_json(params)),
               "structure": json.loads(structure_to_json(structure)) if structure else None,
               "y": out.y.tolist(), "w": out.w.tolist()}
        Path(args.latents).write_text(_dump_json(doc))
    return EXIT_OK


def cmd_fit(args):
    seed = _seed(args.seed)
    s = _load_series(args)
    cfg = _config(args, seed)
    draws = gibbs_run(args.kind, s.x, args.p, _priors(args), cfg)
    _write(args.out, draws.to_csv())
    if args.summary:
        doc = draws.summary()
        doc["series"] = s.name
        Path(args.summary).write_text(_dump_json(doc))
    return EXIT_OK


def cmd_acf(args):
    emp = None
    if args.data:
        s = _load_series(args)
        emp = empirical_acf(s.x, args.max_lag).values
        T = s.T
    else:
        T = args.T
    theo = None
    if args.alpha is not None:
        if args.kind is None:
            raise UsageError("theoretical curves need --kind")
        a = args.alpha
        t = args.t
        if np.ndim(a) == 1 and t is None:
            t = args.p + 1
        theo = theoretical_acf(args.kind, a, args.p, args.max_lag, t=t).values
    if emp is None and theo is None:
        raise UsageError("acf needs --data and/or --kind with --alpha")
    lines = ["lag,empirical,theoretical,bartlett_se"]
    for k in range(args.max_lag + 1):
        e = _fmt(emp[k]) if emp is not None else ""
        th = _fmt(theo[k]) if theo is not None else ""
        se = _fmt(bartlett_se(theo, k, T)) if theo is not None and k and T else ""
        lines.append(f"{k},{e},{th},{se}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_assess(args):
    try:
        draws = PosteriorDraws.from_csv(Path(args.draws).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {args.draws}: {exc.strerror}") from None
    s = _load_series(args)
    rng = RngStream(_seed(args.seed, required=False), 1)
    pred = posterior_predictive(draws, data=s.x, rng=rng, level=args.level, reps=args.reps)
    L = l_measure(pred, s.x, args.nu)
    if args.predictive:
        Path(args.predictive).write_text(pred.to_csv(s.labels))
    doc = {"model": draws.kind, "p": draws.p, "series": s.name, "nu": args.nu, "L": L,
           "mean_variance": float(np.mean(pred.var)),
           "mean_squared_bias": float(np.mean((pred.mean - s.x) ** 2)),
           "n_predictive": pred.n_samples}
    _write(args.out, _dump_json(doc))
    return EXIT_OK


def cmd_grid(args):
    seed = _seed(args.seed)
    series = ingest_csv(args.data, args.layout)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    for k in kinds:
        if k not in MODEL_KINDS:
            raise UsageError(f"unknown kind {k!r}; choose from {', '.join(MODEL_KINDS)}")
    table = model_grid(series, kinds, parse_p_range(args.p), _priors(args),
                       _config(args, seed), nu=args.nu, n_jobs=args.jobs)
    _write(args.out, table.to_csv())
    if args.text:
        Path(args.text).write_text(table.to_text())
    if args.long:
        Path(args.long).write_text(table.to_long_csv())
    failed = [c for c in table.cells if c.error]
    for c in failed:
        print(f"warning: {c.series} {c.column}: {c.error}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _mcmc_flags(sp):
    g = sp.add_argument_group("MCMC")
    g.add_argument("--iterations", type=int, default=16000)
    g.add_argument("--burn-in", type=int, default=1000)
    g.add_argument("--thin", type=int, default=5)
    g.add_argument("--grid-n", type=int, default=512, help="alpha grid size")
    g.add_argument("--tail-tol", type=float, default=1e-12, help="w truncation tolerance")
    g.add_argument("--tied-alpha", action="store_true",
                   help="one alpha shared by all t instead of one per t")
    g.add_argument("--seed", help="integer seed, or 'auto' (required)")
    g = sp.add_argument_group("priors")
    for name in ("a-alpha", "b-alpha", "a-mu", "b-mu"):
        g.add_argument(f"--{name}", type=float, default=0.01)


def _data_flags(sp, required=True):
    sp.add_argument("--data", required=required, help="CSV file of counts")
    sp.add_argument("--layout", choices=("wide", "long"), default="wide")
    sp.add_argument("--series", help="series name or 1-based column (default: first)")


def _structure_flags(sp):
    sp.add_argument("--p", type=int, default=0, help="dependence order")
    sp.add_argument("--season", type=int, help="seasonal lag s")
    sp.add_argument("--periodic", help="comma list of per-season orders (needs --season)")
    sp.add_argument("--adjacency", help="JSON list of neighbour lists (spatial)")
    sp.add_argument("--structure-json", help="structure JSON document")


def build_parser():
    ap = _Parser(prog="poisdep", description="Dependent Poisson count sequences.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("simulate", help="simulate a count series")
    sp.add_argument("--kind", choices=MODEL_KINDS, required=True)
    _structure_flags(sp)
    sp.add_argument("--alpha", type=_floats, required=True,
                    help="thinning probability, or a comma list with one value per t")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--w-divisor", type=float)
    sp.add_argument("--seed", help="integer seed (default 0)")
    sp.add_argument("--stream-id", type=int, default=0)
    sp.add_argument("--out", help="CSV output (label,x); default stdout")
    sp.add_argument("--latents", help="also write latents and parameters as JSON")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("fit", help="run the Gibbs sampler")
    _data_flags(sp)
    sp.add_argument("--kind", choices=MODEL_KINDS, required=True)
    sp.add_argument("--p", type=int, default=0)
    _mcmc_flags(sp)
    sp.add_argument("--no-latents", action="store_true", help="do not store y and w draws")
    sp.add_argument("--out", help="draws CSV (default stdout)")
    sp.add_argument("--summary", help="JSON posterior summary")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("acf", help="empirical and theoretical autocorrelations")
    _data_flags(sp, required=False)
    sp.add_argument("--kind", choices=MODEL_KINDS)
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--alpha", type=_floats)
    sp.add_argument("--t", type=int, help="anchor time for time-varying alpha")
    sp.add_argument("--T", type=int, default=0, help="length for Bartlett errors without data")
    sp.add_argument("--max-lag", type=int, default=10)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_acf)

    sp = sub.add_parser("assess", help="posterior predictive L-measure of a fit")
    sp.add_argument("--draws", required=True, help="draws CSV written by 'fit'")
    _data_flags(sp)
    sp.add_argument("--nu", type=float, default=0.5)
    sp.add_argument("--level", type=float, default=0.95)
    sp.add_argument("--reps", type=int, default=1, help="predictive replicates per draw")
    sp.add_argument("--seed", help="seed for predictive replicates (default 0)")
    sp.add_argument("--predictive", help="per-t predictive summary CSV")
    sp.add_argument("--out", help="JSON result (default stdout)")
    sp.set_defaults(func=cmd_assess)

    sp = sub.add_parser("grid", help="compare models over a grid of orders")
    _data_flags(sp)
    sp.add_argument("--p", default="0..6", help="orders, e.g. 0..6 or 0,2,4")
    sp.add_argument("--kinds", default="typeA,typeB,inar1")
    sp.add_argument("--nu", type=float, default=0.5)
    sp.add_argument("--jobs", type=int, default=1)
    _mcmc_flags(sp)
    sp.add_argument("--out", help="Table-1 shaped CSV (default stdout)")
    sp.add_argument("--text", help="aligned text table with minima starred")
    sp.add_argument("--long", help="one row per fitted cell")
    sp.set_defaults(func=cmd_grid)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"poisdep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InfeasibleError, GibbsError, ParseError, NotImplementedError,
            OSError) as exc:
        print(f"poisdep {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def cli(argv=None) -> int:
    """Run the CLI and return the exit code (argparse exits are caught)."""
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
