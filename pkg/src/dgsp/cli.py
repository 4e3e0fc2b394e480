"""Command-line interface.

Subcommands: generate, transform, denoise, perturb, spread. Every run is
deterministic given --seed and writes a manifest.json echoing the resolved
configuration next to its outputs.

Exit codes: 0 success, 2 usage error, 3 data mismatch, 4 numerical
failure, 5 violated mathematical assumption.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    AssumptionError,
    DimensionError,
    FilterEvaluationError,
    NumericalError,
    ParseError,
    PreconditionError,
    UndefinedMetricError,
    ValidationError,
)
from .experiments import (
    DEFAULT_C_GRID,
    denoise_experiment,
    heat_flow_case,
    spread_experiment,
)
from .graph import (
    Digraph,
    Edge,
    ShiftKind,
    directed_cycle,
    load_edge_list,
    orient_random_edges,
    save_edge_list,
    shift_operator,
    undirected_cycle,
)
from .perturb import continuity_experiment
from .serialize import (
    load_signal,
    save_signal,
    write_report_csv,
    write_report_json,
    write_spectral_matrix,
)
from .perturb import DEFAULT_DEROGATORY_TOL
from .spectrum import build_basis, diagonal_energy_fraction, forward
from .svgplot import write_heatmap

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4
EXIT_ASSUMPTION = 5


def _shift_kind(args) -> ShiftKind:
    if args.shift == "adj":
        return ShiftKind.adjacency()
    return ShiftKind.laplacian(degree=args.degree, sign=args.sign)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, args) -> None:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    doc = {"command": command, "config": config, "version": __version__}
    with open(out / "manifest.json", "w", encoding="ascii", newline="\n") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True, default=str)
        fh.write("\n")


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"{flag}: {exc}") from exc
    return values


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"{flag}: {exc}") from exc
    return values


def cmd_generate(args) -> int:
    try:
        if args.kind == "ucycle":
            g, signal = undirected_cycle(args.n), None
        elif args.kind == "dcycle":
            g, signal = directed_cycle(args.n), None
        elif args.kind == "perturbed":
            g = undirected_cycle(args.n)
            if args.weighted:
                rng = np.random.default_rng([args.seed, 1])
                weights = rng.uniform(0.5, 1.5, len(g.edges))
                g = Digraph(g.n, tuple(
                    Edge(e.src, e.dst, float(w), e.directed)
                    for e, w in zip(g.edges, weights)
                ))
            g = orient_random_edges(g, 10 * args.k, args.seed)
            signal = None
        else:
            g, signal = heat_flow_case(n=args.n, seed=args.seed)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = _outdir(args)
    save_edge_list(g, out / "graph.csv")
    if signal is not None:
        save_signal(out / "signal.csv", signal)
    _write_manifest(out, "generate", args)
    print(f"wrote {out / 'graph.csv'}")
    return EXIT_OK


def cmd_transform(args) -> int:
    g = load_edge_list(args.graph)
    f = load_signal(args.signal)
    if f.shape[0] != g.n:
        raise DimensionError(f"signal has {f.shape[0]} values but graph has {g.n} nodes")
    basis = build_basis(shift_operator(g, _shift_kind(args)), align=args.align)
    a = forward(basis, f)
    out = _outdir(args)
    write_spectral_matrix(out / "spectrum.json", basis, a)
    write_heatmap(out / "heatmap.svg", np.abs(a), cell=args.cell_size, colormap=args.colormap)
    try:
        frac = f"{diagonal_energy_fraction(a):.12g}"
    except UndefinedMetricError:
        frac = "n/a"
    print(f"diagonal_energy_fraction: {frac}")
    _write_manifest(out, "transform", args)
    return EXIT_OK


def cmd_denoise(args) -> int:
    sigmas = _parse_float_list(args.sigma, "--sigma")
    if not sigmas:
        print("error: --sigma needs at least one value", file=sys.stderr)
        return EXIT_USAGE
    c_grid = _parse_float_list(args.c_grid, "--c-grid") if args.c_grid else DEFAULT_C_GRID
    g = load_edge_list(args.graph)
    f = load_signal(args.signal)
    if f.shape[0] != g.n:
        raise DimensionError(f"signal has {f.shape[0]} values but graph has {g.n} nodes")
    rows, summaries = denoise_experiment(
        g, f, sigmas, trials=args.trials, seed=args.seed, c_grid=c_grid,
        kind=_shift_kind(args), align=args.align,
    )
    out = _outdir(args)
    with open(out / "trials.csv", "w", encoding="ascii", newline="\n") as fh:
        fh.write("sigma,trial,base_rmse,dgsp_rmse\n")
        for r in rows:
            fh.write(f"{r.sigma:.17g},{r.trial},{r.base_rmse:.17g},{r.dgsp_rmse:.17g}\n")
    qnames = ["min", "q25", "median", "q75", "max"]
    with open(out / "summary.csv", "w", encoding="ascii", newline="\n") as fh:
        head = ",".join([f"base_{q}" for q in qnames] + [f"dgsp_{q}" for q in qnames])
        fh.write(f"sigma,c,{head}\n")
        for s in summaries:
            vals = list(s.base_quantiles) + list(s.dgsp_quantiles)
            fh.write(f"{s.sigma:.17g},{s.c:.17g}," + ",".join(f"{v:.17g}" for v in vals) + "\n")
    _write_manifest(out, "denoise", args)
    for s in summaries:
        print(
            f"sigma={s.sigma:g} c={s.c:g} base_median={s.base_quantiles[2]:.6g} "
            f"dgsp_median={s.dgsp_quantiles[2]:.6g}"
        )
    return EXIT_OK


def cmd_perturb(args) -> int:
    scales = _parse_float_list(args.scales, "--scales")
    ks = _parse_int_list(args.ks, "--ks")
    if not scales or not ks:
        print("error: --scales and --ks need at least one value each", file=sys.stderr)
        return EXIT_USAGE
    g = load_edge_list(args.graph)
    s = shift_operator(g, _shift_kind(args))
    rng = np.random.default_rng(args.seed)
    delta = rng.standard_normal(s.shape)
    delta /= np.linalg.norm(delta)
    derog = args.tol if args.tol is not None else DEFAULT_DEROGATORY_TOL
    report = continuity_experiment(s, delta, scales, ks, align=args.align,
                                   derogatory_tol=derog)
    out = _outdir(args)
    write_report_json(out / "report.json", report)
    write_report_csv(out / "report.csv", report)
    _write_manifest(out, "perturb", args)
    print(
        f"fitted_slope={report.fitted_slope:.6g} fitted_c={report.fitted_c:.6g} "
        f"epsilon_hat={report.epsilon_hat:g}"
    )
    return EXIT_OK


def cmd_spread(args) -> int:
    ks = _parse_int_list(args.ks, "--ks")
    if not ks:
        print("error: --ks needs at least one value", file=sys.stderr)
        return EXIT_USAGE
    results = spread_experiment(
        n=args.n, ks=ks, seed=args.seed, modes=args.modes, kind=_shift_kind(args)
    )
    out = _outdir(args)
    with open(out / "fractions.csv", "w", encoding="ascii", newline="\n") as fh:
        fh.write("k,diagonal_fraction,offdiagonal_mass\n")
        for r in results:
            fh.write(f"{r.k},{r.diagonal_fraction:.17g},{r.offdiagonal_mass:.17g}\n")
    for r in results:
        write_heatmap(out / f"heatmap_k{r.k}.svg", r.magnitude,
                      cell=args.cell_size, colormap=args.colormap)
        print(f"k={r.k} diagonal_fraction={r.diagonal_fraction:.6g}")
    _write_manifest(out, "spread", args)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, default_shift: str = "lap") -> None:
    parser.add_argument("--shift", choices=["adj", "lap"], default=default_shift)
    parser.add_argument("--degree", choices=["out", "in"], default="out")
    parser.add_argument("--sign", choices=["paper", "conventional"], default="paper")
    parser.add_argument("--align", action=argparse.BooleanOptionalAction, default=True)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="out")
    parser.add_argument("--tol", type=float, default=None,
                        help="override numeric tolerance where applicable")
    parser.add_argument("--colormap", choices=["viridis", "gray"], default="viridis")
    parser.add_argument("--cell-size", type=int, default=10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgsp",
        description="Spectral transforms, filters and experiments on directed graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a graph (and signal) as CSV")
    p.add_argument("kind", choices=["ucycle", "dcycle", "perturbed", "heatflow"])
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--k", type=int, default=1, help="for 'perturbed': direct 10k edges")
    p.add_argument("--weighted", action="store_true",
                   help="for 'perturbed': random edge weights in [0.5, 1.5]")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("transform", help="joint spectral transform of a signal")
    p.add_argument("graph")
    p.add_argument("signal")
    _add_common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("denoise", help="Gaussian denoising sweep")
    p.add_argument("graph")
    p.add_argument("signal")
    p.add_argument("--sigma", default="1,2,3,4,5,6,7,8", help="comma-separated noise levels")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--c-grid", default="", help="comma-separated filter strengths")
    _add_common(p)
    # 1/(1+cx) is a low pass only for a nonnegative-real scaling spectrum,
    # hence the D - A default here.
    p.set_defaults(func=cmd_denoise, sign="conventional")

    p = sub.add_parser("perturb", help="continuity experiment for a graph's shift operator")
    p.add_argument("graph")
    p.add_argument("--scales", default="1e-1,1e-2,1e-3,1e-4")
    p.add_argument("--ks", default="1,2")
    _add_common(p)
    # Distances compare deterministically phased bases; coupling alignment
    # is discontinuous near orthogonal column pairs, so it stays off here.
    p.set_defaults(func=cmd_perturb, align=False)

    p = sub.add_parser("spread", help="spectral spread across the directed-cycle family")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--ks", default="0,1,2,3,4,5")
    p.add_argument("--modes", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_spread)
    return parser


_ERROR_EXITS = (
    (AssumptionError, EXIT_ASSUMPTION),
    (FilterEvaluationError, EXIT_NUMERIC),
    (NumericalError, EXIT_NUMERIC),
    (UndefinedMetricError, EXIT_NUMERIC),
    (DimensionError, EXIT_DATA),
    (ParseError, EXIT_DATA),
    (PreconditionError, EXIT_DATA),
    (ValidationError, EXIT_DATA),
    (FileNotFoundError, EXIT_DATA),
)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except tuple(cls for cls, _ in _ERROR_EXITS) as exc:
        for cls, code in _ERROR_EXITS:
            if isinstance(exc, cls):
                print(f"error: {exc}", file=sys.stderr)
                return code
        raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
