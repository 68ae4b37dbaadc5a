"""Command-line front end: ``autossa {decompose,identify,calibrate,compare}``.

Exit codes: 0 success, 2 usage or parameter error, 3 data error.
Component indices in every output are 1-based.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import core, experiments, spectral
from .errors import DataError, DegenerateInputError, ParameterError
from .identify import (
    AngleIdConfig,
    FreqIdConfig,
    GroupingResult,
    TrendIdConfig,
    identify_periodic_angle,
    identify_periodic_freq,
    identify_trend,
)
from .identify_2d import candidate_fields, identify_trend_2d
from .mssa_identify import (
    identify_periodic_angle_mssa_right,
    identify_periodic_freq_mssa_right,
    identify_trend_mssa_right,
)

log = logging.getLogger("autossa")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3
SEED_ENV = "AUTOSSA_SEED"
METHODS = ("trend", "freq", "angle")
VARIANTS = ("1d", "mssa-left", "mssa-right", "2d")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    return format(float(x), ".17g")


# -- input ------------------------------------------------------------------------


def _read_rows(path: str) -> list[list[str]]:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"cannot read input file: {path}")
    with p.open(newline="") as fh:
        return [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]


def _parse_float(cell: str, where: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise DataError(f"non-numeric value {cell!r} at {where}") from None


def read_channels(path: str) -> list[np.ndarray]:
    """One channel per column.

    An optional header row names the channels; a ``name:length`` cell declares
    that channel's length, and rows past it must leave the cell empty.  Every
    other cell must hold a number.
    """
    rows = _read_rows(path)
    if not rows:
        raise DataError(f"{path}: no data")
    width = max(len(r) for r in rows)
    lengths = None
    if not _is_numeric(rows[0]):
        header, rows = [c.strip() for c in rows[0]], rows[1:]
        if any(":" in c for c in header):
            try:
                lengths = [int(c.rsplit(":", 1)[1]) for c in header]
            except (IndexError, ValueError):
                raise DataError(f"{path}: header cells must all read 'name:length'") from None
            if len(lengths) != width:
                raise DataError(f"{path}: header declares {len(lengths)} channels, data has {width}")
    chans: list[list[float]] = [[] for _ in range(width)]
    for r, row in enumerate(rows):
        cells = list(row) + [""] * (width - len(row))
        for p, cell in enumerate(cells):
            cell = cell.strip()
            limit = lengths[p] if lengths else len(rows)
            if r < limit:
                if not cell:
                    raise DataError(f"{path}: empty cell in channel {p + 1}, row {r + 1}")
                chans[p].append(_parse_float(cell, f"row {r + 1}, column {p + 1}"))
            elif cell:
                raise DataError(f"{path}: channel {p + 1} has values past its declared length")
    out = [np.array(c) for c in chans]
    if lengths and any(len(c) != n for c, n in zip(out, lengths)):
        raise DataError(f"{path}: declared channel lengths {lengths} do not match the data")
    return out


def _is_numeric(cells) -> bool:
    try:
        [float(c) for c in cells if c.strip()]
        return True
    except ValueError:
        return False


def read_field(path: str) -> np.ndarray:
    rows = _read_rows(path)
    if rows and not _is_numeric(rows[0]):
        rows = rows[1:]
    try:
        data = np.array([[float(c) for c in row] for row in rows])
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    if data.ndim != 2:
        raise DataError(f"{path}: rows have unequal lengths")
    return data


# -- decomposition helpers ----------------------------------------------------


def _window2d(text: str) -> tuple[int, int]:
    try:
        lx, ly = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--window2d expects 'Lx,Ly', got {text!r}") from None
    return lx, ly


def _load_and_decompose(args) -> tuple[core.Decomposition, object]:
    if args.window2d:
        data = read_field(args.input)
        lx, ly = _window2d(args.window2d)
        tm = core.embed_2d(data, lx, ly)
    else:
        if args.window is None:
            raise UsageError("a window length is required (--window/-L or --window2d)")
        chans = read_channels(args.input)
        data = chans
        tm = core.embed_1d(chans[0], args.window) if len(chans) == 1 else core.embed_mssa(chans, args.window)
    return core.decompose(tm, max_rank=args.max_rank), data


def _run_config(args) -> dict:
    # the destination is left out so reruns produce identical bytes anywhere
    return {k: v for k, v in vars(args).items() if k not in ("func", "output")}


# -- decompose --------------------------------------------------------------------


def cmd_decompose(args) -> int:
    dec, _ = _load_and_decompose(args)
    comps = []
    for i in range(dec.n_triples):
        u = dec.U[:, i]
        theta = None
        if dec.sigma[i] > 0 and dec.kind != core.HBH:
            theta = spectral.argmax_frequency(u)[0]
        comps.append({"index": i + 1, "sigma": float(dec.sigma[i]),
                      "lambda": float(dec.sigma[i] ** 2), "theta": theta})
    payload = {"config": _run_config(args), "kind": dec.kind, "d": dec.d, "components": comps}
    if args.format == "csv":
        _write_table(args.output, payload["config"],
                     ["index", "sigma", "lambda", "theta"],
                     [[c["index"], fmt(c["sigma"]), fmt(c["lambda"]),
                       "" if c["theta"] is None else fmt(c["theta"])] for c in comps])
    else:
        _write_json(args.output, payload)
    if args.reconstructions:
        _write_reconstructions(args.reconstructions, dec, payload["config"])
    return EXIT_OK


def _write_reconstructions(path: str, dec: core.Decomposition, config: dict) -> None:
    n = dec.n_triples
    comps = [core.elementary_component(dec, i) for i in range(n)]
    if dec.kind == core.HANKEL:
        header = [f"c{i + 1}" for i in range(n)]
        rows = [[fmt(c[t]) for c in comps] for t in range(dec.trajectory.source_shape[0])]
    elif dec.kind == core.STACKED:
        lengths = dec.trajectory.source_shape
        header = [f"ch{p + 1}_c{i + 1}" for p in range(len(lengths)) for i in range(n)]
        rows = []
        for t in range(max(lengths)):
            rows.append([fmt(c[p][t]) if t < lengths[p] else ""
                         for p in range(len(lengths)) for c in comps])
    else:
        header = ["component", "i", "j", "value"]
        rows = [[i + 1, a + 1, b + 1, fmt(c[a, b])]
                for i, c in enumerate(comps) for a in range(c.shape[0]) for b in range(c.shape[1])]
    _write_table(path, config, header, rows)


# -- identify -----------------------------------------------------------------------


def _parse_method(text: str) -> tuple[str, str]:
    for m in METHODS:
        if text == m:
            return m, "1d"
        if text.startswith(m + "-"):
            variant = text[len(m) + 1 :]
            if variant in VARIANTS:
                return m, variant
    raise UsageError(f"unknown method {text!r}")


def _result_json(res: GroupingResult) -> dict:
    def key(k):
        return f"{k[0] + 1}-{k[1] + 1}" if isinstance(k, tuple) else str(k + 1)

    def shift(v):
        if isinstance(v, tuple):
            return [v[0] + 1, v[1] + 1]
        if isinstance(v, (int, np.integer)):
            return int(v) + 1
        return v

    details = {}
    for name in ("J1", "J2"):
        if name in res.details:
            details[name] = [shift(v) for v in res.details[name]]
    if "theta" in res.details:
        details["theta"] = res.details["theta"]
    if "ordered" in res.details:
        details["ordered"] = [[shift(p), _finite(v)] for p, v in res.details["ordered"]]
    return {
        "J": [i + 1 for i in res.indices],
        "pairs": [[i + 1, j + 1] for i, j in res.pairs],
        "singles": [i + 1 for i in res.singles],
        "threshold": res.threshold,
        "measures": {key(k): _finite(v) for k, v in res.measures.items()},
        "flagged": [i + 1 for i in res.flagged],
        "details": details,
    }


def _finite(v):
    return None if v is None or not np.isfinite(v) else float(v)


def cmd_identify(args) -> int:
    method, variant = _parse_method(args.method)
    if variant == "2d" and method != "trend":
        raise UsageError(f"unsupported combination: {method} with 2d")
    if (variant == "2d") != bool(args.window2d):
        raise UsageError("2d methods need --window2d, and --window2d needs a 2d method")
    dec, _ = _load_and_decompose(args)
    if variant.startswith("mssa") and dec.kind != core.STACKED:
        raise UsageError("mssa methods need a multichannel input")
    r = dec.d if args.components is None else min(args.components, dec.n_triples)
    idx = list(range(r))
    if method == "trend":
        cfg = TrendIdConfig(args.omega1, args.omega, args.threshold)
        if variant == "2d":
            res = identify_trend_2d(candidate_fields(dec, args.source, idx),
                                    args.omega, args.omega2 if args.omega2 is not None else args.omega,
                                    args.threshold, idx)
        elif variant == "mssa-right" and args.source != "eigen":
            if args.source == "factor":
                items = [dec.factor_parts(i) for i in idx]
            else:
                items = [core.elementary_component(dec, i) for i in idx]
            res = identify_trend_mssa_right(items, cfg, indices=idx)
        else:
            res = identify_trend(_sources_1d(dec, args.source, idx), cfg, idx)
    elif method == "freq":
        cfg = FreqIdConfig(args.s0, args.rho0)
        if variant == "mssa-right":
            res = identify_periodic_freq_mssa_right([dec.factor_parts(i) for i in idx], cfg)
        else:
            res = identify_periodic_freq(_sources_1d(dec, args.source, idx), cfg)
    else:
        if (args.m is None) == (args.t0 is None):
            raise UsageError("angle method needs exactly one of --m or --t0")
        cfg = AngleIdConfig(m=args.m, t0=args.t0)
        if variant == "mssa-right":
            res = identify_periodic_angle_mssa_right([dec.factor_parts(i) for i in idx], cfg)
        else:
            res = identify_periodic_angle(_sources_1d(dec, args.source, idx), cfg)
    payload = {"config": _run_config(args), "method": method, "variant": variant,
               "result": _result_json(res)}
    _write_json(args.output, payload)
    if args.diagram or (args.output and variant != "2d"):
        path = args.diagram or str(Path(args.output).with_suffix("")) + "_diagram.csv"
        _write_diagram(path, dec, r, payload["config"])
    return EXIT_OK


def _sources_1d(dec: core.Decomposition, source: str, idx: list[int]):
    if source == "eigen":
        return dec.left_vectors(idx)
    if source == "factor":
        return dec.right_vectors(idx)
    if source == "recon":
        if dec.kind == core.STACKED:
            raise UsageError("reconstructed MSSA series need the mssa-right variant")
        return [core.elementary_component(dec, i) for i in idx]
    raise UsageError(f"unknown source {source!r}")


def _write_diagram(path: str, dec: core.Decomposition, r: int, config: dict) -> None:
    rows = []
    for j in range(max(0, r - 1)):
        for k in range(dec.U.shape[0]):
            rows.append([j + 1, j + 2, k + 1, fmt(dec.U[k, j]), fmt(dec.U[k, j + 1])])
    _write_table(path, config, ["j", "j_next", "k", "u_j", "u_j_next"], rows)


# -- experiments ------------------------------------------------------------------


def _sigma_grid(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--sigma-grid expects comma-separated numbers, got {text!r}") from None
    if not vals:
        raise UsageError("--sigma-grid is empty")
    return vals


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    return int(env) if env else experiments.DEFAULT_SEED


def _model(args) -> experiments.SignalModel:
    return experiments.SignalModel(alpha=args.alpha, omega=args.omega, N=args.N)


def cmd_calibrate(args) -> int:
    args.seed = _seed(args)
    sigmas = _sigma_grid(args.sigma_grid)
    window = args.window if args.window is not None else args.N // 2 + 1
    args.window = window
    res = experiments.calibrate_threshold(_model(args), window, sigmas, args.nsim, args.seed,
                                          threads=args.threads)
    config = _run_config(args)
    if args.format == "json":
        _write_json(args.output, {"config": config, **res.as_dict()})
    else:
        config = {**config, "recommended_t0": res.recommended_t0}
        _write_table(args.output, config, ["sigma", "q95"],
                     [[fmt(s), fmt(q)] for s, q in zip(res.sigmas, res.q95)])
    return EXIT_OK


def cmd_compare(args) -> int:
    args.seed = _seed(args)
    sigmas = _sigma_grid(args.sigma_grid)
    window = args.window if args.window is not None else args.N // 2 + 1
    args.window = window
    rep = experiments.compare_methods(_model(args), window, args.nrep, args.seed, sigmas,
                                      r=args.components, s0=args.s0, threads=args.threads)
    config = _run_config(args)
    cols = ["sigma", "mean_tau", "mean_rho", "median_tau", "median_rho", "n_used", "n_flagged"]
    table = rep.table()
    if args.format == "json":
        _write_json(args.output, {"config": config, "rows": table})
    elif args.format == "csv":
        _write_table(args.output, config, cols,
                     [[fmt(r[c]) if isinstance(r[c], float) else r[c] for c in cols] for r in table])
    else:
        lines = ["<!-- config: " + json.dumps(config, sort_keys=True) + " -->", "",
                 "| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        for r in table:
            lines.append("| " + " | ".join(f"{r[c]:.4g}" if isinstance(r[c], float) else str(r[c])
                                           for c in cols) + " |")
        _emit(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


# -- output -------------------------------------------------------------------------


def _emit(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_json(path: str | None, payload: dict) -> None:
    _emit(path, json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _write_table(path: str | None, config: dict, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit(path, buf.getvalue())


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autossa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common_io(p, formats=("json", "csv")):
        p.add_argument("--output", "-o", help="output path (default: stdout)")
        p.add_argument("--format", choices=formats, default=formats[0])

    def decomposition(p):
        p.add_argument("input", help="CSV input: one column per channel, or a matrix for 2D")
        p.add_argument("--window", "-L", type=int, help="window length for 1D/MSSA")
        p.add_argument("--window2d", help="2D window 'Lx,Ly'")
        p.add_argument("--max-rank", type=int, help="keep at most this many eigentriples")

    p = sub.add_parser("decompose", help="SVD of the trajectory matrix")
    decomposition(p)
    common_io(p)
    p.add_argument("--reconstructions", help="also write elementary reconstructed components here")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("identify", help="automatic identification of components")
    decomposition(p)
    p.add_argument("--output", "-o", help="JSON output path (default: stdout)")
    p.add_argument("--method", required=True,
                   help="trend|freq|angle, optionally suffixed -1d, -mssa-left, -mssa-right, -2d")
    p.add_argument("--source", choices=("eigen", "factor", "recon"), default="eigen")
    p.add_argument("--components", type=int, help="number of leading eigentriples to examine")
    p.add_argument("--omega", type=float, default=0.1, help="upper frequency of the trend band")
    p.add_argument("--omega1", type=float, default=0.0, help="lower frequency of the trend band")
    p.add_argument("--omega2", type=float, help="second-axis bound for 2D (default: --omega)")
    p.add_argument("--threshold", type=float, default=0.5, help="trend threshold T0")
    p.add_argument("--s0", type=int, default=1)
    p.add_argument("--rho0", type=float, default=0.9)
    p.add_argument("--t0", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--diagram", help="CSV of consecutive singular-vector pairs for plotting")
    p.set_defaults(func=cmd_identify)

    def model(p, sigmas):
        p.add_argument("--alpha", type=float, default=0.0)
        p.add_argument("--omega", type=float, default=0.2)
        p.add_argument("--N", type=int, default=99)
        p.add_argument("--window", "-L", type=int, help="window length (default N//2 + 1)")
        p.add_argument("--sigma-grid", default=sigmas)
        p.add_argument("--seed", type=int, help=f"RNG seed (default ${SEED_ENV} or built-in)")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("calibrate", help="95%% quantile of tau(U1, U2) versus noise level")
    model(p, "0,0.2,0.4,0.6,0.8,1,1.2,1.4")
    p.add_argument("--nsim", type=int, default=1000)
    common_io(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("compare", help="angle versus frequency method, threshold fit/transfer")
    model(p, "0.2,0.4,0.6,0.8,1")
    p.add_argument("--nrep", type=int, default=200)
    p.add_argument("--s0", type=int, default=1)
    p.add_argument("--components", type=int, help="leading eigentriples examined (default all)")
    common_io(p, formats=("md", "csv", "json"))
    p.set_defaults(func=cmd_compare, omega=1 / 7)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"autossa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"autossa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, DegenerateInputError) as exc:
        print(f"autossa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
