"""Command-line interface: ``vmiqa {score,autofocus,degrade,benchmark,learn}``.

Exit status is 0 on success, 1 when any input failed, 2 on usage errors.
Settings resolve as command-line flag, then ``--config`` JSON file, then
built-in default.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .degradation import BLUR_SIZE, KINDS, NOISE_SIGMA, PROBE_SIGMA, degradation_series, gaussian_kernel
from .exceptions import UndefinedCorrelationError
from .focus import autofocus
from .image_io import load_image, load_opinion_table, write_pgm
from .stats import kendall, pearson, spearman
from .vmdm import DEFAULT_BETA_MIN, DEFAULT_PHI0, learn_transform, transform, vmdm_score
from .vonmises import DEFAULT_MAX_ITER, DEFAULT_STEP, fit_image

log = logging.getLogger("vmiqa")

DEFAULTS = {
    "window": 8,
    "step": DEFAULT_STEP,
    "max_iter": DEFAULT_MAX_ITER,
    "phi0": DEFAULT_PHI0,
    "beta_min": DEFAULT_BETA_MIN,
    "probe_size": BLUR_SIZE,
    "probe_sigma": PROBE_SIGMA,
    "noise_sigma": NOISE_SIGMA,
    "seed": 0,
    "iterations": 2000,
    "holdout": 0.2,
}

SCORE_FIELDS = (
    "image",
    "kappa",
    "abs_kappa",
    "mu_degrees",
    "epsilon",
    "phi",
    "d",
    "log_d",
    "degenerate",
    "error",
)
NUMERIC_FIELDS = ("kappa", "abs_kappa", "mu_degrees", "epsilon", "phi", "d", "log_d")


class UsageError(Exception):
    pass


def _settings(args):
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update(loaded)
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["window"] < 2 or cfg["window"] % 2:
        raise UsageError(f"--window must be even and >= 2, got {cfg['window']}")
    return cfg


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(rows, fields, as_json, out):
    if as_json:
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k)) for k in fields})


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_output(args, rows, fields):
    out, close = _open_out(getattr(args, "out", None))
    try:
        _emit(rows, fields, args.json, out)
    finally:
        if close:
            out.close()


def score_record(path, cfg, vmdm=False):
    """One score record (a dict with ``SCORE_FIELDS`` keys) for one image."""
    row = dict.fromkeys(SCORE_FIELDS)
    row["image"] = os.fspath(path)
    fit_opts = {"step": cfg["step"], "max_iter": cfg["max_iter"]}
    try:
        image = load_image(path)
        fit = fit_image(image, cfg["window"], **fit_opts)
        row.update(
            kappa=fit.kappa,
            abs_kappa=fit.abs_kappa,
            mu_degrees=fit.mu_degrees,
            epsilon=fit.epsilon,
            phi=fit.phi,
            degenerate=fit.degenerate,
        )
        if vmdm and not fit.degenerate:
            kernel = gaussian_kernel(cfg["probe_size"], cfg["probe_sigma"])
            res = vmdm_score(
                image, cfg["phi0"], kernel, n=cfg["window"], beta_min=cfg["beta_min"], **fit_opts
            )
            row.update(d=res.d, log_d=res.log_d)
        elif vmdm:
            row["error"] = "degenerate image: VMDM undefined"
    except (OSError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_score(args):
    cfg = _settings(args)
    rows = [score_record(p, cfg, vmdm=args.vmdm) for p in args.paths]
    _write_output(args, rows, SCORE_FIELDS)
    failed = [r for r in rows if r["error"] and r["kappa"] is None]
    vmdm_failed = [r for r in rows if r["error"] and r["kappa"] is not None]
    for r in failed + vmdm_failed:
        log.error("%s: %s", r["image"], r["error"])
    return 1 if failed or vmdm_failed else 0


def cmd_autofocus(args):
    cfg = _settings(args)
    if not args.paths:
        raise UsageError("autofocus needs at least one image")
    images = [load_image(p) for p in args.paths]
    result = autofocus(images, cfg["window"], step=cfg["step"], max_iter=cfg["max_iter"])
    rows = [
        {
            "frame": i,
            "frame_1based": i + 1,
            "image": os.fspath(p),
            "kappa": f.kappa,
            "abs_kappa": f.abs_kappa,
            "phi": f.phi,
            "best": i == result.best_index,
        }
        for i, (p, f) in enumerate(zip(args.paths, result.fits))
    ]
    fields = ("frame", "frame_1based", "image", "kappa", "abs_kappa", "phi", "best")
    if args.json:
        payload = {
            "best_index": result.best_index,
            "best_frame_1based": result.best_frame_number,
            "best_image": os.fspath(args.paths[result.best_index]),
            "frames": rows,
        }
        out, close = _open_out(args.out)
        try:
            out.write(json.dumps(payload, indent=2) + "\n")
        finally:
            if close:
                out.close()
    else:
        _write_output(args, rows, fields)
        print(
            f"best frame: index {result.best_index} (0-based), "
            f"{result.best_frame_number} (1-based): {args.paths[result.best_index]}",
            file=sys.stderr,
        )
    return 0


def cmd_degrade(args):
    cfg = _settings(args)
    image = load_image(args.path)
    series = degradation_series(
        image, args.kind, args.steps, noise_sigma=cfg["noise_sigma"], seed=cfg["seed"]
    )
    os.makedirs(args.out, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.path))[0]
    width = max(3, len(str(len(series) - 1)))
    for i, im in enumerate(series):
        path = os.path.join(args.out, f"{stem}_{i:0{width}d}.pgm")
        write_pgm(im, path)
        print(path)
    return 0


def read_score_file(path):
    """Rows of a ``score`` output file (CSV or JSON) as a list of dicts."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        return json.loads(text)
    return list(csv.DictReader(io.StringIO(text)))


def _as_float(value):
    if value is None or value == "":
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def _correlations(x, y):
    out = {}
    for name, fn in (("pearson", pearson), ("spearman", spearman), ("kendall", kendall)):
        try:
            out[name] = fn(x, y)
        except (UndefinedCorrelationError, ValueError):
            out[name] = math.nan
    return out


def _join_opinions(rows, table):
    opinions = []
    for row in rows:
        ident = row["image"]
        try:
            opinions.append(table.lookup(ident))
        except KeyError:
            raise KeyError(f"identifier {ident!r} not found in opinion table") from None
    return np.array(opinions)


def cmd_benchmark(args):
    rows = read_score_file(args.score_file)
    table = load_opinion_table(args.opinions, order=args.order, names=args.names)
    opinions = _join_opinions(rows, table)
    columns = args.columns.split(",") if args.columns else [
        c for c in NUMERIC_FIELDS if rows and c in rows[0]
    ]
    report = []
    for col in columns:
        values = [_as_float(r.get(col)) for r in rows]
        keep = [i for i, v in enumerate(values) if v is not None]
        x = np.array([values[i] for i in keep])
        y = opinions[keep]
        if len(keep) < 2:
            coeffs = dict.fromkeys(("pearson", "spearman", "kendall"), math.nan)
        else:
            coeffs = _correlations(x, y)
        entry = {"column": col, "n": len(keep)}
        entry.update(coeffs)
        entry.update({f"abs_{k}": abs(v) for k, v in coeffs.items()})
        report.append(entry)
    fields = (
        "column", "n", "pearson", "spearman", "kendall", "abs_pearson", "abs_spearman", "abs_kendall",
    )
    _write_output(args, report, fields)
    return 0


def _split(n, holdout):
    if not 0 <= holdout < 1:
        raise UsageError(f"--holdout must lie in [0, 1), got {holdout}")
    n_test = int(round(n * holdout))
    return n - n_test


def cmd_learn(args):
    cfg = _settings(args)
    rows = read_score_file(args.score_file)
    table = load_opinion_table(args.opinions, order=args.order, names=args.names)
    pairs = [(r, _as_float(r.get(args.column))) for r in rows]
    pairs = [(r, v) for r, v in pairs if v is not None]
    scores = np.array([v for _, v in pairs])
    opinions = _join_opinions([r for r, _ in pairs], table)
    n_train = _split(len(scores), cfg["holdout"])
    if n_train < 3:
        raise UsageError(f"need at least 3 training samples, got {n_train}")
    result = learn_transform(
        scores[:n_train], opinions[:n_train], iterations=cfg["iterations"], seed=cfg["seed"]
    )
    report = []
    for split, sl in (("train", slice(0, n_train)), ("holdout", slice(n_train, None))):
        x, y = scores[sl], opinions[sl]
        if x.size < 2:
            continue
        xt = np.atleast_1d(transform(x, result.params))
        for label, values in (("identity", x), ("transformed", xt)):
            coeffs = _correlations(values, y)
            report.append(
                {
                    "split": split,
                    "scores": label,
                    "n": int(x.size),
                    "pearson": coeffs["pearson"],
                    "spearman": coeffs["spearman"],
                }
            )
    if args.params_out:
        result.params.save(args.params_out)
    _write_output(args, report, ("split", "scores", "n", "pearson", "spearman"))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vmiqa", description="No-reference image quality via the von Mises distribution of image entropy."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_help="output file (default: stdout)"):
        p.add_argument("--config", help="JSON file with default settings")
        p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
        p.add_argument("--out", help=out_help)

    def fitting(p):
        p.add_argument("--window", type=int, help="even window length N (default 8)")
        p.add_argument("--step", type=float, help="relative kappa update (default 0.01)")

    p = sub.add_parser("score", help="fit the von Mises model to each image")
    p.add_argument("paths", nargs="+")
    p.add_argument("--vmdm", action="store_true", help="also compute the VMDM degradation D")
    p.add_argument("--phi0", type=float, help="fitness of an undegraded image (default 0.88)")
    p.add_argument("--probe-sigma", dest="probe_sigma", type=float)
    common(p)
    fitting(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("autofocus", help="pick the best-focused frame of a stack")
    p.add_argument("paths", nargs="*")
    common(p)
    fitting(p)
    p.set_defaults(func=cmd_autofocus)

    p = sub.add_parser("degrade", help="write a blur/noise degradation ladder as PGM files")
    p.add_argument("path")
    p.add_argument("--kind", choices=KINDS, default="blur")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float)
    p.add_argument("--config", help="JSON file with default settings")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_degrade)

    def opinion_args(p):
        p.add_argument("score_file", help="CSV or JSON written by 'vmiqa score'")
        p.add_argument("opinions", help="opinion table: identifier and score per line")
        p.add_argument("--order", choices=("id-score", "score-id"), default="id-score")
        p.add_argument("--names", help="sidecar identifier list for single-column opinion files")

    p = sub.add_parser("benchmark", help="correlate score columns with opinion scores")
    opinion_args(p)
    p.add_argument("--columns", help="comma-separated score columns (default: all numeric)")
    common(p)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("learn", help="learn the tanh transform of VMDM scores")
    opinion_args(p)
    p.add_argument("--column", default="log_d", help="score column to transform (default log_d)")
    p.add_argument("--holdout", type=float, help="trailing fraction held out (default 0.2)")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--params-out", dest="params_out", help="write learned coefficients (JSON)")
    common(p, out_help="report file (default: stdout)")
    p.set_defaults(func=cmd_learn)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"vmiqa: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
