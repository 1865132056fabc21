"""Command-line interface.

Subcommands: compute, test, null, simulate, sweep, prewhiten, weights,
spectrum.  All randomness flows from one --seed; when the flag is absent a
seed is drawn from OS entropy and printed on stderr so the run can be
replayed.  Every output embeds the package version, the fully resolved
configuration, the seed and SHA-256 hashes of all input files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .depmodels import DependenceSpec, simulate_panel, theta_sweep
from .exceptions import SbergsmaError
from .inference import bootstrap_ci, pairwise_screen, test_spatial_independence
from .io import (
    atomic_write_text,
    load_panel,
    load_weights,
    save_acf_table,
    save_panel,
    save_samples,
    save_spectrum,
    save_sweep,
    save_weights,
)
from .nulldist import monte_carlo_null, nystrom_eigenvalues
from .reference import FAMILIES, ReferenceDistribution
from .rng import fresh_seed
from .statistic import sb_statistic
from .timeseries import acf, residual_panel
from .weights import linear_chain, row_standardize


def _dist_from_args(args) -> ReferenceDistribution:
    kwargs = {}
    if args.dist == "chi-square":
        kwargs["df"] = args.df
    return ReferenceDistribution(args.dist, loc=args.loc, scale=args.scale, **kwargs)


def _hash_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _resolve_weights(args, n_regions: int | None = None):
    """Build W from --linear-chain or --weights/--weights-kind, then maybe standardize."""
    if getattr(args, "linear_chain", None):
        W = linear_chain(args.linear_chain)
        sources = {}
    elif getattr(args, "weights", None):
        W = load_weights(args.weights, args.weights_kind, n_regions=args.regions)
        sources = {args.weights: _hash_file(args.weights)}
    else:
        raise SbergsmaError("no weight matrix given: use --weights or --linear-chain")
    if args.standardize:
        W = row_standardize(W)
    return W, sources


def _meta(args, seed: int, hashes: dict) -> dict:
    config = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func",) and v is not None
    }
    return {
        "version": __version__,
        "config": config,
        "seed": seed,
        "input_hashes": hashes,
    }


def _seed(args) -> int:
    if args.seed is None:
        s = fresh_seed()
        print(f"seed: {s}", file=sys.stderr)
        args.seed = s
    return args.seed


def _emit_json(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output:
        atomic_write_text(output, text)
    else:
        sys.stdout.write(text)


# -- subcommand handlers -----------------------------------------------------

def _cmd_compute(args):
    seed = args.seed if args.seed is not None else 0
    panel = load_panel(args.panel)
    hashes = {args.panel: _hash_file(args.panel)}
    W, wh = _resolve_weights(args, panel.n_regions)
    hashes.update(wh)
    res = sb_statistic(panel, W)
    payload = {
        "meta": _meta(args, seed, hashes),
        "value": res.value,
        "scaled_value": res.scaled_value,
        "s0": res.s0,
        "standardized_w": res.standardized_w,
        "region_labels": list(panel.region_labels),
        "pair_rho": res.pair_rho.tolist(),
    }
    _emit_json(payload, args.output)


def _cmd_test(args):
    seed = _seed(args)
    panel = load_panel(args.panel)
    hashes = {args.panel: _hash_file(args.panel)}
    W, wh = _resolve_weights(args, panel.n_regions)
    hashes.update(wh)
    method = {"mc": "monte_carlo", "asym": "asymptotic_eigen"}[args.null]
    report = test_spatial_independence(
        panel,
        W,
        null_method=method,
        null_dist=_dist_from_args(args),
        reps=args.reps,
        seed=seed,
        K=args.K,
        m=args.grid,
        alternative=args.alternative,
        ci_resamples=args.bootstrap,
        ci_level=args.level,
    )
    flags, rho, cutoff = pairwise_screen(
        panel, cutoff=args.cutoff, seed=seed, n_sim=args.cutoff_sims
    )
    payload = {
        "meta": _meta(args, seed, hashes),
        "sb": report.sb.value,
        "scaled_sb": report.sb.scaled_value,
        "p_value": report.p_value,
        "ci": list(report.ci) if report.ci else None,
        "null": report.null_meta,
        "pairwise_cutoff": cutoff,
        "pairwise_flags": flags.tolist(),
        "pair_rho": rho.tolist(),
        "notes": list(report.notes),
    }
    _emit_json(payload, args.output)


def _cmd_null(args):
    seed = _seed(args)
    hashes = {}
    W, wh = _resolve_weights(args, args.R)
    hashes.update(wh)
    null = monte_carlo_null(
        _dist_from_args(args), args.R, args.T, W,
        reps=args.reps, seed=seed, n_jobs=args.threads,
    )
    save_samples(args.output, null.samples, meta=_meta(args, seed, hashes))


def _cmd_simulate(args):
    seed = _seed(args)
    W, hashes = _resolve_weights(args)
    spec = DependenceSpec(args.model.upper(), args.theta, W, _dist_from_args(args))
    panel = simulate_panel(spec, args.T, seed=seed)
    save_panel(args.output, panel, meta=_meta(args, seed, hashes))


def _cmd_sweep(args):
    seed = _seed(args)
    W, hashes = _resolve_weights(args)
    thetas = [float(t) for t in args.thetas.split(",")]
    sweep = theta_sweep(
        args.model.upper(), W, thetas, args.T,
        reps=args.reps, seed=seed, noise=_dist_from_args(args),
    )
    save_sweep(args.output, sweep, meta=_meta(args, seed, hashes))


def _cmd_prewhiten(args):
    seed = args.seed if args.seed is not None else 0
    panel = load_panel(args.panel)
    hashes = {args.panel: _hash_file(args.panel)}
    resid = residual_panel(panel, args.ar)
    save_panel(args.output, resid, meta=_meta(args, seed, hashes))
    if args.acf_output:
        table = {}
        threshold = None
        for i, label in enumerate(resid.region_labels):
            vals, threshold = acf(resid.data[:, i], args.acf_lags)
            table[label] = vals
        save_acf_table(
            args.acf_output, table, threshold, meta=_meta(args, seed, hashes)
        )


def _cmd_weights(args):
    seed = args.seed if args.seed is not None else 0
    W, hashes = _resolve_weights(args)
    save_weights(args.output, W, meta=_meta(args, seed, hashes))


def _cmd_spectrum(args):
    seed = args.seed if args.seed is not None else 0
    spectrum = nystrom_eigenvalues(_dist_from_args(args), K=args.K, m=args.grid)
    save_spectrum(args.output, spectrum.eigenvalues, meta=_meta(args, seed, {}))


# -- parser ------------------------------------------------------------------

def _add_dist_args(p):
    p.add_argument("--dist", choices=FAMILIES, default="normal")
    p.add_argument("--loc", type=float, default=0.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--df", type=float, default=1.0, help="chi-square degrees of freedom")


def _add_weight_args(p, required=True):
    p.add_argument("--weights", help="path to a weight matrix file")
    p.add_argument(
        "--weights-kind", choices=("dense", "edges", "coords"), default="dense"
    )
    p.add_argument("--linear-chain", type=int, metavar="R",
                   help="builtin linear chain of R regions")
    p.add_argument("--regions", type=int, help="region count for edge-list input")
    std = p.add_mutually_exclusive_group()
    std.add_argument("--standardize", dest="standardize", action="store_true")
    std.add_argument("--no-standardize", dest="standardize", action="store_false")
    p.set_defaults(standardize=True)


def _add_common(p):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SBERGSMA_THREADS", "1")),
    )
    p.add_argument("--output", "-o", help="output path (default: stdout for JSON)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sbergsma",
        description="Spatial association testing with Bergsma's correlation",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="S~_B and the pairwise rho~ matrix")
    p.add_argument("panel")
    _add_weight_args(p)
    _add_common(p)
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("test", help="test spatial pairwise independence")
    p.add_argument("panel")
    _add_weight_args(p)
    _add_dist_args(p)
    p.add_argument("--null", choices=("mc", "asym"), default="mc")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--K", type=int, default=100)
    p.add_argument("--grid", type=int, default=2000)
    p.add_argument("--alternative", choices=("greater", "two-sided"), default="greater")
    p.add_argument("--bootstrap", type=int, default=None,
                   help="bootstrap resamples for a CI (omit to skip)")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--cutoff", type=float, default=None,
                   help="pairwise rho~ cutoff (default: simulated 95th percentile)")
    p.add_argument("--cutoff-sims", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("null", help="Monte Carlo null samples of T*S~_B")
    _add_weight_args(p)
    _add_dist_args(p)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--reps", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(func=_cmd_null)

    p = sub.add_parser("simulate", help="simulate an SMA/SAR dependent panel")
    p.add_argument("--model", choices=("sma", "sar"), required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--T", type=int, default=50)
    _add_weight_args(p)
    _add_dist_args(p)
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="S~_B moment summaries over a theta grid")
    p.add_argument("--model", choices=("sma", "sar"), required=True)
    p.add_argument("--thetas", default="0,0.1,0.25,0.5,0.75,0.9")
    p.add_argument("--T", type=int, default=50)
    p.add_argument("--reps", type=int, default=10_000)
    _add_weight_args(p)
    _add_dist_args(p)
    _add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("prewhiten", help="per-region AR(p) residual panel")
    p.add_argument("panel")
    p.add_argument("--ar", type=int, default=3)
    p.add_argument("--acf-output", help="also write an ACF table CSV here")
    p.add_argument("--acf-lags", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=_cmd_prewhiten)

    p = sub.add_parser("weights", help="build and save a proximity matrix")
    w = p.add_mutually_exclusive_group(required=True)
    w.add_argument("--linear-chain", type=int, metavar="R")
    w.add_argument("--coords", dest="weights_coords", help="label,x,y CSV")
    w.add_argument("--edges", dest="weights_edges", help="i,j edge-list file")
    p.add_argument("--regions", type=int)
    std = p.add_mutually_exclusive_group()
    std.add_argument("--standardize", dest="standardize", action="store_true")
    std.add_argument("--no-standardize", dest="standardize", action="store_false")
    p.set_defaults(standardize=False)
    _add_common(p)
    p.set_defaults(func=_cmd_weights)

    p = sub.add_parser("spectrum", help="Nystrom kernel eigenvalues for one F")
    _add_dist_args(p)
    p.add_argument("--K", type=int, default=100)
    p.add_argument("--grid", type=int, default=2000)
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # normalize the weights subcommand's source flags onto the common names
    if getattr(args, "weights_coords", None):
        args.weights, args.weights_kind = args.weights_coords, "coords"
    elif getattr(args, "weights_edges", None):
        args.weights, args.weights_kind = args.weights_edges, "edges"
    if args.command in ("null", "simulate", "sweep", "weights", "spectrum",
                        "prewhiten") and not args.output:
        print("error: --output is required for this subcommand", file=sys.stderr)
        return 2
    try:
        args.func(args)
    except SbergsmaError as err:
        print(
            json.dumps({"error_category": err.category, "message": str(err)}),
            file=sys.stderr,
        )
        return 1
    except FileNotFoundError as err:
        print(
            json.dumps({"error_category": "FileNotFound", "message": str(err)}),
            file=sys.stderr,
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
