"""Batch experiment runner.

Subcommands: simulate | moments | distribution | ruin | dependence |
acceptance.  Each reads one JSON config (CLI flags override single keys),
runs deterministically given the master seed, and writes CSV/JSON artifacts
into the output directory.  Exit codes: 0 success, 1 acceptance criteria
failed, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, acceptance, mfpp, risk, ruin
from .compound import DiscreteClaimLaw
from .config import ConfigError, ExperimentConfig, load_config
from .ensembles import BLOCK_SIZE, map_blocks
from .errors import MfriskError
from .risk import Variant
from .subordinators import (
    mean_inverse,
    mean_inverse_asymptotic,
    var_inverse_asymptotic,
)

logger = logging.getLogger(__name__)


def _write_csv(path: Path, header: list, rows, cfg_hash: str) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config_hash={cfg_hash} version={__version__}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


class _PathTripleFn:
    """Per-block sampler of (Y, N, C-or-R) on the output grid."""

    def __init__(self, cfg: ExperimentConfig, t: tuple):
        self.cfg = cfg
        self.t = t

    def __call__(self, rng: np.random.Generator, n: int) -> np.ndarray:
        from .ensembles import _inverse_block

        c = self.cfg
        y = _inverse_block(c.params, self.t, c.sim.h_op, rng, n)
        dy = np.diff(y, axis=1, prepend=0.0)
        dn = rng.poisson(c.params.lam * dy)
        counts = np.cumsum(dn, axis=1)
        t_arr = np.asarray(self.t)
        if c.risk is not None and c.claims is not None:
            ds = c.claims.sample_sums(dn, rng)
            s = np.cumsum(ds, axis=1)
            rc = c.risk
            if rc.variant is Variant.MFRP:
                prem = rc.mu * (1.0 + rc.rho) * c.params.lam * y
            elif rc.variant is Variant.MFRP_VARIANT:
                u_det = np.array([mean_inverse(c.params, float(x))
                                  for x in t_arr])
                prem = np.broadcast_to(
                    rc.mu * (1.0 + rc.rho) * c.params.lam * u_det, s.shape)
            else:
                prem = np.broadcast_to(rc.c * t_arr, s.shape)
            third = rc.u + prem - s
        elif c.claims is not None:
            ds = c.claims.sample_sums(dn, rng)
            third = np.cumsum(ds, axis=1)
        else:
            third = counts.astype(float)
        return np.stack([y, counts.astype(float), third], axis=2)


def cmd_simulate(cfg: ExperimentConfig, out_dir: Path) -> int:
    sim = cfg.sim
    m = max(1, int(round(sim.horizon / sim.h)))
    t = tuple(sim.h * (j + 1) for j in range(m))
    parts = map_blocks(_PathTripleFn(cfg, t), sim.n_paths, sim.master_seed,
                       sim.workers, BLOCK_SIZE)
    data = np.concatenate(parts, axis=0)  # (n_paths, m, 3)

    rows = []
    for i in range(data.shape[0]):
        for j, tj in enumerate(t):
            rows.append((i, tj, data[i, j, 0], data[i, j, 1], data[i, j, 2]))
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "paths.csv",
               ["path_id", "t", "Y", "N", "C_or_R"], rows, cfg.config_hash)

    summary = {"config_hash": cfg.config_hash, "version": __version__,
               "n_paths": sim.n_paths, "times": list(t), "per_time": []}
    n = data.shape[0]
    for j, tj in enumerate(t):
        y, cnt, third = data[:, j, 0], data[:, j, 1], data[:, j, 2]
        entry = {
            "t": tj,
            "mean_Y": float(y.mean()),
            "se_Y": float(y.std(ddof=1) / math.sqrt(n)),
            "var_Y": float(y.var(ddof=1)),
            "mean_N": float(cnt.mean()),
            "se_N": float(cnt.std(ddof=1) / math.sqrt(n)),
            "var_N": float(cnt.var(ddof=1)),
            "mean_third": float(third.mean()),
            "se_third": float(third.std(ddof=1) / math.sqrt(n)),
            "closed_mean_Y": mean_inverse(cfg.params, tj),
            "closed_mean_N": mfpp.mfpp_mean(cfg.params, tj),
        }
        if cfg.risk is not None and cfg.claims is not None:
            rc = cfg.risk
            if rc.variant is Variant.MFRP2:
                entry["closed_mean_third"] = (
                    rc.u + rc.c * tj - rc.mu * mfpp.mfpp_mean(cfg.params, tj))
            else:
                entry["closed_mean_third"] = (
                    rc.u + rc.mu * rc.rho * mfpp.mfpp_mean(cfg.params, tj))
        summary["per_time"].append(entry)
    _write_json(out_dir / "summary.json", summary)
    return 0


def cmd_moments(cfg: ExperimentConfig, out_dir: Path) -> int:
    sim = cfg.sim
    m = max(1, int(round(sim.horizon / sim.h)))
    times = [sim.h * (j + 1) for j in range(m)]
    p = cfg.params
    rows = []
    for t in times:
        u = mean_inverse(p, t)
        small = mean_inverse_asymptotic(p, t, "small") if p.c1 > 0 else math.nan
        large = mean_inverse_asymptotic(p, t, "large") if p.c2 > 0 else math.nan
        var_a = var_inverse_asymptotic(p, t) if p.c2 > 0 else math.nan
        mean_n = p.lam * u
        var_n = mean_n + p.lam**2 * var_a if p.c2 > 0 else math.nan
        if cfg.risk is not None:
            rc = cfg.risk
            if rc.variant is Variant.MFRP2:
                mean_r = rc.u + rc.c * t - rc.mu * mean_n
            else:
                mean_r = rc.u + rc.mu * rc.rho * mean_n
        else:
            mean_r = math.nan
        rows.append((t, u, small, large, var_a, mean_n, var_n, mean_r))
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "moments.csv",
               ["t", "mean_inverse", "mean_small_t", "mean_large_t",
                "var_inverse_asym", "mfpp_mean", "mfpp_var_asym",
                "surplus_mean"], rows, cfg.config_hash)
    return 0


def cmd_distribution(cfg: ExperimentConfig, out_dir: Path) -> int:
    p = cfg.params
    t = float(cfg.extra.get("t", 1.0))
    sd = math.sqrt(mfpp.mfpp_var(p, t, var_inverse_asymptotic(p, t))) \
        if p.c2 > 0 else math.sqrt(mfpp.mfpp_mean(p, t)) * 3
    n_max = int(cfg.extra.get("n_max",
                              math.ceil(mfpp.mfpp_mean(p, t) + 10 * sd)))
    law = None
    if cfg.claims is not None and cfg.claims.kind == "discrete":
        law = cfg.claims.law
    rows = []
    total = 0.0
    for n in range(n_max + 1):
        pn = mfpp.state_prob_pn(p, n, t)
        total += pn
        if law is not None:
            from .compound import compound_state_prob

            qn = compound_state_prob(p, law, n, t)
        else:
            qn = math.nan
        rows.append((n, pn, qn))
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "distribution_pn.csv", ["n", "p_n", "q_n"], rows,
               cfg.config_hash)

    zs = np.linspace(0.0, 1.0, 21)
    _write_csv(out_dir / "distribution_pgf.csv", ["z", "pgf"],
               [(float(z), mfpp.pgf(p, float(z), t)) for z in zs],
               cfg.config_hash)

    ts = np.linspace(cfg.sim.h, cfg.sim.horizon,
                     max(1, int(round(cfg.sim.horizon / cfg.sim.h))))
    _write_csv(out_dir / "distribution_interarrival.csv", ["t", "density"],
               [(float(x), mfpp.interarrival_density(p, float(x)))
                for x in ts], cfg.config_hash)
    _write_json(out_dir / "distribution_summary.json",
                {"t": t, "n_max": n_max, "sum_pn": total,
                 "config_hash": cfg.config_hash})
    return 0


def cmd_ruin(cfg: ExperimentConfig, out_dir: Path) -> int:
    p = cfg.params
    rc = cfg.require_risk()
    claims = cfg.require_claims()
    if rc.variant is not Variant.MFRP2:
        raise ConfigError("ruin analysis needs the MFRP2 variant")
    horizon = cfg.sim.horizon
    estimates = [ruin.ruin_prob_mc(p, rc, claims, horizon, cfg.sim.n_paths,
                                   cfg.sim.master_seed, cfg.sim.workers)]
    if claims.kind == "exponential":
        estimates.append(ruin.ruin_prob_lt(p, rc.u, rc.c, claims.rate,
                                           horizon))
        estimates.append(ruin.ruin_prob_density(p, rc.u, rc.c, claims.rate,
                                                horizon))
    doc = {"config_hash": cfg.config_hash, "horizon": horizon,
           "estimates": [dataclasses.asdict(e) for e in estimates]}
    if claims.is_subexponential:
        doc["asymptote"] = ruin.ruin_asymptotic_subexp(p, claims, rc.u,
                                                       horizon)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "ruin.json", doc)
    _write_csv(out_dir / "ruin.csv",
               ["method", "probability", "std_error", "n_paths"],
               [(e.method, e.probability, e.std_error, e.n_paths)
                for e in estimates], cfg.config_hash)
    return 0


def cmd_dependence(cfg: ExperimentConfig, out_dir: Path) -> int:
    p = cfg.params
    rc = cfg.require_risk()
    claims = cfg.require_claims()
    s = float(cfg.extra.get("s", 1.0))
    delta = float(cfg.extra.get("delta", 1.0))
    ts = np.logspace(float(cfg.extra.get("log10_t_min", 2.0)),
                     float(cfg.extra.get("log10_t_max", 4.0)), 30)
    curve_r = risk.mfrp_corr_curve(p, rc, claims, s, ts)
    curve_z = risk.mfpnrp_corr_curve(p, rc, claims, s, delta, ts)
    lrd = risk.lrd_exponent(curve_r)
    srd = risk.lrd_exponent(curve_z)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "dependence.json",
                {"lrd_exponent": lrd, "srd_exponent": srd,
                 "alpha2": p.alpha2, "srd_expected": (3 - p.alpha2) / 2,
                 "config_hash": cfg.config_hash})
    _write_csv(out_dir / "dependence.csv", ["t", "corr_surplus", "corr_noise"],
               [(t1, c1, c2) for (t1, c1), (_, c2) in zip(curve_r, curve_z)],
               cfg.config_hash)
    return 0


def cmd_acceptance(cfg: ExperimentConfig, out_dir: Path,
                   criteria: list | None) -> int:
    indices = criteria or sorted(acceptance.CRITERIA)
    results = acceptance.run_all(indices, workers=cfg.sim.workers)
    doc = {
        "version": __version__,
        "all_passed": all(r.passed for r in results),
        "criteria": [
            {"index": r.index, "name": r.name, "passed": r.passed,
             "tolerance": r.tolerance, "measured": r.measured,
             "runtime_s": r.runtime_s}
            for r in results
        ],
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "acceptance.json", doc)
    return 0 if doc["all_passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mfrisk",
        description="mixed fractional Poisson risk-process experiments")
    ap.add_argument("command",
                    choices=["simulate", "moments", "distribution", "ruin",
                             "dependence", "acceptance"])
    ap.add_argument("--config", type=Path,
                    help="JSON experiment config (required except for "
                         "acceptance)")
    ap.add_argument("--seed", type=int, help="override sim.master_seed")
    ap.add_argument("--n-paths", type=int, help="override sim.n_paths")
    ap.add_argument("--workers", type=int, help="override sim.workers")
    ap.add_argument("--out-dir", type=Path, default=Path("mfrisk-out"))
    ap.add_argument("--criteria", type=str,
                    help="acceptance only: comma-separated criterion indices")
    return ap


DEFAULT_ACCEPTANCE_CONFIG = {
    "params": {"alpha1": 0.9, "alpha2": 0.5, "c1": 0.5, "c2": 0.5,
               "lambda": 1.0},
    "sim": {"n_paths": 1000, "h": 0.5, "h_op": 1e-3, "horizon": 1.0,
            "master_seed": acceptance.MASTER_SEED, "workers": 1},
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("MFRISK_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.config is not None:
            cfg = load_config(args.config)
        elif args.command == "acceptance":
            from .config import config_from_dict

            cfg = config_from_dict(DEFAULT_ACCEPTANCE_CONFIG)
        else:
            raise ConfigError("--config is required for this command")
        if args.seed is not None or args.n_paths is not None \
                or args.workers is not None:
            sim = cfg.sim
            cfg.sim = dataclasses.replace(
                sim,
                master_seed=args.seed if args.seed is not None
                else sim.master_seed,
                n_paths=args.n_paths if args.n_paths is not None
                else sim.n_paths,
                workers=args.workers if args.workers is not None
                else sim.workers,
            )
        criteria = None
        if args.criteria:
            criteria = [int(x) for x in args.criteria.split(",") if x.strip()]
            unknown = set(criteria) - set(acceptance.CRITERIA)
            if unknown:
                raise ConfigError(f"unknown acceptance criteria: {unknown}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out_dir)
        if args.command == "moments":
            return cmd_moments(cfg, args.out_dir)
        if args.command == "distribution":
            return cmd_distribution(cfg, args.out_dir)
        if args.command == "ruin":
            return cmd_ruin(cfg, args.out_dir)
        if args.command == "dependence":
            return cmd_dependence(cfg, args.out_dir)
        return cmd_acceptance(cfg, args.out_dir, criteria)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MfriskError as exc:
        print(f"numerical failure in {args.command}: "
              f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
