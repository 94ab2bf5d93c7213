"""Experiment configuration: one JSON document per run, validated up front
so a malformed config never produces partial output files."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .compound import DiscreteClaimLaw
from .errors import ConfigMismatch
from .risk import ClaimModel, RiskConfig, Variant
from .subordinators import MixedParams


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class SimConfig:
    n_paths: int = 10_000
    h: float = 0.1
    h_op: float = 1e-3
    horizon: float = 1.0
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_paths < 1:
            raise ConfigError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.h <= 0 or self.h_op <= 0 or self.horizon <= 0:
            raise ConfigError("h, h_op and horizon must be positive")
        if not (0 <= int(self.master_seed) < 2**64):
            raise ConfigError("master_seed must fit in 64 bits")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


@dataclass
class ExperimentConfig:
    params: MixedParams
    sim: SimConfig
    risk: RiskConfig | None = None
    claims: ClaimModel | None = None
    extra: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]

    def require_risk(self) -> RiskConfig:
        if self.risk is None:
            raise ConfigError("this command needs a 'risk' section")
        return self.risk

    def require_claims(self) -> ClaimModel:
        if self.claims is None:
            raise ConfigError("this command needs a 'claims' section")
        return self.claims


def _claims_from_dict(d: dict) -> ClaimModel:
    kind = d.get("kind")
    try:
        if kind == "exponential":
            return ClaimModel.exponential(float(d["rate"]))
        if kind == "pareto":
            return ClaimModel.pareto(float(d["shape"]), float(d["scale"]))
        if kind == "degenerate":
            return ClaimModel.degenerate(float(d["value"]))
        if kind == "discrete":
            law = DiscreteClaimLaw(np.asarray(d["probabilities"], dtype=float))
            return ClaimModel.discrete(law)
    except KeyError as exc:
        raise ConfigError(f"claims section missing field {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid claims section: {exc}") from exc
    raise ConfigError(f"unknown claims kind {kind!r}")


def config_from_dict(doc: dict) -> ExperimentConfig:
    if "params" not in doc:
        raise ConfigError("config is missing the 'params' section")
    pd = doc["params"]
    try:
        params = MixedParams(
            alpha1=float(pd["alpha1"]),
            alpha2=float(pd["alpha2"]),
            c1=float(pd["c1"]),
            c2=float(pd["c2"]),
            lam=float(pd.get("lambda", pd.get("lam", 1.0))),
        )
    except KeyError as exc:
        raise ConfigError(f"params section missing field {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid params section: {exc}") from exc

    try:
        sim = SimConfig(**doc.get("sim", {}))
    except TypeError as exc:
        raise ConfigError(f"invalid sim section: {exc}") from exc

    risk_cfg = None
    if "risk" in doc:
        rd = dict(doc["risk"])
        try:
            risk_cfg = RiskConfig(
                u=float(rd["u"]),
                rho=float(rd.get("rho", 0.0)),
                mu=float(rd["mu"]),
                variant=Variant(rd.get("variant", "MFRP")),
                c=float(rd["c"]) if rd.get("c") is not None else None,
            )
        except KeyError as exc:
            raise ConfigError(f"risk section missing field {exc}") from exc
        except (ValueError, ConfigMismatch) as exc:
            raise ConfigError(f"invalid risk section: {exc}") from exc

    claims = _claims_from_dict(doc["claims"]) if "claims" in doc else None

    known = {"params", "sim", "risk", "claims"}
    extra = {k: v for k, v in doc.items() if k not in known}
    return ExperimentConfig(params=params, sim=sim, risk=risk_cfg,
                            claims=claims, extra=extra, raw=doc)


def load_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return config_from_dict(doc)
