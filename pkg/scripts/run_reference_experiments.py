"""Run the full set of reference experiments into ./mfrisk-out.

Reproduces the quantities the library is built around at the reference
parameter set (alpha1=0.9, alpha2=0.5, c1=c2=0.5, lambda=1): simulated
path ensembles with closed-form columns, the moment table, the state
distribution, the ruin triangle, and the dependence exponents.
"""

import json
import sys
import tempfile
from pathlib import Path

from mfrisk import cli

BASE = {
    "params": {"alpha1": 0.9, "alpha2": 0.5, "c1": 0.5, "c2": 0.5,
               "lambda": 1.0},
    "claims": {"kind": "exponential", "rate": 1.0},
    "risk": {"u": 5.0, "rho": 0.2, "mu": 1.0, "variant": "MFRP"},
    "sim": {"n_paths": 20000, "h": 0.25, "h_op": 1e-3, "horizon": 2.0,
            "master_seed": 20260809, "workers": 2},
}

RUIN = {
    **BASE,
    "risk": {"u": 2.0, "rho": 0.0, "mu": 1.0, "variant": "MFRP2", "c": 1.5},
    "sim": {**BASE["sim"], "n_paths": 100000, "horizon": 5.0},
}

DEPENDENCE = {
    **BASE,
    "params": {**BASE["params"], "lambda": 10.0},
    "risk": {**BASE["risk"], "rho": 1.0},
}


def run(command: str, doc: dict, out: Path) -> None:
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(doc, fh)
        cfg_path = fh.name
    code = cli.main([command, "--config", cfg_path, "--out-dir", str(out)])
    print(f"{command}: exit {code} -> {out}")
    if code != 0:
        sys.exit(code)


def main() -> None:
    out = Path("mfrisk-out")
    run("simulate", BASE, out / "simulate")
    run("moments", BASE, out / "moments")
    run("distribution", BASE, out / "distribution")
    run("ruin", RUIN, out / "ruin")
    run("dependence", DEPENDENCE, out / "dependence")


if __name__ == "__main__":
    main()
