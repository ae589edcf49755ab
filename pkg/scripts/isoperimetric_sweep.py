"""Maximize area for random edge-length specs and compare with the circumscribed solution."""
import argparse
import sys
from dataclasses import asdict, dataclass

import numpy as np

from spiderweb import jsonio
from spiderweb.generators import edge_spec
from spiderweb.polygon_iso import classify, maximize_area, solve_circumscribed
from spiderweb.sphere_core import signed_area


@dataclass
class SweepConfig:
    specs: int = 200
    seed: int = 0
    n_min: int = 3
    n_max: int = 7
    starts: int = 32


def run(cfg: SweepConfig):
    rows = []
    for k in range(cfg.specs):
        ls = edge_spec(np.random.default_rng([cfg.seed, k]), cfg.n_min, cfg.n_max)
        P = maximize_area(ls, seed=k, starts=cfg.starts)
        sol = solve_circumscribed(ls)
        c = classify(P)
        rows.append({"lengths": ls, "area": signed_area(P), "circumscribed_area": sol.area,
                     "side": sol.side, "cocircular_residual": c.cocircular_residual})
    gaps = [abs(r["area"] - r["circumscribed_area"]) for r in rows]
    sides = {s: sum(r["side"] == s for r in rows) for s in ("inside", "boundary", "outside")}
    return {"config": asdict(cfg), "max_area_gap": max(gaps), "sides": sides, "rows": rows}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(SweepConfig()).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    p.add_argument("--summary", action="store_true", help="omit per-spec rows")
    args = p.parse_args(argv)
    out = run(SweepConfig(**{k: getattr(args, k) for k in asdict(SweepConfig())}))
    if args.summary:
        out.pop("rows")
    sys.stdout.write(jsonio.dumps(out))


if __name__ == "__main__":
    main()
