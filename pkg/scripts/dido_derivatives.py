"""Area derivative per edge on Dido polygons and on polygons with the center outside."""
import argparse
import sys
from dataclasses import asdict, dataclass

import numpy as np

from spiderweb import jsonio
from spiderweb.generators import dido_polygon, outside_polygon
from spiderweb.polygon_iso import area_derivative, classify


@dataclass
class DidoConfig:
    polygons: int = 50
    seed: int = 0
    step: float = 1e-4


def run(cfg: DidoConfig):
    dido, outside = [], []
    for k in range(cfg.polygons):
        P = dido_polygon(np.random.default_rng([cfg.seed, 0, k]))
        e = classify(P).dido_edge
        dido.append({"edges": len(P), "dido_edge": e,
                     "derivatives": [area_derivative(P, i, h=cfg.step) for i in range(len(P))]})
        Q = outside_polygon(np.random.default_rng([cfg.seed, 1, k]))
        m = int(np.argmax(Q.edge_lengths))
        outside.append({"edges": len(Q), "longest": m, "derivative": area_derivative(Q, m, h=cfg.step)})
    at_dido = [abs(r["derivatives"][r["dido_edge"]]) for r in dido]
    off_dido = [d for r in dido for i, d in enumerate(r["derivatives"]) if i != r["dido_edge"]]
    return {"config": asdict(cfg),
            "dido_edge_max_abs": max(at_dido), "other_edges_min": min(off_dido),
            "outside_longest_max": max(r["derivative"] for r in outside),
            "dido": dido, "outside": outside}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(DidoConfig()).items():
        p.add_argument("--" + name, type=type(default), default=default)
    p.add_argument("--summary", action="store_true")
    args = p.parse_args(argv)
    out = run(DidoConfig(args.polygons, args.seed, args.step))
    if args.summary:
        out.pop("dido"), out.pop("outside")
    sys.stdout.write(jsonio.dumps(out))


if __name__ == "__main__":
    main()
