"""Seeded perturbation search over several fixtures, one verdict per fixture."""
import argparse
import sys
import time
from dataclasses import asdict, dataclass, field

from spiderweb import jsonio
from spiderweb.fixtures import get_fixture
from spiderweb.rigidity_lab import cable_system, rigidity_search


@dataclass
class SearchConfig:
    fixtures: list = field(default_factory=lambda: ["cube", "octahedron", "icosahedron",
                                                   "slack_cube", "slack_cube:no-red",
                                                   "pentagram_prism", "pentagram_prism:sym5"])
    restarts: int = 200
    seed: int = 42
    step_budget: int = 40


def _load(token):
    name, _, tag = token.partition(":")
    params = {"red_cables": False} if tag == "no-red" else {}
    symmetry = int(tag[3:]) if tag.startswith("sym") else None
    return get_fixture(name, **params), symmetry


def run(cfg: SearchConfig, timings=False):
    out = {"config": asdict(cfg), "results": {}}
    for token in cfg.fixtures:
        F, symmetry = _load(token)
        t0 = time.perf_counter()
        v = rigidity_search(cable_system(F.realization, cap=F.cap), restarts=cfg.restarts,
                            seed=cfg.seed, step_budget=cfg.step_budget, symmetry=symmetry)
        row = v.to_dict()
        row.pop("witness")
        if timings:
            row["seconds"] = round(time.perf_counter() - t0, 1)
        out["results"][token] = row
        print(f"{token}: {v.outcome.value}", file=sys.stderr)
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("fixtures", nargs="*", help="name or name:no-red / name:symK")
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--step-budget", type=int, default=40)
    p.add_argument("--timings", action="store_true", help="add wall-clock seconds (breaks byte identity)")
    args = p.parse_args(argv)
    cfg = SearchConfig(restarts=args.restarts, seed=args.seed, step_budget=args.step_budget)
    if args.fixtures:
        cfg.fixtures = args.fixtures
    sys.stdout.write(jsonio.dumps(run(cfg, args.timings)))


if __name__ == "__main__":
    main()
