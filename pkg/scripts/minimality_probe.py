"""Try to shorten cables without leaving the homotopy class of each fixture."""
import argparse
import sys
from dataclasses import asdict, dataclass, field

from spiderweb import jsonio
from spiderweb.fixtures import get_fixture
from spiderweb.rigidity_lab import local_minimality_probe


@dataclass
class ProbeConfig:
    fixtures: list = field(default_factory=lambda: ["cube", "octahedron", "icosahedron", "slack_cube"])
    trials: int = 200
    seed: int = 0
    steps: int = 20


def run(cfg: ProbeConfig):
    out = {"config": asdict(cfg), "results": {}}
    for name in cfg.fixtures:
        F = get_fixture(name)
        m = local_minimality_probe(F.realization, trials=cfg.trials, seed=cfg.seed,
                                   steps=cfg.steps, cap=F.cap)
        out["results"][name] = m.to_dict()
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("fixtures", nargs="*")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=20)
    args = p.parse_args(argv)
    cfg = ProbeConfig(trials=args.trials, seed=args.seed, steps=args.steps)
    if args.fixtures:
        cfg.fixtures = args.fixtures
    sys.stdout.write(jsonio.dumps(run(cfg)))


if __name__ == "__main__":
    main()
