"""How often dimension-group positivity stays undecided, as a function of depth.

Uses random three-level merge chains and checks every decided verdict
against the brute-force chain oracle.

    python3 scripts/positivity_depth.py --samples 300
"""

from __future__ import annotations

import argparse
import random
from dataclasses import asdict, dataclass

from grpd.drgroupoid import DimensionGroupElement, dg_positive
from grpd.generators import random_chain_model
from grpd.oracle import chain_positive


@dataclass
class DepthConfig:
    samples: int = 300
    seed: int = 7
    x_max: int = 10
    max_depth: int = 4


def run(cfg: DepthConfig) -> dict:
    rng = random.Random(cfg.seed)
    counts = {d: {"positive": 0, "not_positive": 0, "unknown": 0}
              for d in range(1, cfg.max_depth + 1)}
    for _ in range(cfg.samples):
        X, maps, C = random_chain_model(rng, cfg.x_max)
        n = rng.randrange(3)
        v = [rng.randint(-3, 3) for _ in range(C.dim(n))]
        truth = chain_positive(X, maps, (n, v))
        for d in counts:
            verdict = dg_positive(DimensionGroupElement(n, v), C, d)
            if verdict.status != "unknown" and (verdict.status == "positive") != truth:
                raise SystemExit(f"verdict {verdict} contradicts the oracle on {maps}, {v}")
            counts[d][verdict.status] += 1
    return counts


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(DepthConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = DepthConfig(**vars(p.parse_args()))
    print(f"{'depth':>5} {'positive':>9} {'not_pos':>8} {'unknown':>8}")
    for d, c in run(cfg).items():
        print(f"{d:>5} {c['positive']:>9} {c['not_positive']:>8} {c['unknown']:>8}")


if __name__ == "__main__":
    main()
