"""Embeddability rate and method timings on random graphs, by vertex count.

    python3 scripts/decision_survey.py --samples 200 --seed 1
"""

from __future__ import annotations

import argparse
import json
import random
import time
from dataclasses import asdict, dataclass

from grpd.decide import af_cycle, af_lp, af_stiemke
from grpd.generators import random_graph
from grpd.graphmodel import adjacency_transfer


@dataclass
class SurveyConfig:
    samples: int = 200
    seed: int = 1
    n_min: int = 2
    n_max: int = 8
    max_mult: int = 3
    density: float = 0.3


def survey(cfg: SurveyConfig) -> dict:
    rng = random.Random(cfg.seed)
    rows: dict = {}
    for _ in range(cfg.samples):
        g = random_graph(rng, cfg.n_min, cfg.n_max, cfg.max_mult, cfg.density)
        A = adjacency_transfer(g)
        row = rows.setdefault(len(g.vertices), {"graphs": 0, "embeddable": 0,
                                                "seconds": {"lp": 0.0, "stiemke": 0.0,
                                                            "cycle": 0.0},
                                                "max_witness_l1": 0})
        verdicts = {}
        for name, fn, arg in (("lp", af_lp, A), ("stiemke", af_stiemke, A),
                              ("cycle", af_cycle, g)):
            t = time.perf_counter()
            verdicts[name] = fn(arg)
            row["seconds"][name] += time.perf_counter() - t
        if len({v.embeddable for v in verdicts.values()}) != 1:
            raise SystemExit(f"methods disagree on {g.to_json()}")
        row["graphs"] += 1
        row["embeddable"] += verdicts["lp"].embeddable
        if verdicts["lp"].witness:
            row["max_witness_l1"] = max(row["max_witness_l1"],
                                        sum(abs(x) for x in verdicts["lp"].witness))
    return {"config": asdict(cfg), "by_vertices": dict(sorted(rows.items()))}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(SurveyConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = SurveyConfig(**vars(p.parse_args()))
    out = survey(cfg)
    print(f"{'n':>3} {'graphs':>7} {'embeddable':>10} {'lp s':>7} {'stiemke s':>9} "
          f"{'cycle s':>8} {'max |f|_1':>9}")
    for n, r in out["by_vertices"].items():
        s = r["seconds"]
        print(f"{n:>3} {r['graphs']:>7} {r['embeddable']:>10} {s['lp']:>7.2f} "
              f"{s['stiemke']:>9.2f} {s['cycle']:>8.2f} {r['max_witness_l1']:>9}")
    print(json.dumps(out["config"]))


if __name__ == "__main__":
    main()
