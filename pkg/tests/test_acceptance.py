"""Acceptance criteria 1-10 at their stated sample sizes and time budgets.

Each test records one line in the terminal summary, pass or fail.
"""

import itertools
import random
import time
from fractions import Fraction


from _support import SINGLE_LOOP, cuntz
from conftest import ACCEPTANCE
from grpd.decide import af_cycle, af_lp, af_stiemke, power_condition, verify_verdict
from grpd.drgroupoid import (DimensionGroupElement, all_window_points, diagram_check,
                             dg_equal, dg_positive, enumerate_graph_sections, window_paths)
from grpd.dynsys import (FiniteSystem, MetricModel, compression_exists, crossed_product_verdict,
                         discrete_metric, pseudoloop_exists)
from grpd.exactlin import rational_feasible, stiemke_alternative
from grpd.exactlin.alternative import dual_system, primal_system
from grpd.fibered import (ChainFunction, boundary, cone_is_standard, enumerate_sections,
                          fiber_sum, h0_class_equal, homology, indicator_projection,
                          projection_equiv, trace_phi)
from grpd.generators import (functional_graphs, random_chain_model, random_fibered_set,
                             random_graph, random_level2_chain, random_metric,
                             random_projection)
from grpd.graphmodel import adjacency_transfer
from grpd.exactlin import IntMatrix
from grpd.oracle import (chain_check, chain_equal, chain_positive, h0_bruteforce,
                         orbit_cycle, witness_search)

_GRAPHS: list = []


def criterion_graphs():
    if not _GRAPHS:
        rng = random.Random(20261015)
        _GRAPHS.extend(random_graph(rng, n_min=2, n_max=8, max_mult=3) for _ in range(500))
    return _GRAPHS


class Record:
    def __init__(self, n, budget):
        self.n, self.budget = n, budget
        self.failures: list = []
        self.start = time.perf_counter()

    def expect(self, ok, what):
        if not ok and len(self.failures) < 5:
            self.failures.append(what)
        self.bad = getattr(self, "bad", 0) + (not ok)

    def close(self, summary):
        elapsed = time.perf_counter() - self.start
        bad = getattr(self, "bad", 0)
        ok = bad == 0 and elapsed < self.budget
        ACCEPTANCE[self.n] = (ok, f"{summary}; {bad} failures; {elapsed:.1f}s "
                                  f"(budget {self.budget}s)")
        print(f"criterion {self.n}: {'PASS' if ok else 'FAIL'} {ACCEPTANCE[self.n][1]}")
        assert bad == 0, self.failures
        assert elapsed < self.budget, f"took {elapsed:.1f}s"


def test_criterion_01_three_way_agreement():
    rec = Record(1, 60)
    graphs = criterion_graphs()
    verdict_counts = [0, 0]
    for g in graphs:
        A = adjacency_transfer(g)
        vs = [af_lp(A), af_stiemke(A), af_cycle(g)]
        rec.expect(len({v.embeddable for v in vs}) == 1, g.to_json())
        rec.expect(all(verify_verdict(A, v) for v in vs), g.to_json())
        rec.expect(verify_verdict(A.A.T, _as_cylinder(vs[2])), g.to_json())
        verdict_counts[vs[0].embeddable] += 1
    rec.close(f"{len(graphs)} graphs, {verdict_counts[1]} embeddable / "
              f"{verdict_counts[0]} not")


def _as_cylinder(v):
    from grpd.decide import Verdict
    if v.embeddable:
        return v
    c = v.details["cylinder_witness"]
    return Verdict(False, "cycle", witness=tuple(c["f"]), increment=tuple(c["h"]))


def test_criterion_02_oracle_consistency():
    rec = Record(2, 120)
    rng = random.Random(2)
    B = 6
    compared = found = 0
    for _ in range(300):
        g = random_graph(rng, n_min=2, n_max=5, max_mult=3)
        A = adjacency_transfer(g)
        lp = af_lp(A)
        w = witness_search(A, B)
        if w is not None:
            rec.expect(not lp.embeddable, g.to_json())
            found += 1
        if not lp.embeddable and max(abs(x) for x in lp.witness) <= B:
            compared += 1
            rec.expect(w is not None, g.to_json())
        if lp.embeddable:
            rec.expect(w is None, g.to_json())
    rec.close(f"300 graphs, B={B}, {found} oracle witnesses, {compared} within bound")


def test_criterion_03_stiemke_exclusivity():
    rec = Record(3, 10)
    rng = random.Random(3)
    branches = {"dual": 0, "primal": 0}
    for _ in range(200):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = IntMatrix.from_rows([[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)], n)
        cert = stiemke_alternative(M)
        rec.expect(cert.check(M), M.to_rows())
        dual = rational_feasible(dual_system(M), m).feasible
        primal = any(rational_feasible(primal_system(M, j), n).feasible for j in range(m))
        rec.expect(dual != primal, M.to_rows())
        rec.expect((cert.branch == "dual") == dual, M.to_rows())
        branches[cert.branch] += 1
    rec.close(f"200 matrices, {branches['dual']} dual / {branches['primal']} primal")


def test_criterion_04_homology_suite():
    rec = Record(4, 60)
    rng = random.Random(4)
    for _ in range(200):
        fs = random_fibered_set(rng, x_max=12)
        h0 = homology(fs, 0)
        brute = h0_bruteforce(fs)
        rec.expect((h0.free_rank, h0.torsion) == (len(fs.Y), ()), fs.to_json())
        rec.expect((brute.free_rank, brute.torsion) == (len(fs.Y), ()), fs.to_json())
        rec.expect(cone_is_standard(h0), fs.to_json())
        rec.expect(homology(fs, 1).is_trivial, fs.to_json())
        rec.expect(chain_check(fs, 100, rng), fs.to_json())
        for _ in range(100):
            F = ChainFunction(2, random_level2_chain(rng, fs))
            rec.expect(boundary(fs, 1, boundary(fs, 2, F)).is_zero(), fs.to_json())
    rec.close("200 fibered sets, 100 chains each")


def test_criterion_05_trace_model():
    rec = Record(5, 60)
    rng = random.Random(5)
    pairs = 0
    for _ in range(100):
        fs = random_fibered_set(rng, x_max=8)
        secs = enumerate_sections(fs)
        p, q = random_projection(rng, fs), random_projection(rng, fs)
        equiv = projection_equiv(fs, p, q)
        tp = {i: trace_phi(fs, s, p) for i, s in enumerate(secs)}
        tq = {i: trace_phi(fs, s, q) for i, s in enumerate(secs)}
        for i, j in itertools.product(range(len(secs)), repeat=2):
            pairs += 1
            rec.expect(equiv == (fiber_sum(fs, tp[i]) == fiber_sum(fs, tq[j])), fs.to_json())
            rec.expect(h0_class_equal(fs, tp[i], tp[j]), fs.to_json())
        for _ in range(20):
            V = [x for x in fs.X if rng.random() < 0.5]
            ind = [int(x in V) for x in fs.X]
            phi = rng.choice(secs)
            rec.expect(h0_class_equal(fs, trace_phi(fs, phi, indicator_projection(fs, V)), ind),
                       fs.to_json())
    rec.close(f"100 fibered sets, {pairs} section pairs")


def test_criterion_06_diagram_commutation():
    rec = Record(6, 120)
    rng = random.Random(6)
    graphs = checks = 0
    while graphs < 50:
        g = random_graph(rng, n_min=1, n_max=4, max_mult=2)
        if len(window_paths(g, 4).paths) > 2000 or len(enumerate_graph_sections(g)) > 64:
            continue
        graphs += 1
        secs = enumerate_graph_sections(g)
        for L in (3, 4):
            interior = [p for p in all_window_points(g, L) if len(p) >= 2]
            for _ in range(50):
                f = {rng.choice(interior): rng.randint(-3, 3) for _ in range(rng.randint(1, 6))}
                for phi in secs:
                    checks += 1
                    rec.expect(diagram_check(g, phi, f, L), (g.to_json(), phi.preferred, f))
    rec.close(f"{graphs} graphs, {checks} diagram checks")


def test_criterion_07_power_stability():
    rec = Record(7, 30)
    for g in criterion_graphs():
        A = adjacency_transfer(g)
        base = power_condition(A, 1)
        for n in (2, 3):
            rec.expect(power_condition(A, n) == base, (g.to_json(), n))
    rec.close(f"{len(criterion_graphs())} graphs, powers 2 and 3")


def test_criterion_08_known_instances():
    rec = Record(8, 30)
    A = adjacency_transfer(SINGLE_LOOP)
    rec.expect(all(v.embeddable for v in (af_lp(A), af_stiemke(A), af_cycle(SINGLE_LOOP))),
               "single loop")
    for n in range(2, 7):
        g = cuntz(n)
        A = adjacency_transfer(g)
        rec.expect(not any(v.embeddable for v in (af_lp(A), af_stiemke(A), af_cycle(g))),
                   f"{n} loops")
    systems = 0
    # every permutation up to five points, then random ones up to ten
    perms = [p for k in range(1, 6) for p in itertools.permutations(range(k))]
    rng = random.Random(8)
    for k in range(6, 11):
        for _ in range(30):
            p = list(range(k))
            rng.shuffle(p)
            perms.append(tuple(p))
    for p in perms:
        X = tuple(range(len(p)))
        sys_ = FiniteSystem(X, dict(zip(X, p)), "bijection")
        rep = compression_exists(sys_)
        rec.expect(not rep.exists and rep.subsets_checked == 2 ** len(X), p)
        rec.expect(crossed_product_verdict(sys_).embeddable, p)
        systems += 1
    rec.close(f"single loop, 5 loop counts, {systems} permutations")


def test_criterion_09_pseudoloops():
    rec = Record(9, 30)
    calls = 0
    for n in range(1, 9):
        for sigma in functional_graphs(n):
            X = tuple(sigma)
            m = MetricModel(FiniteSystem(X, sigma), discrete_metric(X))
            for x in X:
                truth = orbit_cycle(X, sigma, x)
                for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 1000)):
                    calls += 1
                    rec.expect(pseudoloop_exists(m, x, eps).exists == truth, (sigma, x, eps))
    rng = random.Random(9)
    grid = [Fraction(k, 3) for k in range(1, 25)]
    for _ in range(100):
        n = rng.randint(1, 8)
        X = tuple(range(n))
        sigma = {x: rng.randrange(n) for x in X}
        m = MetricModel(FiniteSystem(X, sigma), random_metric(rng, n))
        base = rng.randrange(n)
        found = [pseudoloop_exists(m, base, e).exists for e in grid]
        rec.expect(found == sorted(found), (sigma, m.metric))
    rec.close(f"all self-maps up to isomorphism on <= 8 points ({calls} searches), "
              "100 random metrics")


def test_criterion_10_dimension_group_chains():
    rec = Record(10, 60)
    rng = random.Random(10)
    unknown = decided = 0
    for _ in range(100):
        X, maps, C = random_chain_model(rng, x_max=10)
        n1, n2 = rng.randrange(3), rng.randrange(3)
        v1 = [rng.randint(-3, 3) for _ in range(C.dim(n1))]
        v2 = [rng.randint(-3, 3) for _ in range(C.dim(n2))]
        if rng.random() < 0.3:
            # a second representative of the same class
            n2, v2 = min(n1 + 1, 2), C.push(n1, v1, min(n1 + 1, 2))
        E1, E2 = DimensionGroupElement(n1, v1), DimensionGroupElement(n2, v2)
        rec.expect(dg_equal(E1, E2, C) == chain_equal(X, maps, (n1, v1), (n2, v2)),
                   (maps, v1, v2))
        for E, v, n in ((E1, v1, n1), (E2, v2, n2)):
            verdict = dg_positive(E, C, 3)
            truth = chain_positive(X, maps, (n, v))
            if verdict.status == "unknown":
                unknown += 1
            else:
                decided += 1
                rec.expect((verdict.status == "positive") == truth, (maps, v, str(verdict)))
    rec.close(f"100 chain models, {decided} decided / {unknown} unknown positivity verdicts")
