import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import FS0, fibered_sets
from grpd.errors import (GuardExceededError, InvalidInputError, NotAProjectionError,
                         UnsupportedDegreeError)
from grpd.fibered import (ChainFunction, FiberedSet, Section, block_decomposition, boundary,
                          cone_is_standard, convolve, adjoint, enumerate_sections, fiber_sum,
                          h0_class_equal, homology, identity_function, indicator_projection,
                          projection_equiv, relation_pairs, trace_data, trace_phi)
from grpd.generators import random_level2_chain, random_projection
from grpd.oracle import h0_bruteforce, in_relation_lattice, level2_boundary

PHI = Section({"a": "1", "b": "3"})


def bijection(k):
    X = tuple(str(i) for i in range(k))
    return FiberedSet(X, tuple("y" + x for x in X), {x: "y" + x for x in X})


def test_surjectivity_enforced():
    with pytest.raises(InvalidInputError, match="surjective"):
        FiberedSet(("1",), ("a", "b"), {"1": "a"})


def test_enumerate_sections():
    secs = enumerate_sections(FS0)
    assert [s.phi for s in secs] == [{"a": "1", "b": "3"}, {"a": "2", "b": "3"}]
    assert len(enumerate_sections(bijection(4))) == 1
    fs = FiberedSet(("1", "2", "3", "4"), ("a", "b"), {"1": "a", "2": "a", "3": "b", "4": "b"})
    assert len(enumerate_sections(fs)) == 4


def test_section_guard(monkeypatch):
    X = tuple(f"x{i}" for i in range(42))
    fs = FiberedSet(X, tuple(f"y{i}" for i in range(21)), {x: f"y{i // 2}" for i, x in enumerate(X)})
    with pytest.raises(GuardExceededError, match="1000000"):
        enumerate_sections(fs)
    monkeypatch.setenv("GRPD_GUARD_OVERRIDE", str(2 ** 21))
    assert len(enumerate_sections(FiberedSet(X[:6], ("y0", "y1", "y2"), {x: f"y{i // 2}" for i, x in enumerate(X[:6])}))) == 8


def test_relation_pairs():
    assert relation_pairs(FS0) == {("1", "1"), ("1", "2"), ("2", "1"), ("2", "2"), ("3", "3")}
    assert relation_pairs(bijection(3)) == {(x, x) for x in "012"}
    single = FiberedSet(("1", "2", "3"), ("a",), {"1": "a", "2": "a", "3": "a"})
    assert len(relation_pairs(single)) == 9


def test_boundary_examples():
    d1 = boundary(FS0, 1, ChainFunction.delta(1, ("1", "2")))
    assert d1.values == {"2": 1, "1": -1}
    F = ChainFunction.delta(2, (("1", "2"), ("2", "1")))
    d2 = boundary(FS0, 2, F)
    assert d2.values == {("2", "1"): 1, ("1", "1"): -1, ("1", "2"): 1}
    assert d2.values == level2_boundary(F.values)
    assert boundary(FS0, 1, d2).is_zero()
    with pytest.raises(ValueError):
        boundary(FS0, 0, ChainFunction.delta(0, "1"))
    with pytest.raises(InvalidInputError):
        boundary(FS0, 1, ChainFunction.delta(1, ("1", "3")))


def test_homology_examples():
    h0 = homology(FS0, 0)
    assert (h0.free_rank, h0.torsion) == (2, ()) and cone_is_standard(h0)
    assert h0_bruteforce(FS0).free_rank == 2
    assert homology(FS0, 1).is_trivial
    assert homology(bijection(4), 0).free_rank == 4
    with pytest.raises(UnsupportedDegreeError):
        homology(FS0, 2)


def test_fiber_sum_and_classes():
    assert fiber_sum(FS0, (1, 0, 2)) == [1, 2]
    assert fiber_sum(FS0, (0, 0, 0)) == [0, 0]
    assert fiber_sum(FS0, (1, -1, 0)) == [0, 0]
    assert h0_class_equal(FS0, (1, 0, 2), (0, 1, 2))
    assert in_relation_lattice(FS0.X, FS0.sigma, [1, -1, 0])
    assert not h0_class_equal(FS0, (1, 0, 2), (1, 0, 1))
    assert h0_class_equal(FS0, (5, -2, 7), (5, -2, 7))


def test_block_decomposition():
    bd = block_decomposition(FS0, PHI)
    assert bd.blocks == (("a", ("1", "2")), ("b", ("3",)))
    mu = bd.mu({("1", "2"): 1})
    assert mu["a"] == [[0, 1], [0, 0]] and mu["b"] == [[0]]
    ident = bd.mu(identity_function(FS0))
    assert ident["a"] == [[1, 0], [0, 1]] and ident["b"] == [[1]]
    other = block_decomposition(FS0, Section({"a": "2", "b": "3"}))
    assert other.blocks[0] == ("a", ("2", "1"))
    with pytest.raises(InvalidInputError):
        block_decomposition(FS0, Section({"a": "3", "b": "3"}))


def test_mu_is_multiplicative_and_star_preserving():
    rng = random.Random(3)
    bd = block_decomposition(FS0, PHI)
    pairs = sorted(relation_pairs(FS0))
    for _ in range(30):
        f = {p: rng.randint(-3, 3) for p in pairs}
        g = {p: rng.randint(-3, 3) for p in pairs}
        mf, mg, mfg = bd.mu(f), bd.mu(g), bd.mu(convolve(f, g))
        for y in FS0.Y:
            prod = [[sum(a * b for a, b in zip(r, c)) for c in zip(*mg[y])] for r in mf[y]]
            assert prod == mfg[y]
            assert bd.mu(adjoint(f))[y] == [list(r) for r in zip(*mf[y])]
        lin = bd.mu({p: f[p] + 2 * g[p] for p in pairs})
        assert all(lin[y] == [[a + 2 * b for a, b in zip(r1, r2)]
                              for r1, r2 in zip(mf[y], mg[y])] for y in FS0.Y)


def test_trace_examples():
    assert trace_phi(FS0, PHI, identity_function(FS0)) == [2, 0, 1]
    assert trace_phi(FS0, PHI, {}) == [0, 0, 0]
    assert trace_phi(FS0, PHI, {("1", "1"): 1}) == [1, 0, 0]
    with pytest.raises(NotAProjectionError):
        trace_phi(FS0, PHI, {("1", "2"): 1})


def test_matrix_amplified_trace():
    p = [[identity_function(FS0), {}], [{}, {("3", "3"): 1}]]
    assert trace_phi(FS0, PHI, p) == [2, 0, 2]


def test_projection_equiv_examples():
    assert projection_equiv(FS0, {("1", "1"): 1}, {("2", "2"): 1})
    assert not projection_equiv(FS0, {("1", "1"): 1}, {("3", "3"): 1})
    p = identity_function(FS0)
    assert projection_equiv(FS0, p, p)


@settings(max_examples=60, deadline=None)
@given(fibered_sets())
def test_homology_properties(fs):
    h0 = homology(fs, 0)
    brute = h0_bruteforce(fs)
    assert (h0.free_rank, h0.torsion) == (len(fs.Y), ()) == (brute.free_rank, brute.torsion)
    assert cone_is_standard(h0)
    if len(fs.X) <= 6:
        assert homology(fs, 1).is_trivial


@settings(max_examples=60, deadline=None)
@given(fibered_sets(), st.randoms(use_true_random=False))
def test_chain_identity(fs, rnd):
    F = ChainFunction(2, random_level2_chain(rnd, fs))
    assert boundary(fs, 1, boundary(fs, 2, F)).is_zero()


@settings(max_examples=60, deadline=None)
@given(fibered_sets(), st.data())
def test_fiber_sum_criterion(fs, data):
    n = len(fs.X)
    f1 = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    f2 = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    assert h0_class_equal(fs, f1, f2) == in_relation_lattice(
        fs.X, fs.sigma, [a - b for a, b in zip(f1, f2)])


@settings(max_examples=40, deadline=None)
@given(fibered_sets(max_x=6), st.randoms(use_true_random=False))
def test_trace_properties(fs, rnd):
    secs = enumerate_sections(fs)
    p = random_projection(rnd, fs)
    q = random_projection(rnd, fs)
    traces = [trace_phi(fs, s, p) for s in secs]
    assert all(h0_class_equal(fs, traces[0], t) for t in traces)
    assert all(x >= 0 for x in traces[0])
    image = secs[0].image()
    assert all(v == 0 for x, v in zip(fs.X, traces[0]) if x not in image)
    assert projection_equiv(fs, p, q) == h0_class_equal(fs, trace_phi(fs, secs[0], p),
                                                        trace_phi(fs, secs[-1], q))
    V = [x for x in fs.X if rnd.random() < 0.5]
    ind = [int(x in V) for x in fs.X]
    assert h0_class_equal(fs, trace_phi(fs, secs[-1], indicator_projection(fs, V)), ind)
    assert fiber_sum(fs, traces[0]) == trace_data(fs, p)


@settings(max_examples=60, deadline=None)
@given(fibered_sets(), st.data())
def test_ordered_group(fs, data):
    n = len(fs.X)
    f = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    s = fiber_sum(fs, f)
    if all(x >= 0 for x in s) and all(-x >= 0 for x in s):
        assert h0_class_equal(fs, f, [0] * n)
