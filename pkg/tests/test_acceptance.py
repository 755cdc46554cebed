"""Acceptance run.

Each test carries ``@pytest.mark.criterion(n)``; the conftest hook prints one
PASS/FAIL line per criterion at the end of the session.
"""
import math
import random
import subprocess
import sys
import time
from fractions import Fraction
from math import comb

import pytest

from checks import (NORM, STD, check_alternating_multiplicities, check_closure_and_boundary_rule,
                    check_eigenvalue_pairing, check_harmonics, check_inner_products,
                    check_kunneth_and_euler, check_laplacian_rules, check_reduction,
                    check_scaling)
from conftest import complex_of, random_chain, seeded_digraph
from pathtor import (ChainComplex, allowed_paths, boundary, box_power, builtin,
                     cartesian_product, join_power, torsion_report)
from pathtor.digraph import INTERVAL, POINT, SQUARE, TRIANGLE, TWO_POINTS
from pathtor.spectral import betti
from pathtor.torsion import (normalized_from_standard, predict_join, predict_power,
                             predict_product)
from pathtor.verify import verify_join, verify_product

criterion = pytest.mark.criterion
REL = 1e-9


def assert_torsion(graph, t_squared, kind=STD, reduced=False, max_len=16):
    """Exact T^2, float T to 1e-9, and the Reidemeister torsion to 1e-9."""
    rep = torsion_report(graph, kind, reduced, max_len)
    assert rep.T_squared == t_squared
    expected = math.sqrt(t_squared)
    assert rep.T == pytest.approx(expected, rel=REL)
    assert rep.tau_R == pytest.approx(expected, rel=REL)
    return rep


# ---------------------------------------------------------------- 1. worked examples

@criterion(1)
@pytest.mark.parametrize("m", range(2, 7))
def test_line(m):
    rep = assert_torsion(builtin("line", m), m)
    assert normalized_from_standard(rep) == pytest.approx(math.sqrt(m), rel=REL)


@criterion(1)
def test_triangle():
    rep = assert_torsion(TRIANGLE, 3)
    assert normalized_from_standard(rep) == pytest.approx(math.sqrt(1.5), rel=REL)
    assert_torsion(TRIANGLE, Fraction(3, 2), NORM)


@criterion(1)
def test_square():
    rep = assert_torsion(SQUARE, 8)
    assert normalized_from_standard(rep) == pytest.approx(2, rel=REL)
    assert_torsion(SQUARE, 4, NORM)


@criterion(1)
@pytest.mark.parametrize("m", range(3, 9))
def test_directed_cycle(m):
    g = builtin("cycle", m)
    assert g.arrows != TRIANGLE.arrows
    assert_torsion(g, m * m, max_len=4)


@criterion(1)
def test_prism():
    prism = cartesian_product(INTERVAL, TRIANGLE)
    assert_torsion(prism, 16)
    assert_torsion(prism, 3, NORM)
    pred = predict_product(torsion_report(INTERVAL), torsion_report(TRIANGLE))
    assert pred.squared["T"] == 16 and pred.squared["T_normalized"] == 3


@criterion(1)
@pytest.mark.parametrize("n, t_squared", [(2, 8), (3, Fraction(256, 3)),
                                          (4, Fraction(2048 ** 2 * 6, 81 ** 2))])
def test_cube(n, t_squared):
    assert t_squared == {2: 8, 3: Fraction(256, 3), 4: Fraction(8388608, 2187)}[n]
    assert_torsion(box_power(INTERVAL, n), t_squared)
    assert predict_power(torsion_report(INTERVAL), n).squared["T"] == t_squared


@criterion(1)
@pytest.mark.parametrize("m", [3, 4])
@pytest.mark.parametrize("n", [2, 3])
def test_cyclic_torus(m, n):
    torus = box_power(builtin("cycle", m), n)
    assert_torsion(torus, 1, NORM, max_len=n + 1)
    base = torsion_report(builtin("cycle", m), max_len=n + 1)
    assert predict_power(base, n).squared["T_normalized"] == 1
    if n == 2:
        assert_torsion(torus, Fraction(2) ** (m * m - 1), max_len=n + 1)


@criterion(1)
@pytest.mark.parametrize("n", range(1, 6))
def test_simplex(n):
    assert_torsion(join_power(POINT, n), n)
    assert predict_power(torsion_report(POINT, reduced=True), n, "join").squared["T"] == n


@criterion(1)
@pytest.mark.parametrize("n, t_squared", [(2, 16), (3, Fraction(3, 4))])
def test_sphere(n, t_squared):
    assert_torsion(join_power(TWO_POINTS, n), t_squared)
    disc = torsion_report(TWO_POINTS, reduced=True)
    assert predict_power(disc, n, "join").squared["T"] == t_squared


@criterion(1)
@pytest.mark.parametrize("m", range(3, 9))
def test_cycle_join(m):
    assert_torsion(join_power(builtin("cycle", m), 2), 2 * m ** 3, max_len=4)
    base = torsion_report(builtin("cycle", m), reduced=True, max_len=4)
    assert predict_join(base, base).squared["T"] == 2 * m ** 3


# ---------------------------------------------------------------- 2. dimension formulas

@criterion(2)
@pytest.mark.parametrize("n", range(1, 5))
def test_cube_dimensions(n):
    cc = complex_of(box_power(INTERVAL, n))
    assert cc.dims() == [2 ** (n - p) * comb(n, p) for p in range(n + 1)]


@criterion(2)
@pytest.mark.parametrize("n", range(1, 4))
def test_torus_dimensions(n):
    m = 3
    cc = complex_of(box_power(builtin("cycle", m), n), max_len=n + 1)
    assert cc.dims() == [comb(n, p) * m ** n for p in range(n + 1)] + [0]
    assert [betti(cc, p) for p in range(n + 1)] == [comb(n, p) for p in range(n + 1)]


# ---------------------------------------------------------------- 3. Reidemeister = analytic

@criterion(3)
def test_reidemeister_equals_analytic_on_random_digraphs():
    start = time.perf_counter()
    failures, worst = [], 0.0
    for seed in range(200):
        g = seeded_digraph(seed, max_vertices=6, p=0.4)
        for kind in (STD, NORM):
            rep = torsion_report(g, kind, max_len=5)
            err = abs(rep.tau_R - rep.T)
            worst = max(worst, err / max(1.0, rep.T))
            if err > 1e-7 * max(1.0, rep.T):
                failures.append((seed, kind.value, rep.T, rep.tau_R))
    elapsed = time.perf_counter() - start
    print(f"Reidemeister vs analytic: 400 runs, worst relative error {worst:.2e}, {elapsed:.1f}s")
    assert not failures
    assert elapsed < 60


# ---------------------------------------------------------------- 4. product and join torsion formulas

def random_pairs(n: int, base_seed: int):
    rng = random.Random(base_seed)
    for _ in range(n):
        yield (seeded_digraph(rng.randrange(2 ** 32), max_vertices=4, acyclic=True),
               seeded_digraph(rng.randrange(2 ** 32), max_vertices=4, acyclic=True))


@criterion(4)
def test_product_torsion_formula():
    bad = [(x.to_json(), y.to_json()) for x, y in random_pairs(50, 4)
           if not verify_product(x, y)["ok"]]
    assert not bad


@criterion(4)
def test_join_torsion_formula():
    bad = [(x.to_json(), y.to_json()) for x, y in random_pairs(50, 40)
           if not verify_join(x, y)["ok"]]
    assert not bad


# ---------------------------------------------------------------- 5. exact algebra

@criterion(5)
def test_boundary_squares_to_zero_and_closure():
    for seed in range(100):
        g = seeded_digraph(seed, max_vertices=6)
        pcd = allowed_paths(g, 5)
        assert pcd.check_closure()
        cc = ChainComplex(pcd, augmented=bool(seed % 2))
        rng = random.Random(seed)
        for p in cc.degrees:
            if p - 1 > cc.low:
                assert not cc.boundary_matrix(p - 1).dot(cc.boundary_matrix(p)).any()
            if p >= 1:
                u = random_chain(cc, p, rng)
                if u and p >= 2 - cc.augmented:
                    assert not boundary(boundary(u, cc.augmented), cc.augmented)


@criterion(5)
@pytest.mark.parametrize("joined", [False, True], ids=["product", "join"])
def test_product_closure_and_leibniz(joined):
    rng = random.Random(5)
    for x, y in random_pairs(100, 50 + joined):
        check_closure_and_boundary_rule(x, y, rng, joined)


@criterion(5)
@pytest.mark.parametrize("joined", [False, True], ids=["product", "join"])
def test_inner_product_identities(joined):
    rng = random.Random(6)
    for x, y in random_pairs(100, 60 + joined):
        check_inner_products(x, y, rng, joined)


@criterion(5)
@pytest.mark.parametrize("joined", [False, True], ids=["product", "join"])
def test_kunneth_and_euler_identities(joined):
    for x, y in random_pairs(100, 70 + joined):
        check_kunneth_and_euler(x, y, joined)


# ---------------------------------------------------------------- 6. spectral identities

@criterion(6)
def test_alternating_multiplicities():
    for seed in range(100):
        check_alternating_multiplicities(seeded_digraph(seed), (STD, NORM)[seed % 2])


@criterion(6)
def test_harmonic_dimension_is_betti():
    for seed in range(100):
        g = seeded_digraph(seed)
        check_harmonics(g, (STD, NORM)[seed % 2])
        check_eigenvalue_pairing(g, (STD, NORM)[seed % 2])


@criterion(6)
@pytest.mark.parametrize("joined", [False, True], ids=["product", "join"])
def test_laplacian_product_rules(joined):
    rng = random.Random(8)
    for x, y in random_pairs(100, 80 + joined):
        check_laplacian_rules(x, y, rng, joined)


@criterion(6)
def test_reduction_identity():
    for seed in range(100):
        check_reduction(seeded_digraph(seed))


@criterion(6)
def test_scaling_law():
    for seed in range(100):
        check_scaling(seeded_digraph(seed), seed)


# ---------------------------------------------------------------- 7. determinism

@criterion(7)
@pytest.mark.parametrize("argv", [
    ["torsion", "builtin:cycle:5", "--max-len", "4", "--seed", "7"],
    ["torsion", "builtin:square", "--inner", "normalized", "--seed", "3"],
    ["homology", "builtin:sphere:2", "--spectrum"],
    ["verify", "join", "builtin:triangle", "builtin:line:3:+-"],
])
def test_repeated_runs_are_byte_identical(argv):
    outputs = {subprocess.run([sys.executable, "-m", "pathtor", *argv], capture_output=True,
                              check=True).stdout for _ in range(3)}
    assert len(outputs) == 1
