import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherekernel.kernelfact import verblunsky_table
from spherekernel.measure import preset
from spherekernel.moments import MomentKernel, kernel_window
from spherekernel.multiindex import shortlex_unrank
from spherekernel.orthopoly import (
    BallPolynomial,
    evaluate,
    gram_schmidt,
    monomial_vector,
    recurrence_residual,
    sharp_polys,
    shift_succ,
    window_polynomial,
)
from spherekernel.szego import second_list_items

SPECS = ["lebesgue", "counterexample", "stable-demo", "atom-demo", "shifted-disc", "circle-demo"]


def random_kernel(seed: int, n: int, d: int = 2) -> MomentKernel:
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return MomentKernel(d, n - 1, A.conj().T @ A / n + np.eye(n))


def test_sigma_first_orthonormal_polynomial():
    sys = gram_schmidt(kernel_window(preset("lebesgue"), 5))
    assert np.allclose(sys.phi[1].coeffs, [0, np.sqrt(2)])
    assert np.allclose(sys.phi[4].padded(6), [0, 0, 0, 0, np.sqrt(6), 0])
    assert sys.leading_coefficient(3) == pytest.approx(np.sqrt(3))


def test_circle_monic_polynomial():
    sys = gram_schmidt(kernel_window(preset("circle-demo"), 3))
    assert np.allclose(sys.Phi[1].coeffs, [0.4, 1.0], atol=1e-15)
    # Phi_2 is orthogonal to 1 and z
    G = sys.K.gram
    c = sys.Phi[2].padded(4)
    for k in range(2):
        e = np.zeros(4)
        e[k] = 1
        assert abs(np.vdot(e, G @ c)) <= 1e-15


def test_sharp_is_one_on_diagonal_kernels():
    K = kernel_window(preset("lebesgue"), 9)
    for p in sharp_polys(K):
        assert p(np.array([0.3, -0.2j])) == pytest.approx(1.0)


def test_shift_succ_examples():
    z = np.array([0.7 + 0.1j, -0.4j])
    z2 = BallPolynomial(2, [0, 0, 1])
    assert shift_succ(z2)(z) == pytest.approx(z[0] ** 2)
    one = BallPolynomial(2, [1])
    assert shift_succ(one)(z) == pytest.approx(z[0])
    three = BallPolynomial(3, [0, 0, 0, 2])
    assert shift_succ(three)(np.array([0.5, 0.1, 0.2])) == pytest.approx(2 * 0.25)


def test_evaluate_matches_monomial_vector():
    rng = np.random.default_rng(3)
    c = rng.standard_normal(10) + 1j * rng.standard_normal(10)
    p = BallPolynomial(2, c)
    pts = rng.standard_normal((5, 2)) * 0.5 + 0j
    vals = evaluate(p, pts)
    for z, v in zip(pts, vals):
        assert v == pytest.approx(monomial_vector(z, 9, 2) @ c)
    with pytest.raises(ValueError):
        evaluate(p, np.zeros(3))


def test_polynomial_arithmetic():
    p = BallPolynomial(2, [1, 2])
    q = BallPolynomial(2, [0, 0, 3])
    assert np.allclose((p + q).coeffs, [1, 2, 3])
    assert np.allclose((q - p).coeffs, [-1, -2, 3])
    assert (2 * q).max_abs() == 6
    assert q.degree_rank == 2 and q.multidegree.entries == (0, 1)
    assert BallPolynomial(2, [0, 1e-16]).degree_rank == -1
    with pytest.raises(ValueError):
        q.padded(2)


def test_window_polynomial_pairs_to_one():
    K = kernel_window(preset("stable-demo"), 9)
    P = window_polynomial(K, 2, 7)
    W = K.gram[2:8, 2:8]
    assert np.vdot(P, W @ P).real == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("name", SPECS)
def test_recurrences_and_origin_values(name):
    K = kernel_window(preset(name), 20)
    sys = gram_schmidt(K)
    table = verblunsky_table(K)
    assert sys.gram_defect() <= 1e-10
    zero = np.zeros(K.d)
    for r in range(1, 21):
        rp, rs = recurrence_residual(sys, table, shortlex_unrank(r, K.d))
        assert max(rp, rs) <= 1e-9
        assert table[0, r] == pytest.approx(-sys.phi[r](zero) / sys.phiSharp[r](zero), abs=1e-9)


def test_recurrence_rank_bounds():
    K = kernel_window(preset("lebesgue"), 3)
    sys, table = gram_schmidt(K), verblunsky_table(K)
    with pytest.raises(ValueError):
        recurrence_residual(sys, table, (0, 0))
    with pytest.raises(ValueError):
        recurrence_residual(sys, table, (0, 2))


@pytest.mark.parametrize("name", SPECS)
def test_second_list_coherence(name):
    K = kernel_window(preset(name), 27)
    for row in second_list_items(K, verblunsky_table(K), gram_schmidt(K)):
        assert row["residual"] <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 10))
def test_random_kernel_recurrences(seed, n):
    K = random_kernel(seed, n)
    K = MomentKernel(K.d, K.N, K.entries / K.entries[0, 0].real)
    sys = gram_schmidt(K)
    table = verblunsky_table(K)
    assert sys.gram_defect() <= 1e-10
    for r in range(1, n):
        assert max(recurrence_residual(sys, table, shortlex_unrank(r, 2))) <= 1e-9
    for row in second_list_items(K, table, sys):
        assert row["residual"] <= 1e-9
