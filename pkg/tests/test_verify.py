import numpy as np
import pytest

from qdeph.dynamics import evolve, product_plus_state
from qdeph.model import ModelError, case_c1, case_c3, make_model
from qdeph.verify import (classical_mc, dissipator_superop, feedforward_equiv, feedforward_model,
                          liouvillian_superop, model_superop, vec, z_jump)

from conftest import random_psd, random_state, random_symmetric


def test_vec_convention(rng):
    A, X, B = (rng.standard_normal((3, 3)) for _ in range(3))
    np.testing.assert_allclose(np.kron(B.T, A) @ vec(X), vec(A @ X @ B))


def test_single_qubit_dephasing_spectrum():
    S = liouvillian_superop(np.zeros((2, 2)), [(1.0, z_jump([1.0]))]).S
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(S).real), [-2, -2, 0, 0], atol=1e-14)
    np.testing.assert_allclose(np.diag(S), [0, -2, -2, 0], atol=1e-14)


def test_empty_liouvillian_is_zero():
    assert not liouvillian_superop(np.zeros((4, 4)), []).S.any()


def test_liouvillian_is_additive(rng):
    L1, L2 = z_jump([1, 0.5j]), z_jump([0.3, -1])
    both = liouvillian_superop(np.zeros((4, 4)), [(0.7, L1), (1.3, L2)]).S
    split = liouvillian_superop(np.zeros((4, 4)), [(0.7, L1)]).S + liouvillian_superop(np.zeros((4, 4)), [(1.3, L2)]).S
    np.testing.assert_allclose(both, split, atol=1e-14)


def test_liouvillian_dimension_check():
    with pytest.raises(ValueError):
        liouvillian_superop(np.zeros((2, 2)), [(1.0, np.eye(4))])


def test_trace_preserving_generator(rng):
    L = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    S = dissipator_superop(L)
    # the trace functional vec(I)^T annihilates the image of every state
    assert np.abs(vec(np.eye(4)) @ S).max() <= 1e-12


def test_model_superop_agrees_with_analytic_evolution(rng):
    from scipy.linalg import expm
    m = make_model(2, random_psd(rng, 2), random_symmetric(rng, 2))
    rho = random_state(rng, 2)
    S = model_superop(m)
    out = S.apply(rho)
    t = 0.4
    via = (expm(S.S * t) @ vec(rho)).reshape(4, 4, order="F")
    np.testing.assert_allclose(via, evolve(rho, m, t), atol=1e-12)
    assert abs(np.trace(out)) <= 1e-12


def test_feedforward_hermitian_jump():
    assert feedforward_equiv(z_jump([1.0])) <= 1e-14


def test_feedforward_cases():
    assert feedforward_equiv(z_jump([1.0, -1j])) <= 1e-12
    g, l = 1.0, np.exp(2j * np.pi * np.arange(3) / 3) / np.sqrt(3)
    assert feedforward_equiv(z_jump(l)) <= 1e-12
    assert all(d <= 1e-12 for _, d in feedforward_model(case_c3(3)))


def test_feedforward_global_phase(rng):
    L = z_jump(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    base = feedforward_equiv(L)
    assert abs(feedforward_equiv(np.exp(0.83j) * L) - base) <= 1e-14


def test_feedforward_single_direction_leaves_hamiltonian():
    from qdeph.verify import feedforward_superop
    L = z_jump([1.0, -1j])
    A = 0.5 * (L + L.conj().T)
    B = 0.5j * (L - L.conj().T)
    fwd = feedforward_superop(A, B, 1.0)
    # forward alone: -i [AB, rho] + D[A - iB] for commuting A, B
    from qdeph.verify import commutator_superop
    np.testing.assert_allclose(fwd, -1j * commutator_superop(A @ B) + dissipator_superop(L), atol=1e-13)


def test_classical_mc_no_noise_is_exact():
    rho, dev = classical_mc(make_model(1, [[0.0]]), product_plus_state(1), 1.0, 1000, 3)
    assert dev == 0.0


def test_classical_mc_independent_diag():
    _, dev = classical_mc(make_model(2, np.eye(2)), product_plus_state(2), 0.3, 100_000, 7)
    assert dev <= 0.02


def test_classical_mc_rejects_complex_and_h():
    with pytest.raises(ModelError):
        classical_mc(case_c3(3), product_plus_state(3), 0.3, 10, 1)
    with pytest.raises(ModelError):
        classical_mc(make_model(2, np.eye(2), [[0, 1], [1, 0]]), product_plus_state(2), 0.3, 10, 1)


def test_classical_mc_thread_independent():
    m = case_c1(3)
    a, _ = classical_mc(m, product_plus_state(3), 0.5, 20_000, 11, threads=1)
    b, _ = classical_mc(m, product_plus_state(3), 0.5, 20_000, 11, threads=4)
    assert np.array_equal(a, b)


def test_classical_mc_error_scaling():
    m = case_c1(3)
    rho = product_plus_state(3)
    small = np.median([classical_mc(m, rho, 0.5, 1000, s, threads=1)[1] for s in range(20)])
    large = np.median([classical_mc(m, rho, 0.5, 4000, 100 + s, threads=1)[1] for s in range(20)])
    assert 0.5 / 1.5 <= large / small <= 0.5 * 1.5
