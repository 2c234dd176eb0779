import numpy as np
import pytest

from qdeph.model import case_c1, case_c2, case_c3
from qdeph.pt import Bipartition, pt_transform
from qdeph.spectral import (NotHermitianError, eig_hermitian, is_psd, lindblad_decomposition,
                            pseudo_det, trace_norm)

from conftest import random_hermitian, random_psd, random_unitary


def test_eig_sorted_and_report():
    rep = eig_hermitian(np.diag([3.0, 1.0, 2.0]))
    assert rep.eigenvalues.tolist() == [1.0, 2.0, 3.0]
    assert rep.lambda_min == 1.0 and rep.is_psd and rep.numerical_rank == 3
    assert rep.pseudo_det == pytest.approx(6.0)


def test_pauli_x():
    np.testing.assert_allclose(eig_hermitian([[0, 1], [1, 0]]).eigenvalues, [-1, 1], atol=1e-15)


def test_c2_spectrum_sums_to_trace():
    ev = eig_hermitian(case_c2(3).C).eigenvalues
    assert ev.min() >= -1e-12
    assert ev.sum() == pytest.approx(6.0, rel=1e-12)


def test_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eig_hermitian([[1, 2], [0, 1]])
    with pytest.raises(NotHermitianError):
        trace_norm([[1, 1j], [1j, 1]])


@pytest.mark.parametrize("M, expected", [(np.eye(3), True), ([[1, 2], [2, 1]], False), (np.zeros((2, 2)), True)])
def test_is_psd(M, expected):
    assert is_psd(M) is expected


def test_pseudo_det_c3_transform_n3():
    Ct = pt_transform(case_c3(3), Bipartition.of(3, [0])).C_tilde
    assert pseudo_det(Ct) == pytest.approx(-1 / 36, rel=1e-10)


def test_pseudo_det_drops_zero():
    assert pseudo_det(np.diag([2.0, 3.0, 0.0])) == pytest.approx(6.0)
    assert pseudo_det(np.zeros((3, 3))) == 1.0


def test_pseudo_det_equals_det_when_nonsingular(rng):
    M = random_hermitian(rng, 5) + 4 * np.eye(5)
    assert pseudo_det(M) == pytest.approx(np.linalg.det(M).real, rel=1e-10)


def test_pseudo_det_unitary_invariance(rng):
    for n in range(2, 9):
        M = random_hermitian(rng, n)
        U = random_unitary(rng, n)
        assert pseudo_det(U @ M @ U.conj().T) == pytest.approx(pseudo_det(M), rel=1e-9)


def test_decomposition_c1():
    comps = lindblad_decomposition(case_c1(2).C)
    assert len(comps) == 1
    g, l = comps[0]
    assert g == pytest.approx(1.0)
    np.testing.assert_allclose(np.abs(l), [2**-0.5] * 2, atol=1e-14)


def test_decomposition_diagonal():
    comps = lindblad_decomposition(np.diag([0.3, 0.7]))
    assert [g for g, _ in comps] == pytest.approx([0.7, 0.3])
    np.testing.assert_allclose(np.abs(comps[0][1]), [0, 1])


def test_decomposition_one_negative_rate_for_c3_transform():
    Ct = pt_transform(case_c3(3), Bipartition.of(3, [0])).C_tilde
    rates = [g for g, _ in lindblad_decomposition(Ct)]
    assert len(rates) == 3
    assert sum(g < 0 for g in rates) == 1


def test_reconstruction(rng):
    for n in (2, 4, 7):
        for M in (random_hermitian(rng, n), random_psd(rng, n, rank=2)):
            comps = lindblad_decomposition(M)
            R = sum(g * np.outer(l, l.conj()) for g, l in comps)
            assert np.linalg.norm(R - M) <= 1e-10 * np.linalg.norm(M)
            vecs = np.array([l for _, l in comps])
            np.testing.assert_allclose(vecs.conj() @ vecs.T, np.eye(len(comps)), atol=1e-12)


def test_trace_norm():
    assert trace_norm(np.diag([1.0, -0.5])) == pytest.approx(1.5)
    bell_pt = 0.5 * np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert trace_norm(bell_pt) == pytest.approx(2.0)


def test_trace_norm_bounds(rng):
    for _ in range(20):
        M = random_hermitian(rng, 4)
        assert trace_norm(M) >= abs(np.trace(M).real) - 1e-12
        P = random_psd(rng, 4)
        assert trace_norm(P) == pytest.approx(np.trace(P).real, rel=1e-12)
        assert trace_norm(-P) == pytest.approx(np.trace(P).real, rel=1e-12)
