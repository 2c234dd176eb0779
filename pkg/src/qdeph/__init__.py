"""Decide whether correlated Markovian Z-dephasing can entangle qubits."""
from .dynamics import (DensityMatrix, bar_state, bell_state, evolve, gamma_rate, log_negativity,
                       negativity_trace, omega_freq, partial_transpose_state, positivity_probe,
                       product_plus_state)
from .model import (DephasingModel, case_c1, case_c2, case_c3, g_theta, make_model, rank_proxy,
                    rel_imag_norm, sample_ginibre, two_qubit_family)
from .pt import Bipartition, TransformedModel, enumerate_bipartitions, pt_transform, witness, witness_all
from .spectral import eig_hermitian, is_psd, lindblad_decomposition, pseudo_det, trace_norm

__version__ = "0.1.0"
