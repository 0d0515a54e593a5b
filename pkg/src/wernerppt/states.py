"""Noisy GHZ-type ("generalized Werner") states and single-qubit building blocks.

All builders return dense ``complex128`` arrays. Entries of the states are
real, but the qubit projectors along the 2-axis are not, and everything is
combined in one carrier type.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Real

import numpy as np

from .errors import DomainError
from .tensor_core import SystemShape, kron_power

I2 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (I2, SIGMA_1, SIGMA_2, SIGMA_3)

AXES = (1, -1, 2, -2, 3, -3)


def check_epsilon(eps) -> float:
    """Validate a mixing weight on the closed interval [0, 1]; no clamping."""
    if isinstance(eps, bool) or not isinstance(eps, (Real, Fraction)):
        raise DomainError(f"epsilon must be a real number, got {eps!r}")
    value = float(eps)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {eps!r}")
    return value


def build_noise(shape: SystemShape, cap: int | None = None) -> np.ndarray:
    """Maximally mixed state ``I / n**d``."""
    shape.require_capacity(cap)
    return np.eye(shape.dim, dtype=complex) / shape.dim


def ghz_sites(shape: SystemShape) -> np.ndarray:
    """Flat indices of ``|a a ... a>`` for ``a = 0..n-1``."""
    # a * (1 + n + ... + n**(d-1))
    return np.arange(shape.n) * ((shape.dim - 1) // (shape.n - 1))


def build_ghz(shape: SystemShape, cap: int | None = None) -> np.ndarray:
    """``(1/n) * sum_{a,b} |a...a><b...b|``."""
    shape.require_capacity(cap)
    rho = np.zeros((shape.dim, shape.dim), dtype=complex)
    idx = ghz_sites(shape)
    rho[np.ix_(idx, idx)] = 1.0 / shape.n
    return rho


def build_werner(shape: SystemShape, eps, cap: int | None = None) -> np.ndarray:
    """``(1 - eps) * noise + eps * ghz``."""
    eps = check_epsilon(eps)
    return (1.0 - eps) * build_noise(shape, cap) + eps * build_ghz(shape, cap)


def projector(axis: int) -> np.ndarray:
    """Single-qubit projector ``(I + sign(axis) * sigma_|axis|) / 2`` for axis in ±1, ±2, ±3."""
    if isinstance(axis, bool) or axis not in AXES:
        raise DomainError(f"projector axis must be one of {AXES}, got {axis!r}")
    sign = 1 if axis > 0 else -1
    return (I2 + sign * PAULI[abs(axis)]) / 2


def pauli_form(shape: SystemShape, eps, cap: int | None = None) -> np.ndarray:
    """Qubit state assembled from Pauli tensor powers.

    ``2**-d * ((1 - eps) I^{⊗d} + (eps/2) E)`` with
    ``E = (I+σ3)^{⊗d} + (I-σ3)^{⊗d} + (σ1+iσ2)^{⊗d} + (σ1-iσ2)^{⊗d}``.
    Independent of :func:`build_werner`, which it should reproduce.
    """
    if shape.n != 2:
        raise DomainError(f"the Pauli form exists only for qubits, got n={shape.n}")
    eps = check_epsilon(eps)
    shape.require_capacity(cap)
    d = shape.d
    e_hat = (
        kron_power(I2 + SIGMA_3, d, cap)
        + kron_power(I2 - SIGMA_3, d, cap)
        + kron_power(SIGMA_1 + 1j * SIGMA_2, d, cap)
        + kron_power(SIGMA_1 - 1j * SIGMA_2, d, cap)
    )
    return ((1.0 - eps) * kron_power(I2, d, cap) + (eps / 2) * e_hat) / 2**d


def pauli_form_check(shape: SystemShape, eps, cap: int | None = None) -> np.ndarray:
    """Build :func:`pauli_form` and insist it matches :func:`build_werner` within 1e-13."""
    via_pauli = pauli_form(shape, eps, cap)
    deviation = np.max(np.abs(via_pauli - build_werner(shape, eps, cap)))
    if deviation > 1e-13:
        raise AssertionError(f"Pauli form deviates from the direct construction by {deviation:.3e}")
    return via_pauli
