"""Explicit separable ensemble for the qubit state at its PPT threshold.

At ``eps_c = 1/(2**(d-1) + 1)`` the ``d``-qubit state equals

    eps_c/2 * (P+3^{⊗d} + P-3^{⊗d}) + eps_c/2**(d-1) * sum_x P_x1 ⊗ ... ⊗ P_xd

where ``P±k = (I ± σk)/2`` and ``x`` runs over the admissible label tuples
(see :func:`index_admissible`). Since every summand is a product of qubit
density matrices with positive weight, the state is separable and the PPT
threshold is exact for qubits.

Two routes build the same matrix: summing the enumerated terms
(:func:`assemble`) and the closed generating form in terms of signed
projector sums (:func:`generating_expansion`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .bounds import qubit_exact_bound
from .errors import CertificateError, DomainError
from .states import build_werner, projector
from .tensor_core import SystemShape, kron_all, kron_power

#: Labels of the four projectors in the sum, in enumeration order.
#: Digit ``k`` encodes bit 0 = negative sign, bit 1 = axis 2.
ALPHABET = (1, -1, 2, -2)
ENUMERATION_MAX_D = 12
MATRIX_MAX_D = 7
_CHUNK = 1 << 20


def _check_d(d: int, limit: int) -> None:
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    if d > limit:
        raise DomainError(f"d={d} exceeds the limit of {limit} for this operation")


def index_admissible(labels: Sequence[int]) -> bool:
    """Whether a label tuple belongs in the sum.

    The number of ``±2`` labels must be even; when it is a multiple of four the
    number of negative labels must be even, otherwise odd.
    """
    for x in labels:
        if x not in ALPHABET:
            raise DomainError(f"label {x!r} not in {ALPHABET}")
    twos = sum(1 for x in labels if abs(x) == 2)
    negatives = sum(1 for x in labels if x < 0)
    if twos % 2:
        return False
    if twos % 4 == 0:
        return negatives % 2 == 0
    return negatives % 2 == 1


def _admissible_codes(d: int):
    """Yield arrays of admissible base-4 codes, scanning all ``4**d`` in order."""
    total = 4**d
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        twos = np.zeros(codes.shape, dtype=np.int8)
        negatives = np.zeros(codes.shape, dtype=np.int8)
        for k in range(d):
            digit = (codes >> (2 * k)) & 3
            twos += (digit >> 1).astype(np.int8)
            negatives += (digit & 1).astype(np.int8)
        keep = (twos % 2 == 0) & ((twos // 2 + negatives) % 2 == 0)
        yield codes[keep]


def count_terms(d: int) -> int:
    """Number of admissible tuples, counted without materialising them."""
    _check_d(d, ENUMERATION_MAX_D)
    return int(sum(chunk.size for chunk in _admissible_codes(d)))


def enumerate_terms(d: int) -> list[tuple[int, ...]]:
    """All admissible label tuples of length ``d`` (there are ``4**(d-1)``)."""
    _check_d(d, ENUMERATION_MAX_D)
    out = []
    for chunk in _admissible_codes(d):
        digits = (chunk[:, None] >> (2 * np.arange(d - 1, -1, -1))) & 3
        out.extend(tuple(ALPHABET[k] for k in row) for row in digits.tolist())
    return out


def brute_force_terms(d: int) -> list[tuple[int, ...]]:
    """Same set as :func:`enumerate_terms`, via a plain loop over :func:`index_admissible`."""
    return [t for t in product(ALPHABET, repeat=d) if index_admissible(t)]


@dataclass(frozen=True)
class DecompositionTerm:
    weight: Fraction
    label: tuple[int, ...]
    factors: tuple[np.ndarray, ...]

    @classmethod
    def from_label(cls, weight: Fraction, label: Sequence[int]) -> "DecompositionTerm":
        label = tuple(label)
        return cls(weight, label, tuple(projector(x) for x in label))

    @property
    def is_pole(self) -> bool:
        return abs(self.label[0]) == 3

    def matrix(self) -> np.ndarray:
        return kron_all(self.factors)


def critical_epsilon(d: int) -> Fraction:
    return qubit_exact_bound(d)


def build_decomposition(d: int) -> list[DecompositionTerm]:
    """Two pole terms followed by the ``4**(d-1)`` admissible product terms."""
    _check_d(d, ENUMERATION_MAX_D)
    eps_c = critical_epsilon(d)
    pole_weight = eps_c / 2
    weight = eps_c / 2 ** (d - 1)
    terms = [
        DecompositionTerm.from_label(pole_weight, (3,) * d),
        DecompositionTerm.from_label(pole_weight, (-3,) * d),
    ]
    terms.extend(DecompositionTerm.from_label(weight, t) for t in enumerate_terms(d))
    return terms


def assemble(terms: Iterable[DecompositionTerm], batch: int = 256) -> np.ndarray:
    """Weighted sum of the terms' tensor products."""
    terms = list(terms)
    if not terms:
        raise DomainError("no terms to assemble")
    sizes = {tuple(np.shape(f)[0] for f in t.factors) for t in terms}
    if len(sizes) != 1:
        raise DomainError("terms act on different spaces")
    dim = int(np.prod(sizes.pop()))
    total = np.zeros((dim, dim), dtype=complex)
    for start in range(0, len(terms), batch):
        chunk = terms[start : start + batch]
        weights = np.array([float(t.weight) for t in chunk])
        stacked = np.array([[np.asarray(f, dtype=complex) for f in t.factors] for t in chunk])
        acc = stacked[:, 0]
        for k in range(1, stacked.shape[1]):
            f = stacked[:, k]
            acc = (acc[:, :, None, :, None] * f[:, None, :, None, :]).reshape(
                len(chunk), acc.shape[1] * f.shape[1], -1
            )
        total += np.tensordot(weights, acc, axes=1)
    return total


def label_sum(labels: Iterable[Sequence[int]]) -> np.ndarray:
    """Unweighted sum of ``P_x1 ⊗ ... ⊗ P_xd`` over ``labels``."""
    return assemble(DecompositionTerm.from_label(Fraction(1), t) for t in labels)


@dataclass(frozen=True)
class GeneratingProducts:
    """``d``-fold tensor powers of signed sums of the four projectors.

    ``t*`` add the negative-axis projectors, ``s*`` subtract them; the index
    selects the weight on the 2-axis: ``1, -1, i, -i``.
    """

    t0: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    t3: np.ndarray
    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray


_AXIS2_WEIGHTS = (1, -1, 1j, -1j)


def signed_projector_sum(axis2_weight: complex, negative_sign: int) -> np.ndarray:
    """``P1 + w P2 + s (P-1 + w P-2)``."""
    w, s = axis2_weight, negative_sign
    return projector(1) + w * projector(2) + s * (projector(-1) + w * projector(-2))


def generating_products(d: int) -> GeneratingProducts:
    _check_d(d, MATRIX_MAX_D)
    ts = [kron_power(signed_projector_sum(w, 1), d) for w in _AXIS2_WEIGHTS]
    ss = [kron_power(signed_projector_sum(w, -1), d) for w in _AXIS2_WEIGHTS]
    return GeneratingProducts(*ts, *ss)


def generating_expansion(d: int) -> np.ndarray:
    """Closed form of the ensemble: poles plus ``eps_c/2**(d+1) * (T0 + T1 + S2 + S3)``.

    The quarter-sum ``(T0 + T1 + S2 + S3)/4`` keeps exactly the admissible
    tuples with coefficient 1, so this must agree with
    ``assemble(build_decomposition(d))``.
    """
    g = generating_products(d)
    eps_c = float(critical_epsilon(d))
    poles = kron_power(projector(3), d) + kron_power(projector(-3), d)
    return eps_c / 2 * poles + eps_c / 2 ** (d + 1) * (g.t0 + g.t1 + g.s2 + g.s3)


@dataclass
class SeparabilityCertificate:
    d: int
    epsilon: Fraction
    terms: list[DecompositionTerm]
    max_deviation: float

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "epsilon": f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            "term_count": len(self.terms),
            "max_deviation": self.max_deviation,
            "terms": [
                {
                    "weight": f"{t.weight.numerator}/{t.weight.denominator}",
                    "label": list(t.label),
                    "factors": [_matrix_rows(f) for f in t.factors],
                }
                for t in self.terms
            ],
        }


def _matrix_rows(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _check_factor(factor: np.ndarray, tol: float) -> str | None:
    f = np.asarray(factor)
    if f.shape != (2, 2):
        return f"factor has shape {f.shape}, expected (2, 2)"
    if np.max(np.abs(f - f.conj().T)) > tol:
        return "factor is not Hermitian"
    if abs(np.trace(f) - 1) > tol:
        return "factor does not have unit trace"
    if np.max(np.abs(f @ f - f)) > tol:
        return "factor is not idempotent"
    return None


def verify_terms(
    terms: Sequence[DecompositionTerm],
    d: int,
    tol: float = 1e-12,
    factor_tol: float = 1e-13,
) -> SeparabilityCertificate:
    """Check a candidate ensemble against the state at ``eps_c``.

    Raises :class:`CertificateError` naming the first failing term, or on a
    normalisation or matrix mismatch.
    """
    _check_d(d, MATRIX_MAX_D)
    for term in terms:
        if not term.weight > 0:
            raise CertificateError(f"non-positive weight {term.weight} on {term.label}", term)
        if len(term.factors) != d:
            raise CertificateError(f"term {term.label} has {len(term.factors)} factors, expected {d}", term)
        for factor in term.factors:
            problem = _check_factor(factor, factor_tol)
            if problem:
                raise CertificateError(f"{problem} in term {term.label}", term)
    total_weight = sum((t.weight for t in terms), Fraction(0))
    if total_weight != 1:
        raise CertificateError(f"weights sum to {total_weight}, not 1")
    eps_c = critical_epsilon(d)
    target = build_werner(SystemShape(2, d), eps_c)
    deviation = float(np.max(np.abs(assemble(terms) - target)))
    if deviation > tol:
        raise CertificateError(f"assembled ensemble deviates from the state by {deviation:.3e}")
    return SeparabilityCertificate(d, eps_c, list(terms), deviation)


def verify_separability_certificate(d: int, tol: float = 1e-12) -> SeparabilityCertificate:
    return verify_terms(build_decomposition(d), d, tol)
