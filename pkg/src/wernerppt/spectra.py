"""Hermitian eigensolvers, the closed-form partial-transpose spectrum, and PPT thresholds.

The partial transpose of the mixture is affine in the mixing weight::

    rho(eps)^{T_a} = (1 - eps) I / n**d + eps * ghz^{T_a}

because the noise term is a multiple of the identity and is left alone by any
partial transpose. Every eigenvalue is therefore ``(1 - eps)/n**d + eps * mu``
with ``mu`` an eigenvalue of ``ghz^{T_a}``, and the PPT boundary follows from
the smallest ``mu`` alone.

``ghz^{T_a}`` has entries ``1/n`` at ``(|a_A b_B>, |b_A a_B>)`` for every pair of
levels ``a, b``. The ``a == b`` entries are ``n`` diagonal singles (``mu = 1/n``);
each unordered pair ``a != b`` gives a 2x2 swap block with ``mu = ±1/n``; all
other amplitudes are forced to zero. The ε=1 eigenvalue is thus ``-1/n``, not
``-1/n**2``: only ``-1/n`` puts the PPT boundary at ``1/(n**(d-1) + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, SolverError
from .states import build_ghz, build_werner, check_epsilon
from .tensor_core import Bipartition, SystemShape, is_hermitian, partial_transpose

JACOBI_MAX_SWEEPS = 50
JACOBI_TOL = 1e-14
RESIDUAL_TOL = 1e-10
SPECTRUM_ATOL = 1e-9


@dataclass(frozen=True)
class SpectrumReport:
    """Ascending eigenvalues with multiplicities.

    Numeric reports list every eigenvalue once with multiplicity 1 and carry the
    solver ``residual``; analytic reports list distinct values and leave
    ``residual`` as ``None``.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple[int, ...]
    residual: float | None = None
    method: str = "lapack"
    eigenvectors: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return sum(self.multiplicities)

    @property
    def trace(self) -> float:
        return float(np.dot(self.eigenvalues, self.multiplicities))

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    def expanded(self) -> np.ndarray:
        """Every eigenvalue repeated by its multiplicity, ascending."""
        return np.repeat(self.eigenvalues, self.multiplicities)


@dataclass(frozen=True)
class ThresholdReport:
    epsilon_critical: float
    mask_used: Bipartition
    mu_min: float
    method: str


def jacobi_eigh(a: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS, tol: float = JACOBI_TOL):
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Each pivot ``(p, q)`` is first made real by a phase on column ``q`` and
    then annihilated by a real plane rotation. Sweeps stop once the
    off-diagonal Frobenius mass is at most ``tol * ||A||_F``.

    Returns ``(w, v)`` with unsorted eigenvalues ``w`` and eigenvectors in the
    columns of ``v``.
    """
    work = np.array(a, dtype=complex, copy=True)
    dim = work.shape[0]
    vecs = np.eye(dim, dtype=complex)
    scale = np.linalg.norm(work)
    if dim == 1 or scale == 0.0:
        return work.diagonal().real.copy(), vecs

    for _ in range(max_sweeps):
        off = np.linalg.norm(work - np.diag(work.diagonal()))
        if off <= tol * scale:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = work[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                if mag != apq.real:
                    phase = apq / mag
                    work[:, q] *= phase.conjugate()
                    work[q, :] *= phase
                    vecs[:, q] *= phase.conjugate()
                app = work[p, p].real
                aqq = work[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = work[:, p].copy()
                work[:, p] = c * col_p - s * work[:, q]
                work[:, q] = s * col_p + c * work[:, q]
                row_p = work[p, :].copy()
                work[p, :] = c * row_p - s * work[q, :]
                work[q, :] = s * row_p + c * work[q, :]
                work[p, q] = work[q, p] = 0.0
                vec_p = vecs[:, p].copy()
                vecs[:, p] = c * vec_p - s * vecs[:, q]
                vecs[:, q] = s * vec_p + c * vecs[:, q]
    else:
        off = np.linalg.norm(work - np.diag(work.diagonal()))
        if off > tol * scale:
            raise SolverError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal mass {off:.3e})"
            )
    return work.diagonal().real.copy(), vecs


def hermitian_spectrum(a: np.ndarray, method: str = "lapack", keep_vectors: bool = False) -> SpectrumReport:
    """Numeric spectrum of a Hermitian matrix with a residual check.

    ``method`` is ``"lapack"`` (``numpy.linalg.eigh``) or ``"jacobi"``
    (:func:`jacobi_eigh`, practical up to a few hundred rows).
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a):
        raise DomainError("matrix is not Hermitian")
    a = a.astype(complex, copy=False)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
    elif method == "jacobi":
        w, v = jacobi_eigh(a)
    else:
        raise DomainError(f"unknown eigensolver {method!r}")
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    norm = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    residual = float(np.max(np.linalg.norm(a @ v - v * w, axis=0), initial=0.0)) / norm
    if residual > RESIDUAL_TOL:
        raise SolverError(f"eigen-residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}")
    return SpectrumReport(
        eigenvalues=w,
        multiplicities=(1,) * len(w),
        residual=residual,
        method=method,
        eigenvectors=v if keep_vectors else None,
    )


def ghz_pt_levels(shape: SystemShape) -> list[tuple[Fraction, int]]:
    """``(mu, multiplicity)`` for the partial transpose of the GHZ state, any mask."""
    n = shape.n
    pairs = n * (n - 1) // 2
    return [
        (Fraction(-1, n), pairs),
        (Fraction(0), shape.dim - n * n),
        (Fraction(1, n), n + pairs),
    ]


def analytic_pt_spectrum(shape: SystemShape, mask: Bipartition, eps) -> SpectrumReport:
    """Closed-form spectrum of ``rho(eps)^{T_mask}``; identical for every mask."""
    if mask.d != shape.d:
        raise DomainError(f"mask built for d={mask.d}, shape has d={shape.d}")
    eps = check_epsilon(eps)
    noise = (1.0 - eps) / shape.dim
    merged: dict[float, int] = {}
    for mu, mult in ghz_pt_levels(shape):
        if mult == 0:
            continue
        value = noise + eps * float(mu)
        merged[value] = merged.get(value, 0) + mult
    values = sorted(merged)
    return SpectrumReport(
        eigenvalues=np.array(values),
        multiplicities=tuple(merged[v] for v in values),
        method="analytic-block",
    )


def pt_spectrum(shape: SystemShape, mask: Bipartition, eps, method: str = "lapack", cap: int | None = None) -> SpectrumReport:
    """Numeric spectrum of ``rho(eps)^{T_mask}``."""
    rho = build_werner(shape, eps, cap)
    return hermitian_spectrum(partial_transpose(rho, shape, mask), method=method)


def max_spectrum_deviation(a: SpectrumReport, b: SpectrumReport) -> float:
    """Largest gap between two spectra matched as sorted multisets."""
    x, y = a.expanded(), b.expanded()
    if x.shape != y.shape:
        raise DomainError(f"spectra have different sizes {x.size} and {y.size}")
    return float(np.max(np.abs(np.sort(x) - np.sort(y)), initial=0.0))


def _threshold_from_mu(shape: SystemShape, mu_min: float) -> float:
    if mu_min >= 0:
        raise SolverError(f"partial transpose of the GHZ state has no negative eigenvalue (mu_min={mu_min})")
    base = 1.0 / shape.dim
    return base / (base - mu_min)


def ppt_threshold(
    shape: SystemShape,
    mask: Bipartition | None = None,
    method: str = "numeric-affine",
    solver: str = "lapack",
    cap: int | None = None,
) -> ThresholdReport:
    """Mixing weight where ``rho(eps)^{T_mask}`` acquires a negative eigenvalue.

    ``numeric-affine`` eigensolves the partially transposed GHZ state and uses
    ``eps_c = (1/n**d) / (1/n**d - mu_min)``; ``analytic-block`` takes
    ``mu_min`` from the block structure instead.
    """
    mask = Bipartition.first(shape.d, 1) if mask is None else mask
    if mask.d != shape.d:
        raise DomainError(f"mask built for d={mask.d}, shape has d={shape.d}")
    if method == "numeric-affine":
        ghz_pt = partial_transpose(build_ghz(shape, cap), shape, mask)
        mu_min = hermitian_spectrum(ghz_pt, method=solver).min
    elif method == "analytic-block":
        mu_min = float(min(mu for mu, mult in ghz_pt_levels(shape) if mult))
    else:
        raise DomainError(f"unknown threshold method {method!r}")
    return ThresholdReport(_threshold_from_mu(shape, mu_min), mask, mu_min, method)


def min_pt_eigenvalue(shape: SystemShape, eps, mask: Bipartition, solver: str = "lapack", cap: int | None = None) -> float:
    return pt_spectrum(shape, mask, eps, method=solver, cap=cap).min


def ppt_threshold_bisect(
    shape: SystemShape,
    mask: Bipartition | None = None,
    xtol: float = 1e-13,
    solver: str = "lapack",
    cap: int | None = None,
) -> float:
    """Cross-check for :func:`ppt_threshold` by bisection on the sign of the minimum eigenvalue."""
    mask = Bipartition.first(shape.d, 1) if mask is None else mask
    rho_n = build_werner(shape, 0.0, cap)
    ghz_pt = partial_transpose(build_ghz(shape, cap), shape, mask)

    def lam_min(eps):
        return np.linalg.eigvalsh((1 - eps) * rho_n + eps * ghz_pt)[0]

    lo, hi = 0.0, 1.0
    if lam_min(hi) >= 0:
        raise SolverError("state stays PPT up to eps = 1")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if lam_min(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def is_ppt(shape: SystemShape, eps, mask: Bipartition | None = None, tol: float = 1e-12, cap: int | None = None) -> bool:
    """True iff the smallest eigenvalue of ``rho(eps)^{T_mask}`` is at least ``-tol``.

    Without a mask every canonical bipartition is checked.
    """
    masks = shape.bipartitions() if mask is None else [mask]
    return all(min_pt_eigenvalue(shape, eps, m, cap=cap) >= -tol for m in masks)
