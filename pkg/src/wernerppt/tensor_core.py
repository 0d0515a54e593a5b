"""Multi-index arithmetic, Kronecker products and partial transposition.

Composite spaces are ``d`` subsystems of local dimension ``n``. Basis states
are addressed by digit tuples in ``[0, n)`` with big-endian positional
encoding, so the first subsystem is the most significant digit::

    flat = sum(digits[k] * n ** (d - 1 - k))
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError

#: Default cap on the total dimension ``n**d`` of dense matrices.
DEFAULT_CAP = 4096
#: Environment variable overriding :data:`DEFAULT_CAP`.
CAP_ENV_VAR = "WERNERPPT_CAP"


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 4:
        raise DomainError(f"{CAP_ENV_VAR} must be at least 4, got {cap}")
    return cap


def check_capacity(dim: int, cap: int | None = None) -> None:
    cap = default_cap() if cap is None else cap
    if dim > cap:
        raise CapacityError(f"dimension {dim} exceeds capacity cap {cap}")


@dataclass(frozen=True)
class SystemShape:
    """``d`` subsystems, each of local Hilbert-space dimension ``n``."""

    n: int
    d: int

    def __post_init__(self):
        for name in ("n", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {value!r}")
            if value < 2:
                raise DomainError(f"{name} must be >= 2, got {value}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "d", int(self.d))

    @property
    def dim(self) -> int:
        return self.n**self.d

    def require_capacity(self, cap: int | None = None) -> "SystemShape":
        """Return ``self`` or raise :class:`CapacityError` if ``n**d`` is over the cap."""
        check_capacity(self.dim, cap)
        return self

    def bipartitions(self, canonical: bool = True) -> list["Bipartition"]:
        """Masks to test for PPT.

        With ``canonical`` only the prefixes ``{0..M-1}`` for ``M = 1..d//2`` are
        returned; these suffice for permutation-symmetric states. Otherwise
        every nonempty proper subset is listed.
        """
        if canonical:
            return [Bipartition.first(self.d, m) for m in range(1, self.d // 2 + 1)]
        return [
            Bipartition(sites, self.d)
            for size in range(1, self.d)
            for sites in combinations(range(self.d), size)
        ]


@dataclass(frozen=True)
class Bipartition:
    """Subsystems (0-based) whose indices get transposed.

    Must be a nonempty proper subset of ``range(d)``.
    """

    sites: tuple[int, ...]
    d: int

    def __post_init__(self):
        sites = tuple(sorted(set(int(s) for s in self.sites)))
        if len(sites) != len(tuple(self.sites)):
            raise DomainError(f"duplicate subsystem in mask {self.sites!r}")
        if any(s < 0 or s >= self.d for s in sites):
            raise DomainError(f"mask {self.sites!r} out of range for d={self.d}")
        if not 1 <= len(sites) <= self.d - 1:
            raise DomainError("mask must be a nonempty proper subset of the subsystems")
        object.__setattr__(self, "sites", sites)

    @classmethod
    def first(cls, d: int, m: int) -> "Bipartition":
        """The prefix mask ``{0, ..., m-1}``."""
        return cls(tuple(range(m)), d)

    @classmethod
    def from_labels(cls, labels: Iterable[int], d: int) -> "Bipartition":
        """Build from 1-based subsystem labels."""
        return cls(tuple(int(label) - 1 for label in labels), d)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(s + 1 for s in self.sites)

    @property
    def size(self) -> int:
        return len(self.sites)

    def __str__(self):
        return ",".join(str(label) for label in self.labels)


def flat_index(shape: SystemShape, digits: Sequence[int]) -> int:
    if len(digits) != shape.d:
        raise DomainError(f"expected {shape.d} digits, got {len(digits)}")
    flat = 0
    for digit in digits:
        if not 0 <= digit < shape.n:
            raise DomainError(f"digit {digit} out of range [0, {shape.n})")
        flat = flat * shape.n + int(digit)
    return flat


def multi_index(shape: SystemShape, flat: int) -> tuple[int, ...]:
    if not 0 <= flat < shape.dim:
        raise DomainError(f"flat index {flat} out of range [0, {shape.dim})")
    digits = []
    for _ in range(shape.d):
        flat, digit = divmod(flat, shape.n)
        digits.append(digit)
    return tuple(reversed(digits))


def kron(a: np.ndarray, b: np.ndarray, cap: int | None = None) -> np.ndarray:
    """Kronecker product, ``out[i*p + k, j*q + l] = a[i, j] * b[k, l]``."""
    a = np.asarray(a)
    b = np.asarray(b)
    check_capacity(a.shape[0] * b.shape[0], cap)
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray], cap: int | None = None) -> np.ndarray:
    factors = list(factors)
    if not factors:
        raise DomainError("kron_all needs at least one factor")
    check_capacity(int(np.prod([np.asarray(f).shape[0] for f in factors])), cap)
    return reduce(np.kron, factors)


def kron_power(a: np.ndarray, d: int, cap: int | None = None) -> np.ndarray:
    """``a ⊗ a ⊗ ... ⊗ a`` with ``d`` factors."""
    return kron_all([a] * d, cap)


def _as_square(rho: np.ndarray, shape: SystemShape) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape != (shape.dim, shape.dim):
        raise DomainError(
            f"matrix of shape {rho.shape} does not act on {shape.d} subsystems of dimension {shape.n}"
        )
    return rho


def transpose_sites(rho: np.ndarray, shape: SystemShape, sites: Iterable[int]) -> np.ndarray:
    """Swap row and column digits on ``sites``; any subset is allowed, including all or none."""
    rho = _as_square(rho, shape)
    n, d = shape.n, shape.d
    axes = list(range(2 * d))
    for s in sites:
        axes[s], axes[d + s] = axes[d + s], axes[s]
    tensor = rho.reshape((n,) * (2 * d))
    return np.ascontiguousarray(tensor.transpose(axes)).reshape(shape.dim, shape.dim)


def partial_transpose(rho: np.ndarray, shape: SystemShape, mask: Bipartition) -> np.ndarray:
    """Partial transpose over the subsystems in ``mask``.

    A pure permutation of entries: output ``(r, c)`` is the input at ``(r', c')``
    where ``r'`` and ``c'`` exchange the digits of ``r`` and ``c`` on the masked
    sites.
    """
    if mask.d != shape.d:
        raise DomainError(f"mask built for d={mask.d}, shape has d={shape.d}")
    return transpose_sites(rho, shape, mask.sites)


def full_transpose(rho: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(rho).T)


def permute_subsystems(rho: np.ndarray, shape: SystemShape, perm: Sequence[int]) -> np.ndarray:
    """Relabel subsystems: subsystem ``k`` of the output is subsystem ``perm[k]`` of the input."""
    rho = _as_square(rho, shape)
    if sorted(perm) != list(range(shape.d)):
        raise DomainError(f"{perm!r} is not a permutation of range({shape.d})")
    d = shape.d
    axes = list(perm) + [d + p for p in perm]
    tensor = rho.reshape((shape.n,) * (2 * d))
    return np.ascontiguousarray(tensor.transpose(axes)).reshape(shape.dim, shape.dim)


def is_hermitian(a: np.ndarray, rtol: float = 1e-12) -> bool:
    """``max|A - A^H| <= rtol * max|A|``."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = np.max(np.abs(a)) if a.size else 0.0
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= rtol * scale)
