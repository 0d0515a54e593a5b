"""Closed-form bounds on the mixing weight separating entangled from separable states.

Everything here is exact :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .tensor_core import SystemShape

# Explicit many-qubit values that precede the closed formula.
_SCHACK_CAVES_TABLE = {2: Fraction(1, 3), 3: Fraction(1, 5), 4: Fraction(1, 33), 5: Fraction(1, 243)}


def ppt_upper_bound(shape: SystemShape) -> Fraction:
    """``1/(n**(d-1) + 1)``: above this the state always has a non-positive partial transpose."""
    return Fraction(1, shape.n ** (shape.d - 1) + 1)


def vidal_tarrach_bound(shape: SystemShape) -> Fraction:
    """``1/(1 + n/2)**(d-1)``, the random-robustness bound for arbitrary multipartite states."""
    return 1 / (1 + Fraction(shape.n, 2)) ** (shape.d - 1)


def schack_caves_lower(d: int) -> Fraction:
    """Separability radius around the maximally mixed state of ``d`` qubits.

    Tabulated for ``d <= 5``; the even/odd closed formula is applied from
    ``d = 6`` on.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    if d in _SCHACK_CAVES_TABLE:
        return _SCHACK_CAVES_TABLE[d]
    sign = 1 if d % 2 == 0 else -1
    return Fraction(1, 1 + sign * 2**d + 2 ** (2 * d - 2))


def qubit_exact_bound(d: int) -> Fraction:
    """Exact separability threshold ``1/(1 + 2**(d-1))`` for ``d`` qubits.

    Gives 1/3 and 1/5 for two and three qubits. The ``1/(1 + n)`` form for
    two subsystems of any dimension is :func:`two_subsystem_exact`.
    """
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    return Fraction(1, 1 + 2 ** (d - 1))


def two_subsystem_exact(n: int) -> Fraction:
    """Exact threshold ``1/(1 + n)`` for two subsystems of dimension ``n``."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    return Fraction(1, 1 + n)


def random_robustness_bound(shape: SystemShape) -> Fraction:
    """Upper bound ``n**(d-1)`` on the random robustness; equals ``(1 - e)/e`` at the PPT bound."""
    return Fraction(shape.n ** (shape.d - 1))


@dataclass(frozen=True)
class BoundsReport:
    shape: SystemShape
    this_paper_upper: Fraction
    vidal_tarrach_upper: Fraction
    random_robustness: Fraction
    schack_caves_lower: Fraction | None = None
    qubit_exact: Fraction | None = None
    two_subsystem_exact: Fraction | None = None

    def as_dict(self) -> dict[str, Fraction | None]:
        return {
            "this_paper": self.this_paper_upper,
            "vidal_tarrach": self.vidal_tarrach_upper,
            "schack_caves": self.schack_caves_lower,
            "qubit_exact": self.qubit_exact,
            "two_subsystem_exact": self.two_subsystem_exact,
            "random_robustness": self.random_robustness,
        }


def compare_bounds(shape: SystemShape) -> BoundsReport:
    """Collect every applicable bound for ``shape`` and check their orderings.

    Raises ``AssertionError`` if the PPT bound fails to beat Vidal-Tarrach, or if
    for qubits the Schack-Caves radius exceeds the exact threshold.
    """
    upper = ppt_upper_bound(shape)
    report = BoundsReport(
        shape=shape,
        this_paper_upper=upper,
        vidal_tarrach_upper=vidal_tarrach_bound(shape),
        random_robustness=random_robustness_bound(shape),
        schack_caves_lower=schack_caves_lower(shape.d) if shape.n == 2 else None,
        qubit_exact=qubit_exact_bound(shape.d) if shape.n == 2 else None,
        two_subsystem_exact=two_subsystem_exact(shape.n) if shape.d == 2 else None,
    )
    if not report.this_paper_upper < report.vidal_tarrach_upper:
        raise AssertionError(f"PPT bound does not improve on Vidal-Tarrach for {shape}")
    if shape.n == 2 and not report.schack_caves_lower <= report.qubit_exact == upper:
        raise AssertionError(f"qubit bounds out of order for {shape}")
    return report
