"""PPT analysis of noisy GHZ-type states.

The states are ``(1 - eps) * I / n**d + eps * |GHZ><GHZ|`` on ``d`` subsystems of
dimension ``n``. The package builds them, computes partial-transpose spectra
numerically and in closed form, locates the PPT threshold
``1/(n**(d-1) + 1)``, catalogues competing bounds, and certifies the
threshold as exact for qubits with an explicit separable ensemble.
"""

from .bounds import (
    BoundsReport,
    compare_bounds,
    ppt_upper_bound,
    qubit_exact_bound,
    random_robustness_bound,
    schack_caves_lower,
    two_subsystem_exact,
    vidal_tarrach_bound,
)
from .errors import CapacityError, CertificateError, DomainError, SolverError
from .qubit_decomposition import (
    build_decomposition,
    enumerate_terms,
    generating_expansion,
    index_admissible,
    verify_separability_certificate,
)
from .spectra import (
    SpectrumReport,
    ThresholdReport,
    analytic_pt_spectrum,
    hermitian_spectrum,
    is_ppt,
    ppt_threshold,
)
from .states import build_ghz, build_noise, build_werner, pauli_form_check, projector
from .tensor_core import Bipartition, SystemShape, flat_index, kron, multi_index, partial_transpose

__version__ = "0.1.0"
