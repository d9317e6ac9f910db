"""Numerical laboratory for phase-sensitive superpositions whose moments
hide the phase: two or more non-overlapping copies of a compactly supported
window are combined with relative phases, and the package measures which
observables see those phases (momentum densities, characteristic functions,
phase-space distributions, operator statistics) and which provably cannot
(every polynomial moment).
"""

from .grids import Grid1D, SampledWave, Distribution1D, quadrature, inner_product
from .wavepacket import (
    WINDOW_FAMILIES,
    WindowSpec,
    SuperpositionSpec,
    build_window,
    build_superposition,
    build_dual_superposition,
    lobe_waves,
    amplitude_phase,
)
from .spectral import (
    to_momentum,
    to_position,
    momentum_distribution,
    window_transform,
    fringe_factor,
    dirichlet_kernel_sq,
    CharFunction,
    char_function_window,
    char_function_superposition,
    char_function_of_distribution,
    validate_char_function,
)
from .moments import (
    moments_by_quadrature,
    moments_by_charfun,
    cosine_identity_check,
    GWeight,
    alpha_dependent_expectation,
    moment_report,
    carleman_sum,
    krein_integral,
    lognormal_family,
    lognormal_moments,
    lognormal_moment_quadrature,
    lognormal_perturbation_overlap,
)
from .phasespace import (
    WignerGrid,
    CrossWigner,
    AliasingError,
    wigner,
    cross_wigner,
    wigner_moment,
    mixed_moment,
    cross_mixed_moment,
    current,
    group_delay,
    group_delay_closed_form,
    window_transform_with_derivative,
    dual_current,
    dual_group_delay,
    dual_special_case_report,
)
from .representations import (
    EigenBasis,
    oscillator_basis,
    basis_orthonormality_error,
    expand,
    operator_moments,
    hamiltonian_expectation,
    cross_hamiltonian_term,
)
from .config import ExperimentConfig, build_config, load_config_file
from .kernels import active_backend

__version__ = "0.1.0"
