"""Metric operators, Hermitian counterparts and laser-driven dynamics
for non-Hermitian Hamiltonians with real spectra.

The package is organized in layers: phase-space symbol algebra (weyl),
metric construction by terminating commutator series (metric), complex
contour geometry (stokes), worked model families with numeric spectra
(models), and time-dependent propagation (dynamics).  The ``pseudoherm``
command exposes all of it as reproducible CSV runs.
"""

from .weyl import (
    CapacityError,
    ExpPolySymbol,
    WeylSymbol,
    compose_weyl,
    evaluate,
    fourier_swap,
    hermitian_conjugate,
    is_pt_symmetric,
    pt_transform,
    star,
    star_commutator,
    symmetrize,
)
from .metric import (
    BchSeries,
    KappaTable,
    MetricAnsatzSolution,
    MetricConvergenceError,
    SimilarityPair,
    TerminationError,
    conjugate_by_exp,
    euler_numbers,
    hermitian_pair_from_q,
    kappa,
    metric_residual,
    nfold_commutator,
    observable_map,
    solve_metric_ansatz,
)
from .stokes import (
    AntiStokesAngles,
    Contour,
    StokesWedge,
    WedgePair,
    anti_stokes,
    asymptotic_exponent,
    contour_admissible,
    contour_point,
    decay_condition,
    wedges,
)
from .models import (
    EigenSystem,
    GridSpec,
    QuadratureAccuracyError,
    SpikedHOModel,
    SwansonFamily,
    X4Chain,
    banded_hamiltonian,
    hermitian_spectrum,
    minus_x4_chain,
    power_potential_symbol,
    refined_eigenvalues,
    spiked_energy,
    spiked_matrix_element,
    spiked_wavefunction,
    spiked_wavefunction_derivative,
    swanson_pair,
    x4_isospectral_quartic,
)
from .dynamics import (
    FieldIntegrals,
    Pulse,
    TransitionCurve,
    crank_nicolson_propagate,
    field_integrals,
    field_value,
    first_order_strong_field,
    first_order_transition,
    gauge_residual,
    gordon_volkov_propagate,
    transition_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AntiStokesAngles",
    "BchSeries",
    "CapacityError",
    "Contour",
    "EigenSystem",
    "ExpPolySymbol",
    "FieldIntegrals",
    "GridSpec",
    "KappaTable",
    "MetricAnsatzSolution",
    "MetricConvergenceError",
    "Pulse",
    "QuadratureAccuracyError",
    "SimilarityPair",
    "SpikedHOModel",
    "StokesWedge",
    "SwansonFamily",
    "TerminationError",
    "TransitionCurve",
    "WedgePair",
    "WeylSymbol",
    "X4Chain",
    "anti_stokes",
    "asymptotic_exponent",
    "banded_hamiltonian",
    "compose_weyl",
    "conjugate_by_exp",
    "contour_admissible",
    "contour_point",
    "crank_nicolson_propagate",
    "decay_condition",
    "euler_numbers",
    "evaluate",
    "field_integrals",
    "field_value",
    "first_order_strong_field",
    "first_order_transition",
    "fourier_swap",
    "gauge_residual",
    "gordon_volkov_propagate",
    "hermitian_conjugate",
    "hermitian_pair_from_q",
    "hermitian_spectrum",
    "is_pt_symmetric",
    "kappa",
    "metric_residual",
    "minus_x4_chain",
    "nfold_commutator",
    "observable_map",
    "power_potential_symbol",
    "pt_transform",
    "refined_eigenvalues",
    "solve_metric_ansatz",
    "spiked_energy",
    "spiked_matrix_element",
    "spiked_wavefunction",
    "spiked_wavefunction_derivative",
    "star",
    "star_commutator",
    "swanson_pair",
    "symmetrize",
    "transition_sweep",
    "wedges",
    "x4_isospectral_quartic",
]
