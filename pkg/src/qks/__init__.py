"""Exact solver for the Kittel-Shore spin model and its q-deformation.

The model couples all N spins pairwise with equal strength; its
quantum-group deformation keeps the spectrum fully analytic.  The
package provides the deformed algebra and coproducts, two independent
Hamiltonian assembly routes, closed-form spectra and multiplicities,
coupled-basis eigenstates, log-domain thermodynamics to N = 10^6, and
Curie-temperature estimators, all behind a CLI (`qks`).
"""

from .coalgebra import (DEFAULT_SIZE_CAP, SiteLayout, SizeCapError,
                        coproduct_pm_deformed, coproduct_pm_undeformed,
                        coproduct_z, embed, size_cap)
from .curie import (CurieEstimate, NoTransitionError, RegimeError,
                    curie_analytic, curie_equal_maxima, curie_fit_reference,
                    curie_limit, curie_susceptibility)
from .hamiltonian import (ModelConfig, RouteMismatchError, build_ks,
                          build_qks, build_qks_coalgebra, build_qks_explicit,
                          route_deviation)
from .kernels import backend_name
from .qarith import (UNDEFORMED, DeformationParam, binomial_exact,
                     log_binomial, log_q_number, q_factorial_log, q_number)
from .qcg import CouplingTransform, couple_all, q_dicke_state, qcg_coefficient
from .representations import (SpinRep, deforming_functional, m_values,
                              q_casimir_matrix, su2_generators,
                              suq2_generators)
from .spectrum import (Histogram, SpectrumLine, analytic_levels,
                       density_of_states, density_of_states_log,
                       diagonalize_oracle, ground_energy,
                       half_spin_block_arrays, log_multiplicity_half,
                       multiplicity, multiplicity_mixed)
from .thermo import (BlockModel, LevelWeights, ThermoPoint, observables,
                     partition_function)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SIZE_CAP", "SiteLayout", "SizeCapError", "coproduct_pm_deformed",
    "coproduct_pm_undeformed", "coproduct_z", "embed", "size_cap",
    "CurieEstimate", "NoTransitionError", "RegimeError", "curie_analytic",
    "curie_equal_maxima", "curie_fit_reference", "curie_limit",
    "curie_susceptibility", "ModelConfig", "RouteMismatchError", "build_ks",
    "build_qks", "build_qks_coalgebra", "build_qks_explicit",
    "route_deviation", "backend_name", "UNDEFORMED", "DeformationParam",
    "binomial_exact", "log_binomial", "log_q_number", "q_factorial_log",
    "q_number", "CouplingTransform", "couple_all", "q_dicke_state",
    "qcg_coefficient", "SpinRep", "deforming_functional", "m_values",
    "q_casimir_matrix", "su2_generators", "suq2_generators", "Histogram",
    "SpectrumLine", "analytic_levels", "density_of_states",
    "density_of_states_log", "diagonalize_oracle", "ground_energy",
    "half_spin_block_arrays", "log_multiplicity_half", "multiplicity",
    "multiplicity_mixed", "BlockModel", "LevelWeights", "ThermoPoint",
    "observables", "partition_function", "__version__",
]
