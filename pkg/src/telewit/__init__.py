"""Linear witnesses for teleportation usefulness of bipartite states."""

from .errors import ConsistencyError, DomainError, ValidationError
from .evaluation import decide, expectation, fidelity_from_fef, qubit_witness_value
from .fef import OptimizerConfig, estimate_fef, is_useful, objective
from .operators import generators, local_term_decomposition, max_entangled_state, witness
from .shots import ShotPlan, detect_with_confidence, estimate_witness_mean, measure_pair
from .states import DensityMatrix, example_state, isotropic, random_haar_unitary, random_mixed, validate, werner_qubit

__version__ = "0.1.0"
