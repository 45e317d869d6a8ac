"""Two-party quantum protocol simulator with exact qubit-cost accounting,
plus a numerical communication-complexity lower-bound lab."""

__version__ = "0.1.0"

from .statevector import (CVec, DenseOp, DiagonalPhaseOp, ReflectionOp,
                          UnitaryOp, apply, basis_state, hadamard_transform,
                          maximally_entangled, measure, overlap, uniform_state)
from .boolfn import (BooleanFunction, Gadget, PartialBooleanFunction,
                     SymmetricSpec, compose, compose_tilde, decode_codeword,
                     gadget_library, gamma, hadamard_codeword, hadamardize,
                     transitive_perms, verify_transitive)
from .runtime import (CostMeter, Party, ProtocolConstants, TwoPartyState,
                      init_shared)
from .amplamp import (AmplSetup, NoiseModel, epsilon_schedule, grover_angle,
                      iteration_count)
from .search import SearchInstance, search_known_t, search_unknown
from .counting import (CountReport, bcw_baseline_cost, count_or_threshold,
                       eval_symmetric, part1_filter, protocol_P, protocol_Pk)
from .querysim import (QueryOracle, bernstein_vazirani, grover_equality,
                       rtilde_hG_query_algorithm)
