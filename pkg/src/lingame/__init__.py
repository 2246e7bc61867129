"""Toolkit for multiplayer linear games over finite Abelian groups.

Capabilities: exact classical and Svetlichny values, no-signaling values,
singular-value upper bounds on quantum success, explicit quantum strategy
evaluation, device-independent witnesses of genuine tripartite
entanglement, and simulation of communication protocols powered by
nonlocal boxes.
"""

from .algebra import AbelianGroup, FiniteField, is_irreducible, smallest_irreducible
from .errors import (
    GameFormatError,
    LingameError,
    NoThresholdError,
    NumericalFailureError,
    ResourceLimitError,
    ShapeError,
    ValidationError,
)
from .games import (
    Behavior,
    DeterministicStrategy,
    LinearGame,
    chsh_game,
    game_hash,
    load_game,
    make_game,
    mermin_ghz3_game,
    parse_game_file,
    serialize_game,
    success_probability,
)
from .linalg import adjoint, matmul, max_singular_value, scale
from .values import (
    ClassicalResult,
    SeparabilityReport,
    classical_value,
    no_signaling_value,
    separability_check,
    svetlichny_value,
)
from .qbounds import (
    BoundReport,
    PartitionBound,
    chsh_bound_analytic,
    game_matrix,
    quantum_bound,
    quantum_bound_partition,
)
from .strategies import (
    CorrelatorTensor,
    NoisyState,
    QuantumStrategy,
    correlators,
    ghz3_reference_strategy,
    load_strategy,
    noisy_success,
    parse_strategy_file,
    strategy_behavior,
    success_from_correlators,
)
from .diew import (
    BiseparablePartition,
    BiseparableReport,
    Verdict,
    WitnessResult,
    biseparable_bound,
    biseparable_bound_partition,
    biseparable_matrix,
    visibility_threshold,
    witness_verdict,
)
from .boxworld import (
    FunctionTable,
    FunctionalBox,
    PRBox,
    PolyCoefficients,
    ProtocolTranscript,
    Reduction,
    box_behavior,
    box_sample,
    cc_protocol,
    evaluate_polynomial,
    interpolate_polynomial,
    load_function,
    parse_function_file,
    partial_derivative,
    polynomial_table,
    reduce_to_pr,
    serialize_function,
    simulate_pr_from_functional,
)

__version__ = "0.1.0"
