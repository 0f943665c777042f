"""Classical, quantum and no-shared-randomness values of non-local games."""
from .classical import (
    CapExceeded,
    ClassicalReport,
    Interval,
    chsh_mix,
    classical_fixed,
    classical_worst,
    closed_form_classical,
    ee_alpha_beta,
    ee_distribution,
    ee_mix,
    ee_worst_dist,
    nand_mix,
    nand_worst_dist,
    payoff_matrix,
    verify_worst_certificate,
)
from .dsl import GameDocument, parse_distribution, parse_game, serialize_game
from .game import (
    BUILTINS,
    DeterministicStrategy,
    Distribution,
    Game,
    GameError,
    MixedStrategy,
    NotBinaryInputs,
    NotSymmetric,
    NotXorGame,
    ShapeMismatch,
    SymmetricDistribution,
    SymmetricXorCoeffs,
    build_chsh,
    build_ee,
    build_ma,
    build_nand,
    build_nmaj,
    build_or_and,
    builtin,
    input_values,
    match_builtin,
    symmetric_builtin_coeffs,
    symmetric_coeffs,
    value_of_mixed,
    win_probability,
    xor_view,
)
from .noshared import AtMostHalf, PerfectDeterministic, ProductStrategy, product_value, product_worst, xor_dichotomy
from .quantum import (
    QuantumReport,
    ee_alphabeta_value,
    ee_quantum_bounds,
    ee_tsirelson_bound,
    nand_limit_distribution,
    nmaj_distribution,
    quantum_2xor_fixed,
    quantum_symmetric_fixed,
    quantum_symmetric_worst,
    werner_wolf_check,
)
from .report import VERSION as __version__
from .sim import SimulationResult, simulate
from .solvers import VectorStrategy, alternating_ascent, minimax_circle, solve_zero_sum

__all__ = [
    "__version__",
    "AtMostHalf",
    "BUILTINS",
    "CapExceeded",
    "ClassicalReport",
    "DeterministicStrategy",
    "Distribution",
    "Game",
    "GameDocument",
    "GameError",
    "Interval",
    "MixedStrategy",
    "NotBinaryInputs",
    "NotSymmetric",
    "NotXorGame",
    "PerfectDeterministic",
    "ProductStrategy",
    "QuantumReport",
    "ShapeMismatch",
    "SimulationResult",
    "SymmetricDistribution",
    "SymmetricXorCoeffs",
    "VectorStrategy",
    "alternating_ascent",
    "build_chsh",
    "build_ee",
    "build_ma",
    "build_nand",
    "build_nmaj",
    "build_or_and",
    "builtin",
    "chsh_mix",
    "classical_fixed",
    "classical_worst",
    "closed_form_classical",
    "ee_alpha_beta",
    "ee_alphabeta_value",
    "ee_distribution",
    "ee_mix",
    "ee_quantum_bounds",
    "ee_tsirelson_bound",
    "ee_worst_dist",
    "input_values",
    "match_builtin",
    "minimax_circle",
    "nand_limit_distribution",
    "nand_mix",
    "nand_worst_dist",
    "nmaj_distribution",
    "parse_distribution",
    "parse_game",
    "payoff_matrix",
    "product_value",
    "product_worst",
    "quantum_2xor_fixed",
    "quantum_symmetric_fixed",
    "quantum_symmetric_worst",
    "serialize_game",
    "simulate",
    "solve_zero_sum",
    "symmetric_builtin_coeffs",
    "symmetric_coeffs",
    "value_of_mixed",
    "verify_worst_certificate",
    "werner_wolf_check",
    "win_probability",
    "xor_dichotomy",
    "xor_view",
]
