from .characterization import (
    LogFitResult,
    BFInstance,
    CharacterizationResult,
    CharacterizationError,
    ell,
    check_multiplicativity,
    check_two_add_instance,
    check_zeros_lemma,
    fit_log_constant,
    extract_constant_q,
    extract_constant_q_rel,
    build_bf_instance,
    verify_scaling,
    characterize,
    DEFAULT_GRID,
    METHODS,
)
