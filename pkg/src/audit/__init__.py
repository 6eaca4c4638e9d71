from .handles import (
    MeasureKind,
    MeasureHandle,
    builtin_handle,
    shannon_handle,
    relative_entropy_handle,
    q_entropy_handle,
    q_relative_entropy_handle,
    index_weighted_handle,
    zero_handle,
    BUILTIN_MEASURES,
)
from .checks import (
    check_symmetry,
    check_vanishing,
    check_chain_rule,
    check_recursivity,
    check_two_block,
    check_q_chain,
    check_q_mult,
    check_q_rel_mult,
    check_q_recursivity,
    check_tensor_exchange,
    signed_chain_gap,
    telescoped_chain_residual,
)
from .sampling import sample_distribution, sample_pair, sample_sparse_distribution, trial_rng
from .report import AuditInstance, AuditReport, AxiomRecord
from .auditor import AXIOMS, AxiomAuditor, default_axioms, parse_axioms, run_audit
