from .utils import (
    KahanSummation,
    kahan_sum,
    format_value,
    write_json,
    dumps_json,
    print_audit_summary,
    EXIT_OK,
    EXIT_FAILURE,
    EXIT_USAGE,
)
from .config import AuditConfig, default_seed
