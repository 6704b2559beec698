from modular_congruences.audit_writer import AuditWriter
from modular_congruences.utils import (
    FormSpec,
    PowerSeries,
    SequenceTable,
    VerificationReport,
    build_form,
)
from modular_congruences.utils.utils import (
    get_args,
    create_audit,
    calculate_runtime,
    load_defaults,
)


__all__ = [
    "AuditWriter",
    "FormSpec",
    "PowerSeries",
    "SequenceTable",
    "VerificationReport",
    "build_form",
    "get_args",
    "create_audit",
    "calculate_runtime",
    "load_defaults",
]
