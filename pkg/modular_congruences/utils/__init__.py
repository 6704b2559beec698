from modular_congruences.utils.errors import ModularCongruenceError
from modular_congruences.utils.series import (
    PowerSeries,
    compose,
    inverse,
    make_series,
    revert,
    sqrt_unit,
)
from modular_congruences.utils.sequences import (
    SequenceTable,
    A_k_table,
    B_C_tables,
    D3_table,
    apery_B_table,
)
from modular_congruences.utils.forms import (
    EtaQuotient,
    FormSpec,
    build_form,
    dim_cusp_forms,
    expand_eta_quotient,
    verify_identity,
)
from modular_congruences.utils.report import InstanceRecord, VerificationReport
from modular_congruences.utils.congruence import (
    cornacchia,
    hecke_check,
    three_term_check,
    transfer_coefficients,
)


__all__ = [
    "ModularCongruenceError",
    "PowerSeries",
    "compose",
    "inverse",
    "make_series",
    "revert",
    "sqrt_unit",
    "SequenceTable",
    "A_k_table",
    "B_C_tables",
    "D3_table",
    "apery_B_table",
    "EtaQuotient",
    "FormSpec",
    "build_form",
    "dim_cusp_forms",
    "expand_eta_quotient",
    "verify_identity",
    "InstanceRecord",
    "VerificationReport",
    "cornacchia",
    "hecke_check",
    "three_term_check",
    "transfer_coefficients",
]
