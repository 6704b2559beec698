from modular_congruences.audit_writer.audit_writer import (
    AuditWriter,
    Heading,
    StubObject,
)

__all__ = ["AuditWriter", "Heading", "StubObject"]
