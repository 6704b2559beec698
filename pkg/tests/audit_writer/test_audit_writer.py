from modular_congruences.audit_writer import AuditWriter, Heading
from modular_congruences.audit_writer.audit_writer import excel_name
from modular_congruences.utils.report import VerificationReport


def report_with(family: str, *statuses: bool, desc: str = "check") -> VerificationReport:
    report = VerificationReport(family, {"prime_max": 10})
    for status in statuses:
        report.add(desc, status, (1,), 3)
    return report


def test_excel_name():
    assert excel_name("identity.psi-eta") == "identity_psi_eta"
    assert len(excel_name("x" * 40)) == 31


def test_failures_and_warnings_are_counted(tmp_path):
    writer = AuditWriter(str(tmp_path), "audit", "test", include_logger=False)
    writer.add(
        [
            Heading("Congruences", "Heading 2"),
            report_with("cor2", True, True),
            report_with("cor2", True, False),
            report_with("cor1.eq3", True, desc="p=5 m=1 r=1 [truncated-term]"),
        ]
    )
    assert writer.failures == 1
    assert writer.warnings == 1
    assert writer.tables_written == 3
    assert set(writer.worksheets) == {"cor2", "cor1_eq3"}
    writer.commit_audit()
    assert (tmp_path / "audit.docx").exists()
    assert (tmp_path / "audit.xlsx").exists()


def test_document_only(tmp_path):
    writer = AuditWriter(
        str(tmp_path), "audit", "test", include_excel=False, include_logger=False
    )
    writer.add([Heading("Tables", "Heading 3"), "note", report_with("cor2", False)])
    writer.add_info("time", ("start time", "now"))
    writer.add_info("families", "1")
    writer.commit_audit()
    assert writer.info == {"time": {"start time": "now"}, "families": "1"}
    assert writer.failures == 1
    assert writer.tables_written == 0
    assert (tmp_path / "audit.docx").exists()
    assert not (tmp_path / "audit.xlsx").exists()
