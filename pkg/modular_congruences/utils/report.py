from dataclasses import dataclass, field
from typing import Any

import polars as pl


@dataclass
class InstanceRecord:
    """
    One check inside a family.

    A modulus of 0 marks an exact equality rather than a congruence.
    """

    desc: str
    status: bool
    witness: tuple[int, ...] = ()
    modulus: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "desc": self.desc,
            "status": "pass" if self.status else "fail",
            "witness": [str(w) for w in self.witness],
            "modulus": str(self.modulus),
        }


@dataclass
class VerificationReport:
    family: str
    params: dict[str, Any]
    instances: list[InstanceRecord] = field(default_factory=list)

    def add(
        self,
        desc: str,
        status: bool,
        witness: tuple[int, ...] = (),
        modulus: int = 0,
    ) -> InstanceRecord:
        record = InstanceRecord(desc, bool(status), tuple(witness), modulus)
        self.instances.append(record)
        return record

    def extend(self, other: "VerificationReport") -> None:
        self.instances.extend(other.instances)

    @property
    def summary(self) -> dict[str, int]:
        passed = sum(1 for record in self.instances if record.status)
        return {"pass": passed, "fail": len(self.instances) - passed}

    @property
    def passed(self) -> bool:
        return self.summary["fail"] == 0

    @property
    def failures(self) -> list[InstanceRecord]:
        return [record for record in self.instances if not record.status]

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "params": self.params,
            "instances": [record.to_dict() for record in self.instances],
            "summary": self.summary,
        }

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "family": [self.family] * len(self.instances),
                "desc": [record.desc for record in self.instances],
                "status": [
                    "pass" if record.status else "fail" for record in self.instances
                ],
                "witness": [
                    " ".join(str(w) for w in record.witness)
                    for record in self.instances
                ],
                "modulus": [str(record.modulus) for record in self.instances],
            },
            schema={
                "family": pl.String,
                "desc": pl.String,
                "status": pl.String,
                "witness": pl.String,
                "modulus": pl.String,
            },
        )

    def to_text(self, show_passing: bool = False) -> str:
        summary = self.summary
        lines = [f"{self.family}: pass={summary['pass']} fail={summary['fail']}"]
        for record in self.instances:
            if record.status and not show_passing:
                continue
            witness = " ".join(str(w) for w in record.witness)
            status = "pass" if record.status else "FAIL"
            lines.append(
                f"  [{status}] {record.desc} witness=({witness}) mod {record.modulus}"
            )
        return "\n".join(lines)
