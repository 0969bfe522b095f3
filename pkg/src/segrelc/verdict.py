"""Outcome of a verification run."""

from __future__ import annotations

from dataclasses import dataclass, field

VERIFIED = "verified-on-box"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {VERIFIED: 0, REFUTED: 1, INCONCLUSIVE: 2}


@dataclass
class VerificationVerdict:
    status: str
    detail: str = ""
    witness: dict | None = None
    certainty: str | None = None
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in EXIT_CODES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == REFUTED and not self.witness:
            raise ValueError("a refutation needs a concrete witness")

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    @classmethod
    def verified(cls, detail: str = "", **kw) -> "VerificationVerdict":
        return cls(VERIFIED, detail, **kw)

    @classmethod
    def refuted(cls, witness: dict, detail: str = "", **kw) -> "VerificationVerdict":
        return cls(REFUTED, detail, witness, **kw)

    @classmethod
    def inconclusive(cls, detail: str = "", **kw) -> "VerificationVerdict":
        return cls(INCONCLUSIVE, detail, **kw)

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "detail": self.detail,
            "witness": self.witness,
            "certainty": self.certainty,
            "data": self.data,
        }


def combine(verdicts: list[VerificationVerdict], detail: str = "") -> VerificationVerdict:
    """Refuted if any part is refuted, else inconclusive if any part is, else verified."""
    for v in verdicts:
        if v.status == REFUTED:
            return VerificationVerdict.refuted(v.witness, detail or v.detail, data={"parts": [x.as_dict() for x in verdicts]})
    for v in verdicts:
        if v.status == INCONCLUSIVE:
            return VerificationVerdict.inconclusive(detail or v.detail, data={"parts": [x.as_dict() for x in verdicts]})
    return VerificationVerdict.verified(detail, data={"parts": [x.as_dict() for x in verdicts]})
