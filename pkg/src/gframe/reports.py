"""Structured pass/fail records for executable checks."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class CheckLine:
    """One named residual with its verdict."""

    name: str
    passed: bool
    residual: float

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "residual": float(self.residual)}


@dataclass
class TheoremReport:
    """Record of one theorem check: hypotheses, then conclusion residuals.

    The conclusion is evaluated only when every hypothesis passes; otherwise
    the status is ``not_applicable``.
    """

    theorem_id: str
    tolerance: float
    seed: int
    hypotheses: list = field(default_factory=list)
    conclusions: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add_hypothesis(self, name: str, passed: bool, residual: float = 0.0) -> None:
        self.hypotheses.append(CheckLine(name, bool(passed), float(residual)))

    def add_conclusion(self, name: str, passed: bool, residual: float = 0.0) -> None:
        self.conclusions.append(CheckLine(name, bool(passed), float(residual)))

    @property
    def hypotheses_pass(self) -> bool:
        return all(line.passed for line in self.hypotheses)

    @property
    def conclusion_passed(self) -> bool:
        return bool(self.conclusions) and all(line.passed for line in self.conclusions)

    @property
    def conclusion_residual(self) -> float:
        return max((line.residual for line in self.conclusions), default=0.0)

    @property
    def status(self) -> str:
        if not self.hypotheses_pass:
            return NOT_APPLICABLE
        return PASS if self.conclusion_passed else FAIL

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "status": self.status,
            "tolerance": float(self.tolerance),
            "seed": int(self.seed),
            "hypotheses": [line.to_dict() for line in self.hypotheses],
            "conclusions": [line.to_dict() for line in self.conclusions],
            "info": self.info,
        }
