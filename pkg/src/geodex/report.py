"""Feasibility verdicts and their plain / machine serializations."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .arithmetic import FactoredSpectrum
from .automorphism import PermutationVector

Witness = Union[int, Fraction, str, bool]


class ReasonKind(enum.Enum):
    PARITY = "parity"
    NON_INTEGRAL = "non_integral"
    NEGATIVE = "negative"
    DIVISIBILITY = "divisibility"
    TRACE_MISMATCH = "trace_mismatch"
    COUNTING_CLOSURE = "counting_closure"


class Verdict(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class Reason:
    kind: ReasonKind
    condition: str
    witness: tuple[tuple[str, Witness], ...] = ()

    def get(self, name: str) -> Witness:
        return dict(self.witness)[name]


@dataclass(frozen=True)
class Subject:
    d: int
    k: int
    eps: int | None = None
    pv: PermutationVector | None = None
    case: str | None = None


@dataclass
class FeasibilityReport:
    subject: Subject
    verdict: Verdict
    reasons: list[Reason] = field(default_factory=list)
    spectrum: FactoredSpectrum | None = None
    a: tuple[int, int] | None = None
    alpha_beta: tuple[int, int] | None = None
    details: dict[str, Witness] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is Verdict.INFEASIBLE and not self.reasons:
            raise ValueError("an infeasible report needs at least one reason")

    @property
    def feasible(self) -> bool:
        return self.verdict is Verdict.FEASIBLE

    def has_reason(self, kind: ReasonKind) -> bool:
        return any(r.kind is kind for r in self.reasons)

    def reason(self, kind: ReasonKind) -> Reason:
        for r in self.reasons:
            if r.kind is kind:
                return r
        raise KeyError(kind)


def _jsonable(value: Witness) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    return value


def _plain(value: Witness) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _subject_text(s: Subject) -> str:
    parts = [f"d={s.d}", f"k={s.k}"]
    if s.eps is not None:
        parts.append(f"eps={s.eps}")
    if s.pv is not None:
        parts.append(f"pv=[{s.pv.serialize()}]")
    if s.case:
        parts.append(f"case={s.case}")
    return " ".join(parts)


def to_plain(report: FeasibilityReport) -> str:
    lines = [f"{_subject_text(report.subject)}: {report.verdict.value}"]
    for r in report.reasons:
        wit = " ".join(f"{k}={_plain(v)}" for k, v in r.witness)
        lines.append(f"  reason {r.kind.value} [{r.condition}] {wit}".rstrip())
    if report.a is not None:
        lines.append(f"  a1={report.a[0]} a2={report.a[1]}")
    if report.spectrum is not None:
        lines.append(f"  charpoly {report.spectrum}")
    if report.alpha_beta is not None:
        lines.append(f"  alpha={report.alpha_beta[0]} beta={report.alpha_beta[1]}")
    for key, value in report.details.items():
        lines.append(f"  {key}={_plain(value)}")
    return "\n".join(lines)


def to_machine(report: FeasibilityReport) -> str:
    return json.dumps(to_dict(report), sort_keys=False)


def to_dict(report: FeasibilityReport) -> dict[str, Any]:
    s = report.subject
    subject: dict[str, Any] = {"d": s.d, "k": s.k}
    if s.eps is not None:
        subject["eps"] = s.eps
    if s.pv is not None:
        subject["pv"] = s.pv.serialize()
    if s.case:
        subject["case"] = s.case
    out: dict[str, Any] = {
        "subject": subject,
        "verdict": report.verdict.value,
        "reasons": [
            {
                "kind": r.kind.value,
                "condition": r.condition,
                "witness": {k: _jsonable(v) for k, v in r.witness},
            }
            for r in report.reasons
        ],
    }
    derived: dict[str, Any] = {}
    if report.a is not None:
        derived["a1"], derived["a2"] = report.a
    if report.spectrum is not None:
        derived["spectrum"] = [[p.serialize(), m] for p, m in report.spectrum.factors]
    if report.alpha_beta is not None:
        derived["alpha"], derived["beta"] = report.alpha_beta
    derived.update({k: _jsonable(v) for k, v in report.details.items()})
    if derived:
        out["derived"] = derived
    return out
