"""Semantic alignment scoring for a method pair.

Per-field similarity is LCS-based: sim = 2*|LCS| / (n+m). Field scores
aggregate into three components,

    simClass        = simClassName + (1 - simClassName) * simClassDoc
    simMethodHeader = delta*simMethodName + eta*simReturnType + phi*simParam
    simOptional     = mean of the present members of
                      {simLocalVar, simMethodDoc, simComment}

and the final score is the weighted sum

    score = alpha*simClass + beta*simMethodHeader + theta*simOptional.

A field is "absent" when both token sequences are empty (0/0). Absent class
doc contributes 0; two empty parameter lists agree on zero arity and score
1; absent optional fields drop out of the mean (all absent -> 0). Ablation
settings override field values after measurement, uniformly for every pair,
so pairs differing only in an ablated field score identically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .lcs import lcs_length
from .normalizer import NormalizedDetails

EPS = 1e-9

ABLATION_MODES = ("ALL", "EXR1", "EXR2", "EXR3", "EXR4")


@dataclass(frozen=True)
class AblationSetting:
    """ALL keeps every signal; EXR1 disables renaming during normalization;
    EXR2 zeroes simLocalVar and simMethodHeader; EXR3 zeroes simMethodDoc
    and simClassDoc; EXR4 zeroes simComment."""

    mode: str = "ALL"

    def __post_init__(self):
        if self.mode not in ABLATION_MODES:
            raise ValueError(f"unknown ablation mode: {self.mode!r}")

    @property
    def disables_renaming(self) -> bool:
        return self.mode == "EXR1"


@dataclass(frozen=True)
class WeightConfig:
    """Component weights; each triple must lie on the unit simplex."""

    alpha: float = 0.5
    beta: float = 0.25
    theta: float = 0.25
    delta: float = 0.5
    eta: float = 0.35
    phi: float = 0.15
    # optional alternative when no optional evidence exists:
    # score = (alpha*simClass + beta*simMethodHeader) / (alpha + beta)
    renormalize_missing_optional: bool = False
    # 0/0 policies: absent class doc contributes this value; two empty
    # parameter lists score this value; absent optional fields either drop
    # out of the mean or count as zero
    absent_class_doc: float = 0.0
    absent_param: float = 1.0
    drop_absent_optional: bool = True

    def __post_init__(self):
        for name in ("alpha", "beta", "theta", "delta", "eta", "phi"):
            v = getattr(self, name)
            if not (0.0 - EPS <= v <= 1.0 + EPS):
                raise ValueError(f"weight {name}={v} outside [0,1]")
        if abs(self.alpha + self.beta + self.theta - 1.0) > EPS:
            raise ValueError("alpha+beta+theta must equal 1")
        if abs(self.delta + self.eta + self.phi - 1.0) > EPS:
            raise ValueError("delta+eta+phi must equal 1")

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "theta": self.theta,
            "delta": self.delta,
            "eta": self.eta,
            "phi": self.phi,
            "renormalize_missing_optional": self.renormalize_missing_optional,
            "absent_class_doc": self.absent_class_doc,
            "absent_param": self.absent_param,
            "drop_absent_optional": self.drop_absent_optional,
        }

    @staticmethod
    def from_dict(d: dict) -> "WeightConfig":
        return WeightConfig(**d)

    @staticmethod
    def load(path: str | Path) -> "WeightConfig":
        return WeightConfig.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class SASBreakdown:
    """Every per-field similarity, the three components, and the score.

    Per-field values are None when the field is absent on both sides.
    """

    sim_class_name: float | None
    sim_class_doc: float | None
    sim_method_name: float | None
    sim_return_type: float | None
    sim_param: float | None
    sim_local_var: float | None
    sim_method_doc: float | None
    sim_comment: float | None
    sim_class: float
    sim_method_header: float
    sim_optional: float
    sas: float
    ablation: str

    def to_dict(self) -> dict:
        return {
            "sim_class_name": self.sim_class_name,
            "sim_class_doc": self.sim_class_doc,
            "sim_method_name": self.sim_method_name,
            "sim_return_type": self.sim_return_type,
            "sim_param": self.sim_param,
            "sim_local_var": self.sim_local_var,
            "sim_method_doc": self.sim_method_doc,
            "sim_comment": self.sim_comment,
            "sim_class": self.sim_class,
            "sim_method_header": self.sim_method_header,
            "sim_optional": self.sim_optional,
            "sas": self.sas,
            "ablation": self.ablation,
        }

    @staticmethod
    def from_dict(d: dict) -> "SASBreakdown":
        return SASBreakdown(**d)


def lcs_sim(s1, s2) -> float | None:
    """2*|LCS|/(n+m), or None when both sequences are empty."""
    n, m = len(s1), len(s2)
    if n + m == 0:
        return None
    return 2.0 * lcs_length(s1, s2) / (n + m)


def _aggregate(
    fields: dict[str, float | None], w: WeightConfig, ablation: AblationSetting
) -> SASBreakdown:
    f = dict(fields)
    if ablation.mode == "EXR3":
        f["class_doc"] = 0.0
        f["method_doc"] = 0.0
    if ablation.mode == "EXR4":
        f["comment"] = 0.0
    if ablation.mode == "EXR2":
        f["local_var"] = 0.0

    cls_name = f["class_name"] if f["class_name"] is not None else 0.0
    cls_doc = f["class_doc"] if f["class_doc"] is not None else w.absent_class_doc
    sim_class = cls_name + (1.0 - cls_name) * cls_doc

    m_name = f["method_name"] if f["method_name"] is not None else 0.0
    r_type = f["return_type"] if f["return_type"] is not None else 0.0
    param = f["param"] if f["param"] is not None else w.absent_param  # zero-arity agreement
    sim_header = w.delta * m_name + w.eta * r_type + w.phi * param
    if ablation.mode == "EXR2":
        sim_header = 0.0

    if w.drop_absent_optional:
        optional = [f[k] for k in ("local_var", "method_doc", "comment") if f[k] is not None]
    else:
        optional = [f[k] if f[k] is not None else 0.0 for k in ("local_var", "method_doc", "comment")]
    sim_optional = math.fsum(optional) / len(optional) if optional else 0.0

    has_optional = bool(optional)
    if w.renormalize_missing_optional and not has_optional:
        score = (w.alpha * sim_class + w.beta * sim_header) / (w.alpha + w.beta)
    else:
        score = w.alpha * sim_class + w.beta * sim_header + w.theta * sim_optional
    return SASBreakdown(
        sim_class_name=f["class_name"],
        sim_class_doc=f["class_doc"],
        sim_method_name=f["method_name"],
        sim_return_type=f["return_type"],
        sim_param=f["param"],
        sim_local_var=f["local_var"],
        sim_method_doc=f["method_doc"],
        sim_comment=f["comment"],
        sim_class=sim_class,
        sim_method_header=sim_header,
        sim_optional=sim_optional,
        sas=score,
        ablation=ablation.mode,
    )


def components(
    d1: NormalizedDetails,
    d2: NormalizedDetails,
    w: WeightConfig | None = None,
    ablation: AblationSetting | None = None,
) -> SASBreakdown:
    """Per-field LCS similarities aggregated into the score breakdown."""
    w = w or WeightConfig()
    ablation = ablation or AblationSetting()
    fields = {
        "class_name": lcs_sim(d1.class_name, d2.class_name),
        "class_doc": lcs_sim(d1.class_doc, d2.class_doc),
        "method_name": lcs_sim(d1.method_name, d2.method_name),
        "return_type": lcs_sim(d1.return_type, d2.return_type),
        "param": lcs_sim(d1.params, d2.params),
        "local_var": lcs_sim(d1.local_vars, d2.local_vars),
        "method_doc": lcs_sim(d1.method_doc, d2.method_doc),
        "comment": lcs_sim(d1.comments, d2.comments),
    }
    return _aggregate(fields, w, ablation)


def sas(breakdown: SASBreakdown, w: WeightConfig | None = None) -> float:
    """Recompute the weighted sum from an existing breakdown's components."""
    w = w or WeightConfig()
    return w.alpha * breakdown.sim_class + w.beta * breakdown.sim_method_header + w.theta * breakdown.sim_optional
