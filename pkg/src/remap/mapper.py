"""Score candidate pairs, filter by threshold, emit ranked mapping reports."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .normalizer import EMPTY_RULESET, RuleSet, normalize_record
from .prefilter import CandidatePair
from .records import ProjectSnapshot
from .simcore import AblationSetting, SASBreakdown, WeightConfig, components

TASK_GENUINE_CLONE = "genuine_clone"
TASK_CODE_MAPPING = "code_mapping"

# default thresholds per (redesign profile, task); heavy redesign pairs use
# lower cutoffs than lightly redesigned ones
DEFAULT_THRESHOLDS = {
    ("heavy-redesign", TASK_GENUINE_CLONE): 0.5,
    ("heavy-redesign", TASK_CODE_MAPPING): 0.6,
    ("light-redesign", TASK_GENUINE_CLONE): 0.6,
    ("light-redesign", TASK_CODE_MAPPING): 0.8,
}


def default_threshold(profile: str, task: str) -> float:
    try:
        return DEFAULT_THRESHOLDS[(profile, task)]
    except KeyError:
        raise ValueError(f"no default threshold for profile={profile!r} task={task!r}")


@dataclass(frozen=True)
class FilterConfig:
    thres_sas: float = 0.5
    task: str = TASK_GENUINE_CLONE
    weights: WeightConfig = field(default_factory=WeightConfig)
    ablation: AblationSetting = field(default_factory=AblationSetting)
    rules: RuleSet = field(default_factory=lambda: EMPTY_RULESET, compare=False, hash=False)

    def __post_init__(self):
        if not 0.0 <= self.thres_sas <= 1.0:
            raise ValueError(f"thres_sas={self.thres_sas} outside [0,1]")
        if self.task not in (TASK_GENUINE_CLONE, TASK_CODE_MAPPING):
            raise ValueError(f"unknown task: {self.task!r}")


@dataclass(frozen=True)
class MappingResult:
    left: str
    right: str
    provenance: str
    breakdown: SASBreakdown
    kept: bool
    rank: int | None  # 1-based among kept pairs by descending score

    @property
    def key(self) -> tuple[str, str]:
        return (self.left, self.right)

    @property
    def sas(self) -> float:
        return self.breakdown.sas

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "provenance": self.provenance,
            "kept": self.kept,
            "rank": self.rank,
            **self.breakdown.to_dict(),
        }


class UnresolvedPairError(RuntimeError):
    pass


def score_pairs(
    pairs: list[CandidatePair],
    left: ProjectSnapshot,
    right: ProjectSnapshot,
    cfg: FilterConfig,
    jobs: int = 1,
) -> list[MappingResult]:
    """Normalize, score, threshold, and rank every candidate pair.

    An id that does not resolve in its snapshot is a hard error (the pairs
    file was produced against different snapshots). Results are ordered by
    (kept first, score descending, pair key), so parallel and serial runs
    are identical.
    """
    rules = EMPTY_RULESET if cfg.ablation.disables_renaming else cfg.rules
    norm_cache_left: dict[str, object] = {}
    norm_cache_right: dict[str, object] = {}

    def normalized(snapshot: ProjectSnapshot, cache: dict, rec_id: str):
        details = cache.get(rec_id)
        if details is None:
            rec = snapshot.get(rec_id)
            if rec is None:
                raise UnresolvedPairError(
                    f"pair id {rec_id!r} not found in snapshot {snapshot.project_id!r}"
                )
            details = normalize_record(rec, snapshot.class_of(rec), rules, snapshot.role)
            cache[rec_id] = details
        return details

    def score_one(pair: CandidatePair) -> tuple[CandidatePair, SASBreakdown]:
        d1 = normalized(left, norm_cache_left, pair.left)
        d2 = normalized(right, norm_cache_right, pair.right)
        return pair, components(d1, d2, cfg.weights, cfg.ablation)

    if jobs > 1:
        # warm the normalization caches serially, then score in parallel;
        # the compiled LCS kernel releases the GIL
        for pair in pairs:
            normalized(left, norm_cache_left, pair.left)
            normalized(right, norm_cache_right, pair.right)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scored = list(pool.map(score_one, pairs))
    else:
        scored = [score_one(p) for p in pairs]

    kept = [(p, b) for p, b in scored if b.sas >= cfg.thres_sas]
    dropped = [(p, b) for p, b in scored if b.sas < cfg.thres_sas]
    kept.sort(key=lambda pb: (-pb[1].sas, pb[0].left, pb[0].right))
    dropped.sort(key=lambda pb: (-pb[1].sas, pb[0].left, pb[0].right))
    results = [
        MappingResult(p.left, p.right, p.provenance, b, True, rank)
        for rank, (p, b) in enumerate(kept, 1)
    ]
    results.extend(
        MappingResult(p.left, p.right, p.provenance, b, False, None) for p, b in dropped
    )
    return results


def summarize(results: list[MappingResult]) -> dict:
    """Orig/Filt/Out% accounting: Out% = 100*(Orig-Filt)/Orig, 0 when empty."""
    orig = len(results)
    filt = sum(1 for r in results if r.kept)
    out_pct = 0.0 if orig == 0 else 100.0 * (orig - filt) / orig
    return {"orig": orig, "filt": filt, "out_pct": round(out_pct, 2)}


def report(results: list[MappingResult], fmt: str = "jsonl") -> str:
    """Serialize results as jsonl, csv, or a summary block."""
    if fmt == "jsonl":
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in results)
    if fmt == "csv":
        buf = io.StringIO()
        fieldnames = [
            "left", "right", "provenance", "kept", "rank", "sas",
            "sim_class", "sim_method_header", "sim_optional",
            "sim_class_name", "sim_class_doc", "sim_method_name",
            "sim_return_type", "sim_param", "sim_local_var",
            "sim_method_doc", "sim_comment", "ablation",
        ]
        writer = csv.DictWriter(buf, fieldnames=fieldnames)
        writer.writeheader()
        for r in results:
            writer.writerow({k: r.to_dict()[k] for k in fieldnames})
        return buf.getvalue()
    if fmt == "summary":
        return json.dumps(summarize(results), sort_keys=True) + "\n"
    raise ValueError(f"unknown report format: {fmt!r}")


def load_results(path: str | Path) -> list[MappingResult]:
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            breakdown = SASBreakdown(
                sim_class_name=d["sim_class_name"],
                sim_class_doc=d["sim_class_doc"],
                sim_method_name=d["sim_method_name"],
                sim_return_type=d["sim_return_type"],
                sim_param=d["sim_param"],
                sim_local_var=d["sim_local_var"],
                sim_method_doc=d["sim_method_doc"],
                sim_comment=d["sim_comment"],
                sim_class=d["sim_class"],
                sim_method_header=d["sim_method_header"],
                sim_optional=d["sim_optional"],
                sas=d["sas"],
                ablation=d["ablation"],
            )
            out.append(
                MappingResult(d["left"], d["right"], d["provenance"], breakdown, d["kept"], d["rank"])
            )
    return out


def save_results(results: list[MappingResult], out: Path, fmt: str = "jsonl") -> None:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report(results, fmt), encoding="utf-8")
