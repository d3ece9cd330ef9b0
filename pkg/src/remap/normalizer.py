"""Redesign-aware normalization: renaming rules, doc cleanup, tokenization.

Renaming rules rewrite project-specific vocabulary so that the same concept
spells the same on both sides before similarity is measured (e.g. the
original project's setters match the redesigned project's withers). Rules
are ordered; compound identifiers are rewritten before their simpler
substrings so "UnitBox" is captured by the Box rule and never mangled into
"StmtBox" by the plain Unit rule.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .records import ROLE_ORIGINAL, ROLE_REDESIGNED, ClassRecord, MethodRecord

SCOPE_ALL = "all_details"
SCOPE_METHOD_NAME = "method_name_only"

# field kinds, used for rule scope gating
FIELD_CLASS_NAME = "class_name"
FIELD_CLASS_DOC = "class_doc"
FIELD_METHOD_NAME = "method_name"
FIELD_RETURN_TYPE = "return_type"
FIELD_PARAM = "param"
FIELD_LOCAL_VAR = "local_var"
FIELD_METHOD_DOC = "method_doc"
FIELD_COMMENT = "comment"

DOC_FIELDS = frozenset({FIELD_CLASS_DOC, FIELD_METHOD_DOC, FIELD_COMMENT})

DEFAULT_CONTRACTIONS = {
    "doesn't": "does not",
    "don't": "do not",
    "can't": "can not",
    "won't": "will not",
    "isn't": "is not",
    "aren't": "are not",
    "couldn't": "could not",
    "shouldn't": "should not",
}


@dataclass(frozen=True)
class RenameRule:
    scope: str  # all_details | method_name_only
    target_project: str  # original | redesigned
    pattern: str
    replacement: str
    order: int

    def __post_init__(self):
        if self.scope not in (SCOPE_ALL, SCOPE_METHOD_NAME):
            raise ValueError(f"unknown rule scope: {self.scope!r}")
        if self.target_project not in (ROLE_ORIGINAL, ROLE_REDESIGNED):
            raise ValueError(f"unknown target project: {self.target_project!r}")
        re.compile(self.pattern)  # fail fast on bad patterns

    def applies_to(self, field: str, record_project: str) -> bool:
        if record_project != self.target_project:
            return False
        return self.scope == SCOPE_ALL or field == FIELD_METHOD_NAME


class RuleSet:
    """Ordered renaming rules for one project pair."""

    def __init__(self, name: str, rules: list[RenameRule]):
        self.name = name
        self.rules = sorted(rules, key=lambda r: r.order)
        self._compiled = [(r, re.compile(r.pattern)) for r in self.rules]

    def apply(self, text: str, field: str, record_project: str) -> str:
        for rule, rx in self._compiled:
            if rule.applies_to(field, record_project):
                text = rx.sub(rule.replacement, text)
        return text

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "rules": [
                {
                    "scope": r.scope,
                    "target": r.target_project,
                    "pattern": r.pattern,
                    "replacement": r.replacement,
                    "order": r.order,
                }
                for r in self.rules
            ],
        }

    @staticmethod
    def from_dict(d: dict) -> "RuleSet":
        rules = [
            RenameRule(
                scope=r["scope"],
                target_project=r["target"],
                pattern=r["pattern"],
                replacement=r["replacement"],
                order=r["order"],
            )
            for r in d["rules"]
        ]
        return RuleSet(d.get("name", "custom"), rules)

    @staticmethod
    def load(path: str | Path) -> "RuleSet":
        return RuleSet.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


EMPTY_RULESET = RuleSet("none", [])

# Bundled defaults. Box compounds come before the bare Unit rule on purpose.
SOOT_SOOTUP_RULES = RuleSet(
    "soot-sootup-default",
    [
        RenameRule(SCOPE_ALL, ROLE_ORIGINAL, r"(Unit|Use|Value|Def)Box(?:e(?=s))?", r"\1", 1),
        RenameRule(SCOPE_ALL, ROLE_ORIGINAL, r"Unit", "Stmt", 2),
        RenameRule(SCOPE_ALL, ROLE_ORIGINAL, r"BodyTransformer", "BodyInterceptor", 3),
        RenameRule(SCOPE_ALL, ROLE_REDESIGNED, r"BasicBlock", "Block", 4),
        RenameRule(SCOPE_METHOD_NAME, ROLE_ORIGINAL, r"\bset([A-Z]\w*)", r"with\1", 5),
    ],
)

FINDBUGS_SPOTBUGS_RULES = RuleSet(
    "findbugs-spotbugs-default",
    [
        RenameRule(SCOPE_ALL, ROLE_REDESIGNED, r"\bConst\b", "Constants", 1),
        RenameRule(SCOPE_ALL, ROLE_REDESIGNED, r"spotbugsTestCases", "findbugsTestCases", 2),
    ],
)

BUNDLED_RULESETS = {
    "none": EMPTY_RULESET,
    "soot-sootup": SOOT_SOOTUP_RULES,
    "findbugs-spotbugs": FINDBUGS_SPOTBUGS_RULES,
}


def resolve_ruleset(spec: str | Path | RuleSet | None) -> RuleSet:
    """Accept a bundled name, a JSON file path, or an already-built RuleSet."""
    if spec is None:
        return EMPTY_RULESET
    if isinstance(spec, RuleSet):
        return spec
    if isinstance(spec, str) and spec in BUNDLED_RULESETS:
        return BUNDLED_RULESETS[spec]
    return RuleSet.load(spec)


def apply_rules(text: str, field: str, record_project: str, rules: RuleSet) -> str:
    """Apply every applicable rule once, in order, as a global substitution."""
    return rules.apply(text, field, record_project)


_INLINE_TAG = re.compile(r"\{@\w+\s*([^{}]*)\}")
_HTML_TAG = re.compile(r"</?[A-Za-z][^<>]*>")
_HTML_ENTITY = re.compile(r"&#?\w+;")
_URL = re.compile(r"(?:https?://|www\.)\S+")


def normalize_doc(text: str, contractions: dict[str, str] | None = None) -> str:
    """Reduce a docstring/comment to comparable description text.

    Inline doc tags keep their payload ({@link Path} -> Path), HTML markup,
    URLs and TODO lines are dropped, and contractions are expanded.
    """
    if not text:
        return ""
    contractions = DEFAULT_CONTRACTIONS if contractions is None else contractions
    # inline tags may nest one level ({@code {@link X}}), so iterate
    prev = None
    while prev != text:
        prev = text
        text = _INLINE_TAG.sub(r"\1", text)
    text = _HTML_TAG.sub(" ", text)
    text = _HTML_ENTITY.sub(" ", text)
    lines = [ln for ln in text.split("\n") if not ln.strip().lower().startswith("todo")]
    text = "\n".join(lines)
    text = _URL.sub(" ", text)
    for short, full in contractions.items():
        text = re.sub(re.escape(short), full, text, flags=re.IGNORECASE)
    return text


_WORD_SEGMENT = re.compile(r"[A-Z]+[0-9]*(?![a-z])|[A-Za-z][a-z0-9]*|[0-9]+")


def tokenize(text: str) -> list[str]:
    """Punctuation to whitespace, camel-case split, lowercase.

    Acronym runs split before a following word ("XMLParser" -> xml, parser);
    digits stay attached to their segment ("utf8" stays one token).
    """
    return [seg.lower() for seg in _WORD_SEGMENT.findall(text)]


@dataclass(frozen=True)
class NormalizedDetails:
    """Token sequences for every method detail used by the score."""

    class_name: tuple[str, ...]
    class_doc: tuple[str, ...]
    method_name: tuple[str, ...]
    return_type: tuple[str, ...]
    params: tuple[str, ...]
    local_vars: tuple[str, ...]
    method_doc: tuple[str, ...]
    comments: tuple[str, ...]


def _norm_field(text: str, field: str, project: str, rules: RuleSet) -> list[str]:
    text = apply_rules(text, field, project, rules)
    if field in DOC_FIELDS:
        text = normalize_doc(text)
    return tokenize(text)


def normalize_record(
    record: MethodRecord,
    cls: ClassRecord,
    rules: RuleSet,
    record_project: str,
) -> NormalizedDetails:
    """Rules -> doc cleanup -> tokenization for every detail of one method.

    Params and local variables are flattened type-then-name in declaration
    order; inline comments are concatenated in source order.
    """
    params: list[str] = []
    for ptype, pname in record.params:
        params.extend(_norm_field(ptype, FIELD_PARAM, record_project, rules))
        params.extend(_norm_field(pname, FIELD_PARAM, record_project, rules))
    local_vars: list[str] = []
    for vtype, vname in record.local_vars:
        local_vars.extend(_norm_field(vtype, FIELD_LOCAL_VAR, record_project, rules))
        local_vars.extend(_norm_field(vname, FIELD_LOCAL_VAR, record_project, rules))
    comments: list[str] = []
    for comment in record.inline_comments:
        comments.extend(_norm_field(comment, FIELD_COMMENT, record_project, rules))
    return NormalizedDetails(
        class_name=tuple(_norm_field(cls.qualified_name, FIELD_CLASS_NAME, record_project, rules)),
        class_doc=tuple(_norm_field(cls.class_doc, FIELD_CLASS_DOC, record_project, rules)),
        method_name=tuple(_norm_field(record.method_name, FIELD_METHOD_NAME, record_project, rules)),
        return_type=tuple(_norm_field(record.return_type, FIELD_RETURN_TYPE, record_project, rules)),
        params=tuple(params),
        local_vars=tuple(local_vars),
        method_doc=tuple(_norm_field(record.method_doc, FIELD_METHOD_DOC, record_project, rules)),
        comments=tuple(comments),
    )
