"""Core data records shared by the whole pipeline.

A ProjectSnapshot is the parsed view of one Java source tree: every concrete
method as a MethodRecord plus a ClassRecord index. Snapshots are written as
JSON Lines (one method per line) with a sidecar JSON file holding project
metadata and the class index, so every later stage can run from files alone.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

ROLE_ORIGINAL = "original"
ROLE_REDESIGNED = "redesigned"


@dataclass(frozen=True)
class SourceSpan:
    """Inclusive 1-based line range within a file."""

    file_path: str
    start_line: int
    end_line: int

    def __post_init__(self):
        if self.start_line > self.end_line:
            raise ValueError(f"invalid span {self.start_line}..{self.end_line}")

    @property
    def line_count(self) -> int:
        return self.end_line - self.start_line + 1

    def jaccard(self, other: "SourceSpan") -> float:
        """Line-range Jaccard overlap; 0.0 when files differ."""
        if self.file_path != other.file_path:
            return 0.0
        lo = max(self.start_line, other.start_line)
        hi = min(self.end_line, other.end_line)
        inter = max(0, hi - lo + 1)
        if inter == 0:
            return 0.0
        union = self.line_count + other.line_count - inter
        return inter / union


@dataclass(frozen=True)
class ClassRecord:
    qualified_name: str
    class_doc: str
    file_path: str
    kind: str  # class | enum | interface | record

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MethodRecord:
    """All per-method details later stages need.

    ``id`` is the stable key: qualified class, method name, parameter-type
    list, and line span, e.g. ``pkg.Cls#get(String,int):12-20``.
    """

    class_name: str
    method_name: str
    return_type: str
    params: tuple[tuple[str, str], ...]  # (type text, name) in declaration order
    local_vars: tuple[tuple[str, str], ...]
    method_doc: str
    inline_comments: tuple[str, ...]
    span: SourceSpan
    body_text: str
    is_test: bool

    @property
    def id(self) -> str:
        types = ",".join(t for t, _ in self.params)
        return f"{self.class_name}#{self.method_name}({types}):{self.span.start_line}-{self.span.end_line}"

    @property
    def signature_key(self) -> str:
        """Span-less key, usable by detector reports that do not know spans."""
        types = ",".join(t for t, _ in self.params)
        return f"{self.class_name}#{self.method_name}({types})"

    @property
    def loc(self) -> int:
        return self.span.line_count

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "class_name": self.class_name,
            "method_name": self.method_name,
            "return_type": self.return_type,
            "params": [list(p) for p in self.params],
            "local_vars": [list(v) for v in self.local_vars],
            "method_doc": self.method_doc,
            "inline_comments": list(self.inline_comments),
            "span": {
                "file_path": self.span.file_path,
                "start_line": self.span.start_line,
                "end_line": self.span.end_line,
            },
            "loc": self.loc,
            "body_text": self.body_text,
            "is_test": self.is_test,
        }

    @staticmethod
    def from_dict(d: dict) -> "MethodRecord":
        span = SourceSpan(
            d["span"]["file_path"], d["span"]["start_line"], d["span"]["end_line"]
        )
        return MethodRecord(
            class_name=d["class_name"],
            method_name=d["method_name"],
            return_type=d["return_type"],
            params=tuple((p[0], p[1]) for p in d["params"]),
            local_vars=tuple((v[0], v[1]) for v in d["local_vars"]),
            method_doc=d["method_doc"],
            inline_comments=tuple(d["inline_comments"]),
            span=span,
            body_text=d["body_text"],
            is_test=bool(d["is_test"]),
        )


@dataclass
class ExtractionSummary:
    files_seen: int = 0
    files_parsed: int = 0
    failed_files: list = field(default_factory=list)  # (path, reason) pairs
    methods: int = 0
    classes: int = 0

    def to_dict(self) -> dict:
        return {
            "files_seen": self.files_seen,
            "files_parsed": self.files_parsed,
            "failed_files": [list(f) for f in self.failed_files],
            "methods": self.methods,
            "classes": self.classes,
        }


class ProjectSnapshot:
    """Immutable parsed view of one project tree.

    ``role`` must be "original" or "redesigned"; scoring resolves renaming
    rules against it. Records are kept sorted by (file path, start line) so
    repeated extraction of the same tree is byte-identical.
    """

    def __init__(
        self,
        name: str,
        role: str,
        root_path: str,
        records: list[MethodRecord],
        classes: list[ClassRecord],
        summary: ExtractionSummary | None = None,
    ):
        if role not in (ROLE_ORIGINAL, ROLE_REDESIGNED):
            raise ValueError(f"unknown project role: {role!r}")
        self.name = name
        self.role = role
        self.root_path = root_path
        self.records = sorted(records, key=lambda r: (r.span.file_path, r.span.start_line))
        self.class_index = {c.qualified_name: c for c in classes}
        for rec in self.records:
            if rec.class_name not in self.class_index:
                raise ValueError(
                    f"record {rec.id} names class {rec.class_name!r} missing from the class index"
                )
        self.summary = summary or ExtractionSummary()
        self._by_id = {r.id: r for r in self.records}
        self._by_file: dict[str, list[MethodRecord]] = {}
        self._by_sig: dict[str, list[MethodRecord]] = {}
        self._by_short: dict[str, list[MethodRecord]] = {}
        for r in self.records:
            self._by_file.setdefault(r.span.file_path, []).append(r)
            self._by_sig.setdefault(r.signature_key, []).append(r)
            self._by_short.setdefault(f"{r.class_name}#{r.method_name}", []).append(r)

    @property
    def project_id(self) -> str:
        return f"{self.role}:{self.name}"

    def __len__(self) -> int:
        return len(self.records)

    def get(self, record_id: str) -> MethodRecord | None:
        return self._by_id.get(record_id)

    def class_of(self, record: MethodRecord) -> ClassRecord:
        return self.class_index[record.class_name]

    def in_file(self, file_path: str) -> list[MethodRecord]:
        return self._by_file.get(file_path, [])

    def files(self) -> list[str]:
        return list(self._by_file)

    def resolve_key(self, key: str) -> MethodRecord | None:
        """Resolve a full id, a signature key, or a class#method key.

        Returns None when absent or ambiguous.
        """
        rec = self._by_id.get(key)
        if rec is not None:
            return rec
        for index in (self._by_sig, self._by_short):
            matches = index.get(key)
            if matches is not None:
                return matches[0] if len(matches) == 1 else None
        return None

    def to_sidecar_dict(self) -> dict:
        return {
            "name": self.name,
            "role": self.role,
            "root_path": self.root_path,
            "classes": [c.to_dict() for c in sorted(self.class_index.values(), key=lambda c: c.qualified_name)],
            "summary": self.summary.to_dict(),
        }


def sidecar_path(records_path: Path) -> Path:
    if records_path.suffix == ".jsonl":
        return records_path.with_suffix(".classes.json")
    return records_path.with_name(records_path.name + ".classes.json")


def save_snapshot(snapshot: ProjectSnapshot, out: Path) -> None:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8") as fh:
        for rec in snapshot.records:
            fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")
    with sidecar_path(out).open("w", encoding="utf-8") as fh:
        json.dump(snapshot.to_sidecar_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_snapshot(records_path: Path) -> ProjectSnapshot:
    records_path = Path(records_path)
    side = sidecar_path(records_path)
    if not records_path.exists():
        raise FileNotFoundError(f"snapshot not found: {records_path}")
    if not side.exists():
        raise FileNotFoundError(f"snapshot sidecar not found: {side}")
    records = []
    with records_path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(MethodRecord.from_dict(json.loads(line)))
    meta = json.loads(side.read_text(encoding="utf-8"))
    classes = [
        ClassRecord(c["qualified_name"], c["class_doc"], c["file_path"], c["kind"])
        for c in meta["classes"]
    ]
    summary = ExtractionSummary(**{
        "files_seen": meta["summary"]["files_seen"],
        "files_parsed": meta["summary"]["files_parsed"],
        "failed_files": [tuple(f) for f in meta["summary"]["failed_files"]],
        "methods": meta["summary"]["methods"],
        "classes": meta["summary"]["classes"],
    })
    return ProjectSnapshot(
        name=meta["name"],
        role=meta["role"],
        root_path=meta["root_path"],
        records=records,
        classes=classes,
        summary=summary,
    )
