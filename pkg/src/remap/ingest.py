"""Adapters that turn external clone-detector reports into candidate pairs.

Two formats ship: the generic JSONL interchange format (one pair per line,
fragments given as file/line spans or method keys) and NiCad's XML clone
report. Everything else is bridged by converting to the generic format.
Fragments bind to methods by maximal line-overlap (see match_fragment).
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .extractor import match_fragment
from .prefilter import CandidatePair
from .records import MethodRecord, ProjectSnapshot, SourceSpan

FORMAT_VERSION = 1


class IngestError(RuntimeError):
    pass


@dataclass
class IngestStats:
    lines: int = 0
    resolved: int = 0
    unresolved: int = 0
    malformed: int = 0
    duplicates: int = 0
    same_project: int = 0
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "lines": self.lines,
            "resolved": self.resolved,
            "unresolved": self.unresolved,
            "malformed": self.malformed,
            "duplicates": self.duplicates,
            "same_project": self.same_project,
        }


def _normalize_path(path: str, snapshot: ProjectSnapshot) -> str | None:
    """Map a reported file path onto a snapshot-relative path.

    Tries the path as given, strips the snapshot root when the report uses
    absolute paths, and falls back to an unambiguous suffix match.
    """
    p = path.replace("\\", "/")
    while p.startswith("./"):
        p = p[2:]
    if snapshot.in_file(p):
        return p
    root = Path(snapshot.root_path).as_posix().rstrip("/") + "/"
    if p.startswith(root):
        rel = p[len(root):]
        if snapshot.in_file(rel):
            return rel
    candidates = [
        f for f in snapshot.files()
        if p == f or p.endswith("/" + f)
    ]
    if len(candidates) == 1:
        return candidates[0]
    return None


def _resolve_fragment(frag: dict, snapshot: ProjectSnapshot) -> MethodRecord | None:
    if "key" in frag:
        return snapshot.resolve_key(frag["key"])
    path = _normalize_path(frag["file"], snapshot)
    if path is None:
        return None
    span = SourceSpan(path, int(frag["start"]), int(frag["end"]))
    return match_fragment(snapshot, span)


def _fragment_dict_ok(frag) -> bool:
    if not isinstance(frag, dict):
        return False
    if "key" in frag:
        return isinstance(frag["key"], str)
    return all(k in frag for k in ("file", "start", "end"))


def ingest_generic(
    path: str | Path, left: ProjectSnapshot, right: ProjectSnapshot
) -> tuple[list[CandidatePair], IngestStats]:
    """Read generic JSONL pair reports and bind fragments to records.

    Malformed lines are skipped with a diagnostic; more than 50% unresolved
    fragments is a hard error (the report likely targets other snapshots).
    """
    stats = IngestStats()
    pairs: dict[tuple[str, str], CandidatePair] = {}
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            stats.lines += 1
            try:
                obj = json.loads(line)
                if not (_fragment_dict_ok(obj.get("left")) and _fragment_dict_ok(obj.get("right"))):
                    raise ValueError("missing left/right fragment fields")
            except (json.JSONDecodeError, ValueError, AttributeError) as exc:
                stats.malformed += 1
                stats.diagnostics.append(f"line {lineno}: {exc}")
                continue
            detector = obj.get("detector", "unknown")
            lrec = _resolve_fragment(obj["left"], left)
            rrec = _resolve_fragment(obj["right"], right)
            if lrec is None or rrec is None:
                # reports do not always orient pairs; try the swap
                lrec2 = _resolve_fragment(obj["right"], left)
                rrec2 = _resolve_fragment(obj["left"], right)
                if lrec2 is not None and rrec2 is not None:
                    lrec, rrec = lrec2, rrec2
            if lrec is None or rrec is None:
                stats.unresolved += 1
                stats.diagnostics.append(f"line {lineno}: unresolved fragment")
                continue
            stats.resolved += 1
            key = (lrec.id, rrec.id)
            if key in pairs:
                stats.duplicates += 1
                continue
            pairs[key] = CandidatePair(lrec.id, rrec.id, detector)
    if stats.lines > 0 and stats.unresolved > 0.5 * (stats.unresolved + stats.resolved):
        raise IngestError(
            f"{stats.unresolved} of {stats.unresolved + stats.resolved} fragments "
            f"unresolved; report probably does not match these snapshots"
        )
    out = sorted(pairs.values(), key=lambda p: (p.left, p.right))
    return out, stats


def _which_side(path: str, left: ProjectSnapshot, right: ProjectSnapshot):
    """Resolve a path against both snapshots, trusting the root prefix first.

    The two trees often share relative layouts, so a path that sits under
    exactly one snapshot root is resolved only against that side.
    """
    p = path.replace("\\", "/")
    lroot = Path(left.root_path).as_posix().rstrip("/") + "/"
    rroot = Path(right.root_path).as_posix().rstrip("/") + "/"
    under_left = p.startswith(lroot)
    under_right = p.startswith(rroot)
    if under_left and not under_right:
        return _normalize_path(p, left), None
    if under_right and not under_left:
        return None, _normalize_path(p, right)
    return _normalize_path(p, left), _normalize_path(p, right)


def ingest_nicad_xml(
    path: str | Path, left: ProjectSnapshot, right: ProjectSnapshot
) -> tuple[list[CandidatePair], IngestStats]:
    """Read a NiCad clone-pair XML report (<clone><source .../></clone>).

    Pairs with both fragments inside one project are dropped (counted), as
    only cross-project pairs are mapping candidates. Malformed XML is a
    hard error.
    """
    stats = IngestStats()
    try:
        tree = ET.parse(str(path))
    except ET.ParseError as exc:
        raise IngestError(f"malformed NiCad XML: {exc}") from exc
    pairs: dict[tuple[str, str], CandidatePair] = {}
    for clone in tree.getroot().iter("clone"):
        sources = clone.findall("source")
        if len(sources) != 2:
            stats.malformed += 1
            continue
        stats.lines += 1
        frags = []
        try:
            for src in sources:
                frags.append(
                    (src.attrib["file"], int(src.attrib["startline"]), int(src.attrib["endline"]))
                )
        except (KeyError, ValueError):
            stats.malformed += 1
            continue
        sides = []
        for f, s, e in frags:
            lp, rp = _which_side(f, left, right)
            sides.append((lp, rp, s, e))
        (l0, r0, s0, e0), (l1, r1, s1, e1) = sides
        if l0 and r1 and not (r0 and l1):
            lrec = match_fragment(left, SourceSpan(l0, s0, e0))
            rrec = match_fragment(right, SourceSpan(r1, s1, e1))
        elif r0 and l1 and not (l0 and r1):
            lrec = match_fragment(left, SourceSpan(l1, s1, e1))
            rrec = match_fragment(right, SourceSpan(r0, s0, e0))
        elif (l0 and l1) or (r0 and r1):
            stats.same_project += 1
            continue
        else:
            stats.unresolved += 1
            continue
        if lrec is None or rrec is None:
            stats.unresolved += 1
            continue
        stats.resolved += 1
        key = (lrec.id, rrec.id)
        if key in pairs:
            stats.duplicates += 1
            continue
        pairs[key] = CandidatePair(lrec.id, rrec.id, "nicad")
    out = sorted(pairs.values(), key=lambda p: (p.left, p.right))
    return out, stats


def load_pairs(path: str | Path) -> list[CandidatePair]:
    """Load key-based pair JSONL previously written by this tool."""
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            out.append(
                CandidatePair(
                    obj["left"]["key"], obj["right"]["key"], obj.get("detector", "unknown")
                )
            )
    return out
