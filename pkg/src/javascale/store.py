"""Persistence for facts archives and the per-project metrics table.

The archive is a line-oriented, length-prefixed record file: a header line
with the format version, a project-count line, then one record per project
whose payload length is stated up front so truncation is detectable.  No
database engine; readers rebuild in-memory indexes from the rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    ArchiveIntegrityError,
    DuplicateProjectError,
    UnsupportedVersionError,
)
from .facts import EntityKind, FactRelation, ProjectFacts, RelationKind, SourceEntity
from .metrics import METRIC_COLUMNS, ProjectMetrics

ARCHIVE_VERSION = 1
_MAGIC = "JSCALE-FACTS"


@dataclass
class FactsArchive:
    version: int = ARCHIVE_VERSION
    projects: list[ProjectFacts] = field(default_factory=list)

    def __post_init__(self) -> None:
        ids = [p.project_id for p in self.projects]
        if len(ids) != len(set(ids)):
            dupes = sorted({x for x in ids if ids.count(x) > 1})
            raise DuplicateProjectError(f"duplicate project ids: {dupes}")


def _project_payload(p: ProjectFacts) -> str:
    return json.dumps(
        {
            "project_id": p.project_id,
            "sloc": p.sloc,
            "parse_warning_count": p.parse_warning_count,
            "warnings": p.warnings,
            "entities": [
                [e.entity_id, e.fqn, e.kind.value, e.file, e.line]
                for e in p.entities
            ],
            "relations": [[r.source, r.kind.value, r.target] for r in p.relations],
        },
        separators=(",", ":"),
        sort_keys=True,
        ensure_ascii=False,
    )


def _project_from_payload(data: dict) -> ProjectFacts:
    pid = data["project_id"]
    return ProjectFacts(
        project_id=pid,
        sloc=data["sloc"],
        parse_warning_count=data.get("parse_warning_count", 0),
        warnings=list(data.get("warnings", [])),
        entities=[
            SourceEntity(
                entity_id=eid,
                fqn=fqn,
                kind=EntityKind(kind),
                project_id=pid,
                file=file,
                line=line,
            )
            for eid, fqn, kind, file, line in data["entities"]
        ],
        relations=[
            FactRelation(source=s, kind=RelationKind(k), target=t)
            for s, k, t in data["relations"]
        ],
    )


def write_facts(archive: FactsArchive, path: str | Path) -> None:
    """Write an archive; two writes of equal content are byte-identical."""
    lines = [f"{_MAGIC} {archive.version}", str(len(archive.projects))]
    for project in archive.projects:
        payload = _project_payload(project)
        lines.append(f"{len(payload.encode('utf-8'))} {payload}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_facts(path: str | Path) -> FactsArchive:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if not lines or not lines[0].startswith(_MAGIC + " "):
        raise ArchiveIntegrityError(f"{path}: not a facts archive")
    try:
        version = int(lines[0][len(_MAGIC) + 1 :])
    except ValueError as exc:
        raise ArchiveIntegrityError(f"{path}: bad version line") from exc
    if version != ARCHIVE_VERSION:
        raise UnsupportedVersionError(
            f"{path}: archive version {version}, reader supports {ARCHIVE_VERSION}"
        )
    try:
        count = int(lines[1])
    except (IndexError, ValueError) as exc:
        raise ArchiveIntegrityError(f"{path}: missing project count") from exc
    projects: list[ProjectFacts] = []
    for lineno in range(2, 2 + count):
        if lineno >= len(lines):
            raise ArchiveIntegrityError(f"{path}: truncated at record {lineno - 1}")
        line = lines[lineno]
        try:
            size_text, payload = line.split(" ", 1)
            size = int(size_text)
        except ValueError as exc:
            raise ArchiveIntegrityError(f"{path}: bad record at line {lineno + 1}") from exc
        if len(payload.encode("utf-8")) != size:
            raise ArchiveIntegrityError(
                f"{path}: record length mismatch at line {lineno + 1}"
            )
        projects.append(_project_from_payload(json.loads(payload)))
    return FactsArchive(version=version, projects=projects)


# ---------------------------------------------------------------------------
# Metrics table
# ---------------------------------------------------------------------------


def export_metrics_table(metrics: list[ProjectMetrics], path: str | Path) -> None:
    """Write the per-project metrics CSV, rows sorted by project id."""
    if not metrics:
        raise ValueError("metrics list must be non-empty")
    ids = [m.project_id for m in metrics]
    if len(ids) != len(set(ids)):
        dupes = sorted({x for x in ids if ids.count(x) > 1})
        raise DuplicateProjectError(f"duplicate project ids in export: {dupes}")
    rows = [",".join(METRIC_COLUMNS)]
    for m in sorted(metrics, key=lambda m: m.project_id):
        rows.append(",".join(str(getattr(m, col)) for col in METRIC_COLUMNS))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def read_metrics_table(path: str | Path) -> list[ProjectMetrics]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ArchiveIntegrityError(f"{path}: empty metrics table")
    header = lines[0].split(",")
    if header != METRIC_COLUMNS:
        raise ArchiveIntegrityError(f"{path}: unexpected metrics table header")
    out: list[ProjectMetrics] = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(METRIC_COLUMNS):
            raise ArchiveIntegrityError(f"{path}: bad row {ln!r}")
        kwargs = {"project_id": cells[0]}
        for name, cell in zip(METRIC_COLUMNS[1:], cells[1:]):
            kwargs[name] = int(cell)
        out.append(ProjectMetrics(**kwargs))
    return out
