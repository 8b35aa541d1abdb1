"""Readers for axial-map connectivity files.

Two formats are understood:

* Prolog fact files made of ground ``connected(a,b,n).`` facts, ``%`` comment
  lines and blank lines. Nothing else in Prolog is interpreted.
* CSV edge lists with columns ``from,to[,weight]`` and an optional header.

Both parsers are total: every line is either accepted, skipped, or reported in
the diagnostics, and the only exception raised is :class:`EmptyInput` when no
edge survives.
"""
from __future__ import annotations

import csv
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

PREDICATE = "connected"

ATOM = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
SPACE_ID = re.compile(r"[A-Za-z0-9_]+\Z")
POSITIVE_INT = re.compile(r"[1-9][0-9]*\Z")
_TERM = re.compile(r"([a-z][a-zA-Z0-9_]*)\s*\((.*)\)\s*\.\Z", re.DOTALL)
_TERM_NO_PERIOD = re.compile(r"([a-z][a-zA-Z0-9_]*)\s*\((.*)\)\s*\Z", re.DOTALL)


class MapFileError(ValueError):
    pass


class EmptyInput(MapFileError):
    def __init__(self, message: str, diagnostics: ParseDiagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class FactLine:
    source: str
    target: str
    multiplicity: int = 1
    line: int = field(default=0, compare=False)
    predicate: str = PREDICATE

    def to_prolog(self) -> str:
        return f"{self.predicate}({self.source},{self.target},{self.multiplicity})."


@dataclass
class ParseDiagnostics:
    """Per-line accounting of a parse.

    ``skipped_comments`` also counts a CSV header row. Every input line lands
    in exactly one of the four buckets, so ``balanced`` always holds.
    """

    total_lines: int = 0
    accepted: int = 0
    skipped_comments: int = 0
    blank: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def balanced(self) -> bool:
        return (
            self.accepted + self.skipped_comments + len(self.errors) + self.blank
            == self.total_lines
        )

    def error(self, lineno: int, message: str) -> None:
        self.errors.append((lineno, f"{message} at line {lineno}"))


def _lines(text: str) -> list[str]:
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def _parse_fact(line: str, strict: bool) -> FactLine | str:
    """Return a FactLine, or an error message for the line."""
    if ":-" in line or line.startswith("?-"):
        return "rules, directives and queries are not supported"
    m = _TERM.match(line)
    if m is None:
        if _TERM_NO_PERIOD.match(line):
            return "missing terminating '.'"
        return "not a ground fact"
    name, body = m.groups()
    if name != PREDICATE:
        return f"unsupported predicate {name!r}"
    if strict and re.search(r"\s", line):
        return "whitespace not allowed in strict mode"
    args = [a.strip() for a in body.split(",")]
    if len(args) != 3:
        return f"arity {len(args)}, expected 3"
    src, dst, mult = args
    for atom in (src, dst):
        if not ATOM.match(atom):
            return f"invalid atom {atom!r}"
    if not POSITIVE_INT.match(mult):
        return f"multiplicity must be a positive integer, got {mult!r}"
    return FactLine(src, dst, int(mult))


def parse_fact_file(text: str, strict: bool = False) -> tuple[list[FactLine], ParseDiagnostics]:
    """Parse ``connected/3`` facts from Prolog source text.

    With ``strict=True`` whitespace inside a fact is rejected.
    """
    diag = ParseDiagnostics()
    facts: list[FactLine] = []
    for lineno, raw in enumerate(_lines(text), start=1):
        diag.total_lines += 1
        line = raw.strip()
        if not line:
            diag.blank += 1
        elif line.startswith("%"):
            diag.skipped_comments += 1
        else:
            result = _parse_fact(line, strict)
            if isinstance(result, FactLine):
                facts.append(FactLine(result.source, result.target,
                                      result.multiplicity, lineno))
                diag.accepted += 1
            else:
                diag.error(lineno, result)
    if not facts:
        raise EmptyInput("no connected/3 facts found", diag)
    return facts, diag


_HEADERS = (["from", "to"], ["from", "to", "weight"])


def parse_csv_edges(text: str) -> tuple[list[FactLine], ParseDiagnostics]:
    """Parse a ``from,to[,weight]`` edge list; weight defaults to 1."""
    diag = ParseDiagnostics()
    facts: list[FactLine] = []
    for lineno, raw in enumerate(_lines(text), start=1):
        diag.total_lines += 1
        if not raw.strip():
            diag.blank += 1
            continue
        try:
            row = [c.strip() for c in next(csv.reader([raw]))]
        except csv.Error as exc:
            diag.error(lineno, f"malformed CSV ({exc})")
            continue
        if lineno == 1 and [c.lower() for c in row] in _HEADERS:
            diag.skipped_comments += 1
            continue
        if len(row) not in (2, 3):
            diag.error(lineno, f"expected 2 or 3 columns, got {len(row)}")
            continue
        src, dst = row[0], row[1]
        weight = row[2] if len(row) == 3 else "1"
        if not src or not dst:
            diag.error(lineno, "empty atom")
            continue
        bad = next((a for a in (src, dst) if not SPACE_ID.match(a)), None)
        if bad is not None:
            diag.error(lineno, f"invalid atom {bad!r}")
            continue
        if not POSITIVE_INT.match(weight):
            diag.error(lineno, f"weight must be a positive integer, got {weight!r}")
            continue
        facts.append(FactLine(src, dst, int(weight), lineno))
        diag.accepted += 1
    if not facts:
        raise EmptyInput("no edges found", diag)
    return facts, diag


def to_edge_list(facts: Iterable[FactLine]) -> list[tuple[str, str]]:
    """Collapse facts to sorted, unique, undirected ``(u, v)`` pairs with ``u < v``.

    Multiplicity is ignored: any fact means the two spaces are adjacent.
    Self-loops are dropped with a :class:`UserWarning`.
    """
    edges: set[tuple[str, str]] = set()
    loops = 0
    for f in facts:
        if f.source == f.target:
            loops += 1
            continue
        edges.add((min(f.source, f.target), max(f.source, f.target)))
    if loops:
        warnings.warn(f"dropped {loops} self-loop fact(s)", UserWarning, stacklevel=2)
    return sorted(edges)


def format_facts(facts: Iterable[FactLine]) -> str:
    return "".join(f.to_prolog() + "\n" for f in facts)


def format_csv(facts: Iterable[FactLine]) -> str:
    rows = ["from,to,weight"]
    rows += [f"{f.source},{f.target},{f.multiplicity}" for f in facts]
    return "\n".join(rows) + "\n"


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".pl":
        return "prolog"
    if suffix == ".csv":
        return "csv"
    raise MapFileError(f"cannot infer map format from {str(path)!r}; use --input-format")


def read_map(path: str | Path, fmt: str | None = None,
             strict: bool = False) -> tuple[list[FactLine], ParseDiagnostics]:
    fmt = fmt or detect_format(path)
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "prolog":
        return parse_fact_file(text, strict=strict)
    if fmt == "csv":
        return parse_csv_edges(text)
    raise MapFileError(f"unknown map format {fmt!r}")
