"""Plain-text group definitions.

Two forms are accepted::

    group A5
    degree 5
    gen (0 1 2)
    gen (0 1 2 3 4)

    group C3
    table 3
    0 1 2
    1 2 0
    2 0 1

``#`` starts a comment. Points and table entries are 0-based, and in table
form element 0 must be the identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grpcore import DEFAULT_ORDER_CAP, FiniteGroup, GroupError
from .library import cycles_to_perm, permutation_group


class GroupFileError(GroupError):
    def __init__(self, msg: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {msg}".strip())
        self.line = line


@dataclass
class GroupSpec:
    name: str
    degree: int | None = None
    generators: list[list[int]] = field(default_factory=list)
    table: np.ndarray | None = None
    source: str | None = None


_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_cycles(text: str, degree: int, lineno: int, source) -> list[int]:
    rest = _CYCLE.sub("", text).strip()
    if rest:
        raise GroupFileError(f"unexpected text in cycle notation: {rest!r}", lineno, source)
    cycles = []
    seen = set()
    for m in _CYCLE.finditer(text):
        body = m.group(1).replace(",", " ").split()
        try:
            pts = [int(x) for x in body]
        except ValueError:
            raise GroupFileError("non-integer point in cycle", lineno, source) from None
        for x in pts:
            if not 0 <= x < degree:
                raise GroupFileError(f"point {x} outside 0..{degree - 1}", lineno, source)
            if x in seen:
                raise GroupFileError(f"point {x} repeated in generator", lineno, source)
            seen.add(x)
        if len(pts) > 1:
            cycles.append(pts)
    return cycles_to_perm(cycles, degree)


def parse_group_text(text: str, source: str | None = None) -> GroupSpec:
    name = None
    degree = None
    gens: list[list[int]] = []
    table_rows: list[list[int]] | None = None
    table_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if table_rows is not None and len(table_rows) < table_n:
            try:
                row = [int(x) for x in line.split()]
            except ValueError:
                raise GroupFileError("non-integer table entry", lineno, source) from None
            if len(row) != table_n:
                raise GroupFileError(f"table row has {len(row)} entries, expected {table_n}", lineno, source)
            table_rows.append(row)
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "group":
            if name is not None:
                raise GroupFileError("duplicate group line", lineno, source)
            if not rest:
                raise GroupFileError("group needs a name", lineno, source)
            name = rest
        elif word == "degree":
            if degree is not None or table_n is not None:
                raise GroupFileError("degree given twice or mixed with table", lineno, source)
            try:
                degree = int(rest)
            except ValueError:
                raise GroupFileError("degree must be an integer", lineno, source) from None
            if degree < 1:
                raise GroupFileError("degree must be positive", lineno, source)
        elif word == "gen":
            if degree is None:
                raise GroupFileError("gen before degree", lineno, source)
            gens.append(_parse_cycles(rest, degree, lineno, source))
        elif word == "table":
            if degree is not None or table_n is not None:
                raise GroupFileError("table given twice or mixed with degree", lineno, source)
            try:
                table_n = int(rest)
            except ValueError:
                raise GroupFileError("table size must be an integer", lineno, source) from None
            if table_n < 1:
                raise GroupFileError("table size must be positive", lineno, source)
            table_rows = []
        else:
            raise GroupFileError(f"unknown directive {word!r}", lineno, source)
    if name is None:
        raise GroupFileError("missing group line", None, source)
    if table_n is not None:
        if len(table_rows) != table_n:
            raise GroupFileError(f"table has {len(table_rows)} rows, expected {table_n}", None, source)
        return GroupSpec(name, table=np.array(table_rows, dtype=np.int64), source=source)
    if degree is None:
        raise GroupFileError("need either degree/gen lines or a table", None, source)
    return GroupSpec(name, degree=degree, generators=gens, source=source)


def parse_group_file(path) -> GroupSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GroupFileError(f"cannot read file: {exc}", None, str(path)) from None
    return parse_group_text(text, source=str(path))


def load_group(spec: GroupSpec, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if spec.table is not None:
        G = FiniteGroup(spec.table, name=spec.name, cap=cap)
        return G
    gens = spec.generators or [list(range(spec.degree))]
    return permutation_group(gens, spec.degree, name=spec.name, cap=cap)


def format_table_group(G: FiniteGroup, name: str) -> str:
    lines = [f"group {name}", f"table {G.order}"]
    lines += [" ".join(str(int(x)) for x in row) for row in G.table]
    return "\n".join(lines) + "\n"
