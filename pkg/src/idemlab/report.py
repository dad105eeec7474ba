"""Per-group report records and the table verifier.

Records hold only computed values and are a pure function of the group
table and the caps, so identical input gives byte-identical JSON. Timings
never enter a record.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import cache as cache_mod
from .abelian import AbelianGroup, abelian_invariants, number_of_divisors
from .covers import idem_inf, idem_set, sur_cov_classes, sur_gensub_classes
from .grpcore import (
    CapExceeded,
    DEFAULT_SUBGROUP_CAP,
    FiniteGroup,
    center,
    is_nilpotent,
    is_perfect,
    is_simple,
    is_solvable,
)
from .homlab import DEFAULT_BUDGET, SearchBudgetExceeded, are_isomorphic
from .homology import abelianization, h2_loc, schur_multiplier

# bump when the record layout or any algorithm feeding it changes
RECORD_VERSION = 2


@dataclass(frozen=True)
class Caps:
    order: int = DEFAULT_SUBGROUP_CAP
    budget: int = DEFAULT_BUDGET


def abelian_json(A: AbelianGroup) -> dict:
    return {"invariant_factors": list(A.invariant_factors)}


def load_table() -> dict:
    """Bundled expected rows, keyed by group name."""
    text = resources.files("idemlab").joinpath("data/table.json").read_text()
    return json.loads(text)["rows"]


def load_schema() -> dict:
    return json.loads(resources.files("idemlab").joinpath("data/report.schema.json").read_text())


def corpus_dir() -> Path:
    return Path(str(resources.files("idemlab").joinpath("data/corpus")))


def info_record(G: FiniteGroup, name: str) -> dict:
    h1, _ = abelianization(G)
    h2 = schur_multiplier(G)
    loc, _ = h2_loc(G)
    return {
        "group": name,
        "order": G.order,
        "h1": abelian_json(h1),
        "h2": abelian_json(h2),
        "h2_loc": abelian_json(loc),
        "abelian": G.is_abelian,
        "simple": is_simple(G),
        "perfect": is_perfect(G),
        "nilpotent": is_nilpotent(G),
        "solvable": is_solvable(G),
    }


def member_label(X: FiniteGroup, G: FiniteGroup, name: str) -> str:
    """A readable isomorphism-invariant label for a member of Idem(G)."""
    if X.order == 1:
        return "1"
    if X.is_abelian:
        return str(abelian_invariants(X).abstract)
    if X.order == G.order and are_isomorphic(X, G):
        return name
    h1, _ = abelianization(X)
    Z = center(X)
    z = abelian_invariants(Z.as_group()).abstract if Z.order > 1 else "0"
    return f"nonabelian order {X.order}, H1 {h1}, center {z}"


def _covers_part(G: FiniteGroup, name: str, caps: Caps) -> dict:
    b = caps.budget
    sur = sur_gensub_classes(G, budget=b)
    cov = sur_cov_classes(G, budget=b)
    idem = idem_set(G, cap=caps.order, budget=b)
    members = sorted(
        ({"order": c.domain.order, "invariant": member_label(c.domain, G, name)} for c in idem),
        key=lambda m: (m["order"], m["invariant"]),
    )
    try:
        inf_members, _ = idem_inf(G, cap=caps.order, budget=b)
        inf_size = len(inf_members)
    except (CapExceeded, SearchBudgetExceeded):
        inf_size = None
    return {
        "sur_gensub_count": len(sur),
        "sur_cov_count": len(cov),
        "idem_size": len(idem),
        "idem_members": members,
        "idem_inf_size": inf_size,
    }


def group_record(G: FiniteGroup, name: str, caps: Caps = Caps()) -> dict:
    """Computed fields of a group record (no comparison against the table).

    The record is cached under the group table and caps.
    """
    store = cache_mod.active_cache()
    key = cache_mod.make_key("record", RECORD_VERSION, G.key, G.generators, name, caps.order, caps.budget)
    if store is not None:
        hit = store.get_json("record", key)
        if hit is not None:
            return hit
    rec = info_record(G, name)
    h2 = AbelianGroup(tuple(rec["h2"]["invariant_factors"]))
    rec["h2_exponent"] = h2.exponent
    rec["sigma0"] = number_of_divisors(h2.exponent)
    rec.update(_covers_part(G, name, caps))
    if store is not None:
        store.put_json("record", key, rec)
    return rec


_COMPARED = ("h2", "h2_exponent", "sigma0", "idem_size")


def compare_row(rec: dict, expected: dict | None) -> tuple[bool, list[str]]:
    """Differences between a computed record and an expected table row."""
    if expected is None:
        return True, []
    diffs = []
    for k in _COMPARED:
        if k not in expected:
            continue
        got = rec[k]["invariant_factors"] if k == "h2" else rec[k]
        if got != expected[k]:
            diffs.append(f"{k}: expected {expected[k]}, computed {got}")
    return not diffs, diffs


def skip_record(name: str, order: int, reason: str) -> dict:
    return {"group": name, "order": order, "status": "SKIP", "reason": reason}
