"""Access decisions for XPath-subset queries against the compiled table.

For each absolute path the query matches, the gate either denies it
(no grant row, or the query condition and the row predicate exclude
each other) or grants it with the effective predicate: the
intersection of the query's own condition with the stored one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .paths import AbsolutePath, AllPaths, PathExpr, match_paths
from .predicates import Predicate, intersect, render_predicate
from .store import XatStore


class UnsupportedActionError(ValueError):
    pass


@dataclass(frozen=True)
class AccessDecision:
    query: PathExpr
    subject: str
    grants: tuple[tuple[AbsolutePath, Predicate], ...]
    denied_paths: tuple[AbsolutePath, ...]


def decide(
    subject: str,
    action: str,
    query: PathExpr,
    universe: AllPaths,
    xat: XatStore,
) -> AccessDecision:
    """Partition the query's matched paths into grants and denials."""
    if action.lower() != "select":
        raise UnsupportedActionError("unsupported action %r" % action)
    grants = []
    denied = []
    for path in sorted(match_paths(query, universe), key=lambda p: p.text):
        row = xat.lookup(subject, path, "Select")
        if row is None:
            denied.append(path)
            continue
        effective = intersect(query.condition, row.predicate)
        if effective.is_empty:
            denied.append(path)
        else:
            grants.append((path, effective))
    return AccessDecision(query, subject, tuple(grants), tuple(denied))


def to_records(decision: AccessDecision) -> list[dict]:
    """Machine-readable form: one record per path, sorted by path."""
    records = [
        {"path": path.text, "verdict": "grant", "predicate": render_predicate(effective)}
        for path, effective in decision.grants
    ] + [
        {"path": path.text, "verdict": "deny", "predicate": None}
        for path in decision.denied_paths
    ]
    records.sort(key=lambda r: r["path"])
    return records


def explain(decision: AccessDecision) -> str:
    """Human-readable report, deterministically ordered by path."""
    lines = ["subject: %s" % decision.subject, "query: %s" % decision.query.text]
    if not decision.grants and not decision.denied_paths:
        lines.append("no paths matched")
        return "\n".join(lines)
    if decision.grants:
        lines.append("granted:")
        for path, effective in decision.grants:
            lines.append("  GRANT %s  predicate %s" % (path.text, render_predicate(effective)))
    if decision.denied_paths:
        lines.append("denied:")
        for path in decision.denied_paths:
            lines.append("  DENY %s  (no grant row or empty effective predicate)" % path.text)
    return "\n".join(lines)
