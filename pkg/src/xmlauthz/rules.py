"""Parse XML authorization documents and compile them into the table.

Each rule is a (subject, object, condition, action, type, mode) tuple.
Grant rules insert grant rows; deny rules are never stored, they only
delete or narrow existing grant rows according to whether the conflict
is absolute or partial.  Rule order is semantic: the latter rule
(partially) overrides.
"""

from __future__ import annotations

import enum
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .paths import AllPaths, AbsolutePath, PathExpr, PathSyntaxError, match_paths, parse_path_expr, recursive_closure
from .predicates import (
    ConflictKind,
    PredicateSyntaxError,
    classify_conflict,
    union,
)
from .store import XatEntry, XatStore

ACTION_SELECT = "Select"


class RuleError(ValueError):
    """Raised when an authorization document cannot be parsed."""


class Scope(enum.Enum):
    LOCAL = "L"
    RECURSIVE = "R"


class Mode(enum.Enum):
    GRANT = "Grant"
    DENY = "Deny"


@dataclass(frozen=True)
class AuthRule:
    subject: str
    object: PathExpr
    action: str
    scope: Scope
    mode: Mode

    @property
    def predicate(self):
        """The rule's condition; unconditional rules carry the universal predicate."""
        return self.object.condition


@dataclass(frozen=True)
class RuleDocument:
    rules: tuple[AuthRule, ...]


@dataclass
class ChangeSummary:
    inserted: int = 0
    updated: int = 0
    deleted: int = 0

    def merge(self, other: "ChangeSummary") -> None:
        self.inserted += other.inserted
        self.updated += other.updated
        self.deleted += other.deleted


_REQUIRED_CHILDREN = ("subject", "object", "action", "type", "mode")


def _parse_rule(elem, index: int) -> AuthRule:
    fields = {}
    for name in _REQUIRED_CHILDREN:
        node = elem.find(name)
        if node is None or node.text is None or not node.text.strip():
            raise RuleError("rule %d: missing <%s>" % (index, name))
        fields[name] = node.text.strip()
    try:
        obj = parse_path_expr(fields["object"])
    except (PathSyntaxError, PredicateSyntaxError) as exc:
        raise RuleError("rule %d: bad object: %s" % (index, exc)) from None
    if fields["action"].lower() != "select":
        raise RuleError("rule %d: unsupported action %r" % (index, fields["action"]))
    try:
        scope = Scope(fields["type"].upper())
    except ValueError:
        raise RuleError("rule %d: unknown type %r" % (index, fields["type"])) from None
    mode_token = fields["mode"].capitalize()
    try:
        mode = Mode(mode_token)
    except ValueError:
        raise RuleError("rule %d: unknown mode %r" % (index, fields["mode"])) from None
    return AuthRule(fields["subject"], obj, ACTION_SELECT, scope, mode)


def parse_rule_document(source) -> RuleDocument:
    """Parse a ``<rules>`` document, preserving rule order."""
    try:
        if isinstance(source, str) and source.lstrip().startswith("<"):
            root = ET.fromstring(source)
        else:
            root = ET.parse(source).getroot()
    except ET.ParseError as exc:
        raise RuleError("malformed XML: %s" % exc) from None
    if root.tag != "rules":
        raise RuleError("expected <rules> root, got <%s>" % root.tag)
    rules = tuple(_parse_rule(elem, i) for i, elem in enumerate(root.findall("rule")))
    return RuleDocument(rules)


def expand_object(rule: AuthRule, universe: AllPaths) -> set[AbsolutePath]:
    """The set of absolute paths a rule applies to."""
    matched = match_paths(rule.object, universe)
    if rule.scope is Scope.RECURSIVE:
        matched = recursive_closure(matched, universe)
    return matched


def apply_rule(rule: AuthRule, universe: AllPaths, xat: XatStore) -> ChangeSummary:
    """Apply one rule to the table, resolving conflicts per row.

    Grants insert or widen; denies delete on absolute conflict, narrow
    on partial conflict, and are no-ops otherwise (default is deny).
    """
    summary = ChangeSummary()
    for path in sorted(expand_object(rule, universe), key=lambda p: p.text):
        existing = xat.lookup(rule.subject, path, rule.action)
        if rule.mode is Mode.GRANT:
            if existing is None:
                xat.upsert(XatEntry(rule.subject, path, rule.predicate, rule.action))
                summary.inserted += 1
            else:
                merged = union(existing.predicate, rule.predicate)
                if merged != existing.predicate:
                    xat.upsert(XatEntry(rule.subject, path, merged, rule.action))
                    summary.updated += 1
        else:
            if existing is None:
                continue
            conflict = classify_conflict(existing.predicate, rule.predicate)
            if conflict.kind is ConflictKind.ABSOLUTE:
                xat.delete(rule.subject, path, rule.action)
                summary.deleted += 1
            elif conflict.kind is ConflictKind.PARTIAL:
                xat.upsert(
                    XatEntry(rule.subject, path, conflict.new_predicate, rule.action)
                )
                summary.updated += 1
    return summary


def compile_documents(docs, universe: AllPaths, xat: XatStore) -> ChangeSummary:
    """Apply every rule of every document, in order, to the table."""
    summary = ChangeSummary()
    for doc in docs:
        for rule in doc.rules:
            summary.merge(apply_rule(rule, universe, xat))
    return summary
