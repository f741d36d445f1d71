"""In-memory authorization table with flat-file persistence.

The table holds only grant rows, keyed by (subject, object, action);
absence of a row means access is denied.  Persistence is a plain CSV
whose columns mirror the table (Subject, Object, Predicate, Action),
sorted for deterministic export.
"""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Optional

from .paths import AbsolutePath, PathSyntaxError
from .predicates import (
    Predicate,
    PredicateSyntaxError,
    parse_predicate_text,
    render_predicate,
)

CSV_HEADER = ["Subject", "Object", "Predicate", "Action"]


class StoreError(ValueError):
    """Raised for invariant violations and malformed persisted data."""


@dataclass(frozen=True)
class XatEntry:
    subject: str
    object: AbsolutePath
    predicate: Predicate
    action: str

    def __post_init__(self):
        if self.predicate.is_empty:
            raise StoreError("a stored row may not carry the empty predicate")

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.object.text, self.action)


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    password: str
    first_name: str
    last_name: str
    role: str


class XatStore:
    """Keyed grant-row table: at most one row per (subject, object, action)."""

    def __init__(self):
        self._rows: dict[tuple[str, str, str], XatEntry] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def upsert(self, entry: XatEntry) -> Optional[XatEntry]:
        previous = self._rows.get(entry.key)
        self._rows[entry.key] = entry
        return previous

    def delete(self, subject: str, object: AbsolutePath, action: str) -> bool:
        return self._rows.pop((subject, object.text, action), None) is not None

    def lookup(self, subject: str, object: AbsolutePath, action: str) -> Optional[XatEntry]:
        return self._rows.get((subject, object.text, action))

    def entries(self) -> list[XatEntry]:
        """All rows, sorted by (subject, object, action)."""
        return [self._rows[k] for k in sorted(self._rows)]

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for entry in self.entries():
            writer.writerow(
                [entry.subject, entry.object.text, render_predicate(entry.predicate), entry.action]
            )
        return buf.getvalue()

    def export_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv_text())

    @classmethod
    def from_csv_text(cls, text: str) -> "XatStore":
        store = cls()
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != CSV_HEADER:
            raise StoreError("bad header: expected %s, got %s" % (",".join(CSV_HEADER), header))
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise StoreError("line %d: expected 4 columns, got %d" % (lineno, len(row)))
            subject, object_text, predicate_text, action = row
            try:
                entry = XatEntry(
                    subject,
                    AbsolutePath.parse(object_text),
                    parse_predicate_text(predicate_text),
                    action,
                )
            except (PathSyntaxError, PredicateSyntaxError, StoreError) as exc:
                raise StoreError("line %d: %s" % (lineno, exc)) from None
            if entry.key in store._rows:
                raise StoreError("line %d: duplicate key %s" % (lineno, entry.key))
            store._rows[entry.key] = entry
        return store

    @classmethod
    def import_csv(cls, path) -> "XatStore":
        with open(path, encoding="utf-8", newline="") as fh:
            return cls.from_csv_text(fh.read())


def ingest_users(source) -> dict[str, UserRecord]:
    """Load the users document into records keyed by userID.

    Expected shape: ``<users>`` root with ``<user>`` children carrying
    userID, password, firstName, lastName and role elements.
    """
    if isinstance(source, str) and source.lstrip().startswith("<"):
        root = ET.fromstring(source)
    else:
        root = ET.parse(source).getroot()
    if root.tag != "users":
        raise StoreError("expected <users> root, got <%s>" % root.tag)
    records: dict[str, UserRecord] = {}
    for i, user in enumerate(root.findall("user")):
        fields = {}
        for name in ("userID", "password", "firstName", "lastName", "role"):
            node = user.find(name)
            fields[name] = (node.text or "").strip() if node is not None else ""
        if not fields["userID"]:
            raise StoreError("user %d: missing userID" % i)
        if not fields["role"]:
            raise StoreError("user %r: missing role" % fields["userID"])
        if fields["userID"] in records:
            raise StoreError("duplicate userID %r" % fields["userID"])
        records[fields["userID"]] = UserRecord(
            fields["userID"],
            fields["password"],
            fields["firstName"],
            fields["lastName"],
            fields["role"],
        )
    return records
