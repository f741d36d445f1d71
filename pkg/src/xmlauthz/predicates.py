"""Interval-set predicates over decimal values on the context node.

A predicate is a finite union of disjoint, non-touching intervals over
the rationals, stored in canonical sorted order.  Bounds are exact
``Decimal`` values so that boundary semantics like ``>= 2.0`` versus
``> 2.0`` never depend on floating-point rounding.  The complement is
continuous-domain: the complement of ``. < v`` is ``. >= v``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Iterable, Optional


class PredicateSyntaxError(ValueError):
    """Raised when a condition or predicate string cannot be parsed."""


@dataclass(frozen=True)
class Interval:
    """One contiguous range.  ``None`` bounds mean -inf / +inf.

    A ``None`` bound is always open.  A non-empty interval requires
    lower < upper, or lower == upper with both ends closed (a point).
    """

    lower: Optional[Decimal]
    lower_closed: bool
    upper: Optional[Decimal]
    upper_closed: bool

    def __post_init__(self):
        if self.lower is None and self.lower_closed:
            raise ValueError("-inf bound cannot be closed")
        if self.upper is None and self.upper_closed:
            raise ValueError("+inf bound cannot be closed")
        if self.lower is not None and self.upper is not None:
            if self.lower > self.upper:
                raise ValueError("empty interval: lower > upper")
            if self.lower == self.upper and not (self.lower_closed and self.upper_closed):
                raise ValueError("empty interval: open point")

    def contains(self, v: Decimal) -> bool:
        if self.lower is not None:
            if v < self.lower or (v == self.lower and not self.lower_closed):
                return False
        if self.upper is not None:
            if v > self.upper or (v == self.upper and not self.upper_closed):
                return False
        return True


def _overlaps_or_touches(a: Interval, b: Interval) -> bool:
    # a sorted before b by lower bound
    if a.upper is None or b.lower is None:
        return True
    if b.lower < a.upper:
        return True
    if b.lower == a.upper and (a.upper_closed or b.lower_closed):
        return True
    return False


def _max_upper(a: Interval, b: Interval) -> tuple[Optional[Decimal], bool]:
    if a.upper is None or b.upper is None:
        return None, False
    if a.upper > b.upper:
        return a.upper, a.upper_closed
    if b.upper > a.upper:
        return b.upper, b.upper_closed
    return a.upper, a.upper_closed or b.upper_closed


def _lower_sort_key(iv: Interval):
    if iv.lower is None:
        return (0, Decimal(0), 0)
    return (1, iv.lower, 0 if iv.lower_closed else 1)


@dataclass(frozen=True)
class Predicate:
    """Canonical union of disjoint, non-touching intervals.

    Use :func:`predicate_from_intervals` (or the set operations below)
    to build instances; the raw constructor assumes canonical input.
    """

    intervals: tuple[Interval, ...]

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_universal(self) -> bool:
        return (
            len(self.intervals) == 1
            and self.intervals[0].lower is None
            and self.intervals[0].upper is None
        )

    def __contains__(self, v) -> bool:
        return satisfies(v, self)


EMPTY = Predicate(())
UNIVERSAL = Predicate((Interval(None, False, None, False),))


def predicate_from_intervals(intervals: Iterable[Interval]) -> Predicate:
    """Canonicalize: sort by lower bound, merge overlapping or touching."""
    ordered = sorted(intervals, key=_lower_sort_key)
    merged: list[Interval] = []
    for iv in ordered:
        if merged and _overlaps_or_touches(merged[-1], iv):
            prev = merged[-1]
            upper, upper_closed = _max_upper(prev, iv)
            merged[-1] = Interval(prev.lower, prev.lower_closed, upper, upper_closed)
        else:
            merged.append(iv)
    return Predicate(tuple(merged))


def union(a: Predicate, b: Predicate) -> Predicate:
    return predicate_from_intervals(a.intervals + b.intervals)


def intersect(a: Predicate, b: Predicate) -> Predicate:
    out = []
    for x in a.intervals:
        for y in b.intervals:
            lo, lo_closed = x.lower, x.lower_closed
            if y.lower is not None and (lo is None or y.lower > lo):
                lo, lo_closed = y.lower, y.lower_closed
            elif y.lower is not None and y.lower == lo:
                lo_closed = lo_closed and y.lower_closed
            hi, hi_closed = x.upper, x.upper_closed
            if y.upper is not None and (hi is None or y.upper < hi):
                hi, hi_closed = y.upper, y.upper_closed
            elif y.upper is not None and y.upper == hi:
                hi_closed = hi_closed and y.upper_closed
            if lo is not None and hi is not None:
                if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
                    continue
            out.append(Interval(lo, lo_closed, hi, hi_closed))
    return predicate_from_intervals(out)


def complement(p: Predicate) -> Predicate:
    """Continuous-domain complement: strict bounds become non-strict."""
    if p.is_empty:
        return UNIVERSAL
    out = []
    first = p.intervals[0]
    if first.lower is not None:
        out.append(Interval(None, False, first.lower, not first.lower_closed))
    for prev, nxt in zip(p.intervals, p.intervals[1:]):
        # the gap is non-empty because canonical intervals never touch
        out.append(
            Interval(prev.upper, not prev.upper_closed, nxt.lower, not nxt.lower_closed)
        )
    last = p.intervals[-1]
    if last.upper is not None:
        out.append(Interval(last.upper, not last.upper_closed, None, False))
    return Predicate(tuple(out))


def difference(a: Predicate, b: Predicate) -> Predicate:
    return intersect(a, complement(b))


def is_subset(a: Predicate, b: Predicate) -> bool:
    return difference(a, b).is_empty


def satisfies(v, p: Predicate) -> bool:
    v = v if isinstance(v, Decimal) else Decimal(str(v))
    return any(iv.contains(v) for iv in p.intervals)


class ConflictKind(enum.Enum):
    NONE = "none"
    ABSOLUTE = "absolute"
    PARTIAL = "partial"


@dataclass(frozen=True)
class Conflict:
    kind: ConflictKind
    new_predicate: Optional[Predicate] = None


def classify_conflict(grant: Predicate, deny: Predicate) -> Conflict:
    """Classify a grant/deny pair on the same object.

    Absolute when the deny covers the whole grant (the row is removed);
    none when they are disjoint; partial otherwise, carrying the
    revised predicate grant - deny.
    """
    remaining = difference(grant, deny)
    if remaining.is_empty:
        return Conflict(ConflictKind.ABSOLUTE)
    if intersect(grant, deny).is_empty:
        return Conflict(ConflictKind.NONE)
    return Conflict(ConflictKind.PARTIAL, remaining)


_NUMBER = r"-?\d+(?:\.\d+)?"
_CONDITION_RE = re.compile(
    r"^\[\s*\.\s*(<=|>=|!=|<|>|=)\s*(" + _NUMBER + r")\s*\]$"
)
_SINGLE_RE = re.compile(r"^\.\s*(<=|>=|!=|<|>|=)\s*(" + _NUMBER + r")$")
_RANGE_RE = re.compile(
    r"^(" + _NUMBER + r")\s*(<=|<)\s*\.\s*(<=|<)\s*(" + _NUMBER + r")$"
)


def _comparison(op: str, value: Decimal) -> Predicate:
    if op == "<":
        return Predicate((Interval(None, False, value, False),))
    if op == "<=":
        return Predicate((Interval(None, False, value, True),))
    if op == ">":
        return Predicate((Interval(value, False, None, False),))
    if op == ">=":
        return Predicate((Interval(value, True, None, False),))
    if op == "=":
        return Predicate((Interval(value, True, value, True),))
    if op == "!=":
        return Predicate(
            (Interval(None, False, value, False), Interval(value, False, None, False))
        )
    raise PredicateSyntaxError("unsupported operator %r" % op)


def parse_predicate(text: Optional[str]) -> Predicate:
    """Parse a bracketed rule condition like ``[.<60000]``.

    Absent or empty text means the rule is unconditional.
    """
    if text is None or not text.strip():
        return UNIVERSAL
    m = _CONDITION_RE.match(text.strip())
    if not m:
        raise PredicateSyntaxError(
            "malformed condition %r: expected [. OP number]" % text
        )
    op, literal = m.groups()
    try:
        value = Decimal(literal)
    except InvalidOperation:
        raise PredicateSyntaxError("non-numeric literal %r" % literal) from None
    return _comparison(op, value)


def parse_predicate_text(text: str) -> Predicate:
    """Parse the stored predicate grammar used in the table's Predicate column.

    ``-`` is the unconditional predicate; disjuncts joined by `` or ``
    are single comparisons ``. OP n`` or bounded ranges ``a OP . OP b``.
    """
    text = text.strip()
    if text == "-":
        return UNIVERSAL
    if not text:
        raise PredicateSyntaxError("empty predicate text")
    result = EMPTY
    for part in text.split(" or "):
        part = part.strip()
        m = _SINGLE_RE.match(part)
        if m:
            op, literal = m.groups()
            result = union(result, _comparison(op, Decimal(literal)))
            continue
        m = _RANGE_RE.match(part)
        if m:
            lo, lo_op, hi_op, hi = m.groups()
            result = union(
                result,
                intersect(
                    _comparison(">" if lo_op == "<" else ">=", Decimal(lo)),
                    _comparison(hi_op, Decimal(hi)),
                ),
            )
            continue
        raise PredicateSyntaxError("malformed predicate disjunct %r" % part)
    return result


def _render_interval(iv: Interval) -> str:
    if iv.lower is None and iv.upper is None:
        return "-"
    if iv.lower is None:
        return ".%s %s" % ("<=" if iv.upper_closed else "<", iv.upper)
    if iv.upper is None:
        return ".%s %s" % (">=" if iv.lower_closed else ">", iv.lower)
    if iv.lower == iv.upper:
        return ".= %s" % iv.lower
    return "%s %s . %s %s" % (
        iv.lower,
        "<=" if iv.lower_closed else "<",
        "<" if not iv.upper_closed else "<=",
        iv.upper,
    )


def render_predicate(p: Predicate) -> str:
    """Render a predicate in the table's text form; `-` when unconditional."""
    if p.is_empty:
        raise ValueError("the empty predicate has no rendering")
    if p.is_universal:
        return "-"
    return " or ".join(_render_interval(iv) for iv in p.intervals)
