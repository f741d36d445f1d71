"""Shared test utilities: random policy generation and the independent
last-matching-rule oracle used to cross-check the compiled table."""

from decimal import Decimal
from random import Random

from xmlauthz.paths import AbsolutePath, AllPaths, PathExpr, CHILD, DESCENDANT
from xmlauthz.predicates import (
    EMPTY,
    UNIVERSAL,
    Interval,
    Predicate,
    predicate_from_intervals,
    satisfies,
    union,
)
from xmlauthz.rules import AuthRule, Mode, Scope, expand_object


def oracle_decision(rules, universe, subject, path, value, expansions=None) -> bool:
    """Scan the rule sequence in order; the last rule whose object set
    contains the path and whose predicate admits the value wins.
    Default is deny.  ``expansions`` may carry precomputed object sets
    (one per rule, same order) to avoid re-expanding on every call."""
    if expansions is None:
        expansions = [expand_object(rule, universe) for rule in rules]
    verdict = False
    for rule, objects in zip(rules, expansions):
        if rule.subject != subject:
            continue
        if path in objects and satisfies(value, rule.predicate):
            verdict = rule.mode is Mode.GRANT
    return verdict


def random_interval(rng: Random, lo=-20, hi=20) -> Interval:
    a = Decimal(rng.randint(lo, hi))
    kind = rng.randrange(5)
    if kind == 0:
        return Interval(None, False, a, rng.random() < 0.5)
    if kind == 1:
        return Interval(a, rng.random() < 0.5, None, False)
    if kind == 2:
        return Interval(a, True, a, True)
    b = a + Decimal(rng.randint(1, 10))
    return Interval(a, rng.random() < 0.5, b, rng.random() < 0.5)


def random_predicate(rng: Random) -> Predicate:
    roll = rng.random()
    if roll < 0.1:
        return UNIVERSAL
    if roll < 0.15:
        return EMPTY
    n = rng.randint(1, 3)
    return predicate_from_intervals(random_interval(rng) for _ in range(n))


def random_universe(rng: Random, max_paths=15) -> AllPaths:
    names = ["a", "b", "c", "d"]
    paths = set()
    frontier = [()]
    while frontier and len(paths) < max_paths:
        base = frontier.pop(rng.randrange(len(frontier)))
        for name in rng.sample(names, rng.randint(1, len(names))):
            steps = base + (name,)
            if len(paths) >= max_paths:
                break
            paths.add(AbsolutePath(steps))
            if len(steps) < 4 and rng.random() < 0.6:
                frontier.append(steps)
    return AllPaths.from_paths(paths)


def random_path_expr(rng: Random, universe: AllPaths, condition: Predicate) -> PathExpr:
    path = rng.choice(sorted(universe, key=lambda p: p.text))
    segments = []
    skipping = False
    for i, step in enumerate(path.steps):
        if skipping or rng.random() < 0.25:
            # fold this step into a descendant gap or keep it as the
            # descendant segment itself
            if rng.random() < 0.5 and i < len(path.steps) - 1:
                skipping = True
                continue
            segments.append((DESCENDANT, step))
            skipping = False
        else:
            segments.append((CHILD, step))
    if not segments:
        segments.append((DESCENDANT, path.steps[-1]))
    return PathExpr(tuple(segments), condition)


def random_rules(rng: Random, universe: AllPaths, max_rules=12) -> list[AuthRule]:
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        condition = random_predicate(rng)
        if condition.is_empty:
            condition = UNIVERSAL
        rules.append(
            AuthRule(
                subject=rng.choice(["staff", "faculty"]),
                object=random_path_expr(rng, universe, condition),
                action="Select",
                scope=rng.choice([Scope.LOCAL, Scope.RECURSIVE]),
                mode=rng.choice([Mode.GRANT, Mode.DENY]),
            )
        )
    return rules


def sample_values(predicates) -> list[Decimal]:
    """Every finite bound of the given predicates, +/- 1, plus midpoints
    between consecutive distinct bounds."""
    bounds = set()
    for p in predicates:
        for iv in p.intervals:
            for v in (iv.lower, iv.upper):
                if v is not None:
                    bounds.add(v)
    values = set()
    ordered = sorted(bounds)
    for v in ordered:
        values.update({v, v - 1, v + 1})
    for lo, hi in zip(ordered, ordered[1:]):
        values.add((lo + hi) / 2)
    if not values:
        values.add(Decimal(0))
    return sorted(values)


def union_all(predicates) -> Predicate:
    out = EMPTY
    for p in predicates:
        out = union(out, p)
    return out
