"""xmlauthz: compile XML grant/deny authorization rules into a grant-only
relational authorization table and answer access-control decisions."""

from .gate import AccessDecision, decide, explain
from .paths import (
    AbsolutePath,
    AllPaths,
    PathExpr,
    build_allpaths_from_document,
    load_allpaths_from_list,
    match_paths,
    parse_path_expr,
    recursive_closure,
)
from .predicates import (
    EMPTY,
    UNIVERSAL,
    Conflict,
    ConflictKind,
    Predicate,
    classify_conflict,
    difference,
    intersect,
    is_subset,
    parse_predicate,
    parse_predicate_text,
    render_predicate,
    satisfies,
    union,
)
from .rules import (
    AuthRule,
    ChangeSummary,
    Mode,
    RuleDocument,
    Scope,
    apply_rule,
    compile_documents,
    expand_object,
    parse_rule_document,
)
from .store import UserRecord, XatEntry, XatStore, ingest_users

__version__ = "0.1.0"
