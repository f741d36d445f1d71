"""Command-line front end: compile rule documents, check queries, list paths.

Exit codes are a stable contract for CI: 0 success/granted, 2 usage or
parse error, 3 all matched paths denied, 4 nothing matched, 1 internal
error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from .gate import decide, explain
from .paths import (
    AllPaths,
    PathSyntaxError,
    build_allpaths_from_document,
    load_allpaths_from_list,
    parse_path_expr,
)
from .predicates import PredicateSyntaxError
from .rules import ChangeSummary, RuleError, apply_rule, parse_rule_document
from .store import StoreError, XatStore, ingest_users

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_ALL_DENIED = 3
EXIT_NO_MATCH = 4


def _add_common(parser: argparse.ArgumentParser, need_xat: bool) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--paths-doc", metavar="FILE", help="XML document to derive AllPaths from")
    group.add_argument("--paths-list", metavar="FILE", help="newline-delimited path list")
    if need_xat:
        parser.add_argument("--xat", metavar="FILE", required=True, help="XAT CSV file")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xmlauthz")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="apply rule documents to the XAT")
    _add_common(p_compile, need_xat=True)
    p_compile.add_argument(
        "--rules", metavar="FILE", action="append", default=[],
        help="rule document, applied in the order given (repeatable)",
    )
    p_compile.add_argument("--users", metavar="FILE", help="users XML document")

    p_check = sub.add_parser("check", help="decide a query against the XAT")
    _add_common(p_check, need_xat=True)
    p_check.add_argument("--subject", metavar="NAME", required=True)
    p_check.add_argument("--query", metavar="EXPR", required=True)

    p_paths = sub.add_parser("paths", help="list the AllPaths universe")
    _add_common(p_paths, need_xat=False)
    p_paths.add_argument("--count", action="store_true", help="print only the path count")

    return parser


def _load_universe(args) -> AllPaths:
    if args.paths_doc:
        return build_allpaths_from_document(args.paths_doc)
    return load_allpaths_from_list(args.paths_list)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".xat-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_compile(args) -> int:
    universe = _load_universe(args)
    if os.path.exists(args.xat):
        xat = XatStore.import_csv(args.xat)
    else:
        xat = XatStore()
    if args.users:
        users = ingest_users(args.users)
        if args.verbose:
            print("loaded %d users" % len(users), file=sys.stderr)
    for rule_file in args.rules:
        doc = parse_rule_document(rule_file)
        summary = ChangeSummary()
        for rule in doc.rules:
            summary.merge(apply_rule(rule, universe, xat))
        print(
            "%s: inserted %d, updated %d, deleted %d"
            % (rule_file, summary.inserted, summary.updated, summary.deleted)
        )
    _atomic_write(args.xat, xat.to_csv_text())
    print("xat: %d rows -> %s" % (len(xat), args.xat))
    return EXIT_OK


def _cmd_check(args) -> int:
    universe = _load_universe(args)
    xat = XatStore.import_csv(args.xat)
    query = parse_path_expr(args.query)
    decision = decide(args.subject, "select", query, universe, xat)
    print(explain(decision))
    if not decision.grants and not decision.denied_paths:
        return EXIT_NO_MATCH
    if not decision.grants:
        return EXIT_ALL_DENIED
    return EXIT_OK


def _cmd_paths(args) -> int:
    universe = _load_universe(args)
    if args.count:
        print(len(universe))
    else:
        for path in universe.sorted():
            print(path.text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {"compile": _cmd_compile, "check": _cmd_check, "paths": _cmd_paths}
    try:
        return handlers[args.command](args)
    except (PathSyntaxError, PredicateSyntaxError, RuleError, StoreError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        print("internal error: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
