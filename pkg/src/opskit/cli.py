"""``opskit`` command line. Exit codes: 0 clean, 1 violations found, 2 operational error."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from opskit._lexer import ParseError
from opskit.ontology import (
    PROFILES,
    SchemaError,
    build_profile,
    build_vcps_fixture,
    diff_schemas,
    schema_from_turtle,
    schema_to_turtle,
)
from opskit.ontology.vocab import default_base, default_prefixes
from opskit.rdf import Graph
from opskit.reasoner import validate, violations_to_json, violations_to_text
from opskit.service import ConfigError, LinkedDataService, load_config, make_server, query_graph
from opskit.sparql import evaluate, parse_query
from opskit.triplify import MappingError, ingest_csv, load_mapping
from opskit.turtle import parse_turtle, serialize_turtle

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2
BUILD_PROFILES = PROFILES + ("vcps",)


class CommandError(Exception):
    pass


def _schema(profile: str, base: Optional[str]):
    if profile == "vcps":
        return build_vcps_fixture()
    return build_profile(profile, base or default_base())


def _read_graph(path: str) -> Graph:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CommandError(f"{path}: {exc.strerror or exc}") from None
    try:
        g, _ = parse_turtle(data)
    except ParseError as exc:
        raise CommandError("\n".join(f"{path}:{d}" for d in exc.diagnostics)) from None
    return g


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CommandError(f"{path}: {getattr(exc, 'strerror', None) or exc}") from None


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CommandError(f"{path}: {exc.strerror or exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def cmd_build(args, out: TextIO) -> int:
    schema = _schema(args.profile, args.base)
    _write_text(args.out, schema_to_turtle(schema))
    summary = {
        "profile": args.profile,
        "out": args.out,
        "classes": len(schema.classes),
        "properties": len(schema.properties),
        "restrictions": len(schema.restrictions),
        "disjointPairs": len(schema.disjointness),
        "definedClasses": len(schema.defined),
    }
    if args.format == "json":
        out.write(_dump(summary))
    else:
        out.write(
            "wrote {profile} profile to {out}: {classes} classes, {properties} properties, "
            "{restrictions} restrictions, {disjointPairs} disjoint pairs, {definedClasses} defined classes\n".format(**summary)
        )
    return EXIT_OK


def cmd_validate(args, out: TextIO) -> int:
    schema = _schema(args.profile, args.base)
    data = Graph()
    for path in args.data:
        data.merge(_read_graph(path))
    violations = validate(data, schema)
    out.write(violations_to_json(violations) + "\n" if args.format == "json" else violations_to_text(violations))
    return EXIT_VIOLATIONS if violations else EXIT_OK


def cmd_query(args, out: TextIO) -> int:
    if (args.query is None) == (args.query_file is None):
        raise CommandError("give exactly one of --query or --query-file")
    text = args.query if args.query is not None else _read_text(args.query_file)
    base = args.base or default_base()
    try:
        query = parse_query(text, default_prefixes(base))
    except ParseError as exc:
        raise CommandError("\n".join(f"query:{d}" for d in exc.diagnostics)) from None
    data = Graph()
    for path in args.data:
        data.merge(_read_graph(path))
    table = evaluate(query, query_graph(data, _schema(args.profile, base), args.inference))
    out.write(table.to_sparql_json() if args.format == "json" else table.to_tsv())
    return EXIT_OK


def cmd_diff(args, out: TextIO) -> int:
    schemas = []
    for path in (args.old, args.new):
        try:
            schemas.append(schema_from_turtle(_read_text(path)))
        except ParseError as exc:
            raise CommandError("\n".join(f"{path}:{d}" for d in exc.diagnostics)) from None
        except SchemaError as exc:
            raise CommandError(f"{path}: {exc}") from None
    report = diff_schemas(*schemas)
    out.write(_dump(report.to_json()) if args.format == "json" else report.to_text())
    return EXIT_OK


def cmd_ingest(args, out: TextIO) -> int:
    schema = _schema(args.profile, args.base)
    try:
        specs = load_mapping(args.spec, schema)
    except OSError as exc:
        raise CommandError(f"{args.spec}: {exc.strerror or exc}") from None
    g, report = ingest_csv(specs, _read_text(args.csv), schema)
    pm = default_prefixes(schema.base)
    _write_text(args.out, serialize_turtle(g, pm))
    out.write(_dump(report.to_json()) if args.format == "json" else report.to_text())
    return EXIT_OK


def cmd_serve(args, out: TextIO) -> int:
    try:
        config = load_config(args.config)
    except OSError as exc:
        raise CommandError(f"{args.config}: {exc.strerror or exc}") from None
    if args.port is not None:
        config.port = args.port
    try:
        server = make_server(LinkedDataService(config))
    except ParseError as exc:
        raise CommandError("\n".join(str(d) for d in exc.diagnostics)) from None
    except OSError as exc:
        raise CommandError(str(exc)) from None
    host, port = server.server_address[:2]
    url = f"http://{host}:{port}/"
    if args.format == "json":
        out.write(json.dumps({"profile": config.profile, "base": config.base, "url": url}) + "\n")
    else:
        out.write(f"serving {config.profile} profile for {config.base} on {url}\n")
    out.flush()
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opskit",
        description="Build, validate, query, diff and serve the Social Participation Ontology (OPS). "
        "The OPS_BASE_IRI environment variable overrides the default base IRI.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def common(p, formats=("text", "json")):
        p.add_argument("--format", choices=formats, default=formats[0], help="output format (default: %(default)s)")
        p.add_argument("--base", help="ontology base IRI (default: $OPS_BASE_IRI or the purl.org base)")

    p = sub.add_parser("build", help="write a profile as Turtle")
    p.add_argument("--profile", choices=BUILD_PROFILES, default="core")
    p.add_argument("--out", required=True, help="output Turtle path")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="check data against a profile (disjointness, restrictions)")
    p.add_argument("data", nargs="+", help="Turtle data files")
    p.add_argument("--profile", choices=PROFILES, default="core")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="run a SELECT query over data plus schema")
    p.add_argument("data", nargs="+", help="Turtle data files")
    p.add_argument("--query", "-q", help="query text")
    p.add_argument("--query-file", help="file holding the query")
    p.add_argument("--profile", choices=PROFILES, default="core")
    p.add_argument("--inference", dest="inference", action="store_true", default=True, help="materialize first (default)")
    p.add_argument("--no-inference", dest="inference", action="store_false", help="query the raw graph")
    common(p, formats=("tsv", "json"))
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("diff", help="compare two ontology files")
    p.add_argument("old")
    p.add_argument("new")
    common(p)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("ingest", help="triplify a CSV export with a mapping spec")
    p.add_argument("--spec", required=True, help="mapping spec file")
    p.add_argument("--csv", required=True, help="CSV input")
    p.add_argument("--out", required=True, help="output Turtle path")
    p.add_argument("--profile", choices=PROFILES, default="expanded", help="schema that mapped terms must exist in")
    common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("serve", help="start the linked-data service")
    p.add_argument("--config", required=True, help="key=value config file")
    p.add_argument("--port", type=int, help="override the configured port")
    p.add_argument("--format", choices=("text", "json"), default="text", help="startup message format (default: %(default)s)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.func(args, stdout)
    except CommandError as exc:
        stderr.write(f"opskit {args.command}: {exc}\n")
    except (SchemaError, MappingError, ConfigError) as exc:
        stderr.write(f"opskit {args.command}: {type(exc).__name__}: {exc}\n")
    return EXIT_ERROR


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
