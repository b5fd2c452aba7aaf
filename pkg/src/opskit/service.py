"""Linked-data front end: dereferenceable term IRIs plus a query endpoint."""
from __future__ import annotations

import configparser
import html
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple
from urllib.parse import parse_qs, urlsplit

from opskit.ontology import PROFILES, OntologySchema, build_profile, schema_to_graph
from opskit.ontology.vocab import default_base, default_prefixes
from opskit.rdf import RDFS, Graph, InvalidIri, Iri, Literal, PrefixMap, Triple
from opskit.reasoner import materialize
from opskit.sparql import QuerySyntaxError, ResultTable, parse_query, evaluate
from opskit.turtle import parse_turtle, serialize_turtle

TURTLE_TYPE = "text/turtle"
HTML_TYPE = "text/html"
SPARQL_JSON_TYPE = "application/sparql-results+json"
TSV_TYPE = "text/tab-separated-values"


class NotFound(KeyError):
    pass


class ConfigError(ValueError):
    pass


class Format(str, Enum):
    TURTLE = "turtle"
    HTML = "html"
    SPARQL_JSON = "sparql-json"
    TSV = "tsv"


@dataclass
class ResourceDescription:
    focus: Iri
    outbound: List[Triple]
    inbound: List[Triple]
    labels: Dict[str, str] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not self.outbound and not self.inbound

    def graph(self) -> Graph:
        return Graph(self.outbound + self.inbound)

    def to_turtle(self, prefixes: Optional[PrefixMap] = None) -> str:
        return serialize_turtle(self.graph(), prefixes)

    def to_html(self, prefixes: Optional[PrefixMap] = None) -> str:
        title = self.labels.get("en") or next(iter(self.labels.values()), None) or self.focus.value
        rows = "".join(
            f"<tr><td>{html.escape(lang)}</td><td>{html.escape(text)}</td></tr>\n"
            for lang, text in sorted(self.labels.items())
        )
        return (
            "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
            f"<title>{html.escape(title)}</title>\n</head>\n<body>\n"
            f"<h1>{html.escape(title)}</h1>\n"
            f"<p><code>{html.escape(self.focus.value)}</code></p>\n"
            f"<p>{len(self.outbound)} outbound, {len(self.inbound)} inbound statements.</p>\n"
            + (f"<table>\n<tr><th>language</th><th>label</th></tr>\n{rows}</table>\n" if rows else "")
            + f'<pre class="rdf-description" data-format="{TURTLE_TYPE}">\n'
            + html.escape(self.to_turtle(prefixes))
            + "</pre>\n</body>\n</html>\n"
        )


_EMBEDDED = re.compile(r'<pre class="rdf-description"[^>]*>\n(.*?)</pre>', re.S)


def extract_embedded_turtle(page: str) -> str:
    m = _EMBEDDED.search(page)
    if m is None:
        raise ValueError("no embedded description block")
    return html.unescape(m.group(1))


def describe(focus: Iri, data: Graph, schema: Optional[OntologySchema] = None) -> ResourceDescription:
    """Outbound and inbound statements about ``focus``; raises NotFound when there are none."""
    g = data if schema is None else data | schema_to_graph(schema)[0]
    outbound = sorted(g.match(focus, None, None), key=lambda t: t.sort_key)
    inbound = sorted((t for t in g.match(None, None, focus) if t.subject != focus), key=lambda t: t.sort_key)
    if not outbound and not inbound:
        raise NotFound(focus.value)
    labels = {}
    for t in outbound:
        if t.predicate == RDFS.label and isinstance(t.object, Literal):
            labels.setdefault(t.object.language or "", t.object.lexical)
    return ResourceDescription(focus, outbound, inbound, labels)


def _accept_ranges(accept: Optional[str]) -> List[str]:
    """Media ranges ordered by q-value, header order breaking ties; q=0 dropped."""
    ranges = []
    for i, part in enumerate((accept or "").split(",")):
        fields = [f.strip() for f in part.split(";")]
        media = fields[0].lower()
        if not media:
            continue
        q = 1.0
        for param in fields[1:]:
            name, _, value = param.partition("=")
            if name.strip().lower() == "q":
                try:
                    q = float(value)
                except ValueError:
                    q = 0.0
        if q > 0:
            ranges.append((-q, i, media))
    return [media for _, _, media in sorted(ranges)]


def _classify(media: str) -> Optional[Format]:
    if media in ("text/turtle", "application/x-turtle", "text/n3") or (media.startswith("application/") and "rdf" in media):
        return Format.TURTLE
    if media in ("text/html", "application/xhtml+xml"):
        return Format.HTML
    if media in (SPARQL_JSON_TYPE, "application/json"):
        return Format.SPARQL_JSON
    if media in (TSV_TYPE, "text/tsv"):
        return Format.TSV
    return None


def negotiate(accept: Optional[str]) -> Format:
    """Document format for a resource request; machine clients get Turtle by default."""
    for media in _accept_ranges(accept):
        fmt = _classify(media)
        if fmt in (Format.TURTLE, Format.HTML):
            return fmt
    return Format.TURTLE


def negotiate_results(accept: Optional[str]) -> Format:
    for media in _accept_ranges(accept):
        fmt = _classify(media)
        if fmt in (Format.SPARQL_JSON, Format.TSV):
            return fmt
    return Format.SPARQL_JSON


def handle_sparql(query_text: str, data: Graph, prefixes: Optional[PrefixMap] = None) -> ResultTable:
    """Parse with the default prefix set pre-bound, then evaluate. Raises QuerySyntaxError."""
    return evaluate(parse_query(query_text, prefixes if prefixes is not None else default_prefixes()), data)


def query_graph(data: Graph, schema: OntologySchema, inference: bool = True) -> Graph:
    """The graph queries and dereferencing see: data plus schema, materialized when asked."""
    union = data | schema_to_graph(schema)[0]
    return materialize(union, schema) if inference else union


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    base: str = field(default_factory=default_base)
    profile: str = "core"
    data: List[Path] = field(default_factory=list)
    inference: bool = True
    prefixes: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        try:
            Iri(self.base)
        except InvalidIri as exc:
            raise ConfigError(f"invalid base IRI: {exc}") from None
        if self.profile not in PROFILES:
            raise ConfigError(f"unknown profile {self.profile!r}; expected one of {', '.join(PROFILES)}")
        if not 0 <= self.port <= 65535:
            raise ConfigError(f"port out of range: {self.port}")


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def parse_config(text: str, relative_to: Optional[Path] = None) -> ServiceConfig:
    """Flat ``key = value`` lines. ``data`` is comma separated; ``prefix.<name>`` adds bindings."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string("[service]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    sec = cp["service"]
    kwargs = {}
    prefixes = {}
    for key, value in sec.items():
        value = value.strip()
        if key == "bind":
            host, colon, port = value.rpartition(":")
            if not colon:
                host, port = value, "8080"
            try:
                kwargs["host"], kwargs["port"] = host or "127.0.0.1", int(port)
            except ValueError:
                raise ConfigError(f"bad bind address {value!r}") from None
        elif key == "base":
            kwargs["base"] = value.rstrip("/")
        elif key == "profile":
            kwargs["profile"] = value
        elif key == "data":
            paths = [Path(p.strip()) for p in value.split(",") if p.strip()]
            if relative_to is not None:
                paths = [p if p.is_absolute() else relative_to / p for p in paths]
            kwargs["data"] = paths
        elif key == "inference":
            if value.lower() not in _TRUE | _FALSE:
                raise ConfigError(f"inference must be a boolean, got {value!r}")
            kwargs["inference"] = value.lower() in _TRUE
        elif key.startswith("prefix."):
            prefixes[key[len("prefix."):]] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return ServiceConfig(prefixes=prefixes, **kwargs)


def load_config(path) -> ServiceConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), relative_to=path.parent)


@dataclass(frozen=True)
class Snapshot:
    """Immutable view served to request handlers."""

    schema: OntologySchema
    data: Graph
    graph: Graph  # data + schema, materialized when inference is on
    prefixes: PrefixMap
    inference: bool


def build_snapshot(config: ServiceConfig, data: Optional[Graph] = None) -> Snapshot:
    schema = build_profile(config.profile, config.base)
    prefixes = default_prefixes(config.base)
    prefixes.update(config.prefixes)
    if data is None:
        data = Graph()
        for path in config.data:
            g, pm = parse_turtle(Path(path).read_bytes())
            data.merge(g)
    return Snapshot(schema, data, query_graph(data, schema, config.inference), prefixes, config.inference)


@dataclass
class Response:
    status: int
    content_type: str
    body: bytes

    @property
    def text(self) -> str:
        return self.body.decode("utf-8")


def _text(status: int, message: str) -> Response:
    return Response(status, "text/plain; charset=utf-8", message.encode("utf-8"))


class LinkedDataService:
    """Transport-independent request handling over an atomically swappable snapshot."""

    def __init__(self, config: ServiceConfig, data: Optional[Graph] = None):
        self.config = config
        self._lock = threading.Lock()
        self._snapshot = build_snapshot(config, data)
        parts = urlsplit(config.base)
        self.origin = f"{parts.scheme}://{parts.netloc}"

    @property
    def snapshot(self) -> Snapshot:
        return self._snapshot

    def reload(self, data: Optional[Graph] = None) -> None:
        fresh = build_snapshot(self.config, data)
        with self._lock:
            self._snapshot = fresh

    def focus_for(self, path: str) -> Iri:
        return Iri(self.origin + path)

    def handle(self, method: str, target: str, headers: Mapping[str, str], body: bytes = b"") -> Response:
        headers = {k.lower(): v for k, v in headers.items()}
        parts = urlsplit(target)
        path = parts.path or "/"
        snap = self._snapshot
        if path == "/health":
            if method not in ("GET", "HEAD"):
                return _text(405, "method not allowed\n")
            return _text(200, "ok")
        if path == "/sparql":
            if method == "GET":
                query = parse_qs(parts.query).get("query", [None])[0]
            elif method == "POST":
                ctype = headers.get("content-type", "").split(";")[0].strip().lower()
                if ctype == "application/sparql-query":
                    query = body.decode("utf-8", errors="replace")
                else:
                    query = parse_qs(body.decode("utf-8", errors="replace")).get("query", [None])[0]
            else:
                return _text(405, "method not allowed\n")
            if not query:
                return _text(400, "missing 'query' parameter\n")
            try:
                table = handle_sparql(query, snap.graph, snap.prefixes)
            except QuerySyntaxError as exc:
                return _text(400, "".join(str(d) + "\n" for d in exc.diagnostics))
            if negotiate_results(headers.get("accept")) == Format.TSV:
                return Response(200, TSV_TYPE + "; charset=utf-8", table.to_tsv().encode("utf-8"))
            return Response(200, SPARQL_JSON_TYPE + "; charset=utf-8", table.to_sparql_json().encode("utf-8"))
        if method not in ("GET", "HEAD"):
            return _text(405, "method not allowed\n")
        try:
            focus = self.focus_for(path)
            desc = describe(focus, snap.graph)
        except (InvalidIri, NotFound):
            return _text(404, f"not found: {self.origin}{path}\n")
        if negotiate(headers.get("accept")) == Format.HTML:
            return Response(200, HTML_TYPE + "; charset=utf-8", desc.to_html(snap.prefixes).encode("utf-8"))
        return Response(200, TURTLE_TYPE + "; charset=utf-8", desc.to_turtle(snap.prefixes).encode("utf-8"))


class _Handler(BaseHTTPRequestHandler):
    service: LinkedDataService
    protocol_version = "HTTP/1.1"

    def _dispatch(self, method: str):
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        resp = self.service.handle(method, self.path, dict(self.headers.items()), body)
        self.send_response(resp.status)
        self.send_header("Content-Type", resp.content_type)
        self.send_header("Content-Length", str(len(resp.body)))
        if resp.content_type.startswith((TURTLE_TYPE, HTML_TYPE)):
            self.send_header("Vary", "Accept")
        self.end_headers()
        if method != "HEAD":
            self.wfile.write(resp.body)

    def do_GET(self):
        self._dispatch("GET")

    def do_HEAD(self):
        self._dispatch("HEAD")

    def do_POST(self):
        self._dispatch("POST")

    def log_message(self, format, *args):
        pass


def make_server(service: LinkedDataService, host: Optional[str] = None, port: Optional[int] = None) -> ThreadingHTTPServer:
    handler = type("Handler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer((host or service.config.host, service.config.port if port is None else port), handler)
    server.daemon_threads = True
    return server


def serve(config: ServiceConfig) -> None:
    server = make_server(LinkedDataService(config))
    try:
        server.serve_forever()
    finally:
        server.server_close()
