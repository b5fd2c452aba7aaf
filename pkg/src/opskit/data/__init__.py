"""Golden files shipped with the package, and the code that regenerates them.

    python -m opskit.data    # rewrite every file in this directory
"""
from pathlib import Path
from typing import Callable, Dict

from opskit.demo import DEMO_CSV, DEMO_MAPPING, demo_graph, demo_prefixes
from opskit.ontology import build_profile, build_vcps_fixture, schema_to_turtle
from opskit.ontology.vocab import DEFAULT_BASE
from opskit.turtle import serialize_turtle

DATA_DIR = Path(__file__).resolve().parent

SERVICE_CONFIG = """\
# sample linked-data service config; paths are relative to this file
bind = 127.0.0.1:8080
base = http://purl.org/socialparticipation/ops
profile = expanded
data = demo.ttl
inference = on
prefix.demo = http://example.org/demo/
"""


def generators() -> Dict[str, Callable[[], str]]:
    return {
        "ops-core.ttl": lambda: schema_to_turtle(build_profile("core", DEFAULT_BASE)),
        "ops-restricted.ttl": lambda: schema_to_turtle(build_profile("restricted", DEFAULT_BASE)),
        "ops-expanded.ttl": lambda: schema_to_turtle(build_profile("expanded", DEFAULT_BASE)),
        "vcps-fixture.ttl": lambda: schema_to_turtle(build_vcps_fixture()),
        "demo.ttl": lambda: serialize_turtle(demo_graph(), demo_prefixes()),
        "demo-participants.csv": lambda: DEMO_CSV,
        "demo-mapping.ini": lambda: DEMO_MAPPING,
        "service.conf": lambda: SERVICE_CONFIG,
    }


def data_path(name: str) -> Path:
    return DATA_DIR / name


def regenerate(directory: Path = DATA_DIR) -> None:
    for name, make in generators().items():
        (directory / name).write_text(make(), encoding="utf-8", newline="\n")
