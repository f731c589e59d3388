"""Reading and writing instance JSON files."""

import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import jsonschema
from jsonschema import ValidationError

from ..core.robust import validate_uncertainty
from ..errors import InstanceFormatError, InstanceParseError
from .mdp import MdpInstance, validate_instance
from .rational import format_rational, parse_rational

logger = logging.getLogger(__name__)

INSTANCE_SCHEMA_PATH = Path(__file__).parent.parent.parent.parent / "config" / "instance.schema.json"

_schema_cache: Dict[Path, Dict[str, Any]] = {}


def _load_schema(schema_path: Optional[Path] = None) -> Dict[str, Any]:
    path = schema_path or INSTANCE_SCHEMA_PATH
    if path not in _schema_cache:
        if not path.exists():
            raise InstanceParseError(f"Instance schema not found: {path}")
        try:
            with open(path, "r") as f:
                _schema_cache[path] = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise InstanceParseError(f"Invalid instance schema {path}: {e}")
    return _schema_cache[path]


def _radius_denominators(raw: Dict[str, Any], rationalize: bool, max_denominator: int):
    block = raw.get("uncertainty")
    if not isinstance(block, dict) or not isinstance(block.get("radii"), list):
        return []
    return [
        parse_rational(x, rationalize=rationalize, max_denominator=max_denominator).denominator
        for row in block["radii"] if isinstance(row, list)
        for x in row
    ]


def parse_instance(
    raw: Any,
    rationalize: bool = False,
    max_denominator: int = 10**6,
    schema_path: Optional[Path] = None,
):
    """
    Validate decoded instance JSON. Returns the instance and its uncertainty
    set, or None when the file has no "uncertainty" block.
    """
    try:
        jsonschema.validate(instance=raw, schema=_load_schema(schema_path))
    except ValidationError as e:
        path = " -> ".join(str(p) for p in e.path) if e.path else "root"
        raise InstanceFormatError(f"Instance validation error at {path}: {e.message}")

    extra = _radius_denominators(raw, rationalize, max_denominator)
    mdp = validate_instance(raw, rationalize=rationalize, max_denominator=max_denominator, extra_denominators=extra)
    uncertainty = None
    if "uncertainty" in raw:
        uncertainty = validate_uncertainty(mdp, raw["uncertainty"], rationalize=rationalize)
    return mdp, uncertainty


def load_instance(path: Path, rationalize: bool = False, max_denominator: int = 10**6):
    """Read and validate an instance file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InstanceParseError(f"Cannot read instance file {path}: {e}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceParseError(f"Invalid JSON in {path}: {e}")
    mdp, uncertainty = parse_instance(raw, rationalize=rationalize, max_denominator=max_denominator)
    logger.info(f"Loaded instance {path.name}: |S|={mdp.n_states}, |A|={mdp.n_actions}, m={mdp.m}")
    return mdp, uncertainty


def dump_instance(mdp: MdpInstance, uncertainty=None) -> Dict[str, Any]:
    """JSON-ready dict with every rational written as "num/den"."""
    data: Dict[str, Any] = {
        "n_states": mdp.n_states,
        "n_actions": mdp.n_actions,
        "m": mdp.m,
        "rewards": [[format_rational(q) for q in row] for row in mdp.rewards],
        "transitions": [
            [[format_rational(p) for p in dist] for dist in rows] for rows in mdp.transitions
        ],
    }
    if mdp.action_labels:
        data["action_labels"] = list(mdp.action_labels)
    if uncertainty is not None:
        data["uncertainty"] = {
            "norm": uncertainty.norm.value,
            "radii": [[format_rational(Fraction(a)) for a in row] for row in uncertainty.radii],
        }
    return data


def canonical_json(mdp: MdpInstance, uncertainty=None) -> str:
    return json.dumps(dump_instance(mdp, uncertainty), indent=2, sort_keys=True) + "\n"


def instance_digest(mdp: MdpInstance, uncertainty=None) -> str:
    """SHA-256 of the canonical instance JSON."""
    return hashlib.sha256(canonical_json(mdp, uncertainty).encode("utf-8")).hexdigest()


def write_instance(path: Path, mdp: MdpInstance, uncertainty=None) -> Path:
    """Write the canonical JSON form; identical inputs give identical bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(mdp, uncertainty))
    logger.info(f"Wrote instance to {path}")
    return path
