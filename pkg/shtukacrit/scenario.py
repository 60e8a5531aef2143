"""
Scenario and report documents.

Input documents are JSON; every problem found while reading one is reported
with the JSON-pointer path of the offending value. Reports are emitted as
JSON with sorted keys so that identical inputs give identical bytes.
"""

import json
import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from shtukacrit.affweyl import AffineElement
from shtukacrit.brauer import (
    AlgebraSpec,
    ExtensionPlace,
    ExtensionShape,
    LegAssignment,
    LegPosition,
    Place,
    ramification_locus,
    validate_algebra,
)
from shtukacrit.config import SCHEMA_VERSION
from shtukacrit.coweight import BoundTuple, Coweight
from shtukacrit.criteria import VARIANTS, Scenario
from shtukacrit.errors import ScenarioError
from shtukacrit.exactq import to_rational
from shtukacrit.isospace import IsoSpaceSpec

logger = logging.getLogger(__name__)

# Commands a scenario may list for `report` to run, with their options.
COMMAND_OPTIONS: dict[str, dict[str, type]] = {
    "validate": {},
    "nonempty": {},
    "basic": {},
    "lau": {},
    "properness": {"variant": str, "exhaustive": bool},
    "quasicompact": {"subset": list},
    "irreducible": {"subset": list},
    "degeneration": {"all_placements": bool},
    "strata": {"place": str, "basic_only": bool},
}
REQUIRED_OPTIONS = {"irreducible": "subset", "strata": "place"}


@dataclass
class ScenarioFile:
    """A parsed scenario document."""

    schema_version: int
    scenario: Scenario
    placements: list[LegAssignment] = field(default_factory=list)
    commands: list[dict[str, Any]] = field(default_factory=list)


class _Issues:
    """Collects (path, message) pairs while a document is walked."""

    def __init__(self) -> None:
        self.items: list[tuple[str, str]] = []

    def add(self, path: str, message: str) -> None:
        self.items.append((path, message))

    def as_list(self, value: Any, path: str) -> list[Any]:
        """Return ``value`` if it is a list, otherwise record an issue and return []."""
        if isinstance(value, list):
            return value
        self.add(path, "expected a list")
        return []

    def check_keys(self, obj: Any, path: str, allowed: set[str]) -> bool:
        if not isinstance(obj, Mapping):
            self.add(path, "expected an object")
            return False
        for key in sorted(set(obj) - allowed):
            self.add(f"{path}/{key}", "unknown key")
        return True

    def raise_if_any(self) -> None:
        if self.items:
            raise ScenarioError(self.items)


def _decode(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ScenarioError([("", "document is not valid UTF-8")], original_error=e) from e
    if not data.strip():
        raise ScenarioError([("", "empty document")])
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        message = f"malformed JSON: {e.msg} (line {e.lineno}, column {e.colno})"
        raise ScenarioError([("", message)], original_error=e) from e


def _parse_algebra(obj: Any, path: str, issues: _Issues, strict: bool) -> AlgebraSpec | None:
    if not issues.check_keys(obj, path, {"d", "places", "invariants"}):
        return None
    before = len(issues.items)
    places = []
    for k, raw in enumerate(issues.as_list(obj.get("places", []), f"{path}/places")):
        if not issues.check_keys(raw, f"{path}/places/{k}", {"id", "deg"}):
            continue
        try:
            places.append(Place.from_dict(raw))
        except ValueError as e:
            issues.add(f"{path}/places/{k}", str(e))
    invariants = obj.get("invariants", {})
    if not isinstance(invariants, Mapping):
        issues.add(f"{path}/invariants", "expected an object")
        invariants = {}
    for key, raw in invariants.items():
        try:
            to_rational(raw)
        except ValueError as e:
            issues.add(f"{path}/invariants/{key}", str(e))
    if "d" not in obj:
        issues.add(f"{path}/d", "missing required key")
    if len(issues.items) > before:
        return None
    try:
        algebra = AlgebraSpec(obj["d"], invariants, places)
    except ValueError as e:
        issues.add(path, str(e))
        return None
    if strict:
        for violation in validate_algebra(algebra).violations:
            issues.add(f"{path}/invariants", violation)
    return algebra


def _parse_position(raw: Any, path: str, algebra: AlgebraSpec, issues: _Issues) -> LegPosition | None:
    if raw is None:
        return None
    if not issues.check_keys(raw, path, {"place", "frob"}):
        return None
    place_id = raw.get("place")
    if not isinstance(place_id, str) or place_id not in algebra.places:
        issues.add(f"{path}/place", f"undeclared place {place_id!r}")
        return None
    try:
        return LegPosition(algebra.place(place_id), raw.get("frob", 0))
    except (TypeError, ValueError) as e:
        issues.add(f"{path}/frob", str(e))
        return None


def _parse_legs(
    raw_legs: Any, path: str, algebra: AlgebraSpec, issues: _Issues
) -> tuple[dict[int, Coweight], dict[int, LegPosition | None]]:
    bounds: dict[int, Coweight] = {}
    positions: dict[int, LegPosition | None] = {}
    if not isinstance(raw_legs, list) or not raw_legs:
        issues.add(path, "expected a non-empty list of legs")
        return bounds, positions
    for k, raw in enumerate(raw_legs):
        leg_path = f"{path}/{k}"
        if not issues.check_keys(raw, leg_path, {"i", "lambda", "place", "frob"}):
            continue
        i = raw.get("i")
        if isinstance(i, bool) or not isinstance(i, int):
            issues.add(f"{leg_path}/i", "leg index must be an integer")
            continue
        if i in bounds:
            issues.add(f"{leg_path}/i", f"duplicate leg index {i}")
            continue
        try:
            bounds[i] = Coweight(raw.get("lambda") or ())
        except (TypeError, ValueError) as e:
            issues.add(f"{leg_path}/lambda", str(e))
            continue
        if "place" in raw:
            position = {"place": raw["place"], "frob": raw.get("frob", 0)}
            positions[i] = _parse_position(position, leg_path, algebra, issues)
        elif "frob" in raw:
            issues.add(f"{leg_path}/frob", "frob given without place")
    return bounds, positions


def _parse_placement(raw: Any, path: str, algebra: AlgebraSpec, issues: _Issues) -> LegAssignment | None:
    if not isinstance(raw, Mapping):
        issues.add(path, "expected an object")
        return None
    entries = {}
    for key, value in raw.items():
        try:
            i = int(key)
        except ValueError:
            issues.add(f"{path}/{key}", "leg keys must be integers")
            continue
        entries[i] = _parse_position(value, f"{path}/{key}", algebra, issues)
    return LegAssignment(entries)


def _check_command(raw: Any, path: str, issues: _Issues) -> None:
    name = raw.get("command") if isinstance(raw, Mapping) else None
    if not isinstance(name, str) or name not in COMMAND_OPTIONS:
        issues.add(path, f"expected an object naming one of {', '.join(COMMAND_OPTIONS)}")
        return
    options = COMMAND_OPTIONS[name]
    issues.check_keys(raw, path, {"command", *options})
    for key, kind in options.items():
        if key in raw and not isinstance(raw[key], kind):
            issues.add(f"{path}/{key}", f"expected {kind.__name__}")
    required = REQUIRED_OPTIONS.get(name)
    if required and required not in raw:
        issues.add(f"{path}/{required}", "missing required key")
    if name == "properness" and raw.get("variant", "theorem") not in VARIANTS:
        issues.add(f"{path}/variant", f"expected one of {', '.join(VARIANTS)}")
    subset = raw.get("subset", [])
    if isinstance(subset, list) and not all(isinstance(x, str) for x in subset):
        issues.add(f"{path}/subset", "expected a list of place ids")


def parse_scenario(data: bytes | str, strict: bool = True) -> ScenarioFile:
    """
    Parse and validate a scenario document.

    Args:
        data: UTF-8 JSON text
        strict: Also enforce reciprocity and the index condition on the algebra

    Returns:
        The parsed ScenarioFile

    Raises:
        ScenarioError: With every problem found, each tagged by its JSON path
    """
    doc = _decode(data)
    issues = _Issues()
    if not issues.check_keys(doc, "", {"schema_version", "scenario", "placements", "commands"}):
        issues.raise_if_any()
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        issues.add("/schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    body = doc.get("scenario")
    if not issues.check_keys(body, "/scenario", {"algebra", "legs", "idele_degree"}):
        issues.raise_if_any()
    algebra = _parse_algebra(body.get("algebra"), "/scenario/algebra", issues, strict)
    if algebra is None:
        issues.raise_if_any()
    bounds, positions = _parse_legs(body.get("legs"), "/scenario/legs", algebra, issues)

    placements = []
    for k, raw in enumerate(issues.as_list(doc.get("placements", []), "/placements")):
        placement = _parse_placement(raw, f"/placements/{k}", algebra, issues)
        if placement is not None:
            placements.append(placement)

    commands = issues.as_list(doc.get("commands", []), "/commands")
    for k, command in enumerate(commands):
        _check_command(command, f"/commands/{k}", issues)
    issues.raise_if_any()

    try:
        scenario = Scenario(
            algebra,
            BoundTuple(bounds),
            LegAssignment(positions),
            body.get("idele_degree"),
        )
        for placement in placements:
            scenario.with_legs(placement)
    except ValueError as e:
        raise ScenarioError([("/scenario", str(e))], original_error=e) from e
    logger.debug(
        f"Parsed scenario: {len(algebra.places)} places, {len(scenario.bounds)} legs"
    )
    return ScenarioFile(version, scenario, placements, list(commands))


def load_scenario(path: str, strict: bool = True) -> ScenarioFile:
    """
    Read and parse a scenario file.

    Raises:
        ScenarioError: If the file cannot be read or is invalid
    """
    try:
        with open(os.path.expanduser(path), "rb") as f:
            data = f.read()
    except OSError as e:
        error_msg = f"cannot read scenario file {path}: {e}"
        logger.error(error_msg)
        raise ScenarioError([("", error_msg)], original_error=e) from e
    return parse_scenario(data, strict=strict)


def parse_isospace(data: bytes | str) -> IsoSpaceSpec:
    """
    Parse an IsoSpaceSpec document ``{"algebra": …, "L": …, "pi": …}``.

    When ``L`` is omitted, L = F and each place carrying Π or ramification is
    its own place above itself.

    Raises:
        ScenarioError: With every problem found, each tagged by its JSON path
    """
    doc = _decode(data)
    issues = _Issues()
    if not issues.check_keys(doc, "", {"algebra", "L", "pi"}):
        issues.raise_if_any()
    algebra = _parse_algebra(doc.get("algebra"), "/algebra", issues, strict=True)
    pi = doc.get("pi", {})
    if not isinstance(pi, Mapping):
        issues.add("/pi", "expected an object")
        pi = {}
    for key, raw in pi.items():
        try:
            to_rational(raw)
        except ValueError as e:
            issues.add(f"/pi/{key}", str(e))
    issues.raise_if_any()

    degrees = {pid: place.degree for pid, place in algebra.places.items()}
    if "L" not in doc:
        ramified = {x.id for x in ramification_locus(algebra)}
        shape = ExtensionShape.trivial(set(pi) | ramified, degrees)
    else:
        shape = _parse_extension(doc["L"], degrees, issues)
        issues.raise_if_any()
    try:
        return IsoSpaceSpec(algebra, shape, pi)
    except ValueError as e:
        raise ScenarioError([("/pi", str(e))], original_error=e) from e


def _parse_extension(raw: Any, degrees: Mapping[str, int], issues: _Issues) -> ExtensionShape | None:
    if not issues.check_keys(raw, "/L", {"degree", "places"}):
        return None
    places = []
    for k, entry in enumerate(issues.as_list(raw.get("places", []), "/L/places")):
        path = f"/L/places/{k}"
        allowed = {"id", "over", "local_degree", "absolute_degree"}
        if not issues.check_keys(entry, path, allowed):
            continue
        try:
            local = entry.get("local_degree", 1)
            absolute = entry.get("absolute_degree", degrees.get(entry["over"], 1) * local)
            places.append(ExtensionPlace(entry["id"], entry["over"], local, absolute))
        except KeyError as e:
            issues.add(f"{path}/{e.args[0]}", "missing required key")
        except (TypeError, ValueError) as e:
            issues.add(path, str(e))
    try:
        return ExtensionShape(raw.get("degree"), places)
    except ValueError as e:
        issues.add("/L", str(e))
        return None


def parse_affine_tuple(data: bytes | str) -> list[AffineElement]:
    """
    Parse a JSON list of ``{"v": [...], "w": [...]}`` elements of one rank.

    Raises:
        ScenarioError: If the list is empty, malformed, or mixes ranks
    """
    doc = _decode(data)
    issues = _Issues()
    if not isinstance(doc, list) or not doc:
        raise ScenarioError([("", "expected a non-empty list of elements")])
    elements = []
    for k, raw in enumerate(doc):
        try:
            elements.append(AffineElement.from_dict(raw))
        except (AttributeError, TypeError, ValueError) as e:
            issues.add(f"/{k}", str(e))
    issues.raise_if_any()
    if len({e.d for e in elements}) != 1:
        raise ScenarioError([("", "elements have different ranks")])
    return elements


def dump_report(payload: Mapping[str, Any]) -> str:
    """Serialize a report: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _check_json_value(value: Any, path: str, issues: list[tuple[str, str]]) -> None:
    if isinstance(value, Mapping):
        for key, item in value.items():
            if not isinstance(key, str):
                issues.append((path, f"non-string key {key!r}"))
            _check_json_value(item, f"{path}/{key}", issues)
    elif isinstance(value, list):
        for k, item in enumerate(value):
            _check_json_value(item, f"{path}/{k}", issues)
    elif isinstance(value, float):
        issues.append((path, "floating point value in report"))
    elif value is not None and not isinstance(value, (str, int, bool)):
        issues.append((path, f"unsupported value of type {type(value).__name__}"))


def validate_report(payload: Any) -> list[tuple[str, str]]:
    """
    Check a report against the published envelope.

    A report is ``{"command": str, "schema_version": 1, "result": object}``
    holding only strings, integers, booleans, null, lists and objects;
    verdict objects carry ``criterion``, ``holds``, ``applicable`` and
    ``witnesses``.

    Returns:
        The list of issues, empty when the report conforms
    """
    issues: list[tuple[str, str]] = []
    if not isinstance(payload, Mapping):
        return [("", "report must be an object")]
    if set(payload) != {"command", "schema_version", "result"}:
        issues.append(("", f"unexpected envelope keys {sorted(payload)}"))
    if not isinstance(payload.get("command"), str):
        issues.append(("/command", "expected a string"))
    if payload.get("schema_version") != SCHEMA_VERSION:
        issues.append(("/schema_version", f"expected {SCHEMA_VERSION}"))
    if not isinstance(payload.get("result"), Mapping):
        issues.append(("/result", "expected an object"))
    _check_json_value(payload.get("result"), "/result", issues)
    _check_verdicts(payload.get("result"), "/result", issues)
    return issues


def _check_verdicts(value: Any, path: str, issues: list[tuple[str, str]]) -> None:
    if isinstance(value, Mapping):
        if "criterion" in value:
            for key, kind in (("holds", bool), ("applicable", bool), ("witnesses", list)):
                if not isinstance(value.get(key), kind):
                    issues.append((f"{path}/{key}", f"expected {kind.__name__}"))
        for key, item in value.items():
            _check_verdicts(item, f"{path}/{key}", issues)
    elif isinstance(value, list):
        for k, item in enumerate(value):
            _check_verdicts(item, f"{path}/{k}", issues)
