"""Instance and solution documents.

Wire format is JSON with an explicit schema tag, integer meters, and
canonical ordering (sorted keys, entities sorted by id, two-space
indent, trailing newline) so that identical inputs produce identical
bytes. Parsing is strict: unknown fields, unknown methods, or values of
the wrong shape are rejected with distinct error types.
"""

from __future__ import annotations

import json

from gritter.bounds import BoundReport
from gritter.model import (
    Crossroad,
    GritterError,
    Method,
    Road,
    RoadNetwork,
    effective_length_m,
    validate_network,
)
from gritter.plans import MaintenancePlan, Solution, plan_deadhead_m, plan_to_tour

INSTANCE_SCHEMA = "road-network/1"
SOLUTION_SCHEMA = "maintenance-solution/1"
DEFAULT_LIMIT_KM = 90.0


class MalformedDocumentError(GritterError):
    pass


class SchemaMismatchError(GritterError):
    pass


class NetworkValidationError(GritterError):
    pass


def _km(meters: int) -> float:
    return round(meters / 1000.0, 3)


def _dump(doc) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


def _load(data) -> dict:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocumentError(f"not utf-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocumentError("top level must be an object")
    return doc


def _check_schema(doc: dict, expected: str):
    schema = doc.get("schema")
    if schema is None:
        raise SchemaMismatchError("missing schema tag")
    if schema != expected:
        raise SchemaMismatchError(f"expected schema {expected!r}, got {schema!r}")


def _fields(entry: dict, required: dict, optional: dict, where: str) -> dict:
    if not isinstance(entry, dict):
        raise MalformedDocumentError(f"{where}: must be an object")
    unknown = set(entry) - set(required) - set(optional)
    if unknown:
        raise MalformedDocumentError(
            f"{where}: unknown field(s) {', '.join(sorted(unknown))}"
        )
    out = {}
    for name, kind in required.items():
        if name not in entry:
            raise MalformedDocumentError(f"{where}: missing field {name!r}")
        out[name] = _typed(entry[name], kind, f"{where}.{name}")
    for name, kind in optional.items():
        if name in entry:
            out[name] = _typed(entry[name], kind, f"{where}.{name}")
    return out


def _typed(value, kind, where):
    if kind == "str":
        if not isinstance(value, str):
            raise MalformedDocumentError(f"{where}: expected string")
        return value
    if kind == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            raise MalformedDocumentError(f"{where}: expected integer")
        return value
    if kind == "num":
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise MalformedDocumentError(f"{where}: expected number")
        return float(value)
    if kind == "list":
        if not isinstance(value, list):
            raise MalformedDocumentError(f"{where}: expected list")
        return value
    raise AssertionError(kind)


# ------------------------------------------------------------- instances


def parse_instance(data):
    """Strict parse to a validated network. Returns (network, defaults)
    where defaults currently carries limit_km."""
    doc = _load(data)
    _check_schema(doc, INSTANCE_SCHEMA)
    unknown = set(doc) - {"schema", "crossroads", "roads", "defaults"}
    if unknown:
        raise MalformedDocumentError(
            f"unknown field(s) {', '.join(sorted(unknown))}"
        )
    crossroads = []
    seen = set()
    for entry in _typed(doc.get("crossroads", []), "list", "crossroads"):
        f = _fields(
            entry,
            {"id": "str", "x": "num", "y": "num"},
            {"storage": "list"},
            "crossroad",
        )
        if f["id"] in seen:
            raise MalformedDocumentError(f"duplicate crossroad id {f['id']!r}")
        seen.add(f["id"])
        storage = []
        for s in f.get("storage", []):
            if s not in (Method.CHEMICAL.value, Method.INERT.value):
                raise MalformedDocumentError(
                    f"crossroad {f['id']}: unknown storage {s!r}"
                )
            storage.append(s)
        crossroads.append(
            Crossroad(id=f["id"], x=f["x"], y=f["y"], storage=frozenset(storage))
        )
    roads = []
    rseen = set()
    for entry in _typed(doc.get("roads", []), "list", "roads"):
        f = _fields(
            entry,
            {
                "id": "str",
                "endpoints": "list",
                "length_m": "int",
                "method": "str",
            },
            {"priority": "int", "multiplicity": "int"},
            "road",
        )
        if f["id"] in rseen:
            raise MalformedDocumentError(f"duplicate road id {f['id']!r}")
        rseen.add(f["id"])
        eps = f["endpoints"]
        if len(eps) != 2 or not all(isinstance(e, str) for e in eps):
            raise MalformedDocumentError(
                f"road {f['id']}: endpoints must be two crossroad ids"
            )
        for e in eps:
            if e not in seen:
                raise MalformedDocumentError(
                    f"road {f['id']}: unknown crossroad {e!r}"
                )
        try:
            method = Method(f["method"])
        except ValueError:
            raise MalformedDocumentError(
                f"road {f['id']}: unknown method {f['method']!r}"
            ) from None
        roads.append(
            Road(
                id=f["id"],
                endpoints=(eps[0], eps[1]),
                length_m=f["length_m"],
                method=method,
                priority=f.get("priority", 1),
                multiplicity=f.get("multiplicity", 1),
            )
        )
    defaults = {"limit_km": DEFAULT_LIMIT_KM}
    if "defaults" in doc:
        f = _fields(doc["defaults"], {}, {"limit_km": "num"}, "defaults")
        defaults.update(f)
    net = RoadNetwork(crossroads=crossroads, roads=roads)
    problems = validate_network(net)
    if problems:
        raise NetworkValidationError("; ".join(problems))
    return net, defaults


def write_instance(net: RoadNetwork, defaults=None) -> bytes:
    doc = {
        "schema": INSTANCE_SCHEMA,
        "crossroads": [
            {
                "id": c.id,
                "x": c.x,
                "y": c.y,
                "storage": sorted(c.storage),
            }
            for c in net.crossroads
        ],
        "roads": [
            {
                "id": r.id,
                "endpoints": list(r.endpoints),
                "length_m": r.length_m,
                "method": r.method.value,
                "priority": r.priority,
                "multiplicity": r.multiplicity,
            }
            for r in net.roads
        ],
        "defaults": {"limit_km": float((defaults or {}).get("limit_km", DEFAULT_LIMIT_KM))},
    }
    return _dump(doc)


# ------------------------------------------------------------- solutions


def bound_to_dict(report: BoundReport) -> dict:
    out = {
        "kind": report.kind,
        "bound_km": _km(report.bound_m),
        "status": report.status,
        "cuts": report.cuts,
        "seconds": round(report.seconds, 3),
    }
    if report.target:
        out["target"] = report.target
    if report.detail:
        out["detail"] = report.detail
    return out


def solution_summary(net: RoadNetwork, sol: Solution, limit_m: int) -> dict:
    cars = len(sol.plans)
    maintaining = sum(
        effective_length_m(net.road(rid))
        for p in sol.plans
        for rid in p.maintained
    )
    deadhead = sum(plan_deadhead_m(net, p) for p in sol.plans)
    total = cars * limit_m
    unused = total - maintaining - deadhead

    def pct(x):
        return round(100.0 * x / total, 2) if total else 0.0

    return {
        "cars": cars,
        "limit_km": _km(limit_m),
        "total_limit_km": _km(total),
        "maintaining_km": _km(maintaining),
        "deadhead_km": _km(deadhead),
        "unused_km": _km(unused),
        "maintaining_pct": pct(maintaining),
        "deadhead_pct": pct(deadhead),
        "unused_pct": pct(unused),
    }


def write_solution(
    net: RoadNetwork,
    sol: Solution,
    limit_m: int,
    bounds=(),
    include_tours: bool = False,
    timing=None,
) -> bytes:
    """Canonical solution document with a recomputed summary. Certified
    bounds ride along in their own block; tours are opt-in because they
    dominate the output size."""
    plans = []
    for p in sorted(sol.plans, key=lambda p: p.car):
        entry = {
            "car": p.car,
            "method": p.method.value,
            "depot": p.depot,
            "maintained": sorted(p.maintained),
            "deadhead": sorted(p.deadhead),
            "load_km": _km(
                sum(effective_length_m(net.road(r)) for r in p.maintained)
                + plan_deadhead_m(net, p)
            ),
        }
        if include_tours:
            entry["tour"] = [
                {
                    "road": s.road,
                    "from": s.frm,
                    "to": s.to,
                    "action": s.action,
                }
                for s in plan_to_tour(net, p)
            ]
        plans.append(entry)
    doc = {
        "schema": SOLUTION_SCHEMA,
        "limit_km": _km(limit_m),
        "plans": plans,
        "summary": solution_summary(net, sol, limit_m),
    }
    if bounds:
        doc["bounds"] = [bound_to_dict(b) for b in bounds]
    if timing is not None:
        doc["timing"] = {"solve_seconds": round(timing, 3)}
    return _dump(doc)


def parse_solution(data, net: RoadNetwork) -> Solution:
    doc = _load(data)
    _check_schema(doc, SOLUTION_SCHEMA)
    unknown = set(doc) - {"schema", "limit_km", "plans", "summary", "bounds", "timing"}
    if unknown:
        raise MalformedDocumentError(
            f"unknown field(s) {', '.join(sorted(unknown))}"
        )
    plans = []
    for entry in _typed(doc.get("plans", []), "list", "plans"):
        f = _fields(
            entry,
            {
                "car": "str",
                "method": "str",
                "depot": "str",
                "maintained": "list",
                "deadhead": "list",
            },
            {"load_km": "num", "tour": "list"},
            "plan",
        )
        try:
            method = Method(f["method"])
        except ValueError:
            raise MalformedDocumentError(
                f"plan {f['car']}: unknown method {f['method']!r}"
            ) from None
        for name in ("maintained", "deadhead"):
            if not all(isinstance(x, str) for x in f[name]):
                raise MalformedDocumentError(
                    f"plan {f['car']}: {name} must be road ids"
                )
        plans.append(
            MaintenancePlan(
                car=f["car"],
                method=method,
                depot=f["depot"],
                maintained=frozenset(f["maintained"]),
                deadhead=frozenset(f["deadhead"]),
            )
        )
    return Solution(plans=tuple(plans))


# --------------------------------------------------------------- GeoJSON


def export_geojson(net: RoadNetwork, sol: Solution = None) -> bytes:
    """Plans (or the bare network) as a FeatureCollection for external
    map viewers. Coordinates are the instance's planar x/y."""
    coord = {c.id: [c.x, c.y] for c in net.crossroads}
    role = {}
    car = {}
    if sol is not None:
        for p in sorted(sol.plans, key=lambda p: p.car):
            for rid in sorted(p.maintained):
                role.setdefault(rid, "maintain")
                car.setdefault(rid, p.car)
            for rid in sorted(p.deadhead):
                role.setdefault(rid, "deadhead")
                car.setdefault(rid, p.car)
    features = []
    for r in net.roads:
        u, v = r.endpoints
        props = {
            "id": r.id,
            "method": r.method.value,
            "priority": r.priority,
            "length_m": r.length_m,
        }
        if r.id in role:
            props["role"] = role[r.id]
            props["car"] = car[r.id]
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [coord[u], coord[v]],
                },
                "properties": props,
            }
        )
    for c in net.crossroads:
        if c.storage:
            features.append(
                {
                    "type": "Feature",
                    "geometry": {"type": "Point", "coordinates": [c.x, c.y]},
                    "properties": {"id": c.id, "storage": sorted(c.storage)},
                }
            )
    return _dump({"type": "FeatureCollection", "features": features})
