"""Instance documents: the JSON file format the CLI reads and writes.

A document is UTF-8 JSON with a required "schema": 1 field, a utility, a box
list, and an optional tie-break.  Case bundles add a "manifest" object so a
frozen construction can be reloaded and re-verified; parsers ignore keys they
do not know.
"""

from __future__ import annotations

import json
from pathlib import Path

from .cases import CaseBundle
from .core import (
    Box,
    ConcaveSumUtility,
    ExplicitTableUtility,
    FiniteDistribution,
    Instance,
    MaxUtility,
    OrderWeightedUtility,
    PiecewiseLinear,
    SprUtility,
    Utility,
)
from .errors import ValidationError
from .policy import TieBreak
from .reservation import ReservationValue

SCHEMA_VERSION = 1


def _table_to_json(table: PiecewiseLinear) -> list[list[float]]:
    return [[x, y] for x, y in table.points]


def _table_from_json(field: str, raw) -> PiecewiseLinear:
    try:
        return PiecewiseLinear(tuple((float(x), float(y)) for x, y in raw))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{field}: expected [[x, y], ...] nodes ({exc})") from None


def utility_to_json(utility: Utility) -> dict:
    if isinstance(utility, MaxUtility):
        return {"kind": "max"}
    if isinstance(utility, SprUtility):
        return {
            "kind": "spr",
            "base": _table_to_json(utility.base),
            "bonus": _table_to_json(utility.bonus),
        }
    if isinstance(utility, OrderWeightedUtility):
        return {"kind": "order_weighted", "weights": list(utility.weights)}
    if isinstance(utility, ConcaveSumUtility):
        return {"kind": "concave_sum", "psi": _table_to_json(utility.table)}
    if isinstance(utility, ExplicitTableUtility):
        return {
            "kind": "explicit",
            "table": [[list(key), value] for key, value in utility.entries],
        }
    raise ValidationError(f"cannot serialize utility kind '{utility.kind}'")


def utility_from_json(raw) -> Utility:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ValidationError("utility: expected an object with a 'kind' field")
    kind = raw["kind"]
    if kind == "max":
        return MaxUtility()
    if kind == "spr":
        for fld in ("base", "bonus"):
            if fld not in raw:
                raise ValidationError(f"utility.{fld}: missing for kind 'spr'")
        return SprUtility(
            _table_from_json("utility.base", raw["base"]),
            _table_from_json("utility.bonus", raw["bonus"]),
        )
    if kind == "order_weighted":
        if "weights" not in raw:
            raise ValidationError("utility.weights: missing for kind 'order_weighted'")
        return OrderWeightedUtility(tuple(float(w) for w in raw["weights"]))
    if kind == "concave_sum":
        if "psi" not in raw:
            raise ValidationError("utility.psi: missing for kind 'concave_sum'")
        return ConcaveSumUtility(_table_from_json("utility.psi", raw["psi"]))
    if kind == "explicit":
        if "table" not in raw:
            raise ValidationError("utility.table: missing for kind 'explicit'")
        try:
            entries = tuple(
                (tuple(float(x) for x in key), float(value)) for key, value in raw["table"]
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"utility.table: expected [[values...], u] rows ({exc})") from None
        return ExplicitTableUtility(entries)
    raise ValidationError(f"utility.kind: unknown utility kind '{kind}'")


def instance_to_document(
    instance: Instance,
    tie_break: TieBreak | None = None,
    manifest: dict | None = None,
) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "utility": utility_to_json(instance.utility),
        "boxes": [
            {"cost": b.cost, "atoms": [[v, p] for v, p in b.dist.atoms]}
            for b in instance.boxes
        ],
    }
    if tie_break is not None:
        doc["tie_break"] = list(tie_break.priority)
    if manifest is not None:
        doc["manifest"] = manifest
    return doc


def instance_from_document(doc) -> tuple[Instance, TieBreak | None]:
    if not isinstance(doc, dict):
        raise ValidationError("document: expected a JSON object")
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValidationError(f"schema: expected {SCHEMA_VERSION}, got {doc.get('schema')!r}")
    if "utility" not in doc:
        raise ValidationError("utility: missing")
    if "boxes" not in doc or not isinstance(doc["boxes"], list):
        raise ValidationError("boxes: missing or not a list")

    utility = utility_from_json(doc["utility"])
    boxes = []
    for i, raw in enumerate(doc["boxes"], start=1):
        where = f"boxes[{i - 1}]"
        if not isinstance(raw, dict) or "cost" not in raw or "atoms" not in raw:
            raise ValidationError(f"{where}: expected an object with 'cost' and 'atoms'")
        try:
            atoms = tuple((float(v), float(p)) for v, p in raw["atoms"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{where}.atoms: expected [[value, probability], ...] ({exc})") from None
        try:
            boxes.append(Box(i, float(raw["cost"]), FiniteDistribution(atoms)))
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from None
    instance = Instance(tuple(boxes), utility)

    if isinstance(utility, ConcaveSumUtility):
        reach = sum(b.dist.max_value for b in boxes) + instance.max_support_value()
        if utility.table.last_x < reach:
            raise ValidationError(
                f"utility.psi: table ends at {utility.table.last_x} but reservation "
                f"queries can reach sum {reach}"
            )

    tie_break = None
    if "tie_break" in doc:
        tie_break = TieBreak(tuple(int(i) for i in doc["tie_break"]))
        try:
            tie_break.validate_for(instance)
        except ValidationError as exc:
            raise ValidationError(f"tie_break: {exc}") from None
    return instance, tie_break


def parse_instance(path) -> Instance:
    """Load and validate an instance file, ignoring any bundle manifest."""
    instance, _ = load_instance_file(path)
    return instance


def load_instance_file(path) -> tuple[Instance, TieBreak | None]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return instance_from_document(doc)


def bundle_to_document(bundle: CaseBundle) -> dict:
    manifest = {
        "case": bundle.label,
        "params": _jsonable(bundle.params),
        "expected_gap": bundle.expected_gap,
        "notes": bundle.notes,
    }
    return instance_to_document(bundle.instance, bundle.tie_break, manifest)


def bundle_from_document(doc) -> CaseBundle:
    instance, tie_break = instance_from_document(doc)
    manifest = doc.get("manifest")
    if not isinstance(manifest, dict) or "case" not in manifest:
        raise ValidationError("manifest: missing or lacks a 'case' field")
    if tie_break is None:
        from .policy import default_tie_break

        tie_break = default_tie_break(instance)
    return CaseBundle(
        label=manifest["case"],
        instance=instance,
        tie_break=tie_break,
        expected_gap=manifest.get("expected_gap", "positive"),
        params=manifest.get("params", {}),
        notes=manifest.get("notes", ""),
    )


def load_bundle_file(path) -> CaseBundle:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return bundle_from_document(doc)


def save_document(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def reservation_to_json(value: ReservationValue) -> dict:
    return {
        "kind": value.kind,
        "value": None if value.is_infinite else value.as_float(),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj
