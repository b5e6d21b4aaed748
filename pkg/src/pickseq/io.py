"""JSON documents for instances, allocations, sequences, prices and relations.

All indices in these documents are 1-based.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Allocation, DomainError, Instance, PickseqError, as_rational


class ParseError(PickseqError, ValueError):
    pass


def _load(text: str, what: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ParseError(f"{what}: expected a JSON object")
    return data


def _positive_int(data: dict, key: str, what: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ParseError(f"{what}: '{key}' must be a positive integer, got {value!r}")
    return value


def parse_rational(value, where: str = "") -> Fraction:
    if isinstance(value, (int, float, str)) and not isinstance(value, bool):
        try:
            return as_rational(value.strip() if isinstance(value, str) else value)
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(f"{where}not a rational number: {value!r}")


def format_rational(value: Fraction):
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_instance(text: str) -> Instance:
    data = _load(text, "instance")
    n = _positive_int(data, "agents", "instance")
    m = _positive_int(data, "objects", "instance")
    rows = data.get("weights")
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"instance: 'weights' must be a list of {n} rows")
    weights = []
    for i, row in enumerate(rows, start=1):
        if not isinstance(row, list) or len(row) != m:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"instance: row {i} must hold {m} weights, got {got}")
        parsed = []
        for l, raw in enumerate(row, start=1):
            w = parse_rational(raw, f"instance: row {i}, column {l}: ")
            if w < 0:
                raise ParseError(f"instance: row {i}, column {l}: negative weight {raw!r}")
            parsed.append(w)
        weights.append(tuple(parsed))
    return Instance(tuple(weights))


def instance_to_json(inst: Instance) -> dict:
    return {
        "agents": inst.num_agents,
        "objects": inst.num_objects,
        "weights": [[format_rational(w) for w in row] for row in inst.weights],
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_json(inst))


def parse_allocation(text: str, inst: Instance | None = None) -> Allocation:
    data = _load(text, "allocation")
    shares = data.get("shares")
    if not isinstance(shares, list) or not all(isinstance(s, list) for s in shares):
        raise ParseError("allocation: 'shares' must be a list of lists of object indices")
    for i, share in enumerate(shares, start=1):
        for obj in share:
            if isinstance(obj, bool) or not isinstance(obj, int) or obj < 1:
                raise ParseError(f"allocation: share {i} holds invalid object index {obj!r}")
    try:
        alloc = Allocation.from_one_based(shares)
        if inst is not None:
            inst.check_allocation(alloc)
    except (DomainError, IndexError) as exc:
        raise ParseError(f"allocation: {exc}") from None
    return alloc


def allocation_to_json(alloc: Allocation) -> dict:
    return {"shares": alloc.to_one_based()}


def serialize_allocation(alloc: Allocation) -> str:
    return json.dumps(allocation_to_json(alloc))


def parse_picks(picks, inst: Instance | None = None) -> tuple[int, ...]:
    if not isinstance(picks, list):
        raise ParseError("sequence: 'picks' must be a list of agent indices")
    for p in picks:
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise ParseError(f"sequence: invalid agent index {p!r}")
    seq = tuple(p - 1 for p in picks)
    if inst is not None:
        try:
            inst.check_sequence(seq)
        except (DomainError, IndexError) as exc:
            raise ParseError(f"sequence: {exc}") from None
    return seq


def parse_sequence(text: str, inst: Instance | None = None) -> tuple[int, ...]:
    return parse_picks(_load(text, "sequence").get("picks"), inst)


def sequence_to_json(seq: Sequence[int]) -> dict:
    return {"picks": [a + 1 for a in seq]}


def serialize_sequence(seq: Sequence[int]) -> str:
    return json.dumps(sequence_to_json(seq))


def prices_to_json(prices: Iterable[Fraction]) -> list[str]:
    return [f"{p.numerator}/{p.denominator}" for p in prices]


def parse_prices(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v, "prices: ") for v in values)


def relation_to_json(relation) -> dict:
    return {
        "edges": [
            {"sequence": [a + 1 for a in seq], "allocation": alloc.to_one_based()}
            for seq, alloc in relation.edges()
        ]
    }


def to_jsonable(obj):
    """Recursively turn Fractions into exact JSON values."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj
