"""JSON schemas for instances, objectives, results, and run manifests.

Instance files look like::

    {"n": 3,
     "costs": [0.2, 0.2, 0.0],
     "reward": {"type": "xos", "clauses": [[0.4, 0.4, 0.2], [0, 0, 0.4]]}}

with ``type`` one of additive / xos / table (``values`` carries the payload
for the other two). Teams serialize as sorted index arrays. Reals are
accepted either as JSON numbers or as decimal strings and are always
emitted in plain decimal notation.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Any

from .core import Additive, Instance, InputError, SetFunction, Table, XosClauses, bits, mask_of
from .objectives import Convex, Objective, Profit, Reward, Welfare


def _real(x: Any) -> float:
    if isinstance(x, str):
        try:
            return float(x)
        except ValueError as exc:
            raise InputError(f"bad decimal string {x!r}") from exc
    if isinstance(x, (int, float)):
        return float(x)
    raise InputError(f"expected a real number, got {type(x).__name__}")


def team_to_list(team: int) -> list[int]:
    return list(bits(team))


def team_from_list(agents: Any) -> int:
    if not isinstance(agents, (list, tuple)):
        raise InputError("a team must be a list of agent indices")
    return mask_of(int(i) for i in agents)


def reward_to_dict(f: SetFunction) -> dict:
    if isinstance(f, Additive):
        return {"type": "additive", "values": list(f.values)}
    if isinstance(f, XosClauses):
        return {"type": "xos", "clauses": [list(row) for row in f.clauses]}
    return {"type": "table", "values": list(f.values)}


def reward_from_dict(d: dict) -> SetFunction:
    kind = d.get("type")
    if kind == "additive":
        return Additive(tuple(_real(v) for v in d["values"]))
    if kind == "xos":
        return XosClauses(tuple(tuple(_real(v) for v in row) for row in d["clauses"]))
    if kind == "table":
        return Table(tuple(_real(v) for v in d["values"]))
    raise InputError(f"unknown reward type {kind!r}")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "costs": list(inst.costs),
        "reward": reward_to_dict(inst.reward),
    }


def instance_from_dict(d: dict) -> Instance:
    try:
        return Instance(
            n=int(d["n"]),
            costs=tuple(_real(c) for c in d["costs"]),
            reward=reward_from_dict(d["reward"]),
        )
    except KeyError as exc:
        raise InputError(f"instance file missing field {exc}") from exc


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_dict(json.load(fh))


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst), fh, indent=2)
        fh.write("\n")


def objective_to_dict(obj: Objective) -> dict:
    if isinstance(obj, Reward):
        return {"type": "reward"}
    if isinstance(obj, Profit):
        return {"type": "profit"}
    if isinstance(obj, Welfare):
        return {"type": "welfare"}
    return {
        "type": "convex",
        "weights": list(obj.weights),
        "components": [objective_to_dict(c) for c in obj.components],
    }


def objective_from_dict(d: dict) -> Objective:
    kind = d.get("type")
    if kind == "reward":
        return Reward()
    if kind == "profit":
        return Profit()
    if kind == "welfare":
        return Welfare()
    if kind == "convex":
        return Convex(
            components=tuple(objective_from_dict(c) for c in d["components"]),
            weights=tuple(_real(w) for w in d["weights"]),
        )
    raise InputError(f"unknown objective type {kind!r}")


def objective_from_name(name: str) -> Objective:
    simple = {"reward": Reward(), "profit": Profit(), "welfare": Welfare()}
    if name not in simple:
        raise InputError(f"unknown objective {name!r}")
    return simple[name]


def parse_objective_at_budget(spec: str) -> tuple[Objective, float]:
    """Parse CLI specs of the form ``welfare@1.0`` or ``profit@0.5``."""
    name, sep, budget = spec.partition("@")
    if not sep:
        raise InputError(f"expected objective@budget, got {spec!r}")
    return objective_from_name(name), _real(budget)


def jsonable(obj: Any) -> Any:
    """Dataclasses to dicts, team masks stay ints; inf becomes a string."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if not f.name.startswith("_")
        }
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# run manifests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility sidecar attached to every CLI output file."""

    command: list[str]
    instance_hashes: dict[str, str]
    tool_version: str
    seed: int | None
    wall_time_s: float


def file_sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest_path(out_path: str) -> str:
    return out_path + ".manifest.json"


def write_manifest(manifest: RunManifest, out_path: str) -> None:
    with open(manifest_path(out_path), "w", encoding="utf-8") as fh:
        json.dump(dataclasses.asdict(manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")
