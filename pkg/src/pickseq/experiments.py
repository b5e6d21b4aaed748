"""Random instances and the exhaustive (efficiency, fairness) census."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from .ceei import ceei_test
from .core import Allocation, Instance
from .efficiency import EfficiencyLevel
from .fairness import FairnessLevel

log = logging.getLogger(__name__)

MODELS = ("uniform", "gaussian")


@dataclass(frozen=True)
class GeneratorConfig:
    model: str = "uniform"
    num_agents: int = 3
    num_objects: int = 10
    seed: int = 0
    low: int = 1
    high: int = 100
    center_low: int = 10
    center_high: int = 100
    noise: float = 0.1

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}, expected one of {MODELS}")
        if self.num_agents < 1 or self.num_objects < 1:
            raise ValueError("need at least one agent and one object")
        if not 0 <= self.low <= self.high:
            raise ValueError(f"invalid uniform range [{self.low}, {self.high}]")
        if not 0 <= self.center_low <= self.center_high:
            raise ValueError(f"invalid center range [{self.center_low}, {self.center_high}]")
        if self.noise < 0:
            raise ValueError("noise must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


def generate_instance(config: GeneratorConfig) -> Instance:
    rng = np.random.default_rng(config.seed)
    shape = (config.num_agents, config.num_objects)
    if config.model == "uniform":
        weights = rng.integers(config.low, config.high, size=shape, endpoint=True)
    else:
        centers = rng.integers(config.center_low, config.center_high, size=config.num_objects, endpoint=True)
        draws = rng.normal(centers, config.noise * centers, size=shape)
        weights = np.clip(np.rint(draws), 0, None).astype(np.int64)
    return Instance(tuple(tuple(int(w) for w in row) for row in weights))


def instance_seeds(master_seed: int, count: int) -> list[int]:
    children = np.random.SeedSequence(master_seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


@dataclass
class ClassificationGrid:
    """Allocation counts indexed by [efficiency level][fairness level]."""

    counts: np.ndarray = field(default_factory=lambda: np.zeros((3, 6), dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __getitem__(self, key: tuple[EfficiencyLevel, FairnessLevel]) -> int:
        eff, fair = key
        return int(self.counts[eff, fair])

    def count_at_least(self, efficiency: EfficiencyLevel, fairness: FairnessLevel) -> int:
        return int(self.counts[efficiency:, fairness:].sum())

    def to_dict(self) -> dict:
        return {
            e.name: {f.name: int(self.counts[e, f]) for f in FairnessLevel} for e in EfficiencyLevel
        }


def _owner_table(inst: Instance) -> np.ndarray:
    rows = list(product(range(inst.num_agents), repeat=inst.num_objects))
    return np.array(rows, dtype=np.int8).reshape(len(rows), inst.num_objects)


def _sequenceable_owners(iw, ranked, owners) -> bool:
    # greedy sequencing on integer weights; any valid pick order decides correctly
    m = len(owners)
    remaining = (1 << m) - 1
    held = [0] * len(iw)
    for obj, agent in enumerate(owners):
        held[agent] |= 1 << obj
    while remaining:
        for i, objs in enumerate(ranked):
            if not held[i] & remaining:
                continue
            top = None
            pick = -1
            for obj in objs:
                if not remaining >> obj & 1:
                    continue
                if top is None:
                    top = iw[i][obj]
                elif iw[i][obj] != top:
                    break
                if held[i] >> obj & 1:
                    pick = obj
                    break
            if pick >= 0:
                remaining &= ~(1 << pick)
                break
        else:
            return False
    return True


def _pareto_mask(own: np.ndarray) -> np.ndarray:
    """Rows of ``own`` (utility vectors) that no other row dominates."""
    uniq, inverse = np.unique(own, axis=0, return_inverse=True)
    order = np.lexsort(uniq.T[::-1])[::-1]  # lexicographically decreasing
    frontier: list[np.ndarray] = []
    optimal = np.zeros(len(uniq), dtype=bool)
    for idx in order:
        u = uniq[idx]
        # a dominator is lexicographically larger, so it is already on the frontier
        if frontier and np.any(np.all(np.array(frontier) >= u, axis=1)):
            continue
        frontier.append(u)
        optimal[idx] = True
    return optimal[np.asarray(inverse).reshape(-1)]


def classify_all(inst: Instance, ceei_decider=ceei_test) -> tuple[ClassificationGrid, np.ndarray, np.ndarray]:
    """Classify every allocation of ``inst``.

    Returns the grid plus per-allocation efficiency and fairness levels, in
    the lexicographic owner-vector order of :func:`pickseq.core.all_allocations`.
    """
    inst.check_enumerable()
    n, m = inst.num_agents, inst.num_objects
    weights = inst.weight_array()
    owners = _owner_table(inst)
    k = len(owners)

    # value[k, i, j]: agent i's utility for agent j's share in allocation k
    value = np.empty((k, n, n), dtype=weights.dtype)
    for j in range(n):
        value[:, :, j] = (owners == j).astype(weights.dtype) @ weights.T
    own = np.stack([value[:, i, i] for i in range(n)], axis=1)
    share_min = value.min(axis=2)
    share_max = value.max(axis=2)
    maxmin = share_min.max(axis=0)
    minmax = share_max.min(axis=0)
    totals = weights.sum(axis=1)

    envy_free = np.all(own >= share_max, axis=1)
    meets_minmax = np.all(own >= minmax, axis=1)
    meets_pfs = np.all(own * n >= totals, axis=1)
    meets_maxmin = np.all(own >= maxmin, axis=1)

    iw = inst.integer_weights
    ranked = [sorted(range(m), key=lambda o, r=row: (-r[o], o)) for row in iw]
    sequenceable = np.array([_sequenceable_owners(iw, ranked, row.tolist()) for row in owners], dtype=bool)
    pareto = _pareto_mask(own)

    efficiency = np.where(
        ~sequenceable, EfficiencyLevel.NS, np.where(pareto, EfficiencyLevel.PO, EfficiencyLevel.SnP)
    ).astype(np.int8)
    fairness = np.full(k, FairnessLevel.NONE, dtype=np.int8)
    fairness[meets_maxmin] = FairnessLevel.MFS
    fairness[meets_pfs] = FairnessLevel.PFS
    fairness[meets_minmax] = FairnessLevel.mFS
    fairness[envy_free] = FairnessLevel.EF
    for idx in np.flatnonzero(envy_free & sequenceable):
        alloc = Allocation.from_owners(owners[idx].tolist(), n)
        if ceei_decider(inst, alloc) is not None:
            fairness[idx] = FairnessLevel.CEEI

    grid = ClassificationGrid()
    np.add.at(grid.counts, (efficiency, fairness), 1)
    return grid, efficiency, fairness


def _classify_one(args: tuple[int, GeneratorConfig]) -> tuple[int, int, list]:
    instance_id, config = args
    inst = generate_instance(config)
    grid, _, _ = classify_all(inst)
    return instance_id, config.seed, grid.counts.tolist()


@dataclass
class InstanceResult:
    instance_id: int
    seed: int
    grid: ClassificationGrid


@dataclass
class ExperimentReport:
    config: GeneratorConfig
    instances: list[InstanceResult]

    def stack(self) -> np.ndarray:
        return np.stack([r.grid.counts for r in self.instances])

    def aggregate(self) -> dict[str, np.ndarray]:
        data = self.stack()
        return {"mean": data.mean(axis=0), "min": data.min(axis=0), "max": data.max(axis=0)}

    def mean_count_at_least(self, efficiency: EfficiencyLevel, fairness: FairnessLevel) -> Fraction:
        total = sum(r.grid.count_at_least(efficiency, fairness) for r in self.instances)
        return Fraction(total, len(self.instances))

    def to_json(self) -> dict:
        agg = self.aggregate()

        def cells(arr, cast):
            return {e.name: {f.name: cast(arr[e, f]) for f in FairnessLevel} for e in EfficiencyLevel}

        return {
            "config": asdict(self.config),
            "num_instances": len(self.instances),
            "allocations_per_instance": self.config.num_agents**self.config.num_objects,
            "instances": [
                {"instance_id": r.instance_id, "seed": r.seed, "grid": r.grid.to_dict()} for r in self.instances
            ],
            "aggregate": {
                "mean": cells(agg["mean"], lambda v: round(float(v), 6)),
                "min": cells(agg["min"], int),
                "max": cells(agg["max"], int),
            },
        }

    def csv_rows(self) -> list[tuple[int, str, str, int]]:
        return [
            (r.instance_id, e.name, f.name, r.grid[e, f])
            for r in self.instances
            for e in EfficiencyLevel
            for f in FairnessLevel
        ]

    def plot_rows(self) -> list[dict]:
        """Long-format aggregate: one row per (efficiency, fairness) cell."""
        agg = self.aggregate()
        return [
            {
                "model": self.config.model,
                "efficiency": e.name,
                "fairness": f.name,
                "mean": round(float(agg["mean"][e, f]), 6),
                "min": int(agg["min"][e, f]),
                "max": int(agg["max"][e, f]),
            }
            for f in FairnessLevel
            for e in EfficiencyLevel
        ]

    def write(self, out_dir: str | Path, stem: str | None = None) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = stem or f"{self.config.model}_{self.config.num_agents}x{self.config.num_objects}"
        paths = {
            "csv": out / f"{stem}.csv",
            "json": out / f"{stem}.json",
            "plot": out / f"{stem}_plot.csv",
        }
        with paths["csv"].open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["instance_id", "efficiency", "fairness", "count"])
            writer.writerows(self.csv_rows())
        paths["json"].write_text(json.dumps(self.to_json(), indent=2) + "\n")
        with paths["plot"].open("w", newline="") as fh:
            fields = ["model", "efficiency", "fairness", "mean", "min", "max"]
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(self.plot_rows())
        return paths


def run_experiment(config: GeneratorConfig, num_instances: int, workers: int = 1) -> ExperimentReport:
    """Classify ``num_instances`` generated instances.

    Instance k uses the k-th seed spawned from ``config.seed``, so a run is
    reproducible and its first instances do not depend on ``num_instances``.
    """
    if num_instances < 1:
        raise ValueError("num_instances must be positive")
    jobs = [(k, replace(config, seed=s)) for k, s in enumerate(instance_seeds(config.seed, num_instances))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_classify_one, jobs))
    else:
        raw = []
        for job in jobs:
            raw.append(_classify_one(job))
            log.info("instance %d/%d classified", job[0] + 1, num_instances)
    results = [
        InstanceResult(k, seed, ClassificationGrid(np.array(counts, dtype=np.int64)))
        for k, seed, counts in sorted(raw)
    ]
    return ExperimentReport(config, results)
