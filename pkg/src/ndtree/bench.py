"""Storage experiment: feed generated streams to tree and list stores and time them."""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, TextIO, Union

from .generator import stream
from .geometry import ParetoElement, same_sets
from .nd_list import NdList
from .tree import Mode, NdTree, RebalancePolicy

STRUCTURES = ("tree", "list")
CSV_HEADER = [
    "structure",
    "policy",
    "n",
    "mu",
    "seed",
    "elapsed_ms",
    "final_depth",
    "final_nodes",
    "inserts_processed",
]


class TrialFailure(RuntimeError):
    """A trial crashed or the stores disagreed on the final set."""


@dataclass(frozen=True)
class ExperimentSpec:
    n: int
    mu: float = 0.0
    delta: float = 0.3
    policies: tuple[Mode, ...] = (Mode.A0,)
    structures: tuple[str, ...] = ("tree",)
    trials: int = 1
    seed: int = 0
    time_limit: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.mu < 0:
            raise ValueError("mu must be non-negative")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        bad = set(self.structures) - set(STRUCTURES)
        if bad or not self.structures:
            raise ValueError(f"unknown structures {sorted(bad)}")
        object.__setattr__(self, "policies", tuple(Mode(p) for p in self.policies))
        if "tree" in self.structures and not self.policies:
            raise ValueError("at least one policy is needed for the tree")


@dataclass
class ResultRecord:
    structure: str
    policy: str
    n: int
    mu: float
    seed: int
    elapsed_ms: float
    final_depth: Optional[int]
    final_nodes: int
    inserts_processed: int

    @property
    def timed_out(self) -> bool:
        return self.inserts_processed < self.n

    def row(self) -> list[str]:
        depth = "" if self.final_depth is None else str(self.final_depth)
        return [
            self.structure,
            self.policy,
            str(self.n),
            repr(self.mu),
            str(self.seed),
            f"{self.elapsed_ms:.3f}",
            depth,
            str(self.final_nodes),
            str(self.inserts_processed),
        ]


@dataclass
class TrialOutcome:
    record: ResultRecord
    final_set: list[ParetoElement]


def run_trial(
    structure: str,
    elements: Sequence[ParetoElement],
    *,
    mu: float,
    seed: int,
    policy: Optional[Mode] = None,
    delta: float = 0.3,
    time_limit: Optional[float] = None,
    clock: Callable[[], float] = time.perf_counter,
) -> TrialOutcome:
    """Insert ``elements`` into a fresh store, timing only the insert loop."""
    if structure == "tree":
        store: Union[NdTree, NdList] = NdTree(RebalancePolicy(policy or Mode.A0, delta))
        label = Mode(policy or Mode.A0).value
    elif structure == "list":
        store = NdList()
        label = ""
    else:
        raise ValueError(f"unknown structure {structure!r}")
    insert = store.insert
    done = 0
    start = clock()
    if time_limit is None:
        for e in elements:
            insert(e)
        done = len(elements)
    else:
        deadline = start + time_limit
        for e in elements:
            insert(e)
            done += 1
            if clock() > deadline:
                break
    elapsed = (clock() - start) * 1000.0
    depth = store.depth() if isinstance(store, NdTree) else None
    rec = ResultRecord(
        structure, label, len(elements), mu, seed, elapsed, depth, len(store), done
    )
    return TrialOutcome(rec, store.nondominated_set())


def run(
    spec: ExperimentSpec,
    on_record: Optional[Callable[[ResultRecord], None]] = None,
    on_set: Optional[Callable[[int, list[ParetoElement]], None]] = None,
) -> list[ResultRecord]:
    """Run every (trial, structure, policy) combination of ``spec``.

    Trial ``i`` uses seed ``spec.seed + i``. When both structures run, the
    final sets of each seed must agree or :class:`TrialFailure` is raised
    after the offending records have been reported.
    """
    records: list[ResultRecord] = []

    def emit(rec: ResultRecord) -> None:
        records.append(rec)
        if on_record is not None:
            on_record(rec)

    for trial in range(spec.trials):
        seed = spec.seed + trial
        elements = list(stream(spec.n, spec.mu, seed))
        finished: list[tuple[str, list[ParetoElement]]] = []
        runs: list[tuple[str, Optional[Mode]]] = []
        if "tree" in spec.structures:
            runs += [("tree", p) for p in spec.policies]
        if "list" in spec.structures:
            runs.append(("list", None))
        for structure, policy in runs:
            try:
                out = run_trial(
                    structure,
                    elements,
                    mu=spec.mu,
                    seed=seed,
                    policy=policy,
                    delta=spec.delta,
                    time_limit=spec.time_limit,
                )
            except Exception as exc:  # surfaced as a trial failure
                raise TrialFailure(f"{structure} {policy} seed {seed}: {exc}") from exc
            emit(out.record)
            if not out.record.timed_out:
                finished.append((f"{structure}/{out.record.policy}", out.final_set))
        if finished and on_set is not None:
            on_set(seed, finished[0][1])
        ref_name, ref = finished[0] if finished else ("", [])
        for name, got in finished[1:]:
            if not same_sets(ref, got):
                raise TrialFailure(f"seed {seed}: {name} and {ref_name} store different sets")
    return records


def write_records(records: Iterable[ResultRecord], fh: TextIO, header: bool = True) -> None:
    w = csv.writer(fh)
    if header:
        w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())


def read_records(fh: TextIO) -> list[ResultRecord]:
    reader = csv.DictReader(fh)
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(
            ResultRecord(
                row["structure"],
                row["policy"],
                int(row["n"]),
                float(row["mu"]),
                int(row["seed"]),
                float(row["elapsed_ms"]),
                int(row["final_depth"]) if row["final_depth"] else None,
                int(row["final_nodes"]),
                int(row["inserts_processed"]),
            )
        )
    return out


@dataclass
class SummaryRow:
    structure: str
    policy: str
    n: int
    mu: float
    trials: int
    timed_out: int
    time_ms_geomean: float
    depth_geomean: Optional[float]
    depth_min: Optional[int]
    depth_avg: Optional[float]
    depth_max: Optional[int]
    nodes_mean: float


def geometric_mean(values: Sequence[float]) -> float:
    """Geometric mean of positive values.

    >>> geometric_mean([1, 4])
    2.0
    """
    if not values or any(v <= 0 for v in values):
        raise ValueError("geometric mean needs positive values")
    return math.exp(sum(math.log(v) for v in values) / len(values))


def summarize(records: Iterable[ResultRecord]) -> list[SummaryRow]:
    """Aggregate per (structure, policy, n, mu), skipping timed-out trials.

    Groups where every trial timed out are omitted.
    """
    groups: dict[tuple, list[ResultRecord]] = {}
    for r in records:
        groups.setdefault((r.structure, r.policy, r.n, r.mu), []).append(r)
    out = []
    for (structure, policy, n, mu), recs in groups.items():
        ok = [r for r in recs if not r.timed_out]
        if not ok:
            continue
        depths = [r.final_depth for r in ok if r.final_depth is not None]
        has_depth = len(depths) == len(ok) and all(d > 0 for d in depths)
        # a zero-length timing can occur on coarse clocks; clamp for the log
        times = [max(r.elapsed_ms, 1e-6) for r in ok]
        out.append(
            SummaryRow(
                structure,
                policy,
                n,
                mu,
                len(ok),
                len(recs) - len(ok),
                geometric_mean(times),
                geometric_mean(depths) if has_depth else None,
                min(depths) if has_depth else None,
                sum(depths) / len(depths) if has_depth else None,
                max(depths) if has_depth else None,
                sum(r.final_nodes for r in ok) / len(ok),
            )
        )
    return out


def format_summary(rows: Iterable[SummaryRow]) -> str:
    lines = [
        f"{'structure':<9} {'policy':<6} {'n':>8} {'mu':>7} {'ok':>4} {'t/o':>4} "
        f"{'time_ms':>11} {'depth min/avg/max':>19} {'nodes':>10}"
    ]
    for r in rows:
        depth = "" if r.depth_avg is None else f"{r.depth_min}/{r.depth_avg:.1f}/{r.depth_max}"
        lines.append(
            f"{r.structure:<9} {r.policy:<6} {r.n:>8} {r.mu:>7g} {r.trials:>4} {r.timed_out:>4} "
            f"{r.time_ms_geomean:>11.2f} {depth:>19} {r.nodes_mean:>10.1f}"
        )
    return "\n".join(lines)


def emit_plot(elements: Iterable[ParetoElement], path, title: Optional[str] = None) -> None:
    """Write an SVG (or any matplotlib format, by suffix) of a stored set."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.collections import LineCollection

    elements = list(elements)
    fig, ax = plt.subplots(figsize=(6, 5))
    try:
        pts = [(e.x1, e.y1) for e in elements if e.is_point]
        segs = [[(e.x1, e.y1), (e.x2, e.y2)] for e in elements if not e.is_point]
        if segs:
            ax.add_collection(LineCollection(segs, colors="tab:red", linewidths=1.2))
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=8, color="tab:blue", zorder=3)
        ax.autoscale_view()
        ax.set_xlabel("objective 1")
        ax.set_ylabel("objective 2")
        if title:
            ax.set_title(title)
        fig.savefig(path)
    finally:
        plt.close(fig)
