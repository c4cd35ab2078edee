"""Random stream of points and piecewise-linear curves drifting toward the origin.

Each batch samples one to six positions ``r`` on the parabola

    y = (10.5 - r)**2 / 5 - k,    x = r + (5 - k)

A single position becomes a point; several become the segments joining
consecutive positions. ``k`` starts at 1 and grows by ``mu / n_total`` after
every batch, so larger ``mu`` moves later batches down and to the left and
makes them dominate earlier ones.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .geometry import ParetoElement, make_element


class Exhausted(StopIteration):
    """The stream has already produced ``n_total`` elements."""


@dataclass(frozen=True)
class GeneratorConfig:
    n_total: int
    mu: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_total < 1:
            raise ValueError("n_total must be at least 1")
        if self.mu < 0:
            raise ValueError("mu must be non-negative")


def _open_uniform(rng: np.random.Generator, low: float, high: float) -> float:
    # Generator.uniform samples [low, high); redraw the rare exact low
    while True:
        v = rng.uniform(low, high)
        if v != low:
            return float(v)


@dataclass
class GeneratorState:
    config: GeneratorConfig
    k: float = 1.0
    emitted: int = 0
    batches: int = 0
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.rng = np.random.Generator(np.random.PCG64(self.config.seed))

    @property
    def exhausted(self) -> bool:
        return self.emitted >= self.config.n_total

    def positions(self) -> list[float]:
        """Draw the parabola positions for one batch, sorted ascending."""
        rng = self.rng
        count = int(rng.integers(1, 7))
        r = _open_uniform(rng, 0.0, 10.0)
        out = [r]
        for _ in range(count - 1):
            r += _open_uniform(rng, 0.0, 1.0)
            out.append(r)
        return out

    def next_batch(self) -> list[ParetoElement]:
        """One point, or the segments of one sampled curve.

        The final batch is truncated so exactly ``n_total`` elements are
        produced overall. Raises :class:`Exhausted` afterwards.
        """
        if self.exhausted:
            raise Exhausted()
        pts = [point_at(r, self.k) for r in self.positions()]
        if len(pts) == 1:
            batch = [make_element(*pts[0], *pts[0])]
        else:
            batch = [make_element(*a, *b) for a, b in zip(pts, pts[1:])]
        batch = batch[: self.config.n_total - self.emitted]
        self.emitted += len(batch)
        self.batches += 1
        self.k = 1.0 + self.batches * self.config.mu / self.config.n_total
        return batch


def stream(n_total: int, mu: float = 0.0, seed: int = 0) -> Iterator[ParetoElement]:
    """All ``n_total`` elements of one experiment stream, in order."""
    state = GeneratorState(GeneratorConfig(n_total, mu, seed))
    while not state.exhausted:
        yield from state.next_batch()


def point_at(r: float, k: float = 1.0) -> tuple[float, float]:
    """The parabola position ``r`` at drift ``k``, as ``(x, y)``."""
    return (r + (5.0 - k), (10.5 - r) ** 2 / 5.0 - k)
