"""Interpolation node sequences and deterministic node generators."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "NodeSequence",
    "NodeValidationError",
    "make_nodes",
    "generate_nodes",
    "load_nodes_csv",
]


class NodeValidationError(ValueError):
    """Raised for node input that is not finite and strictly increasing.

    ``index`` is the position of the first offending entry (or ``None`` when
    the problem is the length of the input).
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True, eq=False)
class NodeSequence:
    """A finite window ``nodes[0] < ... < nodes[N]`` of an increasing sequence.

    Use :func:`make_nodes` to build one; the constructor validates as well.
    """

    nodes: np.ndarray

    def __post_init__(self):
        arr = _validated(self.nodes)
        arr.setflags(write=False)
        object.__setattr__(self, "nodes", arr)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, n):
        return self.nodes[n]

    def __repr__(self) -> str:
        return f"NodeSequence({self.nodes.tolist()!r})"

    @property
    def N(self) -> int:
        """Index of the last node (number of gaps)."""
        return self.nodes.shape[0] - 1

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    def step(self, n: int) -> float:
        return float(self.nodes[n + 1] - self.nodes[n])

    def midpoint(self, n: int) -> float:
        return float(0.5 * (self.nodes[n] + self.nodes[n + 1]))

    def max_step(self) -> float:
        return float(self.steps.max())

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])


def _validated(values) -> np.ndarray:
    arr = np.array(values, dtype=float).ravel()
    if arr.shape[0] < 2:
        raise NodeValidationError(
            f"need at least 2 nodes, got {arr.shape[0]}", index=None)
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        i = int(bad[0])
        raise NodeValidationError(f"node {i} is not finite ({float(arr[i])!r})", index=i)
    bad = np.flatnonzero(np.diff(arr) <= 0)
    if bad.size:
        i = int(bad[0]) + 1
        raise NodeValidationError(
            f"nodes not strictly increasing at index {i}: "
            f"{float(arr[i - 1])!r} >= {float(arr[i])!r}", index=i)
    return arr


def make_nodes(values) -> NodeSequence:
    """Validate ``values`` and wrap them as a :class:`NodeSequence`.

    >>> make_nodes([0, 1, 3]).steps
    array([1., 2.])
    """
    return NodeSequence(values)


def generate_nodes(kind: str, params: dict | None = None, seed: int = 0) -> NodeSequence:
    """Deterministic node generators used by the experiments.

    Parameters
    ----------
    kind : {"uniform", "geometric", "random_gaps", "clustering"}
    params : dict
        ``uniform``: start (0), step (1), count.
        ``geometric``: start (0), first_step (1), ratio, count.
        ``random_gaps``: start (0), lo, hi, count; gaps ~ U[lo, hi].
        ``clustering``: h, m; nodes -1 and 1 plus ``m`` nodes accumulating
        geometrically at 1+h and ``m`` at -1-h.
    seed : int
        Only consumed by ``random_gaps``.
    """
    params = dict(params or {})
    if kind == "uniform":
        count = _count(params)
        step = float(params.get("step", 1.0))
        if not step > 0:
            raise ValueError("uniform: step must be > 0")
        start = float(params.get("start", 0.0))
        return make_nodes(start + step * np.arange(count))
    if kind == "geometric":
        count = _count(params)
        ratio = float(params["ratio"])
        first = float(params.get("first_step", 1.0))
        if not (ratio > 0 and first > 0):
            raise ValueError("geometric: ratio and first_step must be > 0")
        gaps = first * ratio ** np.arange(count - 1)
        return make_nodes(_from_gaps(float(params.get("start", 0.0)), gaps))
    if kind == "random_gaps":
        count = _count(params)
        lo, hi = float(params["lo"]), float(params["hi"])
        if not 0 < lo <= hi:
            raise ValueError("random_gaps: need 0 < lo <= hi")
        rng = np.random.default_rng(seed)
        gaps = rng.uniform(lo, hi, size=count - 1)
        return make_nodes(_from_gaps(float(params.get("start", 0.0)), gaps))
    if kind == "clustering":
        h = float(params["h"])
        m = int(params.get("m", 4))
        if not h > 0 or m < 0:
            raise ValueError("clustering: need h > 0 and m >= 0")
        tail = h * (1.0 - 0.5 ** np.arange(1, m + 1))
        return make_nodes(np.concatenate([-1.0 - tail[::-1], [-1.0, 1.0], 1.0 + tail]))
    raise ValueError(f"unknown node generator {kind!r}")


def _count(params: dict) -> int:
    count = int(params["count"])
    if count < 2:
        raise ValueError("count must be >= 2")
    return count


def _from_gaps(start: float, gaps: np.ndarray) -> np.ndarray:
    return start + np.concatenate([[0.0], np.cumsum(gaps)])


def load_nodes_csv(path: str | Path, column: str = "lambda") -> NodeSequence:
    """Read nodes from a CSV file with a ``lambda`` column, one node per row."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise NodeValidationError(f"missing column {column!r}")
        values = []
        for row in reader:
            try:
                values.append(float(row[column]))
            except (TypeError, ValueError):
                raise NodeValidationError(
                    f"line {reader.line_num}: non-numeric {column!r} cell "
                    f"{row[column]!r}", index=len(values)) from None
    return make_nodes(values)
