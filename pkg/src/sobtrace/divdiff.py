"""Divided differences over node/value data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import NodeSequence

__all__ = ["DividedDifferenceTable", "divided_differences"]


@dataclass(frozen=True)
class DividedDifferenceTable:
    """Triangular table with ``entries[k][n] = f(x_n, ..., x_{n+k})``."""

    order: int
    entries: tuple

    def __getitem__(self, k: int) -> np.ndarray:
        return self.entries[k]


def divided_differences(nodes: NodeSequence, values, max_order: int) -> DividedDifferenceTable:
    """Forward triangular recursion up to ``max_order``.

    Row ``k`` has ``len(nodes) - k`` entries.
    """
    x = nodes.nodes if isinstance(nodes, NodeSequence) else np.asarray(nodes, dtype=float)
    f = np.asarray(values, dtype=float)
    if f.shape != x.shape:
        raise ValueError(f"{f.shape[0]} values for {x.shape[0]} nodes")
    if not 0 <= max_order <= x.shape[0] - 1:
        raise ValueError(f"max_order must be in [0, {x.shape[0] - 1}], got {max_order}")
    rows = [f.copy()]
    for k in range(1, max_order + 1):
        prev = rows[-1]
        rows.append((prev[1:] - prev[:-1]) / (x[k:] - x[:-k]))
    for row in rows:
        row.setflags(write=False)
    return DividedDifferenceTable(max_order, tuple(rows))
