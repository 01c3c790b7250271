"""Random walks on the infinite cubic lattice."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from .source import RandomSource

# Direction index -> unit displacement (+x, -x, +y, -y, +z, -z).
_DIRECTIONS = np.array(
    [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
    dtype=np.int64,
)


def random_walk_3d(src: RandomSource, steps: int) -> np.ndarray:
    """Walk from the origin; returns the (steps+1, 3) path."""
    if steps < 0:
        raise ParameterError(f"steps must be >= 0, got {steps}")
    path = np.zeros((steps + 1, 3), dtype=np.int64)
    if steps:
        draws = src.draw_batch(6, steps)
        np.cumsum(_DIRECTIONS[draws], axis=0, out=path[1:])
    return path


def mean_squared_displacement(src: RandomSource, walks: int, steps: int) -> float:
    """Mean |endpoint|^2 over independent walks of equal length."""
    if walks < 1:
        raise ParameterError("walks must be >= 1")
    total = 0.0
    for _ in range(walks):
        end = random_walk_3d(src, steps)[-1]
        total += float(end @ end)
    return total / walks


def write_walks_csv(path, paths: list[np.ndarray]) -> None:
    with open(path, "w") as fh:
        fh.write("walk,step,x,y,z\n")
        for w, p in enumerate(paths):
            for i, (x, y, z) in enumerate(p.tolist()):
                fh.write(f"{w},{i},{x},{y},{z}\n")
