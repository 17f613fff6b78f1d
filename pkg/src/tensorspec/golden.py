"""Golden test tensors, built from their rank-one descriptions.

Two families ship with the library:

* ``counterexample_222()``: the 2x2x2 tensor whose frontal slices are
  all-ones and all-twos.  It is invariant under swapping its first two modes
  but its mode-3 eigenpairs differ from the mode-1/2 ones, so it separates
  the per-mode eigenpair definitions.  As a rank-one tensor it is
  (1,1) o (1,1) o (1,2).
* ``rank3_multilinear22(n)`` for n in 0..7: eight order-3 tensors of tensor
  rank 3 whose multilinear ranks are all (2, 2, 2), showing the multilinear
  rank can be strictly below the tensor rank.

``write_fixtures(dir)`` regenerates the checked-in JSON fixture files from
these descriptions (``python -m tensorspec.golden <dir>``); the entry buffers
are never typed by hand.
"""

from __future__ import annotations

import os
import sys

import numpy as np

from .decomp import CpDecomposition, cp_eval
from .serialize import save_tensor
from .tensor import DenseTensor

__all__ = [
    "counterexample_222",
    "rank3_multilinear22",
    "RANK3_TRIPLES",
    "write_fixtures",
]


def counterexample_222() -> DenseTensor:
    """The slice-1-ones / slice-2-twos tensor: (1,1) o (1,1) o (1,2)."""
    cp = CpDecomposition(
        [1.0],
        [
            np.array([[1.0], [1.0]]),
            np.array([[1.0], [1.0]]),
            np.array([[1.0], [2.0]]),
        ],
    )
    return cp_eval(cp)


# unit-vector index triples (i, j, k) meaning e_i o e_j o e_k
RANK3_TRIPLES: tuple[tuple[tuple[int, int, int], ...], ...] = (
    ((1, 1, 1), (1, 2, 2), (2, 1, 2)),
    ((1, 1, 1), (1, 2, 2), (2, 2, 1)),
    ((1, 1, 1), (2, 1, 2), (2, 2, 1)),
    ((1, 1, 2), (1, 2, 1), (2, 1, 1)),
    ((1, 1, 2), (1, 2, 1), (2, 2, 2)),
    ((1, 1, 2), (2, 1, 1), (2, 2, 2)),
    ((1, 2, 1), (2, 1, 1), (2, 2, 2)),
    ((1, 2, 2), (2, 1, 2), (2, 2, 1)),
)


def rank3_multilinear22(n: int) -> DenseTensor:
    """The n-th (0-based) of the eight rank-3 tensors with multilinear ranks (2,2,2)."""
    triples = RANK3_TRIPLES[n]
    factors = []
    for o in range(3):
        cols = np.zeros((2, 3))
        for r, triple in enumerate(triples):
            cols[triple[o] - 1, r] = 1.0
        factors.append(cols)
    return cp_eval(CpDecomposition(np.ones(3), factors))


def write_fixtures(directory: str) -> list[str]:
    """Write every golden tensor as a JSON fixture file; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    written = []
    path = os.path.join(directory, "counterexample_222.json")
    save_tensor(counterexample_222(), path)
    written.append(path)
    for n in range(len(RANK3_TRIPLES)):
        path = os.path.join(directory, f"rank3_multilinear22_{n + 1}.json")
        save_tensor(rank3_multilinear22(n), path)
        written.append(path)
    return written


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    for p in write_fixtures(target):
        print(p)
