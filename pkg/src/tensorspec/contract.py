"""Contraction primitives: dot products, traces, mode products, and friends.

All operations are pure functions over immutable tensors.  Conventions:

* `contract(a, o1, b, o2)` keeps a's surviving modes (in order) before b's.
* `mode_product(t, o, L)` leaves the transformed mode in position ``o``; the
  literature sometimes moves the fresh mode to the end instead, and we do not
  follow that convention.
* operations whose result would have order zero return a plain float.

Sums are accumulated pairwise by numpy, which keeps the library's 1e-12
property tolerances honest at desk scale.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .tensor import DenseTensor, _as_array, _as_matrix, _as_vector, frobenius_inner

__all__ = [
    "dot",
    "trace_pair",
    "contract",
    "mode_product",
    "multi_mode_product",
    "contract_all",
    "contract_all_but",
]


def _wrap(arr: np.ndarray):
    """DenseTensor for order >= 1 results, plain float for order 0."""
    if arr.ndim == 0:
        return float(arr)
    return DenseTensor(arr)


def dot(u, v) -> float:
    """Standard dot product of two equal-length vectors."""
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.size} vs {v.size}")
    return float(np.dot(u, v))


def trace_pair(t: DenseTensor, mode_a: int, mode_b: int):
    """Internal contraction of two equal-sized modes of one tensor.

    Drops the order by two; on a square matrix with modes (1, 2) this is the
    trace.  On an elementary tensor it multiplies by the dot product of the
    two designated vector factors.  Returns a float when the order reaches
    zero.
    """
    arr = _as_array(t)
    order = arr.ndim
    if mode_a == mode_b:
        raise ValueError("trace needs two distinct modes")
    for o in (mode_a, mode_b):
        if not 1 <= o <= order:
            raise IndexError(f"mode {o} out of range [1, {order}]")
    if arr.shape[mode_a - 1] != arr.shape[mode_b - 1]:
        raise ValueError(
            f"modes {mode_a} and {mode_b} have unequal sizes "
            f"{arr.shape[mode_a - 1]} vs {arr.shape[mode_b - 1]}"
        )
    return _wrap(np.trace(arr, axis1=mode_a - 1, axis2=mode_b - 1))


def contract(a: DenseTensor, mode_a: int, b: DenseTensor, mode_b: int):
    """Contract mode ``mode_a`` of ``a`` against mode ``mode_b`` of ``b``.

    The result's modes are a's surviving modes followed by b's; matrix
    multiplication is ``contract(X, 2, Y, 1)``.  Returns a float when both
    inputs are vectors.
    """
    aa, bb = _as_array(a), _as_array(b)
    if not 1 <= mode_a <= aa.ndim:
        raise IndexError(f"mode {mode_a} out of range [1, {aa.ndim}] for first tensor")
    if not 1 <= mode_b <= bb.ndim:
        raise IndexError(f"mode {mode_b} out of range [1, {bb.ndim}] for second tensor")
    if aa.shape[mode_a - 1] != bb.shape[mode_b - 1]:
        raise ValueError(
            f"contracted sizes differ: {aa.shape[mode_a - 1]} vs {bb.shape[mode_b - 1]}"
        )
    return _wrap(np.tensordot(aa, bb, axes=(mode_a - 1, mode_b - 1)))


def mode_product(t: DenseTensor, o: int, L) -> DenseTensor:
    """Apply a matrix to every mode-``o`` fiber of ``t``.

    ``L`` must have width equal to the size of mode ``o``; the result has
    ``L``'s height there and is otherwise unchanged.  For matrices this is
    multiplication from the left (mode 1) or by the transpose from the right
    (mode 2).
    """
    arr = _as_array(t)
    mat = _as_matrix(L)
    if not 1 <= o <= arr.ndim:
        raise IndexError(f"mode {o} out of range [1, {arr.ndim}]")
    if mat.shape[1] != arr.shape[o - 1]:
        raise ValueError(
            f"matrix width {mat.shape[1]} does not match mode-{o} size {arr.shape[o - 1]}"
        )
    moved = np.tensordot(mat, arr, axes=(1, o - 1))  # new mode lands in front
    return DenseTensor(np.moveaxis(moved, 0, o - 1))


def multi_mode_product(g: DenseTensor, factors: Sequence) -> DenseTensor:
    """Apply one matrix per mode: the tensor product of linear maps at ``g``.

    Equivalent to sequential `mode_product` calls in any mode order.
    """
    arr = _as_array(g)
    if len(factors) != arr.ndim:
        raise ValueError(f"need {arr.ndim} factors, got {len(factors)}")
    out = DenseTensor(arr)
    for o, L in enumerate(factors, start=1):
        out = mode_product(out, o, L)
    return out


def contract_all(t: DenseTensor, u: DenseTensor) -> float:
    """Contraction along all modes of two same-shaped tensors; the entrywise dot."""
    return frobenius_inner(t, u)


def contract_all_but(t: DenseTensor, o: int, xs: Sequence) -> DenseTensor:
    """Contract a vector onto every mode except ``o``.

    ``xs`` lists the O-1 vectors in increasing mode order (skipping ``o``);
    the result is the length-``M_o`` vector of full contractions against each
    mode-``o`` slice.  Multilinear in the ``xs``.
    """
    arr = _as_array(t)
    return DenseTensor(_contract_all_but_array(arr, o, [_as_vector(x) for x in xs]))


def _contract_all_but_array(arr: np.ndarray, o: int, xs: list[np.ndarray]) -> np.ndarray:
    """Fast path on raw arrays; used by the spectral solvers."""
    order = arr.ndim
    if not 1 <= o <= order:
        raise IndexError(f"mode {o} out of range [1, {order}]")
    if len(xs) != order - 1:
        raise ValueError(f"need {order - 1} vectors, got {len(xs)}")
    modes = [m for m in range(1, order + 1) if m != o]
    for m, x in zip(modes, xs):
        if x.shape[0] != arr.shape[m - 1]:
            raise ValueError(
                f"vector of length {x.shape[0]} does not match mode-{m} size {arr.shape[m - 1]}"
            )
    out = arr
    # contract from the highest mode down; axis numbers below stay valid
    for m, x in sorted(zip(modes, xs), key=lambda p: -p[0]):
        out = np.tensordot(out, x, axes=(m - 1, 0))
    return out
