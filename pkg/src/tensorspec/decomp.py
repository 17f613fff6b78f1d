"""CP and Tucker decompositions, their solvers, and odeco recovery.

`cp_als` and `odeco_decompose` are heuristic fits: exact CP decomposition is
NP-hard in general, best rank-r approximations for r >= 2 need not even
exist, and no global-optimality claim is made anywhere in this module.  What
is guaranteed (and asserted) is that the ALS objective never increases across
sweeps and that on orthogonally decomposable input the power-iteration /
deflation loop recovers the components.

Multi-start solvers derive per-start seeds as ``seed + start_index`` and merge
results by ``(error, start_index)``, so outputs do not depend on execution
order; the ``threads`` argument only parallelizes the starts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .contract import _contract_all_but_array, multi_mode_product
from .tensor import DenseTensor, _as_array, frobenius_norm, outer


def _mode_unfolding(arr: np.ndarray, o: int) -> np.ndarray:
    """Mode-o matricization on raw arrays: rows = mode o, columns colex over the rest."""
    return np.moveaxis(arr, o - 1, 0).reshape(arr.shape[o - 1], -1, order="F")

__all__ = [
    "CpDecomposition",
    "TuckerDecomposition",
    "CpAlsResult",
    "OdecoResult",
    "cp_eval",
    "cp_normalize",
    "cp_to_tucker",
    "tucker_eval",
    "hosvd",
    "multilinear_rank",
    "cp_als",
    "odeco_decompose",
]


@dataclass(frozen=True)
class CpDecomposition:
    """Rank-R sum of weighted outer products: weights plus one factor matrix per mode.

    Factor ``o`` has shape ``(M_o, R)``; column ``r`` across the factors gives
    the r-th rank-one term.  The canonical form has unit-norm columns with
    magnitudes carried by the weights; `is_normalized` flags instances that
    are not in that form.
    """

    weights: np.ndarray
    factors: tuple[np.ndarray, ...]

    def __init__(self, weights, factors: Sequence):
        weights = np.asarray(weights, dtype=float).reshape(-1)
        factors = tuple(np.asarray(f, dtype=float) for f in factors)
        if len(factors) == 0:
            raise ValueError("a CP decomposition needs at least one factor matrix")
        for f in factors:
            if f.ndim != 2:
                raise ValueError("factors must be matrices")
            if f.shape[1] != weights.size:
                raise ValueError(
                    f"factor with {f.shape[1]} columns does not match {weights.size} weights"
                )
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "factors", factors)

    @property
    def rank(self) -> int:
        return self.weights.size

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return all(
            abs(np.linalg.norm(f[:, r]) - 1.0) <= tol
            for f in self.factors
            for r in range(self.rank)
        )


@dataclass(frozen=True)
class TuckerDecomposition:
    """A core tensor transformed by one factor matrix per mode."""

    core: DenseTensor
    factors: tuple[np.ndarray, ...]

    def __init__(self, core: DenseTensor, factors: Sequence):
        if not isinstance(core, DenseTensor):
            core = DenseTensor(np.asarray(core, dtype=float))
        factors = tuple(np.asarray(f, dtype=float) for f in factors)
        if len(factors) != core.order:
            raise ValueError(f"need {core.order} factors, got {len(factors)}")
        for o, f in enumerate(factors, start=1):
            if f.ndim != 2:
                raise ValueError("factors must be matrices")
            if f.shape[1] != core.dims[o - 1]:
                raise ValueError(
                    f"factor {o} width {f.shape[1]} does not match core dim {core.dims[o - 1]}"
                )
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        return self.core.order

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)


def cp_eval(cp: CpDecomposition) -> DenseTensor:
    """Assemble the dense tensor a CP decomposition represents."""
    acc = np.zeros(cp.dims)
    for r in range(cp.rank):
        acc += cp.weights[r] * outer(*[f[:, r] for f in cp.factors]).to_array()
    return DenseTensor(acc)


def cp_normalize(cp: CpDecomposition) -> CpDecomposition:
    """Rescale factor columns to unit norm, moving magnitudes into the weights.

    A zero column cannot be normalized: its weight becomes 0 and the column is
    replaced by the first unit vector (the term contributes nothing either way).
    """
    weights = cp.weights.copy()
    factors = [f.copy() for f in cp.factors]
    for r in range(cp.rank):
        for f in factors:
            nrm = np.linalg.norm(f[:, r])
            if nrm == 0.0:
                weights[r] = 0.0
                f[:, r] = 0.0
                f[0, r] = 1.0
            else:
                f[:, r] /= nrm
                weights[r] *= nrm
    return CpDecomposition(weights, factors)


def cp_to_tucker(cp: CpDecomposition) -> TuckerDecomposition:
    """The equivalent Tucker form: hyper-diagonal core with the weights on it."""
    r = cp.rank
    core = np.zeros((r,) * cp.order)
    core[tuple(np.arange(r) for _ in range(cp.order))] = cp.weights
    return TuckerDecomposition(DenseTensor(core), cp.factors)


def tucker_eval(tk: TuckerDecomposition) -> DenseTensor:
    """Assemble the dense tensor: the core pushed through every factor matrix."""
    return multi_mode_product(tk.core, tk.factors)


def hosvd(t: DenseTensor, ranks: Sequence[int]) -> TuckerDecomposition:
    """Truncated higher-order SVD.

    Factor ``o`` holds the leading ``ranks[o]`` left singular vectors of the
    mode-o matricization; the core is ``t`` contracted with the factor
    transposes.  Exact at full multilinear ranks; a heuristic (not optimal)
    truncation below them.
    """
    arr = _as_array(t)
    order = arr.ndim
    ranks = [int(r) for r in ranks]
    if len(ranks) != order:
        raise ValueError(f"need {order} ranks, got {len(ranks)}")
    for o, r in enumerate(ranks, start=1):
        if not 1 <= r <= arr.shape[o - 1]:
            raise ValueError(f"rank {r} out of range [1, {arr.shape[o - 1]}] for mode {o}")
    factors = []
    for o in range(1, order + 1):
        u, _, _ = np.linalg.svd(_mode_unfolding(arr, o), full_matrices=False)
        factors.append(u[:, : ranks[o - 1]])
    core = multi_mode_product(DenseTensor(arr), [f.T for f in factors])
    return TuckerDecomposition(core, factors)


def multilinear_rank(t: DenseTensor, tol: float = 1e-8) -> tuple[int, ...]:
    """Numerical rank of every single-mode matricization.

    Singular values above ``tol`` times the largest one count; each component
    lower-bounds the tensor rank.
    """
    arr = _as_array(t)
    out = []
    for o in range(1, arr.ndim + 1):
        s = np.linalg.svd(_mode_unfolding(arr, o), compute_uv=False)
        smax = s[0] if s.size else 0.0
        out.append(0 if smax == 0.0 else int(np.sum(s > tol * smax)))
    return tuple(out)


# -- alternating least squares ------------------------------------------------


@dataclass
class CpAlsResult:
    """Best fit across starts, with the winning start's per-sweep error trace."""

    cp: CpDecomposition
    errors: list[float]
    start: int
    converged: bool

    @property
    def error(self) -> float:
        return self.errors[-1]


def _khatri_rao(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Columnwise Kronecker product."""
    out = mats[0]
    for m in mats[1:]:
        out = (out[:, None, :] * m[None, :, :]).reshape(-1, out.shape[1])
    return out


def _solve_normal(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``x @ gram = rhs`` rowwise; ridge 1e-12 only when singular."""
    try:
        return np.linalg.solve(gram.T, rhs.T).T
    except np.linalg.LinAlgError:
        ridge = 1e-12 * np.eye(gram.shape[0])
        return np.linalg.solve((gram + ridge).T, rhs.T).T


def _als_single(arr, rank, init_factors, max_iters, tol, norm_t, unfoldings):
    factors = [f.copy() for f in init_factors]
    order = arr.ndim
    grams = [f.T @ f for f in factors]
    errors = []
    converged = False
    for _ in range(max_iters):
        for o in range(order):
            others = [factors[j] for j in range(order - 1, -1, -1) if j != o]
            # colex unfolding pairs with the reversed-order Khatri-Rao chain
            kr = _khatri_rao(others)
            gram = np.ones((rank, rank))
            for j in range(order):
                if j != o:
                    gram *= grams[j]
            factors[o] = _solve_normal(gram, unfoldings[o] @ kr)
            grams[o] = factors[o].T @ factors[o]
        fit = cp_eval(CpDecomposition(np.ones(rank), factors))
        err = frobenius_norm(fit - DenseTensor(arr)) / norm_t if norm_t > 0 else 0.0
        if errors:
            # each exact least-squares sweep cannot increase the objective
            assert err <= errors[-1] + 1e-14, "ALS error increased across a sweep"
        errors.append(err)
        if len(errors) >= 2 and errors[-2] - errors[-1] < tol:
            converged = True
            break
        if err <= 1e-15:
            converged = True
            break
    return factors, errors, converged


def _run_starts(tasks, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda f: f(), tasks))
    return [f() for f in tasks]


def cp_als(
    t: DenseTensor,
    rank: int,
    *,
    max_iters: int = 500,
    tol: float = 1e-12,
    seed: int = 0,
    starts: int = 8,
    threads: int = 1,
) -> CpAlsResult:
    """Fit a rank-``rank`` CP decomposition by alternating least squares.

    Runs ``starts`` independent fits (start 0 seeds from the leading HOSVD
    vectors when the rank allows, the rest from uniform(-1, 1) entries with
    per-start seeds ``seed + k``) and keeps the best final error; ties break
    on the start index.  ``tol`` is the per-sweep improvement below which a
    start stops.  The relative error is non-increasing across sweeps and the
    returned trace belongs to the winning start.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    arr = _as_array(t)
    order = arr.ndim
    norm_t = float(np.linalg.norm(arr))
    unfoldings = [_mode_unfolding(arr, o) for o in range(1, order + 1)]
    hosvd_init = None
    if rank <= min(arr.shape):
        tk = hosvd(t, [rank] * order)
        hosvd_init = [f.copy() for f in tk.factors]

    def make_task(k):
        def task():
            if k == 0 and hosvd_init is not None:
                init = hosvd_init
            else:
                r = np.random.default_rng(seed + k)
                init = [r.uniform(-1.0, 1.0, size=(d, rank)) for d in arr.shape]
            return _als_single(arr, rank, init, max_iters, tol, norm_t, unfoldings)

        return task

    results = _run_starts([make_task(k) for k in range(starts)], threads)
    best = min(range(starts), key=lambda k: (results[k][1][-1], k))
    factors, errors, converged = results[best]
    cp = cp_normalize(CpDecomposition(np.ones(rank), factors))
    return CpAlsResult(cp=cp, errors=errors, start=best, converged=converged)


# -- odeco recovery -------------------------------------------------------------


@dataclass
class OdecoResult:
    """Deflation-based recovery output plus its diagnostics.

    ``status`` is "ok" when every deflation step converged and the recovered
    factor columns are mutually orthonormal; "not_orthogonal" flags input that
    is not orthogonally decomposable; "not_converged" flags power-iteration
    failure (the partial result is still returned).
    """

    cp: CpDecomposition
    reconstruction_error: float
    orthogonality_defect: float
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _power_iterate_symmetric(arr, x0, max_iters, tol):
    """Symmetric tensor power iteration; returns (value, vector, converged)."""
    order = arr.ndim
    x = x0 / np.linalg.norm(x0)
    for _ in range(max_iters):
        y = _contract_all_but_array(arr, 1, [x] * (order - 1))
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0, x, False
        y /= nrm
        if min(np.linalg.norm(y - x), np.linalg.norm(y + x)) <= tol:
            x = y
            break
        x = y
    else:
        lam = float(_contract_all_but_array(arr, 1, [x] * (order - 1)) @ x)
        return lam, x, False
    lam = float(_contract_all_but_array(arr, 1, [x] * (order - 1)) @ x)
    return lam, x, True


def _hopm_iterate(arr, xs0, max_iters, tol):
    """Alternating per-mode power iteration; returns (sigma, vectors, converged)."""
    order = arr.ndim
    xs = [x / np.linalg.norm(x) for x in xs0]
    for _ in range(max_iters):
        delta = 0.0
        for o in range(1, order + 1):
            y = _contract_all_but_array(arr, o, [xs[j] for j in range(order) if j != o - 1])
            nrm = np.linalg.norm(y)
            if nrm == 0.0:
                return 0.0, xs, False
            y /= nrm
            delta = max(delta, min(np.linalg.norm(y - xs[o - 1]), np.linalg.norm(y + xs[o - 1])))
            xs[o - 1] = y
        if delta <= tol:
            sigma = _full_contract(arr, xs)
            return sigma, xs, True
    return _full_contract(arr, xs), xs, False


def _full_contract(arr, xs) -> float:
    out = arr
    for x in reversed(xs):
        out = np.tensordot(out, x, axes=(out.ndim - 1, 0))
    return float(out)


def odeco_decompose(
    t: DenseTensor,
    *,
    symmetric: bool = False,
    rank: int | None = None,
    max_iters: int = 500,
    tol: float = 1e-10,
    orth_tol: float = 1e-6,
    seed: int = 0,
    starts: int = 8,
    threads: int = 1,
) -> OdecoResult:
    """Recover an orthogonal CP decomposition by power iteration with deflation.

    Each round runs multi-start power iteration on the deflated remainder
    (symmetric map when ``symmetric``, alternating per-mode otherwise), keeps
    the largest-magnitude component found, subtracts it, and repeats until the
    remainder drops below ``tol`` times the input norm or ``rank`` components
    are extracted (default: the smallest mode size).  On input that is not
    orthogonally decomposable the factor Gram check fails and the result
    carries the "not_orthogonal" status.
    """
    arr = _as_array(t).copy()
    if symmetric and len(set(arr.shape)) != 1:
        raise ValueError("symmetric recovery needs a cubical tensor")
    order = arr.ndim
    rank_capped = rank is not None
    if rank is None:
        rank = min(arr.shape)
    norm0 = float(np.linalg.norm(arr))
    weights: list[float] = []
    vectors: list[list[np.ndarray]] = [[] for _ in range(order)]
    status = "ok"
    component = 0
    while component < rank and np.linalg.norm(arr) > tol * max(norm0, 1e-300):
        def one_start(k, deflated=arr.copy(), comp=component):
            r = np.random.default_rng(seed + 101 * comp + k)
            if symmetric:
                x0 = r.normal(size=deflated.shape[0])
                lam, x, conv = _power_iterate_symmetric(deflated, x0, max_iters, tol)
                return abs(lam), lam, [x] * order, conv
            xs0 = [r.normal(size=d) for d in deflated.shape]
            sig, xs, conv = _hopm_iterate(deflated, xs0, max_iters, tol)
            return abs(sig), sig, xs, conv

        found = _run_starts([lambda k=k: one_start(k) for k in range(starts)], threads)
        found.sort(key=lambda rec: -rec[0])
        mag, value, xs, conv = found[0]
        if not conv or mag == 0.0:
            status = "not_converged"
            break
        weights.append(value)
        for o in range(order):
            vectors[o].append(xs[o])
        arr = arr - value * outer(*xs).to_array()
        component += 1

    if not weights:
        cp = CpDecomposition(np.zeros(1), [np.eye(d, 1) for d in t.dims])
        return OdecoResult(cp, 1.0 if norm0 > 0 else 0.0, 0.0, "not_converged")

    factors = [np.column_stack(vectors[o]) for o in range(order)]
    cp = CpDecomposition(np.array(weights), factors)
    recon_err = frobenius_norm(cp_eval(cp) - t) / max(norm0, 1e-300)
    defect = 0.0
    for f in factors:
        gram = f.T @ f
        defect = max(defect, float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
    if status == "ok" and defect > orth_tol:
        status = "not_orthogonal"
    if status == "ok" and not rank_capped and recon_err > max(orth_tol, tol):
        status = "not_orthogonal"
    return OdecoResult(cp, recon_err, defect, status)
