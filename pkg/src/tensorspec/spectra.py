"""Generalized eigenpairs and singular value tuples of dense tensors.

Definitions (``F_o(x, ...)`` is the tensor contracted by vectors on every mode
except ``o``):

* mode-o Z-eigenpair: ``F_o(x, ..., x) = lambda * x`` with ``||x||_2 = 1``;
  under ``x -> t x`` the eigenvalue scales as ``t^(O-2)``.
* mode-o H-eigenpair: ``F_o(x, ..., x) = lambda * x^(O-1)`` (entrywise power);
  the eigenvalue is scale-invariant.  Records are still reported with
  ``||x||_2 = 1`` as the canonical representative.
* l2 singular tuple: ``F_o(x_1, .., x_O except o) = sigma * x_o`` for every
  mode simultaneously, each ``||x_o||_2 = 1``.
* lO singular tuple: same with ``sigma * x_o^(O-1)`` and unit lO norms.

Solvers are heuristic for modes of size >= 3 (the general problems are
NP-hard); for 2-dimensional modes the solution set of the defining equations
restricted to the unit circle is found exhaustively by dense sampling plus
Newton refinement, which reproduces every isolated solution.

Both sign choices of an eigenvector solve the equations and are reported as
distinct records, matching the convention of listing plus/minus pairs
explicitly.
"""

from __future__ import annotations

import string
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .contract import _contract_all_but_array
from .decomp import _mode_unfolding, _run_starts
from .tensor import DenseTensor, _as_array, is_symmetric, outer

__all__ = [
    "EigenPair",
    "SingularTuple",
    "BestRankOne",
    "BridgeResult",
    "eig_residual",
    "find_eigenpairs",
    "find_eigenpairs_contract_trailing",
    "find_eigenpairs_contract_leading",
    "eig_orbit",
    "singular_residual",
    "find_singular_tuples",
    "singular_orbit",
    "best_rank_one",
    "eig_singular_bridge",
]

_VARIANTS = ("z", "h")


@dataclass(frozen=True)
class EigenPair:
    """A (lambda, x) record for one mode and variant, with its equation defect.

    Solver output is canonical (``||x||_2 = 1``); orbit operations may produce
    unnormalized records, which keep the exact rescaled residual.
    """

    variant: str
    mode: int
    value: float
    vector: np.ndarray
    residual: float
    converged: bool = True

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be 'z' or 'h', got {self.variant!r}")
        vec = np.asarray(self.vector, dtype=float)
        vec.flags.writeable = False
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "residual", float(self.residual))


@dataclass(frozen=True)
class SingularTuple:
    """A (sigma, x_1..x_O) record with the max per-mode equation defect.

    ``p`` is 2 for the l2 variant or the tensor order for the lO variant.
    """

    p: int
    sigma: float
    vectors: tuple[np.ndarray, ...]
    residual: float
    converged: bool = True

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=float) for v in self.vectors)
        for v in vecs:
            v.flags.writeable = False
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "residual", float(self.residual))

    @property
    def order(self) -> int:
        return len(self.vectors)

    def with_nonnegative_sigma(self) -> "SingularTuple":
        """Equivalent record with sigma >= 0 (one vector flipped when needed).

        Only available where the sign rules permit: always for p=2, and for
        p=O only when the order is even.
        """
        if self.sigma >= 0:
            return self
        return singular_orbit(self, flip=(True,) + (False,) * (self.order - 1))


def _check_cubical(arr: np.ndarray) -> int:
    if len(set(arr.shape)) != 1:
        raise ValueError(f"eigenpairs are defined for cubical tensors only, got shape {arr.shape}")
    return arr.shape[0]


def _eig_defect(arr: np.ndarray, variant: str, mode: int, value: float, x: np.ndarray) -> float:
    order = arr.ndim
    f = _contract_all_but_array(arr, mode, [x] * (order - 1))
    rhs = x if variant == "z" else x ** (order - 1)
    return float(np.max(np.abs(f - value * rhs)))


def eig_residual(t: DenseTensor, pair: EigenPair) -> float:
    """Infinity-norm defect of the defining equation; zero iff exact."""
    arr = _as_array(t)
    m = _check_cubical(arr)
    if not 1 <= pair.mode <= arr.ndim:
        raise IndexError(f"mode {pair.mode} out of range [1, {arr.ndim}]")
    if pair.vector.shape != (m,):
        raise ValueError(f"vector length {pair.vector.size} does not match mode size {m}")
    return _eig_defect(arr, pair.variant, pair.mode, pair.value, pair.vector)


def singular_residual(t: DenseTensor, tup: SingularTuple) -> float:
    """Max over modes of the per-equation infinity-norm defect."""
    arr = _as_array(t)
    order = arr.ndim
    if tup.order != order:
        raise ValueError(f"tuple has {tup.order} vectors, tensor has order {order}")
    for o, v in enumerate(tup.vectors, start=1):
        if v.shape != (arr.shape[o - 1],):
            raise ValueError(f"vector {o} length {v.size} does not match mode size {arr.shape[o - 1]}")
    power = 1 if tup.p == 2 else order - 1
    worst = 0.0
    for o in range(1, order + 1):
        others = [tup.vectors[j] for j in range(order) if j != o - 1]
        f = _contract_all_but_array(arr, o, others)
        rhs = tup.vectors[o - 1] ** power
        worst = max(worst, float(np.max(np.abs(f - tup.sigma * rhs))))
    return worst


# -- exhaustive path for 2-dimensional modes -----------------------------------


def _batch_map(arr: np.ndarray, mode: int, xs_batch: np.ndarray) -> np.ndarray:
    """Evaluate F_mode at many vectors at once; xs_batch is (M, N)."""
    order = arr.ndim
    letters = string.ascii_lowercase[:order]
    subs = [letters]
    operands = [arr]
    for m in range(1, order + 1):
        if m != mode:
            subs.append(letters[m - 1] + "z")
            operands.append(xs_batch)
    return np.einsum(",".join(subs) + "->" + letters[mode - 1] + "z", *operands)


def _circle_solve(arr, mode, variant, grid, newton_iters, newton_tol, tol, dedup_tol):
    """All isolated unit-circle solutions for a size-2 mode, by bracketing."""
    order = arr.ndim
    power = 1 if variant == "z" else order - 1
    scale = 1.0 + float(np.max(np.abs(arr)))

    def defect(theta: float) -> float:
        x = np.array([np.cos(theta), np.sin(theta)])
        f = _contract_all_but_array(arr, mode, [x] * (order - 1))
        return float(f[0] * x[1] ** power - f[1] * x[0] ** power)

    thetas = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    xs = np.vstack([np.cos(thetas), np.sin(thetas)])
    fs = _batch_map(arr, mode, xs)
    gs = fs[0] * xs[1] ** power - fs[1] * xs[0] ** power

    near_zero = np.abs(gs) <= 1e-12 * scale
    if np.count_nonzero(near_zero) > grid // 4:
        warnings.warn(
            "defining equation vanishes on a large fraction of the circle; "
            "the solution family is not isolated and is returned sampled",
            stacklevel=3,
        )

    step = 2.0 * np.pi / grid
    abs_gs = np.abs(gs)
    candidates = []
    for i in range(grid):
        j = (i + 1) % grid
        if near_zero[i]:
            candidates.append(thetas[i])
        elif gs[i] * gs[j] < 0.0:
            candidates.append(_refine_root(defect, thetas[i], thetas[i] + step, gs[i], gs[j], newton_iters, newton_tol * scale))
        elif abs_gs[i] <= 1e-7 * scale and abs_gs[i] <= abs_gs[i - 1] and abs_gs[i] <= abs_gs[j]:
            # possible tangential (double) root: Newton from the local minimum;
            # the residual gate below discards false candidates
            candidates.append(
                _refine_root(defect, thetas[i] - step, thetas[i] + step, gs[i - 1], gs[j], newton_iters, newton_tol * scale)
            )

    pairs = []
    for theta in candidates:
        x = np.array([np.cos(theta), np.sin(theta)])
        f = _contract_all_but_array(arr, mode, [x] * (order - 1))
        w = x ** power
        denom = float(w @ w)
        value = float(f @ w) / denom if denom > 0 else 0.0
        residual = float(np.max(np.abs(f - value * w)))
        pairs.append(EigenPair(variant, mode, value, x, residual, converged=residual <= tol))
    return _dedup_pairs([p for p in pairs if p.converged], dedup_tol)


def _refine_root(g: Callable[[float], float], a, b, ga, gb, max_iters, tol) -> float:
    """Newton with central differences, falling back to bisection inside [a, b]."""
    theta = 0.5 * (a + b)
    for _ in range(max_iters):
        val = g(theta)
        if abs(val) <= tol:
            return theta
        h = 1e-7
        slope = (g(theta + h) - g(theta - h)) / (2.0 * h)
        if slope != 0.0:
            nxt = theta - val / slope
        else:
            nxt = np.nan
        if not (a <= nxt <= b):
            # bisection step keeps the bracket
            if ga * val < 0.0:
                b, gb = theta, val
            else:
                a, ga = theta, val
            nxt = 0.5 * (a + b)
        if abs(nxt - theta) <= 1e-16:
            return nxt
        theta = nxt
    return theta


def _dedup_pairs(pairs: list[EigenPair], dedup_tol: float) -> list[EigenPair]:
    kept: list[EigenPair] = []
    for p in sorted(pairs, key=lambda q: q.residual):
        dup = any(
            abs(p.value - k.value) <= dedup_tol * max(1.0, abs(k.value))
            and np.max(np.abs(p.vector - k.vector)) <= dedup_tol
            for k in kept
        )
        if not dup:
            kept.append(p)
    kept.sort(key=lambda p: (-abs(p.value), tuple(p.vector)))
    return kept


# -- iterative path for larger modes --------------------------------------------


def _newton_polish(arr, mode, variant, x0, lam0, iters=50, tol=1e-13):
    """Damped Newton on [F(x) - lam * rhs(x); ||x||^2 - 1] with FD Jacobian."""
    order = arr.ndim
    power = 1 if variant == "z" else order - 1
    m = arr.shape[0]

    def G(v):
        x, lam = v[:m], v[m]
        f = _contract_all_but_array(arr, mode, [x] * (order - 1))
        return np.concatenate([f - lam * x ** power, [x @ x - 1.0]])

    v = np.concatenate([x0, [lam0]])
    gv = G(v)
    scale = 1.0 + float(np.max(np.abs(arr)))
    for _ in range(iters):
        if np.max(np.abs(gv)) <= tol * scale:
            break
        jac = np.empty((m + 1, m + 1))
        h = 1e-7
        for j in range(m + 1):
            dv = np.zeros(m + 1)
            dv[j] = h
            jac[:, j] = (G(v + dv) - G(v - dv)) / (2.0 * h)
        try:
            step = np.linalg.lstsq(jac, -gv, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        t = 1.0
        improved = False
        for _ in range(20):
            cand = v + t * step
            gc = G(cand)
            if np.linalg.norm(gc) < np.linalg.norm(gv):
                v, gv = cand, gc
                improved = True
                break
            t /= 2.0
        if not improved:
            break
    return v[:m], float(v[m])


def _eig_iterative(arr, mode, variant, tol, max_iters, seed, starts, dedup_tol, threads):
    order = arr.ndim
    m = arr.shape[0]
    symmetric = is_symmetric(DenseTensor(arr), tol=1e-12)
    shift = 1.0 + float(np.sum(np.abs(arr)))
    nonneg = bool(np.all(arr >= 0.0))

    seeds: list[np.ndarray] = [np.eye(m)[:, r] for r in range(m)]
    u, _, _ = np.linalg.svd(_mode_unfolding(arr, mode), full_matrices=False)
    seeds.extend(u[:, r] for r in range(u.shape[1]))
    g = np.random.default_rng(seed)
    while len(seeds) < starts:
        v = g.normal(size=m)
        seeds.append(v / np.linalg.norm(v))
    seeds = seeds[:starts]

    def run(x0: np.ndarray) -> list[EigenPair]:
        found = []
        if variant == "z":
            maps: list[Callable[[np.ndarray], np.ndarray]] = [
                lambda x: _contract_all_but_array(arr, mode, [x] * (order - 1))
            ]
            if symmetric:
                # shifted maps converge monotonically to local maxima/minima
                maps = [
                    lambda x: _contract_all_but_array(arr, mode, [x] * (order - 1)) + shift * x,
                    lambda x: shift * x - _contract_all_but_array(arr, mode, [x] * (order - 1)),
                ]
            for step_map in maps:
                x = x0.copy()
                for _ in range(max_iters):
                    y = step_map(x)
                    nrm = np.linalg.norm(y)
                    if nrm == 0.0:
                        break
                    y /= nrm
                    if min(np.linalg.norm(y - x), np.linalg.norm(y + x)) <= 1e-14:
                        x = y
                        break
                    x = y
                lam = float(_contract_all_but_array(arr, mode, [x] * (order - 1)) @ x)
                x, lam = _newton_polish(arr, mode, "z", x, lam)
                res = _eig_defect(arr, "z", mode, lam, x)
                found.append(EigenPair("z", mode, lam, x, res, converged=res <= tol))
        else:
            x = np.abs(x0) if nonneg else x0.copy()
            if nonneg:
                # entrywise-root iteration is valid on the nonnegative path
                for _ in range(max_iters):
                    f = _contract_all_but_array(arr, mode, [x] * (order - 1))
                    if np.any(f < 0.0):
                        break
                    y = f ** (1.0 / (order - 1)) if order > 2 else f
                    nrm = np.linalg.norm(y)
                    if nrm == 0.0:
                        break
                    y /= nrm
                    if np.linalg.norm(y - x) <= 1e-14:
                        x = y
                        break
                    x = y
            f = _contract_all_but_array(arr, mode, [x] * (order - 1))
            w = x ** (order - 1)
            denom = float(w @ w)
            lam = float(f @ w) / denom if denom > 0 else 0.0
            x, lam = _newton_polish(arr, mode, "h", x, lam)
            nrm = np.linalg.norm(x)
            if nrm > 0:
                # the h equation is homogeneous; renormalize the record
                x = x / nrm
                f = _contract_all_but_array(arr, mode, [x] * (order - 1))
                w = x ** (order - 1)
                lam = float(f @ w) / float(w @ w)
            res = _eig_defect(arr, "h", mode, lam, x)
            found.append(EigenPair("h", mode, lam, x, res, converged=res <= tol))
        return found

    batches = _run_starts([lambda s=s: run(s) for s in seeds], threads)
    pairs = [p for batch in batches for p in batch]
    good = _dedup_pairs([p for p in pairs if p.converged], dedup_tol)
    if good:
        return good
    if pairs:
        best = min(pairs, key=lambda p: p.residual)
        return [best]
    return []


def find_eigenpairs(
    t: DenseTensor,
    mode: int,
    variant: str,
    *,
    tol: float = 1e-10,
    grid: int = 2048,
    newton_iters: int = 50,
    newton_tol: float = 1e-13,
    dedup_tol: float = 1e-8,
    max_iters: int = 500,
    seed: int = 0,
    starts: int = 32,
    threads: int = 1,
) -> list[EigenPair]:
    """Mode-``mode`` eigenpairs of a cubical tensor, deduplicated and sorted.

    For modes of size 2 the unit circle is sampled on ``grid`` points, sign
    changes of the collinearity defect are bracketed and Newton-refined; this
    finds every isolated solution deterministically (``seed`` is unused).
    For larger modes a multi-start power iteration with Newton polish is used
    (shifted iteration on symmetric input for the z variant, entrywise-root
    iteration on nonnegative input for the h variant); completeness is not
    claimed there.  Pairs are sorted by decreasing |value|, then vector.

    Every returned pair satisfies ``eig_residual <= tol`` except when nothing
    converged at all, in which case the single best non-converged record is
    returned flagged (``converged=False``).
    """
    arr = _as_array(t)
    m = _check_cubical(arr)
    if not 1 <= mode <= arr.ndim:
        raise IndexError(f"mode {mode} out of range [1, {arr.ndim}]")
    variant = variant.lower()
    if variant not in _VARIANTS:
        raise ValueError(f"variant must be 'z' or 'h', got {variant!r}")
    if m == 2:
        return _circle_solve(arr, mode, variant, grid, newton_iters, newton_tol, tol, dedup_tol)
    return _eig_iterative(arr, mode, variant, tol, max_iters, seed, starts, dedup_tol, threads)


def find_eigenpairs_contract_trailing(t: DenseTensor, variant: str, **opts) -> list[EigenPair]:
    """Eigenpairs with the vector contracted on the trailing O-1 modes (mode 1)."""
    return find_eigenpairs(t, 1, variant, **opts)


def find_eigenpairs_contract_leading(t: DenseTensor, variant: str, **opts) -> list[EigenPair]:
    """Eigenpairs with the vector contracted on the leading O-1 modes (mode O)."""
    return find_eigenpairs(t, _as_array(t).ndim, variant, **opts)


def eig_orbit(pair: EigenPair, t_scale: float, order: int, tensor: DenseTensor | None = None) -> EigenPair:
    """The equivalent eigenpair with the vector rescaled by ``t_scale``.

    z variant: ``(t^(O-2) * lambda, t * x)``; h variant the eigenvalue does
    not depend on the magnitude, so only the vector scales.  Both defining
    equations rescale by exactly ``t^(O-1)``, so the output residual is the
    input residual times ``|t|^(O-1)`` (re-evaluated against ``tensor`` when
    one is supplied).  The output vector is generally not unit norm.
    """
    if t_scale == 0.0:
        raise ValueError("orbit scale must be nonzero")
    if order < 1:
        raise ValueError("order must be >= 1")
    value = pair.value * t_scale ** (order - 2) if pair.variant == "z" else pair.value
    vector = t_scale * pair.vector
    if tensor is not None:
        residual = _eig_defect(_as_array(tensor), pair.variant, pair.mode, value, vector)
    else:
        residual = pair.residual * abs(t_scale) ** (order - 1)
    return EigenPair(pair.variant, pair.mode, value, vector, residual, pair.converged)


# -- singular tuples -------------------------------------------------------------


def _lp_normalize(v: np.ndarray, p: int) -> np.ndarray:
    nrm = float(np.sum(np.abs(v) ** p) ** (1.0 / p))
    if nrm == 0.0:
        raise ZeroDivisionError
    return v / nrm


def _signed_root(v: np.ndarray, k: int) -> np.ndarray:
    return np.sign(v) * np.abs(v) ** (1.0 / k)


def _gauss_newton_tuple(arr, xs0, sigma0, p, iters=50, tol=1e-13):
    """Least-squares Newton on the coupled singular system plus norm constraints."""
    order = arr.ndim
    dims = arr.shape
    power = 1 if p == 2 else order - 1
    sizes = np.cumsum([0] + list(dims))

    def unpack(v):
        return [v[sizes[o]:sizes[o + 1]] for o in range(order)], v[-1]

    def G(v):
        xs, sig = unpack(v)
        parts = []
        for o in range(1, order + 1):
            others = [xs[j] for j in range(order) if j != o - 1]
            f = _contract_all_but_array(arr, o, others)
            parts.append(f - sig * xs[o - 1] ** power)
        norms = [np.sum(np.abs(x) ** p) - 1.0 for x in xs]
        return np.concatenate(parts + [norms])

    v = np.concatenate([np.concatenate(xs0), [sigma0]])
    gv = G(v)
    scale = 1.0 + float(np.max(np.abs(arr)))
    n = v.size
    for _ in range(iters):
        if np.max(np.abs(gv)) <= tol * scale:
            break
        jac = np.empty((gv.size, n))
        h = 1e-7
        for j in range(n):
            dv = np.zeros(n)
            dv[j] = h
            jac[:, j] = (G(v + dv) - G(v - dv)) / (2.0 * h)
        step = np.linalg.lstsq(jac, -gv, rcond=None)[0]
        t = 1.0
        improved = False
        for _ in range(20):
            cand = v + t * step
            gc = G(cand)
            if np.linalg.norm(gc) < np.linalg.norm(gv):
                v, gv = cand, gc
                improved = True
                break
            t /= 2.0
        if not improved:
            break
    xs, sig = unpack(v)
    return [x.copy() for x in xs], float(sig)


def _canonical_tuple_signs(xs: list[np.ndarray], sigma: float, p: int, order: int):
    """Deterministic sign gauge so flip-equivalent records dedup together."""

    def first_nonzero_sign(v):
        for val in v:
            if abs(val) > 1e-12:
                return 1.0 if val > 0 else -1.0
        return 1.0

    xs = [x.copy() for x in xs]
    if p == 2 or order % 2 == 0:
        for o in range(order):
            if first_nonzero_sign(xs[o]) < 0:
                xs[o] = -xs[o]
                sigma = -sigma
    else:
        # odd order, p = O: only the global flip (scale t = -1) is available
        if first_nonzero_sign(xs[0]) < 0:
            xs = [-x for x in xs]
    return xs, sigma


def find_singular_tuples(
    t: DenseTensor,
    p: int,
    *,
    tol: float = 1e-10,
    max_iters: int = 500,
    seed: int = 0,
    starts: int = 32,
    dedup_tol: float = 1e-8,
    threads: int = 1,
) -> list[SingularTuple]:
    """Singular value tuples by multi-start alternating power iteration.

    ``p`` must be 2 or the tensor order.  Starts combine per-mode leading
    singular vectors of the matricizations, coordinate vectors, and seeded
    random draws; each start runs the cyclic update ``x_o <- normalize_p(F_o)``
    (with entrywise signed roots feeding the lO variant) and is tightened by a
    least-squares Newton pass on the coupled system.  A start whose iterate
    collapses to zero restarts with the next derived seed, counted against a
    bounded budget.  The result is deduplicated under the sign gauge and
    sorted by decreasing |sigma|; completeness is not claimed (the problem is
    NP-hard in general).
    """
    arr = _as_array(t)
    order = arr.ndim
    if p not in (2, order):
        raise ValueError(f"p must be 2 or the tensor order {order}, got {p}")
    dims = arr.shape
    power = 1 if p == 2 else order - 1

    svd_starts = []
    factors = [np.linalg.svd(_mode_unfolding(arr, o), full_matrices=False)[0] for o in range(1, order + 1)]
    for r in range(min(dims)):
        svd_starts.append([factors[o][:, r] for o in range(order)])
    coord_starts = []
    for r in range(min(dims)):
        coord_starts.append([np.eye(d)[:, r] for d in dims])

    g = np.random.default_rng(seed)
    seeds = svd_starts + coord_starts
    while len(seeds) < starts:
        seeds.append([g.normal(size=d) for d in dims])
    seeds = seeds[:starts]

    zero_restarts = 0
    max_restarts = starts

    def iterate(xs):
        xs = [x / np.linalg.norm(x) for x in xs]
        for _ in range(max_iters):
            delta = 0.0
            for o in range(1, order + 1):
                others = [xs[j] for j in range(order) if j != o - 1]
                f = _contract_all_but_array(arr, o, others)
                y = f if p == 2 else _signed_root(f, order - 1)
                y = _lp_normalize(y, p)
                delta = max(delta, min(np.linalg.norm(y - xs[o - 1]), np.linalg.norm(y + xs[o - 1])))
                xs[o - 1] = y
            if delta <= 1e-13:
                break
        return xs

    def run(xs0) -> SingularTuple | None:
        try:
            xs = iterate(xs0)
        except ZeroDivisionError:
            return None
        others = [xs[j] for j in range(1, order)]
        f = _contract_all_but_array(arr, 1, others)
        w = xs[0] ** power
        denom = float(w @ w)
        sigma0 = float(f @ w) / denom if denom > 0 else 0.0
        xs, sigma = _gauss_newton_tuple(arr, xs, sigma0, p)
        xs, sigma = _canonical_tuple_signs(xs, sigma, p, order)
        tup = SingularTuple(p, sigma, tuple(xs), 0.0)
        res = singular_residual(DenseTensor(arr), tup)
        return SingularTuple(p, sigma, tuple(xs), res, converged=res <= tol)

    results: list[SingularTuple | None] = _run_starts([lambda s=s: run(s) for s in seeds], threads)
    while None in results and zero_restarts < max_restarts:
        # a zero iterate killed this start; replace it with a fresh seed
        idx = results.index(None)
        zero_restarts += 1
        fresh = np.random.default_rng(seed + starts + zero_restarts)
        results[idx] = run([fresh.normal(size=d) for d in dims])
    tuples = [r for r in results if r is not None]
    good = _dedup_tuples([r for r in tuples if r.converged], dedup_tol)
    if good:
        return good
    if tuples:
        return [min(tuples, key=lambda r: r.residual)]
    return []


def _dedup_tuples(tuples: list[SingularTuple], dedup_tol: float) -> list[SingularTuple]:
    kept: list[SingularTuple] = []
    for t in sorted(tuples, key=lambda r: r.residual):
        dup = False
        for k in kept:
            if abs(t.sigma - k.sigma) > dedup_tol * max(1.0, abs(k.sigma)):
                continue
            if all(
                np.max(np.abs(a - b)) <= dedup_tol
                for a, b in zip(t.vectors, k.vectors)
            ):
                dup = True
                break
        if not dup:
            kept.append(t)
    kept.sort(key=lambda r: (-abs(r.sigma), tuple(np.concatenate(r.vectors))))
    return kept


def singular_orbit(
    tup: SingularTuple,
    *,
    scale: float | None = None,
    flip: Sequence[bool] | None = None,
    tensor: DenseTensor | None = None,
) -> SingularTuple:
    """Apply one equivalence operation to a singular tuple.

    ``scale=t``: every vector scales by ``t``; sigma scales by ``t^(O-2)``
    for p=2 and is unchanged for p=O.  ``flip``: a per-mode sign mask; an odd
    number of flips negates sigma, an even number leaves it unchanged.  For
    the lO variant with odd order there is no sign indeterminacy and flips
    are rejected.  Flips preserve the residual exactly; scaling multiplies it
    by ``|t|^(O-1)`` (re-evaluated when ``tensor`` is given).
    """
    if (scale is None) == (flip is None):
        raise ValueError("give exactly one of scale= or flip=")
    order = tup.order
    if scale is not None:
        if scale == 0.0:
            raise ValueError("orbit scale must be nonzero")
        vectors = tuple(scale * v for v in tup.vectors)
        sigma = tup.sigma * scale ** (order - 2) if tup.p == 2 else tup.sigma
        residual = tup.residual * abs(scale) ** (order - 1)
    else:
        flip = tuple(bool(b) for b in flip)
        if len(flip) != order:
            raise ValueError(f"flip mask needs {order} entries, got {len(flip)}")
        if tup.p != 2 and order % 2 == 1 and any(flip):
            raise ValueError("lO tuples of odd order admit no sign flips")
        vectors = tuple(-v if b else v for v, b in zip(tup.vectors, flip))
        sigma = -tup.sigma if sum(flip) % 2 == 1 else tup.sigma
        residual = tup.residual
    out = SingularTuple(tup.p, sigma, vectors, residual, tup.converged)
    if tensor is not None:
        out = replace(out, residual=singular_residual(tensor, out))
    return out


@dataclass(frozen=True)
class BestRankOne:
    """Best rank-one approximation found: sigma, unit factors, the tensor, and its error."""

    sigma: float
    vectors: tuple[np.ndarray, ...]
    tensor: DenseTensor
    error: float


def best_rank_one(t: DenseTensor, **opts) -> BestRankOne:
    """Best rank-one approximation via the top l2 singular tuple.

    The largest l2 singular value equals the product of the factor norms of
    the best rank-one approximation, and the unit factors are its singular
    vectors.  On the zero tensor sigma is 0 and the vectors are (arbitrary)
    coordinate unit vectors.
    """
    arr = _as_array(t)
    if not np.any(arr):
        vectors = tuple(np.eye(d)[:, 0] for d in arr.shape)
        return BestRankOne(0.0, vectors, DenseTensor(np.zeros(arr.shape)), 0.0)
    tuples = find_singular_tuples(t, 2, **opts)
    top = max(tuples, key=lambda r: abs(r.sigma)).with_nonnegative_sigma()
    rank_one = top.sigma * outer(*top.vectors)
    err = float(np.linalg.norm(arr - rank_one.to_array()))
    return BestRankOne(top.sigma, top.vectors, rank_one, err)


@dataclass(frozen=True)
class BridgeResult:
    """Outcome of promoting a z-eigenpair to an O-copies singular tuple.

    ``status`` is "ok" with the tuple set, or "mode_mismatch" when the vector
    is not an eigenvector of every mode with one shared eigenvalue
    (``per_mode_residuals`` shows which equations fail).
    """

    status: str
    tuple: SingularTuple | None
    per_mode_residuals: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def eig_singular_bridge(t: DenseTensor, pair: EigenPair, tol: float = 1e-10) -> BridgeResult:
    """O copies of an eigenvector form a singular tuple iff it is an
    eigenvector for every mode with the same eigenvalue.

    Checks the z equation of ``pair`` against all modes; on success returns
    the l2 tuple with ``sigma = |lambda|`` and signs arranged to keep sigma
    nonnegative.  Precondition failure is reported in the result status, not
    raised.
    """
    arr = _as_array(t)
    _check_cubical(arr)
    if pair.variant != "z":
        raise ValueError("the bridge is defined for z-eigenpairs")
    order = arr.ndim
    nrm = float(np.linalg.norm(pair.vector))
    if nrm == 0.0:
        raise ValueError("eigenvector must be nonzero")
    # renormalize the record first (scale rule with t = 1/||x||)
    x = pair.vector / nrm
    lam = pair.value / nrm ** (order - 2)
    residuals = tuple(
        _eig_defect(arr, "z", o, lam, x) for o in range(1, order + 1)
    )
    if any(r > tol for r in residuals):
        return BridgeResult("mode_mismatch", None, residuals)
    if lam >= 0:
        vectors = tuple(x.copy() for _ in range(order))
        sigma = lam
    else:
        vectors = (-x,) + tuple(x.copy() for _ in range(order - 1))
        sigma = -lam
    tup = SingularTuple(2, sigma, vectors, 0.0)
    tup = replace(tup, residual=singular_residual(t, tup))
    return BridgeResult("ok", tup, residuals)
