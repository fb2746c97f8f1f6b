"""Dense Vandermonde baselines: build, pivoted LU, inversion, conditioning.

The matrix V has one row per node and one column per monomial in the
canonical order, so V @ coeffs evaluates a polynomial at every node at
once.  Solving V x = f gives the interpolation coefficients directly and
serves as the oracle the fast solver is checked against.

Regularity of V is also the genericity criterion for a node set, but the
raw monomial-basis matrix is a numerically unusable witness once node
coordinates grow: entries span hundreds of orders of magnitude and LU
pivots sink below any honest threshold even for perfectly regular sets.
genericity_check therefore uses two progressively cheaper formulations
that are regularity-equivalent in exact arithmetic:

- structured route: when the node set carries its per-leaf provenance, the
  determinant factors exactly into leaf-local Vandermonde determinants
  times the values of each split hyperplane at the nodes that must avoid
  it (peel one hyperplane at a time: in coordinates adapted to H the
  matrix is block triangular with blocks V(P_on_H) and diag(Q_H(p)) ·
  V(P_off_H)).  Every factor is O(1)-scaled, so the pivot test is applied
  where it means something.
- dense route: map the nodes affinely into [-1,1]^m (an affine image of a
  generic set is generic), balance rows and columns by exact powers of
  two, and run pivoted LU with the relative threshold.

lu_solve and invert are the baseline solvers and face the caller's matrix
as given, up to exact power-of-two row equilibration, which changes no
mantissa bits and preserves solutions exactly.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .exceptions import SingularMatrixError
from .monomials import build_order, count_degree, count_total
from .nodes import NodeSet, leaf_slices
from .tree import build_tree

__all__ = [
    "build_vandermonde",
    "lu_solve",
    "invert",
    "genericity_check",
    "cond_one",
    "cond_two",
    "singular_values_jacobi",
    "lu_factor_ops",
    "lu_solve_ops",
    "invert_ops",
    "PIVOT_RTOL",
    "COND_DESK_LIMIT",
    "JACOBI_LIMIT",
]

PIVOT_RTOL = 1e-13
# membership of on-hyperplane nodes must hold to data accuracy, not just to
# pivot accuracy; construction and file round-trips are exact to ~1e-16
MEMBERSHIP_RTOL = 1e-9
# explicit inverses (1-norm cond) stay desk-scale; Jacobi sweeps are O(N^3)
# per sweep so they get a tighter cap
COND_DESK_LIMIT = 3000
JACOBI_LIMIT = 300


def lu_factor_ops(size: int) -> int:
    """Multiply-adds of partial-pivot LU: sum of (size-k)^2 + (size-k)."""
    return (size**3 - size) // 3


def lu_solve_ops(size: int) -> int:
    """Multiply-adds of one forward+back substitution pair."""
    return size * size


def invert_ops(size: int) -> int:
    """Factorization plus one substitution pair per column."""
    return lu_factor_ops(size) + size * lu_solve_ops(size)


def _points_of(nodes) -> np.ndarray:
    return np.asarray(getattr(nodes, "points", nodes), dtype=float)


def build_vandermonde(nodes, m: int, n: int, tally=None) -> np.ndarray:
    """V[i, j] = monomial j evaluated at node i, columns in canonical order.

    Accepts a NodeSet or a raw (count, m) array.  Columns are filled one
    degree block at a time through the parent recursion
    column[j] = column[parent(j)] * coordinate[var(j)].
    """
    pts = _points_of(nodes)
    total = count_total(m, n)
    if pts.ndim != 2 or pts.shape[1] != m:
        raise ValueError(f"nodes must have shape (count, {m}), got {pts.shape}")
    if pts.shape[0] != total:
        raise ValueError(
            f"node count {pts.shape[0]} does not match N({m},{n}) = {total}"
        )
    v = np.empty((total, total))
    _fill_vandermonde(v, pts, m, n)
    if tally is not None:
        tally.add_ops(total * (total - 1))
    return v


def _fill_vandermonde(v: np.ndarray, pts: np.ndarray, m: int, n: int) -> None:
    order = build_order(m, n)
    v[:, 0] = 1.0
    for k in range(1, n + 1):
        blk = order.block(k)
        v[:, blk] = v[:, order.parent[blk]] * pts[:, order.var[blk]]


def _pow2_row_scales(v: np.ndarray) -> np.ndarray:
    """Per-row power-of-two scale with row_max / scale in [1/2, 1)."""
    row_max = np.abs(v).max(axis=1)
    _, exps = np.frexp(row_max)
    scales = np.ldexp(np.ones_like(row_max), exps)
    scales[row_max == 0.0] = 1.0
    return scales


def _factor(v: np.ndarray, tally=None):
    """Row-equilibrated partial-pivot LU.

    Returns (lu, piv, scales, pivots, threshold): lu/piv factor the row-scaled
    matrix v / scales[:, None]; pivots are |diag U|; threshold is the
    singularity cutoff PIVOT_RTOL * max|scaled entry|.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValueError(f"matrix must be square, got shape {v.shape}")
    scales = _pow2_row_scales(v)
    scaled = v / scales[:, None]
    threshold = PIVOT_RTOL * np.abs(scaled).max()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(scaled, overwrite_a=True, check_finite=False)
    if tally is not None:
        tally.add_ops(lu_factor_ops(v.shape[0]))
    pivots = np.abs(np.diagonal(lu))
    return lu, piv, scales, pivots, threshold


def _require_regular(pivots: np.ndarray, threshold: float) -> None:
    small = int(np.argmin(pivots))
    if pivots[small] <= threshold:
        raise SingularMatrixError(
            f"matrix is singular to working precision: pivot {small} is "
            f"{pivots[small]:.3e} (threshold {threshold:.3e}); "
            "the nodes appear degenerate"
        )


def lu_solve(v, rhs, tally=None, stats: dict | None = None) -> np.ndarray:
    """Solve V x = rhs by partial-pivoted elimination.

    Raises SingularMatrixError when a pivot falls below the relative
    threshold.  When a stats dict is supplied, writes the achieved residual
    under "residual_inf".
    """
    v = np.asarray(v, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (v.shape[0],):
        raise ValueError(f"rhs shape {rhs.shape} does not match matrix {v.shape}")
    lu, piv, scales, pivots, threshold = _factor(v, tally)
    _require_regular(pivots, threshold)
    x = scipy.linalg.lu_solve((lu, piv), rhs / scales, check_finite=False)
    if tally is not None:
        tally.add_ops(lu_solve_ops(v.shape[0]))
    if stats is not None:
        stats["residual_inf"] = float(np.abs(v @ x - rhs).max())
    return x


def invert(v, tally=None) -> np.ndarray:
    """Explicit inverse via one LU factorization and N substitution pairs."""
    v = np.asarray(v, dtype=float)
    lu, piv, scales, pivots, threshold = _factor(v, tally)
    _require_regular(pivots, threshold)
    # V = diag(scales) @ Vhat, so V^-1 = Vhat^-1 @ diag(1/scales)
    rhs = np.diag(1.0 / scales)
    out = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    if tally is not None:
        tally.add_ops(v.shape[0] * lu_solve_ops(v.shape[0]))
    return out


def _one_norm(a: np.ndarray) -> float:
    return float(np.abs(a).sum(axis=0).max())


def cond_one(v) -> float:
    """1-norm condition number through the explicit inverse; inf if singular."""
    v = np.asarray(v, dtype=float)
    try:
        inv = invert(v)
    except SingularMatrixError:
        return float("inf")
    return _one_norm(v) * _one_norm(inv)


def _box_normalize(pts: np.ndarray):
    """Affine per-coordinate map onto [-1,1]^m; returns (mapped, sum log h).

    Genericity is invariant under full-rank affine maps, and this one
    changes log|det V| by exactly degree_sum * sum(log h) where degree_sum
    is the total exponent each variable contributes over all monomials.
    """
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    center = (lo + hi) / 2.0
    half = np.where(hi > lo, (hi - lo) / 2.0, 1.0)
    with np.errstate(divide="ignore"):
        log_half_sum = float(np.log(half).sum())
    return (pts - center) / half, log_half_sum


def _balance_pow2(v: np.ndarray, passes: int = 4):
    """Two-sided exact power-of-two balancing, in place.

    Returns (v, total_exp) where total_exp is the summed binary exponent of
    all row and column scales, so log|det unbalanced| =
    log|det balanced| + total_exp * log 2.
    """
    total_exp = 0
    for _ in range(passes):
        for axis in (1, 0):
            mx = np.abs(v).max(axis=axis)
            _, exps = np.frexp(mx)
            exps[mx == 0.0] = 0
            scales = np.ldexp(np.ones_like(mx), exps)
            if axis == 1:
                v /= scales[:, None]
            else:
                v /= scales[None, :]
            total_exp += int(exps.sum())
    return v, total_exp


def _variable_degree_sum(m: int, n: int) -> int:
    """Sum of one variable's exponent over all monomials of degree <= n."""
    total = sum(k * count_degree(m, k) for k in range(1, n + 1))
    return total // m


def _dense_certificate(pts: np.ndarray, m: int, n: int, cond_limit: int) -> dict:
    """Box-normalized, balanced, pivoted-LU regularity test.

    abs_det_log is mapped back to the raw monomial-basis matrix of the
    unnormalized points.  cond_1 describes the normalized balanced system
    (the best legally rescaled dense problem) and is deliberately not
    gated on the pivot test: a huge finite value is the honest report for
    a near-singular system.
    """
    total = pts.shape[0]
    mapped, log_half_sum = _box_normalize(pts)
    v = np.empty((total, total), order="F")
    _fill_vandermonde(v, mapped, m, n)
    v, scale_exp = _balance_pow2(v)
    threshold = PIVOT_RTOL * np.abs(v).max()
    norm_balanced = _one_norm(v)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(v, overwrite_a=True, check_finite=False)
    pivots = np.abs(np.diagonal(lu))
    generic = bool(pivots.min() > threshold)
    with np.errstate(divide="ignore"):
        abs_det_log = float(
            np.log(pivots).sum()
            + scale_exp * np.log(2.0)
            + _variable_degree_sum(m, n) * log_half_sum
        )
    cond_1 = float("nan")
    if total <= cond_limit:
        with np.errstate(all="ignore"):
            inv = scipy.linalg.lu_solve((lu, piv), np.eye(total), check_finite=False)
            cond_1 = norm_balanced * _one_norm(inv)
        if not np.isfinite(cond_1):
            cond_1 = float("inf")
    return {
        "generic": generic,
        "abs_det_log": abs_det_log,
        "cond_1": cond_1,
        "route": "dense",
    }


def _reconstruct_offsets(nodes: NodeSet, tree, slices: dict) -> dict:
    """Axis and offset of each split hyperplane, read off the node data.

    Assumes the standard axis-aligned frame: the normal at a bit-1 vertex
    is the unit vector of its own dimension index, and the offset is that
    coordinate of any node in its subtree (all of them lie on the plane).
    """
    specs = {}
    for v in tree.vertices:
        if not v.eps or v.eps[-1] != 1:
            continue
        axis = v.sigma[0]
        prefix = v.eps
        first = next(
            leaf for leaf in tree.leaves if leaf.eps[: len(prefix)] == prefix
        )
        row = slices["".join(map(str, first.eps))].start
        specs[v.eps] = (axis, float(nodes.points[row, axis]))
    return specs


def _structured_certificate(nodes: NodeSet, m: int, n: int, tree, hyperplanes):
    """Regularity via the construction's exact determinant factorization.

    Returns a result dict, or None when the provenance does not describe a
    valid on/off-hyperplane structure (the caller then falls back to the
    dense route).  Pivot-style thresholds are applied factor by factor:
    leaf-local LU pivots, QR diagonals of degree-1 leaf offsets, and each
    hyperplane value as a 1x1 pivot.
    """
    try:
        slices = leaf_slices(nodes)
    except ValueError:
        return None
    labels = {"".join(map(str, leaf.eps)): leaf for leaf in tree.leaves}
    if set(slices) != set(labels):
        return None
    for label, leaf in labels.items():
        d, k = leaf.sigma
        expected = k + 1 if d == 1 else d + 1
        if slices[label].stop - slices[label].start != expected:
            return None
    if hyperplanes is not None:
        specs = {
            eps: (spec.normal, spec.offset) for eps, spec in hyperplanes.items()
        }
    else:
        specs = {}
        for eps, (axis, offset) in _reconstruct_offsets(nodes, tree, slices).items():
            normal = np.zeros(m)
            normal[axis] = 1.0
            specs[eps] = (normal, offset)

    generic = True
    abs_det_log = 0.0
    with np.errstate(divide="ignore"):
        for label, leaf in labels.items():
            pts = nodes.points[slices[label]]
            d, k = leaf.sigma
            if d == 1:
                direction = pts[-1] - pts[0]
                length = float(np.linalg.norm(direction))
                if length == 0.0:
                    return None
                direction /= length
                t = (pts - pts[0]) @ direction
                resid = pts - pts[0] - t[:, None] * direction
                if np.abs(resid).max() > MEMBERSHIP_RTOL * (1.0 + np.abs(t).max()):
                    return None
                local = np.vander(t, increasing=True)
                lu, piv, scales, pivots, threshold = _factor(local)
                if pivots.min() <= threshold:
                    generic = False
                abs_det_log += float(np.log(pivots).sum() + np.log(scales).sum())
            else:
                edges = pts[1:] - pts[0]
                r = np.linalg.qr(edges.T, mode="r")
                diag = np.abs(np.diagonal(r))
                if diag.min() <= PIVOT_RTOL * max(1.0, diag.max()):
                    generic = False
                abs_det_log += float(np.log(diag).sum())
            for i, bit in enumerate(leaf.eps):
                key = leaf.eps[: i + 1] if bit == 1 else leaf.eps[:i] + (1,)
                normal, offset = specs[key]
                values = pts @ normal - offset
                scale = max(1.0, abs(offset), float(np.abs(pts @ normal).max()))
                if bit == 1:
                    if np.abs(values).max() > MEMBERSHIP_RTOL * scale:
                        return None
                else:
                    if np.abs(values).min() <= PIVOT_RTOL * scale:
                        generic = False
                    abs_det_log += float(np.log(np.abs(values)).sum())
    return {
        "generic": generic,
        "abs_det_log": abs_det_log if generic else float("-inf"),
        "route": "structured",
    }


def genericity_check(
    nodes,
    m: int,
    n: int,
    tree=None,
    hyperplanes=None,
    cond_limit: int = COND_DESK_LIMIT,
) -> dict:
    """Decide regularity of V_{m,n}(nodes) and report its scale.

    Returns {"generic", "abs_det_log", "cond_1", "route"}.  Singularity is
    a result, not an error.  Node sets carrying leaf provenance (and, when
    available, their tree and hyperplane assignment) are certified by the
    structured determinant factorization; anything else goes through the
    dense normalized pivoted LU.  cond_1 always describes the dense
    normalized system and needs the explicit inverse, so it is only
    computed for N <= cond_limit and is nan above that.
    """
    pts = _points_of(nodes)
    total = count_total(m, n)
    if pts.shape != (total, m):
        raise ValueError(
            f"node set shape {pts.shape} does not match (N({m},{n}), {m}) = "
            f"({total}, {m})"
        )
    result = None
    if (
        isinstance(nodes, NodeSet)
        and m >= 2
        and n >= 2
        and any(label != "-" for label in nodes.provenance)
    ):
        if tree is None:
            tree = build_tree(m, n)
        result = _structured_certificate(nodes, m, n, tree, hyperplanes)
    if result is None:
        return _dense_certificate(pts, m, n, cond_limit)
    if total <= cond_limit:
        result["cond_1"] = _dense_certificate(pts, m, n, cond_limit)["cond_1"]
    else:
        result["cond_1"] = float("nan")
    return result


def singular_values_jacobi(
    v, tol: float = 1e-12, max_sweeps: int = 60
) -> np.ndarray:
    """Singular values by one-sided Jacobi column orthogonalization.

    Sweeps plane rotations over all column pairs until every pair is
    orthogonal to relative tolerance tol; the singular values are the final
    column norms, returned in descending order.  Quadratic convergence makes
    a handful of sweeps typical, but each sweep is O(N^3), hence the
    JACOBI_LIMIT cap.
    """
    a = np.array(v, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    size = a.shape[0]
    if size > JACOBI_LIMIT:
        raise ValueError(
            f"one-sided Jacobi is capped at {JACOBI_LIMIT} columns, got {size}"
        )
    for _ in range(max_sweeps):
        converged = True
        for i in range(size - 1):
            for j in range(i + 1, size):
                ci = a[:, i]
                cj = a[:, j]
                app = float(ci @ ci)
                aqq = float(cj @ cj)
                apq = float(ci @ cj)
                if abs(apq) <= tol * np.sqrt(app * aqq):
                    continue
                converged = False
                tau = (aqq - app) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                if tau == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_i = c * ci - s * cj
                new_j = s * ci + c * cj
                a[:, i] = new_i
                a[:, j] = new_j
        if converged:
            break
    else:
        raise ArithmeticError(
            f"Jacobi sweep limit {max_sweeps} reached without convergence"
        )
    svals = np.sqrt((a * a).sum(axis=0))
    svals[::-1].sort()
    return svals


def cond_two(v) -> float:
    """2-norm condition number from Jacobi singular values; inf if rank-deficient."""
    svals = singular_values_jacobi(v)
    if svals[-1] == 0.0:
        return float("inf")
    return float(svals[0] / svals[-1])
