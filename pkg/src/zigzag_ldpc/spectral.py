"""Normalized adjacency spectra.

``lambda2`` is the second largest *signed* eigenvalue of the normalized
adjacency.  Because graph products are bounded in terms of the second
largest eigenvalue in absolute value, the report also carries
``lambda_abs`` (regular graphs) and ``sigma2``, the second singular value of
the normalized biadjacency (bipartite graphs, where -1 is always an
eigenvalue).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Literal, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import DisconnectedError, EmptyGraphError, NoConvergenceError
from .graph_core import BipartiteRotationGraph, RotationGraph

DENSE_MAX = 4096
POWER_MAX_ITER = 10_000
POWER_TOL = 1e-8

Method = Literal["auto", "dense", "power-iteration"]
AnyGraph = Union[RotationGraph, BipartiteRotationGraph, np.ndarray, sp.spmatrix]


@dataclass(frozen=True)
class SpectralReport:
    lambda_max: float
    lambda2: float
    lambda_abs: float | None
    sigma2: float | None
    method: str
    residual: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @property
    def expansion(self) -> float:
        """Second eigenvalue in the sense used by the product bounds."""
        if self.sigma2 is not None:
            return self.sigma2
        return self.lambda_abs if self.lambda_abs is not None else self.lambda2

    def summary(self) -> str:
        parts = [f"method={self.method}", f"lambda_max={self.lambda_max:.10f}", f"lambda2={self.lambda2:.10f}"]
        if self.lambda_abs is not None:
            parts.append(f"lambda_abs={self.lambda_abs:.10f}")
        if self.sigma2 is not None:
            parts.append(f"sigma2={self.sigma2:.10f}")
        parts.append(f"residual={self.residual:.2e}")
        return " ".join(parts)


def normalize(g: AnyGraph) -> sp.csr_matrix:
    """Normalized adjacency.

    d-regular graphs are scaled by 1/d, (c, d)-biregular graphs by
    1/sqrt(cd), and any other symmetric adjacency matrix entrywise by
    1/sqrt(r_i c_j) from its row and column weights.
    """
    if isinstance(g, RotationGraph):
        if g.num_vertices == 0 or g.degree == 0:
            raise EmptyGraphError("graph has no edges")
        return (g.adjacency() / g.degree).tocsr()
    if isinstance(g, BipartiteRotationGraph):
        if g.num_edges == 0:
            raise EmptyGraphError("graph has no edges")
        return (g.adjacency() / math.sqrt(g.left_degree * g.right_degree)).tocsr()
    a = sp.csr_matrix(g, dtype=float)
    if a.shape[0] == 0 or a.nnz == 0:
        raise EmptyGraphError("graph has no edges")
    r = np.asarray(a.sum(axis=1)).ravel()
    c = np.asarray(a.sum(axis=0)).ravel()
    with np.errstate(divide="ignore"):
        rs = np.where(r > 0, 1 / np.sqrt(r), 0.0)
        cs = np.where(c > 0, 1 / np.sqrt(c), 0.0)
    return (sp.diags(rs) @ a @ sp.diags(cs)).tocsr()


def _top_vector(g: AnyGraph, a: sp.csr_matrix) -> np.ndarray:
    if isinstance(g, RotationGraph):
        v = np.ones(g.num_vertices)
    elif isinstance(g, BipartiteRotationGraph):
        v = np.concatenate(
            [np.ones(g.num_left), math.sqrt(g.right_degree / g.left_degree) * np.ones(g.num_right)]
        )
    else:
        raw = sp.csr_matrix(g, dtype=float)
        v = np.sqrt(np.asarray(raw.sum(axis=1)).ravel())
    return v / np.linalg.norm(v)


def _check_connected(a: sp.spmatrix) -> None:
    k, _ = connected_components(a, directed=False)
    if k != 1:
        raise DisconnectedError(f"graph has {k} connected components")


def power_iteration(
    op,
    dim: int,
    deflate: list[np.ndarray],
    *,
    shift: float = 0.0,
    seed: int = 0,
    max_iter: int = POWER_MAX_ITER,
    tol: float = POWER_TOL,
) -> tuple[float, np.ndarray, float]:
    """Dominant eigenpair of ``op + shift*I`` on the complement of ``deflate``.

    ``deflate`` holds orthonormal vectors.  Returns the eigenvalue of ``op``
    itself, the vector and the residual norm.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(dim)

    def project(y):
        for q in deflate:
            y = y - (q @ y) * q
        return y

    x = project(x)
    x /= np.linalg.norm(x)
    mu_prev = math.inf
    for _ in range(max_iter):
        y = project(op(x) + shift * x)
        mu = float(x @ y)
        ny = np.linalg.norm(y)
        if ny == 0:
            return -shift, x, 0.0
        x = y / ny
        if abs(mu - mu_prev) < tol * max(1.0, abs(mu)):
            ax = project(op(x))
            lam = float(x @ ax)
            return lam, x, float(np.linalg.norm(ax - lam * x))
        mu_prev = mu
    raise NoConvergenceError(f"power iteration did not converge in {max_iter} steps")


def _dense_report(g: AnyGraph, a: sp.csr_matrix) -> SpectralReport:
    dense = a.toarray()
    vals = np.linalg.eigvalsh(dense)
    lam_max = float(vals[-1])
    lam2 = float(vals[-2]) if len(vals) > 1 else -1.0
    residual = 0.0
    lam_abs = None
    sigma2 = None
    if isinstance(g, BipartiteRotationGraph):
        b = g.biadjacency().toarray() / math.sqrt(g.left_degree * g.right_degree)
        s = np.linalg.svd(b, compute_uv=False)
        sigma2 = float(s[1]) if len(s) > 1 else 0.0
    else:
        mags = np.sort(np.abs(vals))
        lam_abs = float(mags[-2]) if len(mags) > 1 else 0.0
    return SpectralReport(lam_max, lam2, lam_abs, sigma2, "dense", residual)


def _power_report(g: AnyGraph, a: sp.csr_matrix, seed: int) -> SpectralReport:
    n = a.shape[0]
    top = _top_vector(g, a)
    lam_max = float(top @ (a @ top))
    matvec = lambda x: a @ x  # noqa: E731
    if isinstance(g, BipartiteRotationGraph):
        b = g.biadjacency().astype(float) / math.sqrt(g.left_degree * g.right_degree)
        ones = np.ones(g.num_left) / math.sqrt(g.num_left)
        gram = lambda x: b @ (b.T @ x)  # noqa: E731
        s2sq, _, res = power_iteration(gram, g.num_left, [ones], seed=seed)
        sigma2 = math.sqrt(max(s2sq, 0.0))
        return SpectralReport(lam_max, sigma2, None, sigma2, "power-iteration", res)
    # signed second eigenvalue: shift the spectrum into [0, 2]
    lam2, _, res = power_iteration(matvec, n, [top], shift=1.0, seed=seed)
    # largest magnitude on the complement: squared operator
    sq = lambda x: a @ (a @ x)  # noqa: E731
    abs_sq, _, res2 = power_iteration(sq, n, [top], seed=seed + 1)
    return SpectralReport(
        lam_max, lam2, math.sqrt(max(abs_sq, 0.0)), None, "power-iteration", max(res, res2)
    )


def lambda2(g: AnyGraph, method: Method = "auto", seed: int = 0) -> SpectralReport:
    """Second eigenvalue report of a connected graph."""
    a = normalize(g)
    _check_connected(a)
    if method == "auto":
        method = "dense" if a.shape[0] <= DENSE_MAX else "power-iteration"
    if method == "dense":
        return _dense_report(g, a)
    if method == "power-iteration":
        return _power_report(g, a, seed)
    raise ValueError(f"unknown method {method!r}")


def is_expander_certificate(report: SpectralReport, kappa: float) -> bool:
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    return report.lambda2 < kappa


def ramanujan_threshold(d: int) -> float:
    return 2 * math.sqrt(d - 1) / d
