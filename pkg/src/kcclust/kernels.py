"""Kernel evaluation, Gram matrices, and the Cholesky embedding.

A dataset is lifted into a feature space through a positive (semi)definite
kernel k(x, y).  The n-by-n Gram matrix K with K_ij = k(x_i, x_j) is then
factored as K = Z^T Z with Z upper triangular; the columns z_i of Z are
finite-dimensional stand-ins for the feature-space images of the points and
carry exactly the same inner products.  Downstream solvers work on Z (or on
coefficient vectors against K) and use triangular solves against the factor
instead of ever forming an inverse of K.

Real data frequently contain duplicated or near-duplicated points, which
make K numerically singular.  ``cholesky_embed`` therefore supports an
escalating diagonal jitter, scaled by tr(K)/n so the perturbation is
unit-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NotPositiveDefiniteError, SingularEmbeddingError

VALID_KINDS = ("gaussian", "linear", "polynomial")

# escalating jitter ladder, as multiples of tr(K)/n
JITTER_LADDER = (0.0, 1e-10, 1e-8, 1e-6)


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel function to use and its parameters.

    Parameters
    ----------
    kind : {'gaussian', 'linear', 'polynomial'}
    sigma1 : float
        Bandwidth of the Gaussian kernel, in data units.  Ignored by the
        other kinds.
    degree : int
        Degree of the polynomial kernel (>= 1).
    offset : float
        Additive constant of the polynomial kernel, k(x,y) = (x.y + offset)^d.
    """

    kind: str = "gaussian"
    sigma1: float = 1.0
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}; expected one of {VALID_KINDS}")
        if self.kind == "gaussian" and not self.sigma1 > 0:
            raise ValueError(f"sigma1 must be positive, got {self.sigma1}")
        if self.kind == "polynomial" and self.degree < 1:
            raise ValueError(f"polynomial degree must be >= 1, got {self.degree}")


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric matrix of pairwise kernel values.

    ``jitter`` records what has actually been added to the diagonal; it is 0
    as built by :func:`gram_matrix` and is only set by the embedding step.
    """

    entries: np.ndarray
    jitter: float = 0.0

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Embedding:
    """Upper-triangular factor Z with Z^T Z = K + jitter*I.

    Column i of ``Z`` is the embedded point z_i.
    """

    Z: np.ndarray
    jitter: float = 0.0

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    def points(self) -> np.ndarray:
        """The embedded points as rows (transpose of Z)."""
        return self.Z.T


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """Evaluate k(x, y) for a single pair of d-vectors.

    Raises ValueError when the two vectors have different dimension.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.size == 0:
        raise ValueError("points must have dimension >= 1")
    if spec.kind == "gaussian":
        d2 = float(np.dot(x - y, x - y))
        return float(np.exp(-d2 / (2.0 * spec.sigma1**2)))
    if spec.kind == "linear":
        return float(np.dot(x, y))
    return float((np.dot(x, y) + spec.offset) ** spec.degree)


def gram_matrix(spec: KernelSpec, data: np.ndarray) -> GramMatrix:
    """Build the n-by-n Gram matrix of a dataset (rows = points).

    Symmetry is exact by construction; no jitter is applied here.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError(f"expected an (n, d) dataset with n >= 2, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("dataset contains non-finite entries")

    G = X @ X.T
    if spec.kind == "gaussian":
        sq = np.einsum("ij,ij->i", X, X)
        d2 = sq[:, None] + sq[None, :] - 2.0 * G
        np.maximum(d2, 0.0, out=d2)
        K = np.exp(-d2 / (2.0 * spec.sigma1**2))
    elif spec.kind == "linear":
        K = G
    else:
        K = (G + spec.offset) ** spec.degree
    # enforce exact symmetry against floating-point asymmetry of the BLAS product
    K = (K + K.T) / 2.0
    if spec.kind == "gaussian":
        np.fill_diagonal(K, 1.0)
    return GramMatrix(entries=K, jitter=0.0)


def _try_cholesky(K: np.ndarray):
    """Attempt an upper-triangular factorization; return (Z, failing_minor)."""
    c, info = scipy.linalg.lapack.dpotrf(K, lower=0, overwrite_a=0)
    if info > 0:
        return None, int(info)
    if info < 0:
        raise ValueError(f"illegal value in argument {-info} of internal dpotrf")
    return np.triu(c), 0


def cholesky_embed(K: GramMatrix, jitter_policy: str = "escalating", eps: float = 0.0) -> Embedding:
    """Factor K (+ jitter) as Z^T Z with Z upper triangular.

    jitter_policy:
        'none'       factor K as given;
        'fixed'      add ``eps`` to the diagonal first;
        'escalating' try successive jitters 0, 1e-10, 1e-8, 1e-6 (times
                     tr(K)/n) and keep the first that factors.

    Raises NotPositiveDefiniteError (with the failing leading-minor index of
    the last attempt) when every attempt fails.
    """
    A = np.asarray(K.entries, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"Gram matrix must be square, got shape {A.shape}")
    n = A.shape[0]

    if jitter_policy == "none":
        ladder = [0.0]
    elif jitter_policy == "fixed":
        if eps < 0:
            raise ValueError(f"fixed jitter must be non-negative, got {eps}")
        ladder = [float(eps)]
    elif jitter_policy == "escalating":
        scale = float(np.trace(A)) / n
        ladder = [lvl * scale for lvl in JITTER_LADDER]
    else:
        raise ValueError(f"unknown jitter policy {jitter_policy!r}")

    minor = 0
    for e in ladder:
        M = A if e == 0.0 else A + e * np.eye(n)
        Z, minor = _try_cholesky(M)
        if Z is not None:
            return Embedding(Z=Z, jitter=K.jitter + e)
    raise NotPositiveDefiniteError(minor)


def gram_solve(emb: Embedding, rhs: np.ndarray) -> np.ndarray:
    """Solve (Z^T Z) v = rhs by two triangular solves.

    ``rhs`` may be a vector or a matrix of stacked right-hand-side columns;
    the inverse of K is never formed.
    """
    Z = emb.Z
    if np.any(np.diag(Z) == 0.0):
        raise SingularEmbeddingError("embedding factor has a zero diagonal entry")
    b = np.asarray(rhs, dtype=float)
    if b.shape[0] != Z.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} does not match embedding size {Z.shape[0]}")
    y = scipy.linalg.solve_triangular(Z, b, trans="T", lower=False, check_finite=False)
    return scipy.linalg.solve_triangular(Z, y, lower=False, check_finite=False)
