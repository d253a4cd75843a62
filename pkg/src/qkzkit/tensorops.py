"""Dense operator algebra on tensor products of site spaces.

Site indices are 0-based throughout.  Operators are stored as dense
matrices of shape (prod dims_out, prod dims_in); `embedded_matmul`
applies a two-site factor to a big matrix without forming the embedded
operator, which keeps long factor products cheap.
"""

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class TensorOperator:
    """Dense linear operator with per-site dimension metadata."""

    site_dims_out: tuple
    site_dims_in: tuple
    data: np.ndarray

    def __post_init__(self):
        do, di = prod(self.site_dims_out), prod(self.site_dims_in)
        if self.data.shape != (do, di):
            raise ConfigError(f"data shape {self.data.shape} does not match site dims")

    @classmethod
    def identity(cls, site_dims) -> "TensorOperator":
        dims = tuple(site_dims)
        return cls(dims, dims, np.eye(prod(dims), dtype=complex))

    def compose(self, other: "TensorOperator") -> "TensorOperator":
        if self.site_dims_in != other.site_dims_out:
            raise ConfigError("inner site dims do not match")
        return TensorOperator(self.site_dims_out, other.site_dims_in, self.data @ other.data)

    def __matmul__(self, other):
        return self.compose(other)

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


def _as_matrix(op) -> np.ndarray:
    return op.data if isinstance(op, TensorOperator) else np.asarray(op)


def embed_pair(op, i: int, j: int, site_dims) -> TensorOperator:
    """Two-site operator acting on sites (i, j), identity elsewhere.

    The first tensor factor of `op` is attached to site i, the second to
    site j; i > j and non-adjacent pairs are allowed.
    """
    dims = tuple(site_dims)
    N = len(dims)
    if i == j or not (0 <= i < N and 0 <= j < N):
        raise ConfigError(f"invalid site pair ({i}, {j}) for N = {N}")
    op = _as_matrix(op)
    if op.shape != (dims[i] * dims[j],) * 2:
        raise ConfigError(f"operator shape {op.shape} does not fit sites ({i}, {j})")
    rest = [k for k in range(N) if k not in (i, j)]
    full = np.kron(op, np.eye(prod(dims[k] for k in rest) if rest else 1))
    order = [i, j] + rest
    inv = [order.index(k) for k in range(N)]
    tdims = [dims[k] for k in order]
    data = full.reshape(tdims + tdims).transpose(inv + [N + a for a in inv]).reshape(prod(dims), prod(dims))
    return TensorOperator(dims, dims, np.ascontiguousarray(data))


def permutation_op(sigma, site_dims) -> TensorOperator:
    """P_sigma moving the object at position i to position sigma[i].

    On product vectors, slot k of the image holds the object that was at
    slot sigma^{-1}(k).
    """
    dims = tuple(site_dims)
    N = len(dims)
    sigma = list(sigma)
    if sorted(sigma) != list(range(N)):
        raise ConfigError("sigma is not a permutation of 0..N-1")
    inv = _inverse(sigma)
    dims_out = tuple(dims[inv[k]] for k in range(N))
    D = prod(dims)
    cols = np.arange(D).reshape(dims)
    src = np.transpose(cols, inv).reshape(-1)
    data = np.zeros((D, D), dtype=complex)
    data[np.arange(D), src] = 1.0
    return TensorOperator(dims_out, dims, data)


def _inverse(sigma):
    inv = [0] * len(sigma)
    for i, v in enumerate(sigma):
        inv[v] = i
    return inv


def cyclic_left_shift(N: int):
    """sigma with sigma[0] = N-1 and sigma[i] = i-1: the left shift of objects."""
    return [N - 1] + list(range(N - 1))


def compose_permutations(s1, s2):
    """Permutation of 'apply s2 then s1' (matches P_{s1} P_{s2} = P_{s1 s2})."""
    return [s1[s2[i]] for i in range(len(s1))]


def partial_transpose(op, which: str, dims) -> np.ndarray:
    """Transpose over one tensor factor of a two-site matrix."""
    dA, dB = dims
    op = _as_matrix(op)
    if op.shape != (dA * dB, dA * dB):
        raise ConfigError("partial transpose needs a square two-site matrix")
    T = op.reshape(dA, dB, dA, dB)
    if which == "first":
        T = T.transpose(2, 1, 0, 3)
    elif which == "second":
        T = T.transpose(0, 3, 2, 1)
    else:
        raise ConfigError("which must be 'first' or 'second'")
    return np.ascontiguousarray(T.reshape(dA * dB, dA * dB))


def scalar_ratio(A, B) -> tuple:
    """(lambda, residual) minimizing ||A - lambda B||_F; residual relative to ||A||."""
    A, B = _as_matrix(A), _as_matrix(B)
    nb = np.linalg.norm(B)
    if nb == 0:
        raise ConfigError("B must be nonzero")
    lam = complex(np.vdot(B, A) / np.vdot(B, B))
    na = np.linalg.norm(A)
    resid = float(np.linalg.norm(A - lam * B) / (na if na > 0 else 1.0))
    return lam, resid


# --- fast in-place style application (internal plumbing) ----------------------

def embedded_matmul(op, i, j, site_dims, M):
    """Left-multiply matrix M by the embedding of two-site `op` at (i, j).

    Equivalent to embed_pair(op, i, j, dims).data @ M at cost O(D^2 d_i d_j).
    """
    dims = tuple(site_dims)
    N = len(dims)
    op = _as_matrix(op)
    D = prod(dims)
    cols = M.shape[1]
    T = M.reshape(dims + (cols,))
    G = op.reshape(dims[i], dims[j], dims[i], dims[j])
    out = np.tensordot(G, T, axes=([2, 3], [i, j]))  # axes: (i', j', rest..., cols)
    order = []
    nxt = 2
    for k in range(N):
        if k == i:
            order.append(0)
        elif k == j:
            order.append(1)
        else:
            order.append(nxt)
            nxt += 1
    order.append(N)
    return np.ascontiguousarray(out.transpose(order)).reshape(D, cols)


def permuted_matmul(sigma, site_dims, M):
    """Left-multiply matrix M by P_sigma at reshape cost."""
    dims = tuple(site_dims)
    N = len(dims)
    cols = M.shape[1]
    inv = _inverse(list(sigma))
    T = M.reshape(dims + (cols,))
    out = T.transpose([inv[k] for k in range(N)] + [N])
    return np.ascontiguousarray(out).reshape(prod(dims), cols)
