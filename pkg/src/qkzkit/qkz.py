"""qKZ operators: per-site twist maps, the one-step operators, consistency checks.

A chain is N sites, each a spin-m module V or its dual V*, with spectral
parameters eta_i and a multiplicative shift p.  The one-step operator for
site i is a product of two-site Rcheck factors, the cyclic left shift and
the site twist embedded at slot 0; it is also materialized in the
rewritten form with R factors only, and both must agree.
"""

import time
from dataclasses import dataclass
from math import prod

import numpy as np

from .context import QContext
from .errors import ConfigError, DegeneratePointError
from .report import VerificationReport
from .reps import (GradingChoice, antipode_dual, build_eval_rep, operator_a,
                   operator_x, operator_xtilde)
from .rsolve import r_matrix, rcheck_continued
from .tensorops import TensorOperator, cyclic_left_shift, embedded_matmul, permuted_matmul

_ARG_TOL = 1e-12


@dataclass(frozen=True)
class DeltaAssignment:
    """Recipe for a per-site twist map.

    sources:
      self_dual_pair: d^{n-1} phi(zeta) (Xtilde^-1)^t Xtilde A_alpha, d = (-1)^m
      general_v:      phi(zeta) X_V A_alpha
      general_vstar:  phi*(zeta) X_{V*} A_alpha^{V*}
      custom:         user-supplied matrix function of zeta
    phi_hook defaults to the constant 1.
    """

    source: str
    alpha: complex = 0.0
    n: int = 1
    phi_hook: object = None
    custom: object = None

    def __post_init__(self):
        if self.source not in ("self_dual_pair", "general_v", "general_vstar", "custom"):
            raise ConfigError(f"unknown delta source {self.source!r}")


def build_delta(assign: DeltaAssignment, m: int, grading: GradingChoice, ctx: QContext):
    """Matrix-valued function of zeta implementing the assignment."""
    if assign.source == "custom":
        return assign.custom
    hook = assign.phi_hook or (lambda zeta: 1.0)
    rep = build_eval_rep(m, grading, ctx)
    if assign.source == "self_dual_pair":
        xt = operator_xtilde(m, grading, ctx)
        core = np.linalg.inv(xt).T @ xt
        d_const = (-1.0) ** m
        amat = operator_a(assign.alpha, rep)
        pref = d_const ** (assign.n - 1)

        def delta(zeta):
            return pref * hook(zeta) * core @ amat
    elif assign.source == "general_v":
        core = operator_x(m, grading, ctx, kind="V")
        amat = operator_a(assign.alpha, rep)

        def delta(zeta):
            return hook(zeta) * core @ amat
    else:
        dual = antipode_dual(rep)
        core = operator_x(m, grading, ctx, kind="V*")
        amat = operator_a(assign.alpha, dual)

        def delta(zeta):
            return hook(zeta) * core @ amat

    def wrapped(zeta):
        mat = np.asarray(delta(zeta), dtype=complex)
        if abs(np.linalg.det(mat)) < 1e-12:
            raise ConfigError("site twist map is singular")
        return mat

    return wrapped


@dataclass(frozen=True)
class ChainSpec:
    """An N-site qKZ configuration."""

    m: int
    grading: GradingChoice
    ctx: QContext
    kinds: tuple
    etas: tuple
    p: complex
    deltas: tuple
    normalization: str = "kappa"

    def __post_init__(self):
        N = len(self.kinds)
        if N < 2 or N % 2 != 0:
            raise ConfigError("chain length must be even and >= 2")
        if len(self.etas) != N or len(self.deltas) != N:
            raise ConfigError("kinds, etas and deltas must have equal length")
        if self.p == 0:
            raise ConfigError("shift p must be nonzero")
        for k in self.kinds:
            if k not in ("V", "V*"):
                raise ConfigError("site kinds must be 'V' or 'V*'")

    @property
    def N(self) -> int:
        return len(self.kinds)

    @property
    def dims(self) -> tuple:
        return (self.m + 1,) * self.N

    def delta_matrix(self, i: int) -> np.ndarray:
        fn = build_delta(self.deltas[i], self.m, self.grading, self.ctx)
        return fn(self.etas[i])

    def with_eta(self, i: int, value: complex) -> "ChainSpec":
        etas = list(self.etas)
        etas[i] = value
        return ChainSpec(self.m, self.grading, self.ctx, self.kinds, tuple(etas),
                         self.p, self.deltas, self.normalization)


def _rcheck_factor(chain, kind1, z1, kind2, z2, cache):
    """Rcheck for a factor, continuing through removable like-kind poles."""
    try:
        return r_matrix(kind1, z1, kind2, z2, chain.m, chain.grading, chain.ctx,
                        normalization=chain.normalization, cache=cache).Rcheck
    except DegeneratePointError:
        if chain.normalization != "kappa" or kind1 != kind2:
            raise
        return rcheck_continued(kind1, z1, kind2, z2, chain.m, chain.grading,
                                chain.ctx, cache=cache)


def _r_factor(chain, kind1, z1, kind2, z2, cache):
    """Plain R for a factor, via the same continuation fallback (R = P Rcheck)."""
    d = chain.m + 1
    rc = _rcheck_factor(chain, kind1, z1, kind2, z2, cache)
    return rc.reshape(d, d, d, d).transpose(1, 0, 2, 3).reshape(d * d, d * d)


def lambda_factor_specs(chain: ChainSpec, i: int):
    """Ordered factor list for the one-step operator at site i (leftmost first).

    Entries: ("rcheck", slot, (kindA, zA, kindB, zB)) for Rcheck_{A|B}(zA|zB)
    on slots (slot, slot+1), ("perm_lambda",), ("delta", i).
    """
    N = chain.N
    if not 0 <= i < N:
        raise ConfigError("site index out of range")
    kmov = chain.kinds[i]
    specs = []
    for k in range(i, N - 1):
        specs.append(("rcheck", k, (chain.kinds[k + 1], chain.etas[k + 1],
                                    kmov, chain.p * chain.etas[i])))
    specs.append(("perm_lambda", None, None))
    specs.append(("delta", i, None))
    for k in range(0, i):
        specs.append(("rcheck", k, (chain.kinds[k], chain.etas[k], kmov, chain.etas[i])))
    return specs


def materialize_factors(chain: ChainSpec, specs, cache=None) -> np.ndarray:
    """Dense matrix of a factor list (written order: leftmost factor applied last)."""
    dims = chain.dims
    D = prod(dims)
    M = np.eye(D, dtype=complex)
    lam = cyclic_left_shift(chain.N)
    for tag, slot, info in reversed(specs):
        if tag == "perm_lambda":
            M = permuted_matmul(lam, dims, M)
        elif tag == "delta":
            # twist of site `slot`, always embedded at chain position 0
            dm = chain.delta_matrix(slot)
            T = M.reshape((dims[0], -1))
            M = np.ascontiguousarray(dm @ T).reshape(D, D)
        elif tag == "rcheck":
            k1, z1, k2, z2 = info
            M = embedded_matmul(_rcheck_factor(chain, k1, z1, k2, z2, cache),
                                slot, slot + 1, dims, M)
        else:
            raise ConfigError(f"unknown factor tag {tag!r}")
    return M


def lambda_rewritten(chain: ChainSpec, i: int, cache=None, dense=False) -> np.ndarray:
    """The same operator assembled from plain R factors and no permutation.

    With dense=True every factor is embedded as a full matrix and composed
    by matrix products, an evaluation route with independent rounding.
    """
    dims = chain.dims
    D = prod(dims)
    M = np.eye(D, dtype=complex)
    factors = []
    for k in range(i + 1, chain.N):
        factors.append(("R", (k, i), (chain.kinds[k], chain.etas[k],
                                      chain.kinds[i], chain.p * chain.etas[i])))
    factors.append(("delta", (i,), None))
    for k in range(0, i):
        factors.append(("R", (k, i), (chain.kinds[k], chain.etas[k],
                                      chain.kinds[i], chain.etas[i])))
    if dense:
        from .tensorops import embed_pair
        for tag, where, info in factors:
            if tag == "delta":
                sl = where[0]
                dm = chain.delta_matrix(sl)
                before = prod(dims[:sl]) if sl else 1
                after = prod(dims[sl + 1:]) if sl + 1 < chain.N else 1
                M = M @ np.kron(np.eye(before), np.kron(dm, np.eye(after)))
            else:
                k1, z1, k2, z2 = info
                M = M @ embed_pair(_r_factor(chain, k1, z1, k2, z2, cache),
                                   where[0], where[1], dims).data
        return M
    for tag, where, info in reversed(factors):
        if tag == "delta":
            sl = where[0]
            dm = chain.delta_matrix(sl)
            T = np.moveaxis(M.reshape(dims + (D,)), sl, 0)
            T = np.tensordot(dm, T, axes=(1, 0))
            M = np.ascontiguousarray(np.moveaxis(T, 0, sl)).reshape(D, D)
        else:
            k1, z1, k2, z2 = info
            M = embedded_matmul(_r_factor(chain, k1, z1, k2, z2, cache),
                                where[0], where[1], dims, M)
    return M


def lambda_op(chain: ChainSpec, i: int, cache=None, verify_forms=True,
              forms_tol=1e-10) -> TensorOperator:
    """Materialized one-step qKZ operator for site i.

    With verify_forms the rewritten R-only form is also assembled and the
    two are required to agree to forms_tol.
    """
    M = materialize_factors(chain, lambda_factor_specs(chain, i), cache)
    if verify_forms:
        M2 = lambda_rewritten(chain, i, cache)
        err = float(np.linalg.norm(M - M2) / max(np.linalg.norm(M), 1e-300))
        if err > forms_tol:
            raise DegeneratePointError(f"one-step operator forms disagree: {err:.3g}")
    return TensorOperator(chain.dims, chain.dims, M)


def lambda_forms_residual(chain: ChainSpec, i: int, cache=None) -> float:
    M = materialize_factors(chain, lambda_factor_specs(chain, i), cache)
    M2 = lambda_rewritten(chain, i, cache, dense=True)
    return float(np.linalg.norm(M - M2) / max(np.linalg.norm(M), 1e-300))


def _cancels(spec_a, spec_b) -> bool:
    """Adjacent unitarity pair Rcheck_{A|B}(x|y) Rcheck_{B|A}(y|x) = id."""
    ta, sa, ia = spec_a
    tb, sb, ib = spec_b
    if ta != "rcheck" or tb != "rcheck" or sa != sb:
        return False
    k1a, z1a, k2a, z2a = ia
    k1b, z1b, k2b, z2b = ib
    same = (k1a == k2b and k2a == k1b
            and abs(z1a - z2b) <= _ARG_TOL * max(1.0, abs(z1a))
            and abs(z2a - z1b) <= _ARG_TOL * max(1.0, abs(z2a)))
    return same


def lambda_product_regularized(chain_a: ChainSpec, i_a: int,
                               chain_b: ChainSpec, i_b: int, cache=None) -> np.ndarray:
    """Product Lambda_a(chain_a) Lambda_b(chain_b) with the adjacent
    mutually-inverse Rcheck pair at the junction cancelled exactly.

    At the mirrored argument tuples of the reduction construction the two
    junction factors are mixed-kind operators at coincident arguments;
    individually they are singular (one direction is a pole of the
    normalized family), while their product is the identity by the
    unitarity relation.  Cancelling the pair evaluates the product of the
    meromorphic factor strings at the removable point.
    """
    specs_a = lambda_factor_specs(chain_a, i_a)
    specs_b = lambda_factor_specs(chain_b, i_b)
    if specs_a and specs_b and _cancels(specs_a[-1], specs_b[0]):
        specs_a = specs_a[:-1]
        specs_b = specs_b[1:]
    return materialize_factors(chain_a, specs_a, cache) @ \
        materialize_factors(chain_b, specs_b, cache)


def check_ddr(chain: ChainSpec, j: int, k: int, tol=1e-11, cache=None) -> VerificationReport:
    """Commutation of the twist pair with the two-site R operator."""
    t0 = time.perf_counter()
    dj = chain.delta_matrix(j)
    dk = chain.delta_matrix(k)
    res = r_matrix(chain.kinds[j], chain.etas[j], chain.kinds[k], chain.etas[k],
                   chain.m, chain.grading, chain.ctx,
                   normalization=chain.normalization, cache=cache)
    DD = np.kron(dj, dk)
    comm = DD @ res.R - res.R @ DD
    resid = float(np.linalg.norm(comm) / np.linalg.norm(res.R @ DD))
    return VerificationReport.make(
        "ddr", {"j": j, "k": k, "m": chain.m, "kinds": [chain.kinds[j], chain.kinds[k]],
                "source": [chain.deltas[j].source, chain.deltas[k].source]},
        resid, tol, t0)


def check_qkz_compatibility(chain: ChainSpec, i: int, j: int, tol=1e-9,
                            cache=None) -> VerificationReport:
    """Residual of Lambda_i(eta_j -> p eta_j) Lambda_j - Lambda_j(eta_i -> p eta_i) Lambda_i."""
    t0 = time.perf_counter()
    Li = lambda_op(chain, i, cache, verify_forms=False).data
    Lj = lambda_op(chain, j, cache, verify_forms=False).data
    Li_shift = lambda_op(chain.with_eta(j, chain.p * chain.etas[j]), i, cache,
                         verify_forms=False).data
    Lj_shift = lambda_op(chain.with_eta(i, chain.p * chain.etas[i]), j, cache,
                         verify_forms=False).data
    left = Li_shift @ Lj
    right = Lj_shift @ Li
    resid = float(np.linalg.norm(left - right) / max(np.linalg.norm(left), 1e-300))
    return VerificationReport.make(
        "qkz_compatibility", {"i": i, "j": j, "N": chain.N, "m": chain.m}, resid, tol, t0)


def transport_phi(chain: ChainSpec, tensor: np.ndarray, word, cache=None):
    """Apply the exchange recurrence along a word of adjacent transpositions.

    Returns (tensor, order) where order[k] is the original site now at
    position k; the result is independent of the chosen word for a fixed
    final permutation.
    """
    dims = chain.dims
    D = prod(dims)
    vec = np.asarray(tensor, dtype=complex).reshape(D, 1)
    order = list(range(chain.N))
    for k in word:
        if not 0 <= k < chain.N - 1:
            raise ConfigError("word entry out of range")
        a, b = order[k], order[k + 1]
        Rc = _rcheck_factor(chain, chain.kinds[a], chain.etas[a],
                            chain.kinds[b], chain.etas[b], cache)
        vec = embedded_matmul(Rc, k, k + 1, dims, vec)
        order[k], order[k + 1] = order[k + 1], order[k]
    return vec.reshape(dims), order


def permutation_of_word(N: int, word) -> list:
    """Final object-to-position permutation realized by a word."""
    order = list(range(N))
    for k in word:
        order[k], order[k + 1] = order[k + 1], order[k]
    sigma = [0] * N
    for pos, obj in enumerate(order):
        sigma[obj] = pos
    return sigma
