"""Evaluation representations of U_q(L(sl2)) and the distinguished operators.

The spin-m module has dimension m+1; basis vectors are ordered by
decreasing h1-weight, so index 0 is the highest weight vector of the
plain module and index m that of the antipode dual.
"""

from dataclasses import dataclass

import numpy as np

from .context import LieData, QContext
from .errors import ConfigError
from .scalars import q_number

GENERATOR_TAGS = ("e0", "e1", "f0", "f1", "qh0", "qh1")


@dataclass(frozen=True)
class GradingChoice:
    """Integer grades (s0, s1) of the raising generators; s = s0 + s1 >= 1."""

    s0: int
    s1: int

    def __post_init__(self):
        if self.s0 < 0 or self.s1 < 0 or self.s0 + self.s1 < 1:
            raise ConfigError("grades must be nonnegative with s0 + s1 >= 1")

    @property
    def s(self) -> int:
        return self.s0 + self.s1


class EvalRep:
    """Generator matrices of a spin-m evaluation module or an iterated dual.

    The spectral parameter enters only through zeta^{±s_i}; the
    zeta-independent matrices and the h1-weight vector are stored.
    """

    def __init__(self, m, grading, ctx, weights, mats, dual_level=0):
        self.m = m
        self.grading = grading
        self.ctx = ctx
        self.dual_level = dual_level
        self._w = np.asarray(weights, dtype=complex)
        self._mats = {k: np.asarray(v, dtype=complex) for k, v in mats.items()}

    @property
    def dim(self) -> int:
        return self.m + 1

    @property
    def kind(self) -> str:
        return "V" if self.dual_level % 2 == 0 else "V*"

    @property
    def hw_index(self) -> int:
        """Index of the weight-maximal basis vector."""
        return int(np.argmax(self._w.real))

    def qh1(self, nu=1.0) -> np.ndarray:
        return np.diag(complex(self.ctx.q) ** (nu * self._w))

    def qh0(self, nu=1.0) -> np.ndarray:
        return np.diag(complex(self.ctx.q) ** (-nu * self._w))

    def gen(self, tag: str, zeta: complex, nu=1.0) -> np.ndarray:
        """Generator matrix at spectral parameter zeta (Cartans take nu)."""
        if tag == "qh1":
            return self.qh1(nu)
        if tag == "qh0":
            return self.qh0(nu)
        g = self.grading
        exps = {"e0": g.s0, "e1": g.s1, "f0": -g.s0, "f1": -g.s1}
        try:
            return complex(zeta) ** exps[tag] * self._mats[tag]
        except KeyError:
            raise ConfigError(f"unknown generator tag {tag!r}") from None


def build_eval_rep(m: int, grading: GradingChoice, ctx: QContext) -> EvalRep:
    """Spin-m evaluation representation.

    e1 = zeta^{s1} sum_i [i][m-i+1] E_{i,i+1},  f1 = zeta^{-s1} sum_i E_{i+1,i},
    e0 = zeta^{s0} sum_i E_{i+1,i},             f0 = zeta^{-s0} sum_i [i][m-i+1] E_{i,i+1},
    q^{nu h1} = diag(q^{nu(m-2i+2)}).
    """
    if m < 0:
        raise ConfigError("m must be nonnegative")
    d = m + 1
    raising = np.zeros((d, d), dtype=complex)
    lowering = np.zeros((d, d), dtype=complex)
    for i in range(1, m + 1):  # 1-based summation index of the matrix family
        coeff = q_number(i, ctx) * q_number(m - i + 1, ctx)
        raising[i - 1, i] = coeff
        lowering[i, i - 1] = 1.0
    weights = np.array([m - 2 * i for i in range(d)], dtype=complex)
    mats = {"e1": raising, "f1": lowering, "e0": lowering, "f0": raising}
    return EvalRep(m, grading, ctx, weights, mats)


def antipode_dual(rep: EvalRep) -> EvalRep:
    """Dual representation a -> rep(S(a))^t with S(e_i) = -q^{-h_i} e_i,
    S(f_i) = -f_i q^{h_i}, S(q^x) = q^{-x}."""
    qh = {0: rep.qh0, 1: rep.qh1}
    mats = {}
    for i in (0, 1):
        mats[f"e{i}"] = -(qh[i](-1.0) @ rep._mats[f"e{i}"]).T
        mats[f"f{i}"] = -(rep._mats[f"f{i}"] @ qh[i](1.0)).T
    return EvalRep(rep.m, rep.grading, rep.ctx, -rep._w, mats, rep.dual_level + 1)


@dataclass(frozen=True)
class SiteModule:
    """One chain site: module kind, representation and spectral parameter."""

    kind: str
    rep: EvalRep
    zeta: complex

    def __post_init__(self):
        if self.kind not in ("V", "V*"):
            raise ConfigError("site kind must be 'V' or 'V*'")
        if self.rep.kind != self.kind:
            raise ConfigError("site kind does not match the representation")

    @property
    def hw_index(self) -> int:
        return self.rep.hw_index


def make_site(kind, m, grading, ctx, zeta) -> SiteModule:
    rep = build_eval_rep(m, grading, ctx)
    if kind == "V*":
        rep = antipode_dual(rep)
    return SiteModule(kind, rep, zeta)


def coproduct_image(tag: str, site1: SiteModule, site2: SiteModule, nu=1.0) -> np.ndarray:
    """(phi1 x phi2)(Delta(a)) on the pair of sites.

    Delta(e_i) = e_i x 1 + q^{h_i} x e_i,  Delta(f_i) = f_i x q^{-h_i} + 1 x f_i,
    Delta(q^{nu h_i}) = q^{nu h_i} x q^{nu h_i}.
    """
    r1, r2 = site1.rep, site2.rep
    z1, z2 = site1.zeta, site2.zeta
    if tag.startswith("qh"):
        return np.kron(r1.gen(tag, z1, nu), r2.gen(tag, z2, nu))
    i = int(tag[1])
    qh_tag = f"qh{i}"
    if tag.startswith("e"):
        return np.kron(r1.gen(tag, z1), np.eye(r2.dim)) + \
            np.kron(r1.gen(qh_tag, z1, 1.0), r2.gen(tag, z2))
    return np.kron(r1.gen(tag, z1), r2.gen(qh_tag, z2, -1.0)) + \
        np.kron(np.eye(r1.dim), r2.gen(tag, z2))


def antipode_image(rep: EvalRep, tag: str, zeta: complex, nu=1.0) -> np.ndarray:
    """rep(S(a)) for a generator a."""
    if tag.startswith("qh"):
        return rep.gen(tag, zeta, -nu)
    i = int(tag[1])
    if tag.startswith("e"):
        return -rep.gen(f"qh{i}", zeta, -1.0) @ rep.gen(tag, zeta)
    return -rep.gen(tag, zeta) @ rep.gen(f"qh{i}", zeta, 1.0)


def hopf_antipode_residual(rep: EvalRep, zeta: complex) -> float:
    """Residual of m (S x id) Delta(a) = eps(a) 1 over all generator tags.

    Validates that the coproduct convention matches the antipode used
    for dual modules; eps(e_i) = eps(f_i) = 0 and eps(q^{nu h}) = 1.
    """
    d = rep.dim
    worst = 0.0
    for tag in GENERATOR_TAGS:
        if tag.startswith("qh"):
            # Delta = g x g: m(S x id) = S(g) g = 1
            acc = antipode_image(rep, tag, zeta) @ rep.gen(tag, zeta)
            target = np.eye(d)
        else:
            i = int(tag[1])
            if tag.startswith("e"):
                acc = antipode_image(rep, tag, zeta) + \
                    antipode_image(rep, f"qh{i}", zeta) @ rep.gen(tag, zeta)
            else:
                acc = antipode_image(rep, tag, zeta) @ rep.gen(f"qh{i}", zeta, -1.0) + \
                    rep.gen(tag, zeta)
            target = np.zeros((d, d))
        worst = max(worst, float(np.abs(acc - target).max()))
    return worst


# --- distinguished operators --------------------------------------------------

def sl2_constants(grading: GradingChoice) -> dict:
    """epsilon, delta and omega = epsilon + delta for the sl2 family."""
    s = grading.s
    eps = LieData.sl2().epsilon_times_s / s
    delta = -2.0 / s
    return {"epsilon": eps, "delta": delta, "omega": eps + delta}


def operator_x(m: int, grading: GradingChoice, ctx: QContext, kind="V") -> np.ndarray:
    """phi(q^x) with x = (2 s1/s - 1) h1 (the sl2 double-dual twist).

    For the dual module the image is phi*(q^x) = (X^-1)^t.
    """
    coeff = 2.0 * grading.s1 / grading.s - 1.0
    rep = build_eval_rep(m, grading, ctx)
    X = rep.qh1(coeff)
    if kind == "V*":
        return np.linalg.inv(X).T
    return X


def operator_o(m: int, grading: GradingChoice, ctx: QContext) -> np.ndarray:
    """Antidiagonal self-duality intertwiner:

    O = sum_{i=1}^{m+1} (-1)^{m-i+1} q^{(m-i+1)(2 - 2 s0/s - i)} E_{m-i+2, i}.
    """
    q = complex(ctx.q)
    d = m + 1
    O = np.zeros((d, d), dtype=complex)
    for i in range(1, d + 1):
        O[m - i + 1, i - 1] = (-1.0) ** (m - i + 1) * q ** ((m - i + 1) * (2.0 - 2.0 * grading.s0 / grading.s - i))
    return O


def operator_o_inverse(m: int, grading: GradingChoice, ctx: QContext) -> np.ndarray:
    """Closed-form inverse of the antidiagonal O (no linear solve)."""
    O = operator_o(m, grading, ctx)
    d = m + 1
    inv = np.zeros((d, d), dtype=complex)
    for i in range(d):
        inv[i, d - 1 - i] = 1.0 / O[d - 1 - i, i]
    return inv


def operator_xtilde(m: int, grading: GradingChoice, ctx: QContext) -> np.ndarray:
    """Xtilde = O^t X."""
    return operator_o(m, grading, ctx).T @ operator_x(m, grading, ctx)


def operator_a(alpha: complex, rep: EvalRep) -> np.ndarray:
    """Twist operator phi(q^{alpha h1}) (dual modules get the dual image)."""
    return rep.qh1(alpha)


@dataclass(frozen=True)
class DistinguishedOps:
    X: np.ndarray
    O: np.ndarray
    Xtilde: np.ndarray
    A_alpha: np.ndarray
    alpha: complex
    epsilon: float
    delta: float
    omega: float


def distinguished_ops(m, grading, ctx, alpha=0.0) -> DistinguishedOps:
    consts = sl2_constants(grading)
    rep = build_eval_rep(m, grading, ctx)
    return DistinguishedOps(
        X=operator_x(m, grading, ctx),
        O=operator_o(m, grading, ctx),
        Xtilde=operator_xtilde(m, grading, ctx),
        A_alpha=operator_a(alpha, rep),
        alpha=alpha,
        **consts,
    )
