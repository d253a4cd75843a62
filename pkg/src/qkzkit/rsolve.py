"""R-operators from the intertwining equation, with normalization and caching.

Rcheck maps V1_{z1} x V2_{z2} -> V2_{z2} x V1_{z1} and intertwines the
coproduct actions; it is found as the one-dimensional nullspace of the
stacked commutant system over all six generators.  R = P * Rcheck.

Normalization modes:
  "hw":    R fixes the product of highest weight vectors.
  "kappa": the hw-normalized operator times kappa^{-1} for like pairs
           (V,V), (V*,V*) and times kappa for mixed pairs.
"""

import threading
from dataclasses import dataclass

import numpy as np

from .context import QContext
from .errors import ConfigError, DegeneratePointError
from .reps import GENERATOR_TAGS, SiteModule, coproduct_image, make_site
from .scalars import kappa_sl2

GAP_THRESHOLD = 1e6
_HW_TOL = 1e-8
_SINGULAR_TOL = 1e-8


@dataclass(frozen=True)
class RRequest:
    site1: SiteModule
    site2: SiteModule
    normalization: str
    ctx: QContext

    def __post_init__(self):
        if self.normalization not in ("hw", "kappa"):
            raise ConfigError("normalization must be 'hw' or 'kappa'")
        if self.site1.rep.m != self.site2.rep.m:
            raise ConfigError("both sites must carry the same spin family")
        if self.site1.rep.grading != self.site2.rep.grading:
            raise ConfigError("both sites must share the grading")

    def key(self):
        g = self.site1.rep.grading
        return (self.site1.kind, self.site2.kind, self.site1.rep.m, g.s0, g.s1,
                complex(self.site1.zeta), complex(self.site2.zeta),
                self.normalization, complex(self.ctx.q), self.ctx.trunc_terms)


@dataclass(frozen=True)
class RResult:
    R: np.ndarray
    Rcheck: np.ndarray
    nullspace_gap: float
    norm_scalar_applied: complex
    intertwine_residual: float


class RCache:
    """Memoizes solves; concurrent reads, exclusive writes."""

    def __init__(self, enabled=True):
        self.enabled = enabled
        self._store = {}
        self._lock = threading.Lock()

    def get(self, req: RRequest):
        if not self.enabled:
            return None
        return self._store.get(req.key())

    def put(self, req: RRequest, res: RResult):
        if self.enabled:
            with self._lock:
                self._store[req.key()] = res

    def clear(self):
        with self._lock:
            self._store.clear()


def _swap(d1: int, d2: int) -> np.ndarray:
    P = np.zeros((d1 * d2, d1 * d2))
    for a in range(d1):
        for b in range(d2):
            P[b * d1 + a, a * d2 + b] = 1.0
    return P


def _raw_nullvector(req: RRequest):
    """Nullvector of the stacked commutant system, with the spectral gap.

    Computed from the normal equations (6x cheaper than a full SVD at
    these sizes); the smallest singular value is re-estimated as ||K v||
    because squaring pushes it below the eigensolver's noise floor.
    """
    s1, s2 = req.site1, req.site2
    D = s1.rep.dim * s2.rep.dim
    if D == 1:
        return np.ones((1, 1), dtype=complex), np.inf, []
    eye = np.eye(D)
    blocks = []
    pairs = []
    for tag in GENERATOR_TAGS:
        M = coproduct_image(tag, s1, s2)
        N = coproduct_image(tag, s2, s1)
        # row-major vec: X M - N X = 0  <=>  [(I x M^T) - (N x I)] vec(X) = 0
        blocks.append(np.kron(eye, M.T) - np.kron(N, eye))
        pairs.append((M, N))
    K = np.vstack(blocks)
    w, V = np.linalg.eigh(K.conj().T @ K)
    v = V[:, 0]
    sigma_min = float(np.linalg.norm(K @ v))
    sigma_2 = float(np.sqrt(max(w[1].real, 0.0)))
    gap = sigma_2 / max(sigma_min, 1e-300)
    return v.reshape(D, D), gap, pairs


def _intertwine_residual(Rc, pairs) -> float:
    worst = 0.0
    nr = np.linalg.norm(Rc)
    for M, N in pairs:
        nm = np.linalg.norm(M)
        if nm == 0:
            continue
        worst = max(worst, float(np.linalg.norm(Rc @ M - N @ Rc) / (nr * nm)))
    return worst


def normalize_hw(Rc_raw: np.ndarray, req: RRequest) -> tuple:
    """Scale so R fixes hw x hw; returns (Rcheck, scalar divided out).

    Raises DegeneratePointError when the hw component vanishes or when
    R(v0 x v0) is not proportional to v0 x v0.
    """
    d1, d2 = req.site1.rep.dim, req.site2.rep.dim
    R_raw = _swap(d1, d2) @ Rc_raw
    idx = req.site1.hw_index * d2 + req.site2.hw_index
    col = R_raw[:, idx]
    c = col[idx]
    nrm = np.linalg.norm(R_raw)
    if abs(c) < _HW_TOL * nrm:
        raise DegeneratePointError(
            "highest-weight component vanishes (non-simple spectral point)")
    off_vec = col.copy()
    off_vec[idx] = 0.0
    if np.linalg.norm(off_vec) > 1e-10 * np.linalg.norm(col):
        raise DegeneratePointError("R does not fix the highest weight line")
    return Rc_raw / c, c


def _kappa_scalar(req: RRequest) -> complex:
    g = req.site1.rep.grading
    z = (req.site1.zeta / req.site2.zeta) ** g.s
    k = kappa_sl2(req.site1.rep.m, z, req.ctx)
    if req.site1.kind == req.site2.kind:
        return 1.0 / k
    return k


def apply_kappa(res: RResult, req: RRequest) -> RResult:
    """Rescale an hw-normalized result by the unitarizing factor.

    Like pairs are divided by kappa, mixed pairs multiplied by it (the
    dual-pair normalization factors are the inverses of the like-pair one).
    """
    k = _kappa_scalar(req)
    return RResult(R=res.R * k, Rcheck=res.Rcheck * k,
                   nullspace_gap=res.nullspace_gap,
                   norm_scalar_applied=res.norm_scalar_applied * k,
                   intertwine_residual=res.intertwine_residual)


def solve_intertwiner(req: RRequest, cache: RCache = None, check_invertible=True) -> RResult:
    """Solve, normalize and validate the R-operator for a site pair.

    Degenerate spectral points are reported through DegeneratePointError:
    either the nullspace gap collapses, the hw normalization fails, or
    the normalized operator is numerically singular.
    """
    if cache is not None:
        hit = cache.get(req)
        if hit is not None:
            return hit
    Rc_raw, gap, pairs = _raw_nullvector(req)
    if gap < GAP_THRESHOLD:
        raise DegeneratePointError(f"nullspace gap {gap:.3g} below threshold {GAP_THRESHOLD:.1g}")
    Rc, scale = normalize_hw(Rc_raw, req)
    applied = 1.0 / scale
    if req.normalization == "kappa":
        k = _kappa_scalar(req)
        Rc = Rc * k
        applied = applied * k
    if check_invertible and Rc.shape[0] > 1:
        sv = np.linalg.svd(Rc, compute_uv=False)
        if sv[-1] < _SINGULAR_TOL * sv[0]:  # rank drop on the resonance lattice
            raise DegeneratePointError(
                f"normalized R is numerically singular (cond ratio {sv[-1]/sv[0]:.3g})")
    d1, d2 = req.site1.rep.dim, req.site2.rep.dim
    res = RResult(
        R=_swap(d1, d2) @ Rc,
        Rcheck=Rc,
        nullspace_gap=gap,
        norm_scalar_applied=complex(applied),
        intertwine_residual=_intertwine_residual(Rc, pairs),
    )
    if cache is not None:
        cache.put(req, res)
    return res


def make_request(kind1, zeta1, kind2, zeta2, m, grading, ctx, normalization="hw") -> RRequest:
    return RRequest(make_site(kind1, m, grading, ctx, zeta1),
                    make_site(kind2, m, grading, ctx, zeta2), normalization, ctx)


def r_matrix(kind1, zeta1, kind2, zeta2, m, grading, ctx,
             normalization="hw", cache=None, check_invertible=True) -> RResult:
    req = make_request(kind1, zeta1, kind2, zeta2, m, grading, ctx, normalization)
    return solve_intertwiner(req, cache=cache, check_invertible=check_invertible)


_continued_store = {}
_continued_lock = threading.Lock()


def _ratio_key(ratio: complex) -> tuple:
    # collapse ulp-level differences so theorem runs share the cached value
    scale = abs(ratio)
    if scale == 0:
        return (0.0, 0.0)
    return (round(ratio.real / scale, 12), round(ratio.imag / scale, 12),
            round(np.log10(scale), 12))


def rcheck_continued(kind1, zeta1, kind2, zeta2, m, grading, ctx,
                     cache=None, radius=0.03, nodes=32) -> np.ndarray:
    """Rcheck of the kappa-normalized family at a removable singular point.

    Trapezoidal Cauchy mean over a circle in zeta1; valid when the pole of
    the raw family is cancelled by the kappa zero (the like-kind shift
    lattice), in which case the family is analytic inside the circle.
    The Laurent moments and a second radius validate removability.
    """
    ratio = zeta1 / zeta2  # R depends on the arguments only through this
    store_key = (kind1, kind2, m, grading.s0, grading.s1, complex(ctx.q),
                 ctx.trunc_terms, _ratio_key(ratio), radius, nodes)
    with _continued_lock:
        hit = _continued_store.get(store_key)
    if hit is not None:
        return hit

    def circle_moments(r):
        mean = first = second = None
        vscale = 0.0
        for k in range(nodes):
            w = r * np.exp(2j * np.pi * k / nodes)
            res = r_matrix(kind1, ratio * (1.0 + w), kind2, 1.0, m, grading, ctx,
                           normalization="kappa", cache=cache, check_invertible=False)
            v = res.Rcheck
            vscale = max(vscale, float(np.abs(v).max()))
            if mean is None:
                mean, first, second = v.copy(), v * w, v * w * w
            else:
                mean += v
                first += v * w
                second += v * w * w
        return mean / nodes, first / nodes, second / nodes, vscale

    # a circle centered on a pole averages the principal part away, so the
    # Laurent moments c_{-1}, c_{-2} are checked explicitly
    v1, c1, c2, vscale = circle_moments(radius)
    if max(float(np.abs(c1).max()), float(np.abs(c2).max())) > 1e-7 * radius * vscale:
        raise DegeneratePointError(
            "nonzero principal part: singular point is not removable in kappa normalization")
    v2, _, _, _ = circle_moments(radius / 2.0)
    scale = max(float(np.abs(v1).max()), 1e-300)
    if float(np.abs(v1 - v2).max()) > 1e-9 * scale:
        raise DegeneratePointError(
            "circle means disagree: singular point is not removable in kappa normalization")
    with _continued_lock:
        _continued_store[store_key] = v2
    return v2
