"""q-numbers, q-Pochhammer products and closed-form normalization scalars.

All infinite products are truncated at ctx.trunc_terms with a geometric
tail estimate; evaluation aborts rather than silently returning an
under-resolved value.  Arguments named ``z`` are the combination
zeta12^s of the two spectral parameters.
"""

from collections import namedtuple

from .context import QContext
from .errors import DivergentBaseError, PoleError, ScalarDomainError, TruncationError

PochhammerResult = namedtuple("PochhammerResult", ["value", "tail_bound"])
SeriesResult = namedtuple("SeriesResult", ["value", "tail_bound"])

_POLE_TOL = 1e-9


def q_number(nu: complex, ctx: QContext) -> complex:
    """[nu]_q = (q^nu - q^-nu) / (q - q^-1)."""
    q = complex(ctx.q)
    den = q - 1.0 / q
    if abs(den) < 1e-300:
        raise ScalarDomainError("degenerate q: |q - 1/q| underflows")
    return (q**nu - q ** (-nu)) / den


def _poch_scan(a: complex, p: complex, ctx: QContext):
    """Partial product of (1 - a p^k) with tail bound and smallest factor."""
    if abs(p) >= 1.0:
        raise DivergentBaseError(f"|p| must be < 1, got {abs(p):.6g}")
    value = 1.0 + 0.0j
    pk = 1.0 + 0.0j
    min_factor = float("inf")
    for _ in range(ctx.trunc_terms):
        f = 1.0 - a * pk
        min_factor = min(min_factor, abs(f))
        value *= f
        pk *= p
    # |log prod_{k>=T}| <= sum |a||p|^k / (1 - |a p^k|); geometric bound
    head = abs(a) * abs(pk)
    if head >= 0.5:
        raise TruncationError("trunc_terms too small for this Pochhammer argument")
    tail = 2.0 * head / (1.0 - abs(p))
    return value, tail, min_factor


def q_pochhammer(a: complex, p: complex, ctx: QContext) -> PochhammerResult:
    """(a; p)_infinity = prod_{k>=0} (1 - a p^k), truncated, with tail bound."""
    value, tail, _ = _poch_scan(a, p, ctx)
    return PochhammerResult(value, tail)


def _poch(a, p, ctx, guard_zero=False, what="Pochhammer factor"):
    value, tail, min_factor = _poch_scan(a, p, ctx)
    if tail > ctx.eps_residual:
        raise TruncationError(f"tail bound {tail:.3g} exceeds eps_residual for {what}")
    if guard_zero and min_factor < _POLE_TOL:
        raise PoleError(f"{what} has a vanishing factor (closest |1-a p^k| = {min_factor:.3g})")
    return value


def f_series(m: int, zeta_arg: complex, ctx: QContext) -> SeriesResult:
    """F_m(zeta) = sum_{n>=1} zeta^n / (n [m]_{q^n}), truncated, with tail bound."""
    if m < 1:
        raise ScalarDomainError("m must be a positive integer")
    if abs(zeta_arg) >= 1.0:
        raise DivergentBaseError(f"|zeta| must be < 1, got {abs(zeta_arg):.6g}")
    q = complex(ctx.q)
    total = 0.0 + 0.0j
    zn = 1.0 + 0.0j
    last = 0.0
    for n in range(1, ctx.trunc_terms + 1):
        zn *= zeta_arg
        qn = q**n
        term = zn / (n * (qn**m - qn ** (-m)) / (qn - 1.0 / qn))
        total += term
        last = abs(term)
    r = abs(zeta_arg)
    tail = last * r / (1.0 - r)
    return SeriesResult(total, tail)


# --- sl2 spin-m scalars ------------------------------------------------------

def rho0_sl2(m: int, z: complex, ctx: QContext) -> complex:
    """Unit-highest-weight normalization scalar for a pair of spin-m modules.

    q^{-m^2/2} (q^2 z; q^4)^2 / ((q^{2m+2} z; q^4) (q^{-2m+2} z; q^4)).
    """
    q = complex(ctx.q)
    p = q**4
    num = _poch(q**2 * z, p, ctx) ** 2
    den1 = _poch(q ** (2 * m + 2) * z, p, ctx, guard_zero=True, what="rho0 denominator")
    den2 = _poch(q ** (-2 * m + 2) * z, p, ctx, guard_zero=True, what="rho0 denominator")
    return q ** (-m * m / 2.0) * num / (den1 * den2)


def rho0_ratio_sl2(m: int, z: complex, ctx: QContext) -> complex:
    """rho0(q^-2 z)^-1 rho0(z)^-1 as a finite product:

    q^{m^2} prod_{i=0}^{m-1} (1 - q^{-2m+2i} z) / (1 - q^{2m-2i-2} z).
    """
    q = complex(ctx.q)
    out = q ** (m * m)
    for i in range(m):
        den = 1.0 - q ** (2 * m - 2 * i - 2) * z
        if abs(den) < _POLE_TOL:
            raise PoleError("rho0 ratio denominator vanishes")
        out *= (1.0 - q ** (-2 * m + 2 * i) * z) / den
    return out


def kappa_sl2(m: int, z: complex, ctx: QContext) -> complex:
    """Unitarizing factor kappa for the spin-m pair (principal branch of z^{m/2}):

    z^{m/2} (q^{2m+2} z; q^4)/(q^{2m+2} z^-1; q^4) * (q^2 z^-1; q^4)/(q^2 z; q^4).
    """
    if z == 0:
        raise ScalarDomainError("kappa requires z != 0")
    q = complex(ctx.q)
    p = q**4
    num = _poch(q ** (2 * m + 2) * z, p, ctx) * _poch(q**2 / z, p, ctx)
    den = _poch(q ** (2 * m + 2) / z, p, ctx, guard_zero=True, what="kappa denominator") * \
        _poch(q**2 * z, p, ctx, guard_zero=True, what="kappa denominator")
    return z ** (m / 2.0) * num / den


def kappa_sl2_even_rational(k: int, z: complex, ctx: QContext) -> complex:
    """Rational form of kappa for even spin m = 2k:

    z^k prod_{i=1}^{k} (1 - q^{4i-2} z^-1) / (1 - q^{4i-2} z).

    Agrees with kappa_sl2(2k, z); note the factor orientation, which is
    fixed by that agreement and by the difference equation below.
    """
    if z == 0:
        raise ScalarDomainError("kappa requires z != 0")
    q = complex(ctx.q)
    out = z**k
    for i in range(1, k + 1):
        den = 1.0 - q ** (4 * i - 2) * z
        if abs(den) < _POLE_TOL:
            raise PoleError("rational kappa denominator vanishes")
        out *= (1.0 - q ** (4 * i - 2) / z) / den
    return out


def difference_patterns_sl2(m: int, z: complex, ctx: QContext) -> dict:
    """Evaluate both sign patterns of the spin-m normalization difference equation.

    'all_inverted':  [rho0(q^-2 z) rho0(z) kappa(q^-2 z) kappa(z)]^-1
    'mixed':         rho0(q^-2 z)^-1 rho0(z) kappa(q^-2 z)^-1 kappa(z)

    The first is constant in z and equals (-1)^m; the second is not
    constant for odd m.  Both are returned so the sign convention can be
    probed rather than assumed.
    """
    q = complex(ctx.q)
    zs = q ** (-2) * z
    r0, r1 = rho0_sl2(m, zs, ctx), rho0_sl2(m, z, ctx)
    k0, k1 = kappa_sl2(m, zs, ctx), kappa_sl2(m, z, ctx)
    return {
        "all_inverted": 1.0 / (r0 * r1 * k0 * k1),
        "mixed": (r1 / r0) * (k1 / k0),
    }


def kappa_difference_check_sl2(m: int, z: complex, ctx: QContext) -> float:
    """|all-inverted difference pattern - (-1)^m| at the given z."""
    val = difference_patterns_sl2(m, z, ctx)["all_inverted"]
    return abs(val - (-1.0) ** m)


# --- sl(l+1) first-fundamental scalars ---------------------------------------

def rho0_sllpo(l: int, z: complex, ctx: QContext) -> complex:
    """Normalization scalar for a pair of first-fundamental sl(l+1) modules:

    q^{-l/(l+1)} (q^2 z; Q)/(z; Q) * (q^{2l} z; Q)/(Q z; Q),  Q = q^{2(l+1)}.

    Equal to q^{-l/(l+1)} exp(F_{l+1}(q^-l z) - F_{l+1}(q^l z)).
    """
    if l < 1:
        raise ScalarDomainError("l must be >= 1")
    q = complex(ctx.q)
    Q = q ** (2 * (l + 1))
    num = _poch(q**2 * z, Q, ctx) * _poch(q ** (2 * l) * z, Q, ctx)
    den = _poch(z, Q, ctx, guard_zero=True, what="rho0 denominator") * \
        _poch(Q * z, Q, ctx, guard_zero=True, what="rho0 denominator")
    return q ** (-l / (l + 1)) * num / den


def rho0_ratio_sllpo(l: int, z: complex, ctx: QContext) -> complex:
    """Finite-product ratio for the fundamental pair:

    (1 - q^-2 z)(1 - q^-2l z) / ((1 - z)(1 - q^-2(l+1) z)).

    Numerically this equals rho0(q^-eps zeta1 | zeta2) * rho0(zeta1 | zeta2)^-1
    for the Pochhammer rho0 above (shift z -> z / q^{2(l+1)}).
    """
    q = complex(ctx.q)
    den = (1.0 - z) * (1.0 - q ** (-2 * (l + 1)) * z)
    if abs(den) < _POLE_TOL:
        raise PoleError("rho0 ratio denominator vanishes")
    return (1.0 - q ** (-2) * z) * (1.0 - q ** (-2 * l) * z) / den


def kappa_sllpo(l: int, z: complex, ctx: QContext) -> complex:
    """Unitarizing factor for the fundamental pair (principal branch):

    z^{l/(l+1)} (q^2 z^-1; Q)/(q^2 z; Q) * (Q z; Q)/(Q z^-1; Q),  Q = q^{2(l+1)}.
    """
    if z == 0:
        raise ScalarDomainError("kappa requires z != 0")
    q = complex(ctx.q)
    Q = q ** (2 * (l + 1))
    num = _poch(q**2 / z, Q, ctx) * _poch(Q * z, Q, ctx)
    den = _poch(q**2 * z, Q, ctx, guard_zero=True, what="kappa denominator") * \
        _poch(Q / z, Q, ctx, guard_zero=True, what="kappa denominator")
    return z ** (l / (l + 1)) * num / den


def difference_patterns_sllpo(l: int, z: complex, ctx: QContext) -> dict:
    """Both sign patterns of the fundamental-pair difference equation.

    'mixed':         rho0(Q^-1 z)^-1 rho0(z) kappa(Q^-1 z)^-1 kappa(z)
    'all_inverted':  [rho0(Q^-1 z) rho0(z) kappa(Q^-1 z) kappa(z)]^-1

    Here the mixed pattern is the constant one, equal to 1.
    """
    q = complex(ctx.q)
    zs = z * q ** (-2 * (l + 1))
    r0, r1 = rho0_sllpo(l, zs, ctx), rho0_sllpo(l, z, ctx)
    k0, k1 = kappa_sllpo(l, zs, ctx), kappa_sllpo(l, z, ctx)
    return {
        "mixed": (r1 / r0) * (k1 / k0),
        "all_inverted": 1.0 / (r0 * r1 * k0 * k1),
    }


def kappa_difference_check_sllpo(l: int, z: complex, ctx: QContext) -> float:
    """|mixed difference pattern - 1| at the given z."""
    return abs(difference_patterns_sllpo(l, z, ctx)["mixed"] - 1.0)
