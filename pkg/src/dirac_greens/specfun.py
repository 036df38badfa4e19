"""Confluent hypergeometric kernel: Kummer M, Tricomi U, their derivatives,
log-gamma and spherical Bessel functions.

All evaluators work for real arguments only.  The Kummer/Tricomi pair is what
the per-interval analytic solutions of the radial problem are assembled from,
so these routines carry an error estimate with every value and can return
results in scaled form ``mantissa * exp(scale)`` to survive the enormous
dynamic range reached on large radial grids.  The scale exponent is itself a
double-double pair: it can reach ~1e8, where a single double would quantize
the exponent to ~1e-8 absolute and poison every downstream product.

Evaluation strategy
-------------------
* ``M(a,b,z)``: Taylor series with double-double accumulation (terms are kept
  as hi/lo float pairs, the running sum is rescaled by powers of two before it
  can overflow); for large ``z`` the standard exponential asymptotic expansion
  is used when its smallest term certifies the requested accuracy.
* ``U(a,b,z)``: polynomial form for non-positive integer ``a``; the large-z
  asymptotic expansion whenever it certifies; otherwise the two-M connection
  formula evaluated in double-double.  If neither route certifies (a narrow
  seam of moderate ``z`` with ``b`` close to an integer), the value is taken
  from an arbitrary-precision fallback so the error estimate stays honest.
* Derivatives use the shift identities M'(a,b,z) = (a/b) M(a+1,b+1,z) and
  U'(a,b,z) = -a U(a+1,b+1,z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import mpmath

from .errors import DomainError, OverflowRangeError

__all__ = [
    "SpecialFnResult",
    "log_gamma",
    "kummer_m",
    "tricomi_u",
    "kummer_m_deriv",
    "tricomi_u_deriv",
    "sph_bessel_j",
]

# max log-magnitude representable as a finite double
_LOG_DBL_MAX = 709.0

# rescale by an exact power of two so mantissa scaling is lossless
_RESCALE_AT = 2.0**900
_RESCALE_FACTOR = 2.0**-900
_LN2_DD = (0.6931471805599453, 2.3190468138462996e-17)
_LOG_RESCALE_DD = (900.0 * _LN2_DD[0], 900.0 * _LN2_DD[1])

# accuracy target: accept a route only if its own estimate certifies this
_CERTIFY = 1e-11
_MPMATH_DPS = 40


@dataclass(frozen=True)
class SpecialFnResult:
    """A function value together with a conservative relative-error estimate."""

    value: float
    est_rel_error: float

    def __post_init__(self):
        if self.est_rel_error < 0:
            raise ValueError("est_rel_error must be non-negative")


# ----------------------------------------------------------------------------
# double-double primitives (Dekker / Knuth)
# ----------------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_add(xh, xl, yh, yl):
    sh, sl = _two_sum(xh, yh)
    sl += xl + yl
    return _quick_two_sum(sh, sl)


def _dd_mul_d(xh, xl, d):
    ph, pl = _two_prod(xh, d)
    pl += xl * d
    return _quick_two_sum(ph, pl)


def _dd_div_d(xh, xl, d):
    q = xh / d
    ph, pl = _two_prod(q, d)
    r = ((xh - ph) - pl + xl) / d
    return _quick_two_sum(q, r)


class ScaledValue(NamedTuple):
    """Internal representation ``(hi + lo) * exp(ls_hi + ls_lo)``."""

    hi: float
    lo: float
    ls_hi: float
    ls_lo: float
    est_rel: float

    @property
    def sign(self) -> float:
        v = self.hi if self.hi != 0.0 else self.lo
        return math.copysign(1.0, v) if v != 0.0 else 0.0

    @property
    def log_abs(self) -> float:
        m = abs(self.hi + self.lo)
        if m == 0.0:
            return -math.inf
        return self.ls_hi + (self.ls_lo + math.log(m))

    def log_abs_dd(self) -> tuple[float, float]:
        m = abs(self.hi + self.lo)
        if m == 0.0:
            return -math.inf, 0.0
        h, l = _two_sum(self.ls_hi, math.log(m))
        return _quick_two_sum(h, l + self.ls_lo)

    def to_float(self) -> float:
        """Collapse to a plain double; raises if out of double range."""
        la = self.log_abs
        if la == -math.inf:
            return 0.0
        if la > _LOG_DBL_MAX:
            raise OverflowRangeError(
                f"value exceeds double range (log magnitude {la:.6g})", la
            )
        return (self.hi + self.lo) * math.exp(self.ls_hi + self.ls_lo)


# ----------------------------------------------------------------------------
# gamma helpers
# ----------------------------------------------------------------------------


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x}")
    return math.lgamma(x)


def _signed_loggamma(x: float) -> tuple[float, float]:
    """(sign, log|Gamma(x)|) for any real x that is not a non-positive integer."""
    if x > 0.0:
        return 1.0, math.lgamma(x)
    if _is_nonpositive_integer(x):
        raise DomainError(f"Gamma pole at x = {x}")
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    s = math.sin(math.pi * x)
    return math.copysign(1.0, s), math.log(math.pi / abs(s)) - math.lgamma(1.0 - x)


def _gamma_or_none(x: float) -> float | None:
    """Gamma(x) as a double, or None at a pole (where 1/Gamma = 0)."""
    if _is_nonpositive_integer(x):
        return None
    return math.gamma(x)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.5 and x == round(x)


# ----------------------------------------------------------------------------
# Kummer M
# ----------------------------------------------------------------------------


def _kummer_series(a: float, b: float, z: float) -> ScaledValue:
    """Taylor series with double-double accumulation, rescaled as it grows.

    Works for any real z (terminates for non-positive integer a); cost is
    O(|z|) terms.  The error estimate follows the largest partial term
    relative to the final sum.
    """
    th, tl = 1.0, 0.0
    sh, sl = 1.0, 0.0
    peak = 1.0
    sc_h, sc_l = 0.0, 0.0
    k = 0
    tiny_run = 0
    kmax = 200000
    while k < kmax:
        ak = a + k
        if ak == 0.0:
            break  # polynomial: series terminates exactly
        th, tl = _dd_mul_d(th, tl, ak)
        th, tl = _dd_div_d(th, tl, b + k)
        th, tl = _dd_mul_d(th, tl, z)
        th, tl = _dd_div_d(th, tl, k + 1.0)
        sh, sl = _dd_add(sh, sl, th, tl)
        at = abs(th)
        if at > peak:
            peak = at
        k += 1
        # convergence: term negligible twice in a row, and the term ratio is
        # certain to stay below 1 from here on (past the e^z hump)
        if at <= 1e-32 * abs(sh):
            tiny_run += 1
            if tiny_run >= 2 and abs(z) <= 0.7 * (k + 1) and k >= abs(a) - abs(b):
                break
        else:
            tiny_run = 0
        if abs(sh) > _RESCALE_AT or at > _RESCALE_AT:
            sh *= _RESCALE_FACTOR
            sl *= _RESCALE_FACTOR
            th *= _RESCALE_FACTOR
            tl *= _RESCALE_FACTOR
            peak *= _RESCALE_FACTOR
            sc_h, sc_l = _dd_add(sc_h, sc_l, *_LOG_RESCALE_DD)
    mag = abs(sh + sl)
    if mag == 0.0:
        return ScaledValue(0.0, 0.0, sc_h, sc_l, 1e-16)
    cancel = peak / mag
    est = max(cancel * (k + 2) * 1e-32, 1.1e-16)
    return ScaledValue(sh, sl, sc_h, sc_l, est)


def _kummer_asymptotic(a: float, b: float, z: float) -> ScaledValue | None:
    """Exponential branch of the large-z expansion; None unless it certifies.

    M(a,b,z) ~ Gamma(b)/Gamma(a) e^z z^(a-b) sum_k (b-a)_k (1-a)_k / (k! z^k)
    for z -> +inf.  Only used for z large enough that the subdominant branch
    (relative size ~ e^-z) is far below the target accuracy.
    """
    if z < 80.0 or _is_nonpositive_integer(a):
        return None
    sgn_ga, lg_a = _signed_loggamma(a)
    s = 1.0
    term = 1.0
    min_ratio = 1.0
    prev = abs(term)
    for k in range(0, 200):
        term *= (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z)
        at = abs(term)
        if at > prev:
            if min_ratio < _CERTIFY:
                break  # divergence resumed after a certified minimum
            return None
        s += term
        prev = at
        min_ratio = min(min_ratio, at / max(abs(s), 1e-300))
        if term == 0.0:
            min_ratio = 0.0
            break
        if min_ratio < 1e-17:
            break
    if min_ratio > _CERTIFY or s == 0.0:
        return None
    # scale = z + [lgamma(b) - log|Gamma(a)| + (a-b) log z], dd with z exact
    ph, pl = _two_prod(a - b, math.log(z))
    rest_h, rest_l = _dd_add(ph, pl, math.lgamma(b) - lg_a, 0.0)
    ls_h, ls_l = _dd_add(z, 0.0, rest_h, rest_l)
    return ScaledValue(s * sgn_ga, 0.0, ls_h, ls_l, max(min_ratio, 1.1e-16))


def _mp_scaled(val) -> ScaledValue:
    if val == 0:
        return ScaledValue(0.0, 0.0, 0.0, 0.0, 1.1e-16)
    la = mpmath.log(abs(val))
    ls_h = float(la)
    ls_l = float(la - ls_h)
    mant = val / mpmath.exp(la)
    return ScaledValue(float(mant), 0.0, ls_h, ls_l, 2.2e-16)


@lru_cache(maxsize=200000)
def _kummer_scaled(a: float, b: float, z: float) -> ScaledValue:
    if z == 0.0:
        return ScaledValue(1.0, 0.0, 0.0, 0.0, 0.0)
    if a == b:
        return ScaledValue(1.0, 0.0, z, 0.0, 1.1e-16)
    asym = _kummer_asymptotic(a, b, z)
    if asym is not None:
        return asym
    res = _kummer_series(a, b, z)
    if res.est_rel <= _CERTIFY or _is_nonpositive_integer(a):
        return res
    with mpmath.workdps(_MPMATH_DPS):
        return _mp_scaled(mpmath.hyp1f1(a, b, z))


def _check_kummer_args(a: float, b: float, z: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(z)):
        raise DomainError("kummer_m requires finite arguments")
    if _is_nonpositive_integer(b):
        raise DomainError(f"kummer_m undefined for non-positive integer b = {b}")


def kummer_m(a: float, b: float, z: float) -> SpecialFnResult:
    """Confluent hypergeometric function M(a,b,z), regular at z = 0."""
    _check_kummer_args(a, b, z)
    sc = _kummer_scaled(a, b, z)
    return SpecialFnResult(sc.to_float(), sc.est_rel)


def kummer_m_deriv(a: float, b: float, z: float) -> SpecialFnResult:
    """dM/dz via the shift identity M'(a,b,z) = (a/b) M(a+1,b+1,z)."""
    _check_kummer_args(a, b, z)
    if a == 0.0:
        return SpecialFnResult(0.0, 0.0)
    sc = _kummer_scaled(a + 1.0, b + 1.0, z)
    return SpecialFnResult((a / b) * sc.to_float(), sc.est_rel)


# ----------------------------------------------------------------------------
# Tricomi U
# ----------------------------------------------------------------------------


def _pochhammer_dd(x: float, n: int) -> tuple[float, float, float, float]:
    """(hi, lo, ls_hi, ls_lo) of the rising factorial (x)_n in double-double."""
    h, l = 1.0, 0.0
    sc_h, sc_l = 0.0, 0.0
    for j in range(n):
        h, l = _dd_mul_d(h, l, x + j)
        if abs(h) > _RESCALE_AT:
            h *= _RESCALE_FACTOR
            l *= _RESCALE_FACTOR
            sc_h, sc_l = _dd_add(sc_h, sc_l, *_LOG_RESCALE_DD)
    return h, l, sc_h, sc_l


def _tricomi_polynomial(n: int, b: float, z: float) -> ScaledValue:
    """U(-n, b, z) = (-1)^n (b)_n M(-n, b, z) for non-negative integer n."""
    m = _kummer_series(float(-n), b, z)
    ph, pl, psc_h, psc_l = _pochhammer_dd(b, n)
    if n % 2 == 1:
        ph, pl = -ph, -pl
    hi, lo = _dd_mul_d(m.hi, m.lo, ph)
    lo += m.hi * pl
    hi, lo = _quick_two_sum(hi, lo)
    ls_h, ls_l = _dd_add(m.ls_hi, m.ls_lo, psc_h, psc_l)
    return ScaledValue(hi, lo, ls_h, ls_l, m.est_rel + 1e-15)


def _tricomi_asymptotic(a: float, b: float, z: float) -> ScaledValue | None:
    """U(a,b,z) ~ z^-a sum_k (a)_k (a-b+1)_k / (k! (-z)^k); None unless certified."""
    if z < 8.0:
        return None
    s = 1.0
    term = 1.0
    prev = 1.0
    min_ratio = 1.0
    for k in range(0, 300):
        term *= (a + k) * (a - b + 1.0 + k) / (-(k + 1.0) * z)
        at = abs(term)
        if at > prev:
            break  # asymptotic minimum reached
        s += term
        prev = at
        min_ratio = min(min_ratio, at / max(abs(s), 1e-300))
        if term == 0.0:
            min_ratio = 0.0
            break
        if min_ratio < 1e-17:
            break
    if min_ratio > _CERTIFY or s == 0.0:
        return None
    ls_h, ls_l = _two_prod(-a, math.log(z))
    return ScaledValue(s, 0.0, ls_h, ls_l, max(min_ratio, 1.1e-16))


def _combine_scaled(terms: list[ScaledValue]) -> ScaledValue:
    """Sum of scaled values, aligned to the largest scale, in double-double."""
    live = [t for t in terms if t.hi != 0.0 or t.lo != 0.0]
    if not live:
        return ScaledValue(0.0, 0.0, 0.0, 0.0, 0.0)
    logs = [t.log_abs_dd() for t in live]
    ref_h, ref_l = max(logs)
    sh, sl = 0.0, 0.0
    abs_sum = 0.0
    err_abs = 0.0
    for t, (lh, ll) in zip(live, logs):
        # mantissa relative to the reference scale; exponent difference is
        # moderate by construction, so collapsing it to a double is safe
        dh, dl = _dd_add(t.ls_hi, t.ls_lo, -ref_h, -ref_l)
        f = math.exp(dh + dl)
        h, l = _dd_mul_d(t.hi, t.lo, f)
        sh, sl = _dd_add(sh, sl, h, l)
        mag = abs(h + l)
        abs_sum += mag
        err_abs += mag * t.est_rel
    mag = abs(sh + sl)
    if mag == 0.0:
        return ScaledValue(0.0, 0.0, ref_h, ref_l, err_abs if err_abs else 1e-16)
    est = err_abs / mag + 2.2e-16
    return ScaledValue(sh, sl, ref_h, ref_l, est)


def _tricomi_connection(a: float, b: float, z: float) -> ScaledValue | None:
    """Two-M connection formula, valid for non-integer b:

    U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z)
        + Gamma(b-1)/Gamma(a) z^(1-b) M(a-b+1, 2-b, z)

    Prefactors are double precision, so the estimate grows with the
    cancellation between the two terms; the caller falls back when it
    fails to certify.
    """
    if abs(b - round(b)) < 1e-6:
        return None
    g2 = _gamma_or_none(a - b + 1.0)
    g4 = _gamma_or_none(a)
    terms: list[ScaledValue] = []
    if g2 is not None:  # else 1/Gamma(a-b+1) = 0
        m1 = _kummer_scaled(a, b, z)
        c = math.gamma(1.0 - b) / g2
        terms.append(
            ScaledValue(m1.hi * c, m1.lo * c, m1.ls_hi, m1.ls_lo, m1.est_rel + 2e-15)
        )
    if g4 is not None:  # else 1/Gamma(a) = 0
        m2 = _kummer_scaled(a - b + 1.0, 2.0 - b, z)
        c = math.gamma(b - 1.0) / g4
        ph, pl = _two_prod(1.0 - b, math.log(z))
        ls_h, ls_l = _dd_add(m2.ls_hi, m2.ls_lo, ph, pl)
        terms.append(
            ScaledValue(m2.hi * c, m2.lo * c, ls_h, ls_l, m2.est_rel + 2e-15)
        )
    if not terms:
        return None
    return _combine_scaled(terms)


@lru_cache(maxsize=200000)
def _tricomi_scaled(a: float, b: float, z: float) -> ScaledValue:
    if a == 0.0:
        return ScaledValue(1.0, 0.0, 0.0, 0.0, 0.0)
    if b < 1.0:
        # Kummer transform keeps the second parameter >= 1
        inner = _tricomi_scaled(a - b + 1.0, 2.0 - b, z)
        ph, pl = _two_prod(1.0 - b, math.log(z))
        ls_h, ls_l = _dd_add(inner.ls_hi, inner.ls_lo, ph, pl)
        return ScaledValue(inner.hi, inner.lo, ls_h, ls_l, inner.est_rel + 1e-16)
    if _is_nonpositive_integer(a):
        return _tricomi_polynomial(int(round(-a)), b, z)
    asym = _tricomi_asymptotic(a, b, z)
    if asym is not None:
        return asym
    conn = _tricomi_connection(a, b, z)
    if conn is not None and conn.est_rel <= _CERTIFY:
        return conn
    with mpmath.workdps(_MPMATH_DPS):
        return _mp_scaled(mpmath.hyperu(a, b, z))


def _check_tricomi_args(a: float, b: float, z: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(z)):
        raise DomainError("tricomi_u requires finite arguments")
    if z <= 0.0:
        raise DomainError(f"tricomi_u requires z > 0, got {z}")


def tricomi_u(a: float, b: float, z: float) -> SpecialFnResult:
    """Confluent hypergeometric function U(a,b,z), algebraic decay at large z."""
    _check_tricomi_args(a, b, z)
    sc = _tricomi_scaled(a, b, z)
    return SpecialFnResult(sc.to_float(), sc.est_rel)


def tricomi_u_deriv(a: float, b: float, z: float) -> SpecialFnResult:
    """dU/dz via the shift identity U'(a,b,z) = -a U(a+1,b+1,z)."""
    _check_tricomi_args(a, b, z)
    if a == 0.0:
        return SpecialFnResult(0.0, 0.0)
    sc = _tricomi_scaled(a + 1.0, b + 1.0, z)
    return SpecialFnResult(-a * sc.to_float(), sc.est_rel)


# ----------------------------------------------------------------------------
# spherical Bessel j_L
# ----------------------------------------------------------------------------


def sph_bessel_j(L: int, x: float) -> float:
    """Spherical Bessel function j_L(x) for integer L >= 0 and x >= 0.

    Upward recurrence for x > L (stable direction), Miller-style downward
    recurrence normalized by j_0 otherwise.
    """
    if L < 0 or L != int(L):
        raise DomainError(f"order must be a non-negative integer, got {L}")
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"argument must be finite and >= 0, got {x}")
    L = int(L)
    if x == 0.0:
        return 1.0 if L == 0 else 0.0
    j0 = math.sin(x) / x
    if L == 0:
        return j0
    if x < 0.25:
        # closed form cancels near 0; alternating series converges fast here
        x2 = x * x
        j1 = (x / 3.0) * (
            1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0 * (1.0 - x2 / 88.0)))
        )
    else:
        j1 = math.sin(x) / (x * x) - math.cos(x) / x
    if L == 1:
        return j1
    if x > L:
        jm, jc = j0, j1
        for ell in range(1, L):
            jm, jc = jc, (2 * ell + 1) / x * jc - jm
        return jc
    # downward recurrence from well above L, normalized by j0
    start = L + 16 + int(2.0 * math.sqrt(max(L, 1)))
    jp = 0.0
    jc = 1e-300
    target = 0.0
    for ell in range(start, 0, -1):
        jm = (2 * ell + 1) / x * jc - jp
        jp, jc = jc, jm
        if ell - 1 == L:
            target = jc
        if abs(jc) > 1e280:
            jc *= 1e-280
            jp *= 1e-280
            target *= 1e-280
    return target * (j0 / jc)
