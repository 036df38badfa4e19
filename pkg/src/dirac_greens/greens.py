"""Radial Green's function construction for one (E, kappa) pair.

On every grid interval the straight-line charge z0 + z1 r turns the radial
problem into a pure Coulomb one (z1 only shifts the energy), whose regular
and irregular large-component solutions are known analytically in terms of
Kummer M and Tricomi U.  A forward sweep (regular at the origin) and a
backward sweep (regular at infinity) glue the per-interval solutions by
matching value and derivative at every shared node; the small components
follow algebraically from the coupled first-order system, and the overall
constant is fixed by the prescribed derivative jump across r = r'.

Magnitudes along a sweep span thousands of orders of magnitude, so every
tabulated quantity is held as (sign, log magnitude) with the log kept in
double-double; plain doubles only appear in final component values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants
from .errors import (
    AccuracyError,
    DomainError,
    EnergyRangeError,
    MatchingError,
    NearPoleError,
    SupercriticalChargeError,
)
from .grid import RadialGrid
from .potential import PiecewiseCharge, validate_for_energy
from .specfun import (
    ScaledValue,
    _combine_scaled,
    _dd_add,
    _kummer_scaled,
    _quick_two_sum,
    _tricomi_scaled,
    _two_prod,
)

__all__ = [
    "IntervalParams",
    "FundamentalPair",
    "GreensFunction",
    "interval_params",
    "coulomb_regular",
    "coulomb_irregular",
    "small_from_large",
    "forward_sweep",
    "backward_sweep",
    "build_greens",
    "build_greens_single_interval",
]

_NEG_INF = float("-inf")

# flag threshold for raw special-function results entering the assembly
_EST_FLAG = 1e-9
# assembled node values accumulate honest cancellation estimates (the kappa+s
# near-cancellation for kappa < 0 at small x costs a few digits); anything
# below this keeps the Wronskian-constancy check meaningful at 1e-6
_ASSEMBLY_EST_MAX = 3e-7


# ----------------------------------------------------------------------------
# scaled-value arithmetic (thin layer over specfun.ScaledValue)
# ----------------------------------------------------------------------------


def _sv_zero() -> ScaledValue:
    return ScaledValue(0.0, 0.0, 0.0, 0.0, 0.0)


def _sv_scale(v: ScaledValue, c: float) -> ScaledValue:
    """v * c for a plain double c."""
    if c == 0.0 or (v.hi == 0.0 and v.lo == 0.0):
        return _sv_zero()
    return ScaledValue(v.hi * c, v.lo * c, v.ls_hi, v.ls_lo, v.est_rel + 1.1e-16)


def _sv_shift(v: ScaledValue, ls_h: float, ls_l: float) -> ScaledValue:
    """v * exp(ls_h + ls_l)."""
    if v.hi == 0.0 and v.lo == 0.0:
        return v
    h, l = _dd_add(v.ls_hi, v.ls_lo, ls_h, ls_l)
    return ScaledValue(v.hi, v.lo, h, l, v.est_rel)


def _sv_mul(a: ScaledValue, b: ScaledValue) -> ScaledValue:
    if (a.hi == 0.0 and a.lo == 0.0) or (b.hi == 0.0 and b.lo == 0.0):
        return _sv_zero()
    # mantissas are O(1): a plain double product with one correction term
    ph, pl = _two_prod(a.hi, b.hi)
    pl += a.hi * b.lo + a.lo * b.hi
    ph, pl = _quick_two_sum(ph, pl)
    lh, ll = _dd_add(a.ls_hi, a.ls_lo, b.ls_hi, b.ls_lo)
    return ScaledValue(ph, pl, lh, ll, a.est_rel + b.est_rel + 1.1e-16)


def _sv_sum(terms: list[ScaledValue]) -> ScaledValue:
    return _combine_scaled(terms)


def _sv_signed_log(v: ScaledValue) -> tuple[float, float, float]:
    """(sign, log_hi, log_lo) of a scaled value."""
    if v.hi == 0.0 and v.lo == 0.0:
        return 0.0, _NEG_INF, 0.0
    lh, ll = v.log_abs_dd()
    return v.sign, lh, ll


def _sv_from_float(x: float) -> ScaledValue:
    return ScaledValue(x, 0.0, 0.0, 0.0, 0.0)


def _sv_float(v: ScaledValue) -> float:
    return v.to_float()


# ----------------------------------------------------------------------------
# per-interval Coulomb parameters and local solutions
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalParams:
    """Coulomb parameters (s, t, q) of one straight-line charge interval."""

    s: float
    t: float
    q: float


def interval_params(
    z0: float,
    z1: float,
    E: float,
    kappa: int,
    consts: PhysicalConstants | None = None,
    interval: int | None = None,
) -> IntervalParams:
    """Compute (s, t, q) for the charge line z0 + z1 r at energy E."""
    consts = consts or PhysicalConstants()
    where = "" if interval is None else f" on interval {interval}"
    if kappa == 0:
        raise DomainError("kappa must be a non-zero integer")
    alpha = consts.alpha
    if alpha * abs(z0) >= abs(kappa):
        raise SupercriticalChargeError(
            f"alpha*|z0| = {alpha * abs(z0):.6g} >= |kappa| = {abs(kappa)}{where}"
        )
    shifted = E + z1
    if not (-2.0 * consts.c**2 < shifted < 0.0):
        raise EnergyRangeError(
            f"E + z1 = {shifted:.6g} outside (-2c^2, 0){where}"
        )
    s = math.sqrt(kappa * kappa - (alpha * z0) ** 2)
    w = shifted * alpha * alpha + 1.0  # total energy in units of c^2
    q = math.sqrt(-shifted * (shifted * alpha * alpha + 2.0))
    # sqrt(1 - w^2) = alpha*q exactly, which avoids cancellation for small |E|
    t = z0 * w / q - s
    return IntervalParams(s=s, t=t, q=q)


def _prefactor_log(s: float, q: float, r: float) -> tuple[float, float]:
    """Double-double log of r^s e^{-qr}; the q*r product is kept exact."""
    ph, pl = _two_prod(-q, r)
    sh, sl = _two_prod(s, math.log(r))
    return _dd_add(ph, pl, sh, sl)


def _flag_raw(*values: ScaledValue) -> None:
    for v in values:
        if v.est_rel > _EST_FLAG:
            raise AccuracyError(
                f"special-function error estimate {v.est_rel:.3e} exceeds {_EST_FLAG}"
            )


def _regular_scaled(
    p: IntervalParams,
    z0: float,
    kappa: int,
    r: float,
    lam: float | None = None,
) -> tuple[ScaledValue, ScaledValue] | tuple[ScaledValue, ScaledValue, ScaledValue]:
    """Regular local solution in scaled form: (value, derivative[, small]).

    The small component is evaluated from its own closed form
    lam * r^s e^{-qr} [t M(-t+1,b,x) - (kappa - z0/q) M(-t,b,x)],
    lam = -alpha (E+z1)/q, rather than by differentiating the large one:
    the derivative route cancels by ~|kappa + s| for kappa < 0 at small x.
    """
    s, t, q = p.s, p.t, p.q
    x = 2.0 * q * r
    b = 2.0 * s + 1.0
    c2 = kappa - z0 / q
    m1 = _kummer_scaled(-t + 1.0, b, x)
    m2 = _kummer_scaled(-t, b, x)
    bracket = _sv_sum([_sv_scale(m1, t), _sv_scale(m2, c2)])
    # d/dx of the bracket via M'(a,b,x) = (a/b) M(a+1,b+1,x)
    d1 = _kummer_scaled(-t + 2.0, b + 1.0, x)
    d2 = _kummer_scaled(-t + 1.0, b + 1.0, x)
    _flag_raw(m1, m2, d1, d2)
    dbracket = _sv_sum(
        [_sv_scale(d1, t * (-t + 1.0) / b), _sv_scale(d2, c2 * (-t) / b)]
    )
    lh, ll = _prefactor_log(s, q, r)
    value = _sv_shift(bracket, lh, ll)
    deriv = _sv_sum(
        [_sv_scale(value, s / r - q), _sv_shift(_sv_scale(dbracket, 2.0 * q), lh, ll)]
    )
    if lam is None:
        return value, deriv
    sbracket = _sv_sum([_sv_scale(m1, t * lam), _sv_scale(m2, -c2 * lam)])
    return value, deriv, _sv_shift(sbracket, lh, ll)


def _irregular_scaled(
    p: IntervalParams,
    z0: float,
    kappa: int,
    r: float,
    lam: float | None = None,
) -> tuple[ScaledValue, ScaledValue] | tuple[ScaledValue, ScaledValue, ScaledValue]:
    """Irregular local solution in scaled form: (value, derivative[, small]).

    Small-component closed form:
    lam * r^s e^{-qr} [(kappa + z0/q) U(-t+1,b,x) - U(-t,b,x)].
    """
    s, t, q = p.s, p.t, p.q
    x = 2.0 * q * r
    b = 2.0 * s + 1.0
    c1 = kappa + z0 / q
    u1 = _tricomi_scaled(-t + 1.0, b, x)
    u2 = _tricomi_scaled(-t, b, x)
    bracket = _sv_sum([_sv_scale(u1, c1), u2])
    # d/dx of the bracket via U'(a,b,x) = -a U(a+1,b+1,x)
    d1 = _tricomi_scaled(-t + 2.0, b + 1.0, x)
    d2 = _tricomi_scaled(-t + 1.0, b + 1.0, x)
    _flag_raw(u1, u2, d1, d2)
    dbracket = _sv_sum([_sv_scale(d1, -c1 * (-t + 1.0)), _sv_scale(d2, t)])
    lh, ll = _prefactor_log(s, q, r)
    value = _sv_shift(bracket, lh, ll)
    deriv = _sv_sum(
        [_sv_scale(value, s / r - q), _sv_shift(_sv_scale(dbracket, 2.0 * q), lh, ll)]
    )
    if lam is None:
        return value, deriv
    sbracket = _sv_sum([_sv_scale(u1, c1 * lam), _sv_scale(u2, -lam)])
    return value, deriv, _sv_shift(sbracket, lh, ll)


def coulomb_regular(
    r: float,
    p: IntervalParams,
    z0: float,
    kappa: int,
    consts: PhysicalConstants | None = None,
) -> tuple[float, float]:
    """Regular-at-origin local solution and its r-derivative as doubles."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    v, d = _regular_scaled(p, z0, kappa, r)
    return _sv_float(v), _sv_float(d)


def coulomb_irregular(
    r: float,
    p: IntervalParams,
    z0: float,
    kappa: int,
    consts: PhysicalConstants | None = None,
) -> tuple[float, float]:
    """Decaying-at-infinity local solution and its r-derivative as doubles."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    v, d = _irregular_scaled(p, z0, kappa, r)
    return _sv_float(v), _sv_float(d)


def small_from_large(
    value: float,
    derivative: float,
    r: float,
    Zr: float,
    E: float,
    kappa: int,
    consts: PhysicalConstants | None = None,
) -> float:
    """Small component of a homogeneous large-component solution.

    Q = (P' + (kappa/r) P) / (2/alpha + alpha Z(r)/r + alpha E)
    """
    consts = consts or PhysicalConstants()
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    alpha = consts.alpha
    denom = 2.0 / alpha + alpha * Zr / r + alpha * E
    return (derivative + kappa / r * value) / denom


# ----------------------------------------------------------------------------
# sweeps
# ----------------------------------------------------------------------------


@dataclass
class FundamentalPair:
    """Node tabulation of the regular/irregular fundamental pair.

    Each of the eight component arrays is stored as (sign, log-hi, log-lo)
    triples over nodes 0..mtp-1; node 0 (the origin) holds zero placeholders
    since the regular solution vanishes there and the irregular one diverges.
    ``fcoef``/``gcoef`` are the per-interval combination coefficients in the
    node-normalized local basis, with ``fscale``/``gscale`` the accumulated
    log-magnitude of the solution at the interval's matching node.
    """

    sgn: dict[str, np.ndarray]
    lg_hi: dict[str, np.ndarray]
    lg_lo: dict[str, np.ndarray]
    fcoef: np.ndarray  # (n_intervals, 2)
    gcoef: np.ndarray  # (n_intervals, 2)
    fscale: np.ndarray
    gscale: np.ndarray
    worst_est: float

    def component(self, name: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.sgn[name], self.lg_hi[name], self.lg_lo[name]

    def node_value(self, name: str, k: int) -> float:
        """Component value at node k as a double (may raise on overflow)."""
        s = self.sgn[name][k]
        if s == 0.0:
            return 0.0
        return ScaledValue(s, 0.0, self.lg_hi[name][k], self.lg_lo[name][k], 0.0).to_float()


class _SweepState:
    """Coefficients on the current interval in its node-normalized basis."""

    __slots__ = ("x", "y", "lam_h", "lam_l", "mu_h", "mu_l", "om_h", "om_l")

    def __init__(self, x, y, lam, mu, om):
        self.x, self.y = x, y
        self.lam_h, self.lam_l = lam
        self.mu_h, self.mu_l = mu
        self.om_h, self.om_l = om


def _basis_cache_eval(cache, j, k, pw, params, lams, kappa, r):
    """Local basis (M, Mp, MS, W, Wp, WS) of interval j at node k, memoized."""
    key = (j, k)
    hit = cache.get(key)
    if hit is None:
        p = params[j]
        z0 = float(pw.z0[j])
        m, mp_, ms = _regular_scaled(p, z0, kappa, r, lam=lams[j])
        w, wp, ws = _irregular_scaled(p, z0, kappa, r, lam=lams[j])
        hit = (m, mp_, ms, w, wp, ws)
        cache[key] = hit
    return hit


def _match(
    V: ScaledValue,
    Vp: ScaledValue,
    basis: tuple[ScaledValue, ...],
    interval: int,
) -> tuple[float, float, tuple, tuple, tuple]:
    """Solve the 2x2 continuity system at a shared node.

    Returns (x, y, lam, mu, om): coefficients in the locally normalized basis
    and the log scales of the state and of the two basis columns.
    """
    M, Mp, _, W, Wp, _ = basis
    sV, lVh, lVl = _sv_signed_log(V)
    sVp, lVph, lVpl = _sv_signed_log(Vp)
    sM, lMh, lMl = _sv_signed_log(M)
    sMp, lMph, lMpl = _sv_signed_log(Mp)
    sW, lWh, lWl = _sv_signed_log(W)
    sWp, lWph, lWpl = _sv_signed_log(Wp)
    if sV == 0.0 and sVp == 0.0:
        raise MatchingError(f"solution vanished identically at interval {interval}")
    lam = max((lVh, lVl), (lVph, lVpl))
    mu = max((lMh, lMl), (lMph, lMpl))
    om = max((lWh, lWl), (lWph, lWpl))

    def rel(sign, lh, ll, ref):
        if sign == 0.0:
            return 0.0
        d = (lh - ref[0]) + (ll - ref[1])
        return sign * math.exp(d)

    v, vp = rel(sV, lVh, lVl, lam), rel(sVp, lVph, lVpl, lam)
    m, mp_ = rel(sM, lMh, lMl, mu), rel(sMp, lMph, lMpl, mu)
    w, wp = rel(sW, lWh, lWl, om), rel(sWp, lWph, lWpl, om)
    det = m * wp - mp_ * w
    if abs(det) < 1e-12 * max(abs(m * wp), abs(mp_ * w), 1e-300):
        raise MatchingError(
            f"locally dependent solutions at interval {interval} (det = {det:.3e})"
        )
    x = (v * wp - vp * w) / det
    y = (m * vp - mp_ * v) / det
    return x, y, lam, mu, om


def _propagate(
    state: _SweepState,
    basis: tuple[ScaledValue, ...],
) -> tuple[ScaledValue, ScaledValue, ScaledValue]:
    """Value, derivative and small component at a new radius."""
    M, Mp, MS, W, Wp, WS = basis
    # shift = lam - mu (resp. lam - om), applied with the coefficient
    dmu_h, dmu_l = _dd_add(state.lam_h, state.lam_l, -state.mu_h, -state.mu_l)
    dom_h, dom_l = _dd_add(state.lam_h, state.lam_l, -state.om_h, -state.om_l)
    tv, td, ts = [], [], []
    if state.x != 0.0:
        tv.append(_sv_shift(_sv_scale(M, state.x), dmu_h, dmu_l))
        td.append(_sv_shift(_sv_scale(Mp, state.x), dmu_h, dmu_l))
        ts.append(_sv_shift(_sv_scale(MS, state.x), dmu_h, dmu_l))
    if state.y != 0.0:
        tv.append(_sv_shift(_sv_scale(W, state.y), dom_h, dom_l))
        td.append(_sv_shift(_sv_scale(Wp, state.y), dom_h, dom_l))
        ts.append(_sv_shift(_sv_scale(WS, state.y), dom_h, dom_l))
    return _sv_sum(tv), _sv_sum(td), _sv_sum(ts)


def _interval_params_all(
    pw: PiecewiseCharge, E: float, kappa: int, consts: PhysicalConstants
) -> list[IntervalParams]:
    return [
        interval_params(float(pw.z0[j]), float(pw.z1[j]), E, kappa, consts, interval=j)
        for j in range(pw.n_intervals)
    ]


def _sweep(
    pw: PiecewiseCharge,
    E: float,
    kappa: int,
    consts: PhysicalConstants,
    params: list[IntervalParams],
    lams: list[float],
    cache: dict,
    backward: bool,
):
    """Shared sweep driver; returns node values, coefficients and scales."""
    grid = pw.grid
    mtp = grid.mtp
    rs = grid.r
    nint = pw.n_intervals
    zero_dd = (0.0, 0.0)
    vals: list[ScaledValue | None] = [None] * mtp
    ders: list[ScaledValue | None] = [None] * mtp
    smalls: list[ScaledValue | None] = [None] * mtp
    coef = np.zeros((nint, 2))
    scale = np.zeros(nint)

    if not backward:
        state = _SweepState(1.0, 0.0, zero_dd, zero_dd, zero_dd)
        coef[0] = (1.0, 0.0)
        order = range(0, nint)
    else:
        state = _SweepState(0.0, 1.0, zero_dd, zero_dd, zero_dd)
        coef[nint - 1] = (0.0, 1.0)
        order = range(nint - 1, -1, -1)
        # seed node: pure local irregular solution at the outermost node
        basis_seed = _basis_cache_eval(
            cache, nint - 1, mtp - 1, pw, params, lams, kappa, rs[mtp - 1]
        )
        vals[mtp - 1], ders[mtp - 1], smalls[mtp - 1] = _propagate(state, basis_seed)

    for j in order:
        # node reached by crossing interval j
        k_to = j + 1 if not backward else j
        if not backward or k_to >= 1:
            basis_to = _basis_cache_eval(
                cache, j, k_to, pw, params, lams, kappa, rs[k_to]
            )
            V, Vp, VS = _propagate(state, basis_to)
            vals[k_to], ders[k_to], smalls[k_to] = V, Vp, VS
        # hand over to the neighbouring interval
        j_next = j + 1 if not backward else j - 1
        if 0 <= j_next < nint:
            k_match = k_to if not backward else j
            if backward:
                V, Vp = vals[k_match], ders[k_match]
            basis_next = _basis_cache_eval(
                cache, j_next, k_match, pw, params, lams, kappa, rs[k_match]
            )
            x, y, lam, mu, om = _match(V, Vp, basis_next, j_next)
            state = _SweepState(x, y, lam, mu, om)
            coef[j_next] = (x, y)
            scale[j_next] = lam[0] + lam[1]
    return vals, ders, smalls, coef, scale


def _lambdas(pw: PiecewiseCharge, E: float, consts: PhysicalConstants, params):
    """Small-component prefactors -alpha (E + z1)/q per interval."""
    return [
        -consts.alpha * (E + float(pw.z1[j])) / params[j].q
        for j in range(pw.n_intervals)
    ]


def forward_sweep(
    pw: PiecewiseCharge,
    E: float,
    kappa: int,
    consts: PhysicalConstants | None = None,
):
    """Regular sweep; returns (values, derivatives, smalls, fcoef, fscale)."""
    consts = consts or PhysicalConstants()
    params = _interval_params_all(pw, E, kappa, consts)
    lams = _lambdas(pw, E, consts, params)
    return _sweep(pw, E, kappa, consts, params, lams, {}, backward=False)


def backward_sweep(
    pw: PiecewiseCharge,
    E: float,
    kappa: int,
    consts: PhysicalConstants | None = None,
):
    """Irregular sweep; returns (values, derivatives, smalls, gcoef, gscale)."""
    consts = consts or PhysicalConstants()
    params = _interval_params_all(pw, E, kappa, consts)
    lams = _lambdas(pw, E, consts, params)
    return _sweep(pw, E, kappa, consts, params, lams, {}, backward=True)


# ----------------------------------------------------------------------------
# assembly
# ----------------------------------------------------------------------------

_COMPONENTS = ("mL", "mLp", "mS", "mSp", "wL", "wLp", "wS", "wSp")


@dataclass
class GreensFunction:
    """One built radial Green's function: fundamental pair plus normalization."""

    energy: float
    kappa: int
    grid: RadialGrid
    pw: PiecewiseCharge
    consts: PhysicalConstants
    fp: FundamentalPair
    norm: ScaledValue
    wronskian_rel_spread: float

    @property
    def norm_c(self) -> float:
        """Normalization constant as a double (overall jump-fixing factor)."""
        return _sv_float(self.norm)

    @property
    def mtp(self) -> int:
        return self.grid.mtp

    # -- evaluation ----------------------------------------------------------

    def _interp_sl(self, name: str, r: float) -> tuple[float, float, float]:
        """Linear interpolation of a tabulated component, in scaled space."""
        rs = self.grid.r[: self.mtp]
        sgn, lh, ll = self.fp.component(name)
        k = int(np.searchsorted(rs, r, side="right")) - 1
        if k >= self.mtp - 1:
            k = self.mtp - 2
        w = (r - rs[k]) / (rs[k + 1] - rs[k])
        s0, s1 = sgn[k], sgn[k + 1]
        if s0 == 0.0 and s1 == 0.0:
            return 0.0, _NEG_INF, 0.0
        l0 = (lh[k], ll[k]) if s0 != 0.0 else (_NEG_INF, 0.0)
        l1 = (lh[k + 1], ll[k + 1]) if s1 != 0.0 else (_NEG_INF, 0.0)
        ref = max(l0, l1)
        a0 = s0 * math.exp((l0[0] - ref[0]) + (l0[1] - ref[1])) if s0 != 0.0 else 0.0
        a1 = s1 * math.exp((l1[0] - ref[0]) + (l1[1] - ref[1])) if s1 != 0.0 else 0.0
        m = (1.0 - w) * a0 + w * a1
        if m == 0.0:
            return 0.0, _NEG_INF, 0.0
        lh_o, ll_o = _dd_add(ref[0], ref[1], math.log(abs(m)), 0.0)
        return math.copysign(1.0, m), lh_o, ll_o

    def _pair_value(self, inner: str, outer: str, r_in: float, r_out: float) -> float:
        s1, lh1, ll1 = self._interp_sl(inner, r_in)
        if s1 == 0.0:
            return 0.0
        s2, lh2, ll2 = self._interp_sl(outer, r_out)
        if s2 == 0.0:
            return 0.0
        sn, lnh, lnl = _sv_signed_log(self.norm)
        h, l = _dd_add(lh1, ll1, lh2, ll2)
        h, l = _dd_add(h, l, lnh, lnl)
        if h > 700.0:
            raise AccuracyError("component value overflows double range")
        if h < -745.0:
            return 0.0
        return s1 * s2 * sn * math.exp(h + l)

    def eval_components(self, r: float, rp: float) -> tuple[float, float, float, float]:
        """(gLL, gLS, gSL, gSS) at (r, r'); discontinuous entries average on r = r'."""
        r_max = self.grid.r[self.mtp - 1]
        if not (0.0 <= r <= r_max and 0.0 <= rp <= r_max):
            raise DomainError(
                f"(r, r') = ({r}, {rp}) outside the tabulated range [0, {r_max:.6g}]"
            )
        if r == 0.0 or rp == 0.0:
            return 0.0, 0.0, 0.0, 0.0  # regular-origin limit
        if r < rp:
            return (
                self._pair_value("mL", "wL", r, rp),
                self._pair_value("mL", "wS", r, rp),
                self._pair_value("mS", "wL", r, rp),
                self._pair_value("mS", "wS", r, rp),
            )
        if r > rp:
            return (
                self._pair_value("mL", "wL", rp, r),
                self._pair_value("mS", "wL", rp, r),
                self._pair_value("mL", "wS", rp, r),
                self._pair_value("mS", "wS", rp, r),
            )
        gll = self._pair_value("mL", "wL", r, rp)
        gss = self._pair_value("mS", "wS", r, rp)
        cross = 0.5 * (
            self._pair_value("mL", "wS", r, rp) + self._pair_value("mS", "wL", r, rp)
        )
        return gll, cross, cross, gss

    # -- tabulation ----------------------------------------------------------

    def tabulate(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Dense mtp x mtp arrays (gLL, gLS, gSL, gSS) over all node pairs.

        Cached after the first call; the returned arrays are read-only.
        """
        cached = getattr(self, "_tabs", None)
        if cached is not None:
            return cached
        mtp = self.mtp
        sn, lnh, lnl = _sv_signed_log(self.norm)

        iu = np.triu_indices(mtp)
        il = (iu[1], iu[0])

        def upper(inner: str, outer_: str) -> np.ndarray:
            """norm * inner(r_i) * outer(r_j) on the used triangle i <= j."""
            s1, h1, l1 = self.fp.component(inner)
            s2, h2, l2 = self.fp.component(outer_)
            sign = s1[iu[0]] * s2[iu[1]] * sn
            live = sign != 0.0
            with np.errstate(invalid="ignore"):
                sh, sl = _np_two_sum(h1[iu[0]], h2[iu[1]])
                sl = sl + l1[iu[0]] + l2[iu[1]]
                th, tl = _np_two_sum(sh, lnh)
                total = th + (tl + sl + lnl)
                if np.any(live & (total > 709.0)):
                    raise AccuracyError("tabulated component overflows double range")
                vals = sign * np.exp(np.where(live, total, -np.inf))
            vals[~live] = 0.0
            return vals

        gLL = np.zeros((mtp, mtp))
        v = upper("mL", "wL")
        gLL[iu] = v
        gLL[il] = v

        gSS = np.zeros((mtp, mtp))
        v = upper("mS", "wS")
        gSS[iu] = v
        gSS[il] = v

        gLS = np.zeros((mtp, mtp))
        gSL = np.zeros((mtp, mtp))
        v_ls = upper("mL", "wS")  # r < r' branch of gLS
        v_sl = upper("mS", "wL")  # r < r' branch of gSL
        gLS[iu] = v_ls
        gLS[il] = v_sl  # r > r': gLS(r,r') = wL(r) mS(r'), the transposed pattern
        gSL[iu] = v_sl
        gSL[il] = v_ls
        diag_mask = iu[0] == iu[1]
        diag = 0.5 * (v_ls[diag_mask] + v_sl[diag_mask])
        np.fill_diagonal(gLS, diag)
        np.fill_diagonal(gSL, diag)
        for arr in (gLL, gLS, gSL, gSS):
            arr.setflags(write=False)
        object.__setattr__(self, "_tabs", (gLL, gLS, gSL, gSS))
        return gLL, gLS, gSL, gSS

    def diagonal_limits(self) -> tuple[np.ndarray, np.ndarray]:
        """One-sided diagonal limits (r -> r'^-, r -> r'^+) of gLS per node.

        The stored diagonal is their average; at large r the two limits nearly
        cancel there, so comparisons should use these well-conditioned values.
        """
        mtp = self.mtp
        sn, lnh, lnl = _sv_signed_log(self.norm)
        out = []
        for inner, outer_ in (("mL", "wS"), ("mS", "wL")):
            s1, h1, l1 = self.fp.component(inner)
            s2, h2, l2 = self.fp.component(outer_)
            sign = s1 * s2 * sn
            with np.errstate(invalid="ignore"):
                sh, sl = _np_two_sum(h1, h2)
                sl = sl + l1 + l2
                th, tl = _np_two_sum(sh, lnh)
                total = th + (tl + sl + lnl)
                vals = sign * np.exp(np.where(sign != 0.0, total, -np.inf))
            vals[sign == 0.0] = 0.0
            out.append(vals)
        return out[0], out[1]

    # -- diagnostics ---------------------------------------------------------

    def wronskian_nodes(self) -> np.ndarray:
        """wL*mS - mL*wS at nodes 1..mtp-1, relative to its median magnitude."""
        return _wronskian_profile(self.fp)[0]


def _np_two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _wronskian_profile(fp: FundamentalPair):
    """Wronskian mantissas (common scale) and the dd log of that scale."""
    s_wl, h_wl, l_wl = fp.component("wL")
    s_ms, h_ms, l_ms = fp.component("mS")
    s_ml, h_ml, l_ml = fp.component("mL")
    s_ws, h_ws, l_ws = fp.component("wS")
    n = len(s_wl)
    with np.errstate(invalid="ignore"):
        p1h, p1l = _np_two_sum(h_wl, h_ms)
        p1l = p1l + l_wl + l_ms
        p2h, p2l = _np_two_sum(h_ml, h_ws)
        p2l = p2l + l_ml + l_ws
    live = (s_wl != 0) & (s_ms != 0) & (s_ml != 0) & (s_ws != 0)
    idx = np.nonzero(live)[0]
    if len(idx) == 0:
        raise AccuracyError("no nodes with a complete fundamental pair")
    ref_h = np.max(p1h[idx])
    ref_i = idx[int(np.argmax(p1h[idx]))]
    ref_l = p1l[ref_i]
    K = np.zeros(n)
    mag = np.zeros(n)
    a1 = np.zeros(n)
    a1[idx] = s_wl[idx] * s_ms[idx] * np.exp((p1h[idx] - ref_h) + (p1l[idx] - ref_l))
    a2 = np.zeros(n)
    a2[idx] = s_ml[idx] * s_ws[idx] * np.exp((p2h[idx] - ref_h) + (p2l[idx] - ref_l))
    K[idx] = a1[idx] - a2[idx]
    mag[idx] = np.maximum(np.abs(a1[idx]), np.abs(a2[idx]))
    return K, mag, live, (ref_h, ref_l)


def _finalize(
    E: float,
    kappa: int,
    pw: PiecewiseCharge,
    consts: PhysicalConstants,
    m_sweep,
    w_sweep,
    fcoef,
    gcoef,
    fscale,
    gscale,
) -> GreensFunction:
    grid = pw.grid
    mtp = grid.mtp
    rs = grid.r
    alpha = consts.alpha

    sgn = {name: np.zeros(mtp) for name in _COMPONENTS}
    lg_hi = {name: np.full(mtp, _NEG_INF) for name in _COMPONENTS}
    lg_lo = {name: np.zeros(mtp) for name in _COMPONENTS}
    worst_est = 0.0

    def put(name: str, k: int, v: ScaledValue):
        nonlocal worst_est
        s, lh, ll = _sv_signed_log(v)
        sgn[name][k] = s
        lg_hi[name][k] = lh
        lg_lo[name][k] = ll
        if v.est_rel > worst_est:
            worst_est = v.est_rel

    for k in range(1, mtp):
        r = rs[k]
        Zr = pw.charge_at(r)
        A = alpha * (Zr / r + E)
        for prefix, (vals, ders, smalls) in (("m", m_sweep), ("w", w_sweep)):
            V, Vp, S = vals[k], ders[k], smalls[k]
            # first-order system: S' = (kappa/r) S - alpha (Z/r + E) V
            Sp = _sv_sum([_sv_scale(S, kappa / r), _sv_scale(V, -A)])
            put(prefix + "L", k, V)
            put(prefix + "Lp", k, Vp)
            put(prefix + "S", k, S)
            put(prefix + "Sp", k, Sp)

    if worst_est > _ASSEMBLY_EST_MAX:
        raise AccuracyError(
            f"assembled-solution error estimate {worst_est:.3e} exceeds "
            f"{_ASSEMBLY_EST_MAX}"
        )

    fp = FundamentalPair(
        sgn=sgn,
        lg_hi=lg_hi,
        lg_lo=lg_lo,
        fcoef=fcoef,
        gcoef=gcoef,
        fscale=fscale,
        gscale=gscale,
        worst_est=worst_est,
    )

    K, mag, live, ref = _wronskian_profile(fp)
    idx = np.nonzero(live)[0]
    Kv = K[idx]
    med = float(np.median(np.abs(Kv)))
    cancel = med / max(float(np.median(mag[idx])), 1e-300)
    # unscaled magnitude of the Wronskian constant
    log_K = ref[0] + ref[1] + (math.log(med) if med > 0 else _NEG_INF)
    # cancellation ~3e-6 corresponds to an energy within ~1e-8 (relative) of
    # an eigenvalue, the closest approach the construction supports
    if cancel < 3e-6 or log_K < math.log(1e-280):
        raise NearPoleError(
            f"Wronskian nearly vanishes (cancellation {cancel:.3e}): "
            f"E = {E:.10g} is too close to a bound eigenvalue for kappa = {kappa}"
        )
    # constancy over nodes past the first few (origin nodes degrade gracefully)
    lo = 5 if mtp > 12 else 1
    sel = idx[idx >= lo]
    spread = float((np.max(K[sel]) - np.min(K[sel])) / abs(np.median(K[sel])))
    if spread > 1e-6:
        raise AccuracyError(
            f"Wronskian relative spread {spread:.3e} exceeds 1e-6 across nodes"
        )

    k_ref = idx[np.searchsorted(idx, mtp // 2, side="left") % len(idx)]
    # norm = alpha / K(r*), assembled in scaled form
    m_ref = K[k_ref]
    lh, ll = _dd_add(ref[0], ref[1], math.log(abs(m_ref)), 0.0)
    norm = ScaledValue(
        math.copysign(1.0, m_ref) * alpha, 0.0, -lh, -ll, abs(spread)
    )
    return GreensFunction(
        energy=E,
        kappa=kappa,
        grid=grid,
        pw=pw,
        consts=consts,
        fp=fp,
        norm=norm,
        wronskian_rel_spread=spread,
    )


def build_greens(
    E: float,
    kappa: int,
    pw: PiecewiseCharge,
    grid: RadialGrid | None = None,
    consts: PhysicalConstants | None = None,
) -> GreensFunction:
    """Build the radial Green's function for one (E, kappa) pair."""
    consts = consts or PhysicalConstants()
    if grid is not None and grid is not pw.grid:
        raise DomainError("grid argument must be the grid the charge was linearized on")
    report = validate_for_energy(pw, E, consts)
    if not report.ok:
        raise EnergyRangeError(report.message())
    params = _interval_params_all(pw, E, kappa, consts)
    lams = _lambdas(pw, E, consts, params)
    cache: dict = {}
    mv, md, ms, fcoef, fscale = _sweep(
        pw, E, kappa, consts, params, lams, cache, backward=False
    )
    wv, wd, ws, gcoef, gscale = _sweep(
        pw, E, kappa, consts, params, lams, cache, backward=True
    )
    return _finalize(
        E, kappa, pw, consts, (mv, md, ms), (wv, wd, ws), fcoef, gcoef, fscale, gscale
    )


def build_greens_single_interval(
    E: float,
    kappa: int,
    pw: PiecewiseCharge,
    consts: PhysicalConstants | None = None,
) -> GreensFunction:
    """Reference construction for a constant charge: one global interval.

    The local Coulomb solutions are exact on the whole axis when the charge
    is constant, so no matching is performed; this provides an independent
    path for degeneracy checks against the multi-interval sweep.
    """
    consts = consts or PhysicalConstants()
    if not pw.is_constant():
        raise DomainError("single-interval construction requires a constant charge")
    report = validate_for_energy(pw, E, consts)
    if not report.ok:
        raise EnergyRangeError(report.message())
    grid = pw.grid
    mtp = grid.mtp
    z0 = float(pw.z0[0])
    p = interval_params(z0, 0.0, E, kappa, consts)
    lam = -consts.alpha * E / p.q
    mv: list[ScaledValue | None] = [None] * mtp
    md: list[ScaledValue | None] = [None] * mtp
    ms: list[ScaledValue | None] = [None] * mtp
    wv: list[ScaledValue | None] = [None] * mtp
    wd: list[ScaledValue | None] = [None] * mtp
    ws: list[ScaledValue | None] = [None] * mtp
    for k in range(1, mtp):
        r = grid.r[k]
        mv[k], md[k], ms[k] = _regular_scaled(p, z0, kappa, r, lam=lam)
        wv[k], wd[k], ws[k] = _irregular_scaled(p, z0, kappa, r, lam=lam)
    nint = pw.n_intervals
    fcoef = np.zeros((nint, 2))
    fcoef[:, 0] = 1.0
    gcoef = np.zeros((nint, 2))
    gcoef[:, 1] = 1.0
    return _finalize(
        E,
        kappa,
        pw,
        consts,
        (mv, md, ms),
        (wv, wd, ws),
        fcoef,
        gcoef,
        np.zeros(nint),
        np.zeros(nint),
    )
