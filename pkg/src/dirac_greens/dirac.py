"""Independent bound-state solver for the radial Dirac equation.

Integrates the coupled first-order system for (P, Q) in the same
piecewise-linear charge model used by the Green's function construction:

    P' = -(kappa/r) P + [2/alpha + alpha Z(r)/r + alpha E] Q
    Q' =  (kappa/r) Q - alpha [Z(r)/r + E] P

Outward from a power-series start at the origin, inward from a decaying
start, classic RK4 with adaptive substeps, energy refined by bisection plus
secant steps on the matching defect of Q/P at the outermost classical
turning point.  Serves as the verification oracle for the Green's functions
and never shares their analytic per-interval machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants
from .errors import DomainError, StateNotFoundError
from .grid import integrate_smooth
from .potential import PiecewiseCharge

__all__ = ["RadialOrbital", "solve_bound", "sommerfeld_energy", "orbital_l"]


def orbital_l(kappa: int) -> int:
    """Orbital angular momentum: l = kappa for kappa > 0, -kappa-1 otherwise."""
    if kappa == 0:
        raise DomainError("kappa must be a non-zero integer")
    return kappa if kappa > 0 else -kappa - 1


@dataclass(frozen=True)
class RadialOrbital:
    """A bound solution (P, Q) normalized to int (P^2 + Q^2) dr = 1."""

    n: int
    kappa: int
    energy: float
    P: np.ndarray
    Q: np.ndarray
    nodes: int

    def __post_init__(self):
        self.P.setflags(write=False)
        self.Q.setflags(write=False)


def sommerfeld_energy(
    Z: float, n: int, kappa: int, consts: PhysicalConstants | None = None
) -> float:
    """Dirac point-Coulomb eigenvalue (rest energy excluded)."""
    consts = consts or PhysicalConstants()
    alpha = consts.alpha
    if kappa == 0:
        raise DomainError("kappa must be a non-zero integer")
    if n < orbital_l(kappa) + 1:
        raise DomainError(f"no bound state with n = {n} for kappa = {kappa}")
    az = alpha * Z
    if not 0.0 <= az < abs(kappa):
        raise DomainError(
            f"alpha*Z = {az:.6g} must lie in [0, |kappa|) for a real exponent"
        )
    gamma = math.sqrt(kappa * kappa - az * az)
    nr = n - abs(kappa)
    c2 = consts.c**2
    return c2 * ((1.0 + (az / (nr + gamma)) ** 2) ** -0.5 - 1.0)


class _System:
    """RHS of the coupled first-order system on the piecewise charge."""

    def __init__(self, pw: PiecewiseCharge, kappa: int, consts: PhysicalConstants):
        self.pw = pw
        self.kappa = kappa
        self.alpha = consts.alpha

    def rhs(self, r: float, P: float, Q: float, E: float) -> tuple[float, float]:
        a = self.alpha
        k = self.kappa
        zr = self.pw.charge_at(r) / r
        D = 2.0 / a + a * zr + a * E
        A = a * (zr + E)
        return -k / r * P + D * Q, k / r * Q - A * P

    def local_rate(self, r: float, E: float) -> float:
        a = self.alpha
        zr = self.pw.charge_at(r) / r
        D = 2.0 / a + a * zr + a * E
        A = a * (zr + E)
        return math.sqrt(abs(D * A)) + abs(self.kappa) / r


def _rk4_span(sys_: _System, E, r0, P0, Q0, r1, max_phase=0.04):
    """One RK4 leg from r0 to r1 with substeps; returns (P, Q) at r1."""
    rate = max(sys_.local_rate(r0, E), sys_.local_rate(r1, E))
    nsub = max(1, min(64, int(abs(r1 - r0) * rate / max_phase) + 1))
    h = (r1 - r0) / nsub
    r, P, Q = r0, P0, Q0
    for _ in range(nsub):
        k1p, k1q = sys_.rhs(r, P, Q, E)
        k2p, k2q = sys_.rhs(r + 0.5 * h, P + 0.5 * h * k1p, Q + 0.5 * h * k1q, E)
        k3p, k3q = sys_.rhs(r + 0.5 * h, P + 0.5 * h * k2p, Q + 0.5 * h * k2q, E)
        k4p, k4q = sys_.rhs(r + h, P + h * k3p, Q + h * k3q, E)
        P += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        Q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        r += h
    return P, Q


def _turning_index(pw: PiecewiseCharge, E: float, k_last: int) -> int:
    """Outermost node with Z(r)/r + E > 0 (classical region)."""
    rs = pw.grid.r
    for k in range(k_last, 0, -1):
        if pw.charge_at(rs[k]) / rs[k] + E > 0.0:
            return k
    return max(2, k_last // 4)


def _integrate_once(sys_, pw, E, kappa):
    """Outward and inward passes at fixed E.

    Returns (outward P, Q, inward P, Q, match index, stop index, node count
    of the outward P, matching defect of Q/P).
    """
    grid = pw.grid
    rs = grid.r
    mtp = grid.mtp
    alpha = sys_.alpha
    s = math.sqrt(kappa * kappa - (alpha * float(pw.z0[0])) ** 2)

    k_c = _turning_index(pw, E, mtp - 1)
    # stop where the decaying tail is dead relative to the peak
    q_inf = math.sqrt(max(-E * (E * alpha * alpha + 2.0), 1e-300))
    k_stop = mtp - 1
    for k in range(k_c, mtp):
        if q_inf * (rs[k] - rs[k_c]) > 45.0:
            k_stop = k
            break
    if q_inf * (rs[k_stop] - rs[k_c]) < 15.0:
        raise DomainError(
            "orbital has not decayed by the last tabulation point; "
            "increase the grid extent or mtp"
        )

    P = np.zeros(mtp)
    Q = np.zeros(mtp)
    # outward: P ~ r^s with Q/P -> (s + kappa) / (alpha Z(0))
    r1 = rs[1]
    P[1] = 1.0
    Q[1] = (s + kappa) / (alpha * float(pw.z0[0]))
    nodes = 0
    overflow_guard = 1e250
    for k in range(1, k_c):
        p, q = _rk4_span(sys_, E, rs[k], P[k], Q[k], rs[k + 1])
        if abs(p) > overflow_guard or abs(q) > overflow_guard:
            P[1 : k + 1] *= 1e-200
            Q[1 : k + 1] *= 1e-200
            p *= 1e-200
            q *= 1e-200
        P[k + 1], Q[k + 1] = p, q
        if P[k] != 0.0 and P[k + 1] * P[k] < 0.0:
            nodes += 1
    out_P, out_Q = P[k_c], Q[k_c]

    # inward: decaying start with the local WKB ratio
    r_stop = rs[k_stop]
    zr = pw.charge_at(r_stop) / r_stop
    D = 2.0 / alpha + alpha * zr + alpha * E
    A = alpha * (zr + E)
    lam = math.sqrt(max(-D * A + (kappa / r_stop) ** 2, 1e-300))
    Pi = np.zeros(mtp)
    Qi = np.zeros(mtp)
    Pi[k_stop] = 1.0
    Qi[k_stop] = (kappa / r_stop - lam) / D
    for k in range(k_stop, k_c, -1):
        p, q = _rk4_span(sys_, E, rs[k], Pi[k], Qi[k], rs[k - 1])
        if abs(p) > overflow_guard or abs(q) > overflow_guard:
            Pi[k:k_stop + 1] *= 1e-200
            Qi[k:k_stop + 1] *= 1e-200
            p *= 1e-200
            q *= 1e-200
        Pi[k - 1], Qi[k - 1] = p, q

    if out_P == 0.0 or Pi[k_c] == 0.0:
        defect = math.inf
    else:
        ro, ri = out_Q / out_P, Qi[k_c] / Pi[k_c]
        defect = (ro - ri) / (1.0 + abs(ro) + abs(ri))
    return P, Q, Pi, Qi, k_c, k_stop, nodes, defect


def solve_bound(
    pw: PiecewiseCharge,
    kappa: int,
    n: int,
    consts: PhysicalConstants | None = None,
) -> RadialOrbital:
    """Find the bound state (n, kappa) of the piecewise charge model."""
    consts = consts or PhysicalConstants()
    l = orbital_l(kappa)
    if n < l + 1:
        raise DomainError(f"no bound state with n = {n} for kappa = {kappa}")
    n_target = n - l - 1  # interior node count of P
    sys_ = _System(pw, kappa, consts)
    grid = pw.grid

    def probe(E):
        return _integrate_once(sys_, pw, E, kappa)

    E0 = sommerfeld_energy(float(pw.z0[0]), n, kappa, consts)
    e_floor = -1.9 * consts.c**2

    # phase 1: land inside the energy window with the right node count
    E1 = E0
    for _ in range(200):
        cnt = probe(E1)[6]
        if cnt == n_target:
            break
        E1 = E1 * 1.35 if cnt > n_target else E1 * 0.75
        if not (e_floor < E1 < 0.0):
            raise StateNotFoundError(
                f"node-count search left the bound window for (n, kappa) = ({n}, {kappa})"
            )
    else:
        raise StateNotFoundError(
            f"could not find the node-count window for (n, kappa) = ({n}, {kappa})"
        )

    # phase 2: bracket a defect sign change inside the window
    d1 = probe(E1)[7]
    Ea = Eb = E1
    da = db = d1
    step = 0.02 * abs(E1)
    found = False
    for _ in range(200):
        grew = False
        for sgn in (+1.0, -1.0):
            E2 = (Ea if sgn < 0 else Eb) + sgn * step
            if not (e_floor < E2 < 0.0):
                continue
            res = probe(E2)
            if res[6] != n_target:
                continue
            grew = True
            if sgn > 0:
                Eb, db = E2, res[7]
            else:
                Ea, da = E2, res[7]
            if da * db < 0.0:
                found = True
                break
        if found:
            break
        if not grew and step > abs(E1):
            break
        step *= 1.7
    if not found:
        raise StateNotFoundError(
            f"matching defect does not change sign near E = {E1:.6g} "
            f"for (n, kappa) = ({n}, {kappa})"
        )

    # order bracket so defect(lo) * defect(hi) < 0
    lo, hi = (Ea, Eb) if Ea < Eb else (Eb, Ea)
    dlo = da if lo == Ea else db
    dhi = db if hi == Eb else da
    E_prev, d_prev = lo, dlo
    E_cur, d_cur = hi, dhi
    for _ in range(200):
        # secant proposal, clipped into the bracket; fall back to bisection
        if d_cur != d_prev:
            E_new = E_cur - d_cur * (E_cur - E_prev) / (d_cur - d_prev)
        else:
            E_new = 0.5 * (lo + hi)
        if not (lo < E_new < hi):
            E_new = 0.5 * (lo + hi)
        res = probe(E_new)
        d_new = res[7]
        if res[6] == n_target:
            if d_new * dlo <= 0.0:
                hi, dhi = E_new, d_new
            else:
                lo, dlo = E_new, d_new
        else:
            # stray outside the node window: shrink toward the center
            if E_new > 0.5 * (lo + hi):
                hi = E_new
            else:
                lo = E_new
        E_prev, d_prev = E_cur, d_cur
        E_cur, d_cur = E_new, d_new
        if abs(hi - lo) < 1e-10 * abs(E_cur):
            break
    E_fin = 0.5 * (lo + hi)

    P, Q, Pi, Qi, k_c, k_stop, nodes, _ = _integrate_once(sys_, pw, E_fin, kappa)
    # glue inward onto outward at the matching point
    scale = P[k_c] / Pi[k_c]
    P[k_c:k_stop + 1] = Pi[k_c:k_stop + 1] * scale
    Q[k_c:k_stop + 1] = Qi[k_c:k_stop + 1] * scale
    P[k_stop + 1:] = 0.0
    Q[k_stop + 1:] = 0.0

    norm = integrate_smooth(P[: grid.mtp] ** 2 + Q[: grid.mtp] ** 2, grid)
    if not norm > 0:
        raise StateNotFoundError("normalization integral vanished")
    P /= math.sqrt(norm)
    Q /= math.sqrt(norm)
    if P[1] < 0.0:
        P, Q = -P, -Q
    return RadialOrbital(n=n, kappa=kappa, energy=E_fin, P=P, Q=Q, nodes=nodes)
