"""Regular radial solutions of  u'' + u'/r + (lambda^2 n(r) - m^2/r^2) u = 0
on [0, R] for complex lambda, with overflow-safe rescaling and lambda-sensitivity.

The solution regular at r = 0 is seeded by a Frobenius series at a small r0
and continued to R by an embedded Runge-Kutta 5(4) pair with PI step control
(rtol 1e-11, atol 1e-13 on the rescaled state).  Only the direction of
(u, u') matters downstream, so whenever max(|u|, R|u'|) exceeds the overflow
threshold the whole 4-component state is multiplied by an exact power of two
s < 1 and the exponent is accumulated in logScale.  Power-of-two rescaling
plus a scale-covariant error norm make the integration exactly independent
of the threshold choice.

The heavy path is a batch integrator (many lambda, one profile) compiled with
numba; scalar calls wrap a batch of one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

RTOL = 1e-11
ATOL = 1e-13
OVERFLOW_THRESHOLD = 1e100
MAX_ABS_LAMBDA = 200.0
MAX_ABS_IM_LAMBDA = 30.0
MAX_MODE = 250
SEED_MAX_TERMS = 600
SEED_SHRINK_ATTEMPTS = 5


class SeedError(RuntimeError):
    """Frobenius tail failed to reach 1e-16 relative at the seed radius."""


class StiffnessError(RuntimeError):
    """Adaptive step size underflowed."""


@dataclass(frozen=True)
class RadialProfile:
    """Refraction index n(r) = sum_t coeffs[t] * r^(2t), positive on [0, R]."""

    radius: float
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not self.coeffs:
            raise ValueError("profile needs at least one coefficient")
        rr = np.linspace(0.0, self.radius, 1025)
        vals = self.value(rr)
        if vals.min() <= 0.0:
            raise ValueError("profile is not positive on [0, R]")
        # Endpoint guard: a steep dip can hide between samples only if the
        # slope is adverse at the ends.
        if self.slope(0.0) < 0.0 and self.value(np.array([self.radius / 2048.0]))[0] <= 0.0:
            raise ValueError("profile dips nonpositive near r = 0")
        if self.slope(self.radius) < 0.0 and vals[-1] <= 0.0:
            raise ValueError("profile dips nonpositive near r = R")

    def value(self, r):
        x = np.asarray(r) ** 2
        acc = np.zeros_like(x, dtype=float)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def slope(self, r: float) -> float:
        x = r * r
        acc = 0.0
        for t in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * x + 2 * t * self.coeffs[t]
        return acc * r

    def max_value(self) -> float:
        rr = np.linspace(0.0, self.radius, 1025)
        return float(self.value(rr).max())

    def disk_integral(self) -> float:
        """Closed form of the area integral of n over the disk of radius R."""
        total = 0.0
        for t, c in enumerate(self.coeffs):
            total += c * self.radius ** (2 * t + 2) / (2 * t + 2)
        return 2.0 * math.pi * total

    def boundary_derivatives(self, count: int):
        """d^s n / dr^s at r = R for s = 0..count-1 (from the polynomial)."""
        import numpy.polynomial.polynomial as P
        full = np.zeros(2 * len(self.coeffs) - 1)
        full[::2] = self.coeffs
        out = []
        cur = full
        for _ in range(count):
            out.append(float(P.polyval(self.radius, cur)))
            cur = P.polyder(cur)
        return out

    def to_json(self) -> dict:
        return {"radius": self.radius, "coeffs": list(self.coeffs)}

    @staticmethod
    def from_json(obj: dict) -> "RadialProfile":
        if not isinstance(obj, dict) or "radius" not in obj or "coeffs" not in obj:
            raise ValueError('profile JSON must be {"radius": R, "coeffs": [c0, c1, ...]}')
        return RadialProfile(float(obj["radius"]), tuple(obj["coeffs"]))


@dataclass(frozen=True)
class ContactFamily:
    """Pair (n1, n2) with n1 = n2 + amplitude * (R^2 - r^2)^order.

    The difference vanishes to exactly `order` at the boundary, so the pair
    realizes boundary contact of that order.
    """

    base: RadialProfile
    amplitude: float
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("contact order must be >= 1")
        if self.amplitude == 0.0:
            raise ValueError("amplitude must be nonzero")
        self.perturbed()  # validates positivity of n1

    def perturbed(self) -> RadialProfile:
        """n1 as a RadialProfile: binomial expansion of amplitude*(R^2-r^2)^order."""
        j = self.order
        R2 = self.base.radius ** 2
        extra = [0.0] * (j + 1)
        for i in range(j + 1):
            extra[i] = self.amplitude * math.comb(j, i) * ((-1.0) ** i) * R2 ** (j - i)
        coeffs = list(self.base.coeffs) + [0.0] * max(0, j + 1 - len(self.base.coeffs))
        for i in range(j + 1):
            coeffs[i] += extra[i]
        return RadialProfile(self.base.radius, tuple(coeffs))

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "amplitude": self.amplitude,
                "order": self.order}

    @staticmethod
    def from_json(obj: dict) -> "ContactFamily":
        if (not isinstance(obj, dict) or "base" not in obj
                or "amplitude" not in obj or "order" not in obj):
            raise ValueError('family JSON must be {"base": {...}, "amplitude": c, "order": j}')
        return ContactFamily(RadialProfile.from_json(obj["base"]),
                             float(obj["amplitude"]), int(obj["order"]))


@dataclass(frozen=True)
class BoundaryData:
    u: complex
    du: complex
    log_scale: float
    u_lam: complex
    du_lam: complex


def default_seed_radius(p: RadialProfile, lam_abs: float) -> float:
    return min(0.05 * p.radius, 0.5 / (lam_abs * math.sqrt(p.max_value()) + 1.0))


def _seed_radius(p: RadialProfile, m_max: int, lam_abs_max: float) -> float:
    # m-aware seed radius: larger m tolerates (and wants) a larger r0 because
    # the series converges inside the turning point and the power-law leg
    # r0 -> R costs ~ m * log(R/r0) integrator steps.
    base = (0.5 + 0.3 * m_max) / (lam_abs_max * math.sqrt(p.max_value()) + 1.0)
    return min(p.radius / 10.0, max(base, 1e-6 * p.radius))


def frobenius_seed(p: RadialProfile, m: int, lam: complex, r0: float) -> BoundaryData:
    """Series seed at r0: u = r^m sum_t b_t r^(2t), b_0 = 1.

    Returned fields are scaled by e^{-m ln r0}; log_scale = m ln r0 restores
    true values.  Raises SeedError if the tail is not below 1e-16 relative
    within the term budget.
    """
    if not (0.0 < r0 <= p.radius / 10.0):
        raise ValueError(f"seed radius {r0} outside (0, R/10]")
    u, du, ul, dul, ok = _seed_batch(p, np.array([m]), np.array([lam], dtype=complex), r0)
    if not ok:
        raise SeedError(f"Frobenius tail not converged at r0 = {r0}")
    return BoundaryData(u=complex(u[0]), du=complex(du[0]),
                        log_scale=m * math.log(r0),
                        u_lam=complex(ul[0]), du_lam=complex(dul[0]))


def _seed_batch(p: RadialProfile, m: np.ndarray, lam: np.ndarray, r0: float):
    """Vectorized Frobenius seed; returns (u, du, u_lam, du_lam, converged)."""
    B = len(lam)
    c = np.asarray(p.coeffs)
    lam2 = lam * lam
    x = r0 * r0
    mf = m.astype(float)
    b_hist = [np.ones(B, dtype=complex)]
    db_hist = [np.zeros(B, dtype=complex)]
    u = np.ones(B, dtype=complex)
    du = mf / r0 + 0j
    ul = np.zeros(B, dtype=complex)
    dul = np.zeros(B, dtype=complex)
    peak = np.ones(B)
    xt = 1.0
    for t in range(1, SEED_MAX_TERMS + 1):
        conv = np.zeros(B, dtype=complex)
        dconv = np.zeros(B, dtype=complex)
        for pi in range(min(t, len(c))):
            conv += c[pi] * b_hist[t - 1 - pi]
            dconv += c[pi] * db_hist[t - 1 - pi]
        denom = 4.0 * t * (t + mf)
        bt = -(lam2 * conv) / denom
        dbt = -(2.0 * lam * conv + lam2 * dconv) / denom
        b_hist.append(bt)
        db_hist.append(dbt)
        xt *= x
        term = bt * xt
        dterm = dbt * xt
        u += term
        du += (mf + 2 * t) * term / r0
        ul += dterm
        dul += (mf + 2 * t) * dterm / r0
        mag = np.maximum(np.abs(term), np.abs(dterm))
        peak = np.maximum(peak, mag)
        if np.all(mag <= 1e-17 * peak):
            return u, du, ul, dul, True
    return u, du, ul, dul, False


def regular_solution(p: RadialProfile, m: int, lam: complex,
                     threshold: float = OVERFLOW_THRESHOLD) -> BoundaryData:
    """Boundary data of the regular solution at r = R (batch of one)."""
    u, du, ul, dul, ls = regular_solutions(
        p, np.array([m]), np.array([lam], dtype=complex), threshold=threshold)
    return BoundaryData(u=complex(u[0]), du=complex(du[0]), log_scale=float(ls[0]),
                        u_lam=complex(ul[0]), du_lam=complex(dul[0]))


def regular_solutions(p: RadialProfile, m: np.ndarray, lam: np.ndarray,
                      threshold: float = OVERFLOW_THRESHOLD,
                      rtol: float = RTOL, atol: float = ATOL):
    """Batch boundary data: arrays (u, du, u_lam, du_lam, log_scale) at r = R.

    All members share one profile and one adaptive step sequence (error
    controlled on the worst member); m may vary across the batch.  rtol/atol
    override the default step-control tolerances (used by survey-grade contour
    sampling, which does not need the full precision budget).
    """
    m = np.asarray(m, dtype=np.int64)
    lam = np.asarray(lam, dtype=complex)
    if m.shape != lam.shape or m.ndim != 1:
        raise ValueError("m and lam must be 1-d arrays of equal length")
    if len(lam) == 0:
        z = np.zeros(0, dtype=complex)
        return z, z.copy(), z.copy(), z.copy(), np.zeros(0)
    if m.min() < 0 or m.max() > MAX_MODE:
        raise ValueError(f"mode outside [0, {MAX_MODE}]")
    amax = float(np.abs(lam).max())
    if amax > MAX_ABS_LAMBDA or float(np.abs(lam.imag).max()) > MAX_ABS_IM_LAMBDA:
        raise ValueError("lambda outside supported envelope")
    r0 = _seed_radius(p, int(m.max()), amax)
    for _ in range(SEED_SHRINK_ATTEMPTS):
        out = _seed_batch(p, m, lam, r0)
        if out[4]:
            break
        r0 *= 0.5
    else:
        raise SeedError(f"Frobenius seed failed down to r0 = {r0}")
    u0, du0, ul0, dul0, _ = out
    state = np.empty((4, len(lam)), dtype=complex)
    state[0] = u0
    state[1] = du0
    state[2] = ul0
    state[3] = dul0
    logs = m * math.log(r0)
    logs = logs.astype(float)
    status = _dp54_batch(state, logs, r0, p.radius,
                         (m * m).astype(float), lam, lam * lam,
                         np.asarray(p.coeffs, dtype=float),
                         float(rtol), float(atol), float(threshold))
    if status != 0:
        raise StiffnessError(
            f"step-size underflow integrating modes {m.min()}..{m.max()}, "
            f"|lambda| <= {amax:.3g}")
    return state[0].copy(), state[1].copy(), state[2].copy(), state[3].copy(), logs


# Dormand-Prince 5(4) tableau.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = np.zeros((7, 7))
_DP_A[1, 0] = 1 / 5
_DP_A[2, :2] = (3 / 40, 9 / 40)
_DP_A[3, :3] = (44 / 45, -56 / 15, 32 / 9)
_DP_A[4, :4] = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_DP_A[5, :5] = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_DP_A[6, :6] = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
# 5th-order minus embedded 4th-order weights.
_DP_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
                  -17253 / 339200, 22 / 525, -1 / 40])
# Contiguous copies baked into the compiled kernel as constants.
_DP_A_C = np.ascontiguousarray(_DP_A)
_DP_C_C = np.ascontiguousarray(_DP_C)
_DP_E_C = np.ascontiguousarray(_DP_E)


@njit(cache=True)
def _dp54_batch(state, logs, r0, rend, m2, lam, lam2, coeffs, rtol, atol, thresh):
    B = state.shape[1]
    A = _DP_A_C
    C = _DP_C_C
    E = _DP_E_C
    k = np.empty((7, 4, B), dtype=np.complex128)
    ystage = np.empty((4, B), dtype=np.complex128)
    ynew = np.empty((4, B), dtype=np.complex128)
    span = rend - r0
    r = r0
    # initial step: limited by oscillation and by the r^m growth rate at r0
    wmax = 0.0
    for i in range(B):
        w = abs(lam[i]) + math.sqrt(m2[i]) / r0
        if w > wmax:
            wmax = w
    h = min(span / 100.0, 0.1 / (1.0 + wmax))
    hmin = span * 1e-14
    errold = 1e-4
    ln2 = math.log(2.0)
    _rhs_batch(r, state, k[0], m2, lam, lam2, coeffs)
    while r < rend:
        if r + h >= rend:
            h = rend - r  # final (possibly rounding-sized) step
        elif h < hmin:
            return 1
        for s in range(1, 7):
            for comp in range(4):
                for i in range(B):
                    acc = 0.0 + 0.0j
                    for j in range(s):
                        aij = A[s, j]
                        if aij != 0.0:
                            acc += aij * k[j, comp, i]
                    ystage[comp, i] = state[comp, i] + h * acc
            _rhs_batch(r + C[s] * h, ystage, k[s], m2, lam, lam2, coeffs)
        # stage 7 state is the 5th-order solution (FSAL)
        for comp in range(4):
            for i in range(B):
                ynew[comp, i] = ystage[comp, i]
        err = 0.0
        for i in range(B):
            ymax = 0.0
            for comp in range(4):
                a0 = abs(state[comp, i])
                a1 = abs(ynew[comp, i])
                if a0 > ymax:
                    ymax = a0
                if a1 > ymax:
                    ymax = a1
            acc = 0.0
            for comp in range(4):
                e = 0.0 + 0.0j
                for j in range(7):
                    ej = E[j]
                    if ej != 0.0:
                        e += ej * k[j, comp, i]
                sc = atol * ymax + rtol * max(abs(state[comp, i]), abs(ynew[comp, i]))
                if sc > 0.0:
                    q = h * abs(e) / sc
                    acc += q * q
            em = math.sqrt(acc / 4.0)
            if em > err:
                err = em
        if err <= 1.0:
            r += h
            for comp in range(4):
                for i in range(B):
                    state[comp, i] = ynew[comp, i]
            for i in range(B):
                k[0, 0, i] = k[6, 0, i]
                k[0, 1, i] = k[6, 1, i]
                k[0, 2, i] = k[6, 2, i]
                k[0, 3, i] = k[6, 3, i]
            # overflow rescale by an exact power of two
            for i in range(B):
                mv = abs(state[0, i])
                dv = rend * abs(state[1, i])
                if dv > mv:
                    mv = dv
                if mv > thresh:
                    kk = int(math.ceil(math.log(mv) / ln2))
                    sfac = 2.0 ** (-kk)
                    for comp in range(4):
                        state[comp, i] *= sfac
                        k[0, comp, i] *= sfac
                    logs[i] += kk * ln2
            if err < 1e-30:
                err = 1e-30
            fac = 0.9 * err ** (-0.14) * errold ** 0.08
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
            h *= fac
            errold = err
        else:
            fac = 0.9 * err ** (-0.2)
            if fac < 0.2:
                fac = 0.2
            h *= fac
    return 0


@njit(cache=True)
def _rhs_batch(r, y, out, m2, lam, lam2, coeffs):
    x = r * r
    n = 0.0
    for t in range(coeffs.shape[0] - 1, -1, -1):
        n = n * x + coeffs[t]
    inv_r = 1.0 / r
    inv_r2 = inv_r * inv_r
    for i in range(y.shape[1]):
        w = lam2[i] * n - m2[i] * inv_r2
        u = y[0, i]
        v = y[1, i]
        p = y[2, i]
        q = y[3, i]
        out[0, i] = v
        out[1, i] = -v * inv_r - w * u
        out[2, i] = q
        out[3, i] = -q * inv_r - w * p - 2.0 * n * lam[i] * u
