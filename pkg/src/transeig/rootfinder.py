"""Transmission-eigenvalue detection for radially layered disks.

Per angular mode m the eigenvalues are the zeros of the Wronskian
W_m(lambda) = u1(R) u2'(R) - u2(R) u1'(R) of the two regular radial solutions.
Zeros are located by the argument principle on axis-aligned rectangles
(adaptive boundary sampling, each phase step < pi/2), recursive subdivision
until a box holds at most a tight cluster, then batched Newton polish using
the integrated lambda-sensitivities.

Robustness/determinism notes:
  * Boundary samples are memoized per mode keyed on the exact lambda bits;
    the ODE has real coefficients so W(conj lambda) = conj W(lambda) holds
    bit-exactly and the cache canonicalizes to Im lambda >= 0.
  * Contour sampling and subdivision use a cheap survey tolerance; boxes
    narrower than ~1e-4 (where W is pure cancellation), Newton steps and
    residuals use the full radialode tolerance.
  * All jitter/split offsets come from a keyed hash, never an RNG, so two
    runs of the same search are identical byte for byte.
  * Searches stay in the half plane Re lambda >= 0.5: eigenvalue sets are
    conjugation/sign symmetric and |lambda| < 0.5 is excluded by contract.
"""
from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

import numpy as np

from . import radialode
from .radialode import RadialProfile

SURVEY_RTOL = 1e-6
SURVEY_ATOL = 1e-8
PRECISE_BOX_WIDTH = 1e-4
RESIDUAL_BOUND = 1e-8
DEDUP_SCALE = 1e-7
CLUSTER_SCALE = 1e-7
SNAP_SCALE = 1e-10
BISECTION_FLOOR = 1e-9
MIN_RE = 0.5
PHASE_STEP_LIMIT = 1.45
LOG_STEP_LIMIT = 0.9
MAX_REFINE_ROUNDS = 48
MAX_BOUNDARY_SAMPLES = 60_000
NEWTON_MAX_ITER = 50
SPLIT_FRACTIONS = (0.513, 0.487, 0.541, 0.459, 0.5)
MODE_CUTOFF_SLOPE = 1.3
MODE_CUTOFF_PAD = 10.0


class BoundaryZeroError(RuntimeError):
    """A zero of W sits on (or hugs) a counting contour even after jitter."""


class DegenerateProblemError(ValueError):
    """W vanishes identically: the two indices are (numerically) the same."""


@dataclass(frozen=True)
class Box:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min > 0.0):
            raise ValueError("box must satisfy re_min > 0 (lambda = 0 excluded)")
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise ValueError("box must have nonempty interior")

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max),
                       0.5 * (self.im_min + self.im_max))

    def contains(self, lam: complex, slack: float = 0.0) -> bool:
        return (self.re_min - slack <= lam.real <= self.re_max + slack
                and self.im_min - slack <= lam.imag <= self.im_max + slack)

    def split(self, frac: float):
        """Two children split across the longer side at the given fraction."""
        if self.width >= self.height:
            cut = self.re_min + frac * self.width
            return (Box(self.re_min, cut, self.im_min, self.im_max),
                    Box(cut, self.re_max, self.im_min, self.im_max))
        cut = self.im_min + frac * self.height
        return (Box(self.re_min, self.re_max, self.im_min, cut),
                Box(self.re_min, self.re_max, cut, self.im_max))


@dataclass(frozen=True)
class DiskProblem:
    """Disk of radius R with refraction indices n1, n2 (radial polynomials)."""

    radius: float
    n1: RadialProfile
    n2: RadialProfile

    def __post_init__(self):
        if self.n1.radius != self.radius or self.n2.radius != self.radius:
            raise ValueError("profile radii must equal the disk radius")

    @property
    def contact_order(self):
        """First boundary normal derivative at which n1 and n2 differ.

        0 means n1(R) != n2(R); None means the polynomials are identical.
        """
        c1 = list(self.n1.coeffs)
        c2 = list(self.n2.coeffs)
        width = max(len(c1), len(c2))
        c1 += [0.0] * (width - len(c1))
        c2 += [0.0] * (width - len(c2))
        diff = [a - b for a, b in zip(c1, c2)]
        if all(d == 0.0 for d in diff):
            return None
        import numpy.polynomial.polynomial as P
        full = np.zeros(2 * width - 1)
        full[::2] = diff
        scale_poly = np.zeros(2 * width - 1)
        scale_poly[::2] = [abs(a) + abs(b) for a, b in zip(c1, c2)]
        for s in range(2 * width - 1):
            val = float(P.polyval(self.radius, full))
            scale = float(P.polyval(self.radius, scale_poly)) + 1.0
            if abs(val) > 1e-9 * scale:
                return s
            full = P.polyder(full)
            scale_poly = P.polyder(scale_poly)
        return None

    def max_index(self) -> float:
        return max(self.n1.max_value(), self.n2.max_value())

    def to_json(self) -> dict:
        return {"radius": self.radius, "n1": list(self.n1.coeffs),
                "n2": list(self.n2.coeffs)}

    @staticmethod
    def from_json(obj: dict) -> "DiskProblem":
        if (not isinstance(obj, dict) or "radius" not in obj
                or "n1" not in obj or "n2" not in obj):
            raise ValueError(
                'problem JSON must be {"radius": R, "n1": [c0, c1, ...], "n2": [...]}')
        R = float(obj["radius"])
        return DiskProblem(R, RadialProfile(R, tuple(obj["n1"])),
                           RadialProfile(R, tuple(obj["n2"])))


@dataclass(frozen=True)
class EigenvalueRecord:
    m: int
    lam: complex
    multiplicity: int
    residual: float
    box: Box


@dataclass(frozen=True)
class UnresolvedBox:
    m: int
    box: Box
    count: int
    reason: str


class SearchResult(list):
    """List of EigenvalueRecord with search diagnostics attached."""

    def __init__(self, records=(), unresolved=()):
        super().__init__(records)
        self.unresolved = tuple(unresolved)

    @property
    def partial(self) -> bool:
        return bool(self.unresolved)


def mode_cutoff(p: DiskProblem, lam_abs_max: float) -> int:
    """Smallest safe mMax: modes above it have no zeros of |lambda| <= given."""
    return int(math.ceil(MODE_CUTOFF_SLOPE * lam_abs_max
                         * math.sqrt(p.max_index()) * p.radius + MODE_CUTOFF_PAD))


def _hash01(*parts) -> float:
    """Deterministic hash of numbers to [0, 1) (replaces any RNG)."""
    blob = b"".join(struct.pack("<d", float(x)) for x in parts)
    dig = hashlib.blake2b(blob, digest_size=8).digest()
    return int.from_bytes(dig, "little") / 2.0 ** 64


class _WronskianCache:
    """Memoized Wronskian evaluations for one problem, keyed per mode.

    Values are stored for the upper-half-plane representative; fetching the
    conjugate flips signs, which is exact because the ODE coefficients are
    real.  Two tolerance classes: survey (contours) and precise (polish).
    """

    def __init__(self, p: DiskProblem):
        self.p = p
        self._store = {}        # (m, precise) -> {lam_canonical: (w, dw, log)}
        self.evals = 0

    def _table(self, m: int, precise: bool) -> dict:
        return self._store.setdefault((m, bool(precise)), {})

    def fetch(self, m: int, lams, precise: bool):
        """Return (w, dw, logmag) arrays for the given lambda points.

        w, dw carry a common scale of e^logmag / |w|; phases and the Newton
        ratio w/dw are unaffected by scaling.
        """
        table = self._table(m, precise)
        missing = {}
        for lam in lams:
            key = complex(lam.real, abs(lam.imag))
            if key not in table and key not in missing:
                missing[key] = None
        if missing:
            todo = np.array(list(missing), dtype=complex)
            marr = np.full(todo.shape, m, dtype=np.int64)
            if precise:
                rtol, atol = radialode.RTOL, radialode.ATOL
            else:
                rtol, atol = SURVEY_RTOL, SURVEY_ATOL
            u1, du1, p1, q1, l1 = radialode.regular_solutions(
                self.p.n1, marr, todo, rtol=rtol, atol=atol)
            u2, du2, p2, q2, l2 = radialode.regular_solutions(
                self.p.n2, marr, todo, rtol=rtol, atol=atol)
            w = u1 * du2 - u2 * du1
            dw = p1 * du2 + u1 * q2 - p2 * du1 - u2 * q1
            lsum = l1 + l2
            aw = np.abs(w)
            with np.errstate(divide="ignore"):
                logmag = np.where(aw > 0.0, np.log(np.maximum(aw, 5e-324)), -np.inf) + lsum
            self.evals += len(todo)
            for i, key in enumerate(todo):
                table[complex(key)] = (complex(w[i]), complex(dw[i]), float(logmag[i]))
        out_w = np.empty(len(lams), dtype=complex)
        out_dw = np.empty(len(lams), dtype=complex)
        out_log = np.empty(len(lams))
        for i, lam in enumerate(lams):
            key = complex(lam.real, abs(lam.imag))
            w, dw, lg = table[key]
            if lam.imag < 0.0:
                w = w.conjugate()
                dw = dw.conjugate()
            out_w[i] = w
            out_dw[i] = dw
            out_log[i] = lg
        return out_w, out_dw, out_log


def _edge_point(box: Box, edge: int, t: float) -> complex:
    if edge == 0:
        return complex(box.re_min + t * box.width, box.im_min)
    if edge == 1:
        return complex(box.re_max, box.im_min + t * box.height)
    if edge == 2:
        return complex(box.re_max - t * box.width, box.im_max)
    return complex(box.re_min, box.im_max - t * box.height)


def _winding_core(eval_fn, box: Box, h0: float):
    """One un-jittered argument-principle pass over the box boundary.

    eval_fn(list[complex]) -> (values, logmags).  Returns (count, median
    logmag).  Raises BoundaryZeroError when a boundary zero is indicated
    (magnitude dip below 1e-12 of its neighbors, un-refinable phase jump,
    or sample blow-up).

    Sampling is refined until adjacent samples differ by less than
    PHASE_STEP_LIMIT in phase AND LOG_STEP_LIMIT in log magnitude.  The phase
    test alone is not alias-safe: a rotation of 2*pi - eps between samples
    wraps to -eps and passes.  Bounding the magnitude step catches most hidden
    turns (they need |W| swings), but a crossover between competing
    exponential terms of comparable size can still spin the phase a full turn
    with modest magnitude wiggle.  So a count is only accepted after a
    verification pass: every interval is halved and the count must reproduce.
    """
    lengths = (box.width, box.height, box.width, box.height)
    ts = []
    for e in range(4):
        n = max(3, int(math.ceil(lengths[e] / h0)) + 1)
        ts.append([i / (n - 1.0) for i in range(n)])
    pending = None
    for _ in range(MAX_REFINE_ROUNDS):
        pts, tags = [], []
        for e in range(4):
            for t in ts[e][:-1]:
                pts.append(_edge_point(box, e, t))
                tags.append((e, t))
        vals, logs = eval_fn(pts)
        n = len(pts)
        if n > MAX_BOUNDARY_SAMPLES:
            raise BoundaryZeroError("boundary sampling exploded")
        finite = np.isfinite(logs)
        if not finite.all():
            raise BoundaryZeroError("exact zero on the boundary")
        phases = np.angle(vals)
        d = np.diff(phases, append=phases[0])
        d = (d + math.pi) % (2.0 * math.pi) - math.pi
        dlog = np.abs(np.diff(logs, append=logs[0]))
        ok = (np.abs(d) <= PHASE_STEP_LIMIT) & (dlog <= LOG_STEP_LIMIT)
        # A zero essentially on the contour shows as a V: a sample far below
        # BOTH neighbors.  Test only samples whose adjacent steps already
        # satisfy the refinement criteria: a true near-contour zero keeps its
        # V at every resolution, while a steep smooth ramp (power law toward
        # a corner, exponential slopes at high modes) flattens as the steps
        # shrink and must not be mistaken for one.  Comparing against the min
        # of the neighbors keeps monotone slopes out as well.
        nb_min = np.minimum(np.roll(logs, 1), np.roll(logs, -1))
        settled = ok & np.roll(ok, 1)
        if np.any(settled & (logs < nb_min + math.log(1e-12))):
            raise BoundaryZeroError("boundary magnitude dip below floor")
        bad = np.flatnonzero(~ok)
        if len(bad) == 0:
            total = float(d.sum()) / (2.0 * math.pi)
            count = int(round(total))
            if abs(total - count) > 0.2:
                raise BoundaryZeroError("phase sum far from an integer")
            if pending is not None and count == pending:
                return count, float(np.median(logs))
            # verification pass: halve every interval and recount
            pending = count
            for i in range(n):
                e, t = tags[i]
                t_next = tags[i + 1][1] if i + 1 < n and tags[i + 1][0] == e else 1.0
                mid = 0.5 * (t + t_next)
                if mid - t > 1e-15 and t_next - mid > 1e-15:
                    ts[e].append(mid)
            for e in range(4):
                ts[e] = sorted(set(ts[e]))
            continue
        pending = None
        inserted = False
        for i in bad:
            e, t = tags[i]
            t_next = tags[i + 1][1] if i + 1 < n and tags[i + 1][0] == e else 1.0
            mid = 0.5 * (t + t_next)
            if mid - t > 1e-15 and t_next - mid > 1e-15:
                ts[e].append(mid)
                inserted = True
        if not inserted:
            raise BoundaryZeroError("phase jump not refinable (zero on edge)")
        for e in range(4):
            ts[e] = sorted(set(ts[e]))
    raise BoundaryZeroError("phase refinement did not settle")


def _winding_with_jitter(eval_fn, box: Box, h0: float,
                         allow_jitter: bool, jitter_key: float):
    """(count, median logmag, box actually counted).

    On boundary trouble the box edges are moved by deterministic offsets of
    up to 1% of the box dimensions, three times, before giving up.  The
    returned box is the (possibly jittered) rectangle the count refers to.
    """
    boxes = [box]
    if allow_jitter:
        for k in (1.0, 2.0, 3.0):
            d = [0.01 * (2.0 * _hash01(jitter_key, k, e, box.re_min, box.re_max,
                                       box.im_min, box.im_max) - 1.0)
                 for e in range(4)]
            re_min = max(box.re_min * 0.98, box.re_min + d[0] * box.width)
            boxes.append(Box(re_min, box.re_max + d[1] * box.width,
                             box.im_min + d[2] * box.height,
                             box.im_max + d[3] * box.height))
    err = None
    for b in boxes:
        try:
            count, medlog = _winding_core(eval_fn, b, h0)
            return count, medlog, b
        except BoundaryZeroError as exc:
            err = exc
    raise BoundaryZeroError(f"boundary zero persists after jitter: {err}")


def winding_number(eval_fn, box: Box, *, h0: float = 0.35,
                   allow_jitter: bool = True, jitter_key: float = 0.0) -> int:
    """Zeros of an analytic function inside the box, by total phase increment.

    eval_fn maps a list of lambda to (values, log-magnitudes).
    """
    count, _, _ = _winding_with_jitter(eval_fn, box, h0, allow_jitter, jitter_key)
    return count


class _ModeEngine:
    """Search machinery for a single angular mode."""

    def __init__(self, cache: _WronskianCache, m: int):
        self.cache = cache
        self.m = m
        p = cache.p
        rate = p.radius * (math.sqrt(p.n1.max_value()) + math.sqrt(p.n2.max_value()))
        self.h0 = min(0.5, 1.2 / (rate + 0.2))

    def _eval_fn(self, box: Box):
        precise = min(box.width, box.height) < PRECISE_BOX_WIDTH * (1.0 + abs(box.center))

        def fn(lams):
            w, _, lg = self.cache.fetch(self.m, lams, precise)
            return w, lg
        return fn

    def winding(self, box: Box, allow_jitter: bool):
        return _winding_with_jitter(self._eval_fn(box), box, self.h0,
                                    allow_jitter, float(self.m))

    def split_box(self, box: Box, count: int):
        """Split into two children whose windings add up to the parent count.

        Retries a few deterministic cut positions when a child contour hits a
        zero or the child counts disagree with the parent.  Returns a list of
        (child, count, medlog) or None when every cut failed.
        """
        for frac in SPLIT_FRACTIONS:
            a, b = box.split(frac)
            try:
                ca, la, _ = self.winding(a, allow_jitter=False)
                cb, lb, _ = self.winding(b, allow_jitter=False)
            except BoundaryZeroError:
                continue
            if ca + cb == count:
                return [(a, ca, la), (b, cb, lb)]
        return None

    def newton(self, leaves):
        """Batched Newton polish from the centers of the leaf boxes.

        Returns per-leaf lambda or None (no convergence inside the box).
        """
        nb = len(leaves)
        lam = np.array([leaf[0].center for leaf in leaves], dtype=complex)
        diag = np.array([math.hypot(leaf[0].width, leaf[0].height) for leaf in leaves])
        active = np.ones(nb, dtype=bool)
        done = np.zeros(nb, dtype=bool)
        for _ in range(NEWTON_MAX_ITER):
            idx = np.flatnonzero(active)
            if len(idx) == 0:
                break
            w, dw, _ = self.cache.fetch(self.m, list(lam[idx]), True)
            step = np.zeros(len(idx), dtype=complex)
            ok = dw != 0.0
            step[ok] = -w[ok] / dw[ok]
            active[idx[~ok]] = False
            cap = 0.6 * diag[idx] + 1e-30
            mag = np.abs(step)
            big = mag > cap
            step[big] *= (cap[big] / mag[big])
            lam[idx] = lam[idx] + step
            conv = mag <= 1e-13 * (1.0 + np.abs(lam[idx]))
            done[idx[conv & ok]] = True
            active[idx[conv]] = False
            out_of_range = (~np.isfinite(lam[idx].real) | ~np.isfinite(lam[idx].imag)
                            | (np.abs(lam[idx]) > radialode.MAX_ABS_LAMBDA - 5.0)
                            | (np.abs(lam[idx].imag) > radialode.MAX_ABS_IM_LAMBDA - 1.0)
                            | (lam[idx].real < 0.05))
            active[idx[out_of_range]] = False
        out = []
        for i, (box, _count, _lg) in enumerate(leaves):
            slack = 1e-12 * (1.0 + abs(lam[i]))
            if done[i] and box.contains(lam[i], slack):
                out.append(complex(lam[i]))
            else:
                out.append(None)
        return out

    def _subdivide(self, pending, unresolved):
        """Drive boxes down to Newton-ready leaves (count 1 or a tight cluster)."""
        leaves = []
        while pending:
            box, cnt, medlog = pending.pop()
            if cnt <= 0:
                continue
            tight = max(box.width, box.height) <= CLUSTER_SCALE * (1.0 + abs(box.center))
            if cnt == 1 or tight:
                leaves.append((box, cnt, medlog))
                continue
            children = self.split_box(box, cnt)
            if children is None:
                unresolved.append(UnresolvedBox(self.m, box, cnt, "no admissible split"))
                continue
            pending.extend(children)
        return leaves

    def run(self, region: Box):
        """Full pipeline for this mode: trim, count, subdivide, polish."""
        records, unresolved = [], []
        p = self.cache.p
        cut = (self.m - MODE_CUTOFF_PAD) / (MODE_CUTOFF_SLOPE
                                            * math.sqrt(p.max_index()) * p.radius)
        im_ext = max(abs(region.im_min), abs(region.im_max))
        re_lo = region.re_min
        if cut > im_ext:
            re_lo = max(re_lo, math.sqrt(cut * cut - im_ext * im_ext))
        if re_lo >= region.re_max:
            return records, unresolved
        top = Box(re_lo, region.re_max, region.im_min, region.im_max)
        try:
            count, medlog, top_used = self.winding(top, allow_jitter=True)
        except BoundaryZeroError:
            unresolved.append(UnresolvedBox(self.m, top, -1, "boundary zero at region scale"))
            return records, unresolved
        leaves = self._subdivide([(top_used, count, medlog)], unresolved)
        for _ in range(64):
            if not leaves:
                break
            roots = self.newton(leaves)
            retry = []
            for (box, cnt, medlog), root in zip(leaves, roots):
                rec = None
                if root is not None:
                    rec = self._record(root, cnt, medlog, box)
                if rec is not None:
                    records.append(rec)
                    continue
                if max(box.width, box.height) < BISECTION_FLOOR:
                    unresolved.append(UnresolvedBox(
                        self.m, box, cnt, "newton and bisection exhausted"))
                    continue
                children = self.split_box(box, cnt)
                if children is None:
                    unresolved.append(UnresolvedBox(self.m, box, cnt, "no admissible split"))
                    continue
                retry.extend(children)
            leaves = self._subdivide(retry, unresolved)
        for box, cnt, _ in leaves:
            unresolved.append(UnresolvedBox(self.m, box, cnt, "polish loop exhausted"))
        records.sort(key=lambda r: (r.lam.real, r.lam.imag))
        return self._dedup(records), unresolved

    def _record(self, lam: complex, mult: int, medlog: float, box: Box):
        if abs(lam.imag) <= SNAP_SCALE * (1.0 + abs(lam)):
            snapped = complex(lam.real, 0.0)
            res = self._residual(snapped, medlog)
            if res <= RESIDUAL_BOUND:
                return EigenvalueRecord(self.m, snapped, mult, res, box)
        res = self._residual(lam, medlog)
        if res <= RESIDUAL_BOUND:
            return EigenvalueRecord(self.m, lam, mult, res, box)
        return None

    def _residual(self, lam: complex, medlog: float) -> float:
        w, _, lg = self.cache.fetch(self.m, [lam], True)
        if not math.isfinite(lg[0]):
            return 0.0
        return math.exp(min(lg[0] - medlog, 700.0))

    def _dedup(self, records):
        out = []
        for rec in records:
            tol = DEDUP_SCALE * (1.0 + abs(rec.lam))
            dup = None
            for prev in out:
                if abs(prev.lam - rec.lam) <= tol:
                    dup = prev
                    break
            if dup is None:
                out.append(rec)
            elif rec.residual < dup.residual:
                out[out.index(dup)] = EigenvalueRecord(
                    rec.m, rec.lam, max(rec.multiplicity, dup.multiplicity),
                    rec.residual, rec.box)
        return out


def wronskian(p: DiskProblem, m: int, lam: complex):
    """(value, dvalue, logScale) of W_m at one lambda, full tolerance.

    value/dvalue are the rescaled Wronskian and its lambda-derivative; the
    true values are e^logScale times larger.  Zeros of value at fixed m are
    exactly the mode-m transmission eigenvalues.
    """
    if lam == 0.0:
        raise ValueError("lambda must be nonzero")
    s1 = radialode.regular_solution(p.n1, m, lam)
    s2 = radialode.regular_solution(p.n2, m, lam)
    value = s1.u * s2.du - s2.u * s1.du
    dvalue = (s1.u_lam * s2.du + s1.u * s2.du_lam
              - s2.u_lam * s1.du - s2.u * s1.du_lam)
    return value, dvalue, s1.log_scale + s2.log_scale


def winding_count(p: DiskProblem, m: int, box: Box) -> int:
    """Number of mode-m eigenvalues inside the box, counted with multiplicity."""
    cache = _WronskianCache(p)
    engine = _ModeEngine(cache, m)
    count, _, _ = engine.winding(box, allow_jitter=True)
    return count


def _flat_ratio_probe(p: DiskProblem, region: Box) -> float:
    """Largest |W| / (|u1 du2| + |u2 du1|) over a fixed probe grid."""
    res = np.linspace(region.re_min, region.re_max, 5)[1:-1]
    ims = np.linspace(region.im_min, region.im_max, 4)
    lams = np.array([complex(a, b) for a in res for b in ims])
    worst = 0.0
    for m in (0, 1):
        marr = np.full(lams.shape, m, dtype=np.int64)
        u1, du1, _, _, _ = radialode.regular_solutions(p.n1, marr, lams)
        u2, du2, _, _, _ = radialode.regular_solutions(p.n2, marr, lams)
        w = np.abs(u1 * du2 - u2 * du1)
        denom = np.abs(u1 * du2) + np.abs(u2 * du1)
        worst = max(worst, float((w / denom).max()))
    return worst


def _search_mode_task(args):
    p, m, region = args
    cache = _WronskianCache(p)
    return _ModeEngine(cache, m).run(region)


def find_eigenvalues(p: DiskProblem, region: Box, m_max: int,
                     jobs: int = 1) -> SearchResult:
    """All transmission eigenvalues of modes 0..m_max inside the region.

    The region must satisfy re_min >= 0.5 (the excluded disk around 0).
    Records are sorted by (m, Re lambda, Im lambda); the result carries an
    .unresolved tuple for any box the solver could not settle.
    """
    if region.re_min < MIN_RE:
        raise ValueError(f"search region must satisfy re_min >= {MIN_RE}")
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    im_ext = max(abs(region.im_min), abs(region.im_max))
    if (math.hypot(1.02 * region.re_max, 1.02 * im_ext) > radialode.MAX_ABS_LAMBDA
            or 1.02 * im_ext > radialode.MAX_ABS_IM_LAMBDA):
        raise ValueError("search region exceeds the radial-solver envelope")
    if _flat_ratio_probe(p, region) <= 1e-10:
        raise DegenerateProblemError(
            "Wronskian vanishes identically on the probe grid (n1 = n2)")
    tasks = [(p, m, region) for m in range(m_max + 1)]
    if jobs > 1 and len(tasks) > 1:
        outputs = _run_parallel(tasks, jobs)
    else:
        outputs = [_search_mode_task(t) for t in tasks]
    records, unresolved = [], []
    for recs, unres in outputs:
        records.extend(recs)
        unresolved.extend(unres)
    records.sort(key=lambda r: (r.m, r.lam.real, r.lam.imag))
    return SearchResult(records, unresolved)


def _run_parallel(tasks, jobs):
    try:
        import multiprocessing as mp
        ctx = mp.get_context("spawn")
        with ctx.Pool(processes=jobs) as pool:
            return pool.map(_search_mode_task, tasks, chunksize=1)
    except (OSError, ImportError):  # no semaphores / restricted sandbox
        return [_search_mode_task(t) for t in tasks]
