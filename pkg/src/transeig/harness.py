"""Experiment driver: eigenvalue-free-region scans, strip checks, and Weyl
counting for disk transmission-eigenvalue problems.

Counting convention: the search lives in the half plane Re lambda >= 0.5 with
both imaginary signs enumerated separately, so every record counts once,
weighted by its root order times 2 (modes +-m) or times 1 for m = 0.
Calibration factors (1.5x for the strip constant, 2x for the parabolic
constant) are frozen conventions of this artifact: theory guarantees that
admissible constants exist but does not provide values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radialode import ContactFamily
from .rootfinder import (Box, DiskProblem, EigenvalueRecord, SearchResult,
                         find_eigenvalues, mode_cutoff)

DEFAULT_IM_MAX = 8.0
DEFAULT_C0 = 0.5


class CalibrationError(RuntimeError):
    """The calibration window contained no usable spectrum."""


def record_weight(rec: EigenvalueRecord) -> int:
    """Contribution of a record to counting functions: order x (2 - [m=0])."""
    return rec.multiplicity * (1 if rec.m == 0 else 2)


def weyl_constant(p: DiskProblem) -> float:
    """Leading coefficient tau of the planar counting law N(r) ~ tau r^2.

    tau = (1/4pi) * integral over the disk of (n1 + n2), with the area
    integral of each polynomial profile in closed form.
    """
    return (p.n1.disk_integral() + p.n2.disk_integral()) / (4.0 * math.pi)


@dataclass(frozen=True)
class CountingResult:
    staircase: tuple          # ((r, N(r)), ...) nondecreasing, right-continuous
    tau: float
    rel_err_at_rmax: float
    records: SearchResult
    remainder_exponent: float | None
    partial: bool

    @property
    def total(self) -> int:
        return self.staircase[-1][1] if self.staircase else 0


def weyl_count(p: DiskProblem, c0: float = DEFAULT_C0, r_max: float = 40.0,
               im_max: float = DEFAULT_IM_MAX, m_max: int | None = None,
               jobs: int = 1) -> CountingResult:
    """Counting function N(r) of eigenvalues with c0 <= |lambda| <= r_max.

    Also reports the relative deviation of N(r_max)/r_max^2 from tau and a
    descriptive log-log slope of the remainder |N(r) - tau r^2| (reported,
    never asserted: the remainder law is asymptotic).
    """
    if c0 < 0.5:
        raise ValueError("c0 must be >= 0.5 (excluded disk around lambda = 0)")
    if r_max <= c0:
        raise ValueError("r_max must exceed c0")
    region = Box(0.5, r_max, -im_max, im_max)
    if m_max is None:
        m_max = mode_cutoff(p, math.hypot(r_max, im_max))
    result = find_eigenvalues(p, region, m_max, jobs=jobs)
    kept = [rec for rec in result if c0 <= abs(rec.lam) <= r_max]
    kept.sort(key=lambda rec: (abs(rec.lam), rec.m, rec.lam.real, rec.lam.imag))
    stairs = []
    total = 0
    for rec in kept:
        total += record_weight(rec)
        r = abs(rec.lam)
        if stairs and stairs[-1][0] == r:
            stairs[-1] = (r, total)
        else:
            stairs.append((r, total))
    if not stairs or stairs[-1][0] < r_max:
        stairs.append((r_max, total))
    tau = weyl_constant(p)
    rel_err = abs(total / r_max ** 2 - tau) / tau
    return CountingResult(
        staircase=tuple(stairs), tau=tau, rel_err_at_rmax=rel_err,
        records=SearchResult(kept, result.unresolved),
        remainder_exponent=_remainder_slope(stairs, tau),
        partial=result.partial)


def _remainder_slope(stairs, tau: float) -> float | None:
    """Descriptive log-log slope of |N(r) - tau r^2| over the upper range."""
    rs, gaps = [], []
    for r, n in stairs:
        gap = abs(n - tau * r * r)
        if r > 1.0 and gap >= 1.0:
            rs.append(math.log(r))
            gaps.append(math.log(gap))
    if len(rs) < 8:
        return None
    lo = len(rs) // 2
    slope = np.polyfit(rs[lo:], gaps[lo:], 1)[0]
    return float(slope)


@dataclass(frozen=True)
class StripReport:
    c_value: float
    cal_records: SearchResult
    violations: tuple
    re_window: tuple
    cal_window: tuple
    im_max: float
    partial: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def strip_check(p: DiskProblem, re_window=(20.0, 60.0), cal_window=(5.0, 20.0),
                im_max: float = DEFAULT_IM_MAX, m_max: int | None = None,
                jobs: int = 1) -> StripReport:
    """Horizontal-strip consistency check for boundary-separated indices.

    Fits C = 1.5 * max |Im lambda| over the calibration window, then asserts
    that no eigenvalue with |Im lambda| > C exists over the check window.
    Only meaningful when the indices differ at the boundary (contact order 0);
    degenerate input is rejected.
    """
    if p.contact_order != 0:
        raise ValueError("strip check requires contact order 0 "
                         f"(indices differing at r = R); got {p.contact_order}")
    lam_abs = math.hypot(max(re_window[1], cal_window[1]), im_max)
    if m_max is None:
        m_max = mode_cutoff(p, lam_abs)
    cal_region = Box(cal_window[0], cal_window[1], -im_max, im_max)
    cal = find_eigenvalues(p, cal_region, m_max, jobs=jobs)
    if not cal:
        raise CalibrationError("no eigenvalues found in the calibration window")
    c_value = 1.5 * max(abs(rec.lam.imag) for rec in cal)
    violations = []
    partial = cal.partial
    if c_value < im_max:
        lo = max(c_value, 1e-9)
        for sign in (1.0, -1.0):
            band = Box(re_window[0], re_window[1],
                       min(sign * lo, sign * im_max), max(sign * lo, sign * im_max))
            found = find_eigenvalues(p, band, m_max, jobs=jobs)
            partial = partial or found.partial
            violations.extend(r for r in found if abs(r.lam.imag) > c_value)
    violations.sort(key=lambda r: (r.m, r.lam.real, r.lam.imag))
    return StripReport(c_value=c_value, cal_records=cal,
                       violations=tuple(violations), re_window=tuple(re_window),
                       cal_window=tuple(cal_window), im_max=im_max, partial=partial)


@dataclass(frozen=True)
class RegionScanResult:
    records: SearchResult
    kappa: float
    exponent: float
    calibrated_c: float
    violations: tuple
    growth_witness: tuple     # ({"reLo", "reHi", "maxAbsIm"}, ...)
    re_max: float
    im_max: float
    partial: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def parabola(calibrated_c: float, exponent: float, re: float) -> float:
    return calibrated_c * (re + 1.0) ** exponent


def scan_free_region(fam: ContactFamily, re_max: float = 80.0,
                     im_max: float = 12.0, m_max: int | None = None,
                     jobs: int = 1) -> RegionScanResult:
    """Parabolic eigenvalue-free-region consistency scan for a contact family.

    Enumerates all eigenvalues in [0.5, re_max] x [-im_max, im_max], fits
    calibratedC = 2 * max |Im|/(Re+1)^(1-kappa) over the calibration third
    Re <= re_max/3, and lists every record at or above the calibrated
    parabola.  growth_witness records max |Im| per Re-decade, exhibiting the
    unbounded growth that rules out a horizontal strip in the contact case.
    """
    p = DiskProblem(fam.base.radius, fam.perturbed(), fam.base)
    j = p.contact_order
    if j is None or j < 1:
        raise ValueError(f"free-region scan requires contact order >= 1, got {j}")
    kappa = 2.0 / (3.0 * j + 2.0)
    exponent = 1.0 - kappa
    if m_max is None:
        m_max = mode_cutoff(p, math.hypot(re_max, im_max))
    region = Box(0.5, re_max, -im_max, im_max)
    records = find_eigenvalues(p, region, m_max, jobs=jobs)
    cal = [r for r in records
           if r.lam.real <= re_max / 3.0 and r.lam.imag != 0.0]
    if not cal:
        raise CalibrationError("no complex spectrum in the calibration third")
    calibrated_c = 2.0 * max(abs(r.lam.imag) / (r.lam.real + 1.0) ** exponent
                             for r in cal)
    violations = tuple(
        r for r in records
        if abs(r.lam.imag) >= parabola(calibrated_c, exponent, r.lam.real))
    return RegionScanResult(
        records=records, kappa=kappa, exponent=exponent,
        calibrated_c=calibrated_c, violations=violations,
        growth_witness=_decade_witness(records, 0.5, re_max),
        re_max=re_max, im_max=im_max, partial=records.partial)


def _decade_witness(records, re_lo: float, re_hi: float) -> tuple:
    """Max |Im lambda| per decade of Re lambda."""
    edges = [re_lo]
    e = 1.0
    while e <= re_lo:
        e *= 10.0
    while e < re_hi:
        edges.append(e)
        e *= 10.0
    edges.append(re_hi)
    out = []
    for lo, hi in zip(edges, edges[1:]):
        vals = [abs(r.lam.imag) for r in records if lo <= r.lam.real < hi]
        top = [abs(r.lam.imag) for r in records if r.lam.real == re_hi]
        if hi == re_hi:
            vals.extend(top)
        out.append({"reLo": lo, "reHi": hi,
                    "maxAbsIm": max(vals) if vals else 0.0})
    return tuple(out)


def max_im_in(records, re_lo: float, re_hi: float) -> float:
    """Largest |Im lambda| among records with Re in [re_lo, re_hi]."""
    vals = [abs(r.lam.imag) for r in records if re_lo <= r.lam.real <= re_hi]
    return max(vals) if vals else 0.0


def records_to_csv_lines(records) -> list:
    """Deterministic CSV serialization (shortest round-trip float format)."""
    lines = ["m,re_lambda,im_lambda,multiplicity,residual"]
    for rec in records:
        lines.append(f"{rec.m},{rec.lam.real!r},{rec.lam.imag!r},"
                     f"{rec.multiplicity},{rec.residual!r}")
    return lines


def summary_dict(*, kappa=None, exponent=None, calibrated_c=None,
                 n_eigenvalues=None, n_violations=None, growth_witness=None,
                 tau=None, rel_err_at_rmax=None) -> dict:
    """Uniform summary-JSON payload; keys not applicable to a run are null."""
    return {
        "kappa": kappa,
        "exponent": exponent,
        "calibratedC": calibrated_c,
        "nEigenvalues": n_eigenvalues,
        "nViolations": n_violations,
        "growthWitness": list(growth_witness) if growth_witness is not None else None,
        "tau": tau,
        "relErrAtRmax": rel_err_at_rmax,
    }
