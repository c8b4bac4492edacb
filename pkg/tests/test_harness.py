"""Counting / region-scan harness tests on small, fast windows."""
import json
import math
from types import SimpleNamespace

import pytest

from transeig.harness import (CalibrationError, max_im_in, parabola,
                              record_weight, records_to_csv_lines,
                              scan_free_region, strip_check, summary_dict,
                              weyl_constant, weyl_count)
from transeig.radialode import ContactFamily, RadialProfile
from transeig.rootfinder import DiskProblem

P21 = DiskProblem(1.0, RadialProfile(1.0, (2.0,)), RadialProfile(1.0, (1.0,)))
FAM = ContactFamily(RadialProfile(1.0, (1.0,)), 1.0, 1)


def fake_record(m, lam, multiplicity=1, residual=1e-12):
    return SimpleNamespace(m=m, lam=complex(lam), multiplicity=multiplicity,
                           residual=residual)


# ---------------------------------------------------------------------------
# counting weights and the leading constant

def test_record_weight():
    assert record_weight(fake_record(0, 3.0)) == 1
    assert record_weight(fake_record(0, 3.0, multiplicity=2)) == 2
    assert record_weight(fake_record(4, 3.0 + 1.0j)) == 2
    assert record_weight(fake_record(4, 3.0 + 1.0j, multiplicity=3)) == 6


def test_weyl_constant_constant_profiles():
    # disk integral of a constant c over the unit disk is pi c
    assert weyl_constant(P21) == pytest.approx(3.0 / 4.0, rel=1e-15)
    p = DiskProblem(2.0, RadialProfile(2.0, (3.0,)), RadialProfile(2.0, (1.0,)))
    assert weyl_constant(p) == pytest.approx((3.0 + 1.0) * 4.0 / 4.0, rel=1e-15)


def test_weyl_constant_polynomial_profile_vs_quadrature():
    import numpy as np
    prof = RadialProfile(1.5, (2.0, -0.5, 0.125))
    n = 200_000
    h = prof.radius / n
    r = (np.arange(n) + 0.5) * h
    acc = float(np.sum(prof.value(r) * 2.0 * math.pi * r * h))
    assert prof.disk_integral() == pytest.approx(acc, rel=1e-8)


# ---------------------------------------------------------------------------
# counting function on a small window

def test_weyl_count_small_window():
    res = weyl_count(P21, c0=0.5, r_max=10.0, im_max=3.0)
    assert not res.partial
    assert res.tau == pytest.approx(0.75, rel=1e-15)
    # staircase is strictly increasing in r and nondecreasing in count
    rs = [r for r, _ in res.staircase]
    ns = [n for _, n in res.staircase]
    assert rs == sorted(set(rs))
    assert ns == sorted(ns)
    assert res.staircase[-1][0] == 10.0
    assert res.total == ns[-1]
    # total equals the weighted record sum, and every record is in the annulus
    assert res.total == sum(record_weight(r) for r in res.records)
    for rec in res.records:
        assert 0.5 <= abs(rec.lam) <= 10.0
    # a nontrivial spectrum this far out
    assert res.total >= 40


def test_weyl_count_respects_c0():
    full = weyl_count(P21, c0=0.5, r_max=10.0, im_max=3.0)
    trimmed = weyl_count(P21, c0=6.0, r_max=10.0, im_max=3.0)
    assert trimmed.total < full.total
    assert all(abs(rec.lam) >= 6.0 for rec in trimmed.records)
    # counts beyond the cut agree: same records survive the same filter
    tail_full = sum(record_weight(r) for r in full.records if abs(r.lam) >= 6.0)
    assert trimmed.total == tail_full


def test_weyl_count_validation():
    with pytest.raises(ValueError):
        weyl_count(P21, c0=0.1, r_max=10.0)
    with pytest.raises(ValueError):
        weyl_count(P21, c0=2.0, r_max=2.0)


# ---------------------------------------------------------------------------
# strip check

def test_strip_check_small_window():
    rep = strip_check(P21, re_window=(12.0, 22.0), cal_window=(5.0, 12.0),
                      im_max=3.0)
    assert not rep.partial
    assert rep.ok
    assert rep.c_value == pytest.approx(
        1.5 * max(abs(r.lam.imag) for r in rep.cal_records), rel=1e-15)
    assert rep.violations == ()


def test_strip_check_rejects_contact_pair():
    p = DiskProblem(1.0, FAM.perturbed(), FAM.base)
    with pytest.raises(ValueError):
        strip_check(p)


def test_strip_check_rejects_identical_pair():
    p = DiskProblem(1.0, RadialProfile(1.0, (2.0,)), RadialProfile(1.0, (2.0,)))
    with pytest.raises(ValueError):
        strip_check(p)


def test_strip_check_empty_calibration_window():
    # the (2,1) pair has no spectrum below Re ~ 2.2
    with pytest.raises(CalibrationError):
        strip_check(P21, re_window=(12.0, 14.0), cal_window=(0.6, 1.0),
                    im_max=2.0)


# ---------------------------------------------------------------------------
# parabolic free-region scan

def test_scan_free_region_small_window():
    res = scan_free_region(FAM, re_max=15.0, im_max=4.0)
    assert not res.partial
    assert res.kappa == pytest.approx(2.0 / 5.0, rel=1e-15)
    assert res.exponent == pytest.approx(3.0 / 5.0, rel=1e-15)
    assert res.ok and res.violations == ()
    # calibration constant reproduces its definition over the first third
    cal = [r for r in res.records
           if r.lam.real <= 5.0 and r.lam.imag != 0.0]
    want = 2.0 * max(abs(r.lam.imag) / (r.lam.real + 1.0) ** 0.6 for r in cal)
    assert res.calibrated_c == pytest.approx(want, rel=1e-15)
    # every record sits strictly below the calibrated parabola
    for r in res.records:
        assert abs(r.lam.imag) < parabola(res.calibrated_c, res.exponent,
                                          r.lam.real)
    # witness decades tile [0.5, 15] and the last is the largest
    w = res.growth_witness
    assert [d["reLo"] for d in w] == [0.5, 1.0, 10.0]
    assert [d["reHi"] for d in w] == [1.0, 10.0, 15.0]
    assert w[-1]["maxAbsIm"] >= w[0]["maxAbsIm"]


def test_scan_rejects_separated_pair():
    # a "family" whose perturbation does not vanish at the boundary is not
    # expressible as ContactFamily, so exercise the guard through the scan's
    # own problem assembly: amplitude validation aside, order >= 1 always
    # holds for ContactFamily, and a mismatched radius pair is caught earlier.
    with pytest.raises(ValueError):
        ContactFamily(RadialProfile(1.0, (1.0,)), 1.0, 0)


def test_parabola_values():
    assert parabola(2.0, 0.5, 3.0) == pytest.approx(4.0)
    assert parabola(1.314679, 0.6, 0.0) == pytest.approx(1.314679)


def test_max_im_in():
    recs = [fake_record(0, 1.0 + 2.0j), fake_record(1, 5.0 - 3.0j),
            fake_record(2, 9.0 + 0.5j)]
    assert max_im_in(recs, 0.0, 6.0) == 3.0
    assert max_im_in(recs, 8.0, 10.0) == 0.5
    assert max_im_in(recs, 20.0, 30.0) == 0.0


# ---------------------------------------------------------------------------
# serialization

def test_csv_lines_format():
    recs = [fake_record(3, 2.5 - 1.25j, multiplicity=2, residual=3.5e-11)]
    lines = records_to_csv_lines(recs)
    assert lines[0] == "m,re_lambda,im_lambda,multiplicity,residual"
    assert lines[1] == "3,2.5,-1.25,2,3.5e-11"
    # repr round-trips: parsing the line reproduces the floats exactly
    m, re, im, mult, resid = lines[1].split(",")
    assert (int(m), float(re), float(im), int(mult), float(resid)) == (
        3, 2.5, -1.25, 2, 3.5e-11)


def test_summary_dict_keys_and_nulls():
    d = summary_dict(tau=0.75, rel_err_at_rmax=0.079)
    assert list(d) == ["kappa", "exponent", "calibratedC", "nEigenvalues",
                       "nViolations", "growthWitness", "tau", "relErrAtRmax"]
    assert d["tau"] == 0.75 and d["relErrAtRmax"] == 0.079
    assert d["kappa"] is None and d["growthWitness"] is None
    # JSON round trip keeps nulls
    back = json.loads(json.dumps(d))
    assert back["calibratedC"] is None

    d2 = summary_dict(kappa=0.4, exponent=0.6, calibrated_c=1.3,
                      n_eigenvalues=10, n_violations=0,
                      growth_witness=({"reLo": 0.5, "reHi": 1.0,
                                       "maxAbsIm": 0.0},))
    assert isinstance(d2["growthWitness"], list)
    assert d2["nViolations"] == 0
