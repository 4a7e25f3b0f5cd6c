"""Bound-surface tests, including the closed-form oracle cross-check.

Working out the inversions analytically: inverting h((p1+p2)/2) on the
upper branch gives max(u, 1-u) with u = (p1+p2)/2, and similarly for the
xor entropy with w = (1+p1-p2)/2.  That collapses to

    beta_max(p1, p2)  = 1/2 + max(|2*p1 - 1|, |2*p2 - 1|) / 4
    alpha_max(p1, p2) = (p1 + p2 - 1)^2 + (p1 - p2)^2

which the bisection-based surface must reproduce to bisection accuracy.
"""

import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bellbound.surfaces as surfaces
from bellbound import (
    BoundTheoremError,
    DomainError,
    alpha_max_point,
    beta_max_from_info,
    beta_max_point,
    binary_entropy,
    h_B_point,
    h_Bxorb_point,
    scan_surface,
    surface_summary,
    write_surface_csv,
)

H_08 = 0.7219280948873623

unit_floats = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def beta_closed_form(p1, p2):
    return 0.5 + max(abs(2 * p1 - 1), abs(2 * p2 - 1)) / 4


def alpha_closed_form(p1, p2):
    return (p1 + p2 - 1) ** 2 + (p1 - p2) ** 2


def test_h_points():
    assert h_B_point(0.5, 0.5) == 1.0
    assert h_B_point(1.0, 0.0) == 1.0
    assert h_B_point(0.0, 0.0) == 0.0
    assert h_Bxorb_point(0.5, 0.5) == 1.0
    assert h_Bxorb_point(1.0, 0.0) == 0.0
    for p in (0.0, 0.25, 0.7, 1.0):
        assert h_Bxorb_point(p, p) == 1.0
    with pytest.raises(DomainError):
        h_B_point(-0.1, 0.5)
    with pytest.raises(DomainError):
        h_Bxorb_point(0.5, 1.2)


def test_beta_max_point_examples():
    assert beta_max_point(0.5, 0.5).beta_max == 0.5
    assert abs(beta_max_point(1.0, 0.0).beta_max - 0.75) <= 1e-9
    assert abs(beta_max_point(0.0, 0.0).beta_max - 0.75) <= 1e-9


def test_alpha_max_point_examples():
    assert alpha_max_point(0.5, 0.5) == 0.0
    assert abs(alpha_max_point(1.0, 0.0) - 1.0) <= 1e-9
    assert abs(alpha_max_point(0.7, 0.7) - 0.16) <= 1e-9


def test_surface_point_internal_consistency():
    sp = beta_max_point(0.3, 0.8)
    assert sp.h_B == binary_entropy(0.55)
    assert sp.h_Bxorb == binary_entropy(0.25)
    assert abs(binary_entropy(sp.p_max_a0) - sp.h_B) <= 1e-10
    assert abs(binary_entropy(sp.p_max_a1) - sp.h_Bxorb) <= 1e-10
    assert sp.beta_max == 0.5 * (sp.p_max_a0 + sp.p_max_a1)


@given(unit_floats, unit_floats)
@settings(max_examples=150, deadline=None)
def test_closed_form_oracle(p1, p2):
    sp = beta_max_point(p1, p2)
    assert abs(sp.beta_max - beta_closed_form(p1, p2)) <= 1e-9
    assert abs(sp.alpha_max - alpha_closed_form(p1, p2)) <= 1e-9


@given(unit_floats, unit_floats)
@settings(max_examples=150, deadline=None)
def test_theorem_bounds_hold(p1, p2):
    sp = beta_max_point(p1, p2)
    assert sp.beta_max <= 0.75 + 1e-9
    assert sp.alpha_max <= 1.0 + 1e-9


def test_symmetries():
    probe = [(0.1, 0.9), (0.3, 0.4), (0.25, 0.0), (0.8, 0.8), (0.01, 0.5)]
    for p1, p2 in probe:
        b = beta_max_point(p1, p2).beta_max
        assert abs(b - beta_max_point(p2, p1).beta_max) <= 1e-10
        assert abs(b - beta_max_point(1.0 - p1, 1.0 - p2).beta_max) <= 1e-10


def test_scan_resolution_2():
    surf = scan_surface(2)
    assert len(surf.points) == 4
    assert all(p.beta_max == 0.75 for p in surf.points)
    assert surf.max_beta_max == 0.75
    assert surf.min_beta_max == 0.75  # the 0.5 minimum is not on this grid


def test_scan_resolution_3():
    surf = scan_surface(3)
    assert len(surf.points) == 9
    assert surf.min_beta_max == 0.5
    assert (0.5, 0.5) in surf.argmin_beta_max()
    assert abs(surf.max_beta_max - 0.75) <= 1e-9


def test_scan_resolution_201():
    surf = scan_surface(201)
    assert 0.75 - 1e-9 <= surf.max_beta_max <= 0.75 + 1e-9
    assert surf.min_beta_max == 0.5
    assert 1.0 - 1e-9 <= surf.max_alpha_max <= 1.0 + 1e-9
    summary = surface_summary(surf)
    assert summary["theorem_beta_ok"] and summary["theorem_alpha_ok"]
    assert [0.5, 0.5] in summary["argmin_beta_max"]


def test_scan_row_major_and_workers():
    surf = scan_surface(5)
    # p1 outer: first row has constant p1 = 0
    assert [p.p1 for p in surf.points[:5]] == [0.0] * 5
    assert [p.p2 for p in surf.points[:5]] == [0.0, 0.25, 0.5, 0.75, 1.0]
    parallel = scan_surface(5, workers=3)
    assert parallel.points == surf.points


def test_scan_bad_resolution():
    with pytest.raises(DomainError):
        scan_surface(1)


def test_resolve_workers_env(monkeypatch):
    monkeypatch.setenv("BELLBOUND_THREADS", "3")
    assert surfaces.resolve_workers(None) == 3
    monkeypatch.setenv("BELLBOUND_THREADS", "0")
    assert surfaces.resolve_workers(None) >= 1
    monkeypatch.setenv("BELLBOUND_THREADS", "pony")
    with pytest.raises(ValueError):
        surfaces.resolve_workers(None)
    monkeypatch.delenv("BELLBOUND_THREADS")
    assert surfaces.resolve_workers(None) == 1
    assert surfaces.resolve_workers(4) == 4


def test_beta_max_from_info_examples():
    assert beta_max_from_info(0.0, 0.0, 1.0, 1.0) == 0.5
    assert beta_max_from_info(1.0, 1.0, 1.0, 1.0) == 1.0
    got = beta_max_from_info(0.0, 1.0, H_08, 1.0)
    assert abs(got - 0.9) <= 1e-9
    with pytest.raises(DomainError):
        beta_max_from_info(-0.1, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        beta_max_from_info(0.0, 0.0, 1.5, 1.0)
    # i > h clamps to a vacuous (fully informed) bound rather than erroring
    assert beta_max_from_info(1.0, 1.0, 0.5, 0.5) == 1.0


def test_beta_max_from_info_monotone():
    h_B = h_X = 0.9
    grid = [i / 20 for i in range(19)]
    last0 = last1 = 0.0
    for i in grid:
        b0 = beta_max_from_info(i, 0.0, h_B, h_X)
        b1 = beta_max_from_info(0.0, i, h_B, h_X)
        assert b0 >= last0 - 1e-12 and b1 >= last1 - 1e-12
        last0, last1 = b0, b1


def test_csv_output():
    surf = scan_surface(3)
    buf = io.StringIO()
    write_surface_csv(surf, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "p1,p2,h_B,h_Bxorb,p_max_a0,p_max_a1,beta_max,alpha_max"
    assert len(lines) == 10
    # row-major p1-outer; 12-significant-digit decimals
    assert lines[1].startswith("0,0,")
    assert lines[2].startswith("0,0.5,")
    center = lines[5].split(",")
    assert center[:2] == ["0.5", "0.5"] and center[6] == "0.5"
    for line in lines[1:]:
        for tok in line.split(","):
            assert len(tok.replace(".", "").replace("-", "").lstrip("0")) <= 13


def test_theorem_guard_trips_on_broken_inversion(monkeypatch):
    monkeypatch.setattr(surfaces, "inv_binary_entropy_upper", lambda h: 1.0)
    with pytest.raises(BoundTheoremError):
        surfaces.beta_max_point(0.5, 0.5)
