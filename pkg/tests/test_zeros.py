import math

import pytest

from eta_embed.errors import (ConvergenceError, DomainError, UsageError,
                              WindingError, ZeroOnBoundaryError)
from eta_embed.eta_core import eta
from eta_embed.zeros import (Rect, ZeroRecord, count_zeros_rect, find_zeros,
                             quartet_check, refine_zero, refine_zero_bisect,
                             rounded_winding, scan_critical_line,
                             winding_number, zeros_from_json, zeros_to_csv,
                             zeros_to_json)

LN2 = math.log(2)


@pytest.fixture(scope="module")
def window_zeros():
    return find_zeros(10, 30)


# -- scanning ---------------------------------------------------------------------

def test_scan_candidates_near_known_zeros(first_zeros):
    cands = scan_critical_line(10, 30)
    assert len(cands) == 3
    for c, t in zip(cands, first_zeros):
        assert abs(c - t) < 0.05


def test_scan_below_first_zero_is_empty():
    assert scan_critical_line(1, 10) == []


def test_scan_single_candidate():
    cands = scan_critical_line(13, 15)
    assert len(cands) == 1 and abs(cands[0] - 14.13) < 0.05


@pytest.mark.parametrize("args", [(0, 10), (10, 5), (10, 61), (10, 20, 0.2), (10, 20, 0)])
def test_scan_argument_checks(args):
    with pytest.raises(UsageError):
        scan_critical_line(*args)


# -- refinement ------------------------------------------------------------------------

def test_newton_matches_mpmath_zeros(first_zeros):
    for t in first_zeros:
        z = refine_zero(round(t, 1))
        assert abs(z.t - t) < 1e-10
        assert abs(z.sigma - 0.5) < 1e-10
        assert z.residual < 1e-9
        assert z.method == "newton" and z.iterations <= 10


def test_bisection_agrees_with_newton(first_zeros):
    for t in first_zeros:
        zb = refine_zero_bisect(round(t, 1))
        assert zb.method == "bisect"
        assert abs(zb.t - t) < 1e-10
        assert abs(zb.t - refine_zero(round(t, 1)).t) < 1e-10


def test_bisection_without_sign_change_fails():
    with pytest.raises(ConvergenceError):
        refine_zero_bisect(5.0, half_width=0.5)


def test_newton_reports_trace_on_failure():
    with pytest.raises(ConvergenceError) as info:
        refine_zero(14.0, sigma0=1e6)
    assert info.value.trace


def test_find_zeros_window(window_zeros, first_zeros):
    assert [round(z.t, 6) for z in window_zeros] == [14.134725, 21.02204, 25.010858]
    for z, t in zip(window_zeros, first_zeros):
        assert abs(z.t - t) < 1e-5
        assert abs(z.sigma - 0.5) < 1e-6


def test_find_zeros_up_to_cap():
    zs = find_zeros(10, 60)
    assert len(zs) == 13
    assert all(0 < z.sigma < 1 and z.residual < 1e-9 for z in zs)
    assert [z.t for z in zs] == sorted(z.t for z in zs)


# -- argument principle --------------------------------------------------------------------

@pytest.mark.parametrize("rect,count", [
    (Rect(0.01, 0.99, 10, 30), 3),
    (Rect(0.01, 0.99, 1, 10), 0),
    (Rect(0.01, 0.99, 13, 15), 1),
    (Rect(-5, -3, -1, 1), 1),
    (Rect(-0.5, 1.5, 10, 30), 5),
    (Rect(-0.5, 1.5, 1, 10), 1),
])
def test_rectangle_counts(rect, count):
    w = winding_number(rect)
    assert abs(w - round(w)) < 0.05
    assert count_zeros_rect(rect) == count


def test_counts_agree_with_line_search(window_zeros):
    # all strip zeros found in the window lie on the line
    assert count_zeros_rect(Rect(0.01, 0.99, 10, 30)) == len(window_zeros)


def test_trivial_zeros_on_strip_edge_are_reported():
    # eta vanishes at 1 + 2 pi i n / ln 2, e.g. t = 9.06 and 18.13, on sigma = 1
    assert abs(eta(1 + 2j * math.pi / LN2).value) < 1e-8
    with pytest.raises(ZeroOnBoundaryError):
        count_zeros_rect(Rect(0, 1, 10, 30))
    with pytest.raises(ZeroOnBoundaryError):
        count_zeros_rect(Rect(0, 1, 1, 10))


def test_edge_through_known_zero(first_zeros):
    with pytest.raises(ZeroOnBoundaryError):
        count_zeros_rect(Rect(0.2, 0.8, first_zeros[0], 16))


def test_rounded_winding():
    assert rounded_winding(2.97) == 3
    with pytest.raises(WindingError):
        rounded_winding(2.9)


@pytest.mark.parametrize("text", ["1,2,3", "1,0,3,4", "a,b,c,d", "0,1,5,5", "0,inf,1,2"])
def test_rect_parse_errors(text):
    with pytest.raises(UsageError):
        Rect.parse(text)


def test_rect_parse():
    assert Rect.parse("-5,-3,-1,1") == Rect(-5, -3, -1, 1)


# -- quartet ---------------------------------------------------------------------------------

def test_quartet_at_zero(window_zeros):
    for z in window_zeros:
        assert max(quartet_check(z)) < 1e-9


def test_quartet_at_trivial_zero():
    q = quartet_check(-2)
    assert q[0] < 1e-10 and q[2] < 1e-10
    assert abs(q[1] - abs(eta(3).value)) < 1e-12 and abs(q[1] - q[3]) < 1e-15


def test_quartet_generic_point_equal_moduli_on_line():
    q = quartet_check(0.5 + 10j)
    assert min(q) > 1
    assert max(q) - min(q) < 1e-12


# -- export --------------------------------------------------------------------------------------

def test_csv_and_json_round_trip(window_zeros):
    csv_text = zeros_to_csv(window_zeros)
    lines = csv_text.strip().split("\n")
    assert lines[0] == "sigma,t,residual,method,iterations"
    assert len(lines) == 4
    assert float(lines[1].split(",")[1]) == window_zeros[0].t
    assert zeros_from_json(zeros_to_json(window_zeros)) == window_zeros


def test_json_malformed():
    with pytest.raises(DomainError):
        zeros_from_json('[{"sigma": 0.5}]')


def test_zero_record_point():
    assert ZeroRecord(0.5, 14.1, 0.0, "newton", 3).s == 0.5 + 14.1j
