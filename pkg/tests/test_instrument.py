"""Operation and storage accounting."""

import pytest

from mvinterp.instrument import Tally


def test_ops_accumulate():
    t = Tally()
    assert t.multiply_adds == 0
    t.add_ops(5)
    t.add_ops(12)
    assert t.multiply_adds == 17


def test_alloc_returns_amount_for_symmetric_free():
    t = Tally()
    got = t.alloc(30)
    assert got == 30
    t.free(got)
    assert t.current_reals == 0
    assert t.peak_reals == 30


def test_peak_tracks_high_water_mark():
    t = Tally()
    a = t.alloc(100)
    b = t.alloc(50)
    t.free(b)
    c = t.alloc(20)
    assert t.current_reals == 120
    assert t.peak_reals == 150
    t.free(a)
    t.free(c)
    assert t.current_reals == 0
    assert t.peak_reals == 150


def test_largest_single_alloc():
    t = Tally()
    t.alloc(10)
    t.alloc(400)
    t.alloc(40)
    assert t.largest_single_alloc == 400


def test_report_keys():
    t = Tally()
    t.add_ops(3)
    t.alloc(8)
    report = t.report()
    assert report == {
        "multiply_adds": 3,
        "peak_reals_stored": 8,
        "largest_single_alloc": 8,
    }


def test_free_more_than_allocated_rejected():
    t = Tally()
    t.alloc(5)
    with pytest.raises(ValueError):
        t.free(6)
