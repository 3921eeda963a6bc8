import pytest

from ftlestream import perfmodel
from ftlestream.perfmodel import (
    CATALOG,
    ERRATA,
    REPORTED_FEASIBILITY,
    feasibility_table,
    gflops,
    required_bandwidth,
)


@pytest.mark.parametrize("bits, freq, expected", [
    ((768, 128), 500e6, (48.0, 8.0)),
    ((1152, 192), 357e6, (51.4, 8.6)),
    ((768, 128), 300e6, (28.8, 4.8)),
    ((1152, 192), 300e6, (43.2, 7.2)),
])
def test_required_bandwidth(bits, freq, expected):
    assert required_bandwidth(*bits, freq) == expected


def test_required_bandwidth_homogeneous():
    d, i = required_bandwidth(768, 128, 500e6, ndigits=None)
    d2, i2 = required_bandwidth(768, 128, 1000e6, ndigits=None)
    d3, _ = required_bandwidth(1536, 128, 500e6, ndigits=None)
    assert (d2, i2) == (2 * d, 2 * i)
    assert d3 == 2 * d


def test_desired_bandwidths():
    assert perfmodel.desired_bandwidths() == (56.0, 60.0, 33.6, 50.4)


def test_feasibility_examples():
    grid = feasibility_table()
    assert grid["1ch-ddr4-2400"][0] == 34
    assert grid["hbm-2stack"][2] == 1369
    same = feasibility_table({k: CATALOG[k] for k in ["4ch-ddr4-2400"]}, [76.8] * 4)
    assert same["4ch-ddr4-2400"] == (100, 100, 100, 100)


def test_feasibility_rejects_nonpositive():
    with pytest.raises(ValueError):
        feasibility_table(CATALOG, [56, 0, 1, 1])


def test_feasibility_matches_reported_except_erratum():
    grid = feasibility_table()
    labels = perfmodel.SCENARIO_LABELS
    for name, cells in grid.items():
        for label, got, want in zip(labels, cells, REPORTED_FEASIBILITY[name]):
            if (name, label) in ERRATA:
                assert got == 42 and want == 59
            else:
                assert abs(got - want) <= 1, (name, label)


def test_table2_flags_only_erratum():
    t = perfmodel.table2()
    flagged = [(r["name"], lab) for r in t["rows"] for lab in r["flags"]]
    assert flagged == [("1ch-ddr4-2666", "3D 300 MHz")]


def test_gflops():
    assert gflops(49.2, 500e6) == pytest.approx(24.6, abs=1e-12)
    assert gflops(173.1, 357e6) == pytest.approx(61.8, abs=0.05)
    assert gflops(1, 1e9) == 1.0
    with pytest.raises(ValueError):
        gflops(0, 1e9)


def test_table1_structure():
    t = perfmodel.table1()
    assert t["columns"]["2D"]["bandwidth_max_freq_gbps"] == [48.0, 8.0]
    assert t["columns"]["3D"]["bandwidth_300mhz_gbps"] == [43.2, 7.2]
    assert t["columns"]["3D"]["reported"]["dsp"] == 1012
    assert any("reported, not computed" in n for n in t["notes"])


def test_catalog_unique_positive():
    assert len({t.label for t in CATALOG.values()}) == len(CATALOG)
    assert all(t.peak_gbps > 0 for t in CATALOG.values())
    with pytest.raises(KeyError):
        perfmodel.get_tech("ddr5")
