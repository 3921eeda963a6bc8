from ftlestream.flops import audit_breakdown, audit_flops, audit_report


def test_deterministic():
    assert audit_flops(2) == audit_flops(2)
    assert audit_flops(3) == audit_flops(3)


def test_monotone_in_dim():
    assert audit_flops(3) > audit_flops(2)


def test_2d_hand_tally():
    # gradient: 2 axis widths + 4 numerator differences (sub), 4 divisions
    # Cauchy-Green: 3 entries x (2 mul + 1 add)
    # eigenvalue: trace add, *0.5, det (2 mul + sub), half_trace^2, disc sub, sqrt, final add
    # FTLE: log, divide by 2|T|
    expected = (2 + 4 + 4) + 3 * 3 + (1 + 1 + 3 + 1 + 1 + 1 + 1) + 2
    assert audit_flops(2) == expected == 30
    stages = audit_breakdown(2)
    assert stages["gradient"] == {"sub": 6, "div": 4}
    assert stages["max_eigen"]["sqrt"] == 1


def test_3d_hand_tally():
    gradient = 3 + 9 + 9
    cauchy_green = 6 * (3 + 2)
    eigen = (5          # off-diagonal squares
             + 3        # trace and /3
             + 3        # deviations from the mean
             + 7        # sum of squares + 2*off
             + 2        # /6, sqrt
             + 6        # scale B
             + 14       # det(B)
             + 1 + 1 + 1  # /2, acos, /3
             + 1 + 1 + 1 + 1)  # 2*p, cos, *, q +
    assert audit_flops(3) == gradient + cauchy_green + eigen + 2 == 100


def test_report_carries_reference():
    r = audit_report(3)
    assert r["reference_flops_per_point"] == 173.1
    assert "derived from reported totals" in r["reference_source"]
