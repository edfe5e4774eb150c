import math

import mpmath
import pytest

from levintype import transforms
from levintype.engine import SINGULAR
from levintype.errors import DomainError
from levintype.numcore import DOUBLE, make_context
from levintype.serieslab import (
    SeriesSpec,
    digits_metric,
    kummer_estimates_fm,
    reference_value,
    series_coefficients,
    series_source,
    subsequence_device,
    subsequence_indices,
    subsequence_u_estimates,
)

LERCH = SeriesSpec("lerch", q="0.95", eps="-0.1+10j")


def test_log_factor_terms():
    src = series_source(SeriesSpec("log_factor", z=1.2, a=1.01), DOUBLE)
    assert src.term(1) == pytest.approx(1.2 / math.log(1.01))
    assert math.log(1.01) == pytest.approx(9.9503e-3, rel=1e-4)


def test_boys_series_at_zero():
    src = series_source(SeriesSpec("boys", z=0, m=0), DOUBLE)
    assert src.partial_sums(5) == [1.0] * 5


def test_partial_sums_difference_to_terms():
    ctx = make_context(30)
    for spec in (LERCH, SeriesSpec("boys", z=8, m=2), SeriesSpec("log_factor", z="1.2", a="1.01"),
                 SeriesSpec("stieltjes", z="0.1", moments="euler")):
        src = series_source(spec, ctx)
        for n in range(1, 12):
            # the sums are accumulated in working precision: one rounding of s_n
            gap = abs(src.partial_sum(n) - src.partial_sum(n - 1) - src.term(n))
            assert gap <= ctx.eps * abs(src.partial_sum(n))


def test_lerch_converges_linearly_with_ratio_q():
    ctx = make_context(30)
    src = series_source(LERCH, ctx)
    ref = reference_value(LERCH, ctx).value
    r = abs(src.partial_sum(401) - ref) / abs(src.partial_sum(400) - ref)
    assert float(r) == pytest.approx(0.95, abs=2e-3)


def test_references_with_independent_cross_checks():
    boys = reference_value(SeriesSpec("boys", z=8, m=0), make_context(30))
    assert float(boys.value) == pytest.approx(0.3133087, abs=5e-8)
    closed = 0.5 * math.sqrt(math.pi / 8) * math.erf(math.sqrt(8))
    assert float(boys.value) == pytest.approx(closed, rel=1e-14)
    assert boys.claimed_digits >= 25
    lerch = reference_value(LERCH, make_context(40))
    assert lerch.claimed_digits >= 35
    mp = mpmath.mp.clone()
    mp.dps = 40
    assert abs(lerch.value - mp.lerchphi(mp.mpf("0.95"), mp.mpc("-0.1", "10"), 1)) < mp.mpf(10) ** -35
    assert float(reference_value(SeriesSpec("geometric", q=0.5)).value) == 2.0
    lf = reference_value(SeriesSpec("log_factor", z="1.2", a="1.01"), make_context(30))
    assert lf.claimed_digits >= 20


def test_power_coefficients():
    ctx = make_context(20)
    exp = series_coefficients(SeriesSpec("power", z=1, function="exp"), 4, ctx)
    assert [float(c) for c in exp] == [1, 1, 0.5, 1 / 6]
    log1p = series_coefficients(SeriesSpec("power", z=1, function="log1p"), 4, ctx)
    assert [float(c) for c in log1p] == [0, 1, -0.5, 1 / 3]
    euler = series_coefficients(SeriesSpec("stieltjes", z=1, moments="euler"), 4, ctx)
    assert [float(c) for c in euler] == [1, -1, 2, -6]


def test_spec_validation():
    with pytest.raises(DomainError):
        SeriesSpec("bessel")
    with pytest.raises(DomainError):
        SeriesSpec("lerch", q="0.5")
    with pytest.raises(DomainError):
        SeriesSpec("boys", z=1, m=-1)


def test_kummer_estimates_vanish():
    ctx = make_context(30)
    om = kummer_estimates_fm(8, 60, ctx)
    assert abs(om[59]) < 1e-20 and om.kind == "K"
    assert all(abs(om[n + 1]) < abs(om[n]) for n in range(20, 59))


def test_kummer_pj2_and_u_rows():
    ctx = DOUBLE
    spec = SeriesSpec("boys", z=8, m=0)
    src = series_source(spec, ctx)
    s = src.partial_sums(10)
    k_table = transforms.pj_transform(s, list(kummer_estimates_fm(8, 10, ctx)), 2, 1)
    assert k_table.T(0, 9) == pytest.approx(0.3133087, abs=1e-7)
    u = [(n + 1) * src.term(n) for n in range(10)]
    assert transforms.pj_transform(s, u, 2, 1).T(0, 9) == pytest.approx(0.3133083, abs=1e-7)


def test_subsequence_device():
    src = series_source(SeriesSpec("geometric", q=0.5), DOUBLE)
    same = subsequence_device(src, tau=1)
    assert same.partial_sums(5) == src.partial_sums(5)
    sub = subsequence_device(src, tau=3)
    errs = [sub.partial_sum(n) - 2 for n in range(5)]
    assert all(b / a == pytest.approx(0.125) for a, b in zip(errs, errs[1:]))
    geo = subsequence_device(src, sigma=1.3)
    assert geo.partial_sum(7) == src.partial_sum(11)
    assert subsequence_indices(4, tau=10) == [0, 10, 20, 30]
    with pytest.raises(DomainError):
        subsequence_indices(4)
    with pytest.raises(DomainError):
        subsequence_device(src, tau=0)


def test_subsequence_preserves_the_limit():
    ctx = make_context(40)
    src = series_source(LERCH, ctx)
    ref = reference_value(LERCH, ctx).value
    for tau in (1, 10):
        idx = subsequence_indices(25, tau=tau)
        t = transforms.pj_transform([src.partial_sum(m) for m in idx],
                                    list(subsequence_u_estimates(src, idx, 1)), 2, 1)
        first = abs(t.T(0, 4) - ref)
        last = abs(t.T(0, 24) - ref)
        assert last < first


def test_digits_metric():
    ctx = make_context(30)
    assert digits_metric(ctx.num(2), ctx.num(2), ctx) == 30
    assert digits_metric(1.00001, 1.0) == pytest.approx(5.0, abs=1e-6)
    assert digits_metric(SINGULAR, 1.0) == -math.inf
    with pytest.raises(DomainError):
        digits_metric(1.0, 0.0)
