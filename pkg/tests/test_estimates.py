import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from levintype import transforms
from levintype.errors import DegenerateVariantError, DomainError, ZeroEstimateError
from levintype.estimates import (
    EstimateSeries,
    Variant,
    estimates_at,
    estimates_from_terms,
    make_estimates,
    stieltjes_estimates,
    terms_needed,
)
from levintype.numcore import SequenceSource


def geometric(q, count=12):
    return SequenceSource.from_terms([q ** n for n in range(count)])


def test_term_variants_on_geometric_terms():
    src = geometric(0.5)
    assert list(make_estimates("t", src, 4)) == [1, 0.5, 0.25, 0.125]
    assert list(make_estimates("u", src, 4, beta=1)) == [(n + 1) * 0.5 ** n for n in range(4)]
    v = make_estimates("v", src, 4)
    assert all(abs(v[n] - 0.5 ** (n + 1) / 0.5) < 1e-15 for n in range(4))
    assert list(make_estimates("tt", src, 3)) == [0.5, 0.25, 0.125]


def test_companion_and_k_variants():
    comp = geometric(-0.5)
    lt = make_estimates(Variant("lt", companion=comp), geometric(0.9), 3)
    assert list(lt) == [1, -0.5, 0.25]
    k = make_estimates(Variant("K", companion=comp, limit=1 / 1.5), geometric(0.9), 3)
    assert k[0] == pytest.approx(1 - 1 / 1.5)


def test_variant_validation():
    with pytest.raises(DomainError):
        Variant("w")
    with pytest.raises(DomainError):
        Variant("u", beta=0)
    with pytest.raises(DomainError):
        Variant("lt")
    with pytest.raises(DomainError):
        Variant("K", companion=geometric(0.5))


def test_zero_and_degenerate_estimates():
    with pytest.raises(ZeroEstimateError):
        estimates_from_terms("t", [1.0, 0.0, 1.0], 3)
    with pytest.raises(DegenerateVariantError):
        estimates_from_terms("v", [1.0, 2.0, 2.0, 1.0], 3)
    with pytest.raises(ZeroEstimateError):
        EstimateSeries([1.0, 0.0], "explicit")


def test_terms_needed():
    assert terms_needed("t", 5) == 5 and terms_needed("v", 5) == 6 and terms_needed("ltt", 5) == 6


def test_subsequence_estimates_use_series_indices():
    terms = [0.9 ** n for n in range(40)]
    got = estimates_at("u", terms.__getitem__, [0, 10, 20], beta=1)
    assert got == [1.0, 11 * terms[10], 21 * terms[20]]


def test_stieltjes_estimates():
    euler = [math.factorial(n) for n in range(6)]
    assert stieltjes_estimates(euler, 1, 3)[0] == -1
    assert stieltjes_estimates([1, 1, 1], 0.5, 2)[1] == 0.25
    # they are the t-tilde estimates of sum (-1)^j mu_j z^j
    terms = [(-1) ** j * euler[j] * 0.2 ** j for j in range(6)]
    om = stieltjes_estimates(euler, 0.2, 5)
    assert all(abs(om[n] - terms[n + 1]) < 1e-15 for n in range(5))


@given(st.sampled_from(["t", "u", "v", "tt"]), st.floats(0.1, 10), st.sampled_from([-1, 1]))
def test_output_invariant_under_term_scaling(kind, scale, sign):
    s = [sum((-0.7) ** j / (j + 1) for j in range(n + 1)) for n in range(8)]
    terms = [s[0]] + [s[n] - s[n - 1] for n in range(1, 8)] + [(-0.7) ** 8 / 9]
    base = transforms.levin(s, estimates_from_terms(kind, terms, 8))
    scaled = transforms.levin(s, estimates_from_terms(kind, [sign * scale * a for a in terms], 8))
    for k in range(8):
        assert scaled.T(0, k) == pytest.approx(base.T(0, k), rel=1e-12)
