import cmath
import math
import random

import pytest

from levintype import oscillatory as osc
from levintype import transforms
from levintype.errors import DomainError
from levintype.numcore import forward_difference

import models

ALPHA = 1.1


def problem(seed, count=9, matched=True):
    rng = random.Random(seed)
    s = [rng.uniform(-1, 1) for _ in range(count)]
    flip = -1 if math.cos(ALPHA) > 0 else 1
    w = [(flip ** n if matched else 1) * rng.uniform(0.5, 1.5) for n in range(count)]
    return s, w


def test_h_polynomial():
    p = osc.h_polynomial(ALPHA, 2)
    assert p.degree == 4
    assert p(cmath.exp(1j * ALPHA)) == pytest.approx(0, abs=1e-14)
    assert osc.h_polynomial(math.pi / 2, 1).coefficients == pytest.approx([1, 0, 1])


def test_h_recursion_matches_explicit_form():
    s, w = problem(1)
    table = osc.h_transform(s, w, ALPHA, 1.5)
    for k in range(5):
        for n in range(table.size(k)):
            assert osc.h_explicit(s, w, ALPHA, 1.5, n, k) == pytest.approx(table.T(n, k), rel=1e-12)


def test_h_kernel():
    w = [(-1) ** n * (1 + 0.1 * n) for n in range(7)]
    plus = [0.6 + 0.2j, -0.4 + 0.5j, 0.3 - 0.1j]
    s = [v.real for v in models.h_kernel(0.8, w, ALPHA, 1.0, plus, [c.conjugate() for c in plus])]
    assert osc.h_transform(s, w, ALPHA, 1.0).T(0, 3) == pytest.approx(0.8, rel=1e-12)


def test_generalized_h_special_cases():
    s, w = problem(2)
    pair = [cmath.exp(1j * ALPHA), cmath.exp(-1j * ALPHA)]
    gh = osc.generalized_h(s, w, pair, 1.0)
    h = osc.h_transform(s, w, ALPHA, 1.0)
    for k in range(h.k_max + 1):
        assert complex(gh.T(0, k)) == pytest.approx(h.T(0, k), rel=1e-11)
    q = osc.node_polynomial(pair).coefficients
    assert [complex(c) for c in q] == pytest.approx([1, -2 * math.cos(ALPHA), 1])
    single = osc.generalized_h(s, w, [1.0], 1.0)
    lev = transforms.levin(s, w, 1.0)
    for k in range(lev.k_max + 1):
        assert single.T(0, k) == pytest.approx(lev.T(0, k), rel=1e-11)
    for k in range(3):
        assert osc.generalized_h_explicit(s, w, pair, 1.0, 0, k) == pytest.approx(gh.T(0, k), rel=1e-11)


def test_i_transform_order_one_and_limit_divisors():
    s, w = problem(3)
    table = osc.i_transform(s, w, ALPHA, lambda n, k: 1.0)
    N = [a / b for a, b in zip(s, w)]
    D = [1 / b for b in w]
    c = math.cos(ALPHA)
    op = lambda g: g[2] - 2 * c * g[1] + g[0]
    assert table.T(0, 1) == pytest.approx(op(N) / op(D), rel=1e-13)
    lim = osc.i_limit_delta([1, 2.0, 8.0])
    assert lim(3, 0) == 0.5 ** 3 and lim(2, 1) == 0.25 ** 2
    with pytest.raises(DomainError):
        osc.i_limit_delta([2.0, 1.0])


def test_k_transform():
    w = [1.0, -0.8, 1.2]
    s = [0.3 + w[n] * (0.7 - 0.4 * n) for n in range(3)]
    table = osc.k_transform(s, w, lambda j, n: (1, -2, 1)[j])
    assert table.T(0, 1) == pytest.approx(0.3, rel=1e-14)
    s, w = problem(4)
    c = math.cos(ALPHA)
    delta = lambda n, k: 1.0 + 0.1 * n + k
    kt = osc.k_transform(s, w, lambda j, n: (1, -2 * c, 1)[j], delta)
    it = osc.i_transform(s, w, ALPHA, delta)
    for k in range(it.k_max + 1):
        assert kt.T(0, k) == pytest.approx(it.T(0, k), rel=1e-12)


def test_jd_first_order_is_second_difference():
    s, w = problem(5)
    zeta = osc.jd_power_zeta([-1.5, -2.5, -3.5, -4.5], 1.0)
    table = osc.jd_transform(s, w, zeta)
    sw = [a / b for a, b in zip(s, w)]
    inv = [1 / b for b in w]
    assert table.T(0, 1) == pytest.approx(forward_difference(sw, 2) / forward_difference(inv, 2), rel=1e-13)
    with pytest.raises(DomainError):
        osc.jd_power_zeta([1.0])


def test_jd_nested_kernel_at_order_two():
    w = [(-1) ** n * (1 + 0.2 * n) for n in range(5)]
    zeta = osc.jd_power_zeta([-1.5, -2.5], 1.0)
    s = models.jd_kernel(0.6, w, zeta, [(0.3, -0.5), (0.2, 0.4)])
    assert osc.jd_transform(s, w, zeta).T(0, 2) == pytest.approx(0.6, rel=1e-12)


def _window_respected(build, s, w, width_of):
    base = build(s, w)
    for k in range(1, base.k_max + 1):
        width = width_of(k)
        for n in range(base.size(k)):
            outside = [v if n <= m < n + width else v + 7.0 for m, v in enumerate(s)]
            if build(outside, w).T(n, k) != base.T(n, k):
                return False
            last = list(s)
            last[n + width - 1] += 0.5
            if build(last, w).T(n, k) == base.T(n, k):
                return False
    return True


@pytest.mark.parametrize("name", ["H", "I", "K", "JD", "generalized H"])
def test_cells_read_exactly_their_window(name):
    s, w = problem(6, count=11)
    nodes = [cmath.exp(1j * ALPHA), cmath.exp(-1j * ALPHA), -0.7]
    zeta = osc.jd_power_zeta([-1.5, -2.5, -3.5, -4.5, -5.5], 1.0)
    builders = {
        "H": (lambda a, b: osc.h_transform(a, b, ALPHA, 1.0), lambda k: 2 * k + 1),
        "I": (lambda a, b: osc.i_transform(a, b, ALPHA, lambda n, k: 1.0 + n), lambda k: 2 * k + 1),
        "K": (lambda a, b: osc.k_transform(a, b, lambda j, n: (1, -1.3, 1 + 0.1 * n)[j]), lambda k: 2 * k + 1),
        "JD": (lambda a, b: osc.jd_transform(a, b, zeta), lambda k: 2 * k + 1),
        "generalized H": (lambda a, b: osc.generalized_h(a, b, nodes, 1.0), lambda k: 3 * k + 1),
    }
    build, width = builders[name]
    assert build(s, w).step == (3 if name == "generalized H" else 2)
    assert _window_respected(build, s, w, width)


def test_h_coefficients_row_width():
    rows = osc.h_coefficients(ALPHA, 1.0)
    assert len(rows(0, 3)) == 7
