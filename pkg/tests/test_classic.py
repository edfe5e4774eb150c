import math
import random

import pytest

from levintype import classic, transforms
from levintype.engine import SINGULAR, apply_coefficient_set
from levintype.numcore import make_context

import models


def alternating_log_sums(count):
    return [sum((-0.9) ** j / (j + 1) for j in range(n + 1)) for n in range(count)]


ALT_LOG_LIMIT = math.log(1.9) / 0.9


def test_e_algorithm_schemes_agree_with_determinants():
    rng = random.Random(2)
    s = [rng.uniform(-1, 1) for _ in range(8)]
    w = [(-1) ** n * rng.uniform(0.5, 2) for n in range(8)]
    basis = classic.levin_type_basis(w, lambda j, n: (n + 1.0) ** -j)
    for scheme in ("brezinski", "ford_sidi"):
        table = classic.e_algorithm(s, basis, 3, scheme=scheme)
        for k in range(4):
            for n in range(3):
                assert table.T(n, k) == pytest.approx(classic.e_determinant(s, basis, n, k), rel=1e-10)


def test_e_algorithm_with_levin_basis_is_levin():
    rng = random.Random(3)
    s = [rng.uniform(-1, 1) for _ in range(6)]
    w = [(-1) ** n * rng.uniform(0.5, 2) for n in range(6)]
    table = classic.e_algorithm(s, classic.levin_type_basis(w, lambda j, n: (n + 1.0) ** -j), 3)
    rows = transforms.levin_coefficients(1.0)
    for k in range(4):
        assert table.T(0, k) == pytest.approx(apply_coefficient_set(rows, s, w, 0, k), rel=1e-11)


def test_e_algorithm_exact_on_model():
    s = models.exponential_kernel(0.4, [0.7, -0.5], [-0.6, 0.3], 6)
    basis = classic.EBasis(lambda j, n: [-0.6, 0.3][j - 1] ** n)
    assert classic.e_algorithm(s, basis, 2).T(0, 2) == pytest.approx(0.4, rel=1e-13)


def test_epsilon_matches_shanks_basis():
    s = alternating_log_sums(9)
    eps = classic.epsilon_algorithm(s)
    e = classic.e_algorithm(s[:8], classic.shanks_basis(s), 3)
    for k in range(4):
        assert eps.shanks().T(0, k) == pytest.approx(e.T(0, k), rel=1e-10)


def test_epsilon_geometric_and_pade():
    assert classic.epsilon_algorithm([1, 1.5, 1.75]).eps(2, 0) == pytest.approx(2.0, rel=1e-15)
    # [2/1] Pade approximant of 1/(1-z) built from a solved 1x1 system
    z = 1 / 3
    s = [sum(z ** j for j in range(n + 1)) for n in range(4)]
    c = [1, 1, 1, 1]
    q1 = -c[3] / c[2]
    pade = (c[0] + (c[1] + q1 * c[0]) * z + (c[2] + q1 * c[1]) * z * z) / (1 + q1 * z)
    assert classic.epsilon_algorithm(s).eps(2, 1) == pytest.approx(pade, rel=1e-14)


def test_epsilon_odd_columns_are_reciprocal_shanks_of_differences():
    s = alternating_log_sums(8)
    ds = [s[i + 1] - s[i] for i in range(7)]
    eps = classic.epsilon_algorithm(s)
    dshanks = classic.epsilon_algorithm(ds).shanks()
    for n in range(3):
        assert eps.eps(3, n) == pytest.approx(1 / dshanks.T(n, 1), rel=1e-11)


def test_epsilon_near_breakdown_needs_precision():
    # mixed-sign exponential model: double precision loses digits in the
    # recursion itself, high precision on the same inputs recovers the limit
    s = models.exponential_kernel(1.3, [0.08, -0.68, 0.24], [0.64, -0.28, 0.23], 7)
    double_err = abs(classic.epsilon_algorithm(s).shanks().T(0, 3) - 1.3)
    ctx = make_context(60)
    hi = classic.epsilon_algorithm([ctx.num(x) for x in s]).shanks().T(0, 3)
    assert double_err > 1e-10
    assert abs(hi - ctx.num(1.3)) < 1e-14


def test_aitken_kernel_and_acceleration():
    lam, c = -0.6, 0.8
    s = [0.25 + c * lam ** n for n in range(3)]
    assert classic.aitken(s, 0) == pytest.approx(0.25, rel=1e-15)
    t = classic.iterated_aitken(alternating_log_sums(5))
    e1, e2 = abs(t.T(0, 1) - ALT_LOG_LIMIT), abs(t.T(0, 2) - ALT_LOG_LIMIT)
    assert e1 / e2 > 10
    assert classic.iterated_aitken([2.0, 2.0, 2.0]).T(0, 1) is SINGULAR


def test_overholt():
    newton_sqrt2 = [1, 1.5, 17 / 12]
    assert classic.overholt(newton_sqrt2).T(0, 1) == pytest.approx(10 / 7, abs=1e-12)
    x = [0.5]
    for _ in range(8):
        x.append(math.cos(x[-1]))
    fixed = 0.7390851332151607
    table = classic.overholt(x)
    assert abs(table.T(0, 2) - fixed) < abs(x[4] - fixed)
    assert table.column(0) == x


def test_determinant():
    assert classic.determinant([[2, 1], [1, 3]]) == 5
    assert classic.determinant([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == pytest.approx(-3)
