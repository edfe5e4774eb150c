"""Named triangular Levin-type transformations.

Most are the J recursion with a particular divisor family ``δ_n^(k)``; a few
(Levin, Weniger, W, F, Mosig-Michalski) also get their own dedicated
recursions, which the test-suite checks against the generic path.

All functions take the partial sums ``s`` and remainder estimates ``omega``
as equal-length lists in one arithmetic backend, and return a
:class:`~levintype.engine.TransformTable` holding every order the inputs
allow (or up to ``k_max``).
"""

from __future__ import annotations

from math import comb, floor
from typing import Callable, Sequence

from .engine import (
    SINGULAR,
    CoefficientSet,
    TransformTable,
    j_transform,
    j_transform_psi,
    ratio,
    seed,
)
from .errors import DomainError, InputSizeError, SingularPointsError, ZeroEstimateError
from .numcore import Context, Polynomial, context_of, divided_difference, pochhammer

__all__ = [
    "drummond_delta",
    "levin_delta",
    "pj_delta",
    "generalized_levin_delta",
    "w_delta",
    "f_delta",
    "mosig_michalski_delta",
    "levin_phi",
    "levin_psi",
    "pj_phi",
    "pj_psi",
    "weniger_psi",
    "levin_coefficients",
    "drummond_coefficients",
    "weniger_coefficients",
    "f_coefficients",
    "levin",
    "drummond",
    "pj_transform",
    "generalized_levin",
    "weniger",
    "w_algorithm",
    "w_direct",
    "d1_transform",
    "arithmetic_indices",
    "geometric_indices",
    "mosig_michalski",
    "f_transform",
    "f_direct",
    "f_limit",
    "f_limit_coefficients",
    "f_limit_polynomial",
    "aux_shifted",
    "aux_log",
    "aux_inverse_shifted",
    "aux_inverse_log",
    "aux_geometric",
]


def _ctx(*values) -> Context:
    return context_of(*values)


def _p(ctx: Context, x):
    # Always convert: a bare int raised to a negative power would drop to a float.
    return None if x is None else ctx.num(x)


# -- divisor families -------------------------------------------------------

def drummond_delta(ctx: Context | None = None) -> Callable[[int, int], object]:
    one = (ctx or _ctx()).one
    return lambda n, k: one


def levin_delta(beta=1, ctx: Context | None = None) -> Callable[[int, int], object]:
    """``δ_n^(k) = 1/((n+β)(n+β+k+1))``."""
    ctx = ctx or _ctx(beta)
    b, one = _p(ctx, beta), ctx.one
    return lambda n, k: one / ((n + b) * (n + b + k + 1))


def pj_delta(p=2, beta=1, ctx: Context | None = None) -> Callable[[int, int], object]:
    """``δ_n^(k) = 1/(n+β+(p-1)k)_2``."""
    ctx = ctx or _ctx(beta)
    b, pp, one = _p(ctx, beta), _p(ctx, p), ctx.one

    def delta(n, k):
        a = n + b + (pp - 1) * k
        return one / (a * (a + 1))

    return delta


def generalized_levin_delta(alpha, beta=1, ctx: Context | None = None):
    """Divisors for the remainder model in powers of ``(n+β)^{-α}``."""
    ctx = ctx or _ctx(alpha, beta)
    a, b = _p(ctx, alpha), _p(ctx, beta)

    def delta(n, k):
        lo = ctx.power(n + b, a)
        hi = ctx.power(n + b + k + 1, a)
        return (hi - lo) / (lo * hi)

    return delta


def w_delta(t: Sequence) -> Callable[[int, int], object]:
    """``δ_n^(k) = t_{n+k+1} - t_n``."""
    return lambda n, k: t[n + k + 1] - t[n]


def f_delta(x: Sequence) -> Callable[[int, int], object]:
    """Closed-form divisors that turn the J recursion into the F transformation."""

    def delta(n, k):
        out = (x[n + k + 1] - x[n]) / (x[n] + k - 1)
        for j in range(n):
            out = out * ((x[j] + k) * (x[j + k + 1] + k - 1)) / ((x[j] + k - 1) * (x[j + k + 2] + k))
        return out

    return delta


def mosig_michalski_delta(x: Sequence, omega: Sequence) -> Callable[[int, int], object]:
    """Divisors reproducing the weighted-averages recursion inside the J scheme."""

    def delta(n, k):
        return (1 - omega[n] * x[n + 1] ** (2 * k) / (omega[n + 1] * x[n] ** (2 * k))) / x[n] ** 2

    return delta


# -- closed-form Φ and Ψ ----------------------------------------------------

def levin_phi(beta=1, ctx: Context | None = None):
    ctx = ctx or _ctx(beta)
    b = _p(ctx, beta)
    return lambda n, k: (n + b + k + 1) * (n + b + 1) ** (k - 1) / (n + b) ** k


def levin_psi(beta=1, ctx: Context | None = None):
    ctx = ctx or _ctx(beta)
    b = _p(ctx, beta)
    return lambda n, k: (b + n) * (b + n + k) ** (k - 1) / (b + n + k + 1) ** k


def pj_phi(p=2, beta=1, ctx: Context | None = None):
    ctx = ctx or _ctx(beta)
    b, pp = _p(ctx, beta), _p(ctx, p)

    def phi(n, k):
        if pp == 1:
            return ((n + b + 2) / (n + b)) ** k
        return pochhammer((n + b + 2) / (pp - 1), k) / pochhammer((n + b) / (pp - 1), k)

    return phi


def pj_psi(p=2, beta=1, ctx: Context | None = None):
    ctx = ctx or _ctx(beta)
    b, pp = _p(ctx, beta), _p(ctx, p)

    def psi(n, k):
        if pp == 2:
            return ((n + b + k - 1) / (n + b + k + 1)) ** k
        return (pochhammer((n + b + k - 1) / (pp - 2), k)
                / pochhammer((n + b + k + 1) / (pp - 2), k))

    return psi


def weniger_psi(kind: str = "S", beta=1, xi=None, alpha=None, zeta=None,
                ctx: Context | None = None):
    """Ψ factors of the factorial-series transformations S, M and C.

    C is parameterized by ``alpha`` and ``zeta``; S is ``C(1, beta)`` and M is
    ``C(-1, xi)``.  ``Ψ_n^(k)`` multiplies ``N_n^(k)`` when forming order ``k+1``.
    """
    kind = kind.upper()
    ctx = ctx or _ctx(beta, xi, alpha, zeta)
    if kind == "S":
        b = _p(ctx, beta)
        # at k = 0 the closed form is 0/0 for b + n = 1; its value is 1
        return lambda n, k: ctx.one if k == 0 else \
            (b + n + k) * (b + n + k - 1) / ((b + n + 2 * k) * (b + n + 2 * k - 1))
    if kind == "M":
        x = _p(ctx, xi)
        return lambda n, k: (x + n - k + 1) / (x + n + k + 1)
    if kind == "C":
        a, z = _p(ctx, alpha), _p(ctx, zeta)

        def psi(n, k):
            if k == 0:
                return ctx.one
            return ((a * (n + z) + k - 1) * pochhammer(a * (n + z + k), k - 1)
                    / pochhammer(a * (n + z + k + 1), k))

        return psi
    raise DomainError(f"unknown Weniger kind {kind!r}")


# -- explicit coefficient sets ---------------------------------------------

def levin_coefficients(beta=1, ctx: Context | None = None) -> CoefficientSet:
    """``λ_{n,j}^(k) = (-1)^j C(k,j) (n+β+j)^{k-1}/(n+β+k)^{k-1}``."""
    ctx = ctx or _ctx(beta)
    b = _p(ctx, beta)
    return CoefficientSet(
        lambda n, k: [(-1) ** j * comb(k, j) * (n + b + j) ** (k - 1) / (n + b + k) ** (k - 1)
                      for j in range(k + 1)], "levin")


def drummond_coefficients() -> CoefficientSet:
    return CoefficientSet(lambda n, k: [(-1) ** j * comb(k, j) for j in range(k + 1)], "drummond")


def weniger_coefficients(kind: str = "S", beta=1, xi=None, alpha=None, zeta=None,
                         ctx: Context | None = None) -> CoefficientSet:
    kind = kind.upper()
    ctx = ctx or _ctx(beta, xi, alpha, zeta)
    if kind == "S":
        a, z = 1, _p(ctx, beta)
    elif kind == "M":
        a, z = -1, _p(ctx, xi)
    else:
        a, z = _p(ctx, alpha), _p(ctx, zeta)

    def lam(n, k):
        den = pochhammer(a * (n + z + k), k - 1)
        return [(-1) ** j * comb(k, j) * pochhammer(a * (n + z + j), k - 1) / den
                for j in range(k + 1)]

    return CoefficientSet(lam, f"weniger-{kind}")


def f_coefficients(x: Sequence) -> CoefficientSet:
    """Weights of the F transformation for the auxiliary points ``x``."""

    def lam(n, k):
        out = []
        for j in range(k + 1):
            c = pochhammer(x[n + j], k - 1) / pochhammer(x[n], k - 1)
            for i in range(k + 1):
                if i != j:
                    c = c * x[n] / (x[n + j] - x[n + i])
            out.append(c)
        return out

    return CoefficientSet(lam, "F")


# -- transformations ---------------------------------------------------------

def levin(s: Sequence, omega: Sequence, beta=1, k_max: int | None = None) -> TransformTable:
    """Levin transformation by its two-term recursion.

    ``N_n^(k) = N_{n+1}^(k-1) - (β+n)(β+n+k-1)^{k-2}/(β+n+k)^{k-1} N_n^(k-1)``.
    Exact for ``s_n = σ + ω_n Σ_{j<k} c_j/(n+β)^j``.
    """
    ctx = _ctx(s, omega)
    b = _p(ctx, beta)
    if not b > 0:
        raise DomainError("beta must be positive")

    def factor(n, km1):
        k = km1 + 1
        return (b + n) * (b + n + k - 1) ** (k - 2) / (b + n + k) ** (k - 1)

    return j_transform_psi(s, omega, factor, k_max, name="levin")


def drummond(s: Sequence, omega: Sequence, k_max: int | None = None) -> TransformTable:
    """``Δ^k(s/ω)/Δ^k(1/ω)``."""
    return j_transform(s, omega, drummond_delta(_ctx(s, omega)), k_max, name="drummond")


def pj_transform(s: Sequence, omega: Sequence, p=2, beta=1,
                 k_max: int | None = None) -> TransformTable:
    """J recursion with ``δ_n^(k) = 1/(n+β+(p-1)k)_2``."""
    ctx = _ctx(s, omega)
    if not _p(ctx, p) >= 1 or not _p(ctx, beta) > 0:
        raise DomainError("need p >= 1 and beta > 0")
    return j_transform(s, omega, pj_delta(p, beta, ctx), k_max, name=f"pJ{p}")


def generalized_levin(s: Sequence, omega: Sequence, alpha, beta=1,
                      k_max: int | None = None) -> TransformTable:
    ctx = _ctx(s, omega)
    return j_transform(s, omega, generalized_levin_delta(alpha, beta, ctx), k_max,
                       name="generalized-levin")


def weniger(s: Sequence, omega: Sequence, kind: str = "S", beta=1, xi=None, alpha=None,
            zeta=None, k_max: int | None = None) -> TransformTable:
    """Factorial-series transformations S (``beta``), M (``xi``) and C (``alpha``, ``zeta``)."""
    kind = kind.upper()
    ctx = _ctx(s, omega)
    if kind == "S" and not _p(ctx, beta) > 0:
        raise DomainError("beta must be positive")
    if kind == "M" and (xi is None or not _p(ctx, xi) > 0):
        raise DomainError("M needs xi > 0")
    if kind == "C" and (alpha is None or zeta is None):
        raise DomainError("C needs alpha and zeta")
    psi = weniger_psi(kind, beta, xi, alpha, zeta, ctx)
    return j_transform_psi(s, omega, psi, k_max, name=f"weniger-{kind}")


def w_algorithm(s: Sequence, omega: Sequence, t: Sequence,
                k_max: int | None = None) -> TransformTable:
    """W algorithm: divided differences in the points ``t_n``.

    Exact for ``s_n = σ + ω_n Σ_{j<k} c_j t_n^j``.
    """
    if len(t) < len(s):
        raise InputSizeError("need one point t_n per sequence element")
    N, D = seed(s, omega)
    kk = len(N) - 1 if k_max is None else k_max
    if kk > len(N) - 1:
        raise InputSizeError(f"order {kk} needs {kk + 1} values")
    Ns, Ds = [N], [D]
    for k in range(1, kk + 1):
        nN, nD = [], []
        for n in range(len(N) - 1):
            d = t[n + k] - t[n]
            if d == 0:
                raise SingularPointsError(f"t_{n + k} == t_{n}")
            nN.append((N[n + 1] - N[n]) / d)
            nD.append((D[n + 1] - D[n]) / d)
        N, D = nN, nD
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, name="W")


def w_direct(s: Sequence, omega: Sequence, t: Sequence, n: int, k: int):
    """One W cell as a ratio of explicit divided differences."""
    num = divided_difference(t, [a / w for a, w in zip(s, omega)], n, k)
    den = divided_difference(t, [1 / w for w in omega], n, k)
    return ratio(num, den)


def arithmetic_indices(tau: int, count: int) -> list[int]:
    """``ξ_n = τ n``."""
    if tau < 1:
        raise DomainError("tau must be a positive integer")
    return [tau * n for n in range(count)]


def geometric_indices(sigma: float, count: int, start: int = 0) -> list[int]:
    """``ξ_n = ⌊σ ξ_{n-1}⌋ + 1`` starting from ``start``."""
    if not sigma > 1:
        raise DomainError("sigma must exceed 1")
    out = [start]
    while len(out) < count:
        out.append(floor(sigma * out[-1]) + 1)
    return out[:count]


def d1_transform(partial_sums: Sequence, xi: Sequence[int], alpha=1,
                 k_max: int | None = None) -> TransformTable:
    """W algorithm on ``s_{ξ_n}`` with ``ω_n = (ξ_n+α)(s_{ξ_n} - s_{ξ_n-1})``, ``t_n = 1/(ξ_n+α)``.

    ``s_{-1}`` is taken as 0, i.e. the first term equals ``s_0``.
    """
    ctx = _ctx(partial_sums)
    a = _p(ctx, alpha)
    if not a > 0:
        raise DomainError("alpha must be positive")
    for i in range(1, len(xi)):
        if xi[i] <= xi[i - 1]:
            raise DomainError("indices must be strictly increasing")
    if xi and xi[-1] >= len(partial_sums):
        raise InputSizeError(f"index {xi[-1]} beyond {len(partial_sums)} partial sums")
    sub = [partial_sums[m] for m in xi]
    omega = [(m + a) * (partial_sums[m] - (partial_sums[m - 1] if m > 0 else 0)) for m in xi]
    t = [ctx.one / (m + a) for m in xi]
    table = w_algorithm(sub, omega, t, k_max)
    table.name = "d1"
    return table


def mosig_michalski(s: Sequence, omega: Sequence, x: Sequence,
                    k_max: int | None = None) -> TransformTable:
    """Weighted-averages recursion ``s^(k+1) = (s_n^(k) + η s_{n+1}^(k))/(1+η)``.

    ``η_n^(k) = -(ω_n/ω_{n+1}) (x_{n+1}/x_n)^{2k}``.  A cell whose weight sum
    ``1+η`` vanishes is singular, and so is everything computed from it.
    """
    if len(s) != len(omega) or len(x) < len(s):
        raise InputSizeError("s, omega and x must have matching lengths")
    for n, w in enumerate(omega):
        if w == 0:
            raise ZeroEstimateError(n)
    kk = len(s) - 1 if k_max is None else k_max
    if kk > len(s) - 1:
        raise InputSizeError(f"order {kk} needs {kk + 1} values")
    col = list(s)
    cols = [col]
    for k in range(kk):
        nxt = []
        for n in range(len(col) - 1):
            a, b = col[n], col[n + 1]
            if a is SINGULAR or b is SINGULAR:
                nxt.append(SINGULAR)
                continue
            eta = -(omega[n] / omega[n + 1]) * (x[n + 1] / x[n]) ** (2 * k)
            nxt.append(ratio(a + eta * b, 1 + eta))
        col = nxt
        cols.append(col)
    return TransformTable(values=cols, name="mosig-michalski")


def f_transform(s: Sequence, omega: Sequence, x: Sequence,
                k_max: int | None = None) -> TransformTable:
    """F transformation by its two-term recursion.

    Seeds ``N = s/(ω(x-1))``, ``D = 1/(ω(x-1))``; then
    ``N_n^(k) = [(x_{n+k}+k-2) N_{n+1}^(k-1) - (x_n+k-2) N_n^(k-1)]/(x_{n+k}-x_n)``.
    Exact for ``s_n = σ + ω_n Σ_{j<k} c_j/(x_n)_j``.
    """
    if len(x) < len(s):
        raise InputSizeError("need one point x_n per sequence element")
    N, D = seed(s, omega)
    for n in range(len(N)):
        if x[n] == 1:
            raise DomainError(f"x_{n} must differ from 1")
    N = [v / (x[n] - 1) for n, v in enumerate(N)]
    D = [v / (x[n] - 1) for n, v in enumerate(D)]
    kk = len(N) - 1 if k_max is None else k_max
    if kk > len(N) - 1:
        raise InputSizeError(f"order {kk} needs {kk + 1} values")
    Ns, Ds = [N], [D]
    for k in range(1, kk + 1):
        nN, nD = [], []
        for n in range(len(N) - 1):
            d = x[n + k] - x[n]
            if d == 0:
                raise SingularPointsError(f"x_{n + k} == x_{n}")
            hi, lo = x[n + k] + k - 2, x[n] + k - 2
            nN.append((hi * N[n + 1] - lo * N[n]) / d)
            nD.append((hi * D[n + 1] - lo * D[n]) / d)
        N, D = nN, nD
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, name="F")


def f_direct(s: Sequence, omega: Sequence, x: Sequence, n: int, k: int):
    """One F cell as the ratio of divided differences of ``(x)_{k-1} s/ω`` and ``(x)_{k-1}/ω``."""
    m = n + k + 1
    w = [pochhammer(x[i], k - 1) / omega[i] for i in range(m)]
    num = divided_difference(x, [w[i] * s[i] for i in range(m)], n, k)
    den = divided_difference(x, w, n, k)
    return ratio(num, den)


def f_limit(s: Sequence, omega: Sequence, xi, k_max: int | None = None) -> TransformTable:
    """Limiting F transformation: the W algorithm with ``t_n = ξ^{-n}``."""
    ctx = _ctx(s, omega)
    q = _p(ctx, xi)
    if not q > 1:
        raise DomainError("xi must exceed 1")
    t = [q ** (-n) for n in range(len(s))]
    table = w_algorithm(s, omega, t, k_max)
    table.name = "F-limit"
    return table


def f_limit_coefficients(xi, k: int) -> list:
    """``λ̊_j = ξ^{-j} Π_{l≠j} 1/(1-ξ^{l-j})``."""
    out = []
    for j in range(k + 1):
        c = xi ** (-j)
        for l in range(k + 1):
            if l != j:
                c = c / (1 - xi ** (l - j))
        out.append(c)
    return out


def f_limit_polynomial(xi, k: int) -> Polynomial:
    """Product form ``ξ^{k(k+1)/2} Π_{j<k} (1 - z ξ^j)/(ξ^{j+1} - 1)``."""
    poly = Polynomial([xi ** (k * (k + 1) // 2)])
    for j in range(k):
        poly = poly * Polynomial([1 / (xi ** (j + 1) - 1), -xi ** j / (xi ** (j + 1) - 1)])
    return poly


# -- auxiliary point sequences ----------------------------------------------

def aux_shifted(beta, count: int, ctx: Context) -> list:
    """``x_n = n + β``."""
    b = _p(ctx, beta)
    return [n + b for n in range(count)]


def aux_log(a, count: int, ctx: Context, offset=1) -> list:
    """``x_n = offset + ln(n + a)``."""
    a = _p(ctx, a)
    return [offset + ctx.log(n + a) for n in range(count)]


def aux_inverse_shifted(beta, count: int, ctx: Context) -> list:
    """``t_n = 1/(n + β)``."""
    return [ctx.one / x for x in aux_shifted(beta, count, ctx)]


def aux_inverse_log(a, count: int, ctx: Context, offset=1) -> list:
    """``t_n = 1/(offset + ln(n + a))``."""
    return [ctx.one / x for x in aux_log(a, count, ctx, offset)]


def aux_geometric(xi, count: int, ctx: Context) -> list:
    """``t_n = ξ^{-n}``."""
    q = _p(ctx, xi)
    return [q ** (-n) for n in range(count)]
