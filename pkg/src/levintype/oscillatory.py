"""Transformations whose order grows by two (or ``M``) sequence elements per step.

These target Fourier-type and recurrence-driven remainders: the H
transformation and its multi-node generalization, the iterated I, K and JD
schemes.  Their tables are L-shaped: cell ``(n, k)`` reads
``s_n .. s_{n+step*k}``.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .engine import CoefficientSet, TransformTable, ratio, seed
from .errors import DeltaZeroError, DomainError, InputSizeError
from .numcore import Context, Polynomial, apply_polynomial_operator, context_of

__all__ = [
    "h_polynomial",
    "h_transform",
    "h_explicit",
    "h_coefficients",
    "node_polynomial",
    "generalized_h",
    "generalized_h_explicit",
    "i_transform",
    "i_limit_delta",
    "k_transform",
    "jd_transform",
    "jd_power_zeta",
]


def _order_limit(length: int, k_max: int | None, step: int) -> int:
    top = (length - 1) // step
    if k_max is None:
        return top
    if k_max > top:
        raise InputSizeError(f"order {k_max} needs {step * k_max + 1} values, got {length}")
    return k_max


def h_polynomial(alpha, k: int, ctx: Context | None = None) -> Polynomial:
    """``(x^2 - 2x cos α + 1)^k``."""
    ctx = ctx or context_of(alpha)
    c = ctx.cos(ctx.num(alpha))
    return Polynomial([ctx.one, -2 * c, ctx.one]) ** k


def h_transform(s: Sequence, omega: Sequence, alpha, beta=1,
                k_max: int | None = None) -> TransformTable:
    """H transformation for a single frequency ``α`` (``cos α ≠ ±1``).

    Seeds ``N_n^(0) = s_n/((n+β) ω_n)``; each order combines three neighbours:
    ``N_n^(k) = (n+β) N_n^(k-1) + (n+2k+β) N_{n+2}^(k-1) - 2cos α (n+k+β) N_{n+1}^(k-1)``.
    """
    ctx = context_of(s, omega)
    a, b = ctx.num(alpha), ctx.num(beta)
    c = ctx.cos(a)
    if c == 1 or c == -1:
        raise DomainError("cos(alpha) must differ from +-1")
    if not b > 0:
        raise DomainError("beta must be positive")
    N, D = seed(s, omega)
    N = [v / (n + b) for n, v in enumerate(N)]
    D = [v / (n + b) for n, v in enumerate(D)]
    kk = _order_limit(len(N), k_max, 2)
    Ns, Ds = [N], [D]
    for k in range(1, kk + 1):
        m = len(N) - 2
        N = [(n + b) * N[n] + (n + 2 * k + b) * N[n + 2] - 2 * c * (n + k + b) * N[n + 1]
             for n in range(m)]
        D = [(n + b) * D[n] + (n + 2 * k + b) * D[n + 2] - 2 * c * (n + k + b) * D[n + 1]
             for n in range(m)]
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, step=2, name="H")


def h_explicit(s: Sequence, omega: Sequence, alpha, beta, n: int, k: int):
    """One H cell through the polynomial operator applied to ``(n+β)^{k-1} s/ω``."""
    ctx = context_of(s, omega)
    b = ctx.num(beta)
    P = h_polynomial(alpha, k, ctx)
    m = n + 2 * k + 1
    if len(s) < m:
        raise InputSizeError(f"need {m} values")
    wts = [(i + b) ** (k - 1) / omega[i] for i in range(m)]
    num = apply_polynomial_operator(P, [wts[i] * s[i] for i in range(m)], n)
    den = apply_polynomial_operator(P, wts, n)
    return ratio(num, den)


def node_polynomial(nodes: Sequence, ctx: Context | None = None) -> Polynomial:
    """``Π_m (x - e_m)``."""
    ctx = ctx or context_of(*nodes)
    return Polynomial.from_roots([ctx.num(e) for e in nodes])


def generalized_h(s: Sequence, omega: Sequence, nodes: Sequence, beta=1,
                  k_max: int | None = None) -> TransformTable:
    """Generalized H transformation for the node vector ``e_1..e_M``.

    ``N_n^(k) = Σ_j q_j (n+β+jk) N_{n+j}^(k-1)`` where ``Σ q_j x^j = Π (x - e_m)``.
    """
    ctx = context_of(s, omega)
    if any(e == 0 for e in nodes):
        raise DomainError("nodes must be nonzero")
    q = node_polynomial(nodes, ctx).coefficients
    M = len(q) - 1
    b = ctx.num(beta)
    N, D = seed(s, omega)
    N = [v / (n + b) for n, v in enumerate(N)]
    D = [v / (n + b) for n, v in enumerate(D)]
    kk = _order_limit(len(N), k_max, M)
    Ns, Ds = [N], [D]
    for k in range(1, kk + 1):
        m = len(N) - M
        N = [sum(q[j] * (n + b + j * k) * N[n + j] for j in range(M + 1)) for n in range(m)]
        D = [sum(q[j] * (n + b + j * k) * D[n + j] for j in range(M + 1)) for n in range(m)]
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, step=M, name="genH")


def generalized_h_explicit(s: Sequence, omega: Sequence, nodes: Sequence, beta, n: int, k: int):
    ctx = context_of(s, omega)
    b = ctx.num(beta)
    P = node_polynomial(nodes, ctx) ** k
    m = n + P.degree + 1
    if len(s) < m:
        raise InputSizeError(f"need {m} values")
    wts = [(i + b) ** (k - 1) / omega[i] for i in range(m)]
    num = apply_polynomial_operator(P, [wts[i] * s[i] for i in range(m)], n)
    den = apply_polynomial_operator(P, wts, n)
    return ratio(num, den)


def _three_term(s, omega, coeff: Callable[[int, int], tuple], divisor: Callable[[int, int], object],
                k_max, name, div_name):
    N, D = seed(s, omega)
    kk = _order_limit(len(N), k_max, 2)
    Ns, Ds = [N], [D]
    for k in range(kk):
        nN, nD = [], []
        for n in range(len(N) - 2):
            c0, c1, c2 = coeff(n, k)
            d = divisor(n, k)
            if d == 0:
                raise DeltaZeroError(n, k, div_name)
            nN.append((c2 * N[n + 2] + c1 * N[n + 1] + c0 * N[n]) / d)
            nD.append((c2 * D[n + 2] + c1 * D[n + 1] + c0 * D[n]) / d)
        N, D = nN, nD
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, step=2, name=name)


def i_transform(s: Sequence, omega: Sequence, alpha, delta: Callable[[int, int], object],
                k_max: int | None = None) -> TransformTable:
    """I transformation: ``N^(k+1) = (N_{n+2} - 2cos α N_{n+1} + N_n)/Δ_n^(k)``."""
    ctx = context_of(s, omega)
    c = ctx.cos(ctx.num(alpha))
    return _three_term(s, omega, lambda n, k: (1, -2 * c, 1), delta, k_max, "I", "Delta")


def i_limit_delta(thetas: Sequence) -> Callable[[int, int], object]:
    """Divisors ``(Θ_k/Θ_{k+1})^n`` of the limiting I transformation (``Θ_0 = 1``)."""
    if thetas[0] != 1:
        raise DomainError("Theta_0 must be 1")
    return lambda n, k: (thetas[k] / thetas[k + 1]) ** n


def k_transform(s: Sequence, omega: Sequence, zeta: Callable[[int, int], object],
                delta: Callable[[int, int], object] | None = None,
                k_max: int | None = None) -> TransformTable:
    """K transformation for the recurrence ``ζ_n^(0) v_n + ζ_n^(1) v_{n+1} + ζ_n^(2) v_{n+2} = 0``.

    ``zeta(j, n)`` returns ``ζ_n^(j)``; each order applies
    ``(ζ_{n+k}^(2) N_{n+2} + ζ_{n+k}^(1) N_{n+1} + ζ_{n+k}^(0) N_n)/Δ̃_n^(k)``.
    ``delta`` defaults to 1.
    """
    for n in range(len(s)):
        if zeta(2, n) == 0:
            raise DomainError(f"zeta^(2) vanishes at n={n}")
    div = delta or (lambda n, k: 1)
    return _three_term(s, omega, lambda n, k: (zeta(0, n + k), zeta(1, n + k), zeta(2, n + k)),
                       div, k_max, "K", "Delta~")


def jd_transform(s: Sequence, omega: Sequence, zeta: Callable[[int, int], object],
                 k_max: int | None = None) -> TransformTable:
    """JD transformation: ``N_n^(k) = Δ^2 N_n^(k-1) / ζ_n^(k-1)``."""
    return _three_term(s, omega, lambda n, k: (1, -2, 1), zeta, k_max, "JD", "zeta")


def jd_power_zeta(exponents: Sequence, beta=1, ctx: Context | None = None):
    """``ζ_n^(k) = Δ^2 (n+β)^{e_k}``; each exponent must avoid 0 and 1."""
    ctx = ctx or context_of(beta)
    b = ctx.num(beta)
    es = [ctx.num(e) for e in exponents]
    for e in es:
        if e == 0 or e == 1:
            raise DomainError("exponents 0 and 1 make the second difference vanish")

    def zeta(n, k):
        e = es[k]
        r = [ctx.power(n + i + b, e) for i in range(3)]
        return r[2] - 2 * r[1] + r[0]

    return zeta


def h_coefficients(alpha, beta=1, ctx: Context | None = None) -> CoefficientSet:
    """Weights ``λ_{n,j}^(k) = p_j (n+β+j)^{k-1}`` of the H transformation (``2k+1`` per row)."""
    ctx = ctx or context_of(alpha, beta)
    b = ctx.num(beta)

    def lam(n, k):
        p = h_polynomial(alpha, k, ctx).coefficients
        return [p[j] * (n + b + j) ** (k - 1) for j in range(len(p))]

    return CoefficientSet(lam, "H")
