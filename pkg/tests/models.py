"""Model sequences on which a transformation is exact.

Each builder evaluates the closed nested-sum form of a kernel directly, so
it does not share code with the recursions under test.
"""

from __future__ import annotations

import cmath
import math


def nested_sum_psi(delta, j: int, n: int):
    """``Σ_{n>n1>...>nj} δ(n1,0) δ(n2,1) ... δ(nj,j-1)`` (1 for ``j = 0``)."""
    if j == 0:
        return 1.0
    # innermost index first: level[m] is the partial product summed over deeper indices
    level = [delta(m, j - 1) for m in range(n)]
    for depth in range(j - 1, 0, -1):
        running, nxt = 0.0, []
        for m in range(n):
            nxt.append(delta(m, depth - 1) * running)
            running += level[m]
        level = nxt
    return sum(level)


def j_kernel(sigma, omega, delta, consts):
    """``σ + ω_n Σ_j c_j ψ_j(n)`` with nested-sum ``ψ_j`` built from ``δ``."""
    return [sigma + w * sum(c * nested_sum_psi(delta, j, n) for j, c in enumerate(consts))
            for n, w in enumerate(omega)]


def basis_kernel(sigma, omega, consts, psi):
    """``σ + ω_n Σ_j c_j ψ(j, n)`` for an explicit basis ``ψ``."""
    return [sigma + w * sum(c * psi(j, n) for j, c in enumerate(consts)) for n, w in enumerate(omega)]


def rising(a, j: int):
    out = 1.0
    for i in range(j):
        out *= a + i
    return out


def h_kernel(sigma, omega, alpha, beta, plus, minus):
    """``σ + ω_n [e^{iαn} Σ c+_j/(n+β)^j + e^{-iαn} Σ c-_j/(n+β)^j]``."""
    out = []
    for n, w in enumerate(omega):
        a = sum(c / (n + beta) ** j for j, c in enumerate(plus))
        b = sum(c / (n + beta) ** j for j, c in enumerate(minus))
        out.append(sigma + w * (cmath.exp(1j * alpha * n) * a + cmath.exp(-1j * alpha * n) * b))
    return out


def multi_node_kernel(sigma, omega, nodes, beta, consts):
    """``σ + ω_n Σ_m e_m^n Σ_j c_{m,j}/(n+β)^j``."""
    return [sigma + w * sum(e ** n * sum(c / (n + beta) ** j for j, c in enumerate(cs))
                            for e, cs in zip(nodes, consts))
            for n, w in enumerate(omega)]


def i_kernel(sigma, omega, alpha, divisor, consts):
    """I-transformation model sequence of order ``len(consts)//2``.

    ``consts = d_0 .. d_{2k-1}``.  Level ``L`` sums over ``n > n_1 > ... > n_{2L}``
    the phase ``exp(2iα(n_1 - n_2 + ... - n_{2L}))`` times
    ``(d_{2L} + d_{2L+1} e^{2iα n_{2L}})`` and the divisors
    ``Δ^{(j)}`` at the even indices ``n_{2j+2}``.
    """
    k = len(consts) // 2
    N = len(omega)

    def e2(m, sign=1):
        return cmath.exp(sign * 2j * alpha * m)

    def level_sum(L):
        # F[m]: weight of the deepest index n_{2L} = m, then fold outward
        F = [e2(m, -1) * (consts[2 * L] + consts[2 * L + 1] * e2(m)) * divisor(m, L - 1)
             for m in range(N)]
        for i in range(2 * L - 1, 0, -1):
            running, nxt = 0.0, []
            for m in range(N):
                w = e2(m) if i % 2 else e2(m, -1) * divisor(m, i // 2 - 1)
                nxt.append(w * running)
                running += F[m]
            F = nxt
        out, running = [], 0.0
        for m in range(N):
            out.append(running)
            running += F[m]
        return out

    levels = [level_sum(L) for L in range(1, k)]
    seq = []
    for n, w in enumerate(omega):
        acc = consts[0] + consts[1] * e2(n) + sum(lv[n] for lv in levels)
        seq.append(sigma + cmath.exp(-1j * alpha * n) * w * acc)
    return seq


def jd_kernel(sigma, omega, zeta, lines):
    """JD model sequence from ``lines = [(a_0, b_0), ..., (a_{k-1}, b_{k-1})]``.

    ``E^(k-1)_n = a n + b``; ``E^(l)_n = a_l n + b_l + Σ_{j=0}^{n-2} Σ_{n'=0}^{j} ζ_{n'}^(l) E^(l+1)_{n'}``;
    then ``σ_n = σ + ω_n E^(0)_n``.
    """
    N = len(omega)
    a, b = lines[-1]
    E = [a * n + b for n in range(N)]
    for level in range(len(lines) - 2, -1, -1):
        a, b = lines[level]
        src = [zeta(m, level) * E[m] for m in range(N)]
        E = [a * n + b + sum(src[m] for j in range(n - 1) for m in range(j + 1)) for n in range(N)]
    return [sigma + w * e for w, e in zip(omega, E)]


def exponential_kernel(sigma, consts, ratios, count):
    """``σ + Σ_j c_j λ_j^n``."""
    return [sigma + sum(c * lam ** n for c, lam in zip(consts, ratios)) for n in range(count)]


def ulps(value, target) -> float:
    """``|value - target|`` in units of the last place of ``|target|``."""
    return abs(value - target) / math.ulp(abs(target))
