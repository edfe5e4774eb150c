"""Classical extrapolation schemes: the E algorithm, Shanks/epsilon, Aitken and Overholt.

Every scheme here returns table cells with :data:`~levintype.engine.SINGULAR`
where a recursion denominator vanished; the marker propagates to every
cell that depends on it.
"""

from __future__ import annotations

from itertools import permutations
from typing import Callable, Sequence

from .engine import SINGULAR, TransformTable
from .errors import InputSizeError
from .numcore import context_of

__all__ = [
    "EBasis",
    "shanks_basis",
    "levin_type_basis",
    "e_algorithm",
    "e_determinant",
    "determinant",
    "EpsilonTable",
    "epsilon_algorithm",
    "aitken",
    "iterated_aitken",
    "overholt",
]


class EBasis:
    """Basis functions ``g_j(n)``, ``j >= 1``, of the model ``s_n = s + Σ_j c_j g_j(n)``.

    ``available(j, n)`` tells whether ``g_j(n)`` can be evaluated; by default
    everything is.
    """

    def __init__(self, g: Callable[[int, int], object],
                 available: Callable[[int, int], bool] | None = None):
        self.g = g
        self.available = available or (lambda j, n: True)

    def __call__(self, j: int, n: int):
        return self.g(j, n)

    def column(self, j: int, count: int) -> list:
        out = []
        for n in range(count):
            if not self.available(j, n):
                break
            out.append(self.g(j, n))
        return out


def shanks_basis(s: Sequence) -> EBasis:
    """``g_j(n) = Δs_{n+j-1}``: the E algorithm then computes Shanks' ``e_k``."""
    return EBasis(lambda j, n: s[n + j] - s[n + j - 1], lambda j, n: n + j < len(s))


def levin_type_basis(omega: Sequence, psi: Callable[[int, int], object]) -> EBasis:
    """``g_j(n) = ω_n ψ_{j-1}(n)`` for a Levin-type model."""
    return EBasis(lambda j, n: omega[n] * psi(j - 1, n), lambda j, n: n < len(omega))


def _lin(a, b, c, d):
    """``a - (b - a)/(d - c) * c`` with singular propagation."""
    if a is SINGULAR or b is SINGULAR or c is SINGULAR or d is SINGULAR:
        return SINGULAR
    den = d - c
    if den == 0:
        return SINGULAR
    return a - (b - a) / den * c


def e_algorithm(s: Sequence, basis: EBasis, k_max: int | None = None,
                scheme: str = "brezinski") -> TransformTable:
    """E algorithm in Brezinski's or Ford and Sidi's form.

    Both compute the same ``E_n^(k)``, exact for ``s_n = s + Σ_{j≤k} c_j g_j(n)``.
    Ford and Sidi's form also reads ``g_{k+1}``.
    """
    if scheme == "brezinski":
        return _e_brezinski(s, basis, k_max)
    if scheme == "ford_sidi":
        return _e_ford_sidi(s, basis, k_max)
    raise ValueError(f"unknown scheme {scheme!r}")


def _e_brezinski(s, basis, k_max):
    L = len(s)
    if not L:
        raise InputSizeError("empty sequence")
    top = L - 1 if k_max is None else k_max
    E = list(s)
    cols = [E]
    G = {i: basis.column(i, L) for i in range(1, top + 1)}
    for k in range(1, top + 1):
        gk = G[k]
        m = min(len(E), len(gk)) - 1
        if m <= 0:
            if k_max is not None:
                raise InputSizeError(f"order {k_max} not reachable with {L} values")
            break
        E = [_lin(E[n], E[n + 1], gk[n], gk[n + 1]) for n in range(m)]
        cols.append(E)
        for i in range(k + 1, top + 1):
            gi = G[i]
            mi = min(m, len(gi) - 1)
            G[i] = [_lin(gi[n], gi[n + 1], gk[n], gk[n + 1]) for n in range(max(mi, 0))]
    return TransformTable(values=cols, name="E")


def _e_ford_sidi(s, basis, k_max):
    L = len(s)
    if not L:
        raise InputSizeError("empty sequence")
    top = L - 1 if k_max is None else k_max
    g1 = basis.column(1, L)
    if not g1:
        raise InputSizeError("g_1 unavailable")
    ctx = context_of(s)

    def start(u):
        return [u[n] / g1[n] if g1[n] != 0 else SINGULAR for n in range(min(len(u), len(g1)))]

    psi_s = start(list(s))
    psi_1 = start([ctx.one] * L)
    psi_g = {i: start(basis.column(i, L)) for i in range(2, top + 2)}
    cols = [list(s[: len(psi_s)])]
    for k in range(1, top + 1):
        pg = psi_g[k + 1]
        m = min(len(psi_s), len(pg)) - 1
        if m <= 0:
            if k_max is not None:
                raise InputSizeError(f"order {k_max} not reachable with {L} values")
            break

        def step(u, m=m, pg=pg):
            out = []
            for n in range(min(m, len(u) - 1)):
                if SINGULAR in (u[n], u[n + 1], pg[n], pg[n + 1]) or pg[n + 1] == pg[n]:
                    out.append(SINGULAR)
                else:
                    out.append((u[n + 1] - u[n]) / (pg[n + 1] - pg[n]))
            return out

        new_g = {i: step(psi_g[i]) for i in range(k + 2, top + 2)}
        psi_s, psi_1 = step(psi_s), step(psi_1)
        psi_g.update(new_g)
        cols.append([SINGULAR if a is SINGULAR or b is SINGULAR or b == 0 else a / b
                     for a, b in zip(psi_s, psi_1)])
    return TransformTable(values=cols, name="E/ford-sidi")


def determinant(M: Sequence[Sequence]):
    """Exact Leibniz expansion; meant for matrices up to about 5x5."""
    size = len(M)
    total = 0
    for perm in permutations(range(size)):
        sign = 1
        seen = list(perm)
        for i in range(size):
            for j in range(i + 1, size):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i, p in enumerate(perm):
            term = term * M[i][p]
        total = total + term
    return total


def e_determinant(s: Sequence, basis: EBasis, n: int, k: int):
    """``E_n^(k)`` as a ratio of ``(k+1)``-square determinants (small ``k`` only)."""
    if k > 4:
        raise ValueError("determinant oracle limited to k <= 4")
    rows_g = [[basis(j, n + i) for i in range(k + 1)] for j in range(1, k + 1)]
    num = determinant([[s[n + i] for i in range(k + 1)]] + rows_g)
    den = determinant([[1] * (k + 1)] + rows_g)
    return SINGULAR if den == 0 else num / den


class EpsilonTable:
    """Columns ``ε_k^(n)`` for ``k = -1, 0, 1, ...``; odd ``k`` are auxiliary."""

    def __init__(self, columns: list[list]):
        self.columns = columns

    @property
    def k_max(self) -> int:
        return len(self.columns) - 2

    def eps(self, k: int, n: int):
        return self.columns[k + 1][n]

    def shanks(self) -> TransformTable:
        """Even columns: cell ``(n, k)`` is ``e_k(s_n)``, built from ``s_n .. s_{n+2k}``."""
        return TransformTable(values=[list(c) for c in self.columns[1::2]], step=2, name="epsilon")


def epsilon_algorithm(s: Sequence, k_max: int | None = None) -> EpsilonTable:
    """Wynn's ``ε_{k+1}^(n) = ε_{k-1}^(n+1) + 1/(ε_k^(n+1) - ε_k^(n))``.

    ``k_max`` counts epsilon columns (so Shanks' ``e_k`` needs ``2k``).
    """
    if not s:
        raise InputSizeError("empty sequence")
    ctx = context_of(s)
    cols = [[ctx.zero] * (len(s) + 1), list(s)]
    top = len(s) - 1 if k_max is None else k_max
    if top > len(s) - 1:
        raise InputSizeError(f"{top} epsilon columns need {top + 1} values")
    for _ in range(top):
        prev, cur = cols[-2], cols[-1]
        nxt = []
        for n in range(len(cur) - 1):
            a, b, c = prev[n + 1], cur[n + 1], cur[n]
            if SINGULAR in (a, b, c) or b == c:
                nxt.append(SINGULAR)
            else:
                nxt.append(a + 1 / (b - c))
        cols.append(nxt)
    return EpsilonTable(cols)


def aitken(s: Sequence, n: int):
    """Aitken's Δ² value ``s_n - (Δs_n)^2/Δ^2 s_n``."""
    return _aitken_step(s[n], s[n + 1], s[n + 2])


def _aitken_step(a, b, c):
    if SINGULAR in (a, b, c):
        return SINGULAR
    d2 = c - 2 * b + a
    if d2 == 0:
        return SINGULAR
    return a - (b - a) ** 2 / d2


def iterated_aitken(s: Sequence, depth: int | None = None) -> TransformTable:
    """``A^(k+1)_n = A^(k)_n - (ΔA^(k)_n)^2/Δ^2 A^(k)_n`` with ``A^(0) = s``."""
    if not s:
        raise InputSizeError("empty sequence")
    top = (len(s) - 1) // 2 if depth is None else depth
    if 2 * top + 1 > len(s):
        raise InputSizeError(f"depth {top} needs {2 * top + 1} values")
    A = list(s)
    cols = [A]
    for _ in range(top):
        A = [_aitken_step(A[n], A[n + 1], A[n + 2]) for n in range(len(A) - 2)]
        cols.append(A)
    return TransformTable(values=cols, step=2, name="aitken")


def overholt(s: Sequence, k_max: int | None = None) -> TransformTable:
    """Overholt's process for linearly convergent fixed-point iterates.

    ``V_n^(k) = ((Δs_{n+k-1})^k V_{n+1}^(k-1) - (Δs_{n+k})^k V_n^(k-1))
    / ((Δs_{n+k-1})^k - (Δs_{n+k})^k)``; cell ``(n, k)`` reads ``s_n .. s_{n+k+1}``.
    """
    if not s:
        raise InputSizeError("empty sequence")
    ds = [s[i + 1] - s[i] for i in range(len(s) - 1)]
    top = len(s) - 2 if k_max is None else k_max
    if top > max(len(s) - 2, 0):
        raise InputSizeError(f"order {top} needs {top + 2} values")
    V = list(s)
    cols = [V]
    for k in range(1, top + 1):
        nxt = []
        for n in range(len(s) - k - 1):
            a, b = V[n + 1], V[n]
            wa, wb = ds[n + k - 1] ** k, ds[n + k] ** k
            if a is SINGULAR or b is SINGULAR or wa == wb:
                nxt.append(SINGULAR)
            else:
                nxt.append((wa * a - wb * b) / (wa - wb))
        V = nxt
        cols.append(V)
    return TransformTable(values=cols, name="overholt")
