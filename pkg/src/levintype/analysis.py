"""Diagnostics on coefficient sets: convexity, stability indices, error estimates.

Also builds the rational approximants a Levin-type transformation produces
when applied to the partial sums of a power series.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .engine import SINGULAR, CoefficientSet, TransformTable
from .errors import (
    DegenerateCoefficientError,
    DomainError,
    InsufficientDataError,
    PoleError,
    PreconditionError,
)
from .numcore import DOUBLE, Context, Polynomial, context_of

__all__ = [
    "characteristic_polynomial",
    "moduli",
    "normalize",
    "is_convex",
    "gamma_weights",
    "stability_index",
    "gamma_by_linearity",
    "stability_index_j_positive",
    "j_stability_table",
    "stability_table_by_linearity",
    "limiting_stability_index",
    "limiting_stability_closed_form",
    "a_posteriori_error",
    "RationalApproximant",
    "rational_approximant",
    "taylor_order",
]


def characteristic_polynomial(coeffs: CoefficientSet, n: int, k: int) -> Polynomial:
    """``Π_n^(k)(z) = Σ_j λ_{n,j}^(k) z^j``."""
    lam = coeffs(n, k)
    if lam[-1] == 0:
        raise PreconditionError(f"leading coefficient of row (n={n}, k={k}) vanishes")
    return Polynomial(lam)


def moduli(coeffs: CoefficientSet, n: int, k: int):
    """``μ_n^(k) = max_j |λ_{n,j}^(k)|``."""
    return max(abs(x) for x in coeffs(n, k))


def normalize(coeffs: CoefficientSet) -> CoefficientSet:
    """Equivalent set with every row scaled to modulus 1."""
    return coeffs.scaled(lambda n, k: 1 / moduli(coeffs, n, k))


def is_convex(coeffs: CoefficientSet, n: int, k: int, rtol: float = 1e-12) -> bool:
    """``Π_n^(k)(1) = 0`` up to ``rtol`` times the modulus."""
    lam = coeffs(n, k)
    mu = max(abs(x) for x in lam)
    return abs(sum(lam)) <= rtol * mu


def gamma_weights(coeffs: CoefficientSet, omega: Sequence, n: int, k: int):
    """Normalized weights ``γ_{n,j}^(k)``; :data:`SINGULAR` if ``Σ λ/ω = 0``."""
    parts = _weight_parts(coeffs, omega, n, k)
    total = context_of(*parts).fsum(parts)
    if total == 0:
        return SINGULAR
    return [p / total for p in parts]


def _weight_parts(coeffs: CoefficientSet, omega: Sequence, n: int, k: int) -> list:
    lam = coeffs(n, k)
    if len(omega) < n + len(lam):
        raise InsufficientDataError(f"need {n + len(lam)} estimates")
    return [lam[j] / omega[n + j] for j in range(len(lam))]


def stability_index(coeffs: CoefficientSet, omega: Sequence, n: int, k: int):
    """``Γ_n^(k) = Σ_j |γ_{n,j}^(k)|``.

    Evaluated as ``Σ|λ_j/ω_j| / |Σ λ_j/ω_j|`` with correctly rounded sums, so
    ``Γ >= 1`` holds exactly in floating point and equals 1 when all weights
    share a sign.
    """
    parts = _weight_parts(coeffs, omega, n, k)
    ctx = context_of(*parts)
    total = ctx.fsum(parts)
    if total == 0:
        return SINGULAR
    return ctx.fsum(abs(p) for p in parts) / abs(total)


def gamma_by_linearity(build: Callable[[Sequence, Sequence], TransformTable],
                       omega: Sequence, n: int, k: int, step: int = 1):
    """γ weights of any Levin-type table, read off by transforming unit vectors.

    ``T`` is linear in ``s`` at fixed ``ω``, so ``T_n^(k)(e_{n+j}) = γ_{n,j}^(k)``.
    ``build(s, omega)`` must return the transformation table.
    """
    ctx = context_of(omega)
    width = step * k + 1
    if len(omega) < n + width:
        raise InsufficientDataError(f"need {n + width} estimates")
    out = []
    for j in range(width):
        e = [ctx.zero] * len(omega)
        e[n + j] = ctx.one
        v = build(e, omega).T(n, k)
        if v is SINGULAR:
            return SINGULAR
        out.append(v)
    return out


def stability_table_by_linearity(build: Callable[[Sequence, Sequence], TransformTable],
                                 omega: Sequence) -> list[list]:
    """``Γ_n^(k)`` for every cell of a table that is linear in ``s``.

    One table per unit vector ``e_m`` yields ``γ_{n,m-n}^(k)`` for all cells at
    once.
    """
    ctx = context_of(omega)
    L = len(omega)
    totals = None
    for m in range(L):
        e = [ctx.zero] * L
        e[m] = ctx.one
        tab = build(e, omega)
        if totals is None:
            totals = [[ctx.zero] * tab.size(k) for k in range(tab.k_max + 1)]
        for k, col in enumerate(totals):
            for n in range(len(col)):
                v = tab.T(n, k)
                if v is SINGULAR or col[n] is SINGULAR:
                    col[n] = SINGULAR
                else:
                    col[n] = col[n] + abs(v)
    return totals


def j_stability_table(delta: Callable[[int, int], object], omega: Sequence,
                      k_max: int | None = None) -> list[list]:
    """All ``Γ_n^(k)`` of a J transformation with positive ``δ``.

    Runs ``F_n^(0) = (-1)^n |1/ω_n|`` through the same recursion as the
    denominators; then ``Γ_n^(k) = |F_n^(k)| / |D_n^(k)|``.
    """
    L = len(omega)
    kk = L - 1 if k_max is None else k_max
    D = [1 / w for w in omega]
    F = [(-1) ** m * abs(D[m]) for m in range(L)]
    out = [[abs(f) / abs(d) for f, d in zip(F, D)]]
    for k in range(1, kk + 1):
        nD, nF = [], []
        for m in range(len(D) - 1):
            d = delta(m, k - 1)
            if not d > 0:
                raise PreconditionError(f"delta_{m}^({k - 1}) = {d} is not positive")
            nD.append((D[m + 1] - D[m]) / d)
            nF.append((F[m + 1] - F[m]) / d)
        D, F = nD, nF
        out.append([abs(f) / abs(d) if d != 0 else SINGULAR for f, d in zip(F, D)])
    return out


def stability_index_j_positive(delta: Callable[[int, int], object], omega: Sequence,
                               n: int, k: int):
    """``Γ_n^(k)`` of a J transformation whose ``δ_n^(k)`` are all positive."""
    if len(omega) < n + k + 1:
        raise InsufficientDataError(f"need {n + k + 1} estimates")
    return j_stability_table(delta, omega[: n + k + 1], k)[k][n]


def limiting_stability_index(phis: Sequence, rho):
    """``Π_{j<k} (Φ_j + |ρ|)/|Φ_j - ρ|`` for limiting factors ``Φ_0..Φ_{k-1}``."""
    out = 1
    for j, f in enumerate(phis):
        if f == rho:
            raise PoleError(f"rho coincides with Phi_{j}")
        out = out * (f + abs(rho)) / abs(f - rho)
    return out


def limiting_stability_closed_form(family: str, rho, k: int, tau=None):
    """Closed forms: ``pJ`` (also Levin and S) or ``W`` with ``t_n = τ^{-n}`` style ``Φ_j = τ^{-j}``."""
    if family in ("pJ", "levin", "S"):
        if rho == 1:
            raise PoleError("rho = 1")
        return ((1 + abs(rho)) / abs(1 - rho)) ** k
    if family == "W":
        if tau is None:
            raise DomainError("W closed form needs tau")
        out = 1
        for j in range(k):
            tj = tau ** j
            if tj * rho == 1:
                raise PoleError(f"rho coincides with Phi_{j}")
            out = out * (1 + tj * abs(rho)) / abs(1 - tj * rho)
        return out
    raise DomainError(f"no closed form for family {family!r}")


def a_posteriori_error(table: TransformTable, n: int, k: int):
    """``|T(n+1, k) - T(n, k)| + |T(n, k-1) - T(n, k)|``.

    On the diagonal of a triangular table this is the usual estimate
    ``|T_1^(k) - T_0^(k)| + |T_0^(k-1) - T_0^(k)|``.  For L-shaped tables the
    same two neighbours are used; there it is only a heuristic.
    """
    cells = [(n, k), (n + 1, k), (n, k - 1)]
    vals = []
    for c in cells:
        if not table.has(*c):
            raise InsufficientDataError(f"cell {c} not available")
        v = table.T(*c)
        if v is SINGULAR:
            raise InsufficientDataError(f"cell {c} is singular")
        vals.append(v)
    t, right, below = vals
    return abs(right - t) + abs(below - t)


@dataclass
class RationalApproximant:
    """``P(z)/Q(z)`` produced by a transformation on power-series partial sums.

    ``tau`` is the extra Taylor order the variant guarantees: agreement with
    the series holds through ``z^(n+k+tau)``.
    """

    numerator: Polynomial
    denominator: Polynomial
    variant: str
    n: int
    k: int
    tau: int

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    @property
    def guaranteed_order(self) -> int:
        """Exponent of the leading error term."""
        return self.n + self.k + 1 + self.tau


def _poly(values: Sequence) -> Polynomial:
    return Polynomial(list(values))


def rational_approximant(coeffs: CoefficientSet, c: Sequence, variant: str, n: int, k: int,
                         beta=1, ctx: Context = DOUBLE) -> RationalApproximant:
    """Numerator and denominator polynomials for ``f(z) = Σ c_j z^j``.

    ``variant`` is one of ``t``, ``u``, ``tt``, ``v``.  Writing
    ``ω_n = z^{n+γ} m_n(z)``, the approximant is
    ``Σ_j λ_j z^{k-j} f_{n+j}(z)/m_{n+j}(z)  /  Σ_j λ_j z^{k-j}/m_{n+j}(z)``.
    """
    lam = coeffs(n, k)
    c = [ctx.num(x) for x in c]
    if len(c) < n + k + 2:
        raise InsufficientDataError(f"need {n + k + 2} series coefficients")

    def need(i):
        if c[i] == 0:
            raise DegenerateCoefficientError(f"c_{i} = 0 but variant {variant} divides by it")
        return c[i]

    inv_m = []
    for j in range(k + 1):
        i = n + j
        if variant == "t":
            inv_m.append(_poly([1 / need(i)]))
        elif variant == "u":
            inv_m.append(_poly([1 / (need(i) * (i + ctx.num(beta)))]))
        elif variant == "tt":
            inv_m.append(_poly([1 / need(i + 1)]))
        elif variant == "v":
            inv_m.append(_poly([1 / need(i + 1), -1 / need(i)]))
        else:
            raise DomainError(f"variant {variant!r} has no power-series form")
    P = _poly([ctx.zero])
    Q = _poly([ctx.zero])
    for j in range(k + 1):
        shift = _poly([ctx.zero] * (k - j) + [ctx.one])
        partial = _poly(c[: n + j + 1])
        w = _poly([lam[j]]) * shift * inv_m[j]
        P = P + w * partial
        Q = Q + w
    if Q(ctx.zero) == 0:
        raise DegenerateCoefficientError("denominator vanishes at z = 0")
    if variant == "v":
        tau = 1
    elif variant == "tt":
        tau = 1 if is_convex(coeffs, n, k) else 0
    else:
        tau = 0
    return RationalApproximant(P, Q, variant, n, k, tau)


def taylor_order(approx: Callable, exact: Callable, z_values: Sequence, ctx: Context) -> float:
    """Log-log slope of ``|approx(z) - exact(z)|`` over the smallest two ``z``."""
    a, b = sorted(z_values)[:2]
    ea = abs(approx(ctx.num(a)) - exact(ctx.num(a)))
    eb = abs(approx(ctx.num(b)) - exact(ctx.num(b)))
    if ea == 0 or eb == 0:
        return float("inf")
    return ctx.to_float((ctx.log(eb) - ctx.log(ea)) / (ctx.log(ctx.num(b)) - ctx.log(ctx.num(a))))
