"""Generic Levin-type machinery.

A Levin-type transformation of order ``k`` is the weighted ratio

    T_n^(k) = Σ_j λ_{n,j} s_{n+j}/ω_{n+j}  /  Σ_j λ_{n,j}/ω_{n+j}

This module evaluates it directly from a coefficient set, and through the
J recursion (numerator and denominator tables divided by generalized
differences) in its three equivalent forms.  Tables are built eagerly for
every cell the inputs allow.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

from .errors import DeltaZeroError, InputSizeError, PreconditionError, ZeroEstimateError
from .numcore import Polynomial, context_of

__all__ = [
    "SINGULAR",
    "ratio",
    "TransformTable",
    "seed",
    "j_transform",
    "j_transform_phi",
    "j_transform_psi",
    "phi_from_delta",
    "psi_from_delta",
    "CoefficientSet",
    "coefficient_recursion",
    "apply_coefficient_set",
    "LimitingSet",
    "limiting_coefficients",
]


class _Singular:
    """Marker for a table cell whose denominator vanished."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SINGULAR"

    def __bool__(self):
        return False


SINGULAR = _Singular()


def ratio(num, den, ctx=None):
    """``num/den``, or :data:`SINGULAR` when the quotient is undefined."""
    if den == 0:
        return SINGULAR
    ctx = ctx or context_of(num, den)
    q = num / den
    return q if ctx.isfinite(q) else SINGULAR


class TransformTable:
    """Table of transformed values indexed by start ``n`` and order ``k``.

    ``step`` is the number of extra sequence elements each order consumes:
    1 for triangular schemes, 2 for the H/I/K/JD family, ``M`` for the
    generalized H transformation.  Cell ``(n, k)`` uses ``s_n .. s_{n+step*k}``.
    """

    def __init__(self, numerators: list[list] | None = None,
                 denominators: list[list] | None = None,
                 values: list[list] | None = None, step: int = 1, name: str = ""):
        if values is None:
            if numerators is None or denominators is None:
                raise ValueError("need numerator/denominator columns or values")
            ctx = context_of(numerators[0])
            values = [[ratio(a, b, ctx) for a, b in zip(nc, dc)]
                      for nc, dc in zip(numerators, denominators)]
        self.numerators = numerators
        self.denominators = denominators
        self.values = values
        self.step = step
        self.name = name

    def __repr__(self):
        return f"TransformTable({self.name or 'anonymous'}, k_max={self.k_max}, step={self.step})"

    @property
    def k_max(self) -> int:
        return len(self.values) - 1

    def size(self, k: int) -> int:
        """Number of start indices available in column ``k``."""
        return len(self.values[k]) if 0 <= k <= self.k_max else 0

    def width(self, k: int) -> int:
        """Sequence elements consumed by a cell of order ``k``."""
        return self.step * k + 1

    def has(self, n: int, k: int) -> bool:
        return 0 <= k <= self.k_max and 0 <= n < len(self.values[k])

    def T(self, n: int, k: int):
        if not self.has(n, k):
            raise InputSizeError(f"cell (n={n}, k={k}) not in table")
        return self.values[k][n]

    def N(self, n: int, k: int):
        return self.numerators[k][n]

    def D(self, n: int, k: int):
        return self.denominators[k][n]

    def is_singular(self, n: int, k: int) -> bool:
        return self.T(n, k) is SINGULAR

    def column(self, k: int) -> list:
        return list(self.values[k])

    def diagonal(self) -> list[tuple[int, int]]:
        """Cells ``(0, k)``: the highest order reachable from ``s_0``."""
        return [(0, k) for k in range(self.k_max + 1) if self.has(0, k)]

    def staircase(self) -> list[tuple[int, int]]:
        """Cells using ``s_0 .. s_m`` for ``m = 0, 1, ...``, highest order first.

        For ``step = 2`` this is ``T_{m-2⌊m/2⌋}^{(⌊m/2⌋)}``.
        """
        cells = []
        m = 0
        while True:
            k, n = divmod(m, self.step)
            if not self.has(n, k):
                break
            cells.append((n, k))
            m += 1
        return cells

    def default_path(self) -> list[tuple[int, int]]:
        return self.diagonal() if self.step == 1 else self.staircase()


def seed(s: Sequence, omega: Sequence) -> tuple[list, list]:
    """``N^(0) = s/ω`` and ``D^(0) = 1/ω`` with input validation."""
    if len(s) != len(omega):
        raise InputSizeError(f"{len(s)} sequence values but {len(omega)} estimates")
    if not s:
        raise InputSizeError("empty sequence")
    for n, w in enumerate(omega):
        if w == 0:
            raise ZeroEstimateError(n)
    return [a / w for a, w in zip(s, omega)], [1 / w for w in omega]


def _order_limit(length: int, k_max: int | None, step: int = 1) -> int:
    top = (length - 1) // step
    if k_max is None:
        return top
    if k_max > top:
        raise InputSizeError(f"order {k_max} needs {step * k_max + 1} values, got {length}")
    return k_max


def j_transform(s: Sequence, omega: Sequence, delta: Callable[[int, int], object],
                k_max: int | None = None, name: str = "J") -> TransformTable:
    """J recursion: ``N_n^(k) = (N_{n+1}^(k-1) - N_n^(k-1)) / δ_n^(k-1)``, same for D."""
    N, D = seed(s, omega)
    kk = _order_limit(len(N), k_max)
    Ns, Ds = [N], [D]
    for k in range(1, kk + 1):
        nN, nD = [], []
        for n in range(len(N) - 1):
            d = delta(n, k - 1)
            if d == 0:
                raise DeltaZeroError(n, k - 1)
            nN.append((N[n + 1] - N[n]) / d)
            nD.append((D[n + 1] - D[n]) / d)
        N, D = nN, nD
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, name=name)


def j_transform_phi(s: Sequence, omega: Sequence, phi: Callable[[int, int], object],
                    k_max: int | None = None, name: str = "J/phi") -> TransformTable:
    """Scheme ``N_n^(k) = Φ_n^(k-1) N_{n+1}^(k-1) - N_n^(k-1)``."""
    N, D = seed(s, omega)
    kk = _order_limit(len(N), k_max)
    Ns, Ds = [N], [D]
    for k in range(1, kk + 1):
        f = [phi(n, k - 1) for n in range(len(N) - 1)]
        N = [f[n] * N[n + 1] - N[n] for n in range(len(N) - 1)]
        D = [f[n] * D[n + 1] - D[n] for n in range(len(D) - 1)]
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, name=name)


def j_transform_psi(s: Sequence, omega: Sequence, psi: Callable[[int, int], object],
                    k_max: int | None = None, name: str = "J/psi") -> TransformTable:
    """Scheme ``N_n^(k) = N_{n+1}^(k-1) - Ψ_n^(k-1) N_n^(k-1)``."""
    N, D = seed(s, omega)
    kk = _order_limit(len(N), k_max)
    Ns, Ds = [N], [D]
    for k in range(1, kk + 1):
        f = [psi(n, k - 1) for n in range(len(N) - 1)]
        N = [N[n + 1] - f[n] * N[n] for n in range(len(N) - 1)]
        D = [D[n + 1] - f[n] * D[n] for n in range(len(D) - 1)]
        Ns.append(N)
        Ds.append(D)
    return TransformTable(Ns, Ds, name=name)


def phi_from_delta(delta: Callable[[int, int], object]) -> Callable[[int, int], object]:
    """``Φ_n^(k) = Π_{i<k} δ_n^(i) / δ_{n+1}^(i)`` (so ``Φ_n^(0) = 1``)."""

    def phi(n: int, k: int):
        out = 1
        for i in range(k):
            out = out * delta(n, i) / delta(n + 1, i)
        return out

    return phi


def psi_from_delta(delta: Callable[[int, int], object]) -> Callable[[int, int], object]:
    """``Ψ_n^(k) = Π_i δ_{n+k-i}^(i) / Π_i δ_{n+k-1-i}^(i)`` over ``i < k``."""

    def psi(n: int, k: int):
        out = 1
        for i in range(k):
            out = out * delta(n + k - i, i) / delta(n + k - 1 - i, i)
        return out

    return psi


class CoefficientSet:
    """Weights ``λ_{n,j}^(k)`` as a function ``(n, k) -> [λ_0, ..., λ_k]``."""

    def __init__(self, fn: Callable[[int, int], Sequence], name: str = ""):
        self._fn = lru_cache(maxsize=None)(fn)
        self.name = name

    def __call__(self, n: int, k: int) -> list:
        return list(self._fn(n, k))

    def scaled(self, c: Callable[[int, int], object]) -> "CoefficientSet":
        """Equivalent set with row ``(n, k)`` multiplied by ``c(n, k)``."""
        return CoefficientSet(lambda n, k: [c(n, k) * x for x in self(n, k)], self.name)

    @classmethod
    def constant(cls, rows: Callable[[int], Sequence], name: str = "") -> "CoefficientSet":
        """Set whose weights depend on ``k`` only (a limiting transformation)."""
        return cls(lambda n, k: list(rows(k)), name)


def coefficient_recursion(factor: Callable[[int, int], object], scheme: str = "A",
                          name: str = "") -> CoefficientSet:
    """Coefficients generated alongside the Φ (``A``) or Ψ (``B``) scheme.

    A: ``λ_{n,j}^(k+1) = Φ_n^(k) λ_{n+1,j-1}^(k) - λ_{n,j}^(k)``
    B: ``λ_{n,j}^(k+1) = λ_{n+1,j-1}^(k) - Ψ_n^(k) λ_{n,j}^(k)``
    """
    if scheme not in ("A", "B"):
        raise ValueError("scheme must be 'A' or 'B'")

    @lru_cache(maxsize=None)
    def lam(n: int, k: int) -> tuple:
        if k == 0:
            return (1,)
        prev_n = lam(n, k - 1)
        prev_n1 = lam(n + 1, k - 1)
        f = factor(n, k - 1)
        out = []
        for j in range(k + 1):
            up = prev_n1[j - 1] if j >= 1 else 0
            here = prev_n[j] if j <= k - 1 else 0
            out.append(f * up - here if scheme == "A" else up - f * here)
        return tuple(out)

    return CoefficientSet(lam, name)


def apply_coefficient_set(coeffs: CoefficientSet | Callable, s: Sequence, omega: Sequence,
                          n: int, k: int):
    """Direct weighted-ratio evaluation of one cell (:data:`SINGULAR` if undefined).

    The row ``coeffs(n, k)`` may be longer than ``k + 1`` (order-``2k`` families).
    """
    lam = coeffs(n, k)
    width = len(lam)
    if len(s) < n + width or len(omega) < n + width:
        raise InputSizeError(f"need {n + width} values for cell (n={n}, k={k})")
    num = 0
    den = 0
    for j in range(width):
        w = omega[n + j]
        if w == 0:
            raise ZeroEstimateError(n + j)
        num = num + lam[j] * s[n + j] / w
        den = den + lam[j] / w
    return ratio(num, den)


class LimitingSet:
    """Constant coefficients ``λ̊_j^(k)`` and their characteristic polynomial."""

    def __init__(self, coefficients: list, polynomial: Polynomial):
        self.coefficients = coefficients
        self.polynomial = polynomial

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __repr__(self):
        return f"LimitingSet(k={self.order}, coefficients={self.coefficients!r})"


def limiting_coefficients(phis: Sequence) -> LimitingSet:
    """Limiting weights for ``Φ_0 .. Φ_{k-1}`` from ``Π_j (Φ_j z - 1)``.

    The coefficient of ``z^j`` equals ``(-1)^{k-j}`` times the sum over all
    0/1 tuples with ``j`` ones of ``Π Φ_m^{j_m}``.
    """
    phis = list(phis)
    if phis and phis[0] != 1:
        raise PreconditionError(f"Φ_0 must be 1, got {phis[0]}")
    poly = Polynomial([1])
    for f in phis:
        poly = poly * Polynomial([-1, f])
    return LimitingSet(list(poly.coefficients), poly)
