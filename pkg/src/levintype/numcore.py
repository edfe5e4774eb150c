"""Scalars, sequences and the finite-difference operators everything else uses.

Two arithmetic backends exist: native Python floats/complex (``DOUBLE``) and
mpmath at a chosen number of decimal digits.  Each high-precision
:class:`Context` owns a private ``mpmath.MPContext`` so that two experiments
at different precisions never interfere through mpmath's global state.
"""

from __future__ import annotations

import cmath
import math
from math import comb
from typing import Callable, Iterable, Sequence

from mpmath.ctx_mp import MPContext

from .errors import DomainError, InputSizeError, SingularPointsError

__all__ = [
    "Context",
    "DOUBLE",
    "make_context",
    "context_of",
    "SequenceSource",
    "Polynomial",
    "forward_difference",
    "divided_difference",
    "divided_difference_recursive",
    "apply_polynomial_operator",
    "pochhammer",
]


class Context:
    """Arithmetic backend.

    ``Context()`` is native double precision.  ``Context(dps=64)`` computes
    with 64 significant decimal digits through a private mpmath context.
    """

    def __init__(self, dps: int | None = None, mp: MPContext | None = None):
        if mp is None and dps is not None:
            if dps < 1:
                raise DomainError(f"precision must be positive, got {dps}")
            mp = MPContext()
            mp.dps = dps
        self.mp = mp

    def __repr__(self):
        return "Context(double)" if self.mp is None else f"Context(dps={self.mp.dps})"

    def __eq__(self, other):
        return isinstance(other, Context) and self.mp is other.mp

    def __hash__(self):
        return hash(id(self.mp))

    @property
    def is_double(self) -> bool:
        return self.mp is None

    @property
    def dps(self) -> int:
        """Working decimal digits (15 for native doubles)."""
        return 15 if self.mp is None else self.mp.dps

    @property
    def eps(self):
        return self.num(2.0**-52) if self.mp is None else self.mp.eps

    @property
    def one(self):
        return self.num(1)

    @property
    def zero(self):
        return self.num(0)

    @property
    def pi(self):
        return math.pi if self.mp is None else +self.mp.pi

    def num(self, x):
        """Convert ints, floats, complex values or numeric strings to this backend."""
        if self.mp is None:
            if isinstance(x, str):
                x = _parse_complex(x)
            if isinstance(x, complex) or _is_mp_complex(x):
                z = complex(x)
                return z.real if z.imag == 0 else z
            return float(x)
        if isinstance(x, str):
            x = x.strip().replace("i", "j")
            if "j" in x:
                z = _parse_complex_mp(self.mp, x)
                return z
            return self.mp.mpf(x)
        if isinstance(x, complex):
            return self.mp.mpc(x.real, x.imag) if x.imag else self.mp.mpf(x.real)
        if isinstance(x, int):
            return self.mp.mpf(x)
        return self.mp.convert(x)

    def nums(self, values: Iterable) -> list:
        return [self.num(v) for v in values]

    def _f(self, name: str, x):
        if self.mp is not None:
            return getattr(self.mp, name)(x)
        if isinstance(x, complex):
            return getattr(cmath, name)(x)
        return getattr(math, name)(x)

    def log(self, x):
        if self.mp is None and not isinstance(x, complex) and x < 0:
            return cmath.log(x)
        return self._f("log", x)

    def exp(self, x):
        return self._f("exp", x)

    def cos(self, x):
        return self._f("cos", x)

    def sin(self, x):
        return self._f("sin", x)

    def sqrt(self, x):
        if self.mp is None and not isinstance(x, complex) and x < 0:
            return cmath.sqrt(x)
        return self._f("sqrt", x)

    def expj(self, x):
        """exp(i x)."""
        if self.mp is not None:
            return self.mp.expj(x)
        return cmath.exp(1j * x)

    def power(self, x, y):
        if self.mp is not None:
            return self.mp.power(x, y)
        if isinstance(x, complex) or isinstance(y, complex) or (x < 0 and y != int(y)):
            return complex(x) ** y
        return x**y

    def log10(self, x):
        """Real base-10 logarithm of a positive real."""
        if self.mp is not None:
            return self.mp.log10(x)
        return math.log10(x)

    def isfinite(self, x) -> bool:
        if self.mp is not None:
            return bool(self.mp.isfinite(x))
        if isinstance(x, complex):
            return cmath.isfinite(x)
        return math.isfinite(x)

    def to_float(self, x) -> float:
        return float(x.real) if _is_mp_complex(x) or isinstance(x, complex) else float(x)

    def fsum(self, values: Iterable):
        values = list(values)
        if self.mp is not None:
            return self.mp.fsum(values)
        if any(isinstance(v, complex) for v in values):
            return complex(math.fsum(v.real for v in map(complex, values)),
                           math.fsum(v.imag for v in map(complex, values)))
        return math.fsum(values)


def _is_mp_complex(x) -> bool:
    return type(x).__name__ == "mpc"


def _parse_complex(text: str):
    t = text.strip().replace("i", "j").replace(" ", "")
    z = complex(t)
    return z.real if z.imag == 0 and "j" not in t else z


def _parse_complex_mp(mp: MPContext, text: str):
    # Split "a+bj" at the last sign that is not part of an exponent.
    t = text.replace(" ", "").rstrip("j")
    for pos in range(len(t) - 1, 0, -1):
        if t[pos] in "+-" and t[pos - 1] not in "eE":
            re, im = t[:pos], t[pos:]
            break
    else:
        re, im = "0", t
    if im in ("+", "-", ""):
        im += "1"
    return mp.mpc(mp.mpf(re), mp.mpf(im))


DOUBLE = Context()


def make_context(precision=None) -> Context:
    """Build a backend from ``None``/``"double"`` or a digit count."""
    if precision is None or precision == "double":
        return DOUBLE
    if isinstance(precision, str):
        precision = int(precision)
    return Context(dps=int(precision))


def context_of(*values) -> Context:
    """Backend that produced ``values`` (mpmath numbers carry their context)."""
    for v in values:
        if isinstance(v, (list, tuple)):
            if v:
                c = context_of(*v[:1])
                if not c.is_double:
                    return c
            continue
        mp = getattr(v, "context", None)
        if isinstance(mp, MPContext):
            return Context(mp=mp)
    return DOUBLE


class SequenceSource:
    """Pure, cached provider of partial sums ``s_n`` and terms ``a_n``.

    Build from a term function (partial sums are accumulated), a partial-sum
    function (terms are differenced, ``a_0 = s_0``), or both.
    """

    def __init__(self, term: Callable[[int], object] | None = None,
                 partial_sum: Callable[[int], object] | None = None,
                 ctx: Context = DOUBLE, length: int | None = None):
        if term is None and partial_sum is None:
            raise ValueError("need a term or a partial-sum function")
        self.ctx = ctx
        self.length = length
        self._term_fn = term
        self._sum_fn = partial_sum
        self._sums: list = []
        self._terms: dict[int, object] = {}

    @classmethod
    def from_partial_sums(cls, values: Sequence, ctx: Context | None = None):
        values = list(values)
        ctx = ctx or context_of(values)
        return cls(partial_sum=values.__getitem__, ctx=ctx, length=len(values))

    @classmethod
    def from_terms(cls, values: Sequence, ctx: Context | None = None):
        values = list(values)
        ctx = ctx or context_of(values)
        return cls(term=values.__getitem__, ctx=ctx, length=len(values))

    def _check(self, n: int):
        if n < 0:
            raise InputSizeError(f"negative index {n}")
        if self.length is not None and n >= self.length:
            raise InputSizeError(f"index {n} beyond the {self.length} available values")

    def term(self, n: int):
        self._check(n)
        if self._term_fn is not None:
            if n not in self._terms:
                self._terms[n] = self._term_fn(n)
            return self._terms[n]
        if n == 0:
            return self.partial_sum(0)
        return self.partial_sum(n) - self.partial_sum(n - 1)

    def partial_sum(self, n: int):
        self._check(n)
        if self._sum_fn is not None:
            return self._sum_fn(n)
        while len(self._sums) <= n:
            m = len(self._sums)
            prev = self._sums[-1] if self._sums else 0
            self._sums.append(prev + self.term(m))
        return self._sums[n]

    def partial_sums(self, count: int) -> list:
        return [self.partial_sum(n) for n in range(count)]

    def terms(self, count: int) -> list:
        return [self.term(n) for n in range(count)]


class Polynomial:
    """Polynomial with ascending coefficients ``c_0 + c_1 x + ...``."""

    def __init__(self, coefficients: Sequence):
        coeffs = list(coefficients)
        if not coeffs:
            coeffs = [0]
        self.coefficients = coeffs

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the zero polynomial)."""
        d = len(self.coefficients) - 1
        while d > 0 and self.coefficients[d] == 0:
            d -= 1
        return d

    @property
    def leading(self):
        return self.coefficients[-1]

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Polynomial(out)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"Polynomial({self.coefficients!r})"

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        """Monic polynomial with the given roots."""
        out = cls([1])
        for r in roots:
            out = out * cls([-r, 1])
        return out


def forward_difference(g: Sequence, k: int, n: int = 0):
    """``Δ^k g_n`` from the window ``g[n], ..., g[n+k]``."""
    if k < 0:
        raise InputSizeError("difference order must be nonnegative")
    if len(g) < n + k + 1:
        raise InputSizeError(f"need {n + k + 1} values for order {k} at n={n}, got {len(g)}")
    return sum((-1) ** (k - j) * comb(k, j) * g[n + j] for j in range(k + 1))


def divided_difference(x: Sequence, g: Sequence, n: int, k: int):
    """``g[x_n, ..., x_{n+k}]`` by the explicit sum over the points."""
    if len(x) < n + k + 1 or len(g) < n + k + 1:
        raise InputSizeError(f"need {n + k + 1} points for order {k}")
    total = 0
    for j in range(k + 1):
        denom = 1
        for i in range(k + 1):
            if i != j:
                d = x[n + j] - x[n + i]
                if d == 0:
                    raise SingularPointsError(f"x_{n + j} == x_{n + i}")
                denom = denom * d
        total = total + g[n + j] / denom
    return total


def divided_difference_recursive(x: Sequence, g: Sequence, n: int, k: int):
    """Same quantity through the two-term recursion on shrinking windows."""
    if len(x) < n + k + 1 or len(g) < n + k + 1:
        raise InputSizeError(f"need {n + k + 1} points for order {k}")
    col = [g[n + j] for j in range(k + 1)]
    for m in range(1, k + 1):
        nxt = []
        for j in range(k + 1 - m):
            d = x[n + j + m] - x[n + j]
            if d == 0:
                raise SingularPointsError(f"x_{n + j + m} == x_{n + j}")
            nxt.append((col[j + 1] - col[j]) / d)
        col = nxt
    return col[0]


def apply_polynomial_operator(P: Polynomial | Sequence, g: Sequence, n: int = 0):
    """``Σ_j p_j g_{n+j}`` for the coefficients of ``P``."""
    coeffs = P.coefficients if isinstance(P, Polynomial) else list(P)
    if len(g) < n + len(coeffs):
        raise InputSizeError(f"need {n + len(coeffs)} values, got {len(g)}")
    return sum(p * g[n + j] for j, p in enumerate(coeffs))


def pochhammer(a, n: int):
    """Rising factorial ``(a)_n``; ``n = -1`` gives ``1/(a-1)``."""
    if n == -1:
        if a == 1:
            raise ZeroDivisionError("(a)_{-1} is undefined at a = 1")
        return 1 / (a - 1)
    if n < -1:
        raise DomainError(f"pochhammer order {n} not supported")
    out = a ** 0 if not isinstance(a, int) else 1
    for j in range(n):
        out = out * (a + j)
    return out
