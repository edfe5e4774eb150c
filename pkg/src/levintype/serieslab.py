"""Test series, their reference limits, and subsequence devices.

Families (``SeriesSpec.family``):

``log_factor``
    ``S_n(z, a) = 1 + Σ_{j=1}^n z^j Π_{l<j} 1/ln(a+l)``.
``lerch``
    ``s_n = Σ_{j≤n} q^j/(j+1)^ε``, a Lerch zeta function with ``a = 1``.
``boys``
    ``s_n = Σ_{j≤n} (-z)^j/(j! (2m+2j+1))`` converging to the Boys function ``F_m(z)``.
``geometric``
    ``s_n = Σ_{j≤n} q^j``.
``power``
    ``Σ c_j z^j`` with explicit coefficients or ``function = "exp" | "log1p"``.
``stieltjes``
    ``Σ (-1)^j μ_j z^j`` with user moments or ``moments = "euler"`` (``μ_j = j!``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import factorial, inf
from typing import Sequence

from .engine import SINGULAR
from .errors import DomainError, InputSizeError
from .estimates import EstimateSeries
from .numcore import Context, SequenceSource, context_of, make_context
from .transforms import arithmetic_indices, geometric_indices

__all__ = [
    "FAMILIES",
    "SeriesSpec",
    "ReferenceValue",
    "series_source",
    "series_coefficients",
    "reference_value",
    "lerch_reference",
    "boys_reference",
    "kummer_estimates_fm",
    "subsequence_device",
    "subsequence_indices",
    "subsequence_u_estimates",
    "digits_metric",
]

FAMILIES = ("log_factor", "lerch", "boys", "geometric", "power", "stieltjes")


def _freeze(v):
    if isinstance(v, list):
        return tuple(v)
    return v


@dataclass(frozen=True)
class SeriesSpec:
    """A test series.  Numeric parameters may be strings to keep full precision."""

    family: str
    z: object = None
    a: object = None
    q: object = None
    eps: object = None
    m: int = 0
    moments: object = None
    coefficients: object = None
    function: str | None = None
    extra: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown series family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "moments", _freeze(self.moments))
        object.__setattr__(self, "coefficients", _freeze(self.coefficients))
        need = {"log_factor": ("z", "a"), "lerch": ("q", "eps"), "boys": ("z",),
                "geometric": ("q",), "power": ("z",), "stieltjes": ("z", "moments")}
        for name in need[self.family]:
            if getattr(self, name) is None:
                raise DomainError(f"series {self.family} needs parameter {name!r}")
        if self.family == "power" and self.coefficients is None and self.function is None:
            raise DomainError("power series needs coefficients or a function name")
        if self.family == "boys" and (not isinstance(self.m, int) or self.m < 0):
            raise DomainError("m must be a non-negative integer")


@dataclass(frozen=True)
class ReferenceValue:
    """A limit computed by ``method`` and confirmed by ``cross_check``.

    ``claimed_digits`` is the number of significant digits on which the two
    agree.
    """

    value: object
    method: str
    cross_check: str
    claimed_digits: float


def series_coefficients(spec: SeriesSpec, count: int, ctx: Context) -> list:
    """Power-series coefficients ``c_0 .. c_{count-1}`` (``power`` and ``stieltjes`` only)."""
    mp = ctx.mp
    if spec.family == "power":
        if spec.coefficients is not None:
            if len(spec.coefficients) < count:
                raise InputSizeError(f"only {len(spec.coefficients)} coefficients given")
            return [ctx.num(c) for c in spec.coefficients[:count]]
        if spec.function == "exp":
            return [ctx.one / (mp.factorial(j) if mp else factorial(j)) for j in range(count)]
        if spec.function == "log1p":
            return [ctx.zero] + [ctx.num((-1) ** (j + 1)) / j for j in range(1, count)]
        raise DomainError(f"unknown power-series function {spec.function!r}")
    if spec.family == "stieltjes":
        return [(-1) ** j * mu for j, mu in enumerate(_moments(spec, count, ctx))]
    raise DomainError(f"family {spec.family} is not given by coefficients")


def _moments(spec: SeriesSpec, count: int, ctx: Context) -> list:
    if spec.moments == "euler":
        return [ctx.num(factorial(j)) for j in range(count)]
    if len(spec.moments) < count:
        raise InputSizeError(f"only {len(spec.moments)} moments given")
    return [ctx.num(mu) for mu in spec.moments[:count]]


def series_source(spec: SeriesSpec, ctx: Context, length: int | None = None) -> SequenceSource:
    """Terms and partial sums of ``spec`` in the arithmetic of ``ctx``."""
    fam = spec.family
    if fam == "log_factor":
        z, a = ctx.num(spec.z), ctx.num(spec.a)
        cache = [ctx.one]

        def term(n):
            while len(cache) <= n:
                l = len(cache) - 1
                lg = ctx.log(a + l)
                if lg == 0:
                    raise DomainError(f"ln(a+{l}) = 0")
                cache.append(cache[-1] * z / lg)
            return cache[n]

    elif fam == "lerch":
        q, e = ctx.num(spec.q), ctx.num(spec.eps)
        if q == 0:
            raise DomainError("q must be nonzero")

        def term(n):
            return q ** n / ctx.power(ctx.num(n + 1), e)

    elif fam == "boys":
        z, m = ctx.num(spec.z), spec.m
        fact = [ctx.one]

        def term(n):
            while len(fact) <= n:
                fact.append(fact[-1] * len(fact))
            return (-z) ** n / (fact[n] * (2 * m + 2 * n + 1))

    elif fam == "geometric":
        q = ctx.num(spec.q)

        def term(n):
            return q ** n

    else:
        z = ctx.num(spec.z)
        coeffs: list = []
        given = spec.coefficients if fam == "power" else spec.moments
        explicit = isinstance(given, tuple)
        if explicit:
            length = len(given) if length is None else min(length, len(given))

        def term(n):
            if len(coeffs) <= n:
                coeffs[:] = series_coefficients(spec, n + 1 if explicit else max(2 * n + 2, 16), ctx)
            return coeffs[n] * z ** n

    return SequenceSource(term=term, ctx=ctx, length=length)


def lerch_reference(q, eps, ctx: Context):
    """``Σ_{j≥0} q^j/(j+1)^ε`` from the expansion in powers of ``ln q``.

    ``Φ = [Γ(1-ε) (ln 1/q)^{ε-1} + Σ_j ζ(ε-j) (ln q)^j / j!] / q``, valid for
    ``|ln q| < 2π`` and non-integer ``ε``.
    """
    mp = ctx.mp
    if mp is None:
        raise DomainError("lerch_reference needs a multiprecision context")
    q, e = mp.convert(q), mp.convert(eps)
    L = mp.log(q)
    if not abs(L) < 2 * mp.pi:
        raise DomainError("|ln q| must be below 2 pi")
    if mp.im(e) == 0 and mp.isint(mp.re(e)):
        raise DomainError("eps must not be an integer")
    val = mp.gamma(1 - e) * (-L) ** (e - 1)
    tiny = mp.mpf(10) ** (-(mp.dps + 5))
    j = 0
    small = 0
    while small < 3:
        c = mp.zeta(e - j) * L ** j / mp.factorial(j)
        val += c
        small = small + 1 if abs(c) < tiny * abs(val) else 0
        j += 1
    return val / q


def boys_reference(z, m: int, ctx: Context):
    """``F_m(z) = γ(m+1/2, z) / (2 z^{m+1/2})``."""
    mp = ctx.mp or make_context(30).mp
    z = mp.convert(z)
    if z == 0:
        return ctx.num(1) / (2 * m + 1)
    h = mp.mpf(m) + mp.mpf(1) / 2
    return mp.gammainc(h, 0, z) / (2 * z ** h)


def _agreement(a, b, mp) -> float:
    if a == b:
        return float(mp.dps)
    return float(-mp.log10(abs(a - b) / abs(a)))


@lru_cache(maxsize=64)
def _reference_cached(spec: SeriesSpec, dps: int) -> ReferenceValue:
    ctx = make_context(dps + 10)
    mp = ctx.mp
    fam = spec.family
    if fam == "lerch":
        v = lerch_reference(spec.q, spec.eps, ctx)
        w = mp.lerchphi(mp.convert(ctx.num(spec.q)), ctx.num(spec.eps), 1)
        ref = ReferenceValue(v, "analytic_continuation", "lerchphi", _agreement(v, w, mp))
    elif fam == "boys":
        v = boys_reference(ctx.num(spec.z), spec.m, ctx)
        z = ctx.num(spec.z)
        w = mp.quad(lambda t: t ** (2 * spec.m) * mp.exp(-z * t * t), [0, 1])
        ref = ReferenceValue(v, "closed_form", "quadrature", _agreement(v, w, mp))
    elif fam == "geometric":
        q = ctx.num(spec.q)
        if not abs(q) < 1:
            raise DomainError("geometric series needs |q| < 1")
        v = 1 / (1 - q)
        src = series_source(spec, ctx)
        n = int(mp.ceil((dps + 12) / -mp.log10(abs(q)))) if q != 0 else 1
        ref = ReferenceValue(v, "closed_form", "direct_summation", _agreement(v, src.partial_sum(n), mp))
    elif fam == "log_factor":
        v, w = _log_factor_reference(spec, ctx)
        ref = ReferenceValue(v, "direct_summation", "high_precision_deep_transform", _agreement(v, w, mp))
    elif fam == "power" and spec.function == "exp":
        z = ctx.num(spec.z)
        v = mp.exp(z)
        w = mp.polyval(series_coefficients(spec, 400, ctx)[::-1], z)
        ref = ReferenceValue(v, "closed_form", "direct_summation", _agreement(v, w, mp))
    elif fam == "power" and spec.function == "log1p":
        z = ctx.num(spec.z)
        v = mp.log1p(z)
        w = mp.quad(lambda t: 1 / (1 + t), [0, z])
        ref = ReferenceValue(v, "closed_form", "quadrature", _agreement(v, w, mp))
    elif fam == "stieltjes" and spec.moments == "euler":
        z = ctx.num(spec.z)
        if not z > 0:
            raise DomainError("Euler series reference needs z > 0")
        v = mp.exp(1 / z) * mp.e1(1 / z) / z
        w = mp.quad(lambda t: mp.exp(-t) / (1 + z * t), [0, mp.inf])
        ref = ReferenceValue(v, "closed_form", "quadrature", _agreement(v, w, mp))
    else:
        raise DomainError(f"no reference value available for {spec}")
    with mp.workdps(dps):
        value = +ref.value
    return ReferenceValue(value, ref.method, ref.cross_check, min(ref.claimed_digits, float(dps)))


def _log_factor_reference(spec: SeriesSpec, ctx: Context):
    """Direct summation to a rigorous tail bound, and pJ2 on ``s_{40n}``."""
    from .transforms import pj_transform

    mp = ctx.mp
    src = series_source(spec, ctx)
    tol = mp.mpf(10) ** (-(mp.dps + 2))
    z, a = ctx.num(spec.z), ctx.num(spec.a)
    n = 1
    while True:
        ratio_bound = abs(z) / abs(ctx.log(a + n))
        if ratio_bound < mp.mpf(1) / 2 and abs(src.term(n)) < tol * abs(src.partial_sum(n)):
            break
        n += 1
    direct = src.partial_sum(n)
    tau, count = 40, 12
    sub = [src.partial_sum(tau * i) for i in range(count)]
    om = [(tau * i + 1) * src.term(tau * i) for i in range(count)]
    deep = pj_transform(sub, om, 2, 1).T(0, count - 1)
    return direct, deep


def reference_value(spec: SeriesSpec, ctx: Context | None = None, dps: int | None = None) -> ReferenceValue:
    """Limit of the series with two independent methods; cached per ``(spec, dps)``.

    The work precision defaults to that of ``ctx`` (at least 30 digits); the
    returned value is converted into ``ctx``.
    """
    work = dps or max(ctx.dps if ctx is not None else 64, 30)
    ref = _reference_cached(spec, work)
    if ctx is None:
        return ref
    return replace(ref, value=ctx.num(ref.value))


def kummer_estimates_fm(z, count: int, ctx: Context) -> EstimateSeries:
    """``ω_n = Σ_{j≤n} (-z)^j/(j+1)! - (1 - e^{-z})/z`` for Boys function series."""
    z = ctx.num(z)
    if z == 0:
        raise DomainError("z must be nonzero")
    limit = (1 - ctx.exp(-z)) / z
    out, acc, term = [], ctx.zero, ctx.one
    for j in range(count):
        if j:
            term = term * (-z) / (j + 1)
        acc = acc + term
        out.append(acc - limit)
    return EstimateSeries(out, "K")


def subsequence_indices(count: int, tau: int | None = None, sigma=None, start: int = 0) -> list[int]:
    """Arithmetic ``ξ_n = τ n`` or geometric ``ξ_n = ⌊σ ξ_{n-1}⌋ + 1`` schedule."""
    if (tau is None) == (sigma is None):
        raise DomainError("give exactly one of tau and sigma")
    if tau is not None:
        return arithmetic_indices(tau, count)
    return geometric_indices(sigma, count, start)


def subsequence_device(s: SequenceSource, tau: int | None = None, sigma=None,
                       start: int = 0) -> SequenceSource:
    """The sequence ``s'_n = s_{ξ_n}``."""
    if tau is not None:
        if tau < 1 or int(tau) != tau:
            raise DomainError("tau must be a positive integer")
        return SequenceSource(partial_sum=lambda n: s.partial_sum(tau * n), ctx=s.ctx)
    idx: list[int] = []

    def at(n):
        if len(idx) <= n:
            idx[:] = subsequence_indices(n + 1, sigma=sigma, start=start)
        return s.partial_sum(idx[n])

    subsequence_indices(1, sigma=sigma, start=start)
    return SequenceSource(partial_sum=at, ctx=s.ctx)


def subsequence_u_estimates(s: SequenceSource, indices: Sequence[int], beta=1) -> EstimateSeries:
    """``ω_n = (ξ_n + β) a_{ξ_n}`` for a subsequence ``s_{ξ_n}``."""
    b = s.ctx.num(beta)
    return EstimateSeries([(m + b) * s.term(m) for m in indices], "u")


def digits_metric(approx, reference, ctx: Context | None = None) -> float:
    """``-log10 |approx - ref| / |ref|``; capped at the working precision.

    Singular cells give ``-inf``.
    """
    if reference == 0:
        raise DomainError("relative error undefined for a zero reference")
    if approx is SINGULAR:
        return -inf
    ctx = ctx or context_of(approx, reference)
    cap = float(ctx.dps)
    err = abs(approx - reference) / abs(reference)
    if err == 0:
        return cap
    return min(cap, -ctx.to_float(ctx.log10(err)))
