"""Remainder estimates ``ω_n`` for the standard variants.

Variant names used throughout (including the CLI): ``t``, ``u``, ``v``,
``tt`` (t-tilde), their ``l``-prefixed counterparts built from a companion
series, ``K`` (Kummer) and ``explicit``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import DegenerateVariantError, DomainError, InputSizeError, ZeroEstimateError
from .numcore import DOUBLE, Context, SequenceSource

__all__ = [
    "VARIANT_NAMES",
    "Variant",
    "EstimateSeries",
    "make_estimates",
    "estimates_from_terms",
    "estimates_at",
    "stieltjes_estimates",
    "terms_needed",
]

VARIANT_NAMES = ("t", "u", "v", "tt", "lt", "lu", "lv", "ltt", "K", "explicit")


@dataclass(frozen=True)
class Variant:
    """How to turn a series into remainder estimates.

    ``companion`` supplies the terms for the ``l*`` kinds and the partial sums
    for ``K``; ``limit`` is the companion's known sum (``K`` only).  The
    ``explicit`` kind calls ``omega(n)`` directly.
    """

    kind: str
    beta: object = 1
    companion: SequenceSource | None = None
    limit: object = None
    omega: Callable[[int], object] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in VARIANT_NAMES:
            raise DomainError(f"unknown variant {self.kind!r}; expected one of {VARIANT_NAMES}")
        if self.kind in ("u", "lu") and not self.beta > 0:
            raise DomainError("beta must be positive")
        if self.kind.startswith("l") or self.kind == "K":
            if self.companion is None:
                raise DomainError(f"variant {self.kind} needs a companion series")
        if self.kind == "K" and self.limit is None:
            raise DomainError("variant K needs the companion limit")
        if self.kind == "explicit" and self.omega is None:
            raise DomainError("explicit variant needs an omega function")


class EstimateSeries(Sequence):
    """Finite list of nonzero remainder estimates tagged with their variant."""

    def __init__(self, values: Sequence, kind: str):
        self.values = list(values)
        self.kind = kind
        for n, w in enumerate(self.values):
            if w == 0:
                raise ZeroEstimateError(n)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return f"EstimateSeries(kind={self.kind!r}, n={len(self.values)})"


def terms_needed(kind: str, count: int) -> int:
    """How many terms ``a_0..`` a variant reads to produce ``count`` estimates."""
    return count + 1 if kind in ("v", "tt", "lv", "ltt") else count


def estimates_from_terms(kind: str, terms: Sequence, count: int, beta=1) -> list:
    """Apply one of the t/u/v/tt formulas to an explicit list of terms."""
    if len(terms) < terms_needed(kind, count):
        raise InputSizeError(f"variant {kind} needs {terms_needed(kind, count)} terms for {count} estimates")
    return estimates_at(kind, terms.__getitem__, range(count), beta)


def estimates_at(kind: str, term: Callable[[int], object], indices: Sequence[int], beta=1) -> list:
    """t/u/v/tt estimates evaluated at the series indices ``ξ_0, ξ_1, ...``.

    With ``indices = 0, 1, ...`` these are the ordinary estimates; other
    index lists give the estimates used on a subsequence ``s_{ξ_n}``.
    """
    base = kind[1:] if kind.startswith("l") else kind
    out = []
    for pos, n in enumerate(indices):
        a = term(n)
        if base == "t":
            w = a
        elif base == "u":
            w = (n + beta) * a
        elif base == "tt":
            w = term(n + 1)
        elif base == "v":
            b = term(n + 1)
            if a == b:
                raise DegenerateVariantError(n)
            w = a * b / (a - b)
        else:
            raise DomainError(f"{kind} is not a term-based variant")
        if w == 0:
            raise ZeroEstimateError(pos)
        out.append(w)
    return out


def make_estimates(variant: Variant | str, s: SequenceSource, count: int, **kw) -> EstimateSeries:
    """Estimates ``ω_0 .. ω_{count-1}`` for the series ``s``.

    ``variant`` may be a :class:`Variant` or just its name, with ``beta``,
    ``companion``, ``limit`` or ``omega`` passed as keywords.
    """
    if isinstance(variant, str):
        variant = Variant(variant, **kw)
    kind = variant.kind
    beta = s.ctx.num(variant.beta) if not isinstance(variant.beta, int) else variant.beta
    if kind == "explicit":
        values = [variant.omega(n) for n in range(count)]
    elif kind == "K":
        ref = variant.limit
        values = [variant.companion.partial_sum(n) - ref for n in range(count)]
    else:
        src = variant.companion if kind.startswith("l") else s
        terms = src.terms(terms_needed(kind, count))
        values = estimates_from_terms(kind, terms, count, beta)
    return EstimateSeries(values, kind)


def stieltjes_estimates(moments: Sequence, z, count: int, ctx: Context = DOUBLE) -> EstimateSeries:
    """``ω_n = (-1)^{n+1} μ_{n+1} z^{n+1}`` for a Stieltjes series ``Σ(-1)^j μ_j z^j``.

    These coincide with the t-tilde estimates of that series.
    """
    if len(moments) < count + 1:
        raise InputSizeError(f"need {count + 1} moments")
    z = ctx.num(z)
    values = []
    for n in range(count):
        mu = moments[n + 1]
        if mu == 0:
            raise ZeroEstimateError(n, f"moment mu_{n + 1} is zero")
        values.append((-1) ** (n + 1) * ctx.num(mu) * z ** (n + 1))
    return EstimateSeries(values, "tt")
