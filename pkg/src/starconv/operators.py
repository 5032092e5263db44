"""Coefficient-multiplier operators on normalized series.

``L`` with parameters ``(sigma, n)`` scales ``a_k`` by

    m_k = prod_{j=0}^{n-1} (sigma + k - 1 - j) / (sigma - j)

and ``l`` divides by the same factor, so the two are mutually inverse. Only
this product form is used; it is defined for every real ``sigma`` for which no
denominator vanishes.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from starconv.errors import BadDominantInput, NonunitConstantTerm, SpecError
from starconv.series import (
    EPS,
    PowerSeries,
    exp_series,
    integrate_zlog,
    power,
    quotient,
    z_derivative,
)


@dataclass(frozen=True)
class OperatorSpec:
    """Parameters ``(sigma, n)`` of the operator pair ``L`` / ``l``.

    The standing restriction is ``sigma >= n + 1``. ``legacy=True`` relaxes it
    (e.g. ``sigma = n = 1``, which gives ``L f = z f'``) for operator
    application only; membership checks refuse legacy specs.
    """

    sigma: float
    n: int
    legacy: bool = False

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise SpecError(f"n must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sigma", float(self.sigma))
        if not math.isfinite(self.sigma):
            raise SpecError(f"sigma must be finite, got {self.sigma!r}")
        if not self.legacy and self.sigma < self.n + 1:
            raise SpecError(f"sigma >= n + 1 required, got sigma={self.sigma}, n={self.n} (use legacy mode)")
        for j in range(self.n):
            if self.sigma - j == 0:
                raise SpecError(f"sigma - {j} = 0 makes the multiplier undefined")

    @property
    def mu(self):
        """``sigma - (n + 1)``, the additive constant in the dominant ODE."""
        return self.sigma - (self.n + 1)

    @property
    def threshold(self):
        """Lower bound ``(sigma - (n+1)) / (sigma - n)`` in the class definition."""
        return (self.sigma - (self.n + 1)) / (self.sigma - self.n)

    def successor(self):
        """Same sigma, ``n + 1``. Always relaxed, since only ``sigma - n > 0`` is needed."""
        return OperatorSpec(self.sigma, self.n + 1, legacy=True)

    def with_n(self, n):
        return OperatorSpec(self.sigma, n, legacy=self.legacy)


@dataclass(frozen=True)
class BernardiSpec:
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "gamma", float(self.gamma))
        if not self.gamma > -1:
            raise SpecError(f"Bernardi transform needs gamma > -1, got {self.gamma}")


def multiplier(spec, k):
    """Scale factor of ``a_k`` under ``L``; 1 for ``n = 0`` or ``k = 1``."""
    if k < 1:
        raise ValueError("multiplier defined for k >= 1")
    m = 1.0
    for j in range(spec.n):
        m *= (spec.sigma + k - 1 - j) / (spec.sigma - j)
    return m


def multiplier_exact(spec, k):
    """Exact rational multiplier; ``sigma`` is taken as the exact value of its float."""
    s = Fraction(spec.sigma)
    m = Fraction(1)
    for j in range(spec.n):
        m *= (s + k - 1 - j) / (s - j)
    return m


@functools.lru_cache(maxsize=256)
def multipliers(spec, order):
    """Read-only vector ``[0, m_1, ..., m_order]`` (index 0 unused)."""
    k = np.arange(order + 1, dtype=float)
    m = np.ones(order + 1)
    for j in range(spec.n):
        m *= (spec.sigma + k - 1 - j) / (spec.sigma - j)
    m[0] = 0.0
    m[1] = 1.0
    m.setflags(write=False)
    return m


def apply_L(spec, f):
    f.require_normalized("apply_L input")
    return PowerSeries(f.coeffs * multipliers(spec, f.order))


def apply_l(spec, f):
    f.require_normalized("apply_l input")
    m = multipliers(spec, f.order)
    c = np.zeros_like(f.coeffs)
    c[1:] = f.coeffs[1:] / m[1:]
    return PowerSeries(c)


def bernardi(bspec, f):
    """``(g+1)/z^g * int_0^z t^(g-1) f(t) dt``, i.e. ``a_k -> (g+1)/(g+k) a_k``."""
    if not isinstance(bspec, BernardiSpec):
        bspec = BernardiSpec(bspec)
    f.require_normalized("bernardi input")
    g = bspec.gamma
    k = np.arange(f.order + 1, dtype=float)
    w = np.zeros(f.order + 1)
    w[1:] = (g + 1) / (g + k[1:])
    w[1] = 1.0
    return PowerSeries(f.coeffs * w)


def extremal_k(spec, order):
    """Leading member of the class: ``a_k = k / m_k``."""
    m = multipliers(spec, order)
    c = np.zeros(order + 1, dtype=np.complex128)
    c[1:] = np.arange(1, order + 1) / m[1:]
    return PowerSeries(c)


def dominant_q_series(spec, order):
    """Closed-form best dominant, as the ratio of two explicit series."""
    s = spec.sigma - spec.n
    k = np.arange(order + 1, dtype=float)
    w = s / (s + k)
    return quotient(PowerSeries(w * (k + 1) ** 2), PowerSeries(w * (k + 1)))


def solve_dominant(h, eta, mu, order=None):
    """Series solution ``q`` of ``q + z q'/(eta q + mu) = h`` with ``q(0) = 1``.

    Built as ``q = z F'/F`` where ``F^eta = (eta+mu)/z^mu int_0^z t^(mu-1) H^eta``
    and ``H = z exp(int_0^z (h-1)/t)``. Writing ``H^eta = z^eta E`` with
    ``E = exp(eta int (h-1)/t)``, the weighted integral acts termwise:
    ``F^eta = z^eta * sum (eta+mu)/(eta+mu+k) E_k z^k``, so no quadrature is
    needed and ``eta`` need not be an integer.
    """
    if order is None:
        order = h.order
    if order > h.order:
        raise BadDominantInput(f"h has order {h.order} < requested {order}")
    h = h.truncate(order)
    if abs(h.coeffs[0] - 1) > EPS:
        raise BadDominantInput(f"h(0) must be 1, got {h.coeffs[0]!r}")
    if eta == 0:
        raise BadDominantInput("eta must be nonzero")
    if not eta + mu > 0:
        raise BadDominantInput(f"eta + mu must be positive, got {eta + mu}")
    e = exp_series(eta * integrate_zlog(h - 1)).coeffs
    k = np.arange(order + 1)
    phi = PowerSeries((eta + mu) / (eta + mu + k) * e)
    big_f = power(phi, 1.0 / eta).shift(1)
    return quotient(z_derivative(big_f), big_f)


def from_caratheodory(p, spec, order=None):
    """``f = l(z exp(int_0^z (p-1)/t))``, so that ``L f`` has ``z (Lf)'/(Lf) = p``.

    Positivity of ``Re p`` is the caller's business.
    """
    if order is None:
        order = p.order
    if abs(p.coeffs[0] - 1) > EPS:
        raise NonunitConstantTerm(f"p(0) must be 1, got {p.coeffs[0]!r}")
    p = p.truncate(order)
    lf = exp_series(integrate_zlog(p - 1)).shift(1).truncate(order)
    return apply_l(spec, lf)
