"""Truncated power series with complex coefficients.

A :class:`PowerSeries` of order ``N`` holds ``c_0 .. c_N`` of a function
analytic at the origin; everything beyond ``z**N`` is unknown rather than zero.
Binary operations truncate to the shorter operand, so every identity in this
package holds modulo ``z**(N+1)``.

Series are immutable: the coefficient array is read-only and every operation
returns a fresh series.

    >>> z = PowerSeries.identity(4)
    >>> koebe = z * geometric(4) * geometric(4)
    >>> [int(c.real) for c in koebe.coeffs]
    [0, 1, 2, 3, 4]
"""

from __future__ import annotations

import csv
import io
import json
from numbers import Number

import numpy as np

from starconv.errors import (
    DivisionByZeroSeries,
    NonunitConstantTerm,
    NonzeroConstantTerm,
    NotNormalized,
    PowerBranchError,
)

DEFAULT_ORDER = 64
# below this magnitude a leading coefficient counts as zero
EPS = 1e-12


class PowerSeries:
    """Coefficients ``c_0 .. c_N`` of a truncated Taylor expansion at 0.

    Parameters
    ----------
    coeffs : sequence of complex
        ``c_0 .. c_N``; at least one entry.
    valuation : int, optional
        Certified lower bound on the index of the first nonzero coefficient.
        Defaults to the index of the first exactly nonzero coefficient
        (``N + 1`` for the zero series).
    """

    __slots__ = ("_c", "_valuation")
    # numpy scalars must defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, coeffs, valuation=None):
        c = np.array(coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        c.setflags(write=False)
        nz = np.flatnonzero(c)
        first = int(nz[0]) if nz.size else c.size
        if valuation is None:
            valuation = first
        elif valuation < 0 or valuation > first:
            raise ValueError(f"valuation {valuation} contradicts coefficients (first nonzero at {first})")
        self._c = c
        self._valuation = int(valuation)

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER):
        c = np.zeros(order + 1, dtype=np.complex128)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order=DEFAULT_ORDER):
        """The series ``z``."""
        c = np.zeros(order + 1, dtype=np.complex128)
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def monomial(cls, k, order=DEFAULT_ORDER, coefficient=1.0):
        c = np.zeros(order + 1, dtype=np.complex128)
        if k <= order:
            c[k] = coefficient
        return cls(c)

    # -- accessors --------------------------------------------------------

    @property
    def coeffs(self):
        """Read-only ``complex128`` array of length ``order + 1``."""
        return self._c

    @property
    def order(self):
        return self._c.size - 1

    @property
    def valuation(self):
        return self._valuation

    def __len__(self):
        return self._c.size

    def __getitem__(self, k):
        return self._c[k]

    def __iter__(self):
        return iter(self._c)

    def __repr__(self):
        head = ", ".join(_fmt(c) for c in self._c[:6])
        more = ", ..." if self._c.size > 6 else ""
        return f"PowerSeries([{head}{more}], order={self.order})"

    def is_normalized(self):
        """True for ``z + a_2 z^2 + ...`` with c_0 = 0 and c_1 = 1 exactly."""
        return self.order >= 1 and self._c[0] == 0 and self._c[1] == 1

    def require_normalized(self, what="series"):
        if not self.is_normalized():
            c1 = self._c[1] if self.order >= 1 else None
            raise NotNormalized(f"{what} must satisfy c0 = 0, c1 = 1 (got c0={self._c[0]!r}, c1={c1!r})")
        return self

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return PowerSeries(self._c[: order + 1])

    def shift(self, k):
        """Multiply by ``z**k``; the order grows by ``k``."""
        if k < 0:
            raise ValueError("use divide_z to remove powers of z")
        return PowerSeries(np.concatenate([np.zeros(k, np.complex128), self._c]))

    def divide_z(self, k):
        """Divide by ``z**k``; needs ``valuation >= k``. The order drops by ``k``."""
        if self._valuation < k:
            raise ValueError(f"series has valuation {self._valuation}, cannot divide by z^{k}")
        return PowerSeries(self._c[k:])

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, Number):
            return PowerSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.order, other.order)
        return PowerSeries(self._c[: n + 1] + other._c[: n + 1])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return PowerSeries(self._c * other)
        if isinstance(other, PowerSeries):
            return cauchy_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return PowerSeries(self._c * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return PowerSeries(self._c / other)
        if isinstance(other, PowerSeries):
            return quotient(self, other)
        return NotImplemented

    def __call__(self, z):
        return evaluate(self, z)

    # -- serialization ----------------------------------------------------

    def to_dict(self):
        return {"order": self.order, "coeffs": [[_plain(c.real), _plain(c.imag)] for c in self._c]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        if len(coeffs) != int(data["order"]) + 1:
            raise ValueError(f"order {data['order']} does not match {len(coeffs)} coefficients")
        return cls(coeffs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "re", "im"])
        for k, c in enumerate(self._c):
            writer.writerow([k, repr(_plain(c.real)), repr(_plain(c.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        """Parse ``k,re,im`` rows (header optional); indices must run 0..N."""
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(x.strip() for x in r)]
        if rows and rows[0][0].strip() == "k":
            rows = rows[1:]
        if not rows:
            raise ValueError("no coefficient rows")
        coeffs = []
        for expected, row in enumerate(rows):
            if len(row) != 3:
                raise ValueError(f"row {expected}: expected 3 fields, got {len(row)}")
            k, re, im = (x.strip() for x in row)
            if int(k) != expected:
                raise ValueError(f"row {expected}: index {k} out of sequence")
            coeffs.append(complex(float(re), float(im)))
        return cls(coeffs)


def _plain(x):
    # adding 0.0 turns -0.0 into 0.0
    return float(x) + 0.0


def _fmt(c):
    if c.imag == 0:
        return f"{c.real:.6g}"
    return f"{c.real:.6g}{c.imag:+.6g}j"


def _common(f, g):
    n = min(f.order, g.order)
    return f.coeffs[: n + 1], g.coeffs[: n + 1]


def geometric(order=DEFAULT_ORDER, x=1.0):
    """``1/(1 - x z)`` truncated at ``order``."""
    return PowerSeries(np.asarray(x, dtype=np.complex128) ** np.arange(order + 1))


def max_abs_diff(f, g):
    """Largest coefficient discrepancy over the common order."""
    a, b = _common(f, g)
    return float(np.max(np.abs(a - b)))


def derivative(f):
    if f.order < 1:
        raise ValueError("derivative needs order >= 1")
    k = np.arange(1, f.order + 1)
    return PowerSeries(k * f.coeffs[1:])


def z_derivative(f):
    """``z f'(z)``: coefficient k becomes ``k c_k``; the order is kept."""
    return PowerSeries(np.arange(f.order + 1) * f.coeffs)


def cauchy_product(f, g):
    a, b = _common(f, g)
    return PowerSeries(np.convolve(a, b)[: a.size])


def quotient(f, g, eps=EPS):
    """``f / g`` after cancelling ``z**valuation(g)`` from both.

    The result has order ``N - valuation(g)`` where ``N`` is the common order.
    """
    d = g.valuation
    if d > g.order:
        raise DivisionByZeroSeries("division by the zero series")
    if f.valuation < d:
        raise DivisionByZeroSeries(
            f"numerator valuation {f.valuation} below denominator valuation {d}: quotient has a pole"
        )
    a, b = _common(f, g)
    a, b = a[d:], b[d:]
    b0 = b[0]
    if abs(b0) < eps:
        raise DivisionByZeroSeries(f"reduced denominator constant term {b0!r} below {eps}")
    n = a.size
    h = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        h[k] = (a[k] - np.dot(b[1 : k + 1], h[k - 1 :: -1] if k else h[:0])) / b0
    return PowerSeries(h)


def exp_series(u, eps=EPS):
    """``exp(u)`` for ``u(0) = 0`` via the recurrence ``E' = u' E``."""
    c = u.coeffs
    if abs(c[0]) > eps:
        raise NonzeroConstantTerm(f"exp_series needs u(0) = 0, got {c[0]!r}")
    n = c.size
    ku = np.arange(n) * c
    e = np.zeros(n, dtype=np.complex128)
    e[0] = 1.0
    for k in range(1, n):
        e[k] = np.dot(ku[1 : k + 1], e[k - 1 :: -1]) / k
    return PowerSeries(e)


def log_series(w, eps=EPS):
    """Principal ``log(w)`` for ``w(0) = 1``; inverse of :func:`exp_series`."""
    c = w.coeffs
    if abs(c[0] - 1) > eps:
        raise NonunitConstantTerm(f"log_series needs w(0) = 1, got {c[0]!r}")
    n = c.size
    kl = np.zeros(n, dtype=np.complex128)  # k * L_k
    for k in range(1, n):
        kl[k] = k * c[k] - np.dot(kl[1:k], c[k - 1 : 0 : -1])
    out = np.zeros(n, dtype=np.complex128)
    out[1:] = kl[1:] / np.arange(1, n)
    return PowerSeries(out)


def power(w, alpha, eps=EPS):
    """``w**alpha`` for ``w(0)`` a positive real, principal branch."""
    w0 = complex(w.coeffs[0])
    if abs(w0.imag) > eps or w0.real <= eps:
        raise PowerBranchError(f"constant term {w0!r} is not a positive real")
    scaled = w / w0.real
    return exp_series(alpha * log_series(scaled)) * (w0.real**alpha)


def integrate_zlog(u, eps=EPS):
    """``int_0^z u(t)/t dt`` for ``u(0) = 0``: coefficient k becomes ``c_k / k``."""
    c = u.coeffs
    if abs(c[0]) > eps:
        raise NonzeroConstantTerm(f"integrand u(t)/t needs u(0) = 0, got {c[0]!r}")
    out = np.zeros_like(c)
    out[1:] = c[1:] / np.arange(1, c.size)
    return PowerSeries(out)


def evaluate(f, z):
    """Horner evaluation; ``z`` may be a scalar or a numpy array."""
    c = f.coeffs
    acc = np.zeros_like(np.asarray(z, dtype=np.complex128)) + c[-1]
    for a in c[-2::-1]:
        acc = acc * z + a
    return complex(acc) if np.ndim(acc) == 0 else acc


def evaluate_circle(f, r, m):
    """Values at ``r * exp(2j*pi*k/m)``, ``k = 0..m-1``.

    Coefficients are folded modulo ``m`` before a single inverse FFT, so this
    is exact (up to rounding) for any order, not an approximation.
    """
    c = f.coeffs * (float(r) ** np.arange(f.order + 1))
    pad = (-c.size) % m
    folded = np.concatenate([c, np.zeros(pad, np.complex128)]).reshape(-1, m).sum(axis=0)
    return np.fft.ifft(folded) * m


def hadamard(f, g):
    """Coefficientwise product of two normalized series."""
    f.require_normalized("hadamard left operand")
    g.require_normalized("hadamard right operand")
    a, b = _common(f, g)
    # explicit real arithmetic keeps the product bitwise commutative
    c = (a.real * b.real - a.imag * b.imag) + 1j * (a.real * b.imag + a.imag * b.real)
    c[0], c[1] = 0, 1
    return PowerSeries(c)
