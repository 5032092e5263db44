"""Sampled verification of real-part inequalities inside the unit disk.

Every check evaluates series on a deterministic polar grid (see
:class:`GridSpec`) and reports the minimum real part of some ratio together
with where it was attained. Strict inequalities ``Re(...) > t`` are accepted as
``min - t > -margin``; the raw minimum is always kept in the report.

Truncation matters near the boundary: the Koebe function evaluated at
``|z| = 0.99`` needs thousands of terms before its tail is negligible. Use
:meth:`GridSpec.adequate_order` to size series for a grid.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from starconv import operators as ops
from starconv.errors import DenominatorVanishes, SpecError
from starconv.series import (
    EPS,
    PowerSeries,
    evaluate_circle,
    max_abs_diff,
    quotient,
    z_derivative,
)

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240001
ODE_TOLERANCE = 1e-10
BOUND_SLACK = 1e-9
EQUALITY_RTOL = 1e-12
DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Points ``r * exp(2j*pi*m/angles)`` for each radius ``r`` in ``radii``."""

    radii: tuple = (0.5, 0.9, 0.99)
    angles: int = 1024
    margin: float = 1e-9

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii:
            raise ValueError("grid needs at least one radius")
        if any(not 0 < r < 1 for r in radii):
            raise ValueError(f"radii must lie in (0, 1), got {radii}")
        if int(self.angles) != self.angles or self.angles < 8:
            raise ValueError(f"angles must be an integer >= 8, got {self.angles}")
        object.__setattr__(self, "angles", int(self.angles))
        if self.margin < 0:
            raise ValueError("margin must be nonnegative")

    def thetas(self):
        return 2 * np.pi * np.arange(self.angles) / self.angles

    def points(self):
        """Complex array of shape ``(angles, len(radii))``."""
        return np.exp(1j * self.thetas())[:, None] * np.asarray(self.radii)[None, :]

    def adequate_order(self, growth=3, tol=1e-13, minimum=64):
        """Smallest order whose tail ``sum_{k>N} k**growth r**k`` is below ``tol``.

        ``growth = 3`` covers the second-derivative expressions of functions
        whose coefficients grow at most linearly (Koebe-type).
        """
        r = max(self.radii)
        n = minimum
        # tail <= (n+1)**growth r**(n+1) / (1-r)**(growth+1), crude but safe
        while (n + 1) ** growth * r ** (n + 1) / (1 - r) ** (growth + 1) > tol:
            n += 16
        return n

    def to_dict(self):
        return {"radii": list(self.radii), "angles": self.angles, "margin": self.margin}


@dataclass(frozen=True)
class CaratheodoryFunction:
    """``p(z) = sum w_i (1 + x_i z)/(1 - x_i z)`` with weights summing to 1 and ``|x_i| <= 1``.

    Such ``p`` has ``p(0) = 1`` and positive real part in the open disk.
    """

    masses: tuple

    def __post_init__(self):
        masses = tuple((float(w), complex(x)) for w, x in self.masses)
        object.__setattr__(self, "masses", masses)
        if not masses:
            raise ValueError("need at least one mass")
        if any(w <= 0 for w, _ in masses):
            raise ValueError("weights must be positive")
        if abs(sum(w for w, _ in masses) - 1) > 1e-12:
            raise ValueError("weights must sum to 1")
        if any(abs(x) > 1 + 1e-15 for _, x in masses):
            raise ValueError("mass points must satisfy |x| <= 1")

    @classmethod
    def random(cls, rng, max_masses=4):
        """Draw 1..max_masses masses; about half of the points sit on the unit circle."""
        count = int(rng.integers(1, max_masses + 1))
        weights = rng.dirichlet(np.ones(count))
        weights = weights / weights.sum()
        masses = []
        for w in weights:
            theta = rng.uniform(0, 2 * np.pi)
            radius = 1.0 if rng.random() < 0.5 else rng.uniform(0, 1)
            masses.append((float(w), complex(radius * np.exp(1j * theta))))
        # absorb rounding so the weights sum to 1 within 1e-12
        total = sum(w for w, _ in masses)
        masses[-1] = (masses[-1][0] + 1 - total, masses[-1][1])
        return cls(tuple(masses))

    def series(self, order):
        return caratheodory_series(self, order)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return sum(w * (1 + x * z) / (1 - x * z) for w, x in self.masses)

    def to_dict(self):
        return {"masses": [[w, [x.real, x.imag]] for w, x in self.masses]}


def caratheodory_series(p, order):
    """``c_0 = 1`` and ``c_k = sum 2 w_i x_i**k``."""
    k = np.arange(order + 1)
    c = np.zeros(order + 1, dtype=np.complex128)
    for w, x in p.masses:
        c += 2 * w * x**k
    c[0] = 1.0
    return PowerSeries(c)


@dataclass
class CheckReport:
    """Outcome of one verification run.

    Inequality checks fill ``min_real_part``/``argmin_point``/``threshold``;
    identity checks fill ``residual_norm``/``tolerance``. ``status`` is one of
    ``pass``, ``fail`` or ``not_applicable``.
    """

    kind: str
    passed: bool
    status: str = ""
    grid: GridSpec | None = None
    threshold: float | None = None
    min_real_part: float | None = None
    argmin_point: complex | None = None
    residual_norm: float | None = None
    tolerance: float | None = None
    details: list = field(default_factory=list)
    subreports: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    @property
    def margin_above_threshold(self):
        if self.min_real_part is None or self.threshold is None:
            return None
        return self.min_real_part - self.threshold

    def to_dict(self):
        out = {
            "schema": SCHEMA_VERSION,
            "kind": self.kind,
            "passed": bool(self.passed),
            "status": self.status,
            "threshold": _num(self.threshold),
            "min_real_part": _num(self.min_real_part),
            "argmin_point": None if self.argmin_point is None else [self.argmin_point.real, self.argmin_point.imag],
            "residual_norm": _num(self.residual_norm),
            "tolerance": _num(self.tolerance),
            "grid": None if self.grid is None else self.grid.to_dict(),
            "details": self.details,
            "verdicts": self.verdicts,
            "flags": list(self.flags),
            "subreports": {k: v.to_dict() for k, v in self.subreports.items()},
        }
        return out

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def sample_ratio(num, den, grid):
    """Values of ``num(z)/den(z)`` on the grid, shape ``(angles, len(radii))``."""
    cols = []
    for j, r in enumerate(grid.radii):
        top = evaluate_circle(num, r, grid.angles)
        bottom = evaluate_circle(den, r, grid.angles)
        small = np.abs(bottom) <= DENOMINATOR_FLOOR
        if small.any():
            m = int(np.flatnonzero(small)[0])
            raise DenominatorVanishes(grid.points()[m, j], bottom[m])
        cols.append(top / bottom)
    return np.stack(cols, axis=1)


def sample_values(f, grid):
    return np.stack([evaluate_circle(f, r, grid.angles) for r in grid.radii], axis=1)


def _min_report(kind, values, grid, threshold):
    re = values.real
    # C-order argmin over (angle, radius): lowest angle index wins ties, then lowest radius
    flat = int(np.argmin(re))
    m, j = divmod(flat, len(grid.radii))
    min_re = float(re[m, j])
    details = [{"radius": r, "min_real_part": float(re[:, i].min())} for i, r in enumerate(grid.radii)]
    return CheckReport(
        kind=kind,
        passed=bool(min_re - threshold > -grid.margin),
        grid=grid,
        threshold=float(threshold),
        min_real_part=min_re,
        argmin_point=complex(grid.points()[m, j]),
        details=details,
    )


def re_ratio_min(num, den, grid, threshold=0.0, kind="re_ratio"):
    """Minimum of ``Re(num/den)`` over the grid; passes when it exceeds ``threshold - margin``."""
    return _min_report(kind, sample_ratio(num, den, grid), grid, threshold)


def re_min(f, grid, threshold=0.0, kind="re_value"):
    return _min_report(kind, sample_values(f, grid), grid, threshold)


def check_starlike(f, grid):
    """``Re z f'/f > 0`` on the grid."""
    f.require_normalized("check_starlike input")
    return re_ratio_min(z_derivative(f), f, grid, kind="starlike")


def _require_strict(spec):
    if spec.legacy:
        raise SpecError("class membership needs sigma >= n + 1; legacy specs are refused")


def check_class_membership(f, spec, grid):
    """``Re L_{n+1}f / L_n f > (sigma-n-1)/(sigma-n)``, cross-checked by starlikeness of ``L_n f``."""
    f.require_normalized("check_class_membership input")
    _require_strict(spec)
    lower = ops.apply_L(spec, f)
    upper = ops.apply_L(spec.successor(), f)
    report = re_ratio_min(upper, lower, grid, threshold=spec.threshold, kind="class")
    starlike = check_starlike(lower, grid)
    report.subreports["starlike_of_L"] = starlike
    report.verdicts = {
        "direct": report.passed,
        "starlike_of_L": starlike.passed,
        "agree": report.passed == starlike.passed,
    }
    return report


def univalence_ratio_parts(f):
    """Numerator ``2zf' + z^2 f''`` and denominator ``f + zf'`` as series."""
    zf = z_derivative(f)
    zzf = z_derivative(zf)
    # z^2 f'' = z(zf')' - zf'
    num = 2 * zf + (zzf - zf)
    return num, f + zf


def univalence_ratio_series(f):
    num, den = univalence_ratio_parts(f)
    return quotient(num, den)


def check_univalence_condition(f, grid):
    f.require_normalized("check_univalence_condition input")
    num, den = univalence_ratio_parts(f)
    return re_ratio_min(num, den, grid, kind="univalence")


def check_lemma3_conditions(h, eta, mu, grid):
    """Sufficient conditions for univalence of the dominant ODE solution.

    Sub-reports: ``re_G`` for ``G = eta h + mu``, ``starlike_Q`` for
    ``Q = zG'/G`` and ``starlike_R`` for ``R = Q/G``. A constant ``h`` makes
    ``Q`` vanish identically; the last two are then ``not_applicable``.
    """
    if abs(h.coeffs[0] - 1) > EPS:
        raise ValueError(f"h(0) must be 1, got {h.coeffs[0]!r}")
    if eta == 0:
        raise ValueError("eta must be nonzero")
    g = eta * h + mu
    re_g = re_min(g, grid, kind="re_G")
    subs = {"re_G": re_g}
    flags = []
    if mu == 0:
        flags.append("mu_zero_boundary")

    if h.order < 1 or abs(h.coeffs[1]) <= EPS:
        for name in ("starlike_Q", "starlike_R"):
            subs[name] = CheckReport(kind=name, passed=False, status="not_applicable", grid=grid)
        report = CheckReport(kind="lemma3", passed=False, status="not_applicable", grid=grid,
                             subreports=subs, flags=flags + ["h_prime_zero"])
        report.min_real_part = re_g.min_real_part
        return report

    try:
        q = quotient(z_derivative(g), g)
    except ZeroDivisionError as exc:
        raise DenominatorVanishes(0j, g.coeffs[0]) from exc
    r = quotient(q, g)
    subs["starlike_Q"] = re_ratio_min(z_derivative(q), q, grid, kind="starlike_Q")
    subs["starlike_R"] = re_ratio_min(z_derivative(r), r, grid, kind="starlike_R")
    passed = all(s.passed for s in subs.values())
    report = CheckReport(
        kind="lemma3",
        passed=passed,
        grid=grid,
        threshold=0.0,
        min_real_part=min(s.min_real_part for s in subs.values()),
        subreports=subs,
        flags=flags,
    )
    report.verdicts = {name: s.passed for name, s in subs.items()}
    report.verdicts["zQ'/Q_min_minus_half_mu"] = subs["starlike_Q"].min_real_part - mu / 2
    return report


def ode_residual(q, h, eta, mu, tolerance=ODE_TOLERANCE):
    """Max coefficient of ``q + zq'/(eta q + mu) - h`` through order ``N - 2``."""
    n = min(q.order, h.order)
    q, h = q.truncate(n), h.truncate(n)
    den = eta * q + mu
    if abs(den.coeffs[0]) <= EPS:
        raise DenominatorVanishes(0j, den.coeffs[0])
    res = q + quotient(z_derivative(q), den) - h
    upto = max(n - 2, 0)
    norm = float(np.max(np.abs(res.coeffs[: upto + 1])))
    return CheckReport(kind="ode", passed=norm <= tolerance, residual_norm=norm, tolerance=tolerance,
                       details=[{"through_order": upto}])


def coefficient_bound(spec, order):
    """``k / m_k`` for ``k = 0..order`` (entry 0 unused)."""
    m = ops.multipliers(spec, order)
    b = np.zeros(order + 1)
    b[1:] = np.arange(1, order + 1) / m[1:]
    return b


def coefficient_bound_check(f, spec):
    """``|a_k| <= k / m_k`` for ``k = 2..N``, with per-k equality flags."""
    f.require_normalized("coefficient_bound_check input")
    _require_strict(spec)
    bound = coefficient_bound(spec, f.order)
    mag = np.abs(f.coeffs)
    ks = np.arange(2, f.order + 1)
    excess = mag[2:] - bound[2:]
    violations = ks[excess > BOUND_SLACK]
    equal = np.abs(excess) <= EQUALITY_RTOL * bound[2:]
    details = []
    if violations.size:
        k = int(violations[0])
        details.append({"first_violation": k, "abs_a_k": float(mag[k]), "bound": float(bound[k])})
    report = CheckReport(
        kind="bounds",
        passed=violations.size == 0,
        residual_norm=float(excess.max()) if excess.size else 0.0,
        tolerance=BOUND_SLACK,
        details=details,
    )
    report.verdicts = {
        "equality_at_all_k": bool(equal.all()),
        "equality_count": int(equal.sum()),
        "checked": int(ks.size),
    }
    return report


# -- sampled suites -----------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    passes: int = 0
    worst_margin: float = math.inf
    failures: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.passes == self.cases and not self.failures

    def record(self, ok, margin, failure=None):
        self.cases += 1
        self.passes += int(ok)
        if margin is not None:
            self.worst_margin = min(self.worst_margin, margin)
        if not ok:
            self.failures.append(failure)

    def to_dict(self):
        return {
            "suite": self.name,
            "params": self.params,
            "cases": self.cases,
            "passes": self.passes,
            "worst_margin": _num(self.worst_margin),
            "passed": self.passed,
            "failures": self.failures,
        }


@functools.lru_cache(maxsize=4)
def sample_class_members(spec, cases, seed, order):
    """Seeded ``(index, p, f)`` with ``f = from_caratheodory(p, spec)``, a member of the class for ``spec``.

    Cached, since the inclusion and closure suites draw the same members.
    """
    rng = np.random.default_rng(seed)
    members = []
    for i in range(cases):
        p = CaratheodoryFunction.random(rng)
        members.append((i, p, ops.from_caratheodory(p.series(order), spec, order)))
    return tuple(members)


def inclusion_suite(sigma=3.0, n=1, cases=100, seed=DEFAULT_SEED, grid=None, order=None):
    """Members of the class at ``n+1`` must also pass the class check at ``n`` and be starlike."""
    grid = grid or GridSpec()
    order = order or grid.adequate_order()
    upper, lower = ops.OperatorSpec(sigma, n + 1), ops.OperatorSpec(sigma, n)
    result = SuiteResult("inclusion", params={"sigma": float(sigma), "n": n, "cases": cases, "seed": seed,
                                              "order": order})
    for i, p, f in sample_class_members(upper, cases, seed, order):
        premise = check_class_membership(f, upper, grid)
        lower_rep = check_class_membership(f, lower, grid)
        star = check_starlike(f, grid)
        ok = premise.passed and lower_rep.passed and star.passed and lower_rep.verdicts["agree"]
        margin = min(lower_rep.margin_above_threshold, star.margin_above_threshold)
        result.record(ok, margin, None if ok else {
            "case": i, "seed": seed, "p": p.to_dict(),
            "premise": premise.passed, "lower": lower_rep.passed, "starlike": star.passed,
        })
    return result


def bernardi_closure_suite(sigma=3.0, n=1, cases=100, seed=DEFAULT_SEED, gammas=(0.5, 1.0, 2.0), grid=None,
                           order=None):
    """The same sampled members, transformed by Bernardi, must stay in the class at ``n``."""
    grid = grid or GridSpec()
    order = order or grid.adequate_order()
    upper, lower = ops.OperatorSpec(sigma, n + 1), ops.OperatorSpec(sigma, n)
    result = SuiteResult("bernardi-closure", params={"sigma": float(sigma), "n": n, "cases": cases, "seed": seed,
                                                     "gammas": list(gammas), "order": order})
    for i, p, f in sample_class_members(upper, cases, seed, order):
        for gamma in gammas:
            rep = check_class_membership(ops.bernardi(gamma, f), lower, grid)
            result.record(rep.passed, rep.margin_above_threshold, None if rep.passed else {
                "case": i, "seed": seed, "gamma": gamma, "p": p.to_dict(),
            })
    return result


def bound_suite(sigma=3.0, n=1, cases=100, seed=DEFAULT_SEED, order=64):
    """Sampled members at ``n`` never exceed the coefficient bound by more than the slack."""
    spec = ops.OperatorSpec(sigma, n)
    result = SuiteResult("bounds", params={"sigma": float(sigma), "n": n, "cases": cases, "seed": seed,
                                           "order": order})
    for i, p, f in sample_class_members(spec, cases, seed, order):
        rep = coefficient_bound_check(f, spec)
        result.record(rep.passed, -rep.residual_norm, None if rep.passed else {"case": i, "p": p.to_dict()})
    return result


__all__ = [
    "CaratheodoryFunction",
    "CheckReport",
    "GridSpec",
    "SuiteResult",
    "bernardi_closure_suite",
    "bound_suite",
    "caratheodory_series",
    "check_class_membership",
    "check_lemma3_conditions",
    "check_starlike",
    "check_univalence_condition",
    "coefficient_bound",
    "coefficient_bound_check",
    "inclusion_suite",
    "max_abs_diff",
    "ode_residual",
    "re_min",
    "re_ratio_min",
    "sample_class_members",
    "sample_ratio",
    "univalence_ratio_series",
]
