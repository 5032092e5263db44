"""Closed-form example functions, expanded by series arithmetic.

=========  =================================  ==========================
name       f(z)                               (2zf' + z^2 f'')/(f + zf')
=========  =================================  ==========================
f1         2[1 - (1-z) e^z] / z               1 + z
f2         2[1 - (1+z) e^(-z)] / z            1 - z
f3         -2[z + log(1-z)] / z               1/(1-z)
f4         2[z - log(1+z)] / z                1/(1+z)
koebe      z / (1-z)^2                        (1+2z)/(1-z)
identity   z                                  1
=========  =================================  ==========================

The series are never typed in; each is built from its closed form with
``exp_series``/``log_series`` and a division by ``z``. Independent termwise
formulas (used to produce the golden files) are::

    f1: a_k = 2k/(k+1)!            f2: a_k = (-1)**(k+1) 2k/(k+1)!
    f3: a_k = 2/(k+1)              f4: a_k = (-1)**(k+1) 2/(k+1)
"""

from __future__ import annotations

from dataclasses import dataclass

from starconv.checks import (
    CheckReport,
    GridSpec,
    SuiteResult,
    check_class_membership,
    check_starlike,
    check_univalence_condition,
    univalence_ratio_series,
)
from starconv.errors import UnknownExample
from starconv.operators import OperatorSpec
from starconv.series import PowerSeries, exp_series, geometric, log_series, max_abs_diff

NAMES = ("f1", "f2", "f3", "f4", "koebe", "identity")
CORE_EXAMPLES = ("f1", "f2", "f3", "f4")
RATIO_TOLERANCE = 1e-12


@dataclass(frozen=True)
class NamedExample:
    name: str
    series: PowerSeries
    expected_ratio: PowerSeries

    def __post_init__(self):
        self.series.require_normalized(f"example {self.name}")
        if self.expected_ratio.coeffs[0] != 1:
            raise ValueError(f"expected ratio of {self.name} must start with 1")


def _z(order):
    return PowerSeries.identity(order)


def _f1(m):
    e = exp_series(_z(m))
    return 2 * (1 - (1 - _z(m)) * e)


def _f2(m):
    e = exp_series(-_z(m))
    return 2 * (1 - (1 + _z(m)) * e)


def _f3(m):
    return -2 * (_z(m) + log_series(1 - _z(m)))


def _f4(m):
    return 2 * (_z(m) - log_series(1 + _z(m)))


_NUMERATORS = {"f1": _f1, "f2": _f2, "f3": _f3, "f4": _f4}


def _expected_ratio(name, order):
    z = _z(order)
    if name == "f1":
        return 1 + z
    if name == "f2":
        return 1 - z
    if name == "f3":
        return geometric(order)
    if name == "f4":
        return geometric(order, -1.0)
    if name == "koebe":
        return (1 + 2 * z) * geometric(order)
    return PowerSeries.constant(1.0, order)


def build_example(name, order=64):
    """Series of a named example truncated at ``order`` (at least 4)."""
    if name not in NAMES:
        raise UnknownExample(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    if order < 4:
        raise ValueError("examples need order >= 4")
    if name in _NUMERATORS:
        # numerator to order+1, then divide by z
        series = _NUMERATORS[name](order + 1).divide_z(1)
    elif name == "koebe":
        series = _z(order) * geometric(order) * geometric(order)
    else:
        series = _z(order)
    return NamedExample(name, series, _expected_ratio(name, order))


def verify_example(ex, grid=None, order=None):
    """Ratio identity, the univalence condition and starlikeness for one example.

    ``ex.series`` is used for the ratio identity. Grid checks rebuild the
    example at ``order`` (default: adequate for the grid) so that truncation
    does not pollute values near the boundary.
    """
    grid = grid or GridSpec()
    if ex.series.order < 8:
        raise ValueError("verify_example needs an example built at order >= 8")
    ratio = univalence_ratio_series(ex.series)
    residual = max_abs_diff(ratio, ex.expected_ratio)
    ratio_rep = CheckReport(kind="ratio_identity", passed=residual <= RATIO_TOLERANCE, residual_norm=residual,
                            tolerance=RATIO_TOLERANCE)
    order = order or max(grid.adequate_order(), ex.series.order)
    f = ex.series if order == ex.series.order else build_example(ex.name, order).series
    uni = check_univalence_condition(f, grid)
    star = check_starlike(f, grid)
    subs = {"ratio_identity": ratio_rep, "univalence": uni, "starlike": star}
    report = CheckReport(
        kind=f"example:{ex.name}",
        passed=all(s.passed for s in subs.values()),
        grid=grid,
        threshold=0.0,
        min_real_part=min(uni.min_real_part, star.min_real_part),
        residual_norm=residual,
        tolerance=RATIO_TOLERANCE,
        subreports=subs,
    )
    report.verdicts = {k: s.passed for k, s in subs.items()}
    return report


def examples_suite(grid=None, order=None, names=CORE_EXAMPLES, identity_order=64):
    """Every example passes verification and lies in the class for ``sigma=2, n=1``.

    The ratio identity is checked at ``identity_order``; rounding in the
    series quotient grows with the order, so the grid order is too large.
    """
    grid = grid or GridSpec()
    order = order or grid.adequate_order()
    spec = OperatorSpec(2, 1)
    result = SuiteResult("examples", params={"names": list(names), "order": order,
                                             "identity_order": identity_order})
    for name in names:
        ex = build_example(name, identity_order)
        rep = verify_example(ex, grid, order)
        member = check_class_membership(build_example(name, order).series, spec, grid)
        ok = rep.passed and member.passed
        margin = min(rep.min_real_part, member.margin_above_threshold)
        result.record(ok, margin, None if ok else {"example": name, "verdicts": rep.verdicts,
                                                   "class_sigma2_n1": member.passed})
    return result
