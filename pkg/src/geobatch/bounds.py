"""Redundancy bounds for binary primitive batch codes, and the data of the
epsilon/delta comparison plot (k = n^eps, r = O(n^delta)).

Only two quantities here are exact inequalities: r >= k - 1, and
r <= l*k*q^(l+1) for the explicit subspace codes when k <= q // l^2.
The rest are order-of-growth values with the hidden constant set to 1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from geobatch.errors import InvalidParams
from geobatch.finite_field import is_prime_power

MAX_ELL = 4


@dataclass(frozen=True)
class ExplicitBound:
    ell: int
    q: int
    n_construction: int  # q^(2l+1) >= n
    value: int  # l * k * q^(l+1)
    valid: bool  # k <= q // l^2


@dataclass(frozen=True)
class BoundReport:
    n: int
    k: int
    lower_k_minus_1: int
    lower_order: float
    random_bound_order: float
    explicit_bounds: tuple[ExplicitBound, ...] = field(default=())

    def rows(self) -> list[tuple[str, object, bool, object]]:
        """(name, value, exact, valid) rows; valid is '' where it does not apply."""
        out = [
            ("lower_k_minus_1", self.lower_k_minus_1, True, ""),
            ("lower_order_max_sqrt_n_k", self.lower_order, False, ""),
            ("random_order_k32_sqrt_n_ln_n", self.random_bound_order, False, ""),
        ]
        for e in self.explicit_bounds:
            out.append((f"explicit_l{e.ell}_q{e.q}_n{e.n_construction}", e.value, True, e.valid))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value", "exact", "valid"])
        for name, value, exact, valid in self.rows():
            w.writerow([name, value, str(exact).lower(), str(valid).lower() if valid != "" else ""])
        return buf.getvalue()


def smallest_prime_power_at_least(x: int) -> int:
    q = max(2, x)
    while not is_prime_power(q):
        q += 1
    return q


def min_q_for(n: int, ell: int) -> int:
    """Smallest prime power q with q^(2l+1) >= n."""
    d = 2 * ell + 1
    root = max(2, int(round(n ** (1 / d))))
    while root > 2 and (root - 1) ** d >= n:
        root -= 1
    while root**d < n:
        root += 1
    return smallest_prime_power_at_least(root)


def explicit_redundancy(ell: int, k: int, q: int) -> int:
    return ell * k * q ** (ell + 1)


def explicit_k_limit(ell: int, q: int) -> int:
    return q // ell**2


def bound_report(n: int, k: int) -> BoundReport:
    if n < 1 or k < 1:
        raise InvalidParams("n and k must be positive")
    explicit = []
    for ell in range(1, MAX_ELL + 1):
        q = min_q_for(n, ell)
        explicit.append(
            ExplicitBound(ell, q, q ** (2 * ell + 1), explicit_redundancy(ell, k, q), k <= explicit_k_limit(ell, q))
        )
    return BoundReport(
        n=n,
        k=k,
        lower_k_minus_1=k - 1,
        lower_order=max(math.sqrt(n), k),
        random_bound_order=k**1.5 * math.sqrt(n) * math.log(n),
        explicit_bounds=tuple(explicit),
    )


# -- plot data ----------------------------------------------------------------

# earlier constructions, as drawn in the published comparison plot
PRIOR_WORK = (
    (0, 0.5),
    (0.15, 0.8),
    (0.2, 0.8),
    (0.21875, 0.875),
    (0.25, 0.875),
    (0.25, 0.91666666),
    (0.5, 0.999),
    (1, 0.99999999),
)


@dataclass(frozen=True)
class FigurePoint:
    series: str
    epsilon: float
    delta: float


def explicit_segment(ell: int) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Endpoints of delta = eps + (l+1)/(2l+1) for eps in [0, 1/(2l+1)]."""
    d = 2 * ell + 1
    return (Fraction(0), Fraction(ell + 1, d)), (Fraction(1, d), Fraction(ell + 2, d))


def figure1_data() -> list[FigurePoint]:
    pts = [FigurePoint("lower_bound", e, dl) for e, dl in ((0, 0.5), (0.5, 0.5), (1, 1))]
    pts += [FigurePoint("old_results", float(e), float(dl)) for e, dl in PRIOR_WORK]
    pts += [FigurePoint("theorem1", 0, 0.5), FigurePoint("theorem1", 1 / 3, 1)]
    for ell in range(1, MAX_ELL + 1):
        for e, dl in explicit_segment(ell):
            pts.append(FigurePoint(f"theorem3_l{ell}", float(e), float(dl)))
    return pts


def figure1_csv() -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "epsilon", "delta"])
    for p in figure1_data():
        w.writerow([p.series, repr(float(p.epsilon)), repr(float(p.delta))])
    return buf.getvalue()
