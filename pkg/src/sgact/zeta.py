"""Semigroup zeta function zeta_S(z) = exp(sum_n N_n z^n / n)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import SemigroupSpec, SpecError
from .periodic import EntropyReport, PeriodicCountSeries, periodic_series


@dataclass(frozen=True)
class RationalForm:
    """numerator / denominator, coefficients in increasing powers of z."""

    numerator: tuple
    denominator: tuple

    def __call__(self, z):
        return _polyval(self.numerator, z) / _polyval(self.denominator, z)

    @property
    def poles(self) -> list:
        # every form built here has a linear denominator
        a0, a1 = self.denominator
        return [Fraction(-a0) / a1]

    @property
    def zeros(self) -> list:
        b0, b1 = self.numerator
        return [Fraction(-b0) / b1]

    def log_coefficients(self, n_max: int) -> list:
        """Taylor coefficients of log(numerator/denominator), orders 1..n_max.

        For linear factors, log(1 - r z) = -sum r^n z^n / n.
        """
        r_num = -Fraction(self.numerator[1]) / self.numerator[0]
        r_den = -Fraction(self.denominator[1]) / self.denominator[0]
        return [(r_den ** n - r_num ** n) / n for n in range(1, n_max + 1)]

    def __str__(self) -> str:
        return f"({_fmt_poly(self.numerator)})/({_fmt_poly(self.denominator)})"


def _polyval(coeffs, z):
    out = 0
    for c in reversed(coeffs):
        out = out * z + complex(c)
    return out


def _fmt_poly(coeffs) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        c = Fraction(c)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            term = str(mag)
        else:
            term = ("" if mag == 1 else f"{mag} ") + "z" + ("" if k == 1 else f"^{k}")
        parts.append((sign, term))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        s += f"{sign}{term}"
    return s


@dataclass
class ZetaSeries:
    coeffs: list            # c_n = N_n / n, exact
    radius_estimate: float
    rational_form: RationalForm | None
    p: int
    skew_counts: list

    @property
    def n_max(self) -> int:
        return len(self.coeffs)


def estimate_radius(counts) -> float:
    """exp(-h) with h the mean of the last three increments log N_k - log N_{k-1}.

    The increments converge geometrically to the growth rate, much faster
    than the root-test values n^{-1} log N_n.
    """
    logs = [math.log(max(c, 1)) for c in counts]
    if len(logs) < 2:
        h = logs[-1]
    else:
        inc = [b - a for a, b in zip(logs, logs[1:])][-3:]
        h = sum(inc) / len(inc)
    if h <= 0:
        return math.inf
    return math.exp(-h)


def zeta_rational(spec: SemigroupSpec) -> RationalForm:
    """(1 - z) / (1 - (D/p) z) with D the sum of the generator degrees.

    Valid for every circle spec: each word of degree D_w has D_w - 1 fixed
    points, so N_n = (D/p)^n - 1 whether or not the maps are linear.
    """
    if not spec.is_circle:
        raise SpecError("spec: closed form needs circle generators; use series mode")
    r = Fraction(sum(spec.degrees), spec.p)
    return RationalForm((1, -1), (1, -r))


def zeta_series(series: PeriodicCountSeries) -> ZetaSeries:
    coeffs = [c / n for n, c in enumerate(series.counts, start=1)]
    rational = zeta_rational(series.spec) if series.spec.is_circle else None
    return ZetaSeries(coeffs, estimate_radius(series.counts), rational,
                      series.p, list(series.skew_counts))


def zeta_eval(zs: ZetaSeries, z, mode: str = "auto") -> complex:
    """zeta_S(z) from the rational form or from the truncated series."""
    z = complex(z)
    if mode == "auto":
        mode = "rational" if zs.rational_form is not None else "series"
    if mode == "rational":
        if zs.rational_form is None:
            raise SpecError("mode: no rational form for this spec")
        den = _polyval(zs.rational_form.denominator, z)
        if abs(den) < 1e-14:
            raise SpecError(f"z: {z} is a pole")
        return _polyval(zs.rational_form.numerator, z) / den
    if mode != "series":
        raise SpecError(f"mode: unknown mode {mode!r}")
    if abs(z) >= 0.95 * zs.radius_estimate:
        raise SpecError(f"z: |z| = {abs(z):.6g} outside 0.95 * radius {zs.radius_estimate:.6g}")
    s = 0j
    for c in reversed(zs.coeffs):
        s = (s + float(c)) * z
    return cmath.exp(s)


def truncation_bound(zs: ZetaSeries, z) -> float:
    """Bound on |exp(tail)| - 1 style error for circle specs.

    The omitted exponent is at most sum_{n>N} (D|z|/p)^n / n, bounded by
    q^{N+1} / ((N+1)(1-q)) with q = D|z|/p; the value error is
    |zeta| * (exp(bound) - 1).
    """
    if zs.rational_form is None:
        raise SpecError("spec: tail bound needs the closed form")
    q = abs(z) / float(zs.rational_form.poles[0])
    if q >= 1:
        return math.inf
    N = zs.n_max
    t = q ** (N + 1) / ((N + 1) * (1 - q))
    return abs(zeta_eval(zs, z, "rational")) * math.expm1(t)


@dataclass
class RadiusReport:
    radius_estimate: float
    radius_exact: float | None
    entropy_radius: float
    difference: float
    tolerance: float
    ok: bool


def radius_vs_entropy(zs: ZetaSeries, er: EntropyReport) -> RadiusReport:
    """Compare the radius of convergence with exp(-h_top(S)).

    With a rational form the pole p/D is compared to float precision;
    otherwise the estimate must be within 0.06 / n_max.
    """
    target = math.exp(-er.topological_entropy)
    if zs.rational_form is not None:
        exact = float(zs.rational_form.poles[0])
        diff = abs(exact - target)
        tol = 1e-14
        return RadiusReport(zs.radius_estimate, exact, target, diff, tol, diff <= tol)
    diff = abs(zs.radius_estimate - target)
    tol = 0.06 / zs.n_max
    return RadiusReport(zs.radius_estimate, None, target, diff, tol, diff <= tol)


def skew_zeta_coefficients(series: PeriodicCountSeries) -> list:
    """Coefficients Per_n / n of log zeta_{F_G}(w)."""
    return [Fraction(c, n) for n, c in enumerate(series.skew_counts, start=1)]


def skew_identity_check(series: PeriodicCountSeries) -> bool:
    """zeta_S(z) = zeta_{F_G}(z/p), coefficient by coefficient, exactly.

    The z^n coefficient of log zeta_{F_G}(z/p) is Per_n / (n p^n).  For
    circle specs Per_n must also equal D^n - p^n.
    """
    p = series.p
    skew = skew_zeta_coefficients(series)
    zs = zeta_series(series)
    ok = all(c == s / p ** n for n, (c, s) in enumerate(zip(zs.coeffs, skew), start=1))
    if series.spec.is_circle:
        D = sum(series.spec.degrees)
        ok = ok and all(s == D ** n - p ** n for n, s in enumerate(series.skew_counts, start=1))
    return ok


def zeta_from_spec(spec: SemigroupSpec, n_max: int) -> ZetaSeries:
    return zeta_series(periodic_series(spec, n_max))
