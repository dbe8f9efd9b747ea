"""Explicit remainders for the approximate functional equation.

Three layers:

* the one-sum formula zeta(s) = sum_{n<=x} n^-s - x^(1-s)/(1-s) + R(s;x) with
  an explicit bound on R;
* the two-sum formula zeta(s) = sum_{n<=x} n^-s + chi(s) sum_{n<=y} n^(s-1) + R1
  with the full parametric error terms E1..E4 and their t-uniform closed forms;
* the constant tables (E, F and their chi_tilde variants) per regime and
  height threshold, plus the symmetric zeta^2 remainder built on top of them.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .chi_stirling import C2, C_total, STIRLING_SUP_BOUND, chi, chi_tilde, golden_section_max
from .core_numerics import (
    EULER_GAMMA,
    StripPoint,
    as_point,
    dirichlet_sum,
    sieve_tables,
    zeta_reference,
)
from .errors import ArgumentError, ConstraintError, DomainError

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)
R0_MAX = math.pi / SQRT2
R0_STAR = 0.52777                 # printed optimum, used for the tables
REGIMES = ("x<=y", "x>y", "x=y")
THRESHOLDS = (TWO_PI, 1.0e3, 1.0e10)
THRESHOLD_LABELS = {TWO_PI: "2pi", 1.0e3: "1e3", 1.0e10: "1e10"}
# printed decimals of every nonzero table entry, per threshold and regime
TABLE_DECIMALS = {
    TWO_PI: {"x<=y": 3, "x>y": 3, "x=y": 3},
    1.0e3: {"x<=y": 3, "x>y": 3, "x=y": 3},
    1.0e10: {"x<=y": 4, "x>y": 3, "x=y": 5},
}


def round_up(value: float, decimals: int) -> float:
    """Ceiling at ``decimals`` decimal places (upper bounds stay upper bounds)."""
    scale = 10.0**decimals
    # guard against representation noise such as 36.094000000000001
    return math.ceil(value * scale - 1e-9) / scale


def round_down(value: float, decimals: int) -> float:
    scale = 10.0**decimals
    return math.floor(value * scale + 1e-9) / scale


# ---------------------------------------------------------------------------
# one-sum remainder
# ---------------------------------------------------------------------------

def r_simple_bound(sigma: float, t: float, x: float) -> float:
    """Bound for |R(s;x)| in zeta(s) = sum_{n<=x} n^-s - x^(1-s)/(1-s) + R(s;x).

    x^-sigma (1/2 + (3x/|t|) sqrt(1 + (sigma/t)^2) (1 - (t/2x) cot(t/2x))),
    continued to x^-sigma (1/2 + sigma/(4x)) at t = 0.
    """
    if not 0.0 < sigma <= 1.0:
        raise DomainError("sigma must lie in (0, 1]")
    if x < 1.0:
        raise DomainError("x must be >= 1")
    at = abs(t)
    if at >= TWO_PI * x:
        raise DomainError(f"|t| = {at} must stay below 2 pi x = {TWO_PI * x}")
    if at == 0.0:
        return x ** (-sigma) * (0.5 + sigma / (4.0 * x))
    u = at / (2.0 * x)
    if u < 1e-4:
        # 1 - u cot u = u^2/3 + u^4/45 + ...
        one_minus = u * u / 3.0 + u**4 / 45.0
    else:
        one_minus = 1.0 - u / math.tan(u)
    return x ** (-sigma) * (0.5 + 3.0 * x / at * math.sqrt(1.0 + (sigma / at) ** 2) * one_minus)


def r_simple_remainder(s, x: float) -> float:
    """|zeta(s) - sum_{n<=x} n^-s + x^(1-s)/(1-s)| through the zeta oracle."""
    p = as_point(s)
    z = zeta_reference(p)
    with mpmath.workdps(30):
        sp = mpmath.mpc(p.sigma, p.t)
        main = dirichlet_sum(p, x, digits=30)
        tail = mpmath.power(x, 1 - sp) / (1 - sp)
        return float(abs(z - main + tail))


def truncated_sum_constant(c: float, t0: float) -> float:
    """Coefficient K with |zeta(s) - sum_{n < c|t|} n^-s| <= K (c|t|)^-sigma... scaled to t^-sigma at c = 1.

    Returns c + 1/2 + (3c/t0) sqrt(1 + t0^2) (1 - (1/2c) cot(1/2c)); for c = 1 this is the
    coefficient of t^-sigma.
    """
    if c <= 1.0 / TWO_PI:
        raise DomainError("c must exceed 1/(2 pi)")
    if t0 <= 0:
        raise DomainError("t0 must be positive")
    u = 1.0 / (2.0 * c)
    return c + 0.5 + 3.0 * c / t0 * math.sqrt(1.0 + t0 * t0) * (1.0 - u / math.tan(u))


# ---------------------------------------------------------------------------
# |e^z - 1| away from the zeros
# ---------------------------------------------------------------------------

def min_exp_bound(r: float) -> float:
    """Lower bound 1 - e^{-r/sqrt 2} for |e^z - 1| outside the discs |z - 2k pi i| < r."""
    if not 0.0 < r <= R0_MAX:
        raise DomainError(f"r must lie in (0, pi/sqrt 2], got {r}")
    return -math.expm1(-r / SQRT2)


def min_exp_bound_experimental(r: float) -> float:
    """The conjectured sharper value 1 - e^{-r}; never used in certified bounds."""
    if not 0.0 < r <= R0_MAX:
        raise DomainError(f"r must lie in (0, pi/sqrt 2], got {r}")
    return -math.expm1(-r)


def min_exp_sample(r: float, n: int, rng: np.random.Generator, ks=range(-2, 3), outside: bool = False):
    """Minimum of |e^z - 1| over random points on the circles |z - 2k pi i| = r.

    With ``outside`` the points are drawn from an annulus r <= |z - 2k pi i| <= r + 2
    instead, still outside every disc of radius r.
    """
    ks = np.asarray(list(ks))
    k = rng.choice(ks, size=n)
    phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
    rad = np.full(n, r) if not outside else rng.uniform(r, r + 2.0, size=n)
    z = rad * np.exp(1j * phi) + 2j * math.pi * k
    # a point of the annulus may fall into a neighbouring disc only if r + 2 > 2 pi - r
    return float(np.min(np.abs(np.expm1(z))))


# ---------------------------------------------------------------------------
# parametric error terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AfeParameters:
    """Free parameters of the two-sum remainder bound.

    Admissibility at a point (sigma, t) with Dirichlet lengths x <= y:
    (a) 0 < r0 <= pi/sqrt 2,
    (b) r0 x/|t| <= c <= 3 sqrt2 / (10 + 4(1 - sigma)/t0),
    (c) r0 <= lambda0 <= c|t|/x,
    (d) d >= pi x / (2 floor x).
    """

    r0: float
    c: float
    lambda0: float
    d: float
    t0: float = TWO_PI
    sigma0: float = 0.5

    @classmethod
    def default(cls, x: float, r0: float = R0_STAR, t0: float = TWO_PI, sigma0: float = 0.5):
        """r0 = lambda0, c = r0/(2 pi), d = pi x/(2 floor x)."""
        return cls(r0=r0, c=r0 / TWO_PI, lambda0=r0, d=math.pi * x / (2.0 * math.floor(x)),
                   t0=t0, sigma0=sigma0)

    def check(self, sigma: float, t: float, x: float) -> None:
        at = abs(t)
        eps = 1e-12
        if not 0.0 < self.r0 <= R0_MAX * (1 + eps):
            raise ConstraintError("a", f"r0 = {self.r0} not in (0, pi/sqrt 2]")
        c_lo = self.r0 * x / at
        c_hi = 3.0 * SQRT2 / (10.0 + 4.0 * (1.0 - sigma) / self.t0)
        if not c_lo * (1 - eps) <= self.c <= c_hi * (1 + eps):
            raise ConstraintError("b", f"c = {self.c} outside [{c_lo}, {c_hi}]")
        l_hi = self.c * at / x
        if not self.r0 * (1 - eps) <= self.lambda0 <= l_hi * (1 + eps):
            raise ConstraintError("c", f"lambda0 = {self.lambda0} outside [{self.r0}, {l_hi}]")
        d_lo = math.pi * x / (2.0 * math.floor(x))
        if self.d < d_lo * (1 - eps):
            raise ConstraintError("d", f"d = {self.d} below pi x/(2 floor x) = {d_lo}")


@dataclass(frozen=True)
class AfeErrorTerms:
    """E1..E4 with their auxiliary quantities, the assembled E and the reflected F.

    ``E`` and ``F`` follow the displayed assembly 2^-sigma C2(t) (E1+E2+E3+E4).
    ``E_certified`` and ``F_certified`` use the factor 2^-min(sigma, 1/2)
    instead, which is what the bound on |e^{-i pi s} Gamma(1-s)| actually gives
    for sigma > 1/2 (see :func:`explicit_zeta.chi_stirling.gamma_factor_bound`).
    """

    E1: float
    E2: float
    E3: float
    E4: float
    E: float
    F: float
    E_certified: float
    F_certified: float
    cE1: float
    cE2: float
    cE3: float
    cE4: float
    cE5: float
    cE6: float
    Phi1: float
    Phi2: float
    Phi3: float


def _one_minus_exp_neg(v):
    return -math.expm1(-v)


def _raw_terms(sigma, at, x, y, p):
    fx, fy = math.floor(x), math.floor(y)
    frac_y = y - fy
    r0, c, lam, d = p.r0, p.c, p.lambda0, p.d
    e1 = 2 * c * c + 2 * c + 1
    ct, dt = c * at / x, d * at / x
    e2 = d - c + x / at * (math.log(_one_minus_exp_neg(dt)) - math.log(_one_minus_exp_neg(ct)))
    e3 = 0.0 if dt > 700 else x / (fx * math.sqrt(math.pi * at) * math.expm1(dt))
    phi1 = c - math.atan(c / (1 + c))
    phi2 = d * fx / x - math.pi / 2
    E1 = e1 ** ((sigma - 1) / 2) * (math.sqrt(at / math.pi) * e2 * math.exp(-at * phi1)
                                    + e3 * math.exp(-at * phi2))
    e4 = 1 - (1 - sigma + at) * 2 * SQRT2 * c / (3 * at * (1 - c * SQRT2))
    e5 = lam * (x - fx) + (1 - sigma) ** 2 / (4 * at * e4)
    e6 = ((1 - sigma) * r0 / (TWO_PI * fy) + r0 * (x * y - fy * fx) / fy
          + r0 * r0 * x * y * (1 + (1 - sigma) / at) * (0.5 + r0 / (3 * (TWO_PI * fy - r0)))
          / (TWO_PI * fy * fy))
    m = _one_minus_exp_neg(r0 / SQRT2)
    E2 = (math.sqrt(2 / e4) * (1 / m + 1 / math.expm1(lam)) * math.exp(e5)
          + r0 / m * math.sqrt(x / (2 * y)) * (1 + 1 / y) ** (sigma - 1) * math.exp(e6))
    phi1m = -c - math.atan(-c / (1 - c))
    E3 = (c ** (sigma - 1) * (2 - c + math.pi * x / at) / _one_minus_exp_neg(ct)
          * math.sqrt(at / math.pi) * math.exp(-at * phi1m))
    phi3 = math.pi / 2 + math.atan((1 + math.pi * x * (1 - 2 * frac_y) / at) / c) - fx / x * c
    E4 = (x * (1 - math.pi * x / at) ** (sigma - 1) / (fx * m * math.sqrt(math.pi * at))
          * math.exp(-at * phi3))
    return dict(E1=E1, E2=E2, E3=E3, E4=E4, cE1=e1, cE2=e2, cE3=e3, cE4=e4, cE5=e5, cE6=e6,
                Phi1=phi1, Phi2=phi2, Phi3=phi3)


def _assembled(sigma, at, raw):
    total = raw["E1"] + raw["E2"] + raw["E3"] + raw["E4"]
    return 2.0 ** (-sigma) * C2(at) * total, 2.0 ** (-min(sigma, 0.5)) * C2(at) * total


def afe_error_terms(s, x: float, y: float, p: AfeParameters) -> AfeErrorTerms:
    """Evaluate the parametric remainder bound at s for lengths x <= y with 2 pi x y = |t|."""
    pt = as_point(s)
    sigma, at = pt.sigma, abs(pt.t)
    if not 0.0 <= sigma <= 1.0:
        raise DomainError("sigma must lie in [0, 1]")
    if p.t0 < TWO_PI or at <= p.t0:
        raise DomainError(f"require |t| > t0 >= 2 pi (|t| = {at}, t0 = {p.t0})")
    if x < 1 or y < 1 or x > y * (1 + 1e-12):
        raise DomainError("require 1 <= x <= y")
    if abs(TWO_PI * x * y - at) > 1e-9 * at:
        raise DomainError("require 2 pi x y = |t|")
    p.check(sigma, at, x)
    raw = _raw_terms(sigma, at, x, y, p)
    E, E_cert = _assembled(sigma, at, raw)
    if sigma == 0.5 or x == y:
        F, F_cert = E, E_cert
    else:
        reflected = _raw_terms(1.0 - sigma, at, x, y, p)
        E_ref, E_ref_cert = _assembled(1.0 - sigma, at, reflected)
        if sigma > 0.5:
            factor = 1.0 + C_total(sigma, at, p.t0) / at
        else:
            cc = C_total(1.0 - sigma, at, p.t0)
            factor = 1.0 + cc / (at - cc)
        F, F_cert = E_ref * factor, E_ref_cert * factor
    return AfeErrorTerms(E=E, F=F, E_certified=E_cert, F_certified=F_cert, **raw)


# ---------------------------------------------------------------------------
# t-uniform closed forms and the tables
# ---------------------------------------------------------------------------

def closed_form_E_bounds(sigma0: float, t_abs: float, r0: float):
    """Majorants of E1..E4 uniform in x <= y and sigma >= sigma0 for |t| >= t_abs.

    Parameters are lambda0 = r0, c = r0/(2 pi), d = pi x/(2 floor x).
    """
    if not 0.0 < r0 <= R0_MAX:
        raise DomainError("r0 must lie in (0, pi/sqrt 2]")
    if t_abs < TWO_PI:
        raise DomainError("t_abs must be >= 2 pi")
    if not 0.0 <= sigma0 <= 1.0:
        raise DomainError("sigma0 must lie in [0, 1]")
    t = t_abs
    s0 = sigma0
    q = math.floor(math.sqrt(t / TWO_PI))
    a = _one_minus_exp_neg(r0 / SQRT2)
    root = r0 * math.sqrt(t / TWO_PI)
    k = 0.5 * math.pi * math.sqrt(TWO_PI * t)
    E1 = (math.sqrt(t / math.pi) * math.exp(-t * (r0 / TWO_PI - math.atan(r0 / (TWO_PI + r0))))
          * (math.pi - r0 / TWO_PI - math.log(_one_minus_exp_neg(root)) / math.sqrt(TWO_PI * t))
          + 2 * math.exp(-k) / (math.sqrt(math.pi * t) * _one_minus_exp_neg(k)))
    E2 = (math.sqrt(6 * (math.pi * SQRT2 - r0) / (3 * math.pi * SQRT2 - r0 * (5 + 2 * (1 - s0) / t)))
          * (1 / a + 1 / math.expm1(r0))
          * math.exp(r0 + (1 - s0) ** 2 * (6 * math.pi - 3 * r0 * SQRT2)
                     / (4 * t * (6 * math.pi - 5 * r0 * SQRT2) - 8 * (1 - s0) * r0 * SQRT2))
          + r0 / SQRT2 / a
          * math.exp(r0 * r0 * (t + 1 - s0) / (TWO_PI * t) * (0.5 + r0 / (3 * (TWO_PI * q - r0)))
                     * (1 + 1 / q) ** 2 + r0 * (2 + 1 / q) + (1 - s0) * r0 / TWO_PI / q))
    E3 = ((r0 / TWO_PI) ** (s0 - 1) * ((2 - r0 / TWO_PI) * math.sqrt(2 * t / math.pi) + 1)
          / (_one_minus_exp_neg(root) * SQRT2)
          * math.exp(-t * (-r0 / TWO_PI + math.atan(r0 / (TWO_PI - r0)))))
    E4 = ((1 - math.sqrt(math.pi / (2 * t))) ** (s0 - 1) * 2 / (a * math.sqrt(math.pi * t))
          * math.exp(-t * (math.pi / 2 - r0 / TWO_PI + math.atan(TWO_PI / r0))))
    return E1, E2, E3, E4


def r0_objective(r0: float) -> float:
    """Limit |t| -> infinity of the closed-form E2 majorant (E1, E3, E4 vanish there)."""
    if not 0.0 < r0 <= R0_MAX:
        raise DomainError("r0 must lie in (0, pi/sqrt 2]")
    a = _one_minus_exp_neg(r0 / SQRT2)
    return (math.sqrt(6 * (math.pi * SQRT2 - r0) / (3 * math.pi * SQRT2 - 5 * r0))
            * (1 / a + 1 / math.expm1(r0)) * math.exp(r0)
            + r0 / SQRT2 / a * math.exp(r0 * r0 / (4 * math.pi) + 2 * r0))


def optimize_r0(lo: float = 0.01, hi: float = R0_MAX, tol: float = 1e-7):
    """Golden-section minimisation of :func:`r0_objective`; returns (r0_star, minimum)."""
    x, neg = golden_section_max(lambda r: -r0_objective(r), lo, hi, tol)
    return x, -neg


def symmetric_EL_bound(sigma: float, t: float) -> float:
    """1/2 + 9^sigma/(2 sqrt t) + (11/10)^2 (2 pi/(7t)) 2^(3 sigma/2), first two Riemann-Siegel terms."""
    if not 0.0 < sigma <= 1.0 or t <= 0:
        raise DomainError("require sigma in (0, 1] and t > 0")
    return 0.5 + 9.0**sigma / (2.0 * math.sqrt(t)) + 1.21 * TWO_PI / (7.0 * t) * 2.0 ** (1.5 * sigma)


def symmetric_total(t_abs: float, sigma0: float = 0.5) -> float:
    """Coefficient of (|t|/2 pi)^(-sigma/2) bounding |R1(s; X, X)|, X = sqrt(|t|/2 pi)."""
    return (symmetric_EL_bound(1.0, t_abs)
            + symmetric_EL_bound(1.0 - sigma0, t_abs) * (1.0 + STIRLING_SUP_BOUND / t_abs))


def tilde_surcharge(sigma: float, t_abs: float, side: str) -> float:
    """Extra constant when chi is replaced by chi_tilde in the two-sum formula."""
    if not 0.0 < sigma <= 1.0 or t_abs < TWO_PI:
        raise DomainError("require sigma in (0, 1] and t_abs >= 2 pi")
    if side == "E":
        return STIRLING_SUP_BOUND / (sigma * math.sqrt(TWO_PI * t_abs))
    if side == "F":
        return STIRLING_SUP_BOUND / (sigma * t_abs)
    raise ArgumentError("side must be 'E' or 'F'")


@dataclass(frozen=True)
class ErrorTable:
    """One (regime, threshold) row: the constants valid for |t| >= threshold."""

    regime: str
    threshold: float
    E: float
    F: float
    E_tilde: float
    F_tilde: float

    @property
    def label(self) -> str:
        return THRESHOLD_LABELS.get(self.threshold, f"{self.threshold:g}")


def raw_table_values(threshold: float, r0: float = R0_STAR, sigma0: float = 0.5) -> dict:
    """Unrounded E, F and tilde values per regime at one threshold."""
    t = threshold
    e_sum = sum(closed_form_E_bounds(sigma0, t, r0))
    f_sum = sum(closed_form_E_bounds(0.0, t, r0))
    E = 2.0 ** (-sigma0) * C2(t) * e_sum
    F = C2(t) * f_sum * (1.0 + STIRLING_SUP_BOUND / t)
    sym = symmetric_total(t, sigma0)
    return {
        "x<=y": dict(E=E, F=0.0, E_tilde=E + tilde_surcharge(0.5, t, "E"), F_tilde=0.0),
        "x>y": dict(E=0.0, F=F, E_tilde=0.0, F_tilde=F + tilde_surcharge(0.5, t, "F")),
        "x=y": dict(E=sym, F=0.0, E_tilde=sym + tilde_surcharge(0.5, t, "E"), F_tilde=0.0),
    }


@lru_cache(maxsize=None)
def error_tables(r0: float = R0_STAR) -> tuple[ErrorTable, ...]:
    """All nine rows, rounded up at the printed precision of each entry."""
    rows = []
    for t in THRESHOLDS:
        raw = raw_table_values(t, r0)
        for regime in REGIMES:
            dec = TABLE_DECIMALS[t][regime]
            vals = {k: round_up(v, dec) if v else 0.0 for k, v in raw[regime].items()}
            rows.append(ErrorTable(regime=regime, threshold=t, **vals))
    return tuple(rows)


def table_row(regime: str, t_abs: float, r0: float = R0_STAR) -> ErrorTable:
    """Row for ``regime`` at the largest threshold not exceeding |t|."""
    if regime not in REGIMES:
        raise ArgumentError(f"unknown regime {regime!r}")
    if t_abs < TWO_PI:
        raise DomainError("tables start at |t| = 2 pi")
    anchor = max(th for th in THRESHOLDS if th <= t_abs)
    for row in error_tables(r0):
        if row.regime == regime and row.threshold == anchor:
            return row
    raise AssertionError("unreachable")


TABLE_FIELDS = ("regime", "threshold", "E", "F", "E_tilde", "F_tilde")


def tables_to_csv(rows=None) -> str:
    rows = error_tables() if rows is None else rows
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_FIELDS)
    for r in rows:
        w.writerow([r.regime, r.label, repr(r.E), repr(r.F), repr(r.E_tilde), repr(r.F_tilde)])
    return buf.getvalue()


def tables_to_json(rows=None) -> str:
    rows = error_tables() if rows is None else rows
    out = []
    for r in rows:
        d = asdict(r)
        d["threshold"] = r.label
        out.append(d)
    return json.dumps(out, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# evaluation with certified error
# ---------------------------------------------------------------------------

def resolve_regime(x: float, y: float) -> str:
    if abs(x - y) <= 1e-9 * y:
        return "x=y"
    return "x<=y" if x < y else "x>y"


def afe_eval(s, x: float, y: float, variant: str = "chi"):
    """Two-sum approximation of zeta(s) and its certified error bound.

    Returns (value, bound, row) where row is the :class:`ErrorTable` used.
    """
    p = as_point(s)
    sigma, at = p.sigma, abs(p.t)
    if not 0.5 <= sigma <= 1.0:
        raise DomainError("sigma must lie in [1/2, 1]")
    if at < TWO_PI:
        raise DomainError("|t| must be >= 2 pi")
    if x < 1 or y < 1 or abs(TWO_PI * x * y - at) > 1e-9 * at:
        raise DomainError("require x, y >= 1 and 2 pi x y = |t|")
    if variant not in ("chi", "chi_tilde"):
        raise ArgumentError("variant must be 'chi' or 'chi_tilde'")
    factor = chi(p) if variant == "chi" else chi_tilde(p)
    value = dirichlet_sum(p, x, "-s") + factor * dirichlet_sum(p, y, "s-1")
    row = table_row(resolve_regime(x, y), at)
    E, F = (row.E, row.F) if variant == "chi" else (row.E_tilde, row.F_tilde)
    bound = E * x ** (-sigma) + F * (at / TWO_PI) ** (0.5 - sigma) * y ** (sigma - 1.0)
    return value, bound, row


# ---------------------------------------------------------------------------
# zeta^2 in the symmetric case
# ---------------------------------------------------------------------------

ZETA_SQ_T_MIN = 1.0e3
ZETA_SQ_GENERAL = 34.765
ZETA_SQ_LINE = 28.621


def afe_squared_error(s) -> float:
    """Bound for the remainder of the symmetric two-sum formula for zeta(s)^2 (|t| >= 1e3)."""
    p = as_point(s)
    at = abs(p.t)
    if at < ZETA_SQ_T_MIN:
        raise DomainError("the zeta^2 remainder bound needs |t| >= 1e3")
    if not 0.5 <= p.sigma <= 1.0:
        raise DomainError("sigma must lie in [1/2, 1]")
    L = at / TWO_PI
    if p.sigma == 0.5:
        return ZETA_SQ_LINE * math.log(L)
    return ZETA_SQ_GENERAL * L ** (0.5 - p.sigma) * math.log(L)


def _harmonic_bound(X):
    return math.log(X) + EULER_GAMMA + 1.0 / (2.0 * X)


def divisor_partial_sum_bound(sigma: float, X: float) -> float:
    """Majorant of sum_{n<=X} d(n) n^(sigma-1) from partial summation with |Delta(u)| <= 3 sqrt u."""
    g = EULER_GAMMA
    lx = math.log(X)
    main = (X**sigma * lx / sigma + (2 * g * sigma - 1) / sigma**2 * X**sigma
            + ((2 * g - 1) * sigma**2 - 2 * g * sigma + 1) / sigma**2)
    if sigma == 0.5:
        integral = lx
    else:
        integral = (X ** (sigma - 0.5) - 1.0) / (sigma - 0.5)
    return main + (1 - sigma) * 3.0 * integral + 3.0 * X ** (sigma - 0.5)


@dataclass(frozen=True)
class ZetaSquaredChain:
    """Derived ingredients and sub-bounds of the zeta^2 remainder coefficients."""

    F_reflected: float        # x > y row at 1e3
    E_reflected: float        # x <= y row scaled by the chi bound for sigma < 1/2
    E_line: float             # x <= y row at 1e3
    chi_factor: float         # |chi(s)| <= chi_factor (t/2 pi)^(1/2 - sigma)
    E_sym: float              # x = y row at 1e3
    R2_general: float         # sup of the R2 majorant / ((t/2pi)^(1/2-sigma) log(t/2pi))
    r2_general: float         # sup of r2 / ((t/2pi)^(1-2 sigma) log(t/2pi))
    R2_line: float
    r2_line: float            # sup of r2 at sigma = 1/2 (absolute)
    general: float            # R2_general + r2_general
    line: float               # R2_line + r2_line / log(1e3/2pi)


def _R2_coefficient(sigma, L, ing):
    H = _harmonic_bound(math.sqrt(L))
    lg = math.log(L)
    if sigma == 0.5:
        terms = 2.0 * H + 2.0 * ing["E_line"] * H + 2.0 * ing["E_line"] * H
    else:
        chi_f = ing["chi_factor"]
        terms = (2.0 * chi_f * H + 2.0 * ing["F_reflected"] * H
                 + 2.0 * chi_f**2 * ing["E_reflected"] * H)
    # |R1(s; X, X)|^2 <= E_sym^2 (t/2 pi)^-sigma, divided by (t/2 pi)^(1/2 - sigma)
    terms += ing["E_sym"] ** 2 * L**-0.5
    return terms / lg


def _r2_value(sigma, L):
    t = TWO_PI * L
    return L ** (1 - 2 * sigma) * 0.75 / t * divisor_partial_sum_bound(sigma, L)


def zeta_squared_chain(t_grid=None, sigma_grid=None) -> ZetaSquaredChain:
    """Re-derive the zeta^2 remainder coefficients from the 1e3 table row.

    Suprema over |t| >= 1e3 are taken on a logarithmic grid; every piece is
    decreasing in t, so the grid maximum sits at t = 1e3.
    """
    row_e = table_row("x<=y", ZETA_SQ_T_MIN)
    row_f = table_row("x>y", ZETA_SQ_T_MIN)
    row_s = table_row("x=y", ZETA_SQ_T_MIN)
    c_sup = STIRLING_SUP_BOUND
    ing = {
        "F_reflected": row_f.F,
        "E_reflected": round_up(row_e.E * (1 + c_sup / (ZETA_SQ_T_MIN - c_sup)), 3),
        "E_line": row_e.E,
        "chi_factor": round_up(1 + c_sup / ZETA_SQ_T_MIN, 5),
        "E_sym": row_s.E,
    }
    if t_grid is None:
        t_grid = np.geomspace(ZETA_SQ_T_MIN, 1e12, 400)
    if sigma_grid is None:
        sigma_grid = np.concatenate([np.linspace(0.5 + 1e-9, 1.0, 201)])
    Ls = [t / TWO_PI for t in t_grid]
    R2g = float(max(_R2_coefficient(float(s), L, ing) for s in sigma_grid for L in Ls[:50]))
    R2l = float(max(_R2_coefficient(0.5, L, ing) for L in Ls))
    r2g = float(max(_r2_value(float(s), L) / (L ** (1 - 2 * s) * math.log(L)) for s in sigma_grid for L in Ls[:50]))
    r2l = float(max(_r2_value(0.5, L) for L in Ls))
    return ZetaSquaredChain(
        R2_general=R2g, r2_general=r2g, R2_line=R2l, r2_line=r2l,
        general=R2g + r2g, line=R2l + r2l / math.log(ZETA_SQ_T_MIN / TWO_PI), **ing,
    )


def afe_squared_two_sum(s, tables=None) -> complex:
    """The symmetric two-sum approximation of zeta(s)^2 with the chi_tilde^2 factor."""
    p = as_point(s)
    at = abs(p.t)
    L = at / TWO_PI
    n_max = int(math.floor(L))
    tables = tables or sieve_tables(max(n_max, 1))
    n = np.arange(1, n_max + 1)
    d = tables.d[1 : n_max + 1].astype(float)
    logn = np.log(n.astype(np.longdouble))
    two_pi = np.longdouble(2) * np.longdouble(np.pi)

    def red(ph):
        return np.asarray(ph - two_pi * np.floor(ph / two_pi), dtype=float)

    ph = red(np.longdouble(p.t) * logn)
    first = d * n ** (-p.sigma) * np.exp(-1j * ph)
    second = d * n ** (p.sigma - 1.0) * np.exp(1j * ph)
    s1 = complex(math.fsum(first.real), math.fsum(first.imag))
    s2 = complex(math.fsum(second.real), math.fsum(second.imag))
    with mpmath.workdps(30):
        t = mpmath.mpf(p.t)
        phase = -2 * t * mpmath.log(mpmath.mpf(at) / (2 * mpmath.pi * mpmath.e))
        factor = complex(mpmath.sign(t) * 1j * mpmath.power(L, 1 - 2 * p.sigma) * mpmath.expj(phase))
    return s1 + factor * s2
