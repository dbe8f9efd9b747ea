"""Weighted second power moment of zeta on vertical lines.

For coprime 1 <= mu1 <= mu2 <= T/(2 pi) the integral

    S(z) = int_T^{2T} |zeta(sigma + i t)|^2 (mu1/mu2)^{i t} dt,   z = (sigma, T, mu1, mu2),

differs from the main term ``selberg_main_term`` by at most

    S1(z) (mu2/mu1)^sigma T^{1-sigma/2} sqrt(log(T mu2/(pi mu1)))
      + S2(z) mu1 mu2 T^{1-sigma} log(T mu1 mu2/pi).

The coefficients S1, S2 are assembled from nine named pieces (B1, B3, ..., B9)
which in turn are built from smaller closed forms.  Every piece is a pure
function registered in ``COMPONENTS`` so it can be evaluated and printed on
its own.

Two evaluation modes exist.  ``"uniform"`` uses the majorants in (sigma0, T0)
that hold for every T >= T0 and sigma <= sigma0, with the sharper special
forms when mu1 = mu2 = 1 and sigma = sigma0 = 1/2.  ``"pointwise"`` evaluates
the defining expressions at z itself; it is continuous in sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .afe_bounds import round_up, table_row
from .core_numerics import (
    EULER_GAMMA,
    gauss_legendre,
    harmonic_sum_bound,
    power_sum_bounds,
    zeta_fast_panels,
    zeta_panel_width,
    zeta_reference,
)
from .errors import ArgumentError, DomainError, ToleranceError

G = EULER_GAMMA
PI = math.pi
TWO_PI = 2.0 * math.pi
M0 = math.sqrt(1.0 + 2.0 / 3.0 * math.sqrt(6.0 / 5.0))   # Preissmann's constant

# published constants of the critical-line moment bound
SPM_T0 = 1.0e3
SPM_S1 = 9.4104
SPM_S2 = 34.779
SPM_C1 = 13.803
SPM_C2 = 83.964
SPM_C3 = 2.0e3
SPM_C4 = 3691.24
SPM_HEADLINE = 70.26
SPM_HEADLINE_FROM = 2000.0
EMPIRICAL_T_MAX = 1.0e4


@dataclass(frozen=True)
class MomentContext:
    """The point z = (sigma, T, mu1, mu2) together with the uniformity data (sigma0, T0)."""

    sigma: float
    T: float
    mu1: int = 1
    mu2: int = 1
    sigma0: float | None = None
    T0: float | None = None

    def __post_init__(self):
        if self.sigma0 is None:
            object.__setattr__(self, "sigma0", self.sigma)
        if self.T0 is None:
            object.__setattr__(self, "T0", self.T)
        if not 0.5 <= self.sigma0 < 1.0:
            raise ArgumentError(f"sigma0 must lie in [1/2, 1), got {self.sigma0}")
        if not 0.5 <= self.sigma <= self.sigma0:
            raise ArgumentError(f"sigma must lie in [1/2, sigma0 = {self.sigma0}], got {self.sigma}")
        if self.T0 < TWO_PI or self.T < self.T0:
            raise ArgumentError(f"require T >= T0 >= 2 pi, got T={self.T}, T0={self.T0}")
        if int(self.mu1) != self.mu1 or int(self.mu2) != self.mu2:
            raise ArgumentError("mu1 and mu2 must be integers")
        if not 1 <= self.mu1 <= self.mu2 <= self.T / TWO_PI:
            raise ArgumentError("require 1 <= mu1 <= mu2 <= T/(2 pi)")
        if math.gcd(int(self.mu1), int(self.mu2)) != 1:
            raise ArgumentError(f"mu1={self.mu1} and mu2={self.mu2} are not coprime")

    @property
    def special(self) -> bool:
        """mu1 = mu2 = 1 on the critical line, where sharper constants apply."""
        return self.mu1 == 1 and self.mu2 == 1 and self.sigma == 0.5 and self.sigma0 == 0.5


@dataclass(frozen=True)
class MomentEnvelope:
    S_main: float | None
    S1: float
    S2: float
    components: dict = field(default_factory=dict)
    mode: str = "uniform"
    E_tilde: float = 0.0
    F_tilde: float = 0.0

    def rhs(self, ctx: MomentContext) -> float:
        """Right side of the moment inequality at ctx."""
        s, T, m1, m2 = ctx.sigma, ctx.T, ctx.mu1, ctx.mu2
        return (self.S1 * (m2 / m1) ** s * T ** (1 - s / 2) * math.sqrt(math.log(T * m2 / (PI * m1)))
                + self.S2 * m1 * m2 * T ** (1 - s) * math.log(T * m1 * m2 / PI))


# ---------------------------------------------------------------------------
# main term
# ---------------------------------------------------------------------------

def _zeta_real(x: float) -> mpmath.mpf:
    return mpmath.re(zeta_reference(complex(x, 0.0)))


def selberg_main_term(ctx: MomentContext) -> float:
    """zeta(2s)T/(mu1 mu2)^s + (2pi)^(2s-1)(4^(1-s)-1) zeta(2-2s) T^(2-2s) / (2(1-s)(mu1 mu2)^(1-s))."""
    s = ctx.sigma
    if not 0.5 < s < 1.0:
        raise DomainError("the main term needs 1/2 < sigma < 1; use critical_line_main_limit at 1/2")
    with mpmath.workdps(30):
        s_, T, mm = mpmath.mpf(s), mpmath.mpf(ctx.T), mpmath.mpf(ctx.mu1 * ctx.mu2)
        first = _zeta_real(2 * s) * T / mm**s_
        second = ((2 * mpmath.pi) ** (2 * s_ - 1) * (mpmath.power(4, 1 - s_) - 1) * _zeta_real(2 - 2 * s)
                  / (2 * (1 - s_) * mm ** (1 - s_)) * T ** (2 * (1 - s_)))
        return float(first + second)


def dyadic_main_sum(sigma: float, T: float, T0: float) -> float:
    """sum_{n=1}^{n0} S(sigma, T/2^n) with mu1 = mu2 = 1, n0 = floor(log2(T/T0))."""
    n0 = int(math.floor(math.log2(T / T0)))
    if n0 < 1:
        raise DomainError("need T >= 2 T0")
    with mpmath.workdps(30):
        s = mpmath.mpf(sigma)
        z1, z2 = _zeta_real(2 * sigma), _zeta_real(2 - 2 * sigma)
        c2 = (2 * mpmath.pi) ** (2 * s - 1) * (mpmath.power(4, 1 - s) - 1) / (2 * (1 - s))
        total = mpmath.mpf(0)
        for n in range(1, n0 + 1):
            Tn = mpmath.mpf(T) / 2**n
            total += z1 * Tn + c2 * z2 * Tn ** (2 * (1 - s))
        return float(total)


def dyadic_main_closed(sigma: float, T: float, T0: float) -> float:
    """Closed form zeta(2s)(1-2^-n0)T + f(s) zeta(2-2s) of :func:`dyadic_main_sum`."""
    n0 = int(math.floor(math.log2(T / T0)))
    if n0 < 1:
        raise DomainError("need T >= 2 T0")
    with mpmath.workdps(30):
        s, T_ = mpmath.mpf(sigma), mpmath.mpf(T)
        f = ((2 * mpmath.pi) ** (2 * s - 1) * (1 - mpmath.power(4, -(1 - s) * n0))
             / (2 * (1 - s)) * T_ ** (2 * (1 - s)))
        return float(_zeta_real(2 * sigma) * (1 - mpmath.power(2, -n0)) * T_ + f * _zeta_real(2 - 2 * sigma))


def critical_line_main_limit(T: float, n0: int) -> float:
    """Limit sigma -> 1/2 of the dyadic main sum:
    (1-2^-n0)(log T + 2 gamma)T - (1 + log 2pi)T + 2^-n0 (1 + n0 log 2 + log 2pi) T."""
    if T <= 0:
        raise DomainError("T must be positive")
    q = 2.0 ** (-n0)
    return ((1 - q) * (math.log(T) + 2 * G) * T - (1 + math.log(TWO_PI)) * T
            + q * (1 + n0 * math.log(2) + math.log(TWO_PI)) * T)


def critical_line_main_majorant(T: float, T0: float) -> float:
    """T log T - (1 + log 2pi - 2 gamma)T + 2 T0 log(2 pi e T/T0)."""
    return T * math.log(T) - (1 + math.log(TWO_PI) - 2 * G) * T + 2 * T0 * math.log(TWO_PI * math.e * T / T0)


# ---------------------------------------------------------------------------
# double sums
# ---------------------------------------------------------------------------

def double_sum_bound(a: float, X: float) -> float:
    """Majorant of |D(a, T1, T2; X)| for a in (-1, 0).

    (pi m0 + 2 H) P(1+2a) + P(a)^2 + (pi m0/2 - 1) P(2a), where H bounds the
    harmonic sum and P(b) bounds sum_{n<=X} n^b.  Exponents a <= -1/2 are
    read as a = -sigma, the others as a = sigma - 1.
    """
    if X < 2:
        raise DomainError("X must be >= 2")
    if not -1.0 < a < 0.0:
        raise DomainError("a must lie in (-1, 0)")
    h = harmonic_sum_bound(X)
    if a <= -0.5:
        p = power_sum_bounds(-a, X)
        p_lin, p_one, p_two = p["n^(1-2s)"], p["n^-s"], p["n^-2s"]
    else:
        sigma = 1.0 + a
        p = power_sum_bounds(sigma, X)
        p_lin, p_two = p["n^(2s-1)"], p["n^(2s-2)"]
        p_one = X**sigma / sigma
    return (PI * M0 + 2 * h) * p_lin + p_one**2 + (PI * M0 / 2 - 1) * p_two


def double_sum_direct(a: float, X: float, T1, T2: float) -> complex:
    """D(a, T1, T2; X) summed directly; ``T1`` may be a scalar or an (N, N) array."""
    n = np.arange(1, int(math.floor(X)) + 1, dtype=float)
    ln = np.log(n)
    diff = ln[:, None] - ln[None, :]
    np.fill_diagonal(diff, 1.0)
    w = np.outer(n, n) ** a / diff
    phase = np.exp(1j * T2 * diff) - np.exp(1j * np.asarray(T1) * diff)
    terms = w * phase
    np.fill_diagonal(terms, 0.0)
    return complex(terms.sum())


# ---------------------------------------------------------------------------
# component closed forms
# ---------------------------------------------------------------------------

def lambda1(x: float) -> float:
    if abs(x - 2.0 / 3.0) < 1e-12:
        return 2.0 * math.log(2.0)
    return (2.0 - 2.0 ** (3 * x - 1)) / (2.0 - 3 * x)


def _k(s0):
    # (2 - 2^x)/(1 - x), increasing on [1/2, 1)
    return (2.0 - 2.0**s0) / (1.0 - s0)


def B51(T, m1, m2):
    L = math.log(T)
    return 0.5 + (G - 0.5 + math.log(math.sqrt(2 * m1 / (PI * m2))) + (math.sqrt(2) - 1) * math.sqrt(TWO_PI * m2 / (m1 * T))) / L


def B52(s, T, m1, m2):
    L = math.log(T)
    q = PI * m2 / (m1 * T)
    c = 2 * G + math.log(m1 / (PI * m2)) + math.sqrt(q)
    u = 1.0 - s
    return (T ** (-s) / (2 * u)
            + (4 + 2 * u * (c + PI * M0)) / (4 * u * u * T**s * L)
            + q**u * (PI * M0 - 2) / (4 * T**s) * (1 + c / L))


def B71(s, T, m1, m2):
    L = math.log(T * m2 / (PI * m1))
    return ((1 + 2 * s) * 2 ** (0.5 + s) - 2 ** (0.5 - s) / (1 + 2 * s)
            + (-2 ** (0.5 - s) * (2 ** (1.5 + s) - 2) / (1 + 2 * s) ** 2
               + ((4 - 2 ** (1.5 - s)) * G + 2 ** (0.5 - s) * math.log(2)) / (1 + 2 * s)
               + (1 - 2 ** (-s)) / s * math.sqrt(PI * m1 / (T * m2))) / L)


def B72(s, T, m1, m2):
    q = PI * m1 / (T * m2)
    L = math.log(T * m2 / (PI * m1))
    return ((1 + 2 * s * math.sqrt(q) - q**s) / (2 * s * math.sqrt(T))
            * (1 + (2 / s + PI * M0 + 2 * G + math.sqrt(q)) / L)
            + (PI * M0 - 2) / (4 * math.sqrt(T)) * math.sqrt(q) * (1 + (2 * G + math.sqrt(q)) / L))


def B31_tilde(T, m1, m2):
    L = math.log(T * m2 / (PI * m1))
    return math.sqrt(PI * m1 / (2 * m2)) * (
        1 + (2 * G + math.sqrt(PI * m1 / (T * m2))) / L * (1 + 1 / math.sqrt(T)) + 1 / math.sqrt(T))


def B32_tilde(s, T, m1, m2):
    r = T * m2 / (PI * m1)
    L = math.log(r)
    return 1 / (2 * (1 - s)) * (1 + (2 / (1 - s) + 2 * G / math.sqrt(r) + 1 / r) / L)


def B41_tilde(T, m1, m2):
    L = math.log(T * m1 / (PI * m2))
    return (math.sqrt(2) / 2 + (2 * G + math.sqrt(PI * m2 / (T * m1))) / (math.sqrt(2) * L) * (1 + 1 / math.sqrt(T))
            + 1 / math.sqrt(2 * T))


def B42_tilde(s, T, m1, m2):
    return math.sqrt(m1 / (PI * m2)) * B32_tilde(s, T, m2, m1)


def B12_tilde(s0, T0):
    LP = math.log(T0 / PI)
    return PI ** (s0 - 1) / (1 - s0) * (1 + (2 * G + 2 / (1 - s0) + math.sqrt(PI / T0)) / LP)


def B22_tilde(s0, T0):
    LP = math.log(T0 / PI)
    r = math.sqrt(PI / T0)
    return 2 ** (2 * s0) * PI ** (s0 - 1) * (
        1 + 2 * s0 * r + (4 + 2 * G + (1 + 4 * G * s0) * r + 2 * PI * s0 / T0) / LP)


# uniform majorants in (sigma0, T0)

def B5_uniform(s0, T0):
    LT = math.log(T0)
    return (0.5 + 0.266 / LT + PI ** (s0 - 1) / (2 * (1 - s0) * math.sqrt(T0))
            * (1 + 4.43 / ((1 - s0) * LT) + 0.534 * 2 ** (s0 - 1) * (1 + 0.717 / LT)))


def B6_uniform(s0, T0):
    LT = math.log(T0)
    return math.sqrt(PI) + 1 / ((1 - s0) * math.sqrt(T0)) * (
        1 + (1.577 + 0.25 * math.sqrt(PI / T0)) / ((1 - s0) * LT) + 0.534 * (PI / T0) ** (1 - s0))


def _B78_common(s0):
    return (1 + 2 * s0) * 2 ** (0.5 + s0) - 2 ** (0.5 - s0) / (1 + 2 * s0)


def _B78_log_part(s0):
    return ((4 - 2 ** (1.5 - s0)) * G + math.log(2)) / 2 - 2 ** (1.5 - s0) / (1 + 2 * s0) ** 2


def B7_uniform(s0, T0):
    LP = math.log(T0 / PI)
    r = math.sqrt(PI / T0)
    return (math.sqrt(PI) * (_B78_common(s0) + (_B78_log_part(s0) + 2 * (1 - 2 ** (-s0)) * r) / LP)
            + (1 + 2 * s0 * r) / math.sqrt(T0) * (1 + (9.287 + r) / LP)
            + 0.534 * math.sqrt(PI) / T0 * (1 + (2 * G + r) / LP))


def B8_uniform(s0, T0):
    return (_B78_common(s0) + (_B78_log_part(s0) + (1 - 2 ** (-s0)) * math.sqrt(2)) / math.log(2)
            + 27.7101 / math.sqrt(PI * T0))


def B31_uniform(T0):
    LP = math.log(T0 / PI)
    return math.sqrt(PI / 2) * (1 + (2 * G + math.sqrt(PI / T0)) / LP * (1 + 1 / math.sqrt(T0)) + 1 / math.sqrt(T0))


def B32_uniform(s0, T0):
    LP = math.log(T0 / PI)
    return 1 / (2 * (1 - s0)) * (1 + (2 / (1 - s0) + 2 * G * math.sqrt(PI / T0) + PI / T0) / LP)


def B41_uniform(T0):
    return 2.607 * (1 + 1 / math.sqrt(T0))


def B42_uniform(s0):
    return 1 / (2 * math.sqrt(PI) * (1 - s0)) * (2.9 + 2.886 / (1 - s0))


COMPONENTS = {
    "B51": B51, "B52": B52, "B71": B71, "B72": B72,
    "B12~": B12_tilde, "B22~": B22_tilde,
    "B31~": B31_tilde, "B32~": B32_tilde, "B41~": B41_tilde, "B42~": B42_tilde,
    "B5~": B5_uniform, "B6~": B6_uniform, "B7~": B7_uniform, "B8~": B8_uniform,
}


def _tilde_components(ctx: MomentContext, mode: str) -> dict:
    s, T, m1, m2, s0, T0 = ctx.sigma, ctx.T, ctx.mu1, ctx.mu2, ctx.sigma0, ctx.T0
    if mode == "pointwise":
        return {
            "B5~": B51(T, m1, m2) + (m1 / (PI * m2)) ** (1 - s) * B52(s, T, m1, m2),
            "B6~": (PI * m1 / m2) ** (1 - s) * B51(T, m2, m1) + B52(s, T, m2, m1),
            "B7~": math.sqrt(PI * m1 / m2) * B71(s, T, m1, m2) + B72(s, T, m1, m2),
            "B8~": B71(s, T, m2, m1) + math.sqrt(m1 / (PI * m2)) * B72(s, T, m2, m1),
            "B31~": B31_tilde(T, m1, m2), "B32~": B32_tilde(s, T, m1, m2),
            "B41~": B41_tilde(T, m1, m2), "B42~": B42_tilde(s, T, m1, m2),
        }
    if ctx.special:
        return {
            "B5~": 0.5 + 2.3 * math.sqrt(1 / (PI * T0)),
            "B6~": math.sqrt(PI) / 2 + 2.3 * math.sqrt(1 / T0),
            "B7~": math.sqrt(PI) * B71(0.5, T0, 1, 1) + B72(0.5, T0, 1, 1),
            "B8~": B71(0.5, T0, 1, 1) + B72(0.5, T0, 1, 1) / math.sqrt(PI),
            "B31~": B31_uniform(T0), "B32~": B32_uniform(0.5, T0),
            "B41~": B41_tilde(T0, 1, 1), "B42~": B32_tilde(0.5, T0, 1, 1) / math.sqrt(PI),
        }
    return {
        "B5~": B5_uniform(s0, T0), "B6~": B6_uniform(s0, T0),
        "B7~": B7_uniform(s0, T0), "B8~": B8_uniform(s0, T0),
        "B31~": B31_uniform(T0), "B32~": B32_uniform(s0, T0),
        "B41~": B41_uniform(T0), "B42~": B42_uniform(s0),
    }


def default_tilde_constants(ctx: MomentContext) -> tuple[float, float]:
    """(E~, F~) from the tables at threshold <= T0, in the regime fixed by mu1, mu2."""
    if ctx.mu1 == ctx.mu2:
        e = table_row("x=y", ctx.T0).E_tilde
        return e, e
    return table_row("x<=y", ctx.T0).E_tilde, table_row("x>y", ctx.T0).F_tilde


def moment_envelope(ctx: MomentContext, mode: str = "uniform",
                    E_tilde: float | None = None, F_tilde: float | None = None) -> MomentEnvelope:
    """Coefficients S1, S2 and every named component at ``ctx``."""
    if mode not in ("uniform", "pointwise"):
        raise ArgumentError("mode must be 'uniform' or 'pointwise'")
    if E_tilde is None or F_tilde is None:
        e_def, f_def = default_tilde_constants(ctx)
        E_tilde = e_def if E_tilde is None else E_tilde
        F_tilde = f_def if F_tilde is None else F_tilde
    s, T, m1, m2, s0, T0 = ctx.sigma, ctx.T, ctx.mu1, ctx.mu2, ctx.sigma0, ctx.T0
    LT, LP = math.log(T0), math.log(T0 / PI)
    comp = _tilde_components(ctx, mode)
    comp["B51"] = B51(T, m1, m2)
    comp["B52"] = B52(s, T, m1, m2)
    comp["B71"] = B71(s, T, m1, m2)
    comp["B72"] = B72(s, T, m1, m2)
    comp["B12~"] = B12_tilde(s0, T0)
    comp["B22~"] = B22_tilde(s0, T0)
    k, lam = _k(s0), lambda1(s0)
    comp["B1"] = comp["B12~"] + comp["B22~"] + PI**s0 * (2 - 2**s0) / ((1 - s0) * LP)
    comp["B3"] = 8 * TWO_PI ** (s0 - 0.5) * (comp["B31~"] + comp["B32~"])
    comp["B4"] = 8 * TWO_PI ** (s0 - 0.5) * (comp["B41~"] + comp["B42~"])
    comp["B5"] = F_tilde * PI ** (s0 / 2) * math.sqrt(k * comp["B5~"])
    comp["B6"] = E_tilde * PI ** (s0 - 0.5) * math.sqrt(k * comp["B6~"])
    comp["B7"] = F_tilde * PI ** (s0 - 0.5) * math.sqrt(lam * comp["B7~"])
    comp["B8"] = E_tilde * PI ** (s0 - 0.25) * math.sqrt(lam * comp["B8~"])
    comp["B9"] = PI**s0 * k * E_tilde * F_tilde
    S1 = math.sqrt(LT / LP) * (comp["B5"] + comp["B6"]) + comp["B7"] + comp["B8"]
    S2 = comp["B1"] + comp["B3"] / math.sqrt(PI) + comp["B4"] + comp["B9"] / LP
    main = selberg_main_term(ctx) if s > 0.5 else None
    return MomentEnvelope(S_main=main, S1=S1, S2=S2, components=dict(sorted(comp.items())),
                          mode=mode, E_tilde=E_tilde, F_tilde=F_tilde)


# ---------------------------------------------------------------------------
# empirical weighted moment
# ---------------------------------------------------------------------------

def _panel_integral(sigma, T1, T2, omega, width, order):
    """Composite Gauss-Legendre on equal panels; returns (whole, halves) estimates."""
    n_panels = max(1, int(math.ceil((T2 - T1) / width)))
    h = (T2 - T1) / n_panels
    starts = T1 + h * np.arange(n_panels)
    x, w = gauss_legendre(order)
    off_whole = 0.5 * h * (x + 1.0)
    off_halves = np.concatenate([0.25 * h * (x + 1.0), 0.5 * h + 0.25 * h * (x + 1.0)])
    offsets = np.concatenate([off_whole, off_halves])
    vals = np.abs(zeta_fast_panels(sigma, starts, offsets)) ** 2
    grid = starts[:, None] + offsets[None, :]
    vals = vals * np.exp(1j * omega * grid)
    m = x.size
    whole = (vals[:, :m] @ w) * (0.5 * h)
    halves = (vals[:, m:2 * m] @ w + vals[:, 2 * m:] @ w) * (0.25 * h)
    tot_w = complex(math.fsum(whole.real), math.fsum(whole.imag))
    tot_h = complex(math.fsum(halves.real), math.fsum(halves.imag))
    return tot_w, tot_h


def weighted_moment_integral(sigma: float, T: float, mu1: int, mu2: int, tol: float = 1e-6,
                             order: int = 16, max_halvings: int = 8) -> complex:
    """int_T^{2T} |zeta(sigma+it)|^2 (mu1/mu2)^{it} dt on equal Gauss-Legendre panels.

    The panel width starts at the zero-spacing cap and is halved until the
    panel-halving estimate agrees to ``tol`` in absolute value.
    """
    if T > EMPIRICAL_T_MAX:
        raise DomainError(f"T = {T} exceeds the quadrature budget {EMPIRICAL_T_MAX:g}")
    omega = math.log(mu1 / mu2)
    width = min(zeta_panel_width(2 * T), 1.0)
    if omega:
        width = min(width, PI / abs(omega))
    for _ in range(max_halvings):
        whole, fine = _panel_integral(sigma, T, 2 * T, omega, width, order)
        if abs(whole - fine) <= tol:
            return fine
        width /= 2
    raise ToleranceError(f"weighted moment did not reach tol={tol} at T={T}")


def weighted_moment_empirical(ctx: MomentContext, tol: float = 1e-6, mode: str = "pointwise"):
    """(S_num, envelope_rhs): the quadrature value of S(z) and the right side of the inequality."""
    if ctx.sigma <= 0.5:
        raise DomainError("the weighted moment comparison needs sigma > 1/2")
    S_num = weighted_moment_integral(ctx.sigma, ctx.T, ctx.mu1, ctx.mu2, tol)
    env = moment_envelope(ctx, mode=mode)
    return S_num, env.rhs(ctx)


# ---------------------------------------------------------------------------
# critical-line second moment
# ---------------------------------------------------------------------------

def second_moment_coefficients(S1: float = SPM_S1, S2: float = SPM_S2, decimals: int = 3):
    """Round-up of S1/(2^{3/4} - 1) and S2/(sqrt 2 - 1), the leading error coefficients."""
    return (round_up(S1 / (2**0.75 - 1), decimals), round_up(S2 / (math.sqrt(2) - 1), decimals))


def second_moment_error_bound(T: float) -> float:
    """Majorant of int_0^T |zeta(1/2+it)|^2 dt - T log T + (1 + log 2pi - 2 gamma)T."""
    if T < TWO_PI:
        raise DomainError("T must be >= 2 pi")
    L = math.log(T / TWO_PI)
    return SPM_C1 * T**0.75 * math.sqrt(L) + SPM_C2 * math.sqrt(T) * L + SPM_C3 * math.log(T) + SPM_C4


def second_moment_bound(T: float) -> float:
    """Upper bound for int_0^T |zeta(1/2+it)|^2 dt, valid for T >= 2 pi."""
    if T < TWO_PI:
        raise DomainError("T must be >= 2 pi")
    return T * math.log(T) - (1 + math.log(TWO_PI) - 2 * G) * T + second_moment_error_bound(T)


def second_moment_headline(T: float) -> float:
    """The single-term form T log T - (1 + log 2pi - 2 gamma)T + 70.26 T^{3/4} sqrt(log(T/2pi))."""
    if T < SPM_HEADLINE_FROM:
        raise DomainError(f"the single-term form is stated for T >= {SPM_HEADLINE_FROM:g}")
    return (T * math.log(T) - (1 + math.log(TWO_PI) - 2 * G) * T
            + SPM_HEADLINE * T**0.75 * math.sqrt(math.log(T / TWO_PI)))


__all__ = [
    "M0", "MomentContext", "MomentEnvelope", "selberg_main_term", "dyadic_main_sum",
    "dyadic_main_closed", "critical_line_main_limit", "critical_line_main_majorant",
    "double_sum_bound", "double_sum_direct", "lambda1", "COMPONENTS", "moment_envelope",
    "default_tilde_constants", "weighted_moment_integral", "weighted_moment_empirical",
    "second_moment_coefficients", "second_moment_error_bound", "second_moment_bound",
    "second_moment_headline",
]
