"""The factor chi(s) of the functional equation and its Stirling approximation.

``chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s)`` is evaluated through the
log-gamma series at oracle precision.  ``chi_tilde`` is the elementary
approximation (2 pi/|t|)^(sigma-1/2) (|t|/2 pi e)^(-i t) e^(sgn(t) i pi/4), and
the explicit constants bound |chi/chi_tilde - 1| by C_total/|t|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from ._gamma import log_gamma
from .core_numerics import StripPoint, as_point, oracle_digits
from .errors import ArgumentError, DomainError

STIRLING_SUP_T0 = 2.0 * math.pi
STIRLING_SUP_BOUND = 0.3746      # published majorant of C_total at t = t0 = 2 pi


def chi_mp(s, digits: int | None = None) -> mpmath.mpc:
    """chi(s) as an mpmath number at ``digits`` working digits."""
    p = as_point(s)
    if p.t == 0 and p.sigma >= 1 and p.sigma == int(p.sigma):
        raise DomainError(f"chi has a pole at s = {p.sigma:g}")
    with mpmath.workdps(digits or oracle_digits()):
        z = mpmath.mpc(p.sigma, p.t)
        pi = mpmath.pi
        value = mpmath.power(2, z) * mpmath.power(pi, z - 1) * mpmath.sin(pi * z / 2)
        return value * mpmath.exp(log_gamma(1 - z))


def chi(s) -> complex:
    """chi(s) in double precision (relative error ~1e-15 up to |t| = 1e6)."""
    return complex(chi_mp(s))


def chi_tilde(s) -> complex:
    """The Stirling approximation of chi, with the phase reduced at oracle precision."""
    p = as_point(s)
    if p.t == 0:
        raise DomainError("chi_tilde needs t != 0")
    with mpmath.workdps(oracle_digits()):
        t = mpmath.mpf(p.t)
        at = abs(t)
        modulus = mpmath.power(2 * mpmath.pi / at, mpmath.mpf(p.sigma) - mpmath.mpf(0.5))
        phase = -t * mpmath.log(at / (2 * mpmath.pi * mpmath.e)) + mpmath.sign(t) * mpmath.pi / 4
        return complex(modulus * mpmath.expj(phase))


# ---------------------------------------------------------------------------
# Stirling constants
# ---------------------------------------------------------------------------

def C1(sigma: float, t: float) -> float:
    at = abs(t)
    u = 1.0 - sigma
    return u * u * (0.5 + 2.0 / math.pi) + u * (sigma - 0.5) * ((math.pi / 2) ** 2 + u / (2.0 * at))


def C2(t: float) -> float:
    """exp(1/(12|t|) + 1/(90|t|^3)), the Stieltjes-type factor for Gamma."""
    at = abs(t)
    return math.exp(1.0 / (12.0 * at) + 1.0 / (90.0 * at**3))


def C3(t: float, t0: float) -> float:
    c20 = C2(t0)
    # (e^x - 1)/x at x = log C2(t0)
    ratio = (c20 - 1.0) / math.log(c20)
    return ratio * (1.0 / 12.0 + 1.0 / (90.0 * t * t)) + t0 * math.exp(-math.pi * t0) * C2(t)


def C_total(sigma: float, t: float, t0: float) -> float:
    at = abs(t)
    return C1(sigma, at) * (1.0 + t0 * math.exp(-math.pi * t0) / at) * C2(at) + C3(at, t0)


@dataclass(frozen=True)
class StirlingBounds:
    """Constants with |chi(s)/chi_tilde(s) - 1| <= C_total/|t|.

    ``extension`` is True when sigma = 1/2, where the formulas are used by
    continuity outside the proven range (1/2, 1].
    """

    sigma: float
    t: float
    t0: float
    C1: float
    C2: float
    C3: float
    C_total: float
    extension: bool = False


def stirling_error_bound(sigma: float, t: float, t0: float) -> StirlingBounds:
    """Evaluate C1, C2, C3 and the assembled C_total at (sigma, t, t0).

    Requires sigma in [1/2, 1] and |t| >= t0 >= 1/pi.
    """
    if not 0.5 <= sigma <= 1.0:
        raise ArgumentError(f"sigma must lie in (1/2, 1], got {sigma}")
    if t0 < 1.0 / math.pi:
        raise ArgumentError(f"t0 must be >= 1/pi, got {t0}")
    if abs(t) < t0:
        raise ArgumentError(f"|t| = {abs(t)} is below t0 = {t0}")
    at = abs(t)
    return StirlingBounds(
        sigma=sigma, t=at, t0=t0,
        C1=C1(sigma, at), C2=C2(at), C3=C3(at, t0), C_total=C_total(sigma, at, t0),
        extension=(sigma == 0.5),
    )


def golden_section_max(f, a: float, b: float, tol: float = 1e-10):
    """Maximiser and maximum of a unimodal ``f`` on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def stirling_supremum(t0: float = STIRLING_SUP_T0):
    """sup over sigma in (1/2, 1] of C1(sigma, t0)(1 + t0 e^{-pi t0}/t0) C2(t0) + C3(t0, t0).

    Every factor decreases in t, so this is a t-uniform constant for |t| >= t0.
    Returns (maximiser, value).
    """
    return golden_section_max(lambda s: C_total(s, t0, t0), 0.5, 1.0)


def chi_modulus_bound(sigma: float, t: float, t0: float) -> float:
    """Upper bound for |chi(sigma + i t)| valid for |t| >= t0 >= 2 pi."""
    if not 0.0 <= sigma <= 1.0:
        raise DomainError("sigma must lie in [0, 1]")
    at = abs(t)
    if t0 < 2 * math.pi or at < t0:
        raise DomainError("require |t| >= t0 >= 2 pi")
    if sigma == 0.5:
        return 1.0
    scale = (at / (2 * math.pi)) ** (0.5 - sigma)
    if sigma > 0.5:
        return scale * (1.0 + C_total(sigma, at, t0) / at)
    c = C_total(1.0 - sigma, at, t0)
    return scale * at / (at - c)


def arctan_bounds(x: float) -> tuple[float, float]:
    """Rational and radical bounds (lower, upper) sandwiching arctan x for x >= 0."""
    if x < 0:
        raise DomainError("arctan bounds are stated for x >= 0")
    half_pi = math.pi / 2
    upper = half_pi * x / (2.0 / math.pi + x)
    lower = half_pi * x / (2.0 / math.pi + math.hypot(x, half_pi - 2.0 / math.pi))
    return lower, upper


def gamma_factor_bound(sigma: float, t: float) -> float:
    """Majorant of |e^{-i pi s} Gamma(1-s)|/(2 pi) for sigma in (0,1), t >= 1."""
    if not 0.0 < sigma < 1.0 or t < 1.0:
        raise DomainError("require 0 < sigma < 1 and t >= 1")
    return C2(t) / (2.0**sigma * math.sqrt(math.pi)) * t ** (0.5 - sigma) * math.exp(math.pi * t / 2)


def gamma_factor_bound_corrected(sigma: float, t: float) -> float:
    """Majorant of |e^{-i pi s} Gamma(1-s)|/(2 pi) valid on all of (0,1) x [1, inf).

    The factor 2^{-sigma} in ``gamma_factor_bound`` is only justified for
    sigma <= 1/2; here it is replaced by 2^{-min(sigma, 1/2)}.
    """
    if not 0.0 < sigma < 1.0 or t < 1.0:
        raise DomainError("require 0 < sigma < 1 and t >= 1")
    k = 2.0 ** min(sigma, 0.5) * math.sqrt(math.pi)
    return C2(t) / k * t ** (0.5 - sigma) * math.exp(math.pi * t / 2)


def gamma_factor_actual(sigma: float, t: float) -> float:
    """|e^{-i pi s} Gamma(1-s)|/(2 pi) through the log-gamma oracle."""
    with mpmath.workdps(oracle_digits()):
        s = mpmath.mpc(sigma, t)
        lg = log_gamma(1 - s)
        return float(mpmath.exp(mpmath.re(lg) + mpmath.pi * t) / (2 * mpmath.pi))


__all__ = [
    "StripPoint", "chi", "chi_mp", "chi_tilde", "C1", "C2", "C3", "C_total",
    "StirlingBounds", "stirling_error_bound", "stirling_supremum", "golden_section_max",
    "chi_modulus_bound", "arctan_bounds", "gamma_factor_bound",
    "gamma_factor_bound_corrected", "gamma_factor_actual",
]
