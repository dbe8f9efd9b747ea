"""Selberg-type zero density bound with explicit constants.

Pipeline: the mollifier lambda_X(n) and its quadratic-form identities, the
mollified second moment coefficient phi (built on the weighted moment
envelope), the argument bounds for Phi_X = zeta * S_X obtained by convexity,
and the final assembly into

    N(sigma, 2T) - N(sigma, T) <= a T^{1-(sigma-1/2)/4} log T + b log^2 T
                                  + c log T log log T + d log T.

Zero counting on the critical line by sign changes of Z(t), checked against
the explicit Riemann-von Mangoldt window, provides the desk-scale sanity
check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .afe_bounds import round_up
from .core_numerics import (
    EULER_GAMMA,
    ArithmeticTables,
    riemann_siegel_Z,
    sieve_tables,
    zeta_reference,
)
from .errors import (
    ArgumentError,
    BudgetError,
    CapacityError,
    ConstraintError,
    DomainError,
    IntegrityError,
)
from .moment_bounds import MomentContext, moment_envelope

H0 = 3.0610046e10            # height up to which RH has been verified
SIGMA1_H0 = 2.40764
SIGMA1_DEFAULT = 2.4
EPSILON = 1.0 / 24.0
LAMBDA_HAT = 2.2             # sup of |lambda_X(n)|/log X for X >= 8
LAMBDA_HAT_FROM = 8
GCD_SUM_MAX_X = 10**4
LOG_T0_MIN = 24.0
PRINTED_DECIMALS = {"a": 1, "b": 3, "c": 3, "d": 2}
D_ABSORBED = 0.51
WINDOW_SLACK = 1e-12

# explicit Riemann-von Mangoldt window: 0.11 log T + 0.29 log log T + 2.29 + 1/(5T)
RVM = (0.11, 0.29, 2.29, 0.2)
ZERO_COUNT_T_MAX = 1.0e5


def _zeta(x: float) -> float:
    return float(mpmath.re(zeta_reference(complex(x, 0.0))))


# ---------------------------------------------------------------------------
# mollifier
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _tables(limit: int) -> ArithmeticTables:
    return sieve_tables(limit)


def _tables_for(X: float, tables: ArithmeticTables | None) -> ArithmeticTables:
    need = max(1, int(math.floor(X)))
    if tables is None:
        return _tables(max(need, 64))
    if tables.limit < need:
        raise CapacityError(f"tables reach {tables.limit}, need {need}")
    return tables


@dataclass(frozen=True)
class MollifierContext:
    """lambda_X(n) for all n <= X at one sigma.

    ``normalizer`` is sum_{m <= X} mu^2(m)/phi_{2 sigma}(m); ``lam[n]`` holds
    lambda_X(n) (index 0 unused).
    """

    X: float
    sigma: float
    tables: ArithmeticTables
    normalizer: float
    lam: np.ndarray

    @classmethod
    def build(cls, X: float, sigma: float, tables: ArithmeticTables | None = None) -> "MollifierContext":
        if X < 1:
            raise DomainError("X must be >= 1")
        if sigma < 0.5:
            raise DomainError("sigma must be >= 1/2")
        tables = _tables_for(X, tables)
        n_max = int(math.floor(X))
        x = 2.0 * sigma
        phi = tables.phi_x_array(x)[: n_max + 1]
        mu = tables.mu[: n_max + 1].astype(float)
        w = np.zeros(n_max + 1)
        w[1:] = mu[1:] ** 2 / phi[1:]
        normalizer = math.fsum(w[1:])
        lam = np.zeros(n_max + 1)
        idx = np.arange(n_max + 1)
        for n in range(1, n_max + 1):
            if mu[n] == 0:
                continue
            m = idx[1 : n_max // n + 1]
            coprime = np.gcd(m, n) == 1
            inner = math.fsum(w[m[coprime]])
            lam[n] = mu[n] * float(n) ** x / phi[n] * inner / normalizer
        return cls(X=X, sigma=sigma, tables=tables, normalizer=normalizer, lam=lam)

    def __call__(self, n: int) -> float:
        if n < 1:
            raise DomainError("n must be positive")
        if n > self.X:
            return 0.0
        return float(self.lam[n])


def mollifier_lambda(n: int, X: float, sigma: float, tables: ArithmeticTables | None = None) -> float:
    """lambda_X(n) through the coprime-restricted single sum; zero for n > X."""
    if n > X:
        return 0.0
    return MollifierContext.build(X, sigma, tables)(n)


def mollifier_lambda_double_sum(n: int, X: float, sigma: float, tables: ArithmeticTables | None = None) -> float:
    """lambda_X(n) = n^{2s} G^{-1} sum_{m <= X/n} mu(nm) mu(m)/phi_{2s}(nm), summed as written."""
    if n > X:
        return 0.0
    tables = _tables_for(X, tables)
    x = 2.0 * sigma
    n_max = int(math.floor(X))
    norm = math.fsum(float(tables.mu[m]) ** 2 / tables.phi_x(m, x) for m in range(1, n_max + 1))
    inner = math.fsum(
        float(tables.mu[n * m]) * float(tables.mu[m]) / tables.phi_x(n * m, x)
        for m in range(1, n_max // n + 1)
        if tables.mu[n * m] != 0
    )
    return float(n) ** x * inner / norm


def mollifier_normalizer(X: float, sigma: float, tables: ArithmeticTables | None = None) -> float:
    return MollifierContext.build(X, sigma, tables).normalizer


def gcd_double_sum(X: float, sigma: float, exponent: str = "2s",
                   tables: ArithmeticTables | None = None) -> float:
    """sum_{n,m <= X} lambda(n) lambda(m) (n, m)^e / D(n, m), summed directly.

    ``exponent="2s"``: e = 2 sigma and D = (nm)^{2 sigma}; this equals the
    reciprocal of the normalizer.  ``exponent="2-2s"``: e = 2 - 2 sigma and
    D = nm; this is positive.
    """
    if X > GCD_SUM_MAX_X:
        raise BudgetError(f"X = {X} exceeds the quadratic-cost guard {GCD_SUM_MAX_X}")
    if X < 1:
        raise DomainError("X must be >= 1")
    ctx = MollifierContext.build(X, sigma, tables)
    n = np.flatnonzero(ctx.lam)
    lam = ctx.lam[n]
    nf = n.astype(float)
    if exponent == "2s":
        e, den = 2.0 * sigma, nf ** (2.0 * sigma)
    elif exponent == "2-2s":
        e, den = 2.0 - 2.0 * sigma, nf
    else:
        raise ArgumentError("exponent must be '2s' or '2-2s'")
    u = lam / den
    total = []
    rows = max(1, 4_000_000 // max(n.size, 1))
    for i in range(0, n.size, rows):
        g = np.gcd(n[i : i + rows, None], n[None, :]).astype(float) ** e
        total.append(float(u[i : i + rows] @ (g @ u)))
    return math.fsum(total)


def gcd_sum_majorant(sigma: float, X: float) -> float:
    """1 + (1 + (2 sigma - 1)/X) X^{1 - 2 sigma}/(1 - e^{-2}), for sigma >= 1/2 + 1/log X."""
    if X <= 1:
        raise DomainError("X must exceed 1")
    if sigma < 0.5 + 1.0 / math.log(X) - 1e-15:
        raise DomainError(f"need sigma >= 1/2 + 1/log X = {0.5 + 1 / math.log(X):.6g}")
    return 1.0 + (1.0 + (2 * sigma - 1) / X) / (1.0 - math.exp(-2.0)) * X ** (1 - 2 * sigma)


def lambda_hat_empirical(X: float, sigma: float = 0.5, tables: ArithmeticTables | None = None) -> float:
    """max_{2 <= n <= X} |lambda_X(n)| / log X."""
    ctx = MollifierContext.build(X, sigma, tables)
    return float(np.max(np.abs(ctx.lam[2:]))) / math.log(X) if X >= 2 else 0.0


# ---------------------------------------------------------------------------
# mollified moment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiBound:
    phi: float
    phi1: float
    phi2: float
    S1: float
    S2: float


def epsilon_window(sigma0: float, T0: float) -> float:
    """Largest admissible epsilon: 1/6 - 1/((sigma0 - 1/2) log T0)."""
    return 1.0 / 6.0 - 1.0 / ((sigma0 - 0.5) * math.log(T0))


def phi_moment_bound(sigma0: float, T0: float, eps: float, T: float,
                     S1: float | None = None, S2: float | None = None,
                     envelope_sigma0: float | None = None) -> PhiBound:
    """Coefficient phi(sigma0, T0, eps, T) of the mollified second moment.

    The moment coefficients S1, S2 default to the uniform envelope at
    (envelope_sigma0 or sigma0, T0) for coprime mu1 < mu2.
    """
    if not 0.5 < sigma0 < 1.0:
        raise ArgumentError("sigma0 must lie in (1/2, 1)")
    if T0 <= math.exp(6.0 / (sigma0 - 0.5)) or T < T0:
        raise ArgumentError("require T >= T0 > exp(6/(sigma0 - 1/2))")
    upper = epsilon_window(sigma0, T0)
    if not 0.0 < eps <= upper + WINDOW_SLACK:
        raise ConstraintError("epsilon", f"need 0 < eps <= {upper:.6g}, got {eps}")
    if S1 is None or S2 is None:
        s_env = envelope_sigma0 if envelope_sigma0 is not None else sigma0
        env = moment_envelope(MomentContext(s_env, T0, 1, 2, s_env, T0))
        S1 = env.S1 if S1 is None else S1
        S2 = env.S2 if S2 is None else S2
    al = 1.0 / 6.0 - eps
    lam2 = LAMBDA_HAT**2
    phi1 = 2 * math.sqrt(2) * al**3 * S1 * lam2 * (
        1 + EULER_GAMMA / (al * math.log(T0)) + 1 / (2 * T0**al))
    phi2 = 6 * al**2 * S2 * lam2
    L = math.log(T)
    phi = ((1 + (2 * sigma0 - 1) * T0 ** (eps - 1.0 / 6.0)) / (1 - math.exp(-2.0))
           + phi1 * L**3.5 / T**0.25 + phi2 * L**3 / T ** (3 * eps))
    return PhiBound(phi=phi, phi1=phi1, phi2=phi2, S1=S1, S2=S2)


# ---------------------------------------------------------------------------
# argument bounds
# ---------------------------------------------------------------------------

def h_function(sigma: float) -> float:
    """(2 zeta(s) + (3/2)^{-s} - 1)(1 + zeta(s) zeta(2s))."""
    z = _zeta(sigma)
    return (2 * z + 1.5 ** (-sigma) - 1) * (1 + z * _zeta(2 * sigma))


def b1(sigma1: float) -> float:
    return (math.sqrt(2 / math.pi) * (2 * math.pi) ** (1 - sigma1)
            * math.exp(-sigma1 + 1 / (12 * sigma1) + 1 / (90 * sigma1**3)))


def b2(sigma1: float, T0: float) -> float:
    return ((4 * sigma1 - 1) / T0) ** 2 + ((2 * sigma1 - 1) / T0 + 1) ** 2


def _check_sigma1(sigma1, T0=None):
    if sigma1 < 2.4:
        raise ArgumentError(f"sigma1 must be >= 2.4, got {sigma1}")
    if T0 is not None and not T0 > 2 * sigma1 - 1:
        raise ArgumentError("require T0 > 2 sigma1 - 1")
    q = 2.0 ** (-sigma1) * h_function(sigma1)
    if not q < 1.0:
        raise ArgumentError("1 - 2^{-sigma1} h(sigma1) must be positive")
    return q


def arg_phi_bound(sigma: float, sigma1: float) -> float:
    """|arg Phi_X(s)| <= 2^{-sigma} h(sigma1)/(1 - 2^{-sigma1} h(sigma1)) for Re s = sigma >= sigma1."""
    q = _check_sigma1(sigma1)
    if sigma < sigma1:
        raise DomainError("need sigma >= sigma1")
    return 2.0 ** (-sigma) * h_function(sigma1) / (1 - q)


def argument_bound_b3(sigma1: float, T0: float) -> float:
    """Constant term b3 of the argument bound for Phi_X on horizontal segments."""
    q = _check_sigma1(sigma1, T0)
    L2 = math.log(2)
    return ((math.pi - 2) / (2 * L2) * math.log(_zeta(sigma1))
            + math.log(b1(sigma1)) / L2
            + math.pi * math.log(b2(sigma1, T0)) / (4 * L2) * (0.5 + sigma1)
            + math.pi / (2 * L2) * math.log(11 * (1 + q) / (5 * (T0 - 2 * sigma1 + 1) * (1 - q) ** 2))
            + math.pi / 2)


def mollified_zeta(s: complex, X: float, mollifier_sigma: float | None = None) -> complex:
    """Phi_X(s) = zeta(s) S_X(s) with the oracle zeta."""
    ms = mollifier_sigma if mollifier_sigma is not None else s.real
    ctx = MollifierContext.build(X, ms)
    n = np.arange(1, ctx.lam.size)
    sx = complex(np.sum(ctx.lam[1:] * np.exp(-s * np.log(n))))
    return complex(zeta_reference(s)) * sx


# ---------------------------------------------------------------------------
# density constants
# ---------------------------------------------------------------------------

def truncated_sigma_max(T0: float, decimals: int = 3) -> float:
    """1/2 + 8/log T0 cut down to the printed number of decimals."""
    scale = 10**decimals
    return math.floor((0.5 + 8.0 / math.log(T0)) * scale) / scale


@dataclass(frozen=True)
class DensityCoefficients:
    T0: float
    sigma1: float
    sigma_max: float
    S1: float
    S2: float
    alpha: float
    beta: float
    gamma_c: float
    delta: float
    a: float
    b: float
    c: float
    d: float

    def rounded(self) -> dict:
        """(a, b, c, d) ceiling-rounded at the printed precision."""
        return {k: round_up(getattr(self, k), n) for k, n in PRINTED_DECIMALS.items()}

    @property
    def floor(self) -> float:
        """e^3/(2 pi) (1 + 1/(8(e^2 - 1))), the limit of a as T0 grows."""
        e = math.e
        return e**3 / (2 * math.pi) * (1 + 1 / (8 * (e * e - 1)))


def density_coefficients(T0: float = H0, sigma1: float = SIGMA1_H0, sigma_max: float | None = None,
                         S1: float | None = None, S2: float | None = None) -> DensityCoefficients:
    """alpha, beta, gamma, delta and the final (a, b, c, d) for T >= T0.

    The mollified moment uses sigma0 = 1/2 + 8/log T0 and eps = 1/24.  The
    moment envelope (S1, S2) is evaluated at ``sigma_max``, the upper end of
    the certified sigma range, which defaults to sigma0 truncated to three
    decimals.
    """
    if math.log(T0) < LOG_T0_MIN:
        raise ArgumentError(f"T0 must be >= e^{LOG_T0_MIN:g}")
    q = _check_sigma1(sigma1, T0)
    sigma0 = 0.5 + 8.0 / math.log(T0)
    if sigma_max is None:
        sigma_max = truncated_sigma_max(T0)
    if not 0.5 < sigma_max <= sigma0:
        raise ArgumentError("sigma_max must lie in (1/2, 1/2 + 8/log T0]")
    pb = phi_moment_bound(sigma0, T0, EPSILON, T0, S1=S1, S2=S2, envelope_sigma0=sigma_max)
    alpha = pb.phi / (4 * math.pi)
    L2 = math.log(2)
    beta = (sigma1 - 0.5) * (9 * sigma1 + 4) / (16 * L2)
    gamma_c = (sigma1 - 0.5) / (4 * L2)
    delta = ((sigma1 - 0.5) * ((2 * sigma1 - 11) / 8 + argument_bound_b3(sigma1, T0) / math.pi)
             + q / ((1 - q) * math.pi * L2))
    e = math.e
    return DensityCoefficients(
        T0=T0, sigma1=sigma1, sigma_max=sigma_max, S1=pb.S1, S2=pb.S2,
        alpha=alpha, beta=beta, gamma_c=gamma_c, delta=delta,
        a=e / 4 * (2 * e * e / math.pi + alpha), b=beta / 4, c=gamma_c / 4,
        d=max(delta / 4, 0.0) + D_ABSORBED,
    )


def _exponent(sigma):
    return 1.0 - 0.25 * (sigma - 0.5)


def cumulative_coefficient(coeffs: DensityCoefficients) -> float:
    """Leading constant of the summed-over-dyadic-blocks bound for N(sigma, T).

    Lower-order terms are absorbed using their size at T0 relative to
    T0^theta log T0 at the smallest exponent theta, then rounded up at two
    decimals.
    """
    r = coeffs.rounded()
    L = math.log(coeffs.T0)
    theta = _exponent(coeffs.sigma_max)
    eta = (r["b"] * L + r["c"] * math.log(L) + r["d"]) / coeffs.T0**theta
    return round_up(r["a"] + eta, 2)


def density_bound_eval(sigma: float, T: float, coeffs: DensityCoefficients, form: str = "dyadic",
                       rounded: bool = True) -> float:
    """Right side of the zero density bound.

    ``dyadic``: bound for N(sigma, 2T) - N(sigma, T), T >= T0.
    ``cumulative``: bound for N(sigma, T), T >= 2 T0, using that every zero
    up to T0 lies on the critical line (requires T0 <= H0).
    """
    if not 0.5 <= sigma <= coeffs.sigma_max:
        raise DomainError(f"sigma must lie in [1/2, {coeffs.sigma_max}]")
    th = _exponent(sigma)
    if form == "dyadic":
        if T < coeffs.T0:
            raise DomainError(f"T must be >= T0 = {coeffs.T0:g}")
        a, b, c, d = (coeffs.rounded()[k] for k in "abcd") if rounded else (coeffs.a, coeffs.b, coeffs.c, coeffs.d)
        L = math.log(T)
        return a * T**th * L + b * L * L + c * L * math.log(L) + d * L
    if form == "cumulative":
        if coeffs.T0 > H0:
            raise DomainError("the cumulative form needs all zeros below T0 on the critical line")
        if T < 2 * coeffs.T0:
            raise DomainError(f"T must be >= 2 T0 = {2 * coeffs.T0:g}")
        return cumulative_coefficient(coeffs) / (2.0**th - 1) * T**th * math.log(T / 2)
    raise ArgumentError("form must be 'dyadic' or 'cumulative'")


# ---------------------------------------------------------------------------
# zero counting
# ---------------------------------------------------------------------------

def rvm_envelope(T: float) -> tuple[float, float]:
    """(lo, hi) window for N(T) from the explicit Riemann-von Mangoldt formula, T >= e."""
    if T < math.e:
        raise DomainError("need T >= e")
    main = T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e)) + 7.0 / 8.0
    c1, c2, c3, c4 = RVM
    r = c1 * math.log(T) + c2 * math.log(math.log(T)) + c3 + c4 / T
    return main - r, main + r


def zero_grid_step(T: float) -> float:
    """A quarter of the mean zero spacing 2 pi/log(T/2 pi) at height T."""
    return 0.25 * 2 * math.pi / max(math.log(T / (2 * math.pi)), 1.0)


def count_sign_changes(T: float, refine: int = 1, chunk: int = 200_000) -> int:
    """Sign changes of Z on a uniform grid over (0, T] with step zero_grid_step(T)/refine."""
    h = zero_grid_step(T) / refine
    n = int(math.ceil(T / h))
    grid = np.linspace(0.0, T, n + 1)
    count = 0
    prev = None
    for i in range(0, grid.size, chunk):
        z = np.asarray(riemann_siegel_Z(grid[i : i + chunk]))
        s = np.sign(z)
        if prev is not None:
            count += int(prev != s[0] and prev != 0)
        count += int(np.count_nonzero(s[1:] != s[:-1]))
        prev = s[-1]
    return count


def zero_count_empirical(T: float, max_refine: int = 8) -> tuple[int, float, float]:
    """(N(T), lo, hi): critical-line zeros up to T by sign changes, and the window."""
    if not math.e <= T <= ZERO_COUNT_T_MAX:
        raise DomainError(f"T must lie in [e, {ZERO_COUNT_T_MAX:g}]")
    lo, hi = rvm_envelope(T)
    refine = 1
    while True:
        n = count_sign_changes(T, refine)
        if lo <= n <= hi:
            return n, lo, hi
        if n > hi or refine >= max_refine:
            raise IntegrityError(f"N({T:g}) = {n} outside the window [{lo:.3f}, {hi:.3f}]")
        refine *= 2


def density_consistency_check(sigma: float, T: float) -> bool:
    """Desk-scale sanity: the bound is nonnegative and no zero off the line is known below T.

    Every zero with ordinate up to H0 is on the critical line, so the
    off-line count below T <= 1e5 is 0; the on-line count must also sit in
    the Riemann-von Mangoldt window.
    """
    if sigma <= 0.5:
        raise DomainError("sigma must exceed 1/2")
    if T > ZERO_COUNT_T_MAX:
        raise DomainError(f"T must be <= {ZERO_COUNT_T_MAX:g}")
    coeffs = density_coefficients()
    r = coeffs.rounded()
    s = min(sigma, coeffs.sigma_max)
    L = math.log(T)
    bound = r["a"] * T ** _exponent(s) * L + r["b"] * L * L + r["c"] * L * math.log(L) + r["d"] * L
    n_line, lo, hi = zero_count_empirical(T)
    off_line = 0 if T <= H0 else None
    return bound >= 0 and off_line == 0 and lo <= n_line <= hi


__all__ = [
    "H0", "SIGMA1_H0", "EPSILON", "LAMBDA_HAT", "MollifierContext", "mollifier_lambda",
    "mollifier_lambda_double_sum", "mollifier_normalizer", "gcd_double_sum", "gcd_sum_majorant",
    "lambda_hat_empirical", "PhiBound", "epsilon_window", "phi_moment_bound", "h_function",
    "b1", "b2", "arg_phi_bound", "argument_bound_b3", "mollified_zeta", "truncated_sigma_max",
    "DensityCoefficients", "density_coefficients", "cumulative_coefficient", "density_bound_eval",
    "rvm_envelope", "zero_grid_step", "count_sign_changes", "zero_count_empirical",
    "density_consistency_check",
]
