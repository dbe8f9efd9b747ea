"""Arithmetic and analytic substrate.

Multiplicative-function sieves, Dirichlet partial sums, a high-precision zeta
oracle (Euler-Maclaurin), a fast double-precision zeta for quadrature, the
Riemann-Siegel Z-function and an adaptive Gauss-Legendre integrator whose
panels follow the local zero spacing of zeta.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import gmpy2
import mpmath
import numpy as np

from ._gamma import log_gamma
from .errors import ArgumentError, CapacityError, DomainError, ToleranceError

EULER_GAMMA = 0.57721566490153286061
T_MAX = 1.0e6
SIEVE_MAX = 10**8
DEFAULT_DIGITS = 30
EM_BERNOULLI_TERMS = 12          # corrections through B_24
EM_TAIL_TARGET = 1e-22
RS_THRESHOLD = 30.0
RS_ASYMPTOTIC_FROM = 300.0       # five correction terms reach 1e-8 only beyond ~150
TWO_PI = 2.0 * math.pi


def oracle_digits() -> int:
    """Working precision of the oracles in decimal digits (>= 30)."""
    raw = os.environ.get("EXPLICIT_ZETA_PRECISION")
    if raw is None:
        return DEFAULT_DIGITS
    try:
        digits = int(raw)
    except ValueError as exc:
        raise ArgumentError(f"EXPLICIT_ZETA_PRECISION must be an integer, got {raw!r}") from exc
    return max(digits, DEFAULT_DIGITS)


# ---------------------------------------------------------------------------
# strip points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StripPoint:
    """A point s = sigma + i t."""

    sigma: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise DomainError(f"non-finite strip point ({self.sigma}, {self.t})")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.t)

    def conj(self) -> "StripPoint":
        return StripPoint(self.sigma, -self.t)

    def reflect(self) -> "StripPoint":
        """The point 1 - s."""
        return StripPoint(1.0 - self.sigma, -self.t)


def as_point(s) -> StripPoint:
    if isinstance(s, StripPoint):
        return s
    if isinstance(s, tuple):
        return StripPoint(float(s[0]), float(s[1]))
    z = complex(s)
    return StripPoint(z.real, z.imag)


# ---------------------------------------------------------------------------
# sieves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArithmeticTables:
    """Moebius function, divisor counts and smallest prime factors up to ``limit``.

    Arrays are indexed by n directly; index 0 is unused.
    """

    limit: int
    mu: np.ndarray
    d: np.ndarray
    spf: np.ndarray
    primes: np.ndarray = field(repr=False)

    def prime_divisors(self, n: int) -> list[int]:
        if not 1 <= n <= self.limit:
            raise CapacityError(f"n={n} outside table range [1, {self.limit}]")
        out = []
        while n > 1:
            p = int(self.spf[n])
            out.append(p)
            while n % p == 0:
                n //= p
        return out

    def phi_x(self, n: int, x: float) -> float:
        """phi_x(n) = n^x prod_{p|n} (1 - p^-x)."""
        value = float(n) ** x
        for p in self.prime_divisors(n):
            value *= 1.0 - float(p) ** (-x)
        return value

    def phi_x_array(self, x: float) -> np.ndarray:
        """phi_x(n) for every n <= limit (index 0 set to 0)."""
        n = np.arange(self.limit + 1, dtype=float)
        out = n**x
        for p in self.primes:
            out[p :: p] *= 1.0 - float(p) ** (-x)
        out[0] = 0.0
        return out


def _smallest_prime_factors(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    n = np.arange(limit + 1, dtype=np.int32)
    unset = spf == 0
    spf[unset] = n[unset]
    spf[:2] = 0
    return spf


def sieve_tables(limit: int) -> ArithmeticTables:
    """Moebius function and divisor counts from a smallest-prime-factor sieve.

    Every n is factored by repeatedly dividing out its smallest prime factor,
    all n at once; mu and d are then assembled multiplicatively from the
    exponents.  Memory is a handful of int32 arrays of length ``limit``.
    """
    if isinstance(limit, bool) or not isinstance(limit, (int, np.integer)) or not 1 <= limit <= SIEVE_MAX:
        raise CapacityError(f"sieve limit must be an integer in [1, {SIEVE_MAX}], got {limit!r}")
    limit = int(limit)
    spf = _smallest_prime_factors(limit)
    mu = np.ones(limit + 1, dtype=np.int8)
    d = np.ones(limit + 1, dtype=np.int32)
    mu[0] = 0
    d[0] = 0
    idx = np.arange(2, limit + 1, dtype=np.int32)
    rem = idx.copy()
    while idx.size:
        p = spf[rem]
        rem //= p
        exp = np.ones(idx.size, dtype=np.int32)
        more = np.flatnonzero(rem % p == 0)
        while more.size:
            rem[more] //= p[more]
            exp[more] += 1
            more = more[rem[more] % p[more] == 0]
        mu[idx] *= np.where(exp == 1, -1, 0).astype(np.int8)
        d[idx] *= exp + 1
        keep = rem > 1
        idx, rem = idx[keep], rem[keep]
    primes = np.flatnonzero((spf == np.arange(limit + 1)) & (np.arange(limit + 1) >= 2))
    return ArithmeticTables(limit=limit, mu=mu, d=d, spf=spf, primes=primes)


# ---------------------------------------------------------------------------
# Dirichlet partial sums
# ---------------------------------------------------------------------------

_EXPONENTS = ("-s", "s-1")


def _reduced_phase(t, logn):
    # t*log(n) reduced modulo 2*pi, carried in extended precision
    ph = np.asarray(t, dtype=np.longdouble) * logn
    two_pi = np.longdouble(2) * np.longdouble(np.pi)
    return np.asarray(ph - two_pi * np.floor(ph / two_pi), dtype=float)


def dirichlet_sum(s, x: float, exponent: str = "-s", digits: int | None = None):
    """Partial sum of n^{-s} (``exponent="-s"``) or n^{s-1} over 1 <= n <= x.

    With ``digits`` the sum is accumulated in mpmath at that precision and an
    ``mpmath.mpc`` is returned; otherwise phases are reduced in extended
    precision and real and imaginary parts are summed with ``math.fsum``.
    """
    if exponent not in _EXPONENTS:
        raise ArgumentError(f"exponent must be one of {_EXPONENTS}")
    if x < 0:
        raise DomainError("x must be nonnegative")
    p = as_point(s)
    n_max = int(math.floor(x))
    if n_max < 1:
        return mpmath.mpc(0) if digits else 0j
    if digits:
        with mpmath.workdps(digits):
            sp = mpmath.mpc(p.sigma, p.t)
            e = -sp if exponent == "-s" else sp - 1
            acc = mpmath.fsum(mpmath.power(n, e) for n in range(1, n_max + 1))
            return +acc
    n = np.arange(1, n_max + 1)
    logn = np.log(n.astype(np.longdouble))
    if exponent == "-s":
        mod = n.astype(float) ** (-p.sigma)
        ph = -_reduced_phase(p.t, logn)
    else:
        mod = n.astype(float) ** (p.sigma - 1.0)
        ph = _reduced_phase(p.t, logn)
    return complex(math.fsum(mod * np.cos(ph)), math.fsum(mod * np.sin(ph)))


# ---------------------------------------------------------------------------
# high-precision zeta (Euler-Maclaurin)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_over_factorial(k_max):
    # B_{2k}/(2k)! as exact (p, q) pairs, k = 1..k_max
    out = []
    for k in range(1, k_max + 1):
        p, q = mpmath.bernfrac(2 * k)
        out.append((int(p), int(q) * math.factorial(2 * k)))
    return tuple(out)


def _em_tail_bound(sigma, t, n_terms, k_terms):
    """Bound for the Euler-Maclaurin remainder after ``k_terms`` corrections.

    The remainder is at most |s+2K+1|/(sigma+2K+1) times the first omitted
    term B_{2K+2}/(2K+2)! s(s+1)...(s+2K) N^{-s-2K-1}.
    """
    k = k_terms
    with mpmath.workdps(20):
        s = mpmath.mpc(sigma, t)
        prod = mpmath.mpf(1)
        for j in range(2 * k + 1):
            prod *= abs(s + j)
        p, q = mpmath.bernfrac(2 * k + 2)
        first = abs(mpmath.mpf(p) / q) / mpmath.factorial(2 * k + 2) * prod
        first *= mpmath.power(n_terms, -(sigma + 2 * k + 1))
        return float(first * abs(s + 2 * k + 1) / (sigma + 2 * k + 1))


def euler_maclaurin_terms(s) -> int:
    """Number of initial terms used by :func:`zeta_reference` at ``s``."""
    p = as_point(s)
    n = math.ceil(10 + 2 * abs(p.t))
    while _em_tail_bound(p.sigma, p.t, n, EM_BERNOULLI_TERMS) >= EM_TAIL_TARGET:
        n += max(10, n // 2)
    return n


def zeta_reference(s, digits: int | None = None) -> mpmath.mpc:
    """zeta(s) by Euler-Maclaurin summation at ``digits`` (default >= 30) working digits.

    N starts at ceil(10 + 2|t|) and grows until the remainder bound is below
    1e-22; Bernoulli corrections run through B_24.  The result is an
    ``mpmath.mpc`` carrying the working precision.
    """
    p = as_point(s)
    if p.sigma == 1.0 and p.t == 0.0:
        raise DomainError("zeta has a pole at s = 1")
    if abs(p.t) > T_MAX:
        raise DomainError(f"|t| = {abs(p.t)} exceeds the oracle ceiling {T_MAX:g}")
    if p.sigma <= -(2 * EM_BERNOULLI_TERMS + 1):
        raise DomainError("sigma too negative for the Euler-Maclaurin oracle")
    digits = digits or oracle_digits()
    bits = int(digits * 3.33) + 32
    n_terms = euler_maclaurin_terms(p)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        s_ = gmpy2.mpc(gmpy2.mpfr(p.sigma), gmpy2.mpfr(p.t))
        acc = gmpy2.mpc(0)
        for n in range(1, n_terms):
            acc += gmpy2.exp(-s_ * gmpy2.log(gmpy2.mpfr(n)))
        big_n = gmpy2.mpfr(n_terms)
        log_n = gmpy2.log(big_n)
        n_pow = gmpy2.exp(-s_ * log_n)           # N^{-s}
        acc += n_pow * big_n / (s_ - 1) + n_pow / 2
        rising = s_                               # s(s+1)...(s+2k-2)
        term_pow = n_pow / big_n                  # N^{-s-1}
        inv_n2 = 1 / (big_n * big_n)
        for k, (bp, bq) in enumerate(_bernoulli_over_factorial(EM_BERNOULLI_TERMS), start=1):
            acc += gmpy2.mpfr(bp) / bq * rising * term_pow
            rising *= (s_ + 2 * k - 1) * (s_ + 2 * k)
            term_pow *= inv_n2
        re, im = acc.real, acc.imag
    with mpmath.workprec(bits):
        return mpmath.mpc(mpmath.mpf(re.as_integer_ratio()[0]) / re.as_integer_ratio()[1],
                          mpmath.mpf(im.as_integer_ratio()[0]) / im.as_integer_ratio()[1])


def zeta_fast(sigma: float, t) -> np.ndarray:
    """Double-precision zeta(sigma + i t) for an array of t.

    Euler-Maclaurin with N = |t|/2 + 20 terms and twelve Bernoulli
    corrections; the first omitted term is about pi^-24 relative to N^-sigma.
    Phases are reduced in extended precision.  Intended for quadrature and
    sampling suites, cross-checked against :func:`zeta_reference` in tests.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t.shape, dtype=complex)
    if t.size == 0:
        return out
    n_terms = int(np.max(np.abs(t)) / 2) + 20
    if n_terms * t.size <= 4_000_000:
        return _zeta_fast_block(sigma, t, n_terms)
    chunk = max(1, 4_000_000 // n_terms)
    for i in range(0, t.size, chunk):
        out[i : i + chunk] = _zeta_fast_block(sigma, t[i : i + chunk], n_terms)
    return out


def _zeta_fast_block(sigma, t, n_terms):
    n = np.arange(1, n_terms)
    logn = np.log(n.astype(np.longdouble))
    mod = n.astype(float) ** (-sigma)
    ph = _reduced_phase(t[:, None], logn[None, :])
    main = (mod[None, :] * np.exp(-1j * ph)).sum(axis=1)
    return main + _em_correction(sigma, t, n_terms)


def _em_correction(sigma, t, n_terms):
    s = sigma + 1j * t
    big_n = float(n_terms)
    ph = _reduced_phase(t, np.log(np.longdouble(n_terms)))
    n_pow = big_n ** (-sigma) * np.exp(-1j * ph)
    acc = n_pow * big_n / (s - 1) + n_pow / 2
    rising = s.copy()
    term_pow = n_pow / big_n
    for k, (bp, bq) in enumerate(_bernoulli_over_factorial(EM_BERNOULLI_TERMS), start=1):
        acc = acc + (bp / bq) * rising * term_pow
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        term_pow = term_pow / (big_n * big_n)
    return acc


def zeta_fast_panels(sigma: float, starts: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """zeta(sigma + i t) on the grid t = starts[p] + offsets[j].

    Uses n^{-i(a+b)} = n^{-ia} n^{-ib} so that the main sum becomes one matrix
    product; returns an array of shape (len(starts), len(offsets)).
    """
    starts = np.asarray(starts, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    t_max = float(np.max(np.abs(starts))) + float(np.max(np.abs(offsets)))
    n_terms = int(t_max / 2) + 20
    n = np.arange(1, n_terms)
    logn = np.log(n.astype(np.longdouble))
    mod = n.astype(float) ** (-sigma)
    right = mod[:, None] * np.exp(-1j * _reduced_phase(offsets[None, :], logn[:, None]))
    out = np.empty((starts.size, offsets.size), dtype=complex)
    chunk = max(1, 2_000_000 // n_terms)
    for i in range(0, starts.size, chunk):
        a = starts[i : i + chunk]
        left = np.exp(-1j * _reduced_phase(a[:, None], logn[None, :]))
        out[i : i + chunk] = left @ right
    grid = starts[:, None] + offsets[None, :]
    out += _em_correction(sigma, grid.ravel(), n_terms).reshape(grid.shape)
    return out


# ---------------------------------------------------------------------------
# Riemann-Siegel Z
# ---------------------------------------------------------------------------

def theta_reference(t: float, digits: int | None = None) -> mpmath.mpf:
    """Riemann-Siegel theta, Im log Gamma(1/4 + i t/2) - (t/2) log pi (mod 2 pi)."""
    with mpmath.workdps(digits or oracle_digits()):
        t = mpmath.mpf(t)
        return mpmath.im(log_gamma(mpmath.mpc(0.25, t / 2))) - t / 2 * mpmath.log(mpmath.pi)


def theta_asymptotic(t) -> np.ndarray:
    """Asymptotic series for theta(t) in extended precision (t >= 30)."""
    t = np.asarray(t, dtype=np.longdouble)
    pi = np.longdouble(np.pi)
    inv = 1 / t
    inv2 = inv * inv
    tail = inv * (np.longdouble(1) / 48 + inv2 * (np.longdouble(7) / 5760 + inv2 * (
        np.longdouble(31) / 80640 + inv2 * (np.longdouble(127) / 430080
                                            + inv2 * np.longdouble(511) / 1216512))))
    return t / 2 * np.log(t / (2 * pi)) - t / 2 - pi / 8 + tail


@lru_cache(maxsize=None)
def _rs_correction_polys(degree=110):
    """Taylor coefficients in u = p - 1/2 of the correction functions C0..C4.

    Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) = -cos(2 pi u^2 - 5 pi/8) / cos(2 pi u)
    and C_k are fixed combinations of its derivatives.
    """
    with mpmath.workdps(80):
        pi = mpmath.pi
        num = [mpmath.mpf(0)] * (degree + 1)
        c58, s58 = mpmath.cos(5 * pi / 8), mpmath.sin(5 * pi / 8)
        # cos(2 pi u^2 - 5pi/8) = c58 cos(2 pi u^2) + s58 sin(2 pi u^2)
        for k in range(0, degree // 2 + 1):
            power = 2 * k
            if 2 * power <= degree:
                coef = (2 * pi) ** power / mpmath.factorial(power)
                num[2 * power] += (-1) ** k * c58 * coef
            power = 2 * k + 1
            if 2 * power <= degree:
                coef = (2 * pi) ** power / mpmath.factorial(power)
                num[2 * power] += (-1) ** k * s58 * coef
        den = [mpmath.mpf(0)] * (degree + 1)
        for k in range(0, degree // 2 + 1):
            den[2 * k] = (-1) ** k * (2 * pi) ** (2 * k) / mpmath.factorial(2 * k)
        psi = [mpmath.mpf(0)] * (degree + 1)
        for n in range(degree + 1):
            acc = -num[n]
            for k in range(1, n + 1):
                acc -= den[k] * psi[n - k]
            psi[n] = acc / den[0]

        def deriv(j):
            return [psi[n + j] * mpmath.rf(n + 1, j) for n in range(degree + 1 - j)]

        def combo(parts):
            length = max(len(deriv(j)) for j, _ in parts)
            out = [mpmath.mpf(0)] * length
            for j, w in parts:
                dj = deriv(j)
                for n, c in enumerate(dj):
                    out[n] += w * c
            return out

        c = [
            combo([(0, 1)]),
            combo([(3, -1 / (96 * pi**2))]),
            combo([(2, 1 / (64 * pi**2)), (6, 1 / (18432 * pi**4))]),
            combo([(1, -1 / (64 * pi**2)), (5, -1 / (3840 * pi**4)), (9, -1 / (5308416 * pi**6))]),
            combo([(0, 1 / (128 * pi**2)), (4, 19 / (24576 * pi**4)),
                   (8, 11 / (5898240 * pi**6)), (12, 1 / (2038431744 * pi**8))]),
        ]
        return tuple(np.array([float(v) for v in ck]) for ck in c)


def _z_reference(t: float) -> float:
    with mpmath.workdps(oracle_digits()):
        z = zeta_reference(StripPoint(0.5, t))
        th = theta_reference(t)
        return float(mpmath.re(mpmath.expj(th) * z))


def _z_riemann_siegel(t: np.ndarray) -> np.ndarray:
    tl = t.astype(np.longdouble)
    a2 = t / TWO_PI
    a = np.sqrt(a2)
    big_n = np.floor(a).astype(np.int64)
    theta = theta_asymptotic(tl)
    n_max = int(big_n.max())
    out = np.zeros(t.shape)
    two_pi = np.longdouble(2) * np.longdouble(np.pi)
    chunk = max(1, 2_000_000 // max(n_max, 1))
    n = np.arange(1, n_max + 1)
    logn = np.log(n.astype(np.longdouble))
    inv_sqrt = 1.0 / np.sqrt(n.astype(float))
    for i in range(0, t.size, chunk):
        sl = slice(i, i + chunk)
        ph = theta[sl, None] - tl[sl, None] * logn[None, :]
        ph = np.asarray(ph - two_pi * np.floor(ph / two_pi), dtype=float)
        mask = n[None, :] <= big_n[sl, None]
        out[sl] = 2.0 * np.sum(np.where(mask, inv_sqrt[None, :] * np.cos(ph), 0.0), axis=1)
    u = a - big_n - 0.5
    polys = _rs_correction_polys()
    inv_a = 1.0 / a
    corr = np.zeros(t.shape)
    w = np.ones(t.shape)
    for ck in polys:
        corr += w * np.polynomial.polynomial.polyval(u, ck)
        w = w * inv_a
    sign = np.where(big_n % 2 == 1, 1.0, -1.0)      # (-1)^(N-1)
    return out + sign * a2 ** (-0.25) * corr


def riemann_siegel_Z(t):
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + i t) for t >= 0.

    t >= 300: main sum plus the correction terms C0..C4 in double precision
    with extended-precision phases.  30 <= t < 300: the truncation error of
    those five terms is still about 1e-6 at t = 30, so Z is taken from the
    double-precision Euler-Maclaurin zeta with the asymptotic theta.  t < 30:
    routed through :func:`zeta_reference` and the exact theta phase.
    """
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(arr < 0):
        raise DomainError("riemann_siegel_Z expects t >= 0")
    if np.any(arr > T_MAX):
        raise DomainError(f"t exceeds {T_MAX:g}")
    out = np.empty(arr.shape)
    low = arr < RS_THRESHOLD
    high = arr >= RS_ASYMPTOTIC_FROM
    mid = ~low & ~high
    if np.any(high):
        out[high] = _z_riemann_siegel(arr[high])
    if np.any(mid):
        tm = arr[mid]
        theta = np.asarray(theta_asymptotic(tm), dtype=float)
        out[mid] = np.real(np.exp(1j * theta) * zeta_fast(0.5, tm))
    for idx in np.flatnonzero(low):
        out[idx] = _z_cached(float(arr[idx]))
    return float(out[0]) if scalar else out


@lru_cache(maxsize=65536)
def _z_cached(t):
    return _z_reference(t)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def zeta_panel_width(t: float) -> float:
    """Panel width cap min(1, 2 pi / log(max(t, 8) / 2 pi)) tracking the zero spacing."""
    return min(1.0, TWO_PI / math.log(max(abs(t), 8.0) / TWO_PI))


@lru_cache(maxsize=None)
def gauss_legendre(order: int):
    """Gauss-Legendre nodes and weights on [-1, 1], correctly rounded to double.

    Newton iteration on the Legendre recurrence at 50 digits; the weights from
    numpy's ``leggauss`` are off by a few tens of ulps, which breaks exactness
    on high-degree polynomials.
    """
    with mpmath.workdps(50):
        nodes, weights = [], []
        for k in range(1, order + 1):
            x = mpmath.cos(mpmath.pi * (k - mpmath.mpf(0.25)) / (order + mpmath.mpf(0.5)))
            for _ in range(100):
                p0, p1 = mpmath.mpf(1), x
                for j in range(2, order + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = order * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpmath.mpf(10) ** -45:
                    break
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        x = np.array([float(v) for v in reversed(nodes)])
        w = np.array([float(v) for v in reversed(weights)])
    return x, w


@dataclass(frozen=True)
class Quadrature:
    """Adaptive panel bisection on a Gauss-Legendre rule.

    ``max_width`` maps a position t to the largest admissible panel width
    there.  Each panel is compared with its two halves; panels whose
    difference exceeds their share of ``tolerance`` are bisected.  All panels
    of one refinement level are evaluated in a single vectorized call and the
    accepted contributions are reduced in left-to-right order.
    """

    order: int = 16
    tolerance: float = 1e-8
    max_width: Callable[[float], float] = zeta_panel_width
    max_depth: int = 40

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ArgumentError("tolerance must be positive")
        if self.order < 1:
            raise ArgumentError("order must be positive")

    def rule(self, f, a: float, b: float):
        x, w = gauss_legendre(self.order)
        half = 0.5 * (b - a)
        vals = np.asarray(f(a + half * (x + 1.0)))
        if np.iscomplexobj(vals):
            return half * complex(math.fsum(w * vals.real), math.fsum(w * vals.imag))
        return half * math.fsum(w * vals)

    def initial_panels(self, a: float, b: float) -> list[tuple[float, float]]:
        panels = []
        left = a
        while left < b:
            w = self.max_width(left + 1.0)
            right = min(b, left + w)
            if b - right < 1e-12 * max(1.0, abs(b)):
                right = b
            panels.append((left, right))
            left = right
        return panels

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], a: float, b: float):
        if b < a:
            raise ArgumentError("integration bounds must satisfy a <= b")
        if b == a:
            return 0.0
        length = b - a
        x, w = gauss_legendre(self.order)
        pending = np.array(self.initial_panels(a, b))
        accepted: list[tuple[float, complex]] = []
        for _depth in range(self.max_depth):
            if pending.size == 0:
                break
            lo, hi = pending[:, 0], pending[:, 1]
            mid = 0.5 * (lo + hi)
            whole = self._batch(f, lo, hi, x, w)
            left = self._batch(f, lo, mid, x, w)
            right = self._batch(f, mid, hi, x, w)
            fine = left + right
            err = np.abs(whole - fine)
            ok = err <= self.tolerance * (hi - lo) / length
            for k in np.flatnonzero(ok):
                accepted.append((float(lo[k]), fine[k]))
            bad = np.flatnonzero(~ok)
            if bad.size:
                pending = np.concatenate(
                    [np.stack([lo[bad], mid[bad]], axis=1), np.stack([mid[bad], hi[bad]], axis=1)]
                )
                pending = pending[np.argsort(pending[:, 0], kind="stable")]
            else:
                pending = np.empty((0, 2))
        if pending.size:
            raise ToleranceError(
                f"quadrature did not converge on {len(pending)} panels near t={pending[0, 0]:.6g}"
            )
        accepted.sort(key=lambda item: item[0])
        values = [v for _, v in accepted]
        if np.iscomplexobj(np.asarray(values)):
            return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
        return math.fsum(float(np.real(v)) for v in values)

    @staticmethod
    def _batch(f, lo, hi, x, w):
        half = 0.5 * (hi - lo)
        nodes = lo[:, None] + half[:, None] * (x[None, :] + 1.0)
        vals = np.asarray(f(nodes.ravel())).reshape(nodes.shape)
        return half * (vals @ w)


def integrate_abs_zeta_sq(T1: float, T2: float, tol: float = 1e-4) -> float:
    """Integral of |zeta(1/2 + i t)|^2 = Z(t)^2 over [T1, T2] with absolute error <= tol."""
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    if not 0 <= T1 <= T2 <= 1e5:
        raise DomainError("require 0 <= T1 <= T2 <= 1e5")
    if T1 == T2:
        return 0.0
    quad = Quadrature(order=16, tolerance=tol)
    return quad.integrate(lambda t: riemann_siegel_Z(t) ** 2, T1, T2)


def oscillatory_integral_check(sigma: float, lambda_or_xi: float, T1: float, T2: float,
                               variant: str = "lemma_integral", tol: float = 1e-10):
    """Numerical modulus of an oscillatory integral next to its closed-form majorant.

    ``lemma_integral``:  |int_{T1}^{T2} t^{1-2 sigma} e^{i lambda t} dt|  vs  (2/|lambda|) T1^{1-2 sigma}.
    ``lemma_integral2``: |int_{T1}^{T2} t^{1/2-sigma} (t/(e xi))^{i t} dt|  vs
    8 T1^{1/2-sigma} / log((T1 + sqrt(T1))/xi).  The conjugate phase gives the same modulus.
    """
    if sigma < 0.5:
        raise DomainError("sigma must be >= 1/2")
    if variant == "lemma_integral":
        lam = lambda_or_xi
        if lam == 0 or T1 > T2:
            raise DomainError("require lambda != 0 and T1 <= T2")
        width = min(1.0, math.pi / abs(lam))
        quad = Quadrature(order=16, tolerance=tol, max_width=lambda _t: width)
        value = quad.integrate(lambda t: t ** (1 - 2 * sigma) * np.exp(1j * lam * t), T1, T2)
        bound = 2.0 / abs(lam) * T1 ** (1 - 2 * sigma)
    elif variant == "lemma_integral2":
        xi = lambda_or_xi
        if not (0 < xi <= T1 and T1 >= 2 and T1 + math.sqrt(T1) <= T2):
            raise DomainError("require 0 < xi <= T1, 2 <= T1, T1 + sqrt(T1) <= T2")

        def f(t):
            return t ** (0.5 - sigma) * np.exp(1j * t * np.log(t / (math.e * xi)))

        def width(t):
            return min(1.0, math.pi / max(math.log(max(t, xi * 1.0001) / xi), 1e-3))

        quad = Quadrature(order=16, tolerance=tol, max_width=width)
        value = quad.integrate(f, T1, T2)
        bound = 8.0 * T1 ** (0.5 - sigma) / math.log((T1 + math.sqrt(T1)) / xi)
    else:
        raise ArgumentError(f"unknown variant {variant!r}")
    return abs(value), bound


def sum_integral_interchange(f, g, g_inv, T1: float, T2: float, tol: float = 1e-10):
    """Both sides of the sum/integral interchange rule.

    Left: int_{T1}^{T2} sum_{n <= g(t)} f(n, t) dt.
    Right: sum_{n <= g(T2)} int_{max(T1, g^-1(n))}^{T2} f(n, t) dt.
    ``f`` is vectorized in t; ``g`` is strictly increasing with g(T1) >= 1.
    """
    n_top = int(math.floor(g(T2)))
    breaks = sorted({T1, T2, *[g_inv(n) for n in range(1, n_top + 1) if T1 < g_inv(n) < T2]})
    quad = Quadrature(order=16, tolerance=tol, max_width=lambda _t: 1.0)

    def summed(tt):
        tt = np.asarray(tt)
        out = np.zeros(tt.shape)
        top = np.floor(g(tt)).astype(int)
        for n in range(1, n_top + 1):
            out += np.where(n <= top, f(n, tt), 0.0)
        return out

    # split at the jump points so every panel sees a smooth integrand
    left = math.fsum(quad.integrate(summed, a, b) for a, b in zip(breaks[:-1], breaks[1:]))
    right = math.fsum(
        quad.integrate(lambda tt, n=n: f(n, tt), max(T1, g_inv(n)), T2) for n in range(1, n_top + 1)
    )
    return left, right


# ---------------------------------------------------------------------------
# elementary sum majorants
# ---------------------------------------------------------------------------

def harmonic_sum_bound(X: float) -> float:
    """Majorant log X + gamma + 1/(2X) for sum_{n <= X} 1/n (X >= 1)."""
    if X < 1:
        raise DomainError("X must be >= 1")
    return math.log(X) + EULER_GAMMA + 1.0 / (2.0 * X)


def power_sum_bounds(sigma: float, X: float) -> dict[str, float]:
    """Majorants for the partial power sums used in the moment estimates.

    Keys name the summand: ``"n^-2s"``, ``"n^(2s-2)"``, ``"n^(1-2s)"``,
    ``"n^-s"`` and ``"n^(2s-1)"`` for s = sigma in [1/2, 1).
    """
    if not 0.5 <= sigma < 1:
        raise DomainError("sigma must lie in [1/2, 1)")
    if X < 1:
        raise DomainError("X must be >= 1")
    h = harmonic_sum_bound(X)
    return {
        "n^-2s": h,
        "n^(2s-2)": X ** (2 * sigma - 1) * h,
        "n^(1-2s)": X ** (2 * (1 - sigma)) / (2 * (1 - sigma)),
        "n^-s": X ** (1 - sigma) / (1 - sigma),
        "n^(2s-1)": X ** (2 * sigma) / (2 * sigma) * (1 + 2 * sigma / X - X ** (-2 * sigma)),
    }


def power_sums_exact(sigma: float, X: float) -> dict[str, float]:
    """The partial sums bounded by :func:`power_sum_bounds`, summed directly."""
    n = np.arange(1, int(math.floor(X)) + 1, dtype=float)
    return {
        "n^-2s": math.fsum(n ** (-2 * sigma)),
        "n^(2s-2)": math.fsum(n ** (2 * sigma - 2)),
        "n^(1-2s)": math.fsum(n ** (1 - 2 * sigma)),
        "n^-s": math.fsum(n ** (-sigma)),
        "n^(2s-1)": math.fsum(n ** (2 * sigma - 1)),
    }
