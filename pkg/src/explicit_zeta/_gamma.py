"""Log-gamma by the Stirling series, used as oracle plumbing.

The argument is shifted until its real part exceeds 10 and then ten
Bernoulli terms of the asymptotic series are summed.  At ``|w| >= 10`` the
first omitted term is about 1e-20, far below the accuracy any caller needs.
Branches of the logarithm are not normalised: callers only exponentiate the
result or use its imaginary part modulo 2*pi.
"""

from functools import lru_cache

import mpmath

STIRLING_TERMS = 10
SHIFT_THRESHOLD = 10


@lru_cache(maxsize=None)
def _stirling_coefficients(terms):
    # B_{2k} / (2k (2k-1)) as exact fractions
    out = []
    for k in range(1, terms + 1):
        p, q = mpmath.bernfrac(2 * k)
        out.append((p, q * 2 * k * (2 * k - 1)))
    return tuple(out)


def log_gamma(z):
    """Return a logarithm of Gamma(z) for complex ``z`` at the current mpmath precision.

    ``z`` must avoid the poles 0, -1, -2, ...
    """
    z = mpmath.mpmathify(z)
    if z.imag == 0 and z.real <= 0 and z.real == int(z.real):
        raise ZeroDivisionError("log_gamma pole")
    shift = 0
    re = float(mpmath.re(z))
    if re < SHIFT_THRESHOLD:
        shift = int(SHIFT_THRESHOLD - re) + 1
    w = z + shift
    acc = (w - mpmath.mpf(0.5)) * mpmath.log(w) - w + mpmath.log(2 * mpmath.pi) / 2
    w_inv = 1 / w
    w_inv2 = w_inv * w_inv
    power = w_inv
    for p, q in _stirling_coefficients(STIRLING_TERMS):
        acc += mpmath.mpf(p) / q * power
        power *= w_inv2
    if shift:
        prod = mpmath.mpf(1)
        for j in range(shift):
            prod *= z + j
        acc -= mpmath.log(prod)
    return acc
