"""Scalar special-function kernel: Gamma, polygamma, Pochhammer, jet Gamma.

Complex double precision throughout.  Everything downstream (summation
formulas, boundary values, limit coefficients) reduces to these.
"""

from __future__ import annotations

import cmath
import math
from typing import Union

from .jets import DEFAULT_ORDER, Jet, as_jet, jet_exp, jet_mul

__all__ = [
    "PoleError",
    "gamma",
    "loggamma",
    "digamma",
    "trigamma",
    "polygamma",
    "gamma_jet",
    "digamma_jet",
    "pochhammer",
    "reciprocal_gamma_jet",
]

Scalar = Union[int, float, complex]

# Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficient
# set; see Pugh's thesis for the error analysis).  Relative error around
# 1e-15 on the half-plane handled directly.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

# B_{2k} for k = 1..13, used by the polygamma asymptotic series.
_BERN2K = (
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
    -3617.0 / 510,
    43867.0 / 798,
    -174611.0 / 330,
    854513.0 / 138,
    -236364091.0 / 2730,
    8553103.0 / 6,
)

_ASYMPTOTIC_RE = 16.0


class PoleError(ArithmeticError):
    """Gamma or polygamma requested exactly at a non-positive integer."""

    def __init__(self, location: complex, context: str = ""):
        self.location = location
        self.context = context
        where = "%g" % location.real if location.imag == 0 else repr(location)
        super().__init__(
            "pole at %s%s" % (where, " (%s)" % context if context else "")
        )


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real)


def gamma(z: Scalar) -> complex:
    """Complex Gamma function; raises PoleError at 0, -1, -2, ..."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(z, "gamma")
    if z.real < 0.5:
        # reflection keeps the Lanczos sum on its accurate half-plane
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    a = _LANCZOS_C[0]
    for k in range(1, 15):
        a += _LANCZOS_C[k] / (z - 1.0 + k)
    t = z + (_LANCZOS_G - 0.5)
    return math.sqrt(2.0 * math.pi) * t ** (z - 0.5) * cmath.exp(-t) * a


def loggamma(z: Scalar) -> complex:
    """log of the principal Gamma value (imaginary part in (-pi, pi]).

    Not the analytically continued log-Gamma; adequate for ratio tests
    and magnitude bookkeeping, which is all the engine needs.
    """
    return cmath.log(gamma(z))


def polygamma(n: int, z: Scalar) -> complex:
    """psi^(n)(z): digamma and its derivatives.

    Upward recurrence pushes Re(z) beyond 16, then the divergent-but-
    asymptotic Bernoulli series finishes; truncated at B_26 the floor is
    well under 1e-14 relative there.
    """
    if n < 0:
        raise ValueError("polygamma order must be >= 0")
    if n > 30:
        raise ValueError("polygamma order capped at 30")
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(z, "polygamma(%d)" % n)
    acc = 0j
    sign = (-1.0) ** (n + 1)
    nfact = math.factorial(n)
    while z.real < _ASYMPTOTIC_RE:
        acc += sign * nfact / z ** (n + 1)
        z += 1.0
    if n == 0:
        s = cmath.log(z) - 0.5 / z
        zpow = 1.0 / (z * z)
        term = zpow
        for k in range(1, 14):
            s -= _BERN2K[k - 1] / (2 * k) * term
            term *= zpow
    else:
        w = 1.0 / z
        s = math.factorial(n - 1) * w**n + nfact / 2.0 * w ** (n + 1)
        term = w ** (n + 2)
        for k in range(1, 14):
            coef = _BERN2K[k - 1] * math.factorial(2 * k + n - 1) / math.factorial(
                2 * k
            )
            s += coef * term
            term *= w * w
        s *= (-1.0) ** (n - 1)
    return acc + s


def digamma(z: Scalar) -> complex:
    return polygamma(0, z)


def trigamma(z: Scalar) -> complex:
    return polygamma(1, z)


def gamma_jet(z: Jet | Scalar, order: int = DEFAULT_ORDER) -> Jet:
    """Gamma of a jet: Gamma(z0) * exp(sum psi^(m-1)(z0) d^m / m!).

    The exponent is the truncated log-Gamma Taylor series around the
    base value z0, with d the nilpotent part of z.
    """
    if not isinstance(z, Jet):
        z = as_jet(z, order)
    z0 = z.coeffs[0]
    if _is_nonpositive_integer(z0):
        raise PoleError(z0, "gamma_jet")
    if z.is_scalar:
        return as_jet(gamma(z0), z.order)
    n = z.order
    delta = Jet((0j,) + z.coeffs[1:])
    expo = as_jet(0, n)
    dpow = as_jet(1, n)
    fact = 1.0
    for m in range(1, n + 1):
        dpow = jet_mul(dpow, delta)
        fact *= m
        expo = expo + dpow * (polygamma(m - 1, z0) / fact)
    return jet_exp(expo) * gamma(z0)


def digamma_jet(z: Jet | Scalar, order: int = DEFAULT_ORDER) -> Jet:
    """psi of a jet, via its own Taylor series in the nilpotent part."""
    if not isinstance(z, Jet):
        z = as_jet(z, order)
    z0 = z.coeffs[0]
    if _is_nonpositive_integer(z0):
        raise PoleError(z0, "digamma_jet")
    n = z.order
    delta = Jet((0j,) + z.coeffs[1:])
    out = as_jet(polygamma(0, z0), n)
    dpow = as_jet(1, n)
    fact = 1.0
    for m in range(1, n + 1):
        dpow = jet_mul(dpow, delta)
        fact *= m
        out = out + dpow * (polygamma(m, z0) / fact)
    return out


def reciprocal_gamma_jet(z: Jet | Scalar, order: int = DEFAULT_ORDER) -> Jet:
    """1/Gamma as a jet; finite even when the base value sits on a pole.

    At z0 = -m the reciprocal has a simple zero, so the jet is built from
    the reflection 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi, whose factors
    are regular there.
    """
    if not isinstance(z, Jet):
        z = as_jet(z, order)
    z0 = z.coeffs[0]
    if not _is_nonpositive_integer(z0):
        return jet_mul(as_jet(1, z.order), gamma_jet(z)) ** -1
    n = z.order
    # sin(pi z) jet around the base
    delta = Jet((0j,) + z.coeffs[1:])
    s0 = cmath.sin(math.pi * z0)
    c0 = cmath.cos(math.pi * z0)
    sin_jet = as_jet(0, n)
    dpow = as_jet(1, n)
    fact = 1.0
    for m in range(0, n + 1):
        if m > 0:
            dpow = jet_mul(dpow, delta)
            fact *= m
        deriv = (s0, c0, -s0, -c0)[m % 4] * math.pi**m
        sin_jet = sin_jet + dpow * (deriv / fact)
    return sin_jet * gamma_jet(1 - z) * (1.0 / math.pi)


def pochhammer(a: Jet | Scalar, k: int) -> Jet | complex:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    if isinstance(a, Jet):
        out = as_jet(1, a.order)
        for j in range(k):
            out = jet_mul(out, a + j)
        return out
    out = complex(1.0)
    a = complex(a)
    for j in range(k):
        out *= a + j
    return out
