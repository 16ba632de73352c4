"""Truncated Taylor arithmetic in a formal perturbation.

A Jet of order K is the polynomial c0 + c1*e + ... + cK*e^K with complex
coefficients, where e is formal and e^(K+1) = 0.  Extracting coefficient
k of a jet-valued computation differentiates the computation k times (up
to k!) with respect to the perturbed quantity, which is how parameter
derivatives of series are taken everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Jet",
    "as_jet",
    "eps",
    "jet_mul",
    "jet_pow",
    "jet_log",
    "jet_exp",
    "jet_inverse",
    "extract",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER = 3

Scalar = Union[int, float, complex]


@dataclass(frozen=True, slots=True)
class Jet:
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a jet needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> complex:
        """The constant coefficient c0."""
        return self.coeffs[0]

    @property
    def is_scalar(self) -> bool:
        """True when every perturbation coefficient vanishes."""
        return all(c == 0 for c in self.coeffs[1:])

    def __repr__(self) -> str:
        return "Jet(%s)" % ", ".join(_fmt(c) for c in self.coeffs)

    # -- ring operations ------------------------------------------------

    def __add__(self, other) -> "Jet":
        o = _coerce(other, self.order)
        if o is NotImplemented:
            return NotImplemented
        return Jet(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "Jet":
        o = _coerce(other, self.order)
        if o is NotImplemented:
            return NotImplemented
        return Jet(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other) -> "Jet":
        o = _coerce(other, self.order)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> "Jet":
        o = _coerce(other, self.order)
        if o is NotImplemented:
            return NotImplemented
        return jet_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        o = _coerce(other, self.order)
        if o is NotImplemented:
            return NotImplemented
        return jet_mul(self, jet_inverse(o))

    def __rtruediv__(self, other) -> "Jet":
        o = _coerce(other, self.order)
        if o is NotImplemented:
            return NotImplemented
        return jet_mul(o, jet_inverse(self))

    def __pow__(self, p) -> "Jet":
        return jet_pow(self, p)

    def __rpow__(self, base) -> "Jet":
        return jet_pow(as_jet(base, self.order), self)

    def __eq__(self, other) -> bool:
        if isinstance(other, Jet):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, float, complex)):
            return self.is_scalar and self.coeffs[0] == complex(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)


def _fmt(c: complex) -> str:
    if c.imag == 0:
        r = c.real
        return "%g" % r if r == int(r) or abs(r) > 1e-4 else repr(r)
    return repr(c)


def _coerce(x, order: int):
    if isinstance(x, Jet):
        if x.order != order:
            raise ValueError(
                "mixed jet orders %d and %d; promote explicitly" % (x.order, order)
            )
        return x
    if isinstance(x, (int, float, complex)):
        return as_jet(x, order)
    return NotImplemented


def as_jet(x: Scalar | Jet, order: int = DEFAULT_ORDER) -> Jet:
    """Embed a scalar as the constant jet (x, 0, ..., 0)."""
    if isinstance(x, Jet):
        if x.order != order:
            raise ValueError("jet already has order %d, wanted %d" % (x.order, order))
        return x
    return Jet((complex(x),) + (0j,) * order)


def eps(order: int = DEFAULT_ORDER, scale: Scalar = 1) -> Jet:
    """The perturbation itself (optionally scaled): scale * e."""
    if order < 1:
        raise ValueError("order must be >= 1 to carry a perturbation")
    return Jet((0j, complex(scale)) + (0j,) * (order - 1))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at the common order."""
    if a.order != b.order:
        raise ValueError("mixed jet orders %d and %d" % (a.order, b.order))
    ac, bc = a.coeffs, b.coeffs
    n = len(ac)
    return Jet(
        tuple(sum(ac[i] * bc[m - i] for i in range(m + 1)) for m in range(n))
    )


def jet_inverse(a: Jet) -> Jet:
    """Multiplicative inverse; needs an invertible constant part."""
    a0 = a.coeffs[0]
    if a0 == 0:
        raise ZeroDivisionError("jet with zero constant part has no inverse")
    n = a.order + 1
    out = [1.0 / a0] + [0j] * (n - 1)
    for m in range(1, n):
        out[m] = -sum(a.coeffs[j] * out[m - j] for j in range(1, m + 1)) / a0
    return Jet(tuple(out))


def jet_log(a: Jet) -> Jet:
    """log(a) truncated; branch cut on the closed negative real axis."""
    a0 = a.coeffs[0]
    if a0 == 0 or (a0.imag == 0 and a0.real < 0):
        raise ValueError("jet_log needs a constant part off (-oo, 0]")
    n = a.order + 1
    u = [c / a0 for c in a.coeffs]  # 1 + nilpotent
    u[0] = 0j
    out = [complex(math.log(abs(a0)), math.atan2(a0.imag, a0.real))] + [0j] * (n - 1)
    upow = [0j] * n
    upow[0] = 1.0 + 0j
    sign = 1.0
    for m in range(1, n):
        upow = _nilpotent_mul(upow, u)
        for i in range(m, n):
            out[i] += sign * upow[i] / m
        sign = -sign
    return Jet(tuple(out))


def jet_exp(a: Jet) -> Jet:
    """exp(a) truncated."""
    n = a.order + 1
    u = list(a.coeffs)
    u[0] = 0j
    scale = _cexp(a.coeffs[0])
    out = [0j] * n
    out[0] = 1.0 + 0j
    upow = [0j] * n
    upow[0] = 1.0 + 0j
    fact = 1.0
    for m in range(1, n):
        upow = _nilpotent_mul(upow, u)
        fact *= m
        for i in range(m, n):
            out[i] += upow[i] / fact
    return Jet(tuple(scale * c for c in out))


def jet_pow(a: Jet, p: Scalar | Jet) -> Jet:
    """a**p as exp(p log a); integer p by repeated product.

    The repeated-product route also covers nilpotent bases (zero constant
    part), which the log route cannot.  Jet-valued exponents (used for
    prefactors whose power carries the perturbation) always go through
    exp/log.
    """
    if isinstance(p, Jet):
        return jet_exp(jet_mul(jet_log(a), p))
    pc = complex(p)
    if pc.imag == 0 and float(pc.real).is_integer():
        k = int(pc.real)
        if k < 0:
            return jet_inverse(jet_pow(a, -k))
        result = as_jet(1, a.order)
        base = a
        while k:
            if k & 1:
                result = jet_mul(result, base)
            base = jet_mul(base, base)
            k >>= 1
        return result
    if a.coeffs[0] == 0:
        raise ValueError("jet_pow with non-integer exponent needs a nonzero base")
    return jet_exp(jet_log(a) * as_jet(p, a.order))


def extract(k: int, a: Jet) -> complex:
    """Coefficient of e^k; raises beyond the jet's order."""
    if not 0 <= k <= a.order:
        raise IndexError("coefficient %d beyond jet order %d" % (k, a.order))
    return a.coeffs[k]


def _nilpotent_mul(acc: list[complex], u: list[complex]) -> list[complex]:
    # acc * u where u has zero constant part; plain truncated convolution.
    n = len(acc)
    out = [0j] * n
    for m in range(1, n):
        out[m] = sum(acc[i] * u[m - i] for i in range(m))
    return out


def _cexp(z: complex) -> complex:
    r = math.exp(z.real)
    return complex(r * math.cos(z.imag), r * math.sin(z.imag))
