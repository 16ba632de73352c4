"""Generalized hypergeometric series with jet parameters.

A PFQSpec describes the function x -> pFq(a; c; scale * x^power).
Parameters are jets, so a single evaluation carries all requested
parameter derivatives; coefficient extraction afterwards is the
bracket-operator differentiation used by the representation catalog and
the integration drivers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .jets import DEFAULT_ORDER, Jet, as_jet, jet_inverse, jet_mul
from .numkernel import gamma_jet, pochhammer, reciprocal_gamma_jet

__all__ = [
    "SeriesError",
    "DivergentError",
    "ConvergenceError",
    "LimitConditionError",
    "Kind",
    "ConvergenceClass",
    "AsymptoticTerm",
    "PFQSpec",
    "classify",
    "eval_series",
    "value_at_zero",
    "eval_at_one",
    "limit_at_minus_infinity",
    "cancel_parameters",
]

DEFAULT_TOL = 1e-12
TERM_CAP = 1_000_000
AT_ONE_CAP = 100_000
_FIRST_CHECKPOINT = 64


class SeriesError(Exception):
    """Base class for evaluation failures."""


class DivergentError(SeriesError):
    """Argument outside the convergence domain (no transform applies)."""


class ConvergenceError(SeriesError):
    """Term cap or acceleration budget exhausted before reaching tol."""


class LimitConditionError(SeriesError):
    """A precondition of the minus-infinity limit lemma failed."""

    def __init__(self, clause: str, message: str):
        self.clause = clause
        super().__init__("%s: %s" % (clause, message))


class Kind(Enum):
    ENTIRE = "Entire"
    UNIT_DISK = "UnitDisk"
    POLYNOMIAL = "Polynomial"


@dataclass(frozen=True)
class ConvergenceClass:
    kind: Kind
    sigma: complex


@dataclass(frozen=True)
class AsymptoticTerm:
    """Leading behavior at -oo: (-z)^(-exponent) * coefficient... i.e.
    (-z)^exponent * F(z) -> coefficient."""

    exponent: Jet
    coefficient: Jet


def _is_nonpositive_int(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real)


ParamLike = Union[int, float, complex, Jet]


@dataclass(frozen=True)
class PFQSpec:
    upper: tuple
    lower: tuple
    scale: complex = 1.0 + 0j
    power: Fraction = Fraction(1)
    order: Optional[int] = None

    def __post_init__(self):
        ups = tuple(self.upper)
        lows = tuple(self.lower)
        jet_orders = {p.order for p in (*ups, *lows) if isinstance(p, Jet)}
        if len(jet_orders) > 1:
            raise ValueError("parameters mix jet orders %s" % sorted(jet_orders))
        inferred = next(iter(jet_orders)) if jet_orders else None
        order = self.order
        if order is None:
            order = inferred if inferred is not None else DEFAULT_ORDER
        elif inferred is not None and inferred != order:
            raise ValueError("declared order %d but jets have %d" % (order, inferred))
        ups = tuple(as_jet(p, order) for p in ups)
        lows = tuple(as_jet(p, order) for p in lows)
        if len(ups) > len(lows) + 1:
            raise ValueError(
                "series needs p <= q+1, got p=%d q=%d" % (len(ups), len(lows))
            )
        for c in lows:
            if _is_nonpositive_int(c.value):
                raise ValueError(
                    "lower parameter with base %s sits on a pole" % c.value
                )
        power = self.power if isinstance(self.power, Fraction) else Fraction(self.power)
        if power == 0:
            raise ValueError("power must be nonzero")
        object.__setattr__(self, "upper", ups)
        object.__setattr__(self, "lower", lows)
        object.__setattr__(self, "scale", complex(self.scale))
        object.__setattr__(self, "power", power)
        object.__setattr__(self, "order", order)

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def sigma(self) -> Jet:
        """Parameter excess sum(lower) - sum(upper), as a jet."""
        s = as_jet(0, self.order)
        for c in self.lower:
            s = s + c
        for a in self.upper:
            s = s - a
        return s

    @property
    def all_scalar(self) -> bool:
        return all(p.is_scalar for p in (*self.upper, *self.lower))

    def argument(self, x: complex) -> complex:
        """The series argument scale * x^power."""
        x = complex(x)
        if x == 0:
            if self.power > 0:
                return 0j
            raise ZeroDivisionError("x = 0 with negative power")
        b = self.power
        if b.denominator == 1:
            xp = x ** int(b)
        elif x.imag == 0.0 and x.real > 0.0:
            xp = complex(x.real ** float(b))
        else:
            xp = cmath.exp(float(b) * cmath.log(x))
        return self.scale * xp

    def terminating_degree(self) -> Optional[int]:
        degs = [
            -int(a.value.real)
            for a in self.upper
            if _is_nonpositive_int(a.value) and a.is_scalar
        ]
        return min(degs) if degs else None

    def describe(self) -> str:
        def one(j: Jet) -> str:
            if j.is_scalar:
                v = j.value
                return "%g" % v.real if v.imag == 0 else repr(v)
            return repr(j)

        return "%dF%d(%s; %s)" % (
            self.p,
            self.q,
            ", ".join(one(a) for a in self.upper),
            ", ".join(one(c) for c in self.lower),
        )


def classify(spec: PFQSpec) -> ConvergenceClass:
    sigma = spec.sigma.value
    if spec.terminating_degree() is not None:
        return ConvergenceClass(Kind.POLYNOMIAL, sigma)
    if spec.p == spec.q + 1:
        return ConvergenceClass(Kind.UNIT_DISK, sigma)
    return ConvergenceClass(Kind.ENTIRE, sigma)


def value_at_zero(spec: PFQSpec) -> Jet:
    """Every pFq equals 1 at the origin."""
    return as_jet(1, spec.order)


def cancel_parameters(spec: PFQSpec) -> PFQSpec:
    """Remove upper/lower pairs that are exactly equal jets.

    Applied after parameter augmentation so that integrands whose new
    parameter collides with an existing one collapse to the smaller
    series they print as.
    """
    lows = list(spec.lower)
    ups = []
    for a in spec.upper:
        if a in lows:
            lows.remove(a)
        else:
            ups.append(a)
    if len(ups) == len(spec.upper):
        return spec
    return PFQSpec(tuple(ups), tuple(lows), spec.scale, spec.power, spec.order)


# ---------------------------------------------------------------------------
# summation cores


def _neumaier(total: float, comp: float, term: float):
    t = total + term
    if abs(total) >= abs(term):
        comp += (total - t) + term
    else:
        comp += (term - t) + total
    return t, comp


class _ScalarSum:
    __slots__ = ("re", "cre", "im", "cim")

    def __init__(self):
        self.re = self.cre = self.im = self.cim = 0.0

    def add(self, z: complex):
        self.re, self.cre = _neumaier(self.re, self.cre, z.real)
        self.im, self.cim = _neumaier(self.im, self.cim, z.imag)

    def value(self) -> complex:
        return complex(self.re + self.cre, self.im + self.cim)


class _JetSum:
    __slots__ = ("sums",)

    def __init__(self, n: int):
        self.sums = [_ScalarSum() for _ in range(n)]

    def add(self, j: Jet):
        for s, c in zip(self.sums, j.coeffs):
            s.add(c)

    def value(self) -> Jet:
        return Jet(tuple(s.value() for s in self.sums))


def _jet_norm(j: Jet) -> float:
    return max(abs(c) for c in j.coeffs)


def _scalar_params(spec: PFQSpec):
    return [a.value for a in spec.upper], [c.value for c in spec.lower]


def _term_iter_scalar(spec: PFQSpec, z: complex):
    a, c = _scalar_params(spec)
    t = 1.0 + 0j
    k = 0
    while True:
        yield t
        num = z
        for ai in a:
            num *= ai + k
        den = k + 1.0
        for cj in c:
            den *= cj + k
        t = t * num / den
        k += 1


def _term_iter_jet(spec: PFQSpec, z: complex):
    t = as_jet(1, spec.order)
    k = 0
    while True:
        yield t
        for ai in spec.upper:
            t = jet_mul(t, ai + k)
        den = as_jet(k + 1.0, spec.order)
        for cj in spec.lower:
            den = jet_mul(den, cj + k)
        t = jet_mul(t, jet_inverse(den)) * z
        k += 1


def _direct_sum(spec: PFQSpec, z: complex, tol: float, cap: int) -> Jet:
    if spec.all_scalar:
        acc = _ScalarSum()
        small = 0
        for k, t in enumerate(_term_iter_scalar(spec, z)):
            acc.add(t)
            if k > 0:
                if abs(t) <= tol * max(1.0, abs(acc.value())):
                    small += 1
                    if small >= 2:
                        return as_jet(acc.value(), spec.order)
                else:
                    small = 0
            if k >= cap:
                raise ConvergenceError(
                    "no convergence in %d terms for %s at %r"
                    % (cap, spec.describe(), z)
                )
    acc = _JetSum(spec.order + 1)
    small = 0
    for k, t in enumerate(_term_iter_jet(spec, z)):
        acc.add(t)
        if k > 0:
            if _jet_norm(t) <= tol * max(1.0, _jet_norm(acc.value())):
                small += 1
                if small >= 2:
                    return acc.value()
            else:
                small = 0
        if k >= cap:
            raise ConvergenceError(
                "no convergence in %d terms for %s at %r" % (cap, spec.describe(), z)
            )


def _sum_terminating(spec: PFQSpec, z: complex) -> Jet:
    n = spec.terminating_degree()
    acc = _JetSum(spec.order + 1)
    for k, t in enumerate(_term_iter_jet(spec, z)):
        if k > n:
            break
        acc.add(t)
    return acc.value()


def _wynn_epsilon(seq: Sequence[complex]) -> complex:
    """Last entry of the highest even column of the epsilon table."""
    for j in range(len(seq) - 1):
        if seq[j + 1] == seq[j]:
            return seq[j]
    prev = [0j] * (len(seq) + 1)
    cur = list(seq)
    best = cur[-1]
    col = 0
    while len(cur) >= 2:
        nxt = []
        ok = True
        for j in range(len(cur) - 1):
            d = cur[j + 1] - cur[j]
            if d == 0 or not (abs(d) < math.inf):
                ok = False
                break
            nxt.append(prev[j + 1] + 1.0 / d)
        if not ok:
            break
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur:
            b = cur[-1]
            if abs(b) < math.inf:
                best = b
    return best


def _accelerated_sum(spec: PFQSpec, z: complex, tol: float, cap: int) -> Jet:
    """Checkpointed partial sums + Wynn extrapolation, per jet coefficient.

    Checkpoints sit at geometrically spaced term counts: boundary tails
    decay algebraically (k^(-sigma-ish)), and geometric spacing turns
    them into linearly convergent sequences the epsilon algorithm
    handles well.
    """
    width = spec.order + 1
    acc = _JetSum(width)
    snapshots: list[Jet] = []
    checkpoint = _FIRST_CHECKPOINT
    prev_est: Optional[Jet] = None
    scalar = spec.all_scalar
    it = _term_iter_scalar(spec, z) if scalar else _term_iter_jet(spec, z)
    k = 0
    for t in it:
        if scalar:
            acc.sums[0].add(t)
        else:
            acc.add(t)
        k += 1
        if k == checkpoint:
            snapshots.append(acc.value())
            checkpoint *= 2
            if len(snapshots) >= 4:
                cols = [
                    _wynn_epsilon([s.coeffs[m] for s in snapshots])
                    for m in range(width)
                ]
                est = Jet(tuple(cols))
                if prev_est is not None:
                    scale = max(1.0, _jet_norm(est))
                    if _jet_norm(est - prev_est) <= tol * scale:
                        return est
                prev_est = est
        if k > cap:
            break
    raise ConvergenceError(
        "acceleration did not stabilize within %d terms for %s at %r"
        % (cap, spec.describe(), z)
    )


# ---------------------------------------------------------------------------
# public evaluation


def eval_series(spec: PFQSpec, x: complex, tol: float = DEFAULT_TOL) -> Jet:
    """Evaluate pFq(a; c; scale*x^power) as a jet."""
    return _eval_argument(spec, spec.argument(x), tol)


def _eval_argument(spec: PFQSpec, z: complex, tol: float) -> Jet:
    if z == 0:
        return value_at_zero(spec)
    cls = classify(spec)
    if cls.kind is Kind.POLYNOMIAL:
        return _sum_terminating(spec, z)
    if cls.kind is Kind.ENTIRE:
        return _direct_sum(spec, z, tol, TERM_CAP)
    # unit disk
    az = abs(z)
    if spec.p == 2 and z.imag == 0.0 and z.real <= -0.9:
        from .transforms import gauss_near_one, pfaff

        plain = PFQSpec(spec.upper, spec.lower, order=spec.order)
        moved = pfaff(plain, z.real)
        w = moved.argument
        if w.real > 0.95:
            # 1 - w cancels catastrophically once |z| nears 1/eps (w rounds
            # to 1 outright beyond that); 1/(1-z) is the same quantity with
            # no subtraction.
            inner = gauss_near_one(
                moved.spec, w, tol, complement=1.0 / (1.0 - z.real)
            )
        else:
            inner = _eval_argument(moved.spec, w, tol)
        return moved.prefactor * inner
    if az > 1.0 + 1e-14:
        raise DivergentError(
            "%s diverges at %r (|argument| > 1)" % (spec.describe(), z)
        )
    if abs(az - 1.0) <= 1e-14:
        if abs(z - 1.0) <= 1e-14:
            return eval_at_one(spec, tol)
        if cls.sigma.real > 0:
            return _accelerated_sum(spec, z, tol, AT_ONE_CAP)
        raise DivergentError(
            "boundary argument %r needs positive parameter excess, have %r"
            % (z, cls.sigma)
        )
    if spec.p == 2 and z.imag == 0.0 and z.real > 0.95:
        # too close to the branch point for plain acceleration
        from .transforms import gauss_near_one

        plain = PFQSpec(spec.upper, spec.lower, order=spec.order)
        try:
            return gauss_near_one(plain, z.real, tol)
        except SeriesError:
            return _accelerated_sum(spec, z, tol, AT_ONE_CAP)
    if az >= 0.95:
        return _accelerated_sum(spec, z, tol, AT_ONE_CAP)
    return _direct_sum(spec, z, tol, TERM_CAP)


def eval_at_one(spec: PFQSpec, tol: float = DEFAULT_TOL) -> Jet:
    """Value at argument 1 for p = q+1 with positive parameter excess.

    2F1 goes through the Gauss closed form in jets; everything wider is
    summed directly under Wynn extrapolation.
    """
    if spec.p != spec.q + 1:
        raise SeriesError("argument 1 handling is for p = q+1 series")
    sigma = spec.sigma
    if sigma.value.real <= 0:
        raise DivergentError(
            "%s divergent at 1: Re(excess) = %g <= 0"
            % (spec.describe(), sigma.value.real)
        )
    if spec.terminating_degree() is not None:
        return _sum_terminating(spec, 1.0 + 0j)
    if spec.p == 2:
        a, b = spec.upper
        c = spec.lower[0]
        return (
            gamma_jet(c)
            * gamma_jet(c - a - b)
            * reciprocal_gamma_jet(c - a)
            * reciprocal_gamma_jet(c - b)
        )
    return _accelerated_sum(spec, 1.0 + 0j, tol, AT_ONE_CAP)


def limit_at_minus_infinity(spec: PFQSpec) -> AsymptoticTerm:
    """Leading coefficient of F along the negative real axis.

    Returns (alpha, C) with (-z)^alpha * F(z) -> C as z -> -oo.  alpha is
    the minimal upper parameter; C the Gamma product over the others.
    The terminating case returns the leading-coefficient pair instead.
    """
    ups = spec.upper
    poly = [
        i
        for i, a in enumerate(ups)
        if _is_nonpositive_int(a.value) and a.is_scalar
    ]
    if len(poly) > 1:
        raise LimitConditionError(
            "terminating", "more than one non-positive integer upper parameter"
        )
    if len(poly) == 1:
        n = -int(ups[poly[0]].value.real)
        coeff = as_jet(1, spec.order)
        for i, a in enumerate(ups):
            if i != poly[0]:
                coeff = coeff * pochhammer(a, n)
        for c in spec.lower:
            coeff = coeff / pochhammer(c, n)
        return AsymptoticTerm(as_jet(-n, spec.order), coeff)
    if spec.p < spec.q - 1:
        raise LimitConditionError(
            "width", "needs p >= q-1, got p=%d q=%d" % (spec.p, spec.q)
        )
    bases = [a.value for a in ups]
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            d = bases[i] - bases[j]
            if abs(d.imag) < 1e-12 and abs(d.real - round(d.real)) < 1e-12:
                raise LimitConditionError(
                    "congruence",
                    "upper parameters %r and %r differ by an integer"
                    % (bases[i], bases[j]),
                )
    min_re = min(b.real for b in bases)
    candidates = [i for i, b in enumerate(bases) if b.real - min_re <= 1e-12]
    if len(candidates) > 1:
        raise LimitConditionError(
            "tie",
            "minimal real part shared by parameters with different "
            "imaginary parts",
        )
    im = candidates[0]
    if spec.p == spec.q - 1:
        sig = spec.sigma.value
        if not bases[im].real < sig.real - 0.5:
            raise LimitConditionError(
                "excess",
                "p = q-1 needs min(a) < Re(excess) - 1/2, have %g vs %g"
                % (bases[im].real, sig.real - 0.5),
            )
    alpha = ups[im]
    coeff = as_jet(1, spec.order)
    for i, a in enumerate(ups):
        if i != im:
            coeff = coeff * gamma_jet(a - alpha) * reciprocal_gamma_jet(a)
    for c in spec.lower:
        coeff = coeff * gamma_jet(c) * reciprocal_gamma_jet(c - alpha)
    return AsymptoticTerm(alpha, coeff)
