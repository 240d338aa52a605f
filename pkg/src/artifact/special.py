"""Multivariate Gamma products with exact pole bookkeeping, and the function

    u(s, a, b) = int_0^1 x^s (1+x)^a (1-x)^b dx

together with its residues, recurrences and closed forms.

Gamma values are computed with mpmath; pole orders are decided exactly from
the rational shifts before any number is produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy import integrate

PRECISION_DPS = 30


class NotReducible(ValueError):
    """The requested u(s, a, b) has no convergent or closed-form route."""


class BetaPole(ZeroDivisionError):
    """A Beta value sits on a genuine pole of its Gamma continuation."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"rational expected, got {type(x).__name__}")


def _mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def _is_nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int] = ()):
        ps = tuple(int(p) for p in parts)
        if any(p < 0 for p in ps) or any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError(f"not a partition: {ps}")
        object.__setattr__(self, "parts", ps)

    def padded(self, n: int) -> tuple[int, ...]:
        if len([p for p in self.parts if p]) > n:
            raise ValueError(f"partition {self.parts} has more than {n} nonzero parts")
        ps = tuple(p for p in self.parts if p)
        return ps + (0,) * (n - len(ps))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len([p for p in self.parts if p])


def partitions_second_part_le1(n_parts: int, max_first: int) -> list[Partition]:
    """Partitions with at most ``n_parts`` parts, ``k_2 <= 1`` and ``k_1 <= max_first``."""
    out = []
    for k1 in range(max_first + 1):
        if k1 == 0:
            out.append(Partition((0,) * n_parts))
            continue
        for ones in range(0, n_parts):
            parts = (k1,) + (1,) * ones + (0,) * (n_parts - 1 - ones)
            out.append(Partition(parts))
    return out


@dataclass(frozen=True)
class GammaProduct:
    """``prefactor * pi**pi_power * prod Gamma(x + shift)**exponent``.

    ``constants`` holds Gamma factors at fixed arguments that do not move with x.
    """

    prefactor: Fraction = Fraction(1)
    pi_power: Fraction = Fraction(0)
    factors: tuple[tuple[Fraction, int], ...] = field(default_factory=tuple)
    constants: tuple[tuple[Fraction, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "prefactor", _frac(self.prefactor))
        object.__setattr__(self, "pi_power", _frac(self.pi_power))
        fs = []
        for shift, e in self.factors:
            if e not in (1, -1):
                raise ValueError("factor exponents must be +1 or -1")
            fs.append((_frac(shift), int(e)))
        object.__setattr__(self, "factors", tuple(fs))
        cs = []
        for arg, e in self.constants:
            arg = _frac(arg)
            if e not in (1, -1):
                raise ValueError("factor exponents must be +1 or -1")
            if _is_nonpos_int(arg):
                raise BetaPole(f"constant factor Gamma({arg}) is singular")
            cs.append((arg, int(e)))
        object.__setattr__(self, "constants", tuple(cs))

    def __mul__(self, other: "GammaProduct") -> "GammaProduct":
        if not isinstance(other, GammaProduct):
            return GammaProduct(self.prefactor * _frac(other), self.pi_power, self.factors, self.constants)
        return GammaProduct(
            self.prefactor * other.prefactor,
            self.pi_power + other.pi_power,
            self.factors + other.factors,
            self.constants + other.constants,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GammaProduct":
        return GammaProduct(
            1 / self.prefactor,
            -self.pi_power,
            tuple((c, -e) for c, e in self.factors),
            tuple((c, -e) for c, e in self.constants),
        )

    def __truediv__(self, other: "GammaProduct") -> "GammaProduct":
        return self * other.inverse()

    def shifted(self, dx) -> "GammaProduct":
        """Substitute ``x -> x + dx``."""
        dx = _frac(dx)
        return GammaProduct(self.prefactor, self.pi_power, tuple((c + dx, e) for c, e in self.factors), self.constants)

    def frozen(self, x0=0) -> "GammaProduct":
        """The same value at ``x = x0``, held as constant factors."""
        x0 = _frac(x0)
        return GammaProduct(
            self.prefactor,
            self.pi_power,
            (),
            self.constants + tuple((x0 + c, e) for c, e in self.factors),
        )

    def simplified(self) -> "GammaProduct":
        """Cancel identical numerator/denominator factors."""
        count: dict[Fraction, int] = {}
        for c, e in self.factors:
            count[c] = count.get(c, 0) + e
        fs = []
        for c in sorted(count):
            k = count[c]
            fs.extend([(c, 1 if k > 0 else -1)] * abs(k))
        return GammaProduct(self.prefactor, self.pi_power, tuple(fs), self.constants)

    def pole_order(self, x0) -> int:
        x0 = _frac(x0)
        return sum(e for c, e in self.factors if _is_nonpos_int(x0 + c))

    def numerator_pole_order(self, x0) -> int:
        x0 = _frac(x0)
        return sum(e for c, e in self.factors if e > 0 and _is_nonpos_int(x0 + c))

    def denominator_pole_order(self, x0) -> int:
        x0 = _frac(x0)
        return sum(-e for c, e in self.factors if e < 0 and _is_nonpos_int(x0 + c))

    def leading(self, x0, dps: int = PRECISION_DPS) -> tuple[int, mpmath.mpf]:
        """Signed pole order and leading Laurent coefficient at ``x0``.

        Near a pole, Gamma(-k + h) = (-1)^k / (k! h) + O(1), so every singular
        factor contributes its exact residue to the leading coefficient.
        """
        x0 = _frac(x0)
        with mpmath.workdps(dps):
            val = mpmath.mpf(self.prefactor.numerator) / self.prefactor.denominator
            val *= mpmath.pi ** _mp(self.pi_power)
            for c, e in self.factors:
                arg = x0 + c
                if _is_nonpos_int(arg):
                    k = -int(arg)
                    g = mpmath.mpf((-1) ** k) / mpmath.factorial(k)
                else:
                    g = mpmath.gamma(_mp(arg))
                val *= g if e > 0 else 1 / g
            val *= self._constants_value()
            return self.pole_order(x0), +val

    def value(self, x0=0, dps: int = PRECISION_DPS) -> float:
        order, lead = self.leading(x0, dps)
        if order > 0:
            raise BetaPole(f"pole of order {order} at x = {x0}")
        if order < 0:
            return 0.0
        return float(lead)

    def evaluate_float(self, x: float) -> float:
        """Value at a real (possibly irrational) point away from poles."""
        with mpmath.workdps(PRECISION_DPS):
            val = mpmath.mpf(self.prefactor.numerator) / self.prefactor.denominator
            val *= mpmath.pi ** _mp(self.pi_power)
            for c, e in self.factors:
                g = mpmath.gamma(mpmath.mpf(x) + _mp(c))
                val *= g if e > 0 else 1 / g
            val *= self._constants_value()
            return float(val)

    def _constants_value(self) -> mpmath.mpf:
        out = mpmath.mpf(1)
        for arg, e in self.constants:
            g = mpmath.gamma(_mp(arg))
            out *= g if e > 0 else 1 / g
        return out

    def describe(self) -> str:
        parts = [str(self.prefactor)]
        if self.pi_power:
            parts.append(f"pi^({self.pi_power})")
        num = [f"G(x{'+' if c >= 0 else '-'}{abs(c)})" for c, e in self.factors if e > 0]
        den = [f"G(x{'+' if c >= 0 else '-'}{abs(c)})" for c, e in self.factors if e < 0]
        num += [f"G({c})" for c, e in self.constants if e > 0]
        den += [f"G({c})" for c, e in self.constants if e < 0]
        s = "*".join(parts + num)
        return s + ("/(" + "*".join(den) + ")" if den else "")


def gamma_n_kappa(N: int, kappa: Partition | Sequence[int] | None = None, shift=0) -> GammaProduct:
    """Multivariate Gamma ``Gamma_N(x + shift, kappa)`` as a product in ``x``."""
    if N < 1:
        raise ValueError("N must be positive")
    if kappa is None:
        kappa = Partition(())
    elif not isinstance(kappa, Partition):
        kappa = Partition(kappa)
    ks = kappa.padded(N)
    shift = _frac(shift)
    factors = tuple((shift + ks[i] - Fraction(i, 2), 1) for i in range(N))
    return GammaProduct(Fraction(1), Fraction(N * (N - 1), 4), factors)


def gamma_n(N: int, shift=0) -> GammaProduct:
    return gamma_n_kappa(N, None, shift)


def gamma_pole_order(g: GammaProduct, x0) -> int:
    return g.pole_order(x0)


def gamma_n_value(N: int, x) -> float:
    """Numeric multivariate Gamma at a rational point."""
    return gamma_n(N).value(x)


def beta_value(x, y) -> float:
    """B(x, y) through the Gamma continuation, with exact pole gating."""
    g = GammaProduct(1, 0, ((_frac(x), 1), (_frac(y), 1), (_frac(x) + _frac(y), -1)))
    return g.value(0)


# --- u(s, a, b) ----------------------------------------------------------


def _binom_frac(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (a - i) / (i + 1)
    return out


def taylor_coefficients(a, b, count: int) -> list[Fraction]:
    """Exact Taylor coefficients at 0 of ``(1+x)^a (1-x)^b``."""
    a, b = _frac(a), _frac(b)
    ca = [_binom_frac(a, i) for i in range(count)]
    cb = [_binom_frac(b, j) * (-1) ** j for j in range(count)]
    return [sum(ca[i] * cb[n - i] for i in range(n + 1)) for n in range(count)]


def _taylor_float(a: float, b: float, count: int) -> np.ndarray:
    ca = np.empty(count)
    cb = np.empty(count)
    ca[0] = cb[0] = 1.0
    for i in range(1, count):
        ca[i] = ca[i - 1] * (a - i + 1) / i
        cb[i] = -cb[i - 1] * (b - i + 1) / i
    return np.convolve(ca, cb)[:count]


_SPLIT = 0.5


def _u_series_part(s: float, a: float, b: float) -> float:
    # int_0^{1/2} x^s g(x) dx term by term; g's series converges on |x| < 1.
    count = 200
    c = _taylor_float(a, b, count)
    j = np.arange(count)
    denom = s + j + 1.0
    if np.any(denom == 0):
        raise NotReducible(f"u has a pole at s = {s}")
    terms = c * _SPLIT ** (s + j + 1.0) / denom
    return float(np.sum(terms[::-1]))


def _u_tail_part(s: float, a: float, b: float) -> float:
    # int_{1/2}^1 x^s (1+x)^a (1-x)^b dx with the algebraic weight at x = 1
    val, _ = integrate.quad(
        lambda x: x**s * (1.0 + x) ** a,
        _SPLIT,
        1.0,
        weight="alg",
        wvar=(0.0, b),
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    return val


def u_quad(s: float, a: float, b: float) -> float:
    """Direct quadrature on [0, 1]; requires s > -1 and b > -1."""
    if s <= -1 or b <= -1:
        raise NotReducible("direct quadrature needs s > -1 and b > -1")
    val, _ = integrate.quad(
        lambda x: (1.0 + x) ** a,
        0.0,
        1.0,
        weight="alg",
        wvar=(float(s), float(b)),
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    return val


def u_eval(s, a, b) -> float:
    """Meromorphic continuation of u(s, a, b) in s, for real a and b > -1.

    The interval is split at 1/2.  On [0, 1/2] the integrand is expanded in
    its Taylor series at 0 and integrated term by term, which continues the
    result to every s except s = -1, -2, ...; on [1/2, 1] the integral is
    regular in s and done by weighted quadrature.
    """
    s_f, a_f, b_f = float(s), float(a), float(b)
    if b_f <= -1:
        raise NotReducible("u(s, a, b) diverges at x = 1 for b <= -1")
    if not isinstance(s, float) and _is_nonpos_int(_frac(s) + 1):
        m = int(-_frac(s))
        if u_residue(m, a, b) != 0:
            raise NotReducible(f"u has a pole at s = {s}")
        return _u_regular_value(m, _frac(a), _frac(b))
    if s_f > -1:
        return u_quad(s_f, a_f, b_f)
    return _u_series_part(s_f, a_f, b_f) + _u_tail_part(s_f, a_f, b_f)


def _u_regular_value(m: int, a: Fraction, b: Fraction) -> float:
    # removable singularity at s = -m: drop the vanishing j = m-1 term
    count = 200
    c = _taylor_float(float(a), float(b), count)
    s = -float(m)
    total = 0.0
    for j in range(count - 1, -1, -1):
        if j == m - 1:
            continue
        total += c[j] * _SPLIT ** (s + j + 1.0) / (s + j + 1.0)
    return total + _u_tail_part(s, float(a), float(b))


def u_residue(m: int, a, b) -> Fraction:
    """Residue of u(s, a, b) at s = -m: the (m-1)-th Taylor coefficient of
    (1+x)^a (1-x)^b at 0."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    return taylor_coefficients(a, b, m)[m - 1]


def u_shift_continue(s, a) -> float:
    """Continue u(s, a, 0) leftwards with the integration-by-parts rule

        u(s, a, 0) = 2^(a+1)/(s+1) - (1 + (a+1)/(s+1)) u(s+1, a, 0),

    bottoming out in direct quadrature.  Independent of :func:`u_eval`.
    """
    s = float(s)
    a = float(a)
    if s > -1:
        return u_quad(s, a, 0.0)
    if s == -1:
        raise NotReducible("pole at s = -1")
    return 2.0 ** (a + 1) / (s + 1) - (1 + (a + 1) / (s + 1)) * u_shift_continue(s + 1, a)


def u_lower_a(s, a, b, m: int) -> float:
    """sum_j C(m, j) u(s + j, a - m, b), the a-lowering expansion."""
    return sum(math.comb(m, j) * u_eval(_add(s, j), _add(a, -m), b) for j in range(m + 1))


def u_lower_b(s, a, b, m: int) -> float:
    """sum_j (-1)^j C(m, j) u(s + j, a, b - m), the b-lowering expansion."""
    return sum((-1) ** j * math.comb(m, j) * u_eval(_add(s, j), a, _add(b, -m)) for j in range(m + 1))


def _add(x, k):
    return x + k if isinstance(x, float) else _frac(x) + k


def u_diag3(a, b) -> float:
    """Closed form of u(-a-b-3, a, b) = 2^(a+b+1) (a-b)/(a+1) B(-a-b-2, b+1)."""
    a, b = _frac(a), _frac(b)
    if a < Fraction(-1, 2) or b < Fraction(-1, 2):
        raise ValueError("requires a, b >= -1/2")
    if a == b:
        return 0.0
    g = GammaProduct(
        (a - b) / (a + 1),
        0,
        ((-a - b - 2, 1), (b + 1, 1), (-a - 1, -1)),
    )
    order, lead = g.leading(0)
    if order > 0:
        raise BetaPole(f"B({-a - b - 2}, {b + 1}) is singular")
    if order < 0:
        return 0.0
    return float(lead * mpmath.mpf(2) ** _mp(a + b + 1))


def odd_p_total_laurent(a, m: int) -> tuple[int, float]:
    """Leading behaviour at s0 = -2a-m-3 of u(s, a+m, a) + (-1)^(m+1) u(s, a, a+m).

    Returns ``(pole_order, leading_coefficient)`` of the expansion in ``s - s0``.
    The combination equals (1/2) sum_j C(m, j) (1 + (-1)^(j+m+1)) B((s+j+1)/2, a+1),
    so only j of parity opposite to m survive.
    """
    a = _frac(a)
    if a < 0 or m < 0:
        raise ValueError("requires a >= 0 and m >= 0")
    s0 = -2 * a - m - 3
    best_order = None
    total = mpmath.mpf(0)
    with mpmath.workdps(PRECISION_DPS):
        pieces = []
        for j in range(m + 1):
            if (j + m) % 2 == 0:
                continue
            x = (s0 + j + 1) / 2
            g = GammaProduct(Fraction(math.comb(m, j)), 0, ((x, 1), (a + 1, 1), (x + a + 1, -1)))
            order, lead = g.leading(0)
            # Gamma((s + j + 1)/2) near its pole: h/2 in place of h
            lead = lead * mpmath.mpf(2) ** order
            pieces.append((order, lead))
        if not pieces:
            return 0, 0.0
        best_order = max(o for o, _ in pieces)
        total = sum(l for o, l in pieces if o == best_order)
    return best_order, float(total)


def odd_p_total(a, m: int) -> float:
    """lim_{s -> -2a-m-3} u(s, a+m, a) + (-1)^(m+1) u(s, a, a+m).

    Finite when a is an integer; for a strict half-integer the surviving Beta
    terms have a simple pole and the limit is a signed infinity.
    """
    order, lead = odd_p_total_laurent(a, m)
    if order > 0:
        return math.copysign(math.inf, lead)
    if order < 0:
        return 0.0
    return lead
