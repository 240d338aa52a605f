"""Exact univariate rational functions over the rationals.

Polynomials are dense tuples of :class:`fractions.Fraction` coefficients,
lowest degree first.  A :class:`RatFun` is always kept reduced with a monic
denominator, so equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

Number = Union[int, Fraction]


class PoleAtPoint(ZeroDivisionError):
    """Raised when a rational function is evaluated at a root of its denominator."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class Poly:
    """Dense polynomial with rational coefficients (index = degree)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def linear(cls, a, b) -> "Poly":
        """The polynomial ``a*s + b``."""
        return cls([b, a])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __add__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly([other])
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly([other]) - self

    def __mul__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly([other])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        lead = other.lead()
        d = other.degree
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] / lead
            if c:
                q[i - d] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - d + j] -= c * b
        return Poly(q), Poly(rem[:d] if d > 0 else [])

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "Poly":
        return Poly(c / self.lead() for c in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def antiderivative(self) -> "Poly":
        return Poly([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def taylor_shift(self, s0) -> "Poly":
        """Coefficients of ``p(s0 + h)`` as a polynomial in ``h``."""
        s0 = _frac(s0)
        out = Poly()
        lin = Poly([s0, 1])
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def root_multiplicity(self, s0) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no finite root multiplicity")
        root = Poly([-_frac(s0), 1])
        k = 0
        p = self
        while True:
            q, r = p.divmod(root)
            if not r.is_zero():
                return k
            k += 1
            p = q

    def to_str(self, var: str = "s") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}{mono}" if a.denominator == 1 else f"({a}){mono}"
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f"{sign}{body}"
        return s


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic() if not a.is_zero() else a


def _power_series_div(num: list[Fraction], den: list[Fraction], k: int) -> list[Fraction]:
    # den[0] != 0
    out = []
    for i in range(k):
        acc = num[i] if i < len(num) else Fraction(0)
        for j in range(1, min(i, len(den) - 1) + 1):
            acc -= den[j] * out[i - j]
        out.append(acc / den[0])
    return out


@dataclass(frozen=True)
class LaurentData:
    center: Fraction
    coefficients: dict[int, Fraction] = field(default_factory=dict)
    pole_order: int = 0

    @property
    def residue(self) -> Fraction:
        return self.coefficients.get(-1, Fraction(0))

    def leading(self) -> Fraction:
        return self.coefficients.get(-self.pole_order, Fraction(0))

    def partial_sum(self, h):
        return sum(c * h**k for k, c in self.coefficients.items())


class RatFun:
    """Reduced ratio of two rational polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", Poly())
            object.__setattr__(self, "den", Poly([1]))
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, _ = num.divmod(g)
            den, _ = den.divmod(g)
        lead = den.lead()
        object.__setattr__(self, "num", Poly(c / lead for c in num.coeffs))
        object.__setattr__(self, "den", Poly(c / lead for c in den.coeffs))

    def __setattr__(self, key, value):
        raise AttributeError("RatFun is immutable")

    @classmethod
    def s(cls) -> "RatFun":
        return cls(Poly([0, 1]))

    @classmethod
    def from_factors(cls, const, num_factors=(), den_factors=()) -> "RatFun":
        """Build ``const * prod(num) / prod(den)`` from ``(a, b)`` pairs meaning ``a*s + b``."""
        n = Poly([const])
        for a, b in num_factors:
            n = n * Poly.linear(a, b)
        d = Poly([1])
        for a, b in den_factors:
            d = d * Poly.linear(a, b)
        return cls(n, d)

    @staticmethod
    def _coerce(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        if isinstance(x, Poly):
            return RatFun(x)
        return RatFun(Poly([_frac(x)]))

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> "RatFun":
        other = self._coerce(other)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other) -> "RatFun":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFun":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatFun":
        other = self._coerce(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFun":
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFun":
        return self._coerce(other) / self

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_inverse_polynomial(self) -> bool:
        """True when the reduced numerator is a nonzero constant."""
        return self.num.degree == 0

    def __call__(self, s0) -> Fraction:
        return ratfun_eval(self, s0)

    def __repr__(self) -> str:
        return f"RatFun({self})"

    def __str__(self) -> str:
        num = self.num.to_str()
        if self.den.degree <= 0:
            return num
        return f"({num})/({self.den.to_str()})"


def ratfun_eval(r: RatFun, s0) -> Fraction:
    s0 = _frac(s0)
    d = r.den(s0)
    if d == 0:
        raise PoleAtPoint(f"denominator vanishes at s = {s0}")
    return r.num(s0) / d


def pole_order_signed(r: RatFun, s0) -> int:
    """Denominator multiplicity minus numerator multiplicity at ``s0``."""
    s0 = _frac(s0)
    if r.is_zero():
        return 0
    return r.den.root_multiplicity(s0) - r.num.root_multiplicity(s0)


def pole_order(r: RatFun, s0) -> int:
    return max(0, pole_order_signed(r, s0))


def laurent(r: RatFun, s0, max_order: int) -> LaurentData:
    s0 = _frac(s0)
    if r.is_zero():
        return LaurentData(s0, {}, 0)
    num = list(r.num.taylor_shift(s0).coeffs)
    den = list(r.den.taylor_shift(s0).coeffs)
    zn = next(i for i, c in enumerate(num) if c != 0)
    zd = next(i for i, c in enumerate(den) if c != 0)
    shift = zn - zd
    if shift < 0 and max_order < shift:
        raise ValueError("max_order must be at least -pole_order")
    count = max_order - shift + 1
    series = _power_series_div(num[zn:], den[zd:], max(count, 0))
    coeffs = {shift + i: c for i, c in enumerate(series) if c != 0}
    return LaurentData(s0, coeffs, max(0, -shift))


def _rational_roots(p: Poly) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicity, located numerically and confirmed exactly."""
    import numpy as np

    out = []
    rest = p
    while rest.degree > 0:
        found = False
        approx = np.roots([float(c) for c in reversed(rest.coeffs)])
        for z in sorted(approx, key=lambda z: (abs(z.imag), z.real)):
            if abs(z.imag) > 1e-6:
                continue
            cand = Fraction(float(z.real)).limit_denominator(1 << 12)
            if rest(cand) == 0:
                k = rest.root_multiplicity(cand)
                rest, _ = rest.divmod(Poly([-cand, 1]) ** k)
                out.append((cand, k))
                found = True
                break
        if not found:
            break
    return out


def _int_linear(root: Fraction, var: str) -> str:
    q, p = root.denominator, -root.numerator
    lead = var if q == 1 else f"{q}{var}"
    if p == 0:
        return lead
    return f"{lead}{'+' if p > 0 else '-'}{abs(p)}"


def _split(poly: Poly, var: str) -> tuple[Fraction, list[str]]:
    rest = poly
    c = Fraction(1)
    factors = []
    for root, k in sorted(_rational_roots(poly), key=lambda t: -t[0]):
        rest, _ = rest.divmod(Poly([-root, 1]) ** k)
        c /= root.denominator**k
        f = f"({_int_linear(root, var)})"
        factors.append(f if k == 1 else f"{f}^{k}")
    if rest.degree > 0:
        c *= rest.lead()
        factors.append(f"({rest.monic().to_str(var)})")
    else:
        c *= rest.lead()
    return c, factors


def factored_str(r: RatFun, var: str = "s") -> str:
    """Render as ``4/((s+1)(2s+3))`` with integer linear factors where possible."""
    if r.is_zero():
        return "0"
    cn, fn = _split(r.num, var)
    cd, fd = _split(r.den, var)
    const = cn / cd
    num = "".join(fn)
    if not num:
        num = str(const)
    elif const == -1:
        num = "-" + num
    elif const != 1:
        num = f"{const}{num}" if const.denominator == 1 else f"({const}){num}"
    if not fd:
        return num
    den = fd[0] if len(fd) == 1 else "(" + "".join(fd) + ")"
    return f"{num}/{den}"
