"""Determinantal integrals over the ordered cube 1 >= x_1 >= ... >= x_n >= -1.

For an exponent vector e the central quantity is

    f_n(e) = int det(x_i^(e_j - 1)) dx

with e either all integers or all strict half-integers.  Negative bases with
fractional powers use x^(d/2) = i^d |x|^(d/2), which for integer powers is the
ordinary sign and for half-integers is the branch i (-1)^k |x|^((2k+1)/2).

Three independent routes are provided: a brute-force oracle, the boundary
recursion, and closed forms.  ``selberg_I`` assembles the |x|^s Vandermonde
integrals as exact rational functions of s.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .ratfun import Poly, RatFun


class DimensionTooLarge(ValueError):
    pass


class DegenerateInput(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class ComplexRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def i_power(cls, k: int) -> "ComplexRational":
        return _I_POWERS[k % 4]

    @staticmethod
    def _c(x) -> "ComplexRational":
        return x if isinstance(x, ComplexRational) else ComplexRational(Fraction(x), Fraction(0))

    def __add__(self, other) -> "ComplexRational":
        o = self._c(other)
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other) -> "ComplexRational":
        return self + (-self._c(other))

    def __rsub__(self, other) -> "ComplexRational":
        return self._c(other) - self

    def __mul__(self, other) -> "ComplexRational":
        o = self._c(other)
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ComplexRational":
        o = self._c(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("complex division by zero")
        return ComplexRational((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __eq__(self, other) -> bool:
        try:
            o = self._c(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i"


_I_POWERS = (
    ComplexRational(1, 0),
    ComplexRational(0, 1),
    ComplexRational(-1, 0),
    ComplexRational(0, -1),
)


@dataclass(frozen=True)
class ExponentVector:
    """Exponents e_j stored as the positive integers 2 e_j."""

    doubled: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.doubled)
        if any(x <= 0 for x in d):
            raise ValueError("exponents must be positive")
        if d and len({x % 2 for x in d}) > 1:
            raise ValueError("mixed integer and half-integer exponents")
        object.__setattr__(self, "doubled", d)

    @classmethod
    def from_values(cls, values: Iterable) -> "ExponentVector":
        out = []
        for v in values:
            f = Fraction(v)
            if (2 * f).denominator != 1:
                raise ValueError(f"{v} is not a half-integer")
            out.append(int(2 * f))
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.doubled)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(d, 2) for d in self.doubled)

    @property
    def regime(self) -> str:
        if self.doubled and self.doubled[0] % 2:
            return "half"
        return "integer"

    @property
    def n_odd(self) -> int:
        """Number of odd entries (integer regime)."""
        return sum(1 for d in self.doubled if d % 4 == 2)

    @property
    def n_even(self) -> int:
        return sum(1 for d in self.doubled if d % 4 == 0)

    @property
    def n_one_mod4(self) -> int:
        """Number of entries with 2e = 1 mod 4 (half-integer regime)."""
        return sum(1 for d in self.doubled if d % 4 == 1)

    def without(self, j: int) -> "ExponentVector":
        return ExponentVector(self.doubled[:j] + self.doubled[j + 1 :])


def _as_ev(e) -> ExponentVector:
    return e if isinstance(e, ExponentVector) else ExponentVector.from_values(e)


def perm_sign(p: Sequence[int]) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _sort_with_sign(xs: Sequence[int]) -> tuple[tuple[int, ...], int]:
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    return tuple(xs[i] for i in order), perm_sign(order)


# --- brute-force oracle ----------------------------------------------------


def _chain_pos(powers: Sequence[Fraction]) -> Fraction:
    # int over 1 >= x_1 >= ... >= x_a >= 0 of prod x_i^{k_i}
    out = Fraction(1)
    acc = Fraction(0)
    for k in reversed(powers):
        acc += k + 1
        out /= acc
    return out


def _chain_neg(powers: Sequence[Fraction]) -> Fraction:
    # int over 0 >= x_1 >= ... >= x_b >= -1 of prod |x_i|^{k_i}
    out = Fraction(1)
    acc = Fraction(0)
    for k in powers:
        acc += k + 1
        out /= acc
    return out


def f_oracle_chamber(e, a: int) -> ComplexRational:
    """Brute-force value of the integral over the chamber with ``a`` non-negative
    and ``n - a`` non-positive coordinates, by full permutation expansion."""
    e = _as_ev(e)
    n = e.n
    if n > 6:
        raise DimensionTooLarge("permutation expansion is limited to n <= 6")
    if not 0 <= a <= n:
        raise ValueError("chamber index out of range")
    total = [Fraction(0)] * 4
    for perm in itertools.permutations(range(n)):
        sgn = perm_sign(perm)
        d = [e.doubled[perm[i]] - 2 for i in range(n)]
        val = _chain_pos([Fraction(x, 2) for x in d[:a]]) * _chain_neg([Fraction(x, 2) for x in d[a:]])
        phase = sum(d[a:]) % 4
        total[phase] += sgn * val
    return ComplexRational(total[0] - total[2], total[1] - total[3])


def _pl_integrate(p: list[Fraction], k: int) -> list[Fraction]:
    # t -> int_{-1}^{t} x^k p(x) dx, polynomials as coefficient lists
    out = [Fraction(0)] * (len(p) + k + 1)
    for i, c in enumerate(p):
        if c:
            out[i + k + 1] += c / (i + k + 1)
    lower = sum(c * (-1) ** i for i, c in enumerate(out))
    out[0] -= lower
    return out


def f_oracle_poly(e) -> Fraction:
    """Integer-regime oracle by repeated antiderivatives over the full chain.

    Integrates from the innermost variable outwards; the determinant is
    expanded along the row of the variable being integrated, so the partial
    integrals are indexed by the set of columns already consumed.
    """
    e = _as_ev(e)
    if e.regime != "integer":
        raise ValueError("polynomial oracle needs integer exponents")
    n = e.n
    if n > 6:
        raise DimensionTooLarge("exact oracle is limited to n <= 6")
    ks = [d // 2 - 1 for d in e.doubled]
    partial: dict[frozenset, list[Fraction]] = {frozenset(): [Fraction(1)]}
    for size in range(1, n + 1):
        nxt = {}
        for cols in itertools.combinations(range(n), size):
            acc: list[Fraction] = []
            for pos, j in enumerate(cols):
                rest = frozenset(cols[:pos] + cols[pos + 1 :])
                term = _pl_integrate(partial[rest], ks[j])
                if len(acc) < len(term):
                    acc.extend([Fraction(0)] * (len(term) - len(acc)))
                for t, c in enumerate(term):
                    acc[t] += c if pos % 2 == 0 else -c
            nxt[frozenset(cols)] = acc
        partial = nxt
    return sum(partial[frozenset(range(n))], Fraction(0))


def f_oracle(e, domain=None) -> ComplexRational:
    """Exact f over the full cube (``domain=None``) or the chamber ``(a, b)``."""
    e = _as_ev(e)
    if domain is not None:
        a, b = domain
        if a + b != e.n:
            raise ValueError("chamber sizes must add up to n")
        return f_oracle_chamber(e, a)
    if e.regime == "integer":
        return ComplexRational(f_oracle_poly(e))
    out = ComplexRational()
    for a in range(e.n + 1):
        out = out + f_oracle_chamber(e, a)
    return out


# --- recursion ---------------------------------------------------------------


def _boundary_phase(d: int) -> ComplexRational:
    # value of x^{e-1} at x = -1, with 2e = d
    return ComplexRational.i_power(d - 2)


@lru_cache(maxsize=None)
def _f_rec_sorted(doubled: tuple[int, ...]) -> ComplexRational:
    n = len(doubled)
    if n == 0:
        return ComplexRational(1)
    total = ComplexRational()
    for j, d in enumerate(doubled, start=1):
        rest = doubled[: j - 1] + doubled[j:]
        coeff = ComplexRational((-1) ** (j + 1)) + (-1) ** (n + j) * _boundary_phase(d)
        if coeff.is_zero():
            continue
        total = total + coeff * _f_rec(rest)
    return total / Fraction(sum(doubled), 2)


def _f_rec(doubled: tuple[int, ...]) -> ComplexRational:
    srt, sign = _sort_with_sign(doubled)
    if len(set(srt)) < len(srt):
        return ComplexRational()
    v = _f_rec_sorted(srt)
    return v if sign > 0 else -v


def f_recursive(e) -> ComplexRational:
    """f via the boundary recursion obtained by differentiating the cube size.

    The two faces x_1 = 1 and x_n = -1 give
    f_n(e) = (sum e)^-1 sum_j ((-1)^(j+1) + (-1)^(n+j) (-1)^(e_j-1)) f_{n-1}(e without e_j).
    """
    return _f_rec(_as_ev(e).doubled)


# --- closed forms ------------------------------------------------------------


def epsilon_sign(n: int) -> int:
    """eps_1 = 1, eps_{2m} = eps_{2m+1} = (-1)^m eps_{2m-1}."""
    eps = {1: 1}
    for k in range(2, n + 1):
        m = k // 2
        eps[k] = (-1) ** m * eps[2 * m - 1]
    return eps[n]


def delta_factor(n: int, m: int) -> ComplexRational:
    """delta_n(m) divided by 2^(n/2) times sqrt(2)^(n mod 2), i.e. a Gaussian rational.

    The full constant is ``delta_factor(n, m) * 2^(n // 2)``.
    """
    if n % 2 == 0:
        return ComplexRational(1) if m % 2 == 0 else ComplexRational(0, 1)
    # 2^{1/2} e^{+-i pi/4} = 1 +- i
    return ComplexRational(1, (-1) ** m)


def delta_n(n: int, m: int) -> ComplexRational:
    return delta_factor(n, m) * (2 ** (n // 2))


def _closed_integer(e: ExponentVector) -> Fraction:
    n = e.n
    vals = [d // 2 for d in e.doubled]
    odd = [i for i in range(n) if vals[i] % 2 == 1]
    even = [i for i in range(n) if vals[i] % 2 == 0]
    if len(odd) - len(even) not in (0, 1):
        return Fraction(0)
    order = odd + even
    sign = perm_sign(order)
    x = [vals[i] for i in order]
    m = len(odd)
    num = Fraction(1)
    for i, j in itertools.combinations(range(m), 2):
        num *= x[i] - x[j]
    for k, l in itertools.combinations(range(m, n), 2):
        num *= x[k] - x[l]
    den = Fraction(1)
    for i in range(m):
        den *= x[i]
        for k in range(m, n):
            den *= x[i] + x[k]
    return sign * epsilon_sign(n) * 2**n * num / den


def _closed_half(e: ExponentVector) -> ComplexRational:
    n = e.n
    one = [i for i in range(n) if e.doubled[i] % 4 == 1]
    three = [i for i in range(n) if e.doubled[i] % 4 == 3]
    order = one + three
    sign = perm_sign(order)
    x = [Fraction(e.doubled[i], 2) for i in order]
    m = len(one)
    val = Fraction(1)
    for xi in x:
        val /= xi
    for i, j in itertools.combinations(range(n), 2):
        if (i < m) == (j < m):
            val *= (x[i] - x[j]) / (x[i] + x[j])
    return delta_n(n, m) * (sign * val)


def f_closed(e) -> ComplexRational:
    """Closed form of f: signed product formula, split by parity (integers) or
    by 2e mod 4 (strict half-integers)."""
    e = _as_ev(e)
    if e.n == 0:
        return ComplexRational(1)
    if e.regime == "integer":
        return ComplexRational(_closed_integer(e))
    return _closed_half(e)


# --- |x|^s Vandermonde integrals --------------------------------------------


SHAPES = ("abs", "sgn", "mixed")


def _shape_weight(shape: str, b: int) -> ComplexRational:
    if shape == "abs":
        return ComplexRational(1)
    if shape == "sgn":
        return ComplexRational((-1) ** b)
    if shape == "mixed":
        return ComplexRational.i_power(b)
    raise ValueError(f"unknown shape {shape!r}")


def chamber_ratfun(n: int, weights: Sequence[ComplexRational]) -> tuple[RatFun, RatFun]:
    """Brute-force sum_b w_b int over the (n-b, b) chamber of prod |x|^s V(x).

    V(x) = prod_{i<j} (x_i - x_j) = det(x_i^(n-j)).  Each monomial integrates
    over an ordered chain to the reciprocal of a product of linear forms in s,
    so the result is assembled exactly.  Returns real and imaginary parts.
    """
    if n > 6:
        raise DimensionTooLarge("permutation expansion is limited to n <= 6")
    acc: dict[tuple[tuple[int, int], ...], list[Fraction]] = {}
    for perm in itertools.permutations(range(n)):
        sgn = perm_sign(perm)
        ks = [n - 1 - perm[i] for i in range(n)]
        for b in range(n + 1):
            w = weights[b]
            if w.is_zero():
                continue
            a = n - b
            factors = []
            acc_k = 0
            for t, k in enumerate(reversed(ks[:a]), start=1):
                acc_k += k + 1
                factors.append((t, acc_k))
            acc_k = 0
            for t, k in enumerate(ks[a:], start=1):
                acc_k += k + 1
                factors.append((t, acc_k))
            sign = sgn * (-1) ** sum(ks[a:])
            key = tuple(sorted(factors))
            slot = acc.setdefault(key, [Fraction(0), Fraction(0)])
            slot[0] += sign * w.re
            slot[1] += sign * w.im
    # common denominator: the least common multiple of all linear factors
    need: dict[tuple[int, int], int] = {}
    for key in acc:
        counts: dict[tuple[int, int], int] = {}
        for f in key:
            counts[f] = counts.get(f, 0) + 1
        for f, c in counts.items():
            need[f] = max(need.get(f, 0), c)
    num_re = Poly()
    num_im = Poly()
    for key, (cr, ci) in acc.items():
        if cr == 0 and ci == 0:
            continue
        missing = dict(need)
        for f in key:
            missing[f] -= 1
        cofactor = Poly([1])
        for (t, k), c in missing.items():
            for _ in range(c):
                cofactor = cofactor * Poly.linear(t, k)
        num_re = num_re + cofactor * cr
        num_im = num_im + cofactor * ci
    den = Poly([1])
    for (t, k), c in need.items():
        for _ in range(c):
            den = den * Poly.linear(t, k)
    re = RatFun(num_re, den)
    im = RatFun(num_im, den)
    return re, im


def selberg_oracle(n: int, shape: str = "abs"):
    weights = [_shape_weight(shape, b) for b in range(n + 1)]
    re, im = chamber_ratfun(n, weights)
    return (re, im) if shape == "mixed" else re


def _same_parity_product(n: int) -> int:
    return math.prod(j - i for i, j in itertools.combinations(range(1, n + 1), 2) if (j - i) % 2 == 0)


def selberg_I(n: int, shape: str = "abs"):
    """Closed form of sum_b w(b) int_{(n-b, b) chamber} prod |x|^s V(x) dx.

    ``abs`` uses w = 1, ``sgn`` uses w = (-1)^b and ``mixed`` uses w = i^b; the
    last is returned as a pair (real part, imaginary part) of RatFun.
    """
    if n < 1:
        raise ValueError("n must be positive")
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    cross = [(2, i + j) for i, j in pairs if (i + j) % 2 == 1]
    const = _same_parity_product(n)
    if shape == "abs":
        den = [(1, i) for i in range(1, n + 1, 2)] + cross
        return RatFun.from_factors(2**n * const, (), den)
    if shape == "sgn":
        if n % 2:
            return RatFun(0)
        m = n // 2
        den = [(1, 2 * i) for i in range(1, m + 1)] + cross
        return RatFun.from_factors((-1) ** m * 2**n * const, (), den)
    if shape == "mixed":
        m = n // 2
        sign = (-1) ** math.comb(n - m, 2)
        d = delta_n(n, m)
        den = [(1, j) for j in range(1, n + 1)] + [(2, i + j) for i, j in pairs if (i + j) % 2 == 0]
        base = RatFun.from_factors(sign * const, (), den)
        return base * d.re, base * d.im
    raise ValueError(f"unknown shape {shape!r}")


# --- residue identities -----------------------------------------------------


def residue_identity_check(a: Sequence, which: int) -> tuple[Fraction, Fraction]:
    """Both sides of the three partial-fraction identities, computed exactly."""
    a = [Fraction(x) for x in a]
    n = len(a)
    try:
        if which == 1:
            lhs = Fraction(0)
            for j in range(n):
                term = a[j]
                for i in range(n):
                    if i != j:
                        term *= (a[i] + a[j]) / (a[i] - a[j])
                lhs += term
            return lhs, (-1) ** (n - 1) * sum(a)
        if which == 2:
            if n % 2:
                raise ValueError("identity 2 needs even length")
            m = n // 2
            lhs = Fraction(0)
            for j in range(m, n):
                num = math.prod((a[j] + a[i] for i in range(m)), start=Fraction(1))
                den = math.prod((a[j] - a[k] for k in range(m, n) if k != j), start=Fraction(1))
                lhs += num / den
            return lhs, sum(a)
        if which == 3:
            if n % 2 == 0:
                raise ValueError("identity 3 needs odd length")
            m = (n + 1) // 2
            lhs = Fraction(0)
            for j in range(m):
                num = a[j] * math.prod((a[j] + a[k] for k in range(m, n)), start=Fraction(1))
                den = math.prod((a[j] - a[i] for i in range(m) if i != j), start=Fraction(1))
                lhs += num / den
            return lhs, sum(a)
    except ZeroDivisionError as exc:
        raise DegenerateInput("repeated entries make a denominator vanish") from exc
    raise ValueError("which must be 1, 2 or 3")
