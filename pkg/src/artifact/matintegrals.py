"""Signed integrals of |det X|^s over the symmetric matrices -I <= X <= I.

A weight eps(b) is attached to each signature (a, b).  Pushing Lebesgue
measure on the independent entries X_ij (i <= j) forward to the ordered
spectrum gives c(n) times the Vandermonde, so every such integral is
c(n) times a Vandermonde integral from :mod:`artifact.selberg`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .ratfun import RatFun
from .selberg import selberg_I
from .special import GammaProduct, Partition, gamma_n, gamma_n_kappa

KINDS = ("abs", "sgn", "cos", "sin", "plus")


class ConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class EpsilonKind:
    tag: str

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ValueError(f"unknown kind {self.tag!r}; expected one of {KINDS}")

    def weight(self, b: int) -> int:
        if self.tag == "abs":
            return 1
        if self.tag == "sgn":
            return (-1) ** b
        if self.tag == "cos":
            return (1, 0, -1, 0)[b % 4]
        if self.tag == "sin":
            return (0, 1, 0, -1)[b % 4]
        # positive-definite part only
        return 1 if b == 0 else 0


def _kind(kind) -> EpsilonKind:
    return kind if isinstance(kind, EpsilonKind) else EpsilonKind(kind)


def spectral_constant(n: int) -> GammaProduct:
    """c(n) = n! pi^(n^2/2) / (2^n Gamma_n((n+2)/2)) as a constant GammaProduct."""
    if n < 1:
        raise ValueError("n must be positive")
    g = gamma_n(n, Fraction(n + 2, 2)).frozen().inverse()
    return GammaProduct(Fraction(math.factorial(n), 2**n), Fraction(n * n, 2), ()) * g


@dataclass(frozen=True)
class MatIntegralResult:
    """``constant * exact`` where ``exact`` is an exact rational function of s.

    For ``plus`` the value is a pure Gamma ratio and ``exact`` is None.
    """

    n: int
    kind: str
    exact: Optional[RatFun]
    constant: GammaProduct
    gamma_ratio: Optional[GammaProduct] = None

    @property
    def identically_zero(self) -> bool:
        return self.exact is not None and self.exact.is_zero()

    def value(self, s) -> float:
        if self.gamma_ratio is not None:
            if isinstance(s, float):
                return self.gamma_ratio.evaluate_float(s)
            return self.gamma_ratio.value(s)
        c = self.constant.value(0)
        if isinstance(s, float):
            num = sum(float(co) * s**i for i, co in enumerate(self.exact.num.coeffs))
            den = sum(float(co) * s**i for i, co in enumerate(self.exact.den.coeffs))
            return c * num / den
        return c * float(self.exact(Fraction(s)))


def D_plus(n: int) -> GammaProduct:
    """Gamma_n(s + (n+1)/2) Gamma_n((n+1)/2) / Gamma_n(s + n + 1) as a product in s."""
    h = Fraction(n + 1, 2)
    return gamma_n(n, h) * gamma_n(n, h).frozen() / gamma_n(n, n + 1)


def _gamma_rational(x: Fraction) -> tuple[Fraction, Fraction]:
    """Gamma(x) = r * pi^p for positive integer or half-integer x."""
    if x <= 0 or (2 * x).denominator != 1:
        raise ValueError("only positive half-integers are supported")
    if x.denominator == 1:
        return Fraction(math.factorial(int(x) - 1)), Fraction(0)
    # Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
    k = int(x - Fraction(1, 2))
    return Fraction(math.factorial(2 * k), 4**k * math.factorial(k)), Fraction(1, 2)


def reduce_constant(g: GammaProduct) -> GammaProduct:
    """Rewrite a variable-free product at half-integer arguments as rational * pi^p."""
    val = g.prefactor
    pi_power = g.pi_power
    for c, e in g.frozen().constants:
        r, p = _gamma_rational(c)
        val *= r if e > 0 else 1 / r
        pi_power += p if e > 0 else -p
    return GammaProduct(val, pi_power, ())


def constant_exact(n: int) -> GammaProduct:
    """c(n) reduced to rational * pi^p (no Gamma factors)."""
    return reduce_constant(spectral_constant(n))


def D_closed(n: int, kind) -> MatIntegralResult:
    kind = _kind(kind)
    const = constant_exact(n)
    if kind.tag == "plus":
        return MatIntegralResult(n, "plus", None, GammaProduct(), D_plus(n))
    if kind.tag == "abs":
        return MatIntegralResult(n, "abs", selberg_I(n, "abs"), const)
    if kind.tag == "sgn":
        return MatIntegralResult(n, "sgn", selberg_I(n, "sgn"), const)
    re, im = selberg_I(n, "mixed")
    return MatIntegralResult(n, kind.tag, re if kind.tag == "cos" else im, const)


# --- Monte Carlo oracle --------------------------------------------------------


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, shard]))


MC_MAX_N = 4
ZERO_TOL = 1e-12


def _mc_shard(n: int, s_values: np.ndarray, samples: int, seed: int, shard: int, kinds):
    rng = _shard_rng(seed, shard)
    iu = np.triu_indices(n)
    dim = len(iu[0])
    entries = rng.uniform(-1.0, 1.0, size=(samples, dim))
    X = np.zeros((samples, n, n))
    X[:, iu[0], iu[1]] = entries
    X[:, iu[1], iu[0]] = entries
    lam = np.linalg.eigvalsh(X)
    inside = np.all(np.abs(lam) <= 1.0, axis=1)
    clean = np.all(np.abs(lam) > ZERO_TOL, axis=1)
    keep = inside & clean
    b = np.sum(lam < 0, axis=1)
    absdet = np.prod(np.abs(lam), axis=1)
    out = {}
    for kind in kinds:
        w = np.array([kind.weight(int(bb)) for bb in range(n + 1)], dtype=float)[b]
        for s in s_values:
            vals = np.where(keep, w * absdet**s, 0.0)
            out[(kind.tag, float(s))] = (vals.sum(), (vals**2).sum())
    return out, int(inside.sum())


def D_mc_oracle_many(n: int, kinds, s_values, samples: int, seed: int, shards: int = 8, workers: int = 1):
    """Monte Carlo estimates of several D integrals from one sample stream.

    The sample is split into ``shards`` fixed pieces with independent
    counter-based streams keyed on (seed, shard); ``workers`` only changes how
    the shards are executed, never the numbers.
    """
    if n > MC_MAX_N:
        raise ValueError(f"rejection sampling is only supported for n <= {MC_MAX_N}")
    kinds = [_kind(k) for k in kinds]
    s_values = [float(s) for s in s_values]
    if any(s < 0 for s in s_values):
        raise ValueError("Monte Carlo oracle needs s >= 0")
    sizes = [samples // shards + (1 if i < samples % shards else 0) for i in range(shards)]
    jobs = [(n, np.array(s_values), sizes[i], seed, i, kinds) for i in range(shards)]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda a: _mc_shard(*a), jobs))
    else:
        results = [_mc_shard(*a) for a in jobs]
    box = 2.0 ** (n * (n + 1) // 2)
    accepted = sum(r[1] for r in results)
    if accepted < 1e-4 * samples:
        warnings.warn(f"acceptance rate {accepted / samples:.2e} is below 1e-4", ConvergenceWarning)
    out = {}
    for key in results[0][0]:
        s1 = sum(r[0][key][0] for r in results)
        s2 = sum(r[0][key][1] for r in results)
        mean = s1 / samples
        var = max(s2 / samples - mean**2, 0.0)
        out[key] = (box * mean, box * math.sqrt(var / samples))
    return out


def D_mc_oracle(n: int, kind, s: float, samples: int, seed: int, shards: int = 8, workers: int = 1):
    """(mean, stderr) of the Monte Carlo estimate of one D integral."""
    k = _kind(kind)
    res = D_mc_oracle_many(n, [k], [s], samples, seed, shards, workers)
    return res[(k.tag, float(s))]


# --- Selberg normalization and Constantine ratio --------------------------------


def selberg_normalization(m: int, a, b) -> GammaProduct:
    """int_[0,1]^m prod|mu_i - mu_j| prod mu^a (1-mu)^b dmu as a constant GammaProduct."""
    a, b = Fraction(a), Fraction(b)
    if a <= -1 or b <= -1:
        raise ValueError("requires a, b > -1")
    h = Fraction(m + 1, 2)
    num = gamma_n(m, a + h) * gamma_n(m, b + h) * gamma_n(m, 1 + Fraction(m, 2))
    # Gamma(3/2)^m = pi^(m/2) / 2^m
    den = gamma_n(m, a + b + m + 1) * GammaProduct(Fraction(1, 2**m), Fraction(m * m, 2), ())
    return num / den


def constantine_ratio(N: int, alpha, kappa) -> GammaProduct:
    """Gamma_N(s+(N+1)/2, kappa) Gamma_N(alpha+(N+1)/2) / Gamma_N(s+alpha+N+1, kappa) in s."""
    alpha = Fraction(alpha)
    kappa = kappa if isinstance(kappa, Partition) else Partition(kappa)
    h = Fraction(N + 1, 2)
    num = gamma_n_kappa(N, kappa, h)
    const = gamma_n_kappa(N, None, alpha + h).frozen()
    den = gamma_n_kappa(N, kappa, alpha + N + 1)
    return num * const / den
