"""Random subspaces of R^{p,q} and the spectra of the indefinite form on them.

R^n = R^p + R^q carries Q = x_P^2 - x_Q^2 and the Euclidean form P.  For a
k-plane E with P-orthonormal basis rows B, the Gram matrix of Q on E is
2 B_P B_P^T - I, where B_P holds the first p columns.  Its eigenvalues are
cos(2 theta) for the principal angles theta between E and R^p; after removing
the forced +1's (E meets R^p) and -1's (E meets R^q) the remaining N values
are the spectrum lambda_1 >= ... >= lambda_N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import special

from .matintegrals import selberg_normalization


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class SignatureTriple:
    p: int
    q: int
    k: int

    def __post_init__(self):
        if min(self.p, self.q, self.k) < 0 or self.q > self.p or self.k > self.p + self.q:
            raise ValueError(f"invalid signature triple {(self.p, self.q, self.k)}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def N(self) -> int:
        return min(self.q, self.k, self.n - self.k)

    @property
    def N_q(self) -> int:
        return max(0, self.k - self.q)

    @property
    def N_p(self) -> int:
        return max(0, self.k - self.p)

    def complement(self) -> "SignatureTriple":
        return SignatureTriple(self.p, self.q, self.n - self.k)


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    # leading nonzero entry of every row made positive
    out = basis.copy()
    for r in range(out.shape[0]):
        nz = np.flatnonzero(np.abs(out[r]) > 1e-14)
        if nz.size and out[r, nz[0]] < 0:
            out[r] = -out[r]
    return out


def orthonormal_rows(A: np.ndarray) -> np.ndarray:
    """Row-orthonormal basis of the row space of a full-rank k x n matrix."""
    k = A.shape[0]
    if k == 0:
        return np.zeros((0, A.shape[1]))
    Q, R = np.linalg.qr(A.T)
    if np.min(np.abs(np.diag(R))) < 1e-12 * max(1.0, np.max(np.abs(R))):
        raise np.linalg.LinAlgError("rank deficient")
    return _fix_signs(Q.T)


def gram_Q(basis: np.ndarray, p: int) -> np.ndarray:
    BP = basis[:, :p]
    return 2.0 * BP @ BP.T - np.eye(basis.shape[0])


def spectrum_from_basis(basis: np.ndarray, sig: SignatureTriple) -> np.ndarray:
    """The N nontrivial eigenvalues of 2 L^T L - I, sorted decreasingly."""
    k = basis.shape[0]
    if k == 0:
        return np.zeros(0)
    ev = np.linalg.eigvalsh(gram_Q(basis, sig.p))[::-1]
    return np.clip(ev[sig.N_q : k - sig.N_p], -1.0, 1.0)


@dataclass(frozen=True)
class SubspaceSample:
    basis: np.ndarray
    ambient: SignatureTriple
    spectrum: np.ndarray = field(default=None)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.shape != (self.ambient.k, self.ambient.n):
            raise ValueError("basis shape does not match the signature triple")
        if b.shape[0] and np.max(np.abs(b @ b.T - np.eye(b.shape[0]))) > 1e-10:
            raise ValueError("basis rows are not orthonormal")
        object.__setattr__(self, "basis", b)
        if self.spectrum is None:
            object.__setattr__(self, "spectrum", spectrum_from_basis(b, self.ambient))

    @classmethod
    def from_rows(cls, rows, sig: SignatureTriple) -> "SubspaceSample":
        return cls(orthonormal_rows(np.asarray(rows, dtype=float)), sig)

    @property
    def angles(self) -> np.ndarray:
        return 0.5 * np.arccos(self.spectrum)


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, stream]))


def haar_sample(sig: SignatureTriple, seed: int, stream: int = 0) -> SubspaceSample:
    """Rotation-invariant random k-plane from orthonormalized Gaussian rows."""
    rng = _rng(seed, stream)
    while True:
        A = rng.standard_normal((sig.k, sig.n))
        try:
            return SubspaceSample(orthonormal_rows(A), sig)
        except np.linalg.LinAlgError:
            continue


def haar_spectra(sig: SignatureTriple, count: int, seed: int) -> np.ndarray:
    """Spectra of ``count`` independent samples, shape (count, N)."""
    rng = _rng(seed, 0)
    A = rng.standard_normal((count, sig.n, sig.k))
    Q, _ = np.linalg.qr(A)
    BP = Q[:, : sig.p, :]
    G = 2.0 * np.einsum("mpi,mpj->mij", BP, BP) - np.eye(sig.k)
    ev = np.linalg.eigvalsh(G)[:, ::-1]
    return np.clip(ev[:, sig.N_q : sig.k - sig.N_p], -1.0, 1.0)


def complement(E: SubspaceSample) -> SubspaceSample:
    """The Euclidean orthogonal complement as a sample of its own."""
    sig = E.ambient
    if sig.k == 0:
        return SubspaceSample(np.eye(sig.n), sig.complement())
    _, _, vt = np.linalg.svd(E.basis)
    comp = vt[sig.k :]
    return SubspaceSample(orthonormal_rows(comp), sig.complement())


def complement_spectrum(E: SubspaceSample) -> np.ndarray:
    return complement(E).spectrum


@dataclass(frozen=True)
class OrbitSignature:
    a: int
    b: int
    near_degenerate: bool


def orbit_signature(E: SubspaceSample, tol: float = 1e-10) -> OrbitSignature:
    ev = np.linalg.eigvalsh(gram_Q(E.basis, E.ambient.p))
    return OrbitSignature(int(np.sum(ev > tol)), int(np.sum(ev < -tol)), bool(np.any(np.abs(ev) <= tol)))


# --- eigenvalue density -------------------------------------------------------


def density_exponents(sig: SignatureTriple) -> tuple[float, float]:
    """Exponents (alpha, beta) of (1 - lambda) and (1 + lambda)."""
    return (abs(sig.q - sig.k) - 1) / 2, (abs(sig.p - sig.k) - 1) / 2


def density_normalization(sig: SignatureTriple) -> float:
    """Integral of the unnormalized density over the ordered region.

    With mu = (1 + lambda)/2 this is a Selberg integral over the cube divided
    by N!, times the Jacobian power of 2.
    """
    N = sig.N
    alpha, beta = density_exponents(sig)
    S = selberg_normalization(N, Fraction(beta).limit_denominator(4), Fraction(alpha).limit_denominator(4)).value()
    return S * 2.0 ** (N * (N - 1) / 2 + N * (alpha + beta + 1)) / math.factorial(N)


def angle_density(sig: SignatureTriple, lam) -> float:
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (sig.N,):
        raise DomainError(f"expected {sig.N} eigenvalues")
    if np.any(lam > 1) or np.any(lam < -1) or np.any(np.diff(lam) > 0):
        raise DomainError("eigenvalues must be ordered decreasingly inside [-1, 1]")
    alpha, beta = density_exponents(sig)
    v = 1.0
    for i in range(sig.N):
        for j in range(i + 1, sig.N):
            v *= lam[i] - lam[j]
    with np.errstate(divide="ignore"):
        v *= np.prod((1 - lam) ** alpha) * np.prod((1 + lam) ** beta)
    return float(v / density_normalization(sig))


def _inc_beta(x, a, b):
    return special.betainc(a, b, x) * special.beta(a, b)


def lambda1_cdf(sig: SignatureTriple, t):
    """P(lambda_1 <= t) under the normalized density, for N <= 2."""
    N = sig.N
    alpha, beta = density_exponents(sig)
    Z = density_normalization(sig)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if N == 1:
        u = (1 + np.clip(t, -1, 1)) / 2
        return 2.0 ** (alpha + beta + 1) * _inc_beta(u, beta + 1, alpha + 1) / Z
    if N != 2:
        raise NotImplementedError("largest-eigenvalue CDF is implemented for N <= 2")

    def inner(x):
        # int_{-1}^{x} (x - y)(1 - y)^alpha (1 + y)^beta dy
        u = (1 + x) / 2
        return 2.0 ** (alpha + beta + 2) * (u * _inc_beta(u, beta + 1, alpha + 1) - _inc_beta(u, beta + 2, alpha + 1))

    # x = cos(theta) makes the endpoint singularities integrable and smooth
    def outer_theta(theta):
        x = np.cos(theta)
        return (1 - x) ** alpha * (1 + x) ** beta * inner(x) * np.sin(theta)

    edges = np.linspace(np.pi, 0.0, _CDF_PANELS + 1)
    nodes, weights = np.polynomial.legendre.leggauss(16)
    lo, hi = edges[:-1, None], edges[1:, None]
    th = (lo + hi) / 2 + (hi - lo) / 2 * nodes
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.nan_to_num(outer_theta(th))
    panel = -((hi - lo) / 2 * vals) @ weights
    cum = np.concatenate([[0.0], np.cumsum(panel)]) / Z
    theta_t = np.arccos(np.clip(t, -1, 1))
    # integrate the partial panel exactly instead of interpolating
    out = np.empty_like(theta_t)
    for idx, tt in enumerate(theta_t):
        j = min(int((np.pi - tt) / (np.pi / _CDF_PANELS)), _CDF_PANELS - 1)
        a, b = edges[j], tt
        x = (a + b) / 2 + (b - a) / 2 * nodes
        with np.errstate(invalid="ignore", divide="ignore"):
            part = -((b - a) / 2 * np.nan_to_num(outer_theta(x))) @ weights
        out[idx] = cum[j] + part / Z
    return out


_CDF_PANELS = 200


def ks_distance(samples: np.ndarray, cdf) -> float:
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    F = cdf(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


# --- ellipsoid projections ------------------------------------------------------


def unit_ball_volume(k: int) -> float:
    return math.pi ** (k / 2) / math.gamma(k / 2 + 1)


def ellipsoid_projection_volume(E: SubspaceSample, a: float, b: float) -> float:
    """k-volume of the orthogonal projection onto E of the ellipsoid with
    half-axes a on R^p and b on R^q, from the spectrum of E."""
    if a <= 0 or b <= 0:
        raise ValueError("half-axes must be positive")
    sig = E.ambient
    A = (a * a + b * b) / 2
    B = (a * a - b * b) / 2
    lam = E.spectrum
    return float(
        unit_ball_volume(sig.k) * a**sig.N_q * b**sig.N_p * np.prod(np.sqrt(np.maximum(A + B * lam, 0.0)))
    )


def projected_shape(E: SubspaceSample, a: float, b: float) -> np.ndarray:
    """Shape matrix S of the projection {y : y^T S^-1 y <= 1} in E's coordinates."""
    sig = E.ambient
    d2 = np.concatenate([np.full(sig.p, a * a), np.full(sig.q, b * b)])
    return (E.basis * d2) @ E.basis.T


def projection_mc_oracle(E: SubspaceSample, a: float, b: float, samples: int, seed: int, shards: int = 8, workers: int = 1):
    """(volume, stderr) of the projected ellipsoid by rejection in its bounding box."""
    k = E.ambient.k
    if k > 4:
        raise ValueError("Monte Carlo projection oracle supports k <= 4")
    if k == 0:
        return 1.0, 0.0
    S = projected_shape(E, a, b)
    Sinv = np.linalg.inv(S)
    # padded so the box is never tight; for k = 1 it would equal the segment
    half = 1.1 * np.sqrt(np.diag(S))
    box = float(np.prod(2 * half))
    sizes = [samples // shards + (1 if i < samples % shards else 0) for i in range(shards)]

    def shard(i):
        rng = _rng(seed, 1000 + i)
        y = rng.uniform(-1.0, 1.0, size=(sizes[i], k)) * half
        return int(np.sum(np.einsum("ni,ij,nj->n", y, Sinv, y) <= 1.0))

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            hits = sum(ex.map(shard, range(shards)))
    else:
        hits = sum(shard(i) for i in range(shards))
    frac = hits / samples
    return box * frac, box * math.sqrt(frac * (1 - frac) / samples)


def degenerate_limit(E: SubspaceSample) -> float:
    """omega_{2m} 2^(1/2 - m) prod (1 - lambda_i)^(1/2) for E in Gr_{2m-1}(R^{2m, 2m-1})."""
    sig = E.ambient
    m = sig.p // 2
    if (sig.p, sig.q, sig.k) != (2 * m, 2 * m - 1, 2 * m - 1):
        raise ValueError("defined for the triple (2m, 2m-1, 2m-1)")
    return unit_ball_volume(2 * m) * 2.0 ** (0.5 - m) * float(np.prod(np.sqrt(1 - E.spectrum)))


def flattened_shadow(E: SubspaceSample, eps: float, flatten: str = "negative") -> float:
    """Volume of the projection onto the complement of E of the ellipsoid with
    half-axes eps on one block and 1 on the other."""
    comp = complement(E)
    if flatten == "negative":
        return ellipsoid_projection_volume(comp, 1.0, eps)
    if flatten == "positive":
        return ellipsoid_projection_volume(comp, eps, 1.0)
    raise ValueError("flatten must be 'negative' or 'positive'")
