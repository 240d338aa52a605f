"""Non-vanishing certificates for invariant Crofton distributions.

Each routine reduces a qualitative claim (a pairing is nonzero, a Laurent
coefficient vanishes, a 2x2 matrix is invertible) to exact or gated
floating-point evaluations in the lower modules, and returns a report that
serializes to JSON.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import grassmann
from .matintegrals import constant_exact, constantine_ratio
from .ratfun import RatFun
from .selberg import ComplexRational, selberg_I
from .special import odd_p_total, partitions_second_part_le1, u_diag3, u_residue

AMBIGUITY_GATE = 1e-8


class InadmissibleCase(ValueError):
    pass


class NumericallyAmbiguous(ArithmeticError):
    pass


@dataclass
class Report:
    case: str
    inputs: dict
    certified: bool
    exact_value: Optional[str] = None
    pole_orders: Optional[list] = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        return {k: v for k, v in d.items() if v is not None}


# --- universal families ----------------------------------------------------------

UNIVERSAL_TAGS = ("abs_2m", "sgn_2m1", "cos_pp", "sin_pp")


@dataclass(frozen=True)
class UniversalCase:
    tag: str
    param: int

    def __post_init__(self):
        if self.tag not in UNIVERSAL_TAGS:
            raise ValueError(f"unknown case {self.tag!r}")
        if self.param < 1:
            raise ValueError("parameter must be positive")
        if self.tag in ("cos_pp", "sin_pp") and self.param < 2:
            raise InadmissibleCase("p = 1 gives k = 0, outside the range k >= 1")

    @property
    def triple(self) -> tuple[int, int, int]:
        m = p = self.param
        return {
            "abs_2m": (2 * m, 2 * m - 1, 2 * m - 1),
            "sgn_2m1": (2 * m + 1, 2 * m, 2 * m),
            "cos_pp": (p, p, p - 1),
            "sin_pp": (p, p, p - 1),
        }[self.tag]

    @property
    def s0(self) -> Fraction:
        p, q, _ = self.triple
        return Fraction(-(p + q + 1), 2)


def _pairing_ratfun(case: UniversalCase) -> RatFun:
    m = p = case.param
    if case.tag == "abs_2m":
        return selberg_I(2 * m - 1, "abs")
    if case.tag == "sgn_2m1":
        return selberg_I(2 * m, "sgn")
    if case.tag == "cos_pp" and p % 4 == 3:
        raise InadmissibleCase("cosine family is excluded for p = 3 mod 4")
    if case.tag == "sin_pp" and p % 4 == 1:
        raise InadmissibleCase("sine family is excluded for p = 1 mod 4")
    re, im = selberg_I(p - 1, "mixed")
    return re if case.tag == "cos_pp" else im


def universal_pairing(case: UniversalCase) -> Fraction:
    """Exact continued value at s0 of the Vandermonde integral the pairing reduces to."""
    if case.param > 8 or (case.tag in ("abs_2m", "sgn_2m1") and case.param > 6):
        raise ValueError("outside desk scale (m <= 6, p <= 8)")
    return _pairing_ratfun(case)(case.s0)


def universal_report(case: UniversalCase) -> Report:
    value = universal_pairing(case)
    r = _pairing_ratfun(case)
    return Report(
        case=case.tag,
        inputs={"param": case.param, "triple": list(case.triple), "s0": str(case.s0)},
        certified=value != 0,
        exact_value=str(value),
        details={"ratfun": str(r)},
    )


def centroaffine_pairing(p: int) -> tuple[Fraction, Fraction]:
    """(cos part, sin part) at s0 = -(2p+1)/2 of the rational functions behind
    the centro-affine distribution; the combination used is :func:`centroaffine_value`."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if p % 4 == 3:
        raise InadmissibleCase("no centro-affine recipe for p = 3 mod 4")
    re, im = selberg_I(p - 1, "mixed")
    s0 = Fraction(-(2 * p + 1), 2)
    return re(s0), im(s0)


def centroaffine_literal(p: int) -> Fraction:
    """The recipe's combination evaluated directly on the ball; identically 0."""
    c, s = centroaffine_pairing(p)
    if p % 4 == 1:
        return s
    return c + (-1) ** (p // 2) * s


def centroaffine_dual_pair(p: int) -> tuple[Fraction, Fraction]:
    """(cos, sin) ball values of the degree p+1 family, obtained from the
    degree p-1 values through the complement relation: the chamber (a, b)
    becomes (b, a), so cos + i sin maps to i^(p-1) (cos - i sin)."""
    c, s = centroaffine_pairing(p)
    z = ComplexRational.i_power(p - 1) * ComplexRational(c, -s)
    return z.re, z.im


def centroaffine_value(p: int) -> Fraction:
    """Ball value of the degree p+1 combination whose duality image is the
    centro-affine distribution; nonzero certifies the latter."""
    c, s = centroaffine_dual_pair(p)
    if p % 4 == 1:
        return c
    return c - (-1) ** (p // 2) * s


def centroaffine_report(p: int) -> Report:
    c, s = centroaffine_pairing(p)
    dc, ds = centroaffine_dual_pair(p)
    v = centroaffine_value(p)
    sign = "+" if (p // 2) % 2 == 0 else "-"
    recipe = "sin" if p % 4 == 1 else f"cos {sign} sin"
    dual_recipe = "cos" if p % 4 == 1 else f"cos {'-' if sign == '+' else '+'} sin"
    return Report(
        case="centroaffine",
        inputs={"p": p, "s0": str(Fraction(-(2 * p + 1), 2))},
        certified=v != 0,
        exact_value=str(v),
        details={
            "recipe": recipe,
            "cos": str(c),
            "sin": str(s),
            "literal_ball_value": str(centroaffine_literal(p)),
            "dual_recipe": dual_recipe,
            "dual_cos": str(dc),
            "dual_sin": str(ds),
            "constant": constant_exact(p - 1).describe(),
        },
    )


# --- closed-orbit distribution ------------------------------------------------------


def mu_c_vanishing(m: int, max_first: Optional[int] = None) -> Report:
    """Net pole orders of the Constantine ratio at s0 = -2m over the partitions
    with second part at most 1 (first part truncated at ``max_first``)."""
    if m < 2:
        raise ValueError("m must be at least 2")
    if m > 5:
        raise ValueError("outside desk scale (m <= 5)")
    N = 2 * m - 1
    s0 = Fraction(-2 * m)
    bound = max_first if max_first is not None else N + 3
    rows = []
    ok = True
    for kappa in partitions_second_part_le1(N, bound):
        g = constantine_ratio(N, Fraction(-1, 2), kappa)
        num = g.numerator_pole_order(s0)
        den = g.denominator_pole_order(s0)
        net = num - den
        ok &= net <= 1
        rows.append({"kappa": list(kappa.padded(N)), "numerator": num, "denominator": den, "net": net})
    return Report(
        case="mu_c_vanishing",
        inputs={"m": m, "N": N, "alpha": "-1/2", "s0": str(s0), "max_first": bound},
        certified=ok and 1 < m,
        pole_orders=rows,
        details={"laurent_order_extracted": m},
    )


# --- O(p, 2) restriction tables ---------------------------------------------------------


@dataclass(frozen=True)
class RestrictionRow:
    """One row of a restriction table: zero, or c * u(s, first, second)."""

    alpha: str
    b: int
    structural_zero: bool
    first: Optional[Fraction] = None
    second: Optional[Fraction] = None

    def describe(self) -> str:
        if self.structural_zero:
            return "0"
        return f"u(s, {self.first}, {self.second})"


def restriction_table(p: int, k: int, alpha: str) -> list[RestrictionRow]:
    """Integrals of |sigma|^s_{k-b, b} over L^alpha_k, up to a positive constant.

    ``alpha`` is "0" (subspaces containing the negative direction) or "pi/2"
    (subspaces orthogonal to it).
    """
    if not 2 <= k <= p:
        raise ValueError("requires 2 <= k <= p")
    h = lambda x: Fraction(x, 2)  # noqa: E731
    if alpha == "0":
        return [
            RestrictionRow("0", 0, True),
            RestrictionRow("0", 1, False, h(p - k), h(k - 3)),
            RestrictionRow("0", 2, False, h(k - 3), h(p - k)),
        ]
    if alpha == "pi/2":
        return [
            RestrictionRow("pi/2", 0, False, h(p - k - 1), h(k - 2)),
            RestrictionRow("pi/2", 1, False, h(k - 2), h(p - k - 1)),
            RestrictionRow("pi/2", 2, True),
        ]
    raise ValueError("alpha must be '0' or 'pi/2'")


def _row(p: int, k: int, alpha: str, b: int) -> RestrictionRow:
    return restriction_table(p, k, alpha)[b]


def _combination(p: int, k: int, alpha: str, sign: int) -> tuple[float, dict]:
    """lim at s0 of sum_b w(b) * row_b, w = 1 (sign=+1) or (-1)^b (sign=-1).

    The two live rows are u(s, A, B) and u(s, B, A) with A - B an integer, so
    the combination is the one handled by :func:`odd_p_total`.
    """
    live = [r for r in restriction_table(p, k, alpha) if not r.structural_zero]
    r1, r2 = live
    w1, w2 = (1, 1) if sign > 0 else ((-1) ** r1.b, (-1) ** r2.b)
    A, B = r1.first, r1.second
    m = abs(int(A - B))
    low = min(A, B)
    # u(A', B') + (-1)^(m+1) u(B', A') with A' = low + m the larger one
    if m == 0:
        if w1 != -w2:
            raise ValueError("equal parameters only arise in the antisymmetric combination")
        return Fraction(0), {"A": str(A), "B": str(B), "m": 0, "identically_zero": True}
    expected = (-1) ** (m + 1)
    if w1 * w2 != expected:
        raise ValueError("weights do not match the combination with a finite limit")
    total = odd_p_total(low, m)
    # normalize the overall sign so that the larger-first term carries w = +1
    lead_w = w1 if A > B else w2
    return lead_w * total, {"A": str(A), "B": str(B), "m": m}


def _residue_entry(p: int, k: int, alpha: str, b: int) -> tuple[Fraction, dict]:
    r = _row(p, k, alpha, b)
    m = (p + 3) // 2
    return u_residue(m, r.first, r.second), {"residue_at": str(-m), "u": r.describe()}


def _diag_entry(p: int, k: int, alpha: str, b: int) -> tuple[float, dict]:
    r = _row(p, k, alpha, b)
    return u_diag3(r.first, r.second), {"u": r.describe()}


def _gate(value) -> bool:
    if isinstance(value, Fraction):
        return value != 0
    if not math.isfinite(value):
        return False
    if abs(value) < AMBIGUITY_GATE:
        if value == 0:
            return False
        raise NumericallyAmbiguous(f"entry {value!r} is below the ambiguity gate {AMBIGUITY_GATE}")
    return True


def _entry(label: str, value, meta: dict, required: str) -> dict:
    nonzero = _gate(value) if required == "nonzero" else None
    return {
        "entry": label,
        "value": str(value) if isinstance(value, Fraction) else float(value),
        "required": required,
        "ok": (nonzero if required == "nonzero" else True),
        **meta,
    }


def _single_odd_p(p: int, k: int) -> dict:
    """Non-vanishing of the degenerate-signature distribution of the third or
    fourth row (p odd), read off from its one live restriction."""
    if k % 2 == 0:
        v, meta = _residue_entry(p, k, "0", 1)
        return _entry(f"L0 mu_({k - 2},1) [p={p},k={k}]", v, meta, "nonzero")
    v, meta = _residue_entry(p, k, "pi/2", 0)
    return _entry(f"Lpi/2 mu_({k - 1},0) [p={p},k={k}]", v, meta, "nonzero")


def _mu_c_nontrivial(p: int, k: int) -> list[dict]:
    """Chain of entries showing the closed-orbit distribution is nontrivial at
    (p even, k), by restriction from a larger odd p; tries k and its dual."""
    for kk in (k, p + 2 - k):
        if p % 4 == 0 and kk == (p + 2) // 2:
            entry = _single_odd_p(p + 3, kk + 3)
        else:
            entry = _single_odd_p(p + 1, kk + 1)
        if entry["ok"]:
            return [dict(entry, via_k=kk)]
    return [dict(entry, via_k=kk)]


def _odd_p_matrix(p: int, k: int) -> tuple[list[dict], bool]:
    """Entries of the 2x2 restriction matrix for p odd."""
    sign = 1 if p % 4 == 1 else -1
    name = "|sigma|" if sign > 0 else "sign sigma |sigma|"
    if k % 2 == 0:
        v1, m1 = _combination(p, k, "pi/2", sign)
        e1 = _entry(f"Lpi/2 {name}", v1, m1, "nonzero")
        e2 = _entry(f"Lpi/2 mu_({k - 2},1)", Fraction(0), {"structural": True}, "zero")
        v3, m3 = _residue_entry(p, k, "0", 1)
        e3 = _entry(f"L0 mu_({k - 2},1)", v3, m3, "nonzero")
    else:
        v1, m1 = _combination(p, k, "0", sign)
        e1 = _entry(f"L0 {name}", v1, m1, "nonzero")
        e2 = _entry(f"L0 mu_({k - 1},0)", Fraction(0), {"structural": True}, "zero")
        v3, m3 = _residue_entry(p, k, "pi/2", 0)
        e3 = _entry(f"Lpi/2 mu_({k - 1},0)", v3, m3, "nonzero")
    # triangular matrix: invertible iff both off-zero diagonal entries are nonzero
    return [e1, e2, e3], bool(e1["ok"] and e3["ok"])


def _attempt(p: int, k: int) -> tuple[str, list[dict], bool]:
    if p % 2 == 0:
        row = 1 if k % 2 == 0 else 2
        if k % 2 == 0:
            v, meta = _diag_entry(p, k, "0", 2)
            e = _entry(f"L0 |sigma|_({k},0) - |sigma|_({k - 2},2)", -v, meta, "nonzero")
        else:
            v, meta = _diag_entry(p, k, "0", 1)
            e = _entry(f"L0 |sigma|_({k - 1},1)", v, meta, "nonzero")
        zero = _entry("L0 mu_c", Fraction(0), {"structural": True}, "zero")
        chain = _mu_c_nontrivial(p, k)
        return f"row{row}", [e, zero, *chain], bool(e["ok"] and all(c["ok"] for c in chain))
    row = "row3" if p % 4 == 1 else "row4"
    if p % 4 == 1 and k == (p + 1) // 2:
        # the L0 functional separates; the second distribution is nontrivial
        # because it is the restriction of mu_c from (p+1, k+1)
        v, meta = _combination(p, k, "0", 1)
        e = _entry("L0 |sigma|", v, meta, "nonzero")
        zero = _entry(f"L0 mu_({k - 1},0)", Fraction(0), {"structural": True}, "zero")
        chain = _mu_c_nontrivial(p + 1, k + 1)
        return row, [e, zero, *chain], bool(e["ok"] and all(c["ok"] for c in chain))
    entries, ok = _odd_p_matrix(p, k)
    return row, entries, ok


def q2_basis_certificate(p: int, k: int) -> Report:
    """Certify the spanning pair for O(p, 2)-invariant valuations of degree p+2-k.

    The pair for (p, k) and the dual pair for (p, p+2-k) are equivalent, so
    the dual is tried when the direct entries do not separate.
    """
    if not 2 <= k <= p:
        raise ValueError("requires 2 <= k <= p")
    s0 = Fraction(-(p + 3), 2)
    attempts = []
    certified = False
    row = None
    for kk in dict.fromkeys((k, p + 2 - k)):
        if not 2 <= kk <= p:
            continue
        row, entries, ok = _attempt(p, kk)
        attempts.append({"k": kk, "entries": entries, "certified": ok})
        if ok:
            certified = True
            break
    return Report(
        case="q2_basis",
        inputs={"p": p, "k": k, "s0": str(s0)},
        certified=certified,
        details={"row": row, "attempts": attempts},
    )


# --- degenerate ellipsoid ---------------------------------------------------------------


def _vandermonde(lam: np.ndarray) -> float:
    v = 1.0
    for i in range(len(lam)):
        for j in range(i + 1, len(lam)):
            v *= lam[i] - lam[j]
    return v


def degenerate_pairing_routes(m: int, s: int, eps: float = 1e-4) -> tuple[float, float]:
    """Two evaluations of the pairing of the (2m, 2m-1, 2m-1) density with the
    limit of flattened ellipsoid shadows, at an even s >= 0 where it converges.

    Route one integrates the density against the shadow volumes computed by
    :func:`grassmann.ellipsoid_projection_volume` (divided by the limiting
    constant); route two is the closed form of the Vandermonde integral.
    """
    from scipy import integrate

    if m not in (1, 2):
        raise ValueError("implemented for m in {1, 2}")
    if s < 0 or s % 2:
        raise ValueError("s must be a non-negative even integer")
    sig = grassmann.SignatureTriple(2 * m, 2 * m - 1, 2 * m - 1)
    comp = sig.complement()
    scale = grassmann.unit_ball_volume(2 * m) * 2.0 ** (0.5 - m)

    def shadow(lam: np.ndarray) -> float:
        # complement spectrum is the reversed negative spectrum
        E = _SpectrumOnly(comp, -lam[::-1])
        return grassmann.ellipsoid_projection_volume(E, 1.0, eps) / scale

    # tplquad passes (innermost, middle, outermost) = (lam_1, lam_2, lam_3)
    def integrand(*args):
        lam = np.array(args)
        w = np.prod(np.abs(lam) ** s) * _vandermonde(lam) / np.prod(np.sqrt(1 - lam))
        return w * shadow(lam)

    if m == 1:
        route_one, _ = integrate.quad(lambda x: integrand(x), -1, 1, epsabs=1e-12, epsrel=1e-12, limit=200)
    else:
        route_one, _ = integrate.tplquad(
            integrand, -1, 1, lambda x3: x3, lambda x3: 1, lambda x3, x2: x2, lambda x3, x2: 1,
            epsabs=1e-10, epsrel=1e-10,
        )
    route_two = float(selberg_I(2 * m - 1, "abs")(Fraction(s)))
    return route_one, route_two


@dataclass(frozen=True)
class _SpectrumOnly:
    ambient: grassmann.SignatureTriple
    spectrum: np.ndarray
