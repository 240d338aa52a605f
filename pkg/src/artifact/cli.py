"""Command-line interface.  Every command prints one JSON (or CSV) report.

Exit codes: 0 success, 2 certification failure, 1 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

import click

SCHEMA_VERSION = 1
CSV_VERSION = 1
PRECISION_ENV = "ARTIFACT_PRECISION"
DEFAULT_PRECISION = 12


class CertificationFailed(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("case", "certification failed"))
        self.payload = payload


@dataclass
class RunConfig:
    command: str
    parameters: dict
    seed: Optional[int] = None
    samples: Optional[int] = None
    output_format: str = "json"
    precision: int = DEFAULT_PRECISION


@dataclass
class Result:
    payload: dict
    rows: list = field(default_factory=list)
    certified: Optional[bool] = None


# --- formatting ------------------------------------------------------------------


def _clean(x: Any, precision: int) -> Any:
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{precision}g}")
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _clean(v, precision) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v, precision) for v in x]
    if hasattr(x, "item"):
        return _clean(x.item(), precision)
    return x


def _doubled(values) -> list[int]:
    return [int(2 * Fraction(v)) for v in values]


def _parse_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"cannot parse {text!r} as a comma-separated list of rationals") from exc


def _parse_frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError as exc:
        raise click.BadParameter(f"cannot parse {text!r} as a rational") from exc


def _emit(cfg: RunConfig, res: Result) -> str:
    if cfg.output_format == "csv":
        rows = res.rows or [res.payload]
        rows = [_clean(r, cfg.precision) for r in rows]
        cols = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION} csv_version={CSV_VERSION} command={cfg.command}\n")
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        return buf.getvalue()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "exponent_encoding": "doubled",
        "config": _clean(asdict(cfg), cfg.precision),
        "result": _clean(res.payload, cfg.precision),
    }
    if res.certified is not None:
        doc["certified"] = res.certified
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _run(ctx: click.Context, name: str, params: dict, fn: Callable[[], Result], seed=None, samples=None):
    cfg = RunConfig(
        command=name,
        parameters={k: v for k, v in params.items() if v is not None},
        seed=seed,
        samples=samples,
        output_format=ctx.obj["format"],
        precision=ctx.obj["precision"],
    )
    res = fn()
    click.echo(_emit(cfg, res), nl=False)
    if res.certified is False:
        raise CertificationFailed(res.payload)


# --- commands ----------------------------------------------------------------------


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    try:
        return int(raw) if raw else DEFAULT_PRECISION
    except ValueError:
        return DEFAULT_PRECISION


@click.group()
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--precision", type=click.IntRange(1, 17), default=None, help=f"significant digits (env {PRECISION_ENV})")
@click.pass_context
def cli(ctx: click.Context, fmt: str, precision: Optional[int]):
    """Exact and Monte Carlo computations for signed Selberg-type integrals."""
    ctx.obj = {"format": fmt, "precision": precision if precision is not None else _default_precision()}


@cli.command("selberg-I")
@click.option("--n", type=click.IntRange(1, 12), required=True)
@click.option("--shape", type=click.Choice(["abs", "sgn", "mixed"]), default="abs", show_default=True)
@click.pass_context
def selberg_i_cmd(ctx, n, shape):
    """Closed-form rational function of s for the Vandermonde integral."""
    from .ratfun import factored_str
    from .selberg import selberg_I

    def go():
        r = selberg_I(n, shape)
        if shape == "mixed":
            re, im = r
            return Result({"re": factored_str(re), "im": factored_str(im)})
        return Result({"ratfun": factored_str(r)})

    _run(ctx, "selberg-I", {"n": n, "shape": shape}, go)


def _complex_payload(e, z) -> dict:
    return {"doubled": list(e.doubled), "re": z.re, "im": z.im, "value": str(z)}


@cli.command("f-eval")
@click.option("--e", "exps", required=True, help="comma-separated exponents, e.g. 1,2,3 or 1/2,3/2")
@click.pass_context
def f_eval_cmd(ctx, exps):
    """Closed form and recursion for the determinantal integral."""
    from .selberg import ExponentVector, f_closed, f_recursive

    def go():
        e = ExponentVector.from_values(_parse_list(exps))
        closed, rec = f_closed(e), f_recursive(e)
        return Result({**_complex_payload(e, closed), "recursive": str(rec), "agree": closed == rec}, certified=closed == rec)

    _run(ctx, "f-eval", {"e": exps}, go)


@cli.command("f-oracle")
@click.option("--e", "exps", required=True)
@click.option("--chamber", default=None, help="a,b to restrict to one sign chamber")
@click.pass_context
def f_oracle_cmd(ctx, exps, chamber):
    """Exact oracle value by iterated integration."""
    from .selberg import ExponentVector, f_oracle

    def go():
        e = ExponentVector.from_values(_parse_list(exps))
        dom = tuple(int(x) for x in _parse_list(chamber)) if chamber else None
        return Result(_complex_payload(e, f_oracle(e, dom)))

    _run(ctx, "f-oracle", {"e": exps, "chamber": chamber}, go)


@cli.command("residue-check")
@click.option("--a", "values", required=True)
@click.option("--which", type=click.IntRange(1, 3), required=True)
@click.pass_context
def residue_check_cmd(ctx, values, which):
    """Both sides of a partial-fraction identity."""
    from .selberg import residue_identity_check

    def go():
        lhs, rhs = residue_identity_check(_parse_list(values), which)
        return Result({"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}, certified=lhs == rhs)

    _run(ctx, "residue-check", {"a": values, "which": which}, go)


@cli.command("D")
@click.option("--n", type=click.IntRange(1, 10), required=True)
@click.option("--kind", type=click.Choice(["abs", "sgn", "cos", "sin", "plus"]), required=True)
@click.option("--s", "s_value", default=None, help="optional rational point to evaluate at")
@click.pass_context
def d_cmd(ctx, n, kind, s_value):
    """Closed form of the signed matrix integral."""
    from .matintegrals import D_closed
    from .ratfun import factored_str

    def go():
        r = D_closed(n, kind)
        out: dict = {"n": n, "kind": kind}
        if r.exact is not None:
            out.update(
                identically_zero=r.identically_zero,
                ratfun=factored_str(r.exact),
                constant=r.constant.describe(),
                inverse_polynomial=r.exact.is_inverse_polynomial() if not r.identically_zero else None,
            )
        else:
            out.update(gamma_ratio=r.gamma_ratio.describe())
        if s_value is not None:
            out["s"] = s_value
            out["value"] = r.value(_parse_frac(s_value))
        return Result(out)

    _run(ctx, "D", {"n": n, "kind": kind, "s": s_value}, go)


@cli.command("D-mc")
@click.option("--n", type=click.IntRange(1, 4), required=True)
@click.option("--kind", type=click.Choice(["abs", "sgn", "cos", "sin", "plus"]), required=True)
@click.option("--s", "s_values", default="0", show_default=True, help="comma-separated s >= 0")
@click.option("--samples", type=click.IntRange(1), default=10**6, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--workers", type=click.IntRange(1), default=1, show_default=True)
@click.pass_context
def d_mc_cmd(ctx, n, kind, s_values, samples, seed, workers):
    """Monte Carlo estimate next to the closed form."""
    from .matintegrals import D_closed, D_mc_oracle_many

    def go():
        ss = [float(x) for x in _parse_list(s_values)]
        est = D_mc_oracle_many(n, [kind], ss, samples, seed, workers=workers)
        closed = D_closed(n, kind)
        rows = []
        for s in ss:
            mean, err = est[(kind, s)]
            exact = closed.value(Fraction(s).limit_denominator(1000))
            rows.append({"s": s, "mc": mean, "stderr": err, "closed": exact, "z": (mean - exact) / err if err else 0.0})
        return Result({"rows": rows}, rows=rows)

    _run(ctx, "D-mc", {"n": n, "kind": kind, "s": s_values, "workers": workers}, go, seed=seed, samples=samples)


@cli.command("gamma-kappa")
@click.option("--N", "N", type=click.IntRange(1, 20), required=True)
@click.option("--kappa", default="", help="partition, e.g. 1,1,0")
@click.option("--x", "x_value", required=True)
@click.pass_context
def gamma_kappa_cmd(ctx, N, kappa, x_value):
    """Pole order and leading coefficient of the partition-shifted multivariate Gamma."""
    from .special import gamma_n_kappa

    def go():
        parts = [int(v) for v in _parse_list(kappa)] if kappa else []
        g = gamma_n_kappa(N, parts)
        order, lead = g.leading(_parse_frac(x_value))
        return Result({"pole_order": order, "leading": float(lead), "kappa": parts, "product": g.describe()})

    _run(ctx, "gamma-kappa", {"N": N, "kappa": kappa, "x": x_value}, go)


@cli.command("constantine")
@click.option("--N", "N", type=click.IntRange(1, 20), required=True)
@click.option("--alpha", required=True)
@click.option("--kappa", default="")
@click.option("--s0", required=True)
@click.pass_context
def constantine_cmd(ctx, N, alpha, kappa, s0):
    """Pole bookkeeping of the Constantine beta-integral ratio at s0."""
    from .matintegrals import constantine_ratio

    def go():
        parts = [int(v) for v in _parse_list(kappa)] if kappa else []
        g = constantine_ratio(N, _parse_frac(alpha), parts)
        x0 = _parse_frac(s0)
        order, lead = g.leading(x0)
        return Result(
            {
                "numerator_pole_order": g.numerator_pole_order(x0),
                "denominator_pole_order": g.denominator_pole_order(x0),
                "net_pole_order": order,
                "leading": float(lead),
                "alpha_doubled": _doubled([_parse_frac(alpha)])[0],
            }
        )

    _run(ctx, "constantine", {"N": N, "alpha": alpha, "kappa": kappa, "s0": s0}, go)


def _sig(p, q, k):
    from .grassmann import SignatureTriple

    try:
        return SignatureTriple(p, q, k)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


@cli.command("sample-grassmann")
@click.option("--p", type=click.IntRange(0), required=True)
@click.option("--q", type=click.IntRange(0), required=True)
@click.option("--k", type=click.IntRange(0), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--count", type=click.IntRange(1), default=1, show_default=True)
@click.pass_context
def sample_grassmann_cmd(ctx, p, q, k, seed, count):
    """Spectra of random subspaces (plot-ready rows in CSV)."""
    from .grassmann import complement_spectrum, haar_sample, orbit_signature

    def go():
        sig = _sig(p, q, k)
        rows = []
        for i in range(count):
            E = haar_sample(sig, seed, stream=i)
            o = orbit_signature(E)
            rows.append(
                {
                    "index": i,
                    "spectrum": list(E.spectrum),
                    "complement_spectrum": list(complement_spectrum(E)),
                    "signature": [o.a, o.b],
                    "near_degenerate": o.near_degenerate,
                }
            )
        return Result({"N": sig.N, "samples": rows}, rows=rows)

    _run(ctx, "sample-grassmann", {"p": p, "q": q, "k": k, "count": count}, go, seed=seed, samples=count)


@cli.command("angle-density")
@click.option("--p", type=click.IntRange(0), required=True)
@click.option("--q", type=click.IntRange(0), required=True)
@click.option("--k", type=click.IntRange(0), required=True)
@click.option("--lam", required=True, help="decreasing eigenvalues in [-1, 1]")
@click.pass_context
def angle_density_cmd(ctx, p, q, k, lam):
    """Normalized eigenvalue density at a point."""
    from .grassmann import angle_density, density_exponents

    def go():
        sig = _sig(p, q, k)
        pts = [float(x) for x in _parse_list(lam)]
        return Result({"density": angle_density(sig, pts), "exponents_doubled": _doubled(density_exponents(sig))})

    _run(ctx, "angle-density", {"p": p, "q": q, "k": k, "lam": lam}, go)


@cli.command("project-ellipsoid")
@click.option("--p", type=click.IntRange(0), required=True)
@click.option("--q", type=click.IntRange(0), required=True)
@click.option("--k", type=click.IntRange(0), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--a", "a_axis", type=float, required=True)
@click.option("--b", "b_axis", type=float, required=True)
@click.pass_context
def project_ellipsoid_cmd(ctx, p, q, k, seed, a_axis, b_axis):
    """Closed-form shadow volume of an ellipsoid on a random subspace."""
    from .grassmann import ellipsoid_projection_volume, haar_sample

    def go():
        E = haar_sample(_sig(p, q, k), seed)
        return Result({"spectrum": list(E.spectrum), "volume": ellipsoid_projection_volume(E, a_axis, b_axis)})

    _run(ctx, "project-ellipsoid", {"p": p, "q": q, "k": k, "a": a_axis, "b": b_axis}, go, seed=seed)


@cli.command("project-mc")
@click.option("--p", type=click.IntRange(0), required=True)
@click.option("--q", type=click.IntRange(0), required=True)
@click.option("--k", type=click.IntRange(0, 4), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--a", "a_axis", type=float, required=True)
@click.option("--b", "b_axis", type=float, required=True)
@click.option("--samples", type=click.IntRange(1), default=10**6, show_default=True)
@click.option("--workers", type=click.IntRange(1), default=1, show_default=True)
@click.pass_context
def project_mc_cmd(ctx, p, q, k, seed, a_axis, b_axis, samples, workers):
    """Monte Carlo shadow volume next to the closed form."""
    from .grassmann import ellipsoid_projection_volume, haar_sample, projection_mc_oracle

    def go():
        E = haar_sample(_sig(p, q, k), seed)
        vol, err = projection_mc_oracle(E, a_axis, b_axis, samples, seed, workers=workers)
        closed = ellipsoid_projection_volume(E, a_axis, b_axis)
        return Result({"mc": vol, "stderr": err, "closed": closed, "relative_error": abs(vol - closed) / closed})

    params = {"p": p, "q": q, "k": k, "a": a_axis, "b": b_axis, "workers": workers}
    _run(ctx, "project-mc", params, go, seed=seed, samples=samples)


def _report_result(report) -> Result:
    d = report.to_dict()
    rows = d.get("pole_orders") or []
    return Result(d, rows=rows, certified=report.certified)


@cli.command("universal-pairing")
@click.option("--case", "tag", type=click.Choice(["abs_2m", "sgn_2m1", "cos_pp", "sin_pp"]), required=True)
@click.option("--param", type=click.IntRange(1), required=True, help="m for abs/sgn, p for cos/sin")
@click.pass_context
def universal_pairing_cmd(ctx, tag, param):
    """Exact continued pairing value for a universal family."""
    from .crofton import UniversalCase, universal_report

    _run(ctx, "universal-pairing", {"case": tag, "param": param}, lambda: _report_result(universal_report(UniversalCase(tag, param))))


@cli.command("centroaffine")
@click.option("--p", type=click.IntRange(2), required=True)
@click.pass_context
def centroaffine_cmd(ctx, p):
    """Ball values behind the centro-affine Crofton distribution."""
    from .crofton import centroaffine_report

    _run(ctx, "centroaffine", {"p": p}, lambda: _report_result(centroaffine_report(p)))


@cli.command("mu-c-vanishing")
@click.option("--m", type=click.IntRange(2, 5), required=True)
@click.option("--max-first", type=click.IntRange(1), default=None)
@click.pass_context
def mu_c_cmd(ctx, m, max_first):
    """Per-partition pole orders showing the closed-orbit pairing vanishes."""
    from .crofton import mu_c_vanishing

    _run(ctx, "mu-c-vanishing", {"m": m, "max_first": max_first}, lambda: _report_result(mu_c_vanishing(m, max_first)))


@cli.command("q2-certificate")
@click.option("--p", type=click.IntRange(2), required=True)
@click.option("--k", type=click.IntRange(2), required=True)
@click.pass_context
def q2_cmd(ctx, p, k):
    """Restriction-matrix certificate for the O(p, 2) basis."""
    from .crofton import q2_basis_certificate

    if k > p:
        raise click.BadParameter("requires k <= p", param_hint="--k")
    _run(ctx, "q2-certificate", {"p": p, "k": k}, lambda: _report_result(q2_basis_certificate(p, k)))


@cli.command("u-eval")
@click.option("--s", "s_value", required=True)
@click.option("--a", "a_value", required=True)
@click.option("--b", "b_value", required=True)
@click.pass_context
def u_eval_cmd(ctx, s_value, a_value, b_value):
    """Continued value of int_0^1 x^s (1+x)^a (1-x)^b dx."""
    from .special import u_eval

    def go():
        s, a, b = _parse_frac(s_value), _parse_frac(a_value), _parse_frac(b_value)
        return Result({"value": u_eval(s, a, b), "doubled": _doubled([s, a, b])})

    _run(ctx, "u-eval", {"s": s_value, "a": a_value, "b": b_value}, go)


_GLOBAL_OPTIONS = ("--format", "--precision")


def _hoist_global_options(argv: list[str]) -> list[str]:
    """Accept the group options after the subcommand name as well."""
    front, rest = [], []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _GLOBAL_OPTIONS and i + 1 < len(argv):
            front += [tok, argv[i + 1]]
            i += 2
            continue
        if tok.split("=", 1)[0] in _GLOBAL_OPTIONS and "=" in tok:
            front.append(tok)
        else:
            rest.append(tok)
        i += 1
    return front + rest


def main(argv: Optional[list[str]] = None) -> int:
    argv = _hoist_global_options(list(sys.argv[1:] if argv is None else argv))
    try:
        cli.main(args=argv, prog_name="artifact", standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_help(), err=True)
        return 1
    except click.exceptions.Abort:
        return 1
    except CertificationFailed as exc:
        click.echo(f"certification failed: {json.dumps(_clean(exc.payload, 12), sort_keys=True)}", err=True)
        return 2
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
