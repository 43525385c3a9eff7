"""Command-line surface.

Subcommands: capacity, bm-check, reproduce, omega, mean-width, criterion,
search.  Exact values print as p/q·π plus a 12-significant-digit decimal.
Mathematical verdicts (Violates/Satisfies/Equality) are data and exit 0;
computation and parse errors exit 2; a failed reproduction exits 3; a
certificate that fails re-validation exits 1.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import click

from .bm import (
    BMCertificate,
    ReproductionError,
    Verdict,
    bm_check,
    mean_width_estimate,
    ostrover_criterion,
    reproduce_theorem,
    verify_certificate,
)
from .domains import (
    DomainSpec,
    Ellipsoid,
    EllipsoidPair,
    EllipsoidSum,
    Polydisk,
    ProductWithBall,
    capacity,
    ellipsoid_capacity_bruteforce,
    ellipsoid_norm_argmin,
    format_domain,
    parse_domain,
)
from .exact import PiRational, format_rational
from .minkowski import omega_curve, sum_capacity_with_argmin
from .oracle import OracleConfig, support_norm_numeric

K_CAP = 10**6

_FULL_NUMERIC_K = 1024  # above this, --verify checks the argmin vector only


def _default_jobs() -> int:
    return os.cpu_count() or 1


def common_options(fn):
    fn = click.option(
        "--jobs",
        type=int,
        default=None,
        envvar="CAPACITY_LAB_JOBS",
        help="Worker tasks for sweeps [default: CAPACITY_LAB_JOBS or CPU count].",
    )(fn)
    fn = click.option("--seed", type=int, default=42, show_default=True, help="Seed for randomized estimators.")(fn)
    fn = click.option("--tol", type=float, default=1e-9, show_default=True, help="Relative tolerance for --verify.")(fn)
    fn = click.option("--grid", type=int, default=4096, show_default=True, help="Numeric oracle scan grid.")(fn)
    fn = click.option("--verify", is_flag=True, help="Cross-check exact values with the numeric oracle.")(fn)
    fn = click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv", "text"]),
        default="json",
        show_default=True,
        help="Output format.",
    )(fn)
    return fn


def _check_k(k: int) -> int:
    if k < 1:
        raise click.ClickException(f"k must be a positive integer, got {k}")
    if k > K_CAP:
        raise click.ClickException(f"k is capped at {K_CAP} on the command line, got {k}")
    return k


def _parse_domain_arg(text: str) -> DomainSpec:
    try:
        return parse_domain(text)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None


def _parse_krange(text: str) -> range:
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(text)
    except ValueError:
        raise click.ClickException(f"bad k range {text!r}; expected 'k' or 'lo..hi'") from None
    if lo < 1 or hi < lo:
        raise click.ClickException(f"bad k range {text!r}; need 1 <= lo <= hi")
    _check_k(hi)
    return range(lo, hi + 1)


def _emit_csv(fieldnames: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _relative_gap(exact: float, numeric: float) -> float:
    scale = max(abs(exact), 1e-12)
    return abs(exact - numeric) / scale


def _verify_value(k: int, domain: DomainSpec, value: PiRational, grid: int, tol: float) -> None:
    """Independent re-check of a capacity; raises ClickException on disagreement."""
    if isinstance(domain, Ellipsoid):
        against = ellipsoid_norm_argmin(k, domain)[0]
        if against != value:
            raise click.ClickException(f"verification failed: norm minimum {against} != {value}")
        if k <= 4096 and ellipsoid_capacity_bruteforce(k, domain) != value:
            raise click.ClickException("verification failed: sorted-multiples check disagrees")
        return
    if isinstance(domain, Polydisk):
        a2, b2 = domain.a**2, domain.b**2
        against = min(v1 * a2 + (k - v1) * b2 for v1 in range(k + 1))
        if against != value.coeff:
            raise click.ClickException(f"verification failed: rectangle norm minimum {against} != {value.coeff}")
        return
    if isinstance(domain, EllipsoidSum):
        pair = domain.pair
        if pair.proportional:
            _verify_value(k, pair.outer_ellipsoid, value, grid, tol)
            return
        cfg = OracleConfig(grid=grid, tol=tol)
        exact_float = float(value)
        if k <= _FULL_NUMERIC_K:
            from .domains import IndexVector

            numeric = min(
                support_norm_numeric(IndexVector(v1, k - v1), pair, cfg) for v1 in range(k + 1)
            )
        else:
            _, argmin = sum_capacity_with_argmin(k, pair)
            numeric = support_norm_numeric(argmin, pair, cfg)
        if _relative_gap(exact_float, numeric) > tol:
            raise click.ClickException(
                f"verification failed: numeric oracle {numeric!r} vs exact {exact_float!r}"
            )
        return
    if isinstance(domain, ProductWithBall):
        _verify_value(k, domain.inner, value, grid, tol)
        return


@click.group()
@click.version_option(package_name="capacity-lab")
def main():
    """Exact capacities of ellipsoids, polydisks and ellipsoid sums, with
    Brunn-Minkowski violation certificates."""


@main.command("capacity")
@click.argument("k", type=int)
@click.argument("domain", type=str)
@common_options
def cmd_capacity(k, domain, fmt, verify, grid, tol, seed, jobs):
    """Print c_k(DOMAIN) exactly.

    DOMAIN is a literal like 'E(3/2,1)', 'P(1,1)', 'sum(E(3/2,1),E(1,3/2))'
    or 'prod(E(1,1),2,10)'; rationals are written p/q.
    """
    _check_k(k)
    dom = _parse_domain_arg(domain)
    try:
        value = capacity(k, dom)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    if verify:
        _verify_value(k, dom, value, grid, tol)
    payload = {
        "k": k,
        "domain": format_domain(dom),
        "value": value.as_dict(),
        "exact": str(value),
        "decimal": value.decimal(),
        "verified": bool(verify),
    }
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
    elif fmt == "csv":
        click.echo(_emit_csv(["k", "domain", "exact", "decimal"], [
            {"k": k, "domain": payload["domain"], "exact": payload["exact"], "decimal": payload["decimal"]}
        ]))
    else:
        suffix = "  [verified]" if verify else ""
        click.echo(f"c_{k}({payload['domain']}) = {value.render()}{suffix}")


def _require_ellipsoid(dom: DomainSpec, label: str) -> Ellipsoid:
    if not isinstance(dom, Ellipsoid):
        raise click.ClickException(f"{label} must be an ellipsoid literal E(a,b), got {format_domain(dom)}")
    return dom


def _certificate_rows(certs: list[BMCertificate]) -> list[dict]:
    return [
        {
            "k": c.k,
            "domain1": format_domain(c.domain1),
            "domain2": format_domain(c.domain2),
            "c_sum": format_rational(c.c_sum.coeff),
            "c1": format_rational(c.c_1.coeff),
            "c2": format_rational(c.c_2.coeff),
            "verdict": str(c.verdict),
        }
        for c in certs
    ]


def _emit_certificate(cert: BMCertificate, fmt: str) -> None:
    if fmt == "json":
        payload = cert.to_dict()
        payload["margin"] = f"{cert.margin():.12g}"
        click.echo(json.dumps(payload, indent=2))
    elif fmt == "csv":
        click.echo(_emit_csv(["k", "domain1", "domain2", "c_sum", "c1", "c2", "verdict"], _certificate_rows([cert])))
    else:
        rel = {"LESS": "<", "EQUAL": "=", "GREATER": ">"}[cert.comparison.name]
        click.echo(f"k = {cert.k}")
        click.echo(f"c_k({format_domain(cert.domain1)}) = {cert.c_1.render()}")
        click.echo(f"c_k({format_domain(cert.domain2)}) = {cert.c_2.render()}")
        click.echo(f"c_k(sum) = {cert.c_sum.render()}")
        click.echo(
            f"sqrt({format_rational(cert.c_sum.coeff)}) {rel} "
            f"sqrt({format_rational(cert.c_1.coeff)}) + sqrt({format_rational(cert.c_2.coeff)})"
            f"   [margin {cert.margin():.6g}]"
        )
        click.echo(f"verdict: {cert.verdict}")


@main.command("bm-check")
@click.argument("k", type=int, required=False)
@click.argument("domain1", type=str, required=False)
@click.argument("domain2", type=str, required=False)
@click.option(
    "--check-certificate",
    "cert_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Re-validate a serialized certificate instead of computing a new one.",
)
@common_options
def cmd_bm_check(k, domain1, domain2, cert_path, fmt, verify, grid, tol, seed, jobs):
    """Compare sqrt(c_k(E1+E2)) against sqrt(c_k(E1)) + sqrt(c_k(E2))."""
    if cert_path is not None:
        with open(cert_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        try:
            cert = BMCertificate.from_dict(data)
        except (KeyError, ValueError) as exc:
            raise click.ClickException(f"bad certificate file: {exc}") from None
        ok = verify_certificate(cert)
        click.echo(json.dumps({"file": cert_path, "valid": ok}))
        if not ok:
            sys.exit(1)
        return
    if k is None or domain1 is None or domain2 is None:
        raise click.ClickException("usage: bm-check K DOMAIN1 DOMAIN2 (or --check-certificate FILE)")
    _check_k(k)
    e1 = _require_ellipsoid(_parse_domain_arg(domain1), "domain1")
    e2 = _require_ellipsoid(_parse_domain_arg(domain2), "domain2")
    pair = EllipsoidPair.normalized(e1, e2)
    cert = bm_check(k, pair)
    if verify and not pair.proportional:
        cfg = OracleConfig(grid=grid, tol=tol)
        from .domains import IndexVector

        numeric = min(support_norm_numeric(IndexVector(v1, k - v1), pair, cfg) for v1 in range(min(k, _FULL_NUMERIC_K) + 1))
        if _relative_gap(float(cert.c_sum), numeric) > tol:
            raise click.ClickException(f"verification failed: numeric {numeric!r} vs exact {float(cert.c_sum)!r}")
    _emit_certificate(cert, fmt)


@main.command("reproduce")
@click.argument("k_max", type=int)
@common_options
def cmd_reproduce(k_max, fmt, verify, grid, tol, seed, jobs):
    """One violating certificate for every k in 2..K_MAX.

    Even k uses the pair (E(1+1/k,1), E(1,1+1/k)); odd k uses
    (E(1,1), E(1-1/k,1)).  Exits nonzero if any k fails to violate or to
    match its closed form.
    """
    _check_k(k_max)
    jobs = jobs or _default_jobs()
    try:
        rows = reproduce_theorem(k_max, jobs=jobs)
    except ReproductionError as exc:
        click.echo(f"reproduction FAILED: {exc}", err=True)
        sys.exit(3)
    if verify:
        cfg = OracleConfig(grid=grid, tol=tol)
        for row in rows:
            pair = EllipsoidPair.normalized(row.certificate.domain1, row.certificate.domain2)
            _, argmin = sum_capacity_with_argmin(row.k, pair)
            numeric = support_norm_numeric(argmin, pair, cfg)
            if _relative_gap(float(row.certificate.c_sum), numeric) > tol:
                click.echo(f"reproduction FAILED: oracle disagrees at k={row.k}", err=True)
                sys.exit(3)
    table = [
        {
            "k": row.k,
            "family": row.family,
            "c_sum": format_rational(row.certificate.c_sum.coeff),
            "c1": format_rational(row.certificate.c_1.coeff),
            "c2": format_rational(row.certificate.c_2.coeff),
            "verdict": str(row.certificate.verdict),
        }
        for row in rows
    ]
    if fmt == "json":
        click.echo(json.dumps(table, indent=2))
    elif fmt == "csv":
        click.echo(_emit_csv(["k", "family", "c_sum", "c1", "c2", "verdict"], table))
    else:
        for r in table:
            click.echo(
                f"k={r['k']:>4} {r['family']:<5} c_sum={r['c_sum']:<14} "
                f"c1={r['c1']:<10} c2={r['c2']:<10} {r['verdict']}"
            )
        click.echo(f"all {len(table)} indices violate the inequality")


@main.command("omega")
@click.argument("domain1", type=str)
@click.argument("domain2", type=str)
@click.option("--samples", type=int, default=256, show_default=True, help="Number of psi intervals.")
@click.option("--out", type=str, default="-", show_default=True, help="Output path, '-' for stdout.")
@common_options
def cmd_omega(domain1, domain2, samples, out, fmt, verify, grid, tol, seed, jobs):
    """Boundary curve of the moment image of E1 + E2 as psi,x1,x2 data."""
    e1 = _require_ellipsoid(_parse_domain_arg(domain1), "domain1")
    e2 = _require_ellipsoid(_parse_domain_arg(domain2), "domain2")
    pair = EllipsoidPair.normalized(e1, e2)
    try:
        points = omega_curve(pair, samples)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    if fmt == "json":
        body = json.dumps([[p.psi, p.x1, p.x2] for p in points])
    else:
        lines = ["psi,x1,x2"] + [f"{p.psi!r},{p.x1!r},{p.x2!r}" for p in points]
        body = "\n".join(lines)
    if out == "-":
        click.echo(body)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
        click.echo(f"wrote {len(points)} points to {out}")


@main.command("mean-width")
@click.argument("domain", type=str)
@click.option("--samples", type=int, default=1_000_000, show_default=True, help="Monte Carlo sample count.")
@common_options
def cmd_mean_width(domain, samples, fmt, verify, grid, tol, seed, jobs):
    """Monte Carlo mean width of a 4-dimensional ellipsoid or polydisk."""
    dom = _parse_domain_arg(domain)
    try:
        est = mean_width_estimate(dom, samples, seed)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    payload = {
        "domain": format_domain(dom),
        "mean": est.mean,
        "stderr": est.stderr,
        "samples": est.samples,
        "seed": est.seed,
    }
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
    elif fmt == "csv":
        click.echo(_emit_csv(list(payload), [payload]))
    else:
        click.echo(
            f"M({payload['domain']}) = {est.mean:.9g} +- {est.stderr:.3g} "
            f"({est.samples} samples, seed {est.seed})"
        )


@main.command("criterion")
@click.argument("k_range", type=str)
@common_options
def cmd_criterion(k_range, fmt, verify, grid, tol, seed, jobs):
    """Mean-width violation criterion k/floor((k+1)/2) > 16/9 over a k range.

    K_RANGE is 'k' or 'lo..hi'.
    """
    ks = _parse_krange(k_range)
    rows = []
    for k in ks:
        rep = ostrover_criterion(k)
        rows.append(
            {
                "k": k,
                "violating": rep.violating,
                "lhs": format_rational(rep.lhs),
                "rhs": format_rational(rep.rhs),
                "c_polydisk": format_rational(rep.c_polydisk.coeff),
                "c_ball": format_rational(rep.c_ball.coeff),
            }
        )
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
    elif fmt == "csv":
        click.echo(_emit_csv(["k", "violating", "lhs", "rhs", "c_polydisk", "c_ball"], rows))
    else:
        for r in rows:
            mark = "violating" if r["violating"] else "inconclusive"
            click.echo(f"k={r['k']:>3}: {mark:<13} ({r['lhs']} vs {r['rhs']})")


def _height_bounded_rationals(bound: int) -> list[Fraction]:
    values = {Fraction(p, q) for p in range(1, bound + 1) for q in range(1, bound + 1)}
    return sorted(values)


@main.command("search")
@click.argument("bound", type=int)
@click.argument("k_range", type=str)
@common_options
def cmd_search(bound, k_range, fmt, verify, grid, tol, seed, jobs):
    """Exhaustive sweep for violations over rational radii p/q with p,q <= BOUND.

    Enumerates all unordered ellipsoid pairs with such radii and every k in
    K_RANGE, reporting the violating certificates.  The pair count grows
    like the fourth power of the number of admissible radii, so keep BOUND
    small.
    """
    if bound < 1:
        raise click.ClickException(f"bound must be >= 1, got {bound}")
    ks = _parse_krange(k_range)
    jobs = jobs or _default_jobs()
    radii = _height_bounded_rationals(bound)
    ellipsoids = [Ellipsoid(a, b) for a in radii for b in radii]
    tasks = []
    for i, e1 in enumerate(ellipsoids):
        for e2 in ellipsoids[i:]:
            pair = EllipsoidPair.normalized(e1, e2)
            for k in ks:
                tasks.append((k, pair))

    def run(task):
        k, pair = task
        return bm_check(k, pair)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            certs = list(pool.map(run, tasks))
    else:
        certs = [run(t) for t in tasks]
    violating = [c for c in certs if c.verdict is Verdict.VIOLATES]
    if fmt == "json":
        click.echo(json.dumps([c.to_dict() for c in violating], indent=2))
    elif fmt == "csv":
        click.echo(_emit_csv(["k", "domain1", "domain2", "c_sum", "c1", "c2", "verdict"], _certificate_rows(violating)))
    else:
        for c in violating:
            click.echo(
                f"k={c.k} {format_domain(c.domain1)} + {format_domain(c.domain2)}: "
                f"c_sum={c.c_sum} c1={c.c_1} c2={c.c_2} margin={c.margin():.6g}"
            )
        click.echo(f"{len(violating)} violating certificates among {len(tasks)} checks")


if __name__ == "__main__":
    main()
