"""Batch command-line front end emitting deterministic verification reports.

Commands
--------
* ``algebra-check``   exact closure, Casimir, and conjugate-ladder relations
* ``kernel``          kernel polynomials of the raising operator at one degree
* ``coherent``        displacement-series coefficients and closed-form checks
* ``scatter-verify``  finite-difference eigenvalue residuals, scattering model
* ``bound-verify``    finite-difference ladder residuals, confined model

Reports are JSON by default (byte-stable for a fixed config and seed), with
CSV and plain-text alternatives.  Exit codes: 0 all checks passed, 1 at least
one check failed, 2 configuration error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .coherent import build_coherent_series, coefficient_closed_form, recurrence_residual
from .exactcore import Poly, even_sym_basis, sym_basis
from .grammar import format_scalar, poly_to_text
from .kernels import kernel_basis
from .numerics import (
    FDScheme,
    bessel_closed_form_check,
    eigen_residual_bound,
    eigen_residual_scattering,
    sample_chamber_points,
)
from .operators import Model, ModelParams, apply_cartan, apply_raising
from .su11 import (
    Ordering,
    RadialTower,
    casimir_apply,
    casimir_scalar,
    closure_residuals,
    conjugate_defining_residual,
    conjugate_ladder_residual,
)

SEED_ENV_VAR = "CALKIT_SEED"


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass(frozen=True)
class VerificationReport:
    name: str
    params: dict
    residual: float | int | str
    tolerance: float | int
    passed: bool

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class ReportEnvelope:
    version: str
    config: dict
    checks: list[VerificationReport] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    timestamp: str | None = None  # left unset: reports must be byte-stable

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, report: VerificationReport) -> None:
        self.checks.append(report)

    def to_obj(self) -> dict:
        ordered = sorted(
            self.checks, key=lambda c: (c.name, json.dumps(c.params, sort_keys=True))
        )
        obj = {
            "version": self.version,
            "config": self.config,
            "checks": [c.to_obj() for c in ordered],
            "artifacts": self.artifacts,
            "pass": self.passed,
        }
        if self.timestamp is not None:
            obj["timestamp"] = self.timestamp
        return obj


def exact_check(name: str, params: dict, residual_terms: int) -> VerificationReport:
    """A symbolic identity check; the residual is a term count and must be 0."""
    return VerificationReport(name, params, residual_terms, 0, residual_terms == 0)


def residual_check(report) -> VerificationReport:
    return VerificationReport(
        report.check_name, report.params, report.max_relative_error,
        report.tolerance, report.passed,
    )


# -- configuration ---------------------------------------------------------------

_DEFAULTS = {
    "model": "an",
    "n": 2,
    "alpha": Fraction(2),
    "lam": Fraction(1),
    "lam1": Fraction(1),
    "order": None,
    "seed": 42,
    "tol_fd": 1e-6,
    "tol_sf": 1e-10,
    "delta": 0.2,
    "points": 20,
    "polys": 5,
    "fd_order": 4,
    "format": "json",
    "out": None,
    "bn_pair": "doubled",
}

_PER_COMMAND_M = {
    "algebra-check": [0, 1, 2],
    "kernel": [0, 1, 2],
    "coherent": [0],
    "scatter-verify": [0, 1],
    "bound-verify": [0, 1, 2, 3],
}

_PER_COMMAND_ORDER = {"coherent": 10, "scatter-verify": 30}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run settings; validated before any computation."""

    command: str
    model: str
    n: int
    alpha: Fraction
    lam: Fraction
    lam1: Fraction
    m_list: tuple[int, ...]
    ksq_list: tuple[Fraction, ...]
    order: int
    seed: int
    tol_fd: float
    tol_sf: float
    delta: float
    points: int
    polys: int
    fd_order: int
    format: str
    out: str | None
    bn_pair: str
    include_bn: bool
    explicit_grid: bool

    def validate(self) -> None:
        if self.model not in ("an", "bn"):
            raise ConfigError(f"unknown model {self.model!r}; expected 'an' or 'bn'")
        if self.n < 1:
            raise ConfigError("particle number must be at least 1")
        if any(m < 0 for m in self.m_list):
            raise ConfigError("degrees must be non-negative")
        if self.order < 0:
            raise ConfigError("series order must be non-negative")
        if self.points < 1:
            raise ConfigError("need at least one sample point")
        if self.fd_order not in (2, 4):
            raise ConfigError("finite-difference order must be 2 or 4")
        if self.format not in ("json", "csv", "text"):
            raise ConfigError(f"unknown output format {self.format!r}")
        if self.bn_pair not in ("doubled", "single"):
            raise ConfigError("pair coefficient convention must be 'doubled' or 'single'")
        if not 0 < self.delta < 3.0:
            raise ConfigError("delta must lie in (0, 3)")

    def model_params(self, n: int | None = None, alpha: Fraction | None = None) -> ModelParams:
        if self.model == "an":
            return ModelParams.linear(n or self.n, alpha if alpha is not None else self.alpha)
        return ModelParams.reflection(
            n or self.n, self.lam, self.lam1, pair_doubled=self.bn_pair == "doubled"
        )

    def bn_params(self) -> ModelParams:
        return ModelParams.reflection(
            self.n, self.lam, self.lam1, pair_doubled=self.bn_pair == "doubled"
        )

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "model": self.model,
            "n": self.n,
            "alpha": str(self.alpha),
            "lambda": str(self.lam),
            "lambda1": str(self.lam1),
            "m": list(self.m_list),
            "ksq": [str(k) for k in self.ksq_list],
            "order": self.order,
            "seed": self.seed,
            "tol_fd": self.tol_fd,
            "tol_sf": self.tol_sf,
            "delta": self.delta,
            "points": self.points,
            "polys": self.polys,
            "fd_order": self.fd_order,
            "format": self.format,
            "out": self.out,
            "bn_pair_coefficient": self.bn_pair,
            "include_bn": self.include_bn,
        }


def _parse_fraction(text: str, name: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{name}: {text!r} is not an exact rational (use p/q)") from exc


def _parse_int_list(text: str, name: str) -> list[int]:
    try:
        return [int(part) for part in str(text).split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{name}: {text!r} is not a comma-separated integer list") from exc


def _parse_fraction_list(text: str, name: str) -> list[Fraction]:
    return [_parse_fraction(part, name) for part in str(text).split(",") if part.strip() != ""]


def load_config_file(path: str) -> dict:
    """Flat key=value file mirroring the flags; '#' starts a comment."""
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, value = line.split("=", 1)
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="calkit",
        description="Exact and numeric verification of singular-oscillator operator identities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("algebra-check", "exact algebra closure and conjugate-ladder checks"),
        ("kernel", "kernel polynomials of the raising operator"),
        ("coherent", "displacement-series coefficients and closed form"),
        ("scatter-verify", "finite-difference scattering eigenvalue residuals"),
        ("bound-verify", "finite-difference confined-spectrum residuals"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="flat key=value config file; flags override it")
        cmd.add_argument("--model", choices=("an", "bn"))
        cmd.add_argument("--n", type=int)
        cmd.add_argument("--alpha", metavar="P/Q")
        cmd.add_argument("--lambda", dest="lam", metavar="P/Q")
        cmd.add_argument("--lambda1", dest="lam1", metavar="P/Q")
        cmd.add_argument("--m", help="comma-separated degrees")
        cmd.add_argument("--ksq", help="comma-separated exact momenta squared")
        cmd.add_argument("--order", type=int, help="series truncation order")
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--tol-fd", dest="tol_fd", type=float)
        cmd.add_argument("--tol-sf", dest="tol_sf", type=float)
        cmd.add_argument("--delta", type=float)
        cmd.add_argument("--points", type=int)
        cmd.add_argument("--polys", type=int, help="random polynomials per parameter combination")
        cmd.add_argument("--fd-order", dest="fd_order", type=int, choices=(2, 4))
        cmd.add_argument("--format", choices=("json", "csv", "text"))
        cmd.add_argument("--out", help="output path (default: stdout)")
        cmd.add_argument(
            "--bn-pair-coefficient", dest="bn_pair", choices=("doubled", "single"),
            help="reflection-family pair normalization (single is a broken control)",
        )
        if name == "algebra-check":
            cmd.add_argument("--bn", action="store_true", dest="include_bn",
                             help="also run the reflection-family suite")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(key: str, default):
        user = getattr(args, key, None)
        if user is not None:
            return user, True
        if key in file_values:
            return file_values[key], True
        return default, False

    command = args.command
    model, _ = pick("model", _DEFAULTS["model"])
    n_raw, n_explicit = pick("n", _DEFAULTS["n"])
    alpha_raw, alpha_explicit = pick("alpha", _DEFAULTS["alpha"])
    lam_raw, _ = pick("lam", _DEFAULTS["lam"])
    lam1_raw, _ = pick("lam1", _DEFAULTS["lam1"])
    m_raw, _ = pick("m", ",".join(str(m) for m in _PER_COMMAND_M[command]))
    ksq_raw, _ = pick("ksq", "1")
    order_raw, _ = pick("order", _PER_COMMAND_ORDER.get(command, 30))
    seed_raw, seed_explicit = pick("seed", _DEFAULTS["seed"])
    if not seed_explicit and SEED_ENV_VAR in os.environ:
        seed_raw = os.environ[SEED_ENV_VAR]
    tol_fd_raw, _ = pick("tol_fd", _DEFAULTS["tol_fd"])
    tol_sf_raw, _ = pick("tol_sf", _DEFAULTS["tol_sf"])
    delta_raw, _ = pick("delta", _DEFAULTS["delta"])
    points_raw, _ = pick("points", _DEFAULTS["points"])
    polys_raw, _ = pick("polys", _DEFAULTS["polys"])
    fd_order_raw, _ = pick("fd_order", _DEFAULTS["fd_order"])
    fmt, _ = pick("format", _DEFAULTS["format"])
    out, _ = pick("out", _DEFAULTS["out"])
    bn_pair, _ = pick("bn_pair", _DEFAULTS["bn_pair"])
    include_bn = bool(getattr(args, "include_bn", False) or
                      file_values.get("bn", "").lower() in ("1", "true", "yes"))

    try:
        config = RunConfig(
            command=command,
            model=str(model),
            n=int(n_raw),
            alpha=_parse_fraction(alpha_raw, "--alpha"),
            lam=_parse_fraction(lam_raw, "--lambda"),
            lam1=_parse_fraction(lam1_raw, "--lambda1"),
            m_list=tuple(_parse_int_list(m_raw, "--m")),
            ksq_list=tuple(_parse_fraction_list(ksq_raw, "--ksq")),
            order=int(order_raw),
            seed=int(seed_raw),
            tol_fd=float(tol_fd_raw),
            tol_sf=float(tol_sf_raw),
            delta=float(delta_raw),
            points=int(points_raw),
            polys=int(polys_raw),
            fd_order=int(fd_order_raw),
            format=str(fmt),
            out=out if out in (None, "") or isinstance(out, str) else str(out),
            bn_pair=str(bn_pair),
            include_bn=include_bn,
            explicit_grid=n_explicit or alpha_explicit,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    config.validate()
    return config


# -- random polynomial suites ---------------------------------------------------


def random_symmetric_poly(rng, params: ModelParams, max_degree: int) -> Poly:
    """Seeded random element of the (even-)symmetric polynomial algebra."""
    if params.model is Model.AN:
        degree_pool = list(range(max_degree + 1))
        basis_of = lambda d: sym_basis(params.n, d)
    else:
        degree_pool = list(range(0, max_degree + 1, 2))
        basis_of = lambda d: even_sym_basis(params.n, d)
    while True:
        poly = Poly.zero(params.n)
        for _ in range(rng.randint(1, 3)):
            degree = rng.choice(degree_pool)
            for b in basis_of(degree):
                coeff = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
                poly = poly + b * coeff
        if not poly.is_zero():
            return poly


# -- commands ---------------------------------------------------------------------


def _algebra_suite(envelope: ReportEnvelope, params: ModelParams, cfg: RunConfig, rng) -> None:
    tag = params.describe()
    polys = [random_symmetric_poly(rng, params, 6) for _ in range(cfg.polys)]
    closure_terms: dict[str, int] = {}
    ordering_terms = 0
    for p in polys:
        for name, residual in closure_residuals(params, p).items():
            closure_terms[name] = closure_terms.get(name, 0) + len(residual)
        ordering_terms += len(
            casimir_apply(params, p, Ordering.MINUS_PLUS)
            - casimir_apply(params, p, Ordering.PLUS_MINUS)
        )
    for name, terms in sorted(closure_terms.items()):
        envelope.add(exact_check(f"closure:{name}", {**tag, "polys": cfg.polys}, terms))
    envelope.add(exact_check("casimir_ordering_equality", {**tag, "polys": cfg.polys},
                             ordering_terms))

    # tower checks over the kernel polynomials of each requested degree
    for m in cfg.m_list:
        basis = kernel_basis(params, m)
        for idx, base in enumerate(basis.basis):
            tower = RadialTower.single(params, base)
            scalar = casimir_scalar(params, m)
            tower_terms = 0
            for n in range(0, 4):
                state = RadialTower.single(params, base, n).materialize()
                tower_terms += len(casimir_apply(params, state) - state * scalar)
            envelope.add(exact_check(
                "casimir_tower_scalar", {**tag, "m": m, "basis_index": idx, "n_max": 3},
                tower_terms,
            ))
            ladder_terms = sum(len(r) for r in conjugate_ladder_residual(tower, 3))
            envelope.add(exact_check(
                "conjugate_ladder_unit", {**tag, "m": m, "basis_index": idx, "n_max": 3},
                ladder_terms,
            ))
            defects = sum(
                1 for n in range(0, 4) if conjugate_defining_residual(params, m, n) != 0
            )
            envelope.add(exact_check(
                "conjugate_defining_relation", {**tag, "m": m, "basis_index": idx, "n_max": 3},
                defects,
            ))


def cmd_algebra_check(cfg: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(__version__, cfg.to_dict())
    rng = random.Random(cfg.seed)
    if cfg.model == "an":
        if cfg.explicit_grid:
            grid = [(cfg.n, cfg.alpha)]
        else:
            grid = [(n, a) for n in (2, 3) for a in (Fraction(1, 2), Fraction(2))]
        for n, alpha in grid:
            _algebra_suite(envelope, ModelParams.linear(n, alpha), cfg, rng)
        if cfg.include_bn:
            _algebra_suite(envelope, cfg.bn_params(), cfg, rng)
    else:
        _algebra_suite(envelope, cfg.model_params(), cfg, rng)
    return envelope


def cmd_kernel(cfg: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(__version__, cfg.to_dict())
    artifacts: dict = {"kernels": []}
    for m in cfg.m_list:
        params = cfg.model_params()
        basis = kernel_basis(params, m)
        entry = {
            "m": m,
            "dimension": basis.dimension,
            "basis": [poly_to_text(p) for p in basis.basis],
        }
        artifacts["kernels"].append(entry)
        reverify_terms = sum(len(apply_raising(params, p)) for p in basis.basis)
        envelope.add(exact_check(
            "kernel_reverify", {**params.describe(), "m": m, "dimension": basis.dimension},
            reverify_terms,
        ))
    envelope.artifacts = artifacts
    return envelope


def cmd_coherent(cfg: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(__version__, cfg.to_dict())
    params = cfg.model_params()
    artifacts: dict = {"series": []}
    for m in cfg.m_list:
        basis = kernel_basis(params, m)
        if basis.dimension == 0:
            raise ConfigError(f"no kernel polynomial at degree {m} for these parameters")
        base = basis.basis[0]
        for ksq in cfg.ksq_list:
            series = build_coherent_series(params, base, ksq, cfg.order)
            residual_terms = sum(len(r) for r in recurrence_residual(params, series))
            check_params = {**params.describe(), "m": m, "k_squared": str(ksq),
                            "order": cfg.order}
            envelope.add(exact_check("coherent_recurrence", check_params, residual_terms))
            ratio_defects = sum(
                1 for n in range(cfg.order + 1)
                if series.coefficient(n) != coefficient_closed_form(series.nu, Fraction(ksq), n)
            )
            envelope.add(exact_check("coefficient_ratio_law", check_params, ratio_defects))
            points = sample_chamber_points(params, min(cfg.points, 8), cfg.seed,
                                           delta=cfg.delta)
            report = bessel_closed_form_check(params, series, points, cfg.tol_sf)
            envelope.add(residual_check(report))
            artifacts["series"].append({
                "m": m,
                "k_squared": str(ksq),
                "nu": format_scalar(series.nu),
                "coefficients": [[n, format_scalar(c)] for n, c in series.coefficients()],
            })
    envelope.artifacts = artifacts
    csv_rows = [
        ["m", "k_squared", "n", "coefficient"],
    ]
    for entry in artifacts["series"]:
        for n, c in entry["coefficients"]:
            csv_rows.append([entry["m"], entry["k_squared"], n, c])
    envelope.artifacts["csv_rows"] = csv_rows
    return envelope


def cmd_scatter_verify(cfg: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(__version__, cfg.to_dict())
    params = cfg.model_params()
    scheme = FDScheme(order=cfg.fd_order)
    points = sample_chamber_points(params, cfg.points, cfg.seed, delta=cfg.delta)
    for m in cfg.m_list:
        basis = kernel_basis(params, m)
        if basis.dimension == 0:
            raise ConfigError(f"no kernel polynomial at degree {m} for these parameters")
        base = basis.basis[0]
        for ksq in cfg.ksq_list:
            series = build_coherent_series(params, base, ksq, cfg.order)
            report = eigen_residual_scattering(
                params, series, ksq, points, scheme, cfg.tol_fd,
            )
            merged = dict(report.params)
            merged.update({"m": m, "order": cfg.order, "seed": cfg.seed})
            envelope.add(VerificationReport(
                report.check_name, merged, report.max_relative_error,
                report.tolerance, report.passed,
            ))
    return envelope


def cmd_bound_verify(cfg: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(__version__, cfg.to_dict())
    params = cfg.model_params()
    scheme = FDScheme(order=cfg.fd_order)
    points = sample_chamber_points(params, cfg.points, cfg.seed, delta=cfg.delta)

    # exact-layer ground energy: the diagonal generator on the constant state
    one = Poly.const(params.n, 1)
    expected = one * (-Fraction(params.ground_energy, 2))
    envelope.add(exact_check(
        "ground_energy_exact",
        {**params.describe(), "ground_energy": str(params.ground_energy)},
        len(apply_cartan(params, one) - expected),
    ))

    for m in cfg.m_list:
        if params.model is Model.BN and m % 2:
            continue  # reflection family lives in the even sector
        seeds = sym_basis(params.n, m) if params.model is Model.AN else even_sym_basis(params.n, m)
        if not seeds:
            continue
        q = seeds[0]
        report = eigen_residual_bound(params, q, points, scheme, cfg.tol_fd)
        merged = dict(report.params)
        merged.update({"seed": cfg.seed, "seed_poly": poly_to_text(q)})
        envelope.add(VerificationReport(
            report.check_name, merged, report.max_relative_error,
            report.tolerance, report.passed,
        ))
    return envelope


COMMANDS = {
    "algebra-check": cmd_algebra_check,
    "kernel": cmd_kernel,
    "coherent": cmd_coherent,
    "scatter-verify": cmd_scatter_verify,
    "bound-verify": cmd_bound_verify,
}


# -- emission ----------------------------------------------------------------------


def envelope_to_json_bytes(envelope: ReportEnvelope) -> bytes:
    text = json.dumps(envelope.to_obj(), sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def envelope_to_csv(envelope: ReportEnvelope) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    rows = envelope.artifacts.get("csv_rows")
    if rows:
        for row in rows:
            writer.writerow(row)
    else:
        writer.writerow(["name", "residual", "tolerance", "pass", "params"])
        ordered = sorted(
            envelope.checks, key=lambda c: (c.name, json.dumps(c.params, sort_keys=True))
        )
        for check in ordered:
            writer.writerow([
                check.name, check.residual, check.tolerance, check.passed,
                json.dumps(check.params, sort_keys=True),
            ])
    return buffer.getvalue()


def envelope_to_text(envelope: ReportEnvelope) -> str:
    lines = [f"calkit {envelope.version}"]
    ordered = sorted(
        envelope.checks, key=lambda c: (c.name, json.dumps(c.params, sort_keys=True))
    )
    for check in ordered:
        status = "PASS" if check.passed else "FAIL"
        lines.append(
            f"{status}  {check.name}  residual={check.residual}"
            f"  tolerance={check.tolerance}  {json.dumps(check.params, sort_keys=True)}"
        )
    lines.append("overall: " + ("PASS" if envelope.passed else "FAIL"))
    return "\n".join(lines) + "\n"


def emit(envelope: ReportEnvelope, cfg: RunConfig) -> None:
    if cfg.format == "json":
        payload = envelope_to_json_bytes(envelope)
    elif cfg.format == "csv":
        payload = envelope_to_csv(envelope).encode("utf-8")
    else:
        payload = envelope_to_text(envelope).encode("utf-8")
    if cfg.out:
        with open(cfg.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        envelope = COMMANDS[cfg.command](cfg)
        emit(envelope, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary of the tool
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0 if envelope.passed else 1


if __name__ == "__main__":
    sys.exit(main())
