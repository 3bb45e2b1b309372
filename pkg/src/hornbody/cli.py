"""Command line interface.

Subcommands: ``triples``, ``check-product``, ``body-member``,
``body-sample``, ``realize``, ``vn-member``, ``discretize``,
``export-slice``.  Payload arguments accept either inline JSON or a path to
a JSON file.

Exit codes: 0 = success / pass, 1 = mathematical failure (violated
inequalities, non-member target, non-converged search), 2 = usage or input
error, 3 = numerical failure.  Randomized commands echo the seed they used.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import serialize
from .body import (
    BodySpec,
    NonMemberTargetError,
    membership,
    realize as realize_search,
    sample_body,
)
from .combinatorics import CatalogCapacityError, enumerate_catalog
from .reports import default_log_tol
from .spectra import NumericalError, _spectrum_vector, product_inequality_check
from .stepfn import discretize as discretize_step

MAX_SEED = 2**64 - 1

N2_BOUNDARY_POINTS = 101
N3_BOUNDARY_LEVELS = 15
_BISECT_STEPS = 80


class CliInputError(ValueError):
    """Bad payload, flag, or file on the command line."""


@dataclass
class CommandConfig:
    """Parsed invocation: the subcommand, its raw payload arguments (inline
    JSON or file paths), and the shared knobs."""

    command: str
    payloads: dict[str, str] = field(default_factory=dict)
    seed: int = 0
    tol: Optional[float] = None
    out: Optional[str] = None
    fmt: str = "json"
    options: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# payload handling
# ---------------------------------------------------------------------------


def _load_payload(text: str):
    """Inline JSON if it parses, otherwise the contents of a JSON file."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    path = Path(text)
    if path.exists():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise CliInputError(f"file {text!r} does not contain valid JSON: {exc}")
    raise CliInputError(f"{text!r} is neither inline JSON nor an existing file")


def _spectrum_arg(cfg: CommandConfig, key: str) -> np.ndarray:
    vec = serialize.spectrum_from_json(_load_payload(cfg.payloads[key]))
    return _spectrum_vector(key, vec)


def _matrix_arg(cfg: CommandConfig, key: str) -> np.ndarray:
    return serialize.matrix_from_json(_load_payload(cfg.payloads[key]))


def _step_arg(cfg: CommandConfig, key: str):
    return serialize.step_function_from_json(_load_payload(cfg.payloads[key]))


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit_json(obj, out: Optional[str]) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", out)


def _check_seed(seed: int) -> int:
    if not 0 <= seed <= MAX_SEED:
        raise CliInputError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def _check_tol(tol: Optional[float]) -> Optional[float]:
    if tol is not None and not tol > 0:
        raise CliInputError(f"tolerance must be positive, got {tol}")
    return tol


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_triples(cfg: CommandConfig) -> int:
    catalog = enumerate_catalog(cfg.options["n"], cache_dir=cfg.options.get("cache_dir"))
    _emit_json(catalog.to_json(), cfg.out)
    return 0


def _cmd_check_product(cfg: CommandConfig) -> int:
    a = _matrix_arg(cfg, "a")
    b = _matrix_arg(cfg, "b")
    if a.shape != b.shape:
        raise CliInputError(f"matrix shapes differ: {a.shape} vs {b.shape}")
    catalog = enumerate_catalog(a.shape[0])
    report = product_inequality_check(a, b, catalog, _check_tol(cfg.tol))
    _emit_json(serialize.report_to_json(report), cfg.out)
    return 0 if report.passed else 1


def _cmd_body_member(cfg: CommandConfig) -> int:
    lam = _spectrum_arg(cfg, "lam")
    mu = _spectrum_arg(cfg, "mu")
    nu = _spectrum_arg(cfg, "nu")
    spec = BodySpec.create(lam, mu)
    report = membership(spec, nu, _check_tol(cfg.tol))
    _emit_json(serialize.report_to_json(report), cfg.out)
    return 0 if report.passed else 1


def _cmd_body_sample(cfg: CommandConfig) -> int:
    lam = _spectrum_arg(cfg, "lam")
    mu = _spectrum_arg(cfg, "mu")
    count = cfg.options["count"]
    if count < 1:
        raise CliInputError("count must be positive")
    seed = _check_seed(cfg.seed)
    spec = BodySpec.create(lam, mu)
    samples = sample_body(spec, count, seed)
    if cfg.fmt == "csv":
        lines = [_csv_header_comment("body-sample", seed, lam, mu)]
        lines.append(",".join(f"nu{k + 1}" for k in range(spec.n)))
        for row in samples:
            lines.append(",".join(repr(float(x)) for x in row))
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        _emit_json(
            {
                "seed": seed,
                "lam": serialize.spectrum_to_json(lam),
                "mu": serialize.spectrum_to_json(mu),
                "samples": [serialize.spectrum_to_json(row) for row in samples],
            },
            cfg.out,
        )
    return 0


def _cmd_realize(cfg: CommandConfig) -> int:
    lam = _spectrum_arg(cfg, "lam")
    mu = _spectrum_arg(cfg, "mu")
    nu = _spectrum_arg(cfg, "nu")
    seed = _check_seed(cfg.seed)
    budget = cfg.options["budget"]
    if budget < 1:
        raise CliInputError("budget must be positive")
    spec = BodySpec.create(lam, mu)
    tol = _check_tol(cfg.tol)
    result = realize_search(
        spec,
        nu,
        tol=1e-6 if tol is None else tol,
        budget=budget,
        seed=seed,
        restarts=cfg.options.get("restarts", 8),
    )
    _emit_json(
        {
            "seed": seed,
            "converged": result.converged,
            "residual": result.residual,
            "iterations": result.iterations,
            "restarts": result.restarts,
            "achieved": serialize.spectrum_to_json(result.achieved),
            "unitary": serialize.matrix_to_json(result.unitary),
        },
        cfg.out,
    )
    return 0 if result.converged else 1


def _cmd_vn_member(cfg: CommandConfig) -> int:
    from .stepfn import vn_membership

    f = _step_arg(cfg, "f")
    g = _step_arg(cfg, "g")
    h = _step_arg(cfg, "h")
    max_n = cfg.options["max_n"]
    report = vn_membership(f, g, h, max_n=max_n, tol=_check_tol(cfg.tol))
    _emit_json(serialize.report_to_json(report), cfg.out)
    return 0 if report.passed else 1


def _cmd_discretize(cfg: CommandConfig) -> int:
    f = _step_arg(cfg, "f")
    n = cfg.options["n"]
    if n < 1:
        raise CliInputError("n must be positive")
    _emit_json(serialize.spectrum_to_json(discretize_step(f, n)), cfg.out)
    return 0


def _is_member(spec: BodySpec, nu: Sequence[float], tol: Optional[float]) -> bool:
    """Membership that treats malformed candidates (wrong ordering) as
    outside the body instead of raising."""
    arr = np.asarray(nu, dtype=float)
    if np.any(arr < 0) or np.any(arr[:-1] < arr[1:]):
        return False
    return membership(spec, arr, tol).passed


def _bisect_edge(member_fn, t_member: float, t_outside: float) -> float:
    """Edge of the member interval between a member and a non-member point."""
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (t_member + t_outside)
        if mid == t_member or mid == t_outside:
            break
        if member_fn(mid):
            t_member = mid
        else:
            t_outside = mid
    return t_member


def _boundary_curve_2(spec: BodySpec) -> np.ndarray:
    """Boundary of the n = 2 body along the fixed-determinant curve,
    endpoints located by bisection on the first component."""
    lam, mu = spec.lam, spec.mu
    det = lam[0] * lam[1] * mu[0] * mu[1]
    hi = lam[0] * mu[0]
    if hi == 0.0:
        return np.asarray([[0.0, 0.0]])

    def nu_of(t: float) -> tuple[float, float]:
        return (t, det / t if det > 0 else 0.0)

    def member(t: float) -> bool:
        return t > 0 and _is_member(spec, nu_of(t), None)

    lo = math.sqrt(det) if det > 0 else hi * 1e-12
    grid = np.geomspace(lo, hi, 129) if det > 0 else np.linspace(lo, hi, 129)
    flags = [member(t) for t in grid]
    if not any(flags):
        return np.empty((0, 2))
    first = flags.index(True)
    last = len(flags) - 1 - flags[::-1].index(True)
    t_min = grid[first]
    if first > 0:
        t_min = _bisect_edge(member, grid[first], grid[first - 1])
    elif det == 0.0 and member(0.0):
        t_min = 0.0
    t_max = grid[last]
    if last < len(grid) - 1:
        t_max = _bisect_edge(member, grid[last], grid[last + 1])
    if det > 0:
        ts = np.geomspace(t_min, t_max, N2_BOUNDARY_POINTS)
    else:
        ts = np.linspace(t_min, t_max, N2_BOUNDARY_POINTS)
    return np.asarray([nu_of(float(t)) for t in ts])


def _boundary_slice_3(spec: BodySpec, samples: np.ndarray) -> np.ndarray:
    """For n = 3, the extreme first components over a grid of second
    components, on the fixed-determinant slice (third component solved from
    the determinant, or zero for a singular pair)."""
    lam, mu = spec.lam, spec.mu
    det = float(np.prod(lam) * np.prod(mu))
    hi = lam[0] * mu[0]
    if hi == 0.0 or samples.size == 0:
        return np.empty((0, 3))
    rows = []
    levels = np.quantile(samples[:, 1], np.linspace(0.05, 0.95, N3_BOUNDARY_LEVELS))
    for nu2 in levels:
        if nu2 <= 0 and det > 0:
            continue

        def nu_of(t: float) -> tuple[float, float, float]:
            nu3 = det / (t * nu2) if det > 0 else 0.0
            return (t, float(nu2), nu3)

        def member(t: float) -> bool:
            return t > 0 and _is_member(spec, nu_of(t), None)

        lo = max(float(nu2), math.sqrt(det / nu2) if det > 0 else 0.0)
        lo = max(lo, hi * 1e-12)
        grid = np.linspace(lo, hi, 65)
        flags = [member(t) for t in grid]
        if not any(flags):
            continue
        first = flags.index(True)
        last = len(flags) - 1 - flags[::-1].index(True)
        t_min = grid[first]
        if first > 0:
            t_min = _bisect_edge(member, grid[first], grid[first - 1])
        t_max = grid[last]
        if last < len(grid) - 1:
            t_max = _bisect_edge(member, grid[last], grid[last + 1])
        rows.append(nu_of(float(t_min)))
        if t_max > t_min:
            rows.append(nu_of(float(t_max)))
    return np.asarray(rows) if rows else np.empty((0, 3))


def _csv_header_comment(command: str, seed: int, lam, mu) -> str:
    lam_s = "[" + ",".join(repr(float(x)) for x in lam) + "]"
    mu_s = "[" + ",".join(repr(float(x)) for x in mu) + "]"
    return f"# {command} seed={seed} lam={lam_s} mu={mu_s}"


def _cmd_export_slice(cfg: CommandConfig) -> int:
    lam = _spectrum_arg(cfg, "lam")
    mu = _spectrum_arg(cfg, "mu")
    count = cfg.options["count"]
    if count < 1:
        raise CliInputError("count must be positive")
    seed = _check_seed(cfg.seed)
    spec = BodySpec.create(lam, mu)
    n = spec.n
    samples = sample_body(spec, count, seed)

    boundary = None
    notice = None
    if n == 2:
        boundary = _boundary_curve_2(spec)
    elif n == 3:
        boundary = _boundary_slice_3(spec, samples)
    else:
        notice = f"boundary tracing is unsupported for n > 3; emitting samples only"

    lines = [_csv_header_comment("export-slice", seed, lam, mu)]
    if notice:
        lines.append(f"# notice: {notice}")
    lines.append("kind," + ",".join(f"nu{k + 1}" for k in range(n)))
    for row in samples:
        lines.append("sample," + ",".join(repr(float(x)) for x in row))
    if boundary is not None:
        for row in boundary:
            lines.append("boundary," + ",".join(repr(float(x)) for x in row))
    _emit("\n".join(lines) + "\n", cfg.out)

    plot = cfg.options.get("plot")
    if plot:
        from .figures import render_slice_figure

        render_slice_figure(plot, samples, boundary, lam, mu)
    if notice:
        print(f"notice: {notice}", file=sys.stderr)
    return 0


_DISPATCH = {
    "triples": _cmd_triples,
    "check-product": _cmd_check_product,
    "body-member": _cmd_body_member,
    "body-sample": _cmd_body_sample,
    "realize": _cmd_realize,
    "vn-member": _cmd_vn_member,
    "discretize": _cmd_discretize,
    "export-slice": _cmd_export_slice,
}


def run(config: CommandConfig) -> int:
    """Execute a parsed command; returns the process exit status."""
    handler = _DISPATCH.get(config.command)
    if handler is None:
        raise CliInputError(f"unknown command {config.command!r}")
    return handler(config)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hornbody",
        description="Inequality catalogs and singular-spectrum bodies for operator products",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("triples", help="emit the triple catalog for size n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("check-product", help="check two matrices and their product")
    p.add_argument("--a", required=True, help="matrix (inline JSON or file)")
    p.add_argument("--b", required=True, help="matrix (inline JSON or file)")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("body-member", help="membership of a candidate spectrum")
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("body-sample", help="sample product spectra")
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)

    p = sub.add_parser("realize", help="search for a unitary achieving a spectrum")
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--budget", type=int, default=5000)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("vn-member", help="step-function membership, truncated")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--max-n", dest="max_n", type=int, default=6)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("discretize", help="geometric slot averages of a step function")
    p.add_argument("--f", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("export-slice", help="sampled spectra plus traced boundary, CSV")
    p.add_argument("--lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plot", default=None, help="also render a figure to this path")
    p.add_argument("--out", default=None)

    return parser


_PAYLOAD_KEYS = ("a", "b", "lam", "mu", "nu", "f", "g", "h")
_OPTION_KEYS = ("n", "count", "budget", "restarts", "max_n", "plot", "cache_dir")


def config_from_namespace(ns: argparse.Namespace) -> CommandConfig:
    values = vars(ns)
    payloads = {k: values[k] for k in _PAYLOAD_KEYS if values.get(k) is not None}
    options = {k: values[k] for k in _OPTION_KEYS if values.get(k) is not None}
    return CommandConfig(
        command=values["command"],
        payloads=payloads,
        seed=values.get("seed", 0),
        tol=values.get("tol"),
        out=values.get("out"),
        fmt=values.get("fmt", "json"),
        options=options,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    config = config_from_namespace(ns)
    try:
        return run(config)
    except NonMemberTargetError as exc:
        _emit_json(serialize.report_to_json(exc.report), config.out)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (CliInputError, CatalogCapacityError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
