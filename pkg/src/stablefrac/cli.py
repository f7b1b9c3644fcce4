"""Command-line interface.

Subcommands: ``constants``, ``invert``, ``simulate``, ``verify``. Settings are
taken from flags, then from ``--config FILE`` (JSON object keyed by option
name), then from built-in defaults. The merged settings are written into every
output. Exit codes: 0 success, 1 invalid input, 2 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from stablefrac import io
from stablefrac.errors import StableFracError
from stablefrac.fracops import GridFunction, SampleGrid, SpectralFunction, lizorkin_test, to_grid
from stablefrac.generator import (
    StableParams,
    apply_generator,
    generator_constants,
    inverse_constants,
    invert_generator,
)
from stablefrac.simulate import (
    default_bandwidth,
    level_grid,
    occupation_local_time,
    simulate_path,
)
from stablefrac.tanaka import classify, critical_beta, power_constants, tanaka_constants
from stablefrac.verify import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2

DEFAULTS = {
    "command": None,
    "suite": None,
    "alpha": 1.5,
    "c_minus": 1.0,
    "c_plus": 1.0,
    "gamma": None,
    "level": 0.0,
    "horizon": 1.0,
    "steps": 1000,
    "x0": 0.0,
    "n_paths": 10_000,
    "seed": DEFAULT_SEED,
    "bandwidth": None,
    "level_spacing": None,
    "method": "spectral",
    "format": None,
    "out": None,
    "input": None,
    "roundtrip": False,
    "forward": False,
}


class UsageError(StableFracError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default settings")
    p.add_argument("--alpha", type=float)
    p.add_argument("--c-minus", type=float)
    p.add_argument("--c-plus", type=float)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stablefrac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="tabulate the closed-form constants")
    _common(p)
    p.add_argument("--gamma", type=float, help="power exponent for k_minus/k_plus")

    p = sub.add_parser("invert", help="apply the inverse (or forward) generator to a function file")
    _common(p)
    p.add_argument("--input", help="function JSON (default: a built-in test function)")
    p.add_argument("--method", choices=("quadrature", "spectral"))
    p.add_argument("--forward", action="store_const", const=True)
    p.add_argument("--roundtrip", action="store_const", const=True)

    p = sub.add_parser("simulate", help="simulate one path and its occupation local time")
    _common(p)
    p.add_argument("--horizon", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--x0", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--level-spacing", type=float)
    p.add_argument("--level", type=float, help="level whose local time is reported")

    p = sub.add_parser("verify", help="run a verification suite")
    _common(p)
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--n-paths", "--n", dest="n_paths", type=int)
    p.add_argument("--seed", type=int)
    return parser


def effective_config(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in DEFAULTS.items()}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, val in loaded.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r}")
            cfg[key] = val
    for key, val in vars(args).items():
        if key in ("config",) or val is None:
            continue
        cfg[key] = val
    return cfg


def _params(cfg: dict) -> StableParams:
    return StableParams(cfg["alpha"], cfg["c_minus"], cfg["c_plus"])


def _emit(text: str, cfg: dict) -> None:
    if cfg["out"]:
        Path(cfg["out"]).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report(columns, rows, cfg, extra=None) -> None:
    meta = {k: v for k, v in cfg.items()}
    if (cfg["format"] or "csv") == "csv":
        _emit(io.dumps_csv(columns, rows, meta), cfg)
    else:
        payload = {"schema": io.SCHEMA, "config": meta, "rows": [dict(zip(columns, r)) for r in rows]}
        if extra:
            payload.update(extra)
        _emit(io.dumps_json(payload), cfg)


# -- commands ------------------------------------------------------------------


def cmd_constants(cfg: dict) -> int:
    p = _params(cfg)
    rows = []
    m = generator_constants(p)
    rows.append(["M_minus", m.m_minus, "c_minus * Gamma(-alpha)"])
    rows.append(["M_plus", m.m_plus, "c_plus * Gamma(-alpha)"])
    k = inverse_constants(p)
    denom_formula = "M_minus^2 + M_plus^2 + 2 M_minus M_plus cos(pi alpha)"
    rows.append(["inverse_denominator", k.denom, denom_formula])
    rows.append(["K_minus", k.k_minus, "M_minus / (" + denom_formula + ")"])
    rows.append(["K_plus", k.k_plus, "M_plus / (" + denom_formula + ")"])
    if 1.0 < p.alpha < 2.0:
        t = tanaka_constants(p)
        tf = "Gamma(alpha) Gamma(-alpha) (c_plus^2 + c_minus^2 + 2 c_plus c_minus cos(pi alpha))"
        rows.append(["kappa_minus", t.kappa_minus, f"c_minus / ({tf})"])
        rows.append(["kappa_plus", t.kappa_plus, f"c_plus / ({tf})"])
        ce = critical_beta(p)
        rows.append(
            [
                "beta_crit",
                ce.beta_crit,
                "arccos((c^2 (1 - a^2) - (1 + a c)^2) / (c^2 (1 - a^2) + (1 + a c)^2)) / pi,"
                " a = cos(pi alpha), c = min(c_minus, c_plus) / max(c_minus, c_plus)",
            ]
        )
        g = cfg["gamma"]
        if g is not None:
            pc = power_constants(p, g)
            pre = "Gamma(gamma + 1) / Gamma(gamma - alpha + 1)"
            s = "sin((gamma - alpha + 1) pi)"
            rows.append(
                [
                    "k_minus",
                    pc.k_minus,
                    f"{pre} [M_plus sin(-alpha pi) / {s} + M_minus sin((gamma + 1) pi) / {s} + M_plus]"
                    "; drift weight while X < x",
                ]
            )
            rows.append(
                [
                    "k_plus",
                    pc.k_plus,
                    f"{pre} [M_minus sin(-alpha pi) / {s} + M_plus sin((gamma + 1) pi) / {s} + M_minus]"
                    "; drift weight while X > x",
                ]
            )
            rows.append(["classification", classify(p, g).name, "Submartingale iff gamma >= beta_crit"])
    elif cfg["gamma"] is not None:
        raise UsageError("power constants need alpha in (1, 2)")
    _report(["name", "value", "formula"], rows, cfg)
    return EXIT_OK


def builtin_test_function() -> SpectralFunction:
    """Test function used when ``invert`` gets no ``--input``."""
    return lizorkin_test(2, 1.0, 1.4, SampleGrid(2**13, 0.05), shift=1.0, phase=0.3)


def _as_grid(f) -> GridFunction:
    return to_grid(f) if isinstance(f, SpectralFunction) else f


def cmd_invert(cfg: dict) -> int:
    p = _params(cfg)
    method = cfg["method"]
    if cfg["input"]:
        f = io.function_from_dict(io.read_json(cfg["input"]))
    else:
        f = builtin_test_function()
    if method == "quadrature" and isinstance(f, SpectralFunction):
        f = to_grid(f)
    first, second = (apply_generator, invert_generator)
    if not cfg["forward"]:
        first, second = second, first
    out = first(p, f, method)
    extra = {}
    if cfg["roundtrip"]:
        back = _as_grid(second(p, out, method)).values
        ref = _as_grid(f).values
        if method == "quadrature":
            sl = slice(ref.size // 4, 3 * ref.size // 4)
            back, ref = back[sl], ref[sl]
        scale = float(np.max(np.abs(ref)))
        err = float(np.max(np.abs(back - ref)) / scale) if scale > 0 else float(np.max(np.abs(back)))
        extra["roundtrip_error"] = err
    meta = dict(cfg)
    if (cfg["format"] or "json") == "json":
        payload = {"schema": io.SCHEMA, "config": meta, "function": io.function_to_dict(out)}
        payload.update(extra)
        _emit(io.dumps_json(payload), cfg)
    else:
        meta.update(extra)
        if isinstance(out, GridFunction):
            rows = [[x, v] for x, v in zip(out.x.tolist(), out.values.tolist())]
            _emit(io.dumps_csv(["x", "value"], rows, meta), cfg)
        else:
            rows = [[u, c.real, c.imag] for u, c in zip(out.u.tolist(), out.coeffs.tolist())]
            _emit(io.dumps_csv(["u", "re", "im"], rows, meta), cfg)
    if "roundtrip_error" in extra:
        sys.stderr.write(f"roundtrip_error={extra['roundtrip_error']:.3e}\n")
    return EXIT_OK


def _level_value(lt, level: float) -> float:
    # the field is zero beyond the levels the path reached
    if not lt.levels[0] <= level <= lt.levels[-1]:
        return 0.0
    return lt.value_at(level)


def cmd_simulate(cfg: dict) -> int:
    p = _params(cfg)
    path = simulate_path(p, cfg["horizon"], cfg["steps"], cfg["x0"], cfg["seed"])
    step_scale = path.dt ** (1.0 / p.alpha)
    spacing = cfg["level_spacing"] or 0.5 * step_scale
    eps = cfg["bandwidth"] or default_bandwidth(p.alpha, path.dt, spacing)
    lt = occupation_local_time(path, level_grid(path.values, spacing, eps), eps)
    meta = dict(cfg, bandwidth=eps, level_spacing=spacing)
    if (cfg["format"] or "json") == "json":
        payload = {
            "schema": io.SCHEMA,
            "config": meta,
            "occupation_mass": lt.mass(),
            "level_local_time": _level_value(lt, cfg["level"]),
            "path": io.path_to_dict(path),
            "local_time": io.local_time_to_dict(lt),
        }
        _emit(io.dumps_json(payload), cfg)
    else:
        meta["occupation_mass"] = lt.mass()
        meta["level_local_time"] = _level_value(lt, cfg["level"])
        rows = [["path", t, x] for t, x in zip(path.t_grid.tolist(), path.values.tolist())]
        rows += [["local_time", a, v] for a, v in zip(lt.levels.tolist(), lt.l_values.tolist())]
        _emit(io.dumps_csv(["series", "coordinate", "value"], rows, meta), cfg)
    return EXIT_OK


def cmd_verify(cfg: dict) -> int:
    checks = run_suite(cfg["suite"], cfg["n_paths"], cfg["seed"])
    rows = [[c.name, c.value, c.tolerance, c.passed, c.detail] for c in checks]
    _report(["check", "value", "tolerance", "pass", "detail"], rows, cfg)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


COMMANDS = {
    "constants": cmd_constants,
    "invert": cmd_invert,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        cfg = effective_config(args)
        return COMMANDS[args.command](cfg)
    except (ValueError, OSError, KeyError, TypeError) as exc:
        sys.stderr.write(f"stablefrac {args.command}: error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
