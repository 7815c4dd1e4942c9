"""Batch front end: config-driven pipeline runs with CSV/JSON artifacts.

Configs are flat JSON objects.  Every run declares a spectrum model plus
the grid, and optionally the time step (derived from the duality
n*step*eps = 1 when omitted):

    {"model": "planck", "beta": 1.0, "h": 1.0, "n_points": 65, "step": 0.25}
    {"model": "flat", "sigma2": 1.0, "n_points": 33, "step": 0.25}
    {"model": "tabulated", "values": [...], "n_points": 17, "step": 0.5}

Optional keys: "eps", "out" (output directory), "tol" (tolerance factor
for verify), "delta" and "delta_prime" ([lo, hi] interval bounds for the
qsi table).  Unknown keys are rejected.

Exit codes: 0 all good, 1 a mathematical check failed (verify only),
2 input/config error.  Identical configs produce byte-identical output
files; floats are printed with 17 significant digits in CSV.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import decomposition, mode_algebra, qsi, spectra, stationary, synthesis, verification
from .spectra import SpectralDensityPair, make_grid


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


_GLOBAL_KEYS = {"model", "n_points", "step", "eps", "out", "tol", "delta", "delta_prime"}
_MODEL_KEYS = {
    "planck": {"beta", "h"},
    "flat": {"sigma2"},
    "tabulated": {"values"},
}


@dataclass(frozen=True)
class RunConfig:
    model: str
    params: dict
    n_points: int
    step: float
    eps: float
    out: str | None
    tol: float
    delta: tuple[float, float] | None
    delta_prime: tuple[float, float] | None


def _require_number(raw: dict, key: str) -> float:
    value = raw.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
    return float(value)


def _optional_interval(raw: dict, key: str):
    value = raw.get(key)
    if value is None:
        return None
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ConfigError(f"config key {key!r} must be a [lo, hi] pair of numbers")
    return float(value[0]), float(value[1])


def load_config(path: str) -> RunConfig:
    """Parse and validate a flat JSON run configuration."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")

    model = raw.get("model")
    if model not in _MODEL_KEYS:
        raise ConfigError(
            f"config key 'model' must be one of {sorted(_MODEL_KEYS)}, got {model!r}"
        )
    allowed = _GLOBAL_KEYS | _MODEL_KEYS[model]
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys for model {model!r}: {unknown}")
    missing = sorted(_MODEL_KEYS[model] - set(raw))
    if missing:
        raise ConfigError(f"missing config keys for model {model!r}: {missing}")

    n_points_raw = raw.get("n_points")
    if not isinstance(n_points_raw, int) or isinstance(n_points_raw, bool):
        raise ConfigError(f"config key 'n_points' must be an integer, got {n_points_raw!r}")
    n_points = int(n_points_raw)
    step = _require_number(raw, "step") if "step" in raw else None
    if step is None:
        raise ConfigError("missing config key 'step'")
    if n_points <= 0 or step <= 0:
        raise ConfigError("n_points and step must be positive")

    if "eps" in raw:
        eps = _require_number(raw, "eps")
        if abs(n_points * step * eps - 1.0) > 1e-9:
            raise ConfigError(
                f"eps breaks the duality n*step*eps = 1 (got {n_points * step * eps!r})"
            )
    else:
        eps = 1.0 / (n_points * step)

    params: dict = {}
    if model == "planck":
        params["beta"] = _require_number(raw, "beta")
        params["h"] = _require_number(raw, "h")
    elif model == "flat":
        params["sigma2"] = _require_number(raw, "sigma2")
    else:
        values = raw.get("values")
        if not isinstance(values, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
        ):
            raise ConfigError("config key 'values' must be a list of numbers")
        params["values"] = [float(v) for v in values]

    out = raw.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("config key 'out' must be a string path")
    tol = _require_number(raw, "tol") if "tol" in raw else 1.0
    if tol <= 0:
        raise ConfigError("config key 'tol' must be positive")

    return RunConfig(
        model=model,
        params=params,
        n_points=n_points,
        step=step,
        eps=eps,
        out=out,
        tol=tol,
        delta=_optional_interval(raw, "delta"),
        delta_prime=_optional_interval(raw, "delta_prime"),
    )


def build_pair(config: RunConfig) -> SpectralDensityPair:
    """Construct the configured spectrum; any rejection is a config error."""
    try:
        grid = make_grid(config.n_points, config.step)
        if config.model == "planck":
            return spectra.planck_density(config.params["beta"], config.params["h"], grid)
        if config.model == "flat":
            return spectra.flat_density(config.params["sigma2"], grid)
        return spectra.tabulated_density(np.array(config.params["values"]), grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _jsonable(value):
    if isinstance(value, dict):
        return {key: _jsonable(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(val) for val in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(val) for val in value.tolist()]
    return value


def _write_json(path: Path, payload) -> None:
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(text + "\n")


def _check_entry(check) -> dict:
    return {
        "suite": check.suite,
        "check": check.check,
        "residual": check.residual,
        "tolerance": check.tolerance,
        "pass": check.passed,
    }


def _region_labels(pair: SpectralDensityPair) -> list[str]:
    labels = []
    for k in range(pair.grid.n_points):
        if pair.n_plus[k]:
            labels.append("N+")
        elif pair.n_minus[k]:
            labels.append("N-")
        elif pair.theta[k]:
            labels.append("Theta")
        else:
            labels.append("dropped")
    return labels


def _kernel_rows(name: str, lags, eps: float, kernel) -> list:
    return [
        [name, int(j), eps * int(j), kernel[i].real, kernel[i].imag]
        for i, j in enumerate(lags)
    ]


def cmd_spectrum(config: RunConfig, pair: SpectralDensityPair, out_dir: Path) -> int:
    labels = _region_labels(pair)
    rows = []
    for k in range(pair.grid.n_points):
        if labels[k] == "dropped":
            continue
        lam = pair.lambda_theta[k]
        rows.append(
            [
                pair.grid.points[k],
                pair.kappa[k],
                pair.kappa_rev[k],
                lam,
                pair.gamma[k],
                labels[k],
            ]
        )
    _write_csv(out_dir / "spectrum.csv", ["nu", "kappa", "kappa_rev", "lambda", "gamma", "region"], rows)
    print(f"wrote {out_dir / 'spectrum.csv'} ({len(rows)} retained points)")
    return 0


def cmd_corr(config: RunConfig, pair: SpectralDensityPair, out_dir: Path) -> int:
    seq = stationary.correlation_sequence(pair, config.eps)
    model = stationary.build_model(seq)
    lags = seq.lags
    rows = []
    rows += _kernel_rows("k", lags, seq.eps, seq.values)
    rows += _kernel_rows("k_rev", lags, seq.eps, seq.reversed)
    rows += _kernel_rows("r", lags, seq.eps, seq.cross)
    if model.invertible:
        filt = stationary.modular_matrix(model)
        rows += _kernel_rows("l_half", lags, seq.eps, filt.kernel_half)
        rows += _kernel_rows("l_inv_half", lags, seq.eps, filt.kernel_inv_half)
    _write_csv(out_dir / "corr_kernels.csv", ["kernel", "j", "t", "real", "imag"], rows)

    checks = verification.stationary_checks(pair, config.eps)
    checks += verification.modular_checks(pair, config.eps)
    _write_json(
        out_dir / "corr_residuals.json",
        {
            "checks": [_check_entry(c) for c in checks],
            "all_pass": all(c.passed for c in checks),
            "invertible": model.invertible,
        },
    )
    print(f"wrote {out_dir / 'corr_kernels.csv'} and corr_residuals.json")
    return 0


def cmd_decompose(config: RunConfig, pair: SpectralDensityPair, out_dir: Path) -> int:
    seq = stationary.correlation_sequence(pair, config.eps)
    model = stationary.build_model(seq)
    parts = decomposition.split(model, pair)
    estimate = decomposition.best_estimate(parts, decomposition.INPUT_TO_OUTPUT)
    residual = parts.amp_rev - estimate
    labels = _region_labels(pair)
    points = []
    for k in range(pair.grid.n_points):
        if labels[k] == "dropped":
            continue
        entry = {
            "nu": pair.grid.points[k],
            "region": labels[k],
            "lambda": pair.lambda_theta[k] if pair.theta[k] else None,
            "amp": parts.amp[k],
            "amp_rev": parts.amp_rev[k],
            "estimate_input_to_output": estimate[k],
            "residual": residual[k],
        }
        points.append(entry)
    residual_norm2 = pair.grid.step * float(np.sum(np.abs(residual) ** 2))
    expected = pair.grid.step * float(np.sum(pair.kappa_rev[pair.n_plus]))
    _write_json(
        out_dir / "decompose_report.json",
        {
            "points": points,
            "residual_norm2": residual_norm2,
            "residual_norm2_expected": expected,
        },
    )
    rows = []
    if pair.theta.any():
        kernels = decomposition.modular_kernels_theta(pair, config.eps)
        rows += _kernel_rows("theta_half", kernels.lags, kernels.eps, kernels.half)
        rows += _kernel_rows("theta_inv_half", kernels.lags, kernels.eps, kernels.inv_half)
    _write_csv(out_dir / "decompose_kernels.csv", ["kernel", "j", "t", "real", "imag"], rows)
    print(f"wrote {out_dir / 'decompose_report.json'} and decompose_kernels.csv")
    return 0


def cmd_synth(config: RunConfig, pair: SpectralDensityPair, out_dir: Path) -> int:
    filt = synthesis.transmission_function(pair)
    result = synthesis.synthesize(filt, filt.standard)
    retained = pair.retained
    rows = []
    max_rel = 0.0
    for k in range(pair.grid.n_points):
        if not retained[k]:
            continue
        target = pair.kappa[k]
        reproduced = result.kappa_out[k]
        rel = abs(reproduced - target) / target if target > 0 else abs(reproduced)
        max_rel = max(max_rel, rel)
        rows.append(
            [
                pair.grid.points[k],
                filt.f[k],
                filt.standard.pair.kappa[k],
                filt.standard.pair.kappa_rev[k],
                reproduced,
                target,
                rel,
            ]
        )
    _write_csv(
        out_dir / "synth_spectrum.csv",
        ["nu", "f", "kappa_std", "kappa_rev_std", "kappa_reproduced", "kappa_target", "rel_error"],
        rows,
    )
    time_filter = synthesis.time_domain_filter(filt, config.eps)
    _write_csv(
        out_dir / "synth_kernel.csv",
        ["j", "t", "real", "imag"],
        [
            [int(j), time_filter.eps * int(j), time_filter.phi[i].real, time_filter.phi[i].imag]
            for i, j in enumerate(time_filter.lags)
        ],
    )
    print(f"max relative spectrum error = {_fmt(max_rel)}")
    print(f"wrote {out_dir / 'synth_spectrum.csv'} and synth_kernel.csv")
    return 0


def cmd_qsi(config: RunConfig, pair: SpectralDensityPair, out_dir: Path) -> int:
    grid = pair.grid
    delta_bounds = config.delta or (0.0, grid.nu_max)
    delta_prime_bounds = config.delta_prime or (-grid.nu_max / 2, grid.nu_max / 2)
    try:
        delta = qsi.interval_mask(grid, *delta_bounds)
        delta_prime = qsi.interval_mask(grid, *delta_prime_bounds)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    table = qsi.integrator_table(pair)
    integrator = {
        f"{first}_dag_{second}": table.second_moment(first, delta, second, delta_prime)
        for first in ("noise", "reverse")
        for second in ("noise", "reverse")
    }

    if spectra.STANDARD_VACUUM in spectra.classify(pair):
        vacuum_pair = pair
    else:
        vacuum_pair = spectra.tabulated_density((grid.points < 0).astype(float), grid)
    canonical, _ = qsi.canonical_from_vacuum(vacuum_pair)
    flipped_delta = qsi.flipped(delta)
    canonical_moments = {
        "annihilation_creation": canonical.vacuum_moment(
            canonical.annihilation, flipped_delta, canonical.creation, delta_prime
        ).real,
        "creation_annihilation": canonical.vacuum_moment(
            canonical.creation, flipped_delta, canonical.annihilation, delta_prime
        ).real,
        "creation_creation": canonical.vacuum_moment(
            canonical.creation, flipped_delta, canonical.creation, delta_prime
        ).real,
        "annihilation_annihilation": canonical.vacuum_moment(
            canonical.annihilation, flipped_delta, canonical.annihilation, delta_prime
        ).real,
    }

    sigma = np.sqrt(pair.kappa)
    output_pair = qsi.build_output_pair(canonical, sigma, np.sqrt(pair.kappa_rev))
    output_moments = {
        f"{first}_{second}_dag": output_pair.moment(first, delta, second, delta_prime).real
        for first in ("output", "reverse")
        for second in ("output", "reverse")
    }

    _write_json(
        out_dir / "qsi_table.json",
        {
            "delta": list(delta_bounds),
            "delta_prime": list(delta_prime_bounds),
            "integrator_second_moments": integrator,
            "canonical_vacuum_moments": canonical_moments,
            "output_second_moments": output_moments,
            "vacuum_reference": "configured pair" if vacuum_pair is pair else "half-line indicator",
        },
    )
    print(f"wrote {out_dir / 'qsi_table.json'}")
    return 0


def cmd_mode(n: float) -> int:
    if n < 0:
        raise ConfigError(f"occupation must be nonnegative, got {n}")
    noise, reverse = mode_algebra.thermal_pair(n)
    ops = {"noise": noise, "reverse": reverse}
    correlations_dag_first = {
        f"{a}_dag_{b}": mode_algebra.expectation(ops[a].dagger(), ops[b]).real
        for a in ops
        for b in ops
    }
    correlations_dag_second = {
        f"{a}_{b}_dag": mode_algebra.expectation(ops[a], ops[b].dagger()).real
        for a in ops
        for b in ops
    }
    commutators = {
        "noise_noise_dag": mode_algebra.commutator(noise, noise.dagger()).real,
        "reverse_dag_reverse": mode_algebra.commutator(reverse.dagger(), reverse).real,
        "reverse_noise": mode_algebra.commutator(reverse, noise).real,
        "reverse_noise_dag": mode_algebra.commutator(reverse, noise.dagger()).real,
    }
    payload = {
        "n": n,
        "correlations_dag_first": correlations_dag_first,
        "correlations_dag_second": correlations_dag_second,
        "commutators": commutators,
    }
    print(json.dumps(_jsonable(payload), indent=2, sort_keys=True))
    return 0


def cmd_verify(config: RunConfig, pair: SpectralDensityPair, out_dir: Path) -> int:
    checks = verification.run_all(pair, config.eps, tol_factor=config.tol)
    all_pass = all(c.passed for c in checks)
    _write_json(
        out_dir / "verify_report.json",
        {"checks": [_check_entry(c) for c in checks], "all_pass": all_pass},
    )
    failures = [c for c in checks if not c.passed]
    for failure in failures:
        print(
            f"FAIL {failure.suite}/{failure.check}: residual {_fmt(failure.residual)} "
            f"> tolerance {_fmt(failure.tolerance)}"
        )
    verdict = "PASS" if all_pass else "FAIL"
    print(f"verify: {verdict} ({len(checks) - len(failures)}/{len(checks)} checks)")
    return 0 if all_pass else 1


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to a JSON run config")
    common.add_argument("--out", default=None, help="output directory (default ./qnoise_out)")
    common.add_argument(
        "--tol", type=float, default=None, help="tolerance factor for verify checks"
    )
    parser = argparse.ArgumentParser(
        prog="qnoise",
        description="Covariance-level toolkit for stationary quantum noise "
        "and its time-reversed output process.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="tabulate the configured spectrum")
    sub.add_parser("corr", parents=[common], help="correlation and modular filter kernels")
    sub.add_parser("decompose", parents=[common], help="vacuum/thermal split and estimates")
    sub.add_parser("synth", parents=[common], help="standard pair and transmission function")
    sub.add_parser("qsi", parents=[common], help="stochastic integration tables")
    sub.add_parser("verify", parents=[common], help="run every identity check")
    mode = sub.add_parser("mode", help="single-mode thermal pair tables")
    mode.add_argument("--n", type=float, required=True, help="occupation number (>= 0)")
    return parser


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "corr": cmd_corr,
    "decompose": cmd_decompose,
    "synth": cmd_synth,
    "qsi": cmd_qsi,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "mode":
            return cmd_mode(args.n)
        config = load_config(args.config)
        if args.tol is not None:
            if args.tol <= 0:
                raise ConfigError("--tol must be positive")
            config = replace(config, tol=float(args.tol))
        pair = build_pair(config)
        out_dir = Path(args.out or config.out or "qnoise_out")
        out_dir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](config, pair, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
