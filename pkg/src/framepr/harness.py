"""Seeded, reproducible experiment runner and report assembly.

A run is fully described by a JSON config (schema_version 1): frame source,
task, noise model, algorithm list, trial count, and explicit seeds.  Reports
echo the normalized config, carry one record per trial, and store aggregates
that are exactly recomputable from the records.  Wall-clock fields live in
dedicated keys and are excluded from the determinism contract; everything
else is bitwise reproducible in single-thread mode.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import recon
from .errors import ConfigError, FramePRError
from .estimation import NoiseModel, crlb, fisher_awgn, fisher_coefficient_noise, simulate_measurements
from .frames import (
    Frame,
    frame_bounds,
    frame_from_dict,
    intensity_map,
    load_frame,
    random_frame,
    rng_from_seed,
)
from .injectivity import (
    certify_retrievable_complex,
    check_retrievable_real,
    fourth_moment_max,
    sampled_stability_bounds,
    stability_bounds_real,
)
ARTIFACT_VERSION = "0.1.0"
SCHEMA_VERSION = 1
NONDETERMINISTIC_KEYS = ("timestamp", "wall_time_s")

_TASKS = ("certify", "bounds", "crlb", "reconstruct", "sweep")
_ALGORITHMS = ("lifted_linear", "phaselift", "gerchberg_saxton", "wirtinger_flow", "irls")


def load_config(source) -> dict:
    """Normalize and validate a config (dict or path to a JSON file)."""
    if isinstance(source, (str, bytes)):
        try:
            with open(source) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    elif isinstance(source, dict):
        raw = json.loads(json.dumps(source))  # deep copy, JSON-normalized
    else:
        raise ConfigError(f"config must be a dict or a path, got {type(source)!r}")

    cfg = {
        "schema_version": raw.get("schema_version", SCHEMA_VERSION),
        "task": raw.get("task"),
        "frame": raw.get("frame"),
        "noise": raw.get("noise", {"kind": "none"}),
        "signal": raw.get("signal", {"kind": "gaussian", "norm": 1.0}),
        "algorithms": raw.get("algorithms", []),
        "trials": raw.get("trials", 1),
        "seed": raw.get("seed", 0),
        "success_threshold": raw.get("success_threshold", 1e-5),
        "sweep": raw.get("sweep"),
        "options": raw.get("options", {}),
        "threads": raw.get("threads", 1),
    }
    if cfg["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {cfg['schema_version']}")
    if cfg["task"] not in _TASKS:
        raise ConfigError(f"task must be one of {_TASKS}, got {cfg['task']!r}")
    if not isinstance(cfg["frame"], dict):
        raise ConfigError("config requires a 'frame' section")
    if int(cfg["trials"]) < 1:
        raise ConfigError("trials must be >= 1")
    cfg["trials"] = int(cfg["trials"])
    for alg in cfg["algorithms"]:
        if alg.get("name") not in _ALGORITHMS:
            raise ConfigError(f"unknown algorithm {alg.get('name')!r}")
    noise_kind = cfg["noise"].get("kind", "none")
    if noise_kind not in ("none", "awgn", "coefficient"):
        raise ConfigError(f"unknown noise kind {noise_kind!r}")
    if cfg["task"] in ("crlb", "sweep") and not cfg.get("sweep"):
        raise ConfigError(f"task {cfg['task']!r} requires a 'sweep' section")
    return cfg


def build_frame(spec: dict) -> Frame:
    """Materialize the frame named by a config 'frame' section."""
    if "inline" in spec:
        return frame_from_dict(spec["inline"])
    if "file" in spec:
        try:
            return load_frame(spec["file"])
        except OSError as exc:
            raise ConfigError(f"cannot read frame file: {exc}") from exc
    if "ensemble" in spec:
        try:
            return random_frame(int(spec["n"]), int(spec["m"]), spec["ensemble"], spec.get("seed", 0))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad ensemble frame spec: {exc}") from exc
    raise ConfigError("frame section needs one of 'inline', 'file', 'ensemble'")


@dataclass
class Report:
    """Run output: config echo, per-trial records, recomputable aggregates."""

    config: dict
    task: str
    records: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    artifact_version: str = ARTIFACT_VERSION
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "artifact_version": self.artifact_version,
            "config": self.config,
            "task": self.task,
            "records": self.records,
            "aggregates": self.aggregates,
            "tables": self.tables,
            "result": self.result,
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    def deterministic_digest(self) -> str:
        """SHA-256 of the canonical JSON with wall-clock fields removed."""
        payload = _strip_volatile(self.to_dict())
        return hashlib.sha256(
            json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        ).hexdigest()


def _strip_volatile(obj):
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in obj.items() if k not in NONDETERMINISTIC_KEYS}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def report_from_dict(data: dict) -> Report:
    return Report(
        config=data["config"],
        task=data["task"],
        records=data.get("records", []),
        aggregates=data.get("aggregates", {}),
        tables=data.get("tables", []),
        result=data.get("result", {}),
        artifact_version=data.get("artifact_version", ARTIFACT_VERSION),
        timestamp=data.get("timestamp", ""),
    )


def load_report(path) -> Report:
    with open(path) as fh:
        return report_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# trial machinery
# ---------------------------------------------------------------------------

def _draw_signal(frame: Frame, signal: dict, seed) -> np.ndarray:
    rng = rng_from_seed(seed)
    kind = signal.get("kind", "gaussian")
    if kind != "gaussian":
        raise ConfigError(f"unknown signal kind {kind!r}")
    if frame.is_real:
        x = rng.normal(size=frame.n).astype(complex)
    else:
        x = rng.normal(size=frame.n) + 1j * rng.normal(size=frame.n)
    norm = signal.get("norm")
    if norm is not None:
        x *= float(norm) / np.linalg.norm(x)
    return x


def _measure(frame: Frame, x, noise: dict, seed):
    kind = noise.get("kind", "none")
    if kind == "none":
        return intensity_map(frame, x)
    model = NoiseModel(
        kind=kind,
        sigma=noise.get("sigma"),
        rho=noise.get("rho"),
        seed=seed,
    )
    return simulate_measurements(frame, x, model)


def _solver_options(name: str, options: dict, seed):
    options = dict(options or {})
    if name == "phaselift":
        return recon.PhaseLiftOptions(**options)
    if name == "gerchberg_saxton":
        return recon.GSOptions(**options)
    if name == "wirtinger_flow":
        options.setdefault("seed", seed)
        return recon.WirtingerOptions(**options)
    if name == "irls":
        options.setdefault("seed", seed)
        return recon.IRLSOptions(**options)
    return options


def run_reconstruction(frame: Frame, y, name: str, options, x_true=None, x0=None):
    """Dispatch one reconstruction by algorithm name."""
    if name == "lifted_linear":
        return recon.lifted_linear(frame, y, x_true=x_true)
    if name == "phaselift":
        return recon.phaselift(frame, y, options, x_true=x_true)
    if name == "gerchberg_saxton":
        start = x0 if x0 is not None else recon.spectral_init(frame, y, mode="wf").x0
        return recon.gerchberg_saxton(frame, y, start, options, x_true=x_true)
    if name == "wirtinger_flow":
        return recon.wirtinger_flow(frame, y, options, x_true=x_true)
    if name == "irls":
        return recon.irls(frame, y, options, x_true=x_true)
    raise ConfigError(f"unknown algorithm {name!r}")


def _reconstruct_trial(cfg: dict, frame: Frame, trial: int, noise_override=None) -> list:
    master = cfg["seed"]
    noise = dict(noise_override if noise_override is not None else cfg["noise"])
    x = _draw_signal(frame, cfg["signal"], [master, trial, 0])
    y = _measure(frame, x, noise, [master, trial, 1])
    records = []
    for j, alg in enumerate(cfg["algorithms"]):
        name = alg["name"]
        t0 = time.perf_counter()
        rec = {
            "trial": trial,
            "algorithm": name,
            "seed": [master, trial, 2 + j],
            "noise": noise,
        }
        try:
            options = _solver_options(name, alg.get("options"), [master, trial, 2 + j])
            result = run_reconstruction(frame, y, name, options, x_true=x)
            xnorm = float(np.linalg.norm(x))
            rec.update(
                d2_error=result.d2_error,
                d2_rel=result.d2_error / xnorm if xnorm > 0 else result.d2_error,
                d1_error=result.d1_error,
                residual=result.residual,
                iterations=result.iterations,
                converged=result.converged,
                flags=result.flags,
            )
        except FramePRError as exc:
            rec.update(error=f"{type(exc).__name__}: {exc}")
        rec["wall_time_s"] = time.perf_counter() - t0
        records.append(rec)
    return records


def compute_aggregates(records: list, threshold: float) -> dict:
    """Pure aggregation over reconstruction records; exact recomputation of a
    report's aggregates must reproduce this output bit for bit."""
    groups: dict = {}
    for rec in records:
        if "error" in rec:
            key = rec["algorithm"]
            groups.setdefault(key, {"errors": 0, "records": []})
            groups[key]["errors"] = groups[key].get("errors", 0) + 1
            continue
        key = rec["algorithm"]
        if rec.get("sweep_value") is not None:
            key = f"{rec['algorithm']}@{rec['sweep_value']}"
        groups.setdefault(key, {"errors": 0, "records": []})
        groups[key]["records"].append(rec)
    out = {}
    for key, group in sorted(groups.items()):
        recs = group["records"]
        entry = {"count": len(recs), "errors": group.get("errors", 0)}
        if recs:
            d2 = np.array([r["d2_rel"] for r in recs], dtype=float)
            res = np.array([r["residual"] for r in recs], dtype=float)
            iters = np.array([r["iterations"] for r in recs], dtype=float)
            entry.update(
                d2_rel_mean=float(np.mean(d2)),
                d2_rel_median=float(np.median(d2)),
                d2_rel_q05=float(np.quantile(d2, 0.05)),
                d2_rel_q95=float(np.quantile(d2, 0.95)),
                success_rate=float(np.mean(d2 <= threshold)),
                residual_mean=float(np.mean(res)),
                iterations_mean=float(np.mean(iters)),
            )
        out[key] = entry
    return out


def _run_trials(cfg: dict, frame: Frame, noise_override=None, sweep_value=None) -> list:
    trials = cfg["trials"]
    workers = int(cfg.get("threads", 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(
                    _trial_star,
                    [(cfg, frame, t, noise_override) for t in range(trials)],
                )
            )
    else:
        chunks = [_reconstruct_trial(cfg, frame, t, noise_override) for t in range(trials)]
    records = []
    for chunk in chunks:
        for rec in chunk:
            if sweep_value is not None:
                rec["sweep_value"] = sweep_value
            records.append(rec)
    return records


def _trial_star(args):
    return _reconstruct_trial(*args)


# ---------------------------------------------------------------------------
# tasks
# ---------------------------------------------------------------------------

def run_experiment(config) -> Report:
    """Execute one config end to end and return the report.

    Deterministic given the config in single-thread mode (the timestamp and
    wall-time fields are excluded from that contract); per-trial seeds are
    derived from the master seed and the trial index.
    """
    cfg = load_config(config)
    frame = build_frame(cfg["frame"])
    report = Report(config=cfg, task=cfg["task"])
    report.timestamp = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())

    if cfg["task"] == "certify":
        opts = cfg.get("options", {})
        if frame.is_real:
            cert = check_retrievable_real(frame, partition_cap=opts.get("partition_cap", 24))
        else:
            cert = certify_retrievable_complex(
                frame,
                eps0=opts.get("eps0", 0.5),
                budget=int(opts.get("budget", 4_000_000)),
                seed=cfg["seed"],
                n_cap=int(opts.get("n_cap", 3)),
            )
        report.result = cert.to_dict()
        return report

    if cfg["task"] == "bounds":
        opts = cfg.get("options", {})
        A, B = frame_bounds(frame)
        out = {"frame_lower_bound": A, "frame_upper_bound": B}
        if frame.is_real:
            certified = stability_bounds_real(
                frame,
                n_starts=int(opts.get("n_starts", 64)),
                seed=cfg["seed"],
                partition_cap=int(opts.get("partition_cap", 24)),
            )
            out["certified"] = certified.to_dict()
        else:
            out["B0"] = B
            out["b0_multistart"] = fourth_moment_max(
                frame, n_starts=int(opts.get("n_starts", 64)), seed=cfg["seed"]
            )
        sampled = sampled_stability_bounds(
            frame, samples=int(opts.get("samples", 2000)), seed=cfg["seed"]
        )
        out["empirical"] = sampled.to_dict()
        report.result = out
        return report

    if cfg["task"] == "reconstruct":
        report.records = _run_trials(cfg, frame)
        report.aggregates = compute_aggregates(report.records, cfg["success_threshold"])
        return report

    if cfg["task"] == "sweep":
        sweep = cfg["sweep"]
        param = sweep.get("parameter")
        if param not in ("sigma", "rho"):
            raise ConfigError("sweep.parameter must be 'sigma' or 'rho'")
        for value in sweep["values"]:
            noise = dict(cfg["noise"])
            noise[param] = value
            if noise.get("kind", "none") == "none":
                noise["kind"] = "awgn" if param == "sigma" else "coefficient"
            report.records.extend(_run_trials(cfg, frame, noise_override=noise, sweep_value=value))
        report.aggregates = compute_aggregates(report.records, cfg["success_threshold"])
        report.tables = _sweep_table(report.aggregates)
        return report

    if cfg["task"] == "crlb":
        report.tables = crlb_reference_curve(cfg, frame)
        return report

    raise ConfigError(f"unhandled task {cfg['task']!r}")  # pragma: no cover


def _sweep_table(aggregates: dict) -> list:
    rows = []
    for key, entry in sorted(aggregates.items()):
        if "@" not in key or not entry.get("count"):
            continue
        alg, value = key.rsplit("@", 1)
        rows.append(
            {
                "algorithm": alg,
                "noise_level": float(value),
                "d2_rel_mean": entry["d2_rel_mean"],
                "success_rate": entry["success_rate"],
                "count": entry["count"],
            }
        )
    return rows


def crlb_reference_curve(cfg: dict, frame: Frame | None = None) -> list:
    """Table of trace-CRLB against Monte-Carlo estimator MSE over a noise grid.

    The phase is anchored at the true signal (the estimate is phase-aligned to
    x before the squared error is taken), matching the anchored bound.
    """
    cfg = load_config(cfg)  # idempotent on already-normalized configs
    if frame is None:
        frame = build_frame(cfg["frame"])
    sweep = cfg["sweep"]
    param = sweep.get("parameter")
    if param not in ("sigma", "rho"):
        raise ConfigError("crlb sweep.parameter must be 'sigma' or 'rho'")
    master = cfg["seed"]
    x = _draw_signal(frame, cfg["signal"], [master, 917, 0])
    rows = []
    for iv, value in enumerate(sweep["values"]):
        if param == "sigma":
            fisher = fisher_awgn(frame, x, float(value))
            noise = {"kind": "awgn", "sigma": float(value)}
        else:
            fisher = fisher_coefficient_noise(frame, x, float(value))
            noise = {"kind": "coefficient", "rho": float(value)}
        bound = crlb(fisher, x)
        row = {
            "noise_level": float(value),
            "trace_crlb": float(np.trace(bound).real),
            "trials": cfg["trials"],
        }
        for j, alg in enumerate(cfg["algorithms"]):
            sq_errors = []
            for t in range(cfg["trials"]):
                y = _measure(frame, x, noise, [master, iv, t, 1])
                options = _solver_options(alg["name"], alg.get("options"), [master, iv, t, 2 + j])
                try:
                    result = run_reconstruction(frame, y, alg["name"], options, x_true=x)
                    sq_errors.append(result.d2_error**2)
                except FramePRError:
                    continue
            row[f"mse_{alg['name']}"] = float(np.mean(sq_errors)) if sq_errors else None
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def write_csv(rows: list, path) -> None:
    """RFC-4180 CSV for a list of flat dicts (union of keys, sorted header)."""
    import csv

    keys: list[str] = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=keys)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
