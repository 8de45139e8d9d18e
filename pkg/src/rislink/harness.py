"""Experiment orchestration: seeded Monte-Carlo sweeps and CSV persistence.

Reproduces the three rate experiments (rate vs subcarrier count, vs element
count, vs reference SNR) comparing the relaxation-configured surface against
the unconfigured baseline.  All randomness flows from one master seed through
per-(stream, point, trial) children, so results do not depend on execution
order or parallelism degree.  The channel realization stream is keyed by trial
only: every sweep point and every method of a trial sees the same draw, which
pairs the comparison both across methods and along the sweep axis.
"""
from __future__ import annotations

import functools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .beamforming import brute_force_phases, unconfigured_phases
from .channel import ChannelParams, FrequencyChannel, SystemGeometry, realize_channel, to_frequency_domain
from .estimators import SdrBeamformer
from .ofdm import OfdmParams, achievable_rate, composite_channel, noise_power
from .validation import ConfigurationError, check_rng

SWEEP_VARIABLES = ("subcarriers", "elements", "snr")
METHOD_NAMES = ("sdr", "unconfigured")
DEFAULT_SWEEPS = {
    "subcarriers": (200.0, 400.0, 600.0, 800.0, 1000.0),
    "elements": (50.0, 100.0, 200.0, 300.0, 400.0),
    "snr": (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0),
}
CSV_HEADER = "sweep_var,value,method,rate_mbps_mean,rate_mbps_ci95,trials,master_seed"

# spawn-key domain tags for the two child-stream families
_REALIZATION_STREAM = 0
_SOLVER_STREAM = 1


@dataclass(frozen=True)
class SolverOptions:
    """Relaxation solver and extraction knobs exposed through the config."""

    subset_size: int | None = None
    rank: int | None = None
    max_iter: int = 5000
    tol: float = 1e-8
    restarts: int = 3
    num_samples: int = 1000
    ascent_passes: int = 50

    def __post_init__(self):
        if self.max_iter < 1 or self.restarts < 1 or self.num_samples < 1:
            raise ConfigurationError("max_iter, restarts and num_samples must be >= 1")
        if self.ascent_passes < 0:
            raise ConfigurationError("ascent_passes must be >= 0")
        if not self.tol > 0:
            raise ConfigurationError("tol must be > 0")


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: SystemGeometry = SystemGeometry()
    channel: ChannelParams = ChannelParams()
    ref_snr_db: float = 10.0
    solver: SolverOptions = SolverOptions()
    sweep_variable: str | None = None
    sweep_values: tuple = ()
    trials: int = 50
    master_seed: int = 1
    methods: tuple = METHOD_NAMES

    def __post_init__(self):
        if self.sweep_variable is not None:
            if self.sweep_variable not in SWEEP_VARIABLES:
                raise ConfigurationError(
                    f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.sweep_variable!r}"
                )
            values = tuple(float(v) for v in self.sweep_values)
            if not values:
                raise ConfigurationError("sweep values must be non-empty")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ConfigurationError("sweep values must be strictly increasing")
            object.__setattr__(self, "sweep_values", values)
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if self.master_seed < 0:
            raise ConfigurationError("master_seed must be a non-negative integer")
        methods = tuple(self.methods)
        if not methods or any(m not in METHOD_NAMES for m in methods):
            raise ConfigurationError(f"methods must be a non-empty subset of {METHOD_NAMES}")
        if len(set(methods)) != len(methods):
            raise ConfigurationError("methods must not repeat")
        object.__setattr__(self, "methods", methods)
        if not np.isfinite(self.ref_snr_db):
            raise ConfigurationError("ref_snr_db must be finite")


@dataclass(frozen=True)
class SweepRow:
    sweep_var: str
    value: float
    method: str
    rate_mbps_mean: float
    rate_mbps_ci95: float
    trials: int
    master_seed: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            lines.append(
                f"{row.sweep_var},{row.value!r},{row.method},"
                f"{row.rate_mbps_mean!r},{row.rate_mbps_ci95!r},"
                f"{row.trials},{row.master_seed}"
            )
        return "\n".join(lines) + "\n"


def realization_seed(master_seed: int, trial: int) -> int:
    """Child seed for the channel draw of one trial (shared by all points)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(_REALIZATION_STREAM, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def solver_seed(master_seed: int, point_index: int, trial: int) -> int:
    """Child seed for the solver/randomization streams of one point's trial."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(_SOLVER_STREAM, point_index, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def _point_dimensions(config: ExperimentConfig, value) -> tuple[ChannelParams, OfdmParams]:
    """Resolve the channel/OFDM parameters at one sweep point."""
    channel = config.channel
    ref_snr_db = config.ref_snr_db
    if value is not None:
        variable = config.sweep_variable
        if variable == "subcarriers":
            channel = replace(channel, num_subcarriers=_as_count(value, "subcarrier count"))
        elif variable == "elements":
            channel = replace(channel, num_elements=_as_count(value, "element count"))
        elif variable == "snr":
            ref_snr_db = float(value)
        else:
            raise ConfigurationError("cannot apply a sweep value without a sweep variable")
    ofdm = OfdmParams(
        num_subcarriers=channel.num_subcarriers,
        cp_len=channel.cp_len,
        bandwidth=channel.bandwidth,
        ref_snr_db=ref_snr_db,
    )
    return channel, ofdm


def _as_count(value, name: str) -> int:
    if float(value) != int(value):
        raise ConfigurationError(f"{name} must be an integer, got {value}")
    return int(value)


def _method_phases(method: str, freq: FrequencyChannel, solver: SolverOptions, seed: int):
    if method == "unconfigured":
        return unconfigured_phases(freq.num_elements)
    if method == "sdr":
        est = SdrBeamformer(
            subset_size=solver.subset_size,
            rank=solver.rank,
            max_iter=solver.max_iter,
            tol=solver.tol,
            restarts=solver.restarts,
            num_samples=solver.num_samples,
            ascent_passes=solver.ascent_passes,
            random_state=seed,
        )
        est.fit(freq.cascade, freq.direct)
        return est.phases_
    raise ConfigurationError(f"unknown method {method!r}")


def run_point(config: ExperimentConfig, value, trial: int, point_index: int | None = None) -> dict:
    """Evaluate every configured method on one shared channel draw.

    Returns ``{method: rate_mbps}``.  The same realization feeds all methods
    of the trial, so the comparison is paired.
    """
    if point_index is None:
        point_index = (
            config.sweep_values.index(float(value)) if value is not None and float(value) in config.sweep_values else 0
        )
    channel_params, ofdm_params = _point_dimensions(config, value)
    realization = realize_channel(
        config.geometry, channel_params, realization_seed(config.master_seed, trial)
    )
    freq = to_frequency_domain(realization, ofdm_params.num_subcarriers)
    sigma2 = noise_power(freq, ofdm_params)
    rates = {}
    for method in config.methods:
        theta = _method_phases(
            method, freq, config.solver, solver_seed(config.master_seed, point_index, trial)
        )
        h = composite_channel(freq, theta)
        rates[method] = achievable_rate(h, sigma2, ofdm_params).rate_mbps
    return rates


def _point_task(config: ExperimentConfig, task) -> dict:
    point_index, value, trial = task
    return run_point(config, value, trial, point_index=point_index)


def _snr_trial_task(config: ExperimentConfig, trial: int) -> dict:
    """All SNR points of one trial; the phase profile is SNR-independent."""
    channel_params, _ = _point_dimensions(config, None)
    realization = realize_channel(
        config.geometry, channel_params, realization_seed(config.master_seed, trial)
    )
    freq = to_frequency_domain(realization, channel_params.num_subcarriers)
    composites = {
        method: composite_channel(
            freq,
            _method_phases(method, freq, config.solver, solver_seed(config.master_seed, 0, trial)),
        )
        for method in config.methods
    }
    out = {}
    for value in config.sweep_values:
        ofdm = OfdmParams(
            num_subcarriers=channel_params.num_subcarriers,
            cp_len=channel_params.cp_len,
            bandwidth=channel_params.bandwidth,
            ref_snr_db=float(value),
        )
        sigma2 = noise_power(freq, ofdm)
        out[value] = {
            method: achievable_rate(h, sigma2, ofdm).rate_mbps for method, h in composites.items()
        }
    return out


def _aggregate(
    sweep_var: str, values, methods, per_point: dict, trials: int, master_seed: int
) -> SweepResult:
    rows = []
    for value in values:
        for method in sorted(methods):
            rates = np.asarray(per_point[value][method], dtype=float)
            mean = float(np.mean(rates))
            if rates.size > 1:
                ci95 = float(1.96 * np.std(rates, ddof=1) / np.sqrt(rates.size))
            else:
                ci95 = 0.0
            rows.append(
                SweepRow(
                    sweep_var=sweep_var,
                    value=float(value),
                    method=method,
                    rate_mbps_mean=mean,
                    rate_mbps_ci95=ci95,
                    trials=trials,
                    master_seed=master_seed,
                )
            )
    return SweepResult(rows=tuple(rows))


def _map_tasks(func, tasks, jobs: int):
    if jobs <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks))


def _run_sweep(config: ExperimentConfig, jobs: int = 1) -> SweepResult:
    if config.sweep_variable is None:
        raise ConfigurationError("config carries no sweep specification")
    per_point = {
        value: {method: [None] * config.trials for method in config.methods}
        for value in config.sweep_values
    }
    if config.sweep_variable == "snr":
        func = functools.partial(_snr_trial_task, config)
        results = _map_tasks(func, range(config.trials), jobs)
        for trial, by_value in zip(range(config.trials), results):
            for value, rates in by_value.items():
                for method, rate in rates.items():
                    per_point[value][method][trial] = rate
    else:
        tasks = [
            (index, value, trial)
            for index, value in enumerate(config.sweep_values)
            for trial in range(config.trials)
        ]
        func = functools.partial(_point_task, config)
        results = _map_tasks(func, tasks, jobs)
        for (index, value, trial), rates in zip(tasks, results):
            for method, rate in rates.items():
                per_point[value][method][trial] = rate
    return _aggregate(
        config.sweep_variable,
        config.sweep_values,
        config.methods,
        per_point,
        config.trials,
        config.master_seed,
    )


def _with_sweep(config: ExperimentConfig, variable: str) -> ExperimentConfig:
    if config.sweep_variable == variable and config.sweep_values:
        return config
    return replace(config, sweep_variable=variable, sweep_values=DEFAULT_SWEEPS[variable])


def sweep_subcarriers(config: ExperimentConfig, jobs: int = 1) -> SweepResult:
    """Rate vs number of subcarriers at the configured element count."""
    return _run_sweep(_with_sweep(config, "subcarriers"), jobs)


def sweep_elements(config: ExperimentConfig, jobs: int = 1) -> SweepResult:
    """Rate vs number of reflective elements at the configured grid size."""
    return _run_sweep(_with_sweep(config, "elements"), jobs)


def sweep_snr(config: ExperimentConfig, jobs: int = 1) -> SweepResult:
    """Rate vs reference direct-link SNR at the configured dimensions."""
    return _run_sweep(_with_sweep(config, "snr"), jobs)


def run_single(config: ExperimentConfig, jobs: int = 1) -> SweepResult:
    """All trials at the configured dimensions, without sweeping anything."""
    base = replace(config, sweep_variable=None, sweep_values=())
    func = functools.partial(_point_task, base)
    tasks = [(0, None, trial) for trial in range(config.trials)]
    results = _map_tasks(func, tasks, jobs)
    per_point = {0.0: {method: [r[method] for r in results] for method in config.methods}}
    return _aggregate(
        "single", (0.0,), config.methods, per_point, config.trials, config.master_seed
    )


def oracle_check(
    num_instances: int = 100,
    master_seed: int = 0,
    levels: int = 16,
    threshold: float = 0.95,
    solver: SolverOptions = SolverOptions(),
) -> list:
    """Compare the full pipeline against exhaustive search on tiny channels.

    Each instance draws an i.i.d. complex Gaussian channel with N <= 4
    elements and K <= 8 subcarriers, runs the relaxation pipeline, and checks
    that (a) the extracted profile reaches ``threshold`` times the quantized
    optimum and (b) the relaxation objective upper-bounds that optimum.
    """
    records = []
    for index in range(num_instances):
        rng = check_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))
        n = 1 + index % 4
        k = 2 * (1 + (index // 4) % 4)
        direct = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2.0)
        cascade = (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))) / np.sqrt(2.0)
        freq = FrequencyChannel(direct=direct, cascade=cascade)
        est = SdrBeamformer(
            subset_size=solver.subset_size,
            rank=solver.rank,
            max_iter=solver.max_iter,
            tol=solver.tol,
            restarts=solver.restarts,
            num_samples=solver.num_samples,
            ascent_passes=solver.ascent_passes,
            random_state=int(np.random.SeedSequence(master_seed, spawn_key=(index, 1)).generate_state(1, np.uint64)[0]),
        )
        est.fit(cascade, direct)
        theta_star = brute_force_phases(freq, levels)
        brute_obj = float(
            np.sum(np.abs(direct + cascade @ theta_star) ** 2)
        )
        records.append(
            {
                "instance": index,
                "n_elements": n,
                "num_subcarriers": k,
                "pipeline_objective": est.objective_,
                "relaxation_objective": est.relaxation_objective_,
                "brute_force_objective": brute_obj,
                "extraction_ok": est.objective_ >= threshold * brute_obj,
                "relaxation_ok": est.relaxation_objective_ >= brute_obj * (1.0 - 1e-9),
            }
        )
    return records


def config_to_dict(config: ExperimentConfig) -> dict:
    """Fully resolved configuration, suitable for the JSON sidecar."""
    geometry = config.geometry
    channel = config.channel
    solver = config.solver
    return {
        "geometry": {
            "bs_pos": list(geometry.bs_pos),
            "uav_pos": list(geometry.uav_pos),
            "iot_pos": list(geometry.iot_pos),
            "carrier_freq": geometry.carrier_freq,
            # echo the pitch the run actually used (None resolves to lambda/2)
            "element_spacing": geometry.spacing,
            "panel_normal": geometry.panel_normal,
        },
        "channel": {
            "num_taps": channel.num_taps,
            "cp_len": channel.cp_len,
            "decay_const": channel.decay_const,
            "bandwidth": channel.bandwidth,
            "num_subcarriers": channel.num_subcarriers,
            "num_elements": channel.num_elements,
            "nlos_excess_db": channel.nlos_excess_db,
        },
        "ofdm": {"ref_snr_db": config.ref_snr_db},
        "solver": {
            "subset_size": solver.subset_size,
            "rank": solver.rank,
            "max_iter": solver.max_iter,
            "tol": solver.tol,
            "restarts": solver.restarts,
            "num_samples": solver.num_samples,
            "ascent_passes": solver.ascent_passes,
        },
        "sweep": {
            "variable": config.sweep_variable,
            "values": list(config.sweep_values),
        },
        "trials": config.trials,
        "master_seed": config.master_seed,
        "methods": list(config.methods),
    }


_CONFIG_SECTIONS = {
    "geometry": ("bs_pos", "uav_pos", "iot_pos", "carrier_freq", "element_spacing", "panel_normal"),
    "channel": (
        "num_taps",
        "cp_len",
        "decay_const",
        "bandwidth",
        "num_subcarriers",
        "num_elements",
        "nlos_excess_db",
    ),
    "ofdm": ("ref_snr_db",),
    "solver": (
        "subset_size",
        "rank",
        "max_iter",
        "tol",
        "restarts",
        "num_samples",
        "ascent_passes",
    ),
    "sweep": ("variable", "values"),
}
_CONFIG_SCALARS = ("trials", "master_seed", "methods")


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a validated config from a (possibly partial) plain dictionary."""
    if not isinstance(data, dict):
        raise ConfigurationError("config root must be a JSON object")
    unknown = set(data) - set(_CONFIG_SECTIONS) - set(_CONFIG_SCALARS)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    for section, allowed in _CONFIG_SECTIONS.items():
        body = data.get(section, {})
        if not isinstance(body, dict):
            raise ConfigurationError(f"config section {section!r} must be an object")
        bad = set(body) - set(allowed)
        if bad:
            raise ConfigurationError(f"unknown keys in config section {section!r}: {sorted(bad)}")
    geometry_kwargs = dict(data.get("geometry", {}))
    for key in ("bs_pos", "uav_pos", "iot_pos"):
        if key in geometry_kwargs:
            geometry_kwargs[key] = tuple(geometry_kwargs[key])
    try:
        geometry = SystemGeometry(**geometry_kwargs)
        channel = ChannelParams(**data.get("channel", {}))
        solver = SolverOptions(**data.get("solver", {}))
        sweep = data.get("sweep", {})
        kwargs = {}
        if "ref_snr_db" in data.get("ofdm", {}):
            kwargs["ref_snr_db"] = float(data["ofdm"]["ref_snr_db"])
        if "trials" in data:
            kwargs["trials"] = int(data["trials"])
        if "master_seed" in data:
            kwargs["master_seed"] = int(data["master_seed"])
        if "methods" in data:
            kwargs["methods"] = tuple(data["methods"])
        return ExperimentConfig(
            geometry=geometry,
            channel=channel,
            solver=solver,
            sweep_variable=sweep.get("variable"),
            sweep_values=tuple(sweep.get("values", ())),
            **kwargs,
        )
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_config(path=None) -> ExperimentConfig:
    """Load a config JSON file, or the pure defaults when no path is given."""
    if path is None:
        return ExperimentConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def write_results(result: SweepResult, path, config: ExperimentConfig | None = None) -> None:
    """Write the sweep CSV plus a JSON sidecar echoing the resolved config."""
    text = result.to_csv()
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        if config is not None:
            sidecar = f"{path}.config.json"
            with open(sidecar, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(config_to_dict(config), fh, indent=2, sort_keys=True)
                fh.write("\n")
    except OSError as exc:
        raise IOError(f"cannot write results to {path}: {exc}") from exc


def read_results(path) -> SweepResult:
    """Parse a sweep CSV back into rows (the round-trip check helper)."""
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: missing or malformed header row")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 7:
            raise ValueError(f"{path}:{lineno}: expected 7 fields, got {len(parts)}: {line!r}")
        try:
            rows.append(
                SweepRow(
                    sweep_var=parts[0],
                    value=float(parts[1]),
                    method=parts[2],
                    rate_mbps_mean=float(parts[3]),
                    rate_mbps_ci95=float(parts[4]),
                    trials=int(parts[5]),
                    master_seed=int(parts[6]),
                )
            )
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}: {line!r}") from exc
    return SweepResult(rows=tuple(rows))
