"""Experiment harness: config parsing, the five experiments, trial
aggregation, and artifact emission (CSV series, summary table, SVG plots).

Per-trial seeds derive as seed XOR trial-index; generation and each solver
variant own separate child streams, so trials are reproducible in any
execution order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .clustering import (
    ClusterGuidedSource,
    OnlineReductionSource,
    choose_epsilon,
    epsilon_cover,
    extract_coreset,
)
from .errors import ConfigError
from .feasibility import (
    augment_with_pairs,
    binarize_rhs,
    count_violated_pairs,
    hadamard_transform,
)
from .matgen import (
    SpectrumSpec,
    generate_ill_conditioned,
    least_squares,
    make_system,
)
from .metrics import IterationTrace, TraceRecorder, chebyshev_center, mean_traces
from .sampling import SamplingStrategy, build_distribution
from .solvers import SolverConfig, run_solver
from .svgplot import line_chart

EXPERIMENTS = (
    "pairwise",
    "coreset",
    "cluster-variants",
    "spectral-convergence",
    "weighted-vs-uniform",
)

_COMMON_DEFAULTS = {
    "seed": 0,
    "x_star": "sphere",          # "sphere" | "last-unit" | "gaussian"
    "x0": {"mode": "sphere", "scale": 1.0},
}

DEFAULTS: dict[str, dict] = {
    "pairwise": {
        **_COMMON_DEFAULTS,
        "m": 240,
        "n": 12,
        "spectrum": {"kind": "exp-decay"},
        "trials": 100,
        "solver": {"beta": 3, "lambda": 1.0, "max_iterations": 2000, "stride": 10},
        "x0": {"mode": "sphere", "scale": 2.0},
        "schemes": ["scheme-base", "scheme-combined", "scheme-pairs"],
        "box_bound": None,       # None -> 2 * ||x*||_inf
    },
    "coreset": {
        "seed": 0,
        "x_star": "sphere",
        "m": 2000,
        "n": 20,
        "trials": 20,
        "kappas": [1e2, 1e4, 1e7],
        "c_values": [1, 2, 3, 4, 5],
    },
    "cluster-variants": {
        **_COMMON_DEFAULTS,
        "m": 2000,
        "n": 20,
        "spectrum": {"kind": "ratio", "kappa": 1e7},
        "trials": 10,
        "solver": {"beta": 1, "lambda": 1.0, "max_iterations": 2000, "stride": 20},
        "baseline_strategy": "sq-norm",
        "coreset_c": 5.0,
        "reduced_relation": "equality",   # coreset solved as reduced Ax = b
        "cluster": {
            "epsilon": None,              # None -> one-shot sweep for n..4n clusters
            "criterion": "normalized-distance",
            "reassign_every": 0,
            "mode": "best",
        },
    },
    "spectral-convergence": {
        "seed": 0,
        "x_star": "last-unit",
        "x0": {"mode": "zero", "scale": 0.0},
        "m": 240,
        "n": 12,
        "spectrum": {"kind": "exp-decay"},
        "trials": 50,
        "solver": {"beta": 1, "lambda": 1.0, "max_iterations": 2000, "stride": 10},
    },
    "weighted-vs-uniform": {
        "seed": 0,
        "x_star": "last-unit",
        "x0": {"mode": "zero", "scale": 0.0},
        "m": 240,
        "n": 12,
        "spectrum": {"kind": "ratio", "kappa": 1e2},
        "trials": 50,
        "solver": {"beta": 1, "lambda": 1.0, "max_iterations": 1_000_000, "stride": 16},
        "threshold": 1e-12,
    },
}


@dataclass
class ExperimentReport:
    """Aggregated output of one experiment run."""

    experiment: str
    config: dict
    mean_traces: dict[str, IterationTrace] = field(default_factory=dict)
    curves: dict[str, dict] = field(default_factory=dict)
    summary: list[dict] = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    trial_traces: dict[str, list[IterationTrace]] = field(default_factory=dict)

    @property
    def provenance(self) -> dict:
        return {
            "experiment": self.experiment,
            "version": f"kaczkit-{__version__}",
            "seed": self.config["seed"],
            "config": self.config,
        }


def _merge(defaults, overrides, path=""):
    out = {}
    for key, default in defaults.items():
        if isinstance(default, dict) and isinstance(overrides.get(key), dict):
            out[key] = _merge(default, overrides[key], f"{path}{key}.")
        elif key in overrides:
            out[key] = overrides[key]
        else:
            out[key] = default
    unknown = set(overrides) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(path + k for k in unknown)}")
    return out


def parse_config(doc: dict) -> dict:
    """Validate a raw config document against the experiment's defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    experiment = doc.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"experiment must be one of {EXPERIMENTS}, got {experiment!r}"
        )
    overrides = {k: v for k, v in doc.items() if k != "experiment"}
    cfg = _merge(DEFAULTS[experiment], overrides)
    cfg["experiment"] = experiment
    _validate(cfg)
    return cfg


def _validate(cfg):
    for key in ("m", "n", "trials"):
        if key in cfg and (not isinstance(cfg[key], int) or cfg[key] < 1):
            raise ConfigError(f"{key} must be a positive integer")
    if "m" in cfg and "n" in cfg and cfg["m"] < cfg["n"]:
        raise ConfigError("need m >= n")
    if not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigError("seed must be a non-negative integer")
    solver = cfg.get("solver")
    if solver:
        for key in ("beta", "max_iterations", "stride"):
            if not isinstance(solver[key], int) or solver[key] < 1:
                raise ConfigError(f"solver.{key} must be a positive integer")
        if not 0.0 < solver["lambda"] <= 2.0:
            raise ConfigError("solver.lambda must lie in (0, 2]")
    if cfg.get("x_star") not in ("sphere", "last-unit", "gaussian"):
        raise ConfigError(f"unknown x_star mode {cfg.get('x_star')!r}")
    x0 = cfg.get("x0")
    if x0 is not None and x0["mode"] not in ("zero", "sphere"):
        raise ConfigError(f"unknown x0 mode {x0['mode']!r}")
    spectrum = cfg.get("spectrum")
    if spectrum is not None:
        _spectrum_spec(spectrum)  # raises on bad kind/params
    if "schemes" in cfg:
        from .sampling import STRATEGY_KINDS

        bad = [s for s in cfg["schemes"] if s not in STRATEGY_KINDS]
        if bad:
            raise ConfigError(f"unknown sampling schemes: {bad}")
    if "reduced_relation" in cfg and cfg["reduced_relation"] not in (
        "equality",
        "feasibility",
    ):
        raise ConfigError("reduced_relation must be 'equality' or 'feasibility'")
    if "threshold" in cfg and not cfg["threshold"] > 0.0:
        raise ConfigError("threshold must be positive")


def _spectrum_spec(doc) -> SpectrumSpec:
    kind = doc.get("kind")
    if kind == "exp-decay":
        return SpectrumSpec.exponential_decay()
    if kind == "ratio":
        if "kappa" not in doc:
            raise ConfigError("ratio spectrum needs kappa")
        return SpectrumSpec.explicit_ratio(float(doc["kappa"]))
    if kind == "explicit":
        if "values" not in doc:
            raise ConfigError("explicit spectrum needs values")
        return SpectrumSpec.explicit(doc["values"])
    raise ConfigError(f"unknown spectrum kind {kind!r}")


def _trial_rng(seed: int, trial: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed ^ trial, stream]))


def _draw_x_star(mode: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if mode == "last-unit":
        x = np.zeros(n)
        x[-1] = 1.0
        return x
    v = rng.standard_normal(n)
    if mode == "sphere":
        return v / np.linalg.norm(v)
    return v


def _draw_x0(cfg_x0: dict, n: int, rng: np.random.Generator) -> np.ndarray | None:
    if cfg_x0["mode"] == "zero":
        return None
    v = rng.standard_normal(n)
    return float(cfg_x0["scale"]) * v / np.linalg.norm(v)


def _solver_config(solver_cfg: dict, stop_tolerance=None) -> SolverConfig:
    return SolverConfig(
        max_iterations=solver_cfg["max_iterations"],
        beta=solver_cfg["beta"],
        lam=solver_cfg["lambda"],
        stop_tolerance=stop_tolerance,
        trace_stride=solver_cfg["stride"],
    )


def run_pairwise(cfg: dict) -> ExperimentReport:
    """Compare the three sampling schemes on the pair-augmented system."""
    m, n = cfg["m"], cfg["n"]
    spectrum = _spectrum_spec(cfg["spectrum"])
    schemes = cfg["schemes"]
    traces: dict[str, list[IterationTrace]] = {s: [] for s in schemes}
    violated = []
    for t in range(cfg["trials"]):
        rng_gen = _trial_rng(cfg["seed"], t, 0)
        gen = generate_ill_conditioned(m, n, spectrum, rng_gen)
        x_star = _draw_x_star(cfg["x_star"], n, rng_gen)
        x0 = _draw_x0(cfg["x0"], n, rng_gen)
        a = gen.system.matrix
        labels = binarize_rhs(a, x_star)
        fs = augment_with_pairs(hadamard_transform(a, labels))
        fs.base.ground_truth = x_star
        violated.append(count_violated_pairs(fs, x_star))
        box = cfg["box_bound"] or 2.0 * float(np.max(np.abs(x_star)))
        cheb = chebyshev_center(fs.base.matrix, box)
        for vi, scheme in enumerate(schemes):
            dist = build_distribution(SamplingStrategy(scheme), fs)
            recorder = TraceRecorder(
                x_star=x_star, chebyshev=cheb, classification=(a, labels)
            )
            result = run_solver(
                fs.combined,
                _solver_config(cfg["solver"]),
                dist,
                x0=x0,
                recorder=recorder,
                rng=_trial_rng(cfg["seed"], t, 1 + vi),
            )
            traces[scheme].append(result.trace)

    report = ExperimentReport(experiment="pairwise", config=cfg, trial_traces=traces)
    for scheme in schemes:
        mean = mean_traces(traces[scheme])
        report.mean_traces[scheme] = mean
        report.summary.append(
            {
                "variant": scheme,
                "final_accuracy_pct": 100.0 * mean.accuracy[-1],
                "final_approx_error": mean.approximation_error[-1],
                "final_cheb_error": mean.chebyshev_error[-1],
            }
        )
    report.extras["mean_violated_pairs_at_solution"] = float(np.mean(violated))
    report.extras["pair_row_count"] = m * (m - 1) // 2
    return report


def run_coreset(cfg: dict) -> ExperimentReport:
    """Least-squares quality of score-based coresets across conditionings."""
    m, n = cfg["m"], cfg["n"]
    c_values = list(cfg["c_values"])
    report = ExperimentReport(experiment="coreset", config=cfg)
    per_trial: dict[str, dict[str, np.ndarray]] = {}
    for kappa in cfg["kappas"]:
        spectrum = SpectrumSpec.explicit_ratio(float(kappa))
        rel = np.zeros((cfg["trials"], len(c_values)))
        resid_full = np.zeros_like(rel)
        resid_core = np.zeros_like(rel)
        for t in range(cfg["trials"]):
            rng_gen = _trial_rng(cfg["seed"], t, 0)
            gen = generate_ill_conditioned(m, n, spectrum, rng_gen)
            x_star = _draw_x_star(cfg["x_star"], n, rng_gen)
            system = make_system(gen, x_star)
            x_a = least_squares(system.matrix, system.rhs)
            for ci, c in enumerate(c_values):
                reduced, _ = extract_coreset(system, float(c), x_star)
                x_b = least_squares(reduced.matrix, reduced.rhs)
                rel[t, ci] = np.linalg.norm(x_b - x_a) / np.linalg.norm(x_a)
                resid_full[t, ci] = np.linalg.norm(system.matrix @ x_b - system.rhs)
                resid_core[t, ci] = np.linalg.norm(reduced.matrix @ x_b - reduced.rhs)
        variant = f"kappa{kappa:g}"
        report.curves[variant] = {
            "c": np.asarray(c_values, dtype=float),
            "rel_error": rel.mean(axis=0),
            "resid_full": resid_full.mean(axis=0),
            "resid_coreset": resid_core.mean(axis=0),
        }
        per_trial[variant] = {"rel_error": rel}
        for ci, c in enumerate(c_values):
            report.summary.append(
                {
                    "variant": variant,
                    "c": float(c),
                    "rel_error": rel.mean(axis=0)[ci],
                    "resid_full": resid_full.mean(axis=0)[ci],
                    "resid_coreset": resid_core.mean(axis=0)[ci],
                }
            )
    report.extras["per_trial"] = per_trial
    return report


def _cluster_variant_order():
    return ("hadamard-skm", "reduced-skm", "cluster-skm", "online-skm")


def run_cluster_variants(cfg: dict) -> ExperimentReport:
    """Baseline sign-scaled solver against the three reduction strategies."""
    m, n = cfg["m"], cfg["n"]
    spectrum = _spectrum_spec(cfg["spectrum"])
    variants = _cluster_variant_order()
    traces: dict[str, list[IterationTrace]] = {v: [] for v in variants}
    epsilons = []
    for t in range(cfg["trials"]):
        rng_gen = _trial_rng(cfg["seed"], t, 0)
        gen = generate_ill_conditioned(m, n, spectrum, rng_gen)
        x_star = _draw_x_star(cfg["x_star"], n, rng_gen)
        x0 = _draw_x0(cfg["x0"], n, rng_gen)
        eq_system = make_system(gen, x_star)
        a = eq_system.matrix
        labels = binarize_rhs(a, x_star)
        fs = hadamard_transform(a, labels)
        fs.base.ground_truth = x_star
        solver_cfg = _solver_config(cfg["solver"])

        def run(vi, system, sampler):
            recorder = TraceRecorder(x_star=x_star, classification=(a, labels))
            return run_solver(
                system, solver_cfg, sampler, x0=x0, recorder=recorder,
                rng=_trial_rng(cfg["seed"], t, 1 + vi),
            ).trace

        base_dist = build_distribution(
            SamplingStrategy(cfg["baseline_strategy"]), fs.base
        )
        traces["hadamard-skm"].append(run(0, fs.base, base_dist))

        if cfg["reduced_relation"] == "equality":
            reduced, _ = extract_coreset(eq_system, cfg["coreset_c"], x_star)
        else:
            reduced, _ = extract_coreset(fs.base, cfg["coreset_c"], x_star)
        reduced_dist = build_distribution(SamplingStrategy("uniform"), reduced)
        traces["reduced-skm"].append(run(1, reduced, reduced_dist))

        ccfg = cfg["cluster"]
        eps = ccfg["epsilon"] or choose_epsilon(
            fs.base.matrix, n, 4 * n, criterion=ccfg["criterion"]
        )
        epsilons.append(eps)
        partition = epsilon_cover(fs.base.matrix, eps, criterion=ccfg["criterion"])
        source = ClusterGuidedSource(
            fs.base.matrix,
            partition,
            mode=ccfg["mode"],
            reassign_every=ccfg["reassign_every"],
            criterion=ccfg["criterion"],
        )
        traces["cluster-skm"].append(run(2, fs.base, source))

        traces["online-skm"].append(run(3, fs.base, OnlineReductionSource(fs.base)))

    report = ExperimentReport(
        experiment="cluster-variants", config=cfg, trial_traces=traces
    )
    for variant in variants:
        mean = mean_traces(traces[variant])
        report.mean_traces[variant] = mean
        report.summary.append(
            {
                "variant": variant,
                "final_accuracy_pct": 100.0 * mean.accuracy[-1],
                "final_approx_error": mean.approximation_error[-1],
            }
        )
    report.extras["epsilons"] = epsilons
    report.extras["final_accuracy_per_trial"] = {
        v: [100.0 * tr.accuracy[-1] for tr in traces[v]] for v in variants
    }
    return report


def run_spectral_convergence(cfg: dict) -> ExperimentReport:
    """Per-direction error decay under uniform sampling."""
    m, n = cfg["m"], cfg["n"]
    spectrum = _spectrum_spec(cfg["spectrum"])
    traces = []
    for t in range(cfg["trials"]):
        rng_gen = _trial_rng(cfg["seed"], t, 0)
        gen = generate_ill_conditioned(m, n, spectrum, rng_gen)
        x_star = _draw_x_star(cfg["x_star"], n, rng_gen)
        x0 = _draw_x0(cfg["x0"], n, rng_gen)
        system = make_system(gen, x_star)
        recorder = TraceRecorder(x_star=x_star, v_factor=gen.v_factor)
        result = run_solver(
            system,
            _solver_config(cfg["solver"]),
            SamplingStrategy("uniform"),
            x0=x0,
            recorder=recorder,
            rng=_trial_rng(cfg["seed"], t, 1),
        )
        traces.append(result.trace)
    report = ExperimentReport(
        experiment="spectral-convergence", config=cfg,
        trial_traces={"uniform": traces},
    )
    mean = mean_traces(traces)
    report.mean_traces["uniform"] = mean
    row = {"variant": "uniform", "final_approx_error": mean.approximation_error[-1]}
    for j in range(n):
        row[f"final_sing_err_{j + 1}"] = mean.singular_errors[-1, j]
    report.summary.append(row)
    return report


def run_weighted_vs_uniform(cfg: dict) -> ExperimentReport:
    """Paired uniform vs spectrally weighted runs with a convergence target."""
    m, n = cfg["m"], cfg["n"]
    spectrum = _spectrum_spec(cfg["spectrum"])
    tau = float(cfg["threshold"])
    budget = cfg["solver"]["max_iterations"]
    arms = ("uniform", "spectral")
    traces: dict[str, list[IterationTrace]] = {arm: [] for arm in arms}
    iters: dict[str, list[int]] = {arm: [] for arm in arms}
    crossed: dict[str, list[bool]] = {arm: [] for arm in arms}
    for t in range(cfg["trials"]):
        rng_gen = _trial_rng(cfg["seed"], t, 0)
        gen = generate_ill_conditioned(m, n, spectrum, rng_gen)
        x_star = _draw_x_star(cfg["x_star"], n, rng_gen)
        x0 = _draw_x0(cfg["x0"], n, rng_gen)
        system = make_system(gen, x_star)
        v_last = gen.v_factor[:, -1]
        strategies = {
            "uniform": SamplingStrategy("uniform"),
            "spectral": SamplingStrategy("spectral", vector=v_last),
        }
        for vi, arm in enumerate(arms):
            recorder = TraceRecorder(x_star=x_star, v_factor=gen.v_factor)
            result = run_solver(
                system,
                _solver_config(cfg["solver"], stop_tolerance=tau),
                strategies[arm],
                x0=x0,
                recorder=recorder,
                rng=_trial_rng(cfg["seed"], t, 1 + vi),
            )
            traces[arm].append(result.trace)
            hit = result.reason == "tolerance"
            crossed[arm].append(hit)
            iters[arm].append(result.iterations if hit else budget)

    report = ExperimentReport(
        experiment="weighted-vs-uniform", config=cfg, trial_traces=traces
    )
    for arm in arms:
        mean = mean_traces(traces[arm])
        report.mean_traces[arm] = mean
        report.summary.append(
            {
                "variant": arm,
                "mean_iterations_to_threshold": float(np.mean(iters[arm])),
                "runs_not_crossing": int(sum(not c for c in crossed[arm])),
                "final_approx_error": mean.approximation_error[-1],
            }
        )
    ratio = float(np.mean(iters["spectral"]) / np.mean(iters["uniform"]))
    per_trial_ratio = [s / u for s, u in zip(iters["spectral"], iters["uniform"])]
    report.extras["iterations"] = {arm: iters[arm] for arm in arms}
    report.extras["iteration_ratio_mean_of_means"] = ratio
    report.extras["iteration_ratio_per_trial"] = per_trial_ratio
    report.summary.append(
        {
            "variant": "ratio-spectral-over-uniform",
            "mean_iterations_to_threshold": ratio,
            "runs_not_crossing": 0,
            "final_approx_error": float("nan"),
        }
    )
    return report


_RUNNERS = {
    "pairwise": run_pairwise,
    "coreset": run_coreset,
    "cluster-variants": run_cluster_variants,
    "spectral-convergence": run_spectral_convergence,
    "weighted-vs-uniform": run_weighted_vs_uniform,
}


def run_experiment(cfg: dict) -> ExperimentReport:
    return _RUNNERS[cfg["experiment"]](cfg)


# ---------------------------------------------------------------------------
# artifact emission

_LOG_METRICS = {"approx_error", "cheb_error", "rel_error", "resid_full",
                "resid_coreset", "singular_errors"}


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write artifact {path}: {exc}") from exc


def emit_artifacts(report: ExperimentReport, out_dir, keep_trials: bool = False):
    """Write trace CSVs, summary.csv, config_echo.json, and SVG plots.

    Returns the list of written paths. Identical reports produce
    byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name, text):
        path = out / name
        _write(path, text)
        written.append(path)

    emit(
        "config_echo.json",
        json.dumps(report.provenance, indent=2, sort_keys=True, default=str) + "\n",
    )

    if report.summary:
        keys = list(report.summary[0].keys())
        lines = [",".join(keys)]
        for row in report.summary:
            lines.append(",".join(_fmt_value(row[k]) for k in keys))
        emit("summary.csv", "\n".join(lines) + "\n")

    # iteration-indexed experiments
    metric_series: dict[str, list[tuple[str, np.ndarray, np.ndarray]]] = {}
    for variant, trace in report.mean_traces.items():
        for metric, values in trace.series().items():
            if metric == "singular_errors":
                header = ["iteration"] + [
                    f"sing_err_{j + 1}" for j in range(values.shape[1])
                ]
                rows = [
                    ",".join([str(int(k))] + [f"{v:.17g}" for v in values[r]])
                    for r, k in enumerate(trace.iterations)
                ]
                emit(
                    f"trace_{variant}_singular_errors.csv",
                    ",".join(header) + "\n" + "\n".join(rows) + "\n",
                )
                if len(report.mean_traces) == 1:
                    series = [
                        (f"direction {j + 1}", trace.iterations, values[:, j])
                        for j in range(values.shape[1])
                    ]
                    emit(
                        "plot_singular_errors.svg",
                        line_chart(series, "error per singular direction",
                                   "iteration", "|<x - x*, v_j>|", log_y=True),
                    )
                else:
                    metric_series.setdefault("sing_err_last", []).append(
                        (variant, trace.iterations, values[:, -1])
                    )
                continue
            rows = [
                f"{int(k)},{values[r]:.17g}" for r, k in enumerate(trace.iterations)
            ]
            emit(
                f"trace_{variant}_{metric}.csv",
                f"iteration,{metric}\n" + "\n".join(rows) + "\n",
            )
            metric_series.setdefault(metric, []).append(
                (variant, trace.iterations, values)
            )
    for metric, series in metric_series.items():
        emit(
            f"plot_{metric}.svg",
            line_chart(series, metric.replace("_", " "), "iteration", metric,
                       log_y=metric in _LOG_METRICS),
        )

    # parameter-sweep experiments (coreset): curves indexed by c
    sweep_series: dict[str, list[tuple[str, np.ndarray, np.ndarray]]] = {}
    for variant, curve in report.curves.items():
        xs = curve["c"]
        names = [k for k in curve if k != "c"]
        header = ",".join(["c"] + names)
        rows = [
            ",".join([f"{xs[r]:.17g}"] + [f"{curve[k][r]:.17g}" for k in names])
            for r in range(len(xs))
        ]
        emit(f"trace_{variant}.csv", header + "\n" + "\n".join(rows) + "\n")
        sweep_series.setdefault("rel_error", []).append(
            (variant, xs, curve["rel_error"])
        )
        sweep_series.setdefault("residuals", []).append(
            (f"{variant} full", xs, curve["resid_full"])
        )
        sweep_series.setdefault("residuals", []).append(
            (f"{variant} coreset", xs, curve["resid_coreset"])
        )
    if sweep_series:
        emit(
            "plot_rel_error.svg",
            line_chart(sweep_series["rel_error"], "coreset relative error",
                       "coreset factor c", "rel error", log_y=True),
        )
        emit(
            "plot_residuals.svg",
            line_chart(sweep_series["residuals"], "residual norms",
                       "coreset factor c", "residual", log_y=True),
        )

    if keep_trials:
        for variant, trial_list in report.trial_traces.items():
            tdir = out / "trials" / variant
            tdir.mkdir(parents=True, exist_ok=True)
            for idx, trace in enumerate(trial_list):
                path = tdir / f"trial_{idx}.csv"
                _write(path, trace.to_csv())
                written.append(path)
        for variant, data in report.extras.get("per_trial", {}).items():
            tdir = out / "trials" / variant
            tdir.mkdir(parents=True, exist_ok=True)
            rel = data["rel_error"]
            c_values = report.curves[variant]["c"]
            for idx in range(rel.shape[0]):
                rows = [
                    f"{c_values[r]:.17g},{rel[idx, r]:.17g}"
                    for r in range(rel.shape[1])
                ]
                path = tdir / f"trial_{idx}.csv"
                _write(path, "c,rel_error\n" + "\n".join(rows) + "\n")
                written.append(path)

    return written
