"""Genetic-algorithm search over pulse coefficients, detunings and duration.

The fitness is the negative decay-penalized cost of the evaluated gate minus
a soft penalty for waveform peaks exceeding the amplitude caps.  Search-time
gate evaluations use a coarsened integration grid for speed; the best genome
is re-evaluated on the accurate default grid before being reported.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import IntegrationError, metrics
from .dynamics import default_steps
from .pulses import PulseSpec, pulse_peak, rescale_duration

VARIANTS = ("sa", "asa-free", "asa-rescaled")

_WORST_FITNESS = -1e9


@dataclass(frozen=True)
class GAConfig:
    """Genetic-algorithm settings; defaults reproduce the benchmark search."""

    population: int = 100
    generations: int = 20
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_rate: float = 0.15
    mutation_sigma: float = 0.05      # std dev as a fraction of the gene range
    elitism: int = 2
    penalty_weight: float = 10.0
    seed: int = 0
    variant: str = "sa"
    beta_range: tuple = (0.0, 200.0)          # MHz
    delta_opt_range: tuple = (-10.0, 10.0)    # MHz
    alpha_range: tuple = (0.9, 1.0)
    duration_range: tuple | None = None       # us; None keeps the scenario duration
    search_dt_rad: float = 2.0                # coarse dt*||H|| during the search
    search_min_steps: int = 800
    search_norm_tol: float = 1e-3             # relaxed drift guard during the search

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if not 0 <= self.elitism < self.population:
            raise ValueError("elitism must be in [0, population)")
        for name in ("beta_range", "delta_opt_range", "alpha_range"):
            lo, hi = getattr(self, name)
            if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
                raise ValueError(f"{name} must be finite with low <= high")

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass
class RunResult:
    """Outcome of one GA run."""

    best_genome: np.ndarray
    best_result: metrics.GateResult
    best_fitness: float
    history: list                 # best fitness per generation (monotone)
    wall_time: float
    config: GAConfig

    def to_dict(self):
        return {
            "best_genome": [float(g) for g in self.best_genome],
            "best_result": self.best_result.to_dict(),
            "best_fitness": self.best_fitness,
            "history": [float(h) for h in self.history],
            "wall_time": self.wall_time,
            "variant": self.config.variant,
            "seed": self.config.seed,
        }


def gene_bounds(config, scenario):
    """Per-gene (low, high) array for the configured variant."""
    beta = [config.beta_range] * 4
    if config.duration_range is not None:
        lo, hi = config.duration_range
        duration = [(max(lo, 1e-3), hi)]
    else:
        duration = []
    if config.variant == "sa":
        rows = beta + [config.delta_opt_range] + duration
    elif config.variant == "asa-free":
        rows = beta + beta + [config.delta_opt_range, config.alpha_range] + duration
    else:  # asa-rescaled: ancillary coefficients, alpha, duration
        rows = beta + [config.alpha_range] + (duration or [(1e-3, scenario.pulse1.duration_t)])
    return np.asarray(rows, dtype=float)


def decode(genome, config, scenario):
    """Genome -> (params, pulse1, pulsec) for one gate evaluation."""
    genome = np.asarray(genome, dtype=float)
    params = scenario.params
    t_default = scenario.pulse1.duration_t
    from .model import mhz

    if config.variant == "sa":
        beta1 = tuple(genome[:4])
        delta_opt = mhz(genome[4])
        duration = genome[5] if config.duration_range is not None else t_default
        return (params.with_(delta_opt=delta_opt, alpha=None),
                PulseSpec(beta=beta1, duration_t=float(duration)), None)
    if config.variant == "asa-free":
        beta1 = tuple(genome[:4])
        betac = tuple(genome[4:8])
        delta_opt = mhz(genome[8])
        alpha = float(genome[9])
        duration = genome[10] if config.duration_range is not None else t_default
        return (params.with_(delta_opt=delta_opt, alpha=alpha),
                PulseSpec(beta=beta1, duration_t=float(duration)),
                PulseSpec(beta=betac, duration_t=float(duration)))
    # asa-rescaled: keep the probe waveform shape and detuning, optimize the
    # ancillary coefficients, alpha and the (compressed) duration.
    betac = tuple(genome[:4])
    alpha = float(genome[4])
    duration = float(genome[5])
    pulse1 = rescale_duration(scenario.pulse1, duration)
    return (params.with_(alpha=alpha), pulse1,
            PulseSpec(beta=betac, duration_t=duration))


def amplitude_penalty(config, params, pulse1, pulsec):
    """Soft quadratic penalty for waveform peaks above the amplitude caps."""
    penalty = 0.0
    for spec, cap in ((pulse1, params.amp_cap_1), (pulsec, params.amp_cap_c)):
        if spec is None or cap <= 0:
            continue
        excess = pulse_peak(spec) / cap - 1.0
        if excess > 0:
            penalty += config.penalty_weight * excess**2
    return penalty


def _search_steps(config, params, pulse1, pulsec):
    h2 = metrics.build_hamiltonian(params, pulse1, pulsec, two_atom=True)
    return default_steps(h2, pulse1.duration_t, dt_rad=config.search_dt_rad,
                         min_steps=config.search_min_steps)


def evaluate_individual(genome, config, scenario, steps=None, store_points=41):
    """Fitness -(J + cap penalty) of one genome; failed evolutions score worst.

    A coarse-grid integration failure is retried on successively doubled
    step counts before the genome is written off.
    """
    try:
        params, pulse1, pulsec = decode(genome, config, scenario)
    except ValueError:
        return _WORST_FITNESS
    if steps is None:
        steps = _search_steps(config, params, pulse1, pulsec)
    result = None
    for attempt in range(3):
        try:
            result, _ = metrics.evaluate_gate(
                params, pulse1, pulsec, steps=steps * (2**attempt),
                store_points=store_points, norm_tol=config.search_norm_tol)
            break
        except (IntegrationError, ValueError):
            continue
    if result is None:
        return _WORST_FITNESS
    return -(result.cost_j + amplitude_penalty(config, params, pulse1, pulsec))


def _tournament(rng, fitness, size):
    picks = rng.integers(0, fitness.size, size=size)
    return picks[np.argmax(fitness[picks])]


def run_ga(config, scenario, progress=None):
    """One full GA run: random initialization through the final generation.

    Deterministic given (config, scenario).  ``progress`` is an optional
    callback (generation, best_fitness).  The returned best GateResult is
    re-evaluated on the accurate default integration grid.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    bounds = gene_bounds(config, scenario)
    lo, hi = bounds[:, 0], bounds[:, 1]
    span = hi - lo
    n_genes = bounds.shape[0]

    population = lo + rng.random((config.population, n_genes)) * span
    fitness = np.array([evaluate_individual(g, config, scenario) for g in population])
    history = [float(fitness.max())]
    if progress is not None:
        progress(0, history[-1])

    for gen in range(1, config.generations + 1):
        order = np.argsort(fitness)[::-1]
        children = [population[i].copy() for i in order[: config.elitism]]
        while len(children) < config.population:
            p1 = population[_tournament(rng, fitness, config.tournament_size)]
            p2 = population[_tournament(rng, fitness, config.tournament_size)]
            if rng.random() < config.crossover_rate:
                mask = rng.random(n_genes) < 0.5
                child = np.where(mask, p1, p2)
            else:
                child = p1.copy()
            mutate = rng.random(n_genes) < config.mutation_rate
            child = child + mutate * rng.normal(0.0, config.mutation_sigma * span)
            children.append(np.clip(child, lo, hi))
        population = np.asarray(children)
        fitness = np.array([evaluate_individual(g, config, scenario) for g in population])
        history.append(max(history[-1], float(fitness.max())))
        if progress is not None:
            progress(gen, history[-1])

    best = population[int(np.argmax(fitness))]
    params, pulse1, pulsec = decode(best, config, scenario)
    best_result, _ = metrics.evaluate_gate(params, pulse1, pulsec)
    best_fitness = -(best_result.cost_j + amplitude_penalty(config, params, pulse1, pulsec))
    return RunResult(
        best_genome=best,
        best_result=best_result,
        best_fitness=best_fitness,
        history=history,
        wall_time=time.perf_counter() - start,
        config=config,
    )


@dataclass
class BatchStatistics:
    """Summary of independent GA runs."""

    fidelities: list
    mean: float
    std: float
    best: float
    runs: list = field(default_factory=list)

    def to_dict(self):
        return {
            "fidelities": self.fidelities,
            "mean": self.mean,
            "std": self.std,
            "best": self.best,
        }


def batch_runs(config, scenario, n_runs, progress=None, keep_runs=False):
    """Independent GA runs with partitioned RNG streams; reports F statistics.

    The per-run figure of merit is the realistic fidelity of the accurate
    re-evaluation of that run's best genome.
    """
    if n_runs < 2:
        raise ValueError("n_runs must be >= 2")
    seeds = [int(seq.generate_state(1, np.uint64)[0])
             for seq in np.random.SeedSequence(config.seed).spawn(n_runs)]
    fidelities = []
    runs = []
    for i, run_seed in enumerate(seeds):
        run_config = config.with_(seed=run_seed)
        result = run_ga(run_config, scenario)
        fidelities.append(float(result.best_result.fidelity_realistic))
        if keep_runs:
            runs.append(result)
        if progress is not None:
            progress(i, fidelities[-1])
    arr = np.asarray(fidelities)
    return BatchStatistics(
        fidelities=fidelities,
        mean=float(arr.mean()),
        std=float(arr.std(ddof=1)),
        best=float(arr.max()),
        runs=runs,
    )
