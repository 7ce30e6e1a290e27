"""Covariance matrix adaptation evolution strategy (maximization).

Generic ask/tell optimizer over a bounded box, plus the driver and result
writers for the two-parameter throwing study. Parameters are normalized to
the unit box internally so a single step size can span dimensions measured
in different units (degrees and meters); sigma0 is interpreted in normalized
units.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import catapult, errors

# -- configuration -----------------------------------------------------------


def default_population(n):
    return 4 + int(3 * math.log(n))


@dataclass(frozen=True)
class CmaConfig:
    dimension: int
    bounds: tuple                   # ((lo, hi), ...) per dimension
    sigma0: float = 0.025           # normalized units
    population: int = None          # default 4 + floor(3 ln n)
    max_generations: int = 200
    seed: int = 0
    start: tuple = None             # problem units; None -> uniform random

    def __post_init__(self):
        if self.population is None:
            object.__setattr__(self, "population", default_population(self.dimension))
        if len(self.bounds) != self.dimension:
            raise errors.BadBounds(
                f"{len(self.bounds)} bound pairs for dimension {self.dimension}",
                entity="bounds",
            )
        for i, (lo, hi) in enumerate(self.bounds):
            if not lo < hi:
                raise errors.BadBounds(
                    f"bounds[{i}] = [{lo}, {hi}] is empty", entity=f"bounds[{i}]"
                )
        if self.population < 2:
            raise errors.BadBounds(
                f"population {self.population} < 2", entity="population"
            )
        if self.sigma0 <= 0:
            raise errors.BadBounds(f"sigma0 {self.sigma0} <= 0", entity="sigma0")

    @property
    def mu(self):
        return self.population // 2


def _weights(config):
    """Log-rank recombination weights for the top mu candidates, sum 1."""
    mu = config.mu
    raw = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    return raw / raw.sum()


class _Constants:
    """Standard strategy constants for given (dimension, population)."""

    def __init__(self, config):
        n = config.dimension
        w = _weights(config)
        mu_eff = 1.0 / float(w @ w)
        self.weights = w
        self.mu_eff = mu_eff
        self.c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0)
        self.d_sigma = (
            1.0
            + 2.0 * max(0.0, math.sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0)
            + self.c_sigma
        )
        self.c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n)
        self.c_1 = 2.0 / ((n + 1.3) ** 2 + mu_eff)
        self.c_mu = min(
            1.0 - self.c_1,
            2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) ** 2 + mu_eff),
        )
        # E||N(0, I)||
        self.chi_n = math.sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n))


# -- state -------------------------------------------------------------------


@dataclass
class CmaState:
    config: CmaConfig
    mean: np.ndarray                # normalized
    covariance: np.ndarray
    sigma: float
    p_sigma: np.ndarray
    p_c: np.ndarray
    generation: int
    rng: np.random.Generator
    constants: _Constants = field(repr=False, default=None)


def _lo_hi(config):
    b = np.asarray(config.bounds, dtype=float)
    return b[:, 0], b[:, 1]


def _to_unit(x, config):
    lo, hi = _lo_hi(config)
    return (np.asarray(x, dtype=float) - lo) / (hi - lo)


def _from_unit(u, config):
    lo, hi = _lo_hi(config)
    return lo + np.asarray(u, dtype=float) * (hi - lo)


def cma_init(config):
    rng = np.random.Generator(np.random.PCG64(config.seed))
    if config.start is not None:
        mean = _to_unit(config.start, config)
        if np.any(mean < 0.0) or np.any(mean > 1.0):
            raise errors.BadBounds(
                f"start {tuple(config.start)} outside bounds", entity="start"
            )
    else:
        mean = rng.random(config.dimension)
    n = config.dimension
    return CmaState(
        config=config,
        mean=mean,
        covariance=np.eye(n),
        sigma=config.sigma0,
        p_sigma=np.zeros(n),
        p_c=np.zeros(n),
        generation=0,
        rng=rng,
        constants=_Constants(config),
    )


def _decompose(state):
    """Eigendecomposition of C with the spectrum floored for conditioning."""
    c = 0.5 * (state.covariance + state.covariance.T)
    vals, vecs = np.linalg.eigh(c)
    floor = 1e-14 * float(np.trace(c))
    d = np.sqrt(np.maximum(vals, floor))
    return vecs, d


# -- ask / tell --------------------------------------------------------------


def ask(state):
    """Sample one population, in problem units, all within bounds.

    Out-of-bounds candidates are redrawn up to 100 times, then clipped.
    """
    vecs, d = _decompose(state)
    out = np.empty((state.config.population, state.config.dimension))
    for k in range(state.config.population):
        for _ in range(100):
            z = state.rng.standard_normal(state.config.dimension)
            u = state.mean + state.sigma * (vecs @ (d * z))
            if np.all(u >= 0.0) and np.all(u <= 1.0):
                break
        else:
            u = np.clip(u, 0.0, 1.0)
        out[k] = _from_unit(u, state.config)
    return out


def tell(state, candidates, fitnesses):
    """Standard update: recombine top mu, adapt paths, sigma, and C."""
    cfg = state.config
    cs = state.constants
    candidates = np.asarray(candidates, dtype=float)
    fitnesses = np.asarray(fitnesses, dtype=float)
    if len(candidates) != cfg.population or len(fitnesses) != cfg.population:
        raise errors.LengthMismatch(
            f"got {len(candidates)} candidates, {len(fitnesses)} fitnesses "
            f"for population {cfg.population}",
            entity="population",
        )

    # rank by fitness, best first; stable so ties keep sample order
    order = np.argsort(-fitnesses, kind="stable")[: cfg.mu]
    u_sel = np.array([_to_unit(candidates[i], cfg) for i in order])
    y_sel = (u_sel - state.mean) / state.sigma
    y_w = cs.weights @ y_sel

    vecs, d = _decompose(state)
    c_inv_half = vecs @ ((vecs / d).T)

    mean_old = state.mean
    state.mean = mean_old + state.sigma * y_w

    n = cfg.dimension
    state.p_sigma = (1.0 - cs.c_sigma) * state.p_sigma + math.sqrt(
        cs.c_sigma * (2.0 - cs.c_sigma) * cs.mu_eff
    ) * (c_inv_half @ y_w)
    ps_norm = float(np.linalg.norm(state.p_sigma))
    decay = 1.0 - (1.0 - cs.c_sigma) ** (2.0 * (state.generation + 1))
    h_sigma = ps_norm / math.sqrt(decay) < (1.4 + 2.0 / (n + 1.0)) * cs.chi_n

    state.p_c = (1.0 - cs.c_c) * state.p_c + (
        h_sigma * math.sqrt(cs.c_c * (2.0 - cs.c_c) * cs.mu_eff)
    ) * y_w

    rank_one = np.outer(state.p_c, state.p_c)
    if not h_sigma:
        # compensate the missing rank-one mass when the update is stalled
        rank_one = rank_one + cs.c_c * (2.0 - cs.c_c) * state.covariance
    rank_mu = (y_sel.T * cs.weights) @ y_sel
    c = (
        (1.0 - cs.c_1 - cs.c_mu) * state.covariance
        + cs.c_1 * rank_one
        + cs.c_mu * rank_mu
    )

    # re-symmetrize and floor the spectrum so C stays usable indefinitely
    c = 0.5 * (c + c.T)
    vals, vecs = np.linalg.eigh(c)
    floor = 1e-14 * float(np.trace(c))
    state.covariance = (vecs * np.maximum(vals, floor)) @ vecs.T
    state.covariance = 0.5 * (state.covariance + state.covariance.T)

    state.sigma = state.sigma * math.exp(
        (cs.c_sigma / cs.d_sigma) * (ps_norm / cs.chi_n - 1.0)
    )
    state.generation += 1
    return state


# -- driver ------------------------------------------------------------------


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_params: tuple
    best_fitness: float     # max over this generation's population
    mean: tuple             # distribution mean after the update, problem units
    sigma: float


@dataclass(frozen=True)
class OptResult:
    best_params: tuple
    best_fitness: float
    records: tuple          # GenerationRecord per generation, 0 = initial mean
    config: CmaConfig


def _as_floats(x):
    return tuple(float(v) for v in x)


def _call_with_retries(objective, x):
    last = None
    for _ in range(4):
        try:
            return objective(x)
        except Exception as exc:    # noqa: BLE001 - retry anything, then raise
            last = exc
    raise last


def optimize(objective, config, progress=None):
    """Run ask/tell for max_generations; returns the best-ever candidate.

    The initial mean is always evaluated (generation 0), so the result is
    well-defined even for max_generations = 0. Candidate evaluation is
    index-ordered, which keeps results bitwise reproducible per seed.
    """
    state = cma_init(config)
    x0 = _as_floats(_from_unit(state.mean, config))
    f0 = float(_call_with_retries(objective, x0))
    best_x, best_f = x0, f0
    records = [GenerationRecord(0, x0, f0, x0, state.sigma)]
    for _ in range(config.max_generations):
        candidates = ask(state)
        fits = np.array(
            [float(_call_with_retries(objective, x)) for x in candidates]
        )
        tell(state, candidates, fits)
        k = int(np.argmax(fits))
        if fits[k] > best_f:
            best_x, best_f = _as_floats(candidates[k]), float(fits[k])
        records.append(
            GenerationRecord(
                state.generation,
                _as_floats(candidates[k]),
                float(fits[k]),
                _as_floats(_from_unit(state.mean, config)),
                state.sigma,
            )
        )
        if progress is not None:
            progress(state.generation, config.max_generations)
    return OptResult(best_x, best_f, tuple(records), config)


# -- throwing study ----------------------------------------------------------

CATAPULT_BOUNDS = (catapult.THETA_RANGE, catapult.ARM_RANGE)


def catapult_objective(protocol=None, material=None, scene=None):
    """Objective closure over (theta, arm_length); failures score 0.

    Domain failures (diverged rollout, sphere never at rest) are recorded on
    the closure's ``failures`` list and mapped to fitness 0 so a run can
    continue through bad corners of the box.
    """

    def objective(x):
        params = catapult.CatapultParams(float(x[0]), float(x[1]))
        try:
            return catapult.evaluate(params, protocol, material, scene)
        except errors.FoldsimError as exc:
            objective.failures.append((params, type(exc).code))
            return 0.0

    objective.failures = []
    return objective


def optimize_catapult(
    seed,
    generations=200,
    sigma0=0.025,
    population=None,
    start=None,
    protocol=None,
    material=None,
    scene=None,
    progress=None,
):
    """One seeded optimization run of the throwing study."""
    if start is None:
        start = catapult.INITIAL_PARAMS
    config = CmaConfig(
        dimension=2,
        bounds=CATAPULT_BOUNDS,
        sigma0=sigma0,
        population=population,
        max_generations=generations,
        seed=seed,
        start=(start.theta, start.arm_length),
    )
    return optimize(
        catapult_objective(protocol, material, scene), config, progress=progress
    )


# -- result files ------------------------------------------------------------


def format_result(result):
    """Structured text: config echo, per-generation records, best candidate."""
    cfg = result.config
    lines = [
        "cma-es result",
        f"dimension {cfg.dimension}",
        f"bounds {' '.join(f'[{lo!r},{hi!r}]' for lo, hi in cfg.bounds)}",
        f"sigma0 {cfg.sigma0!r}",
        f"population {cfg.population}",
        f"max_generations {cfg.max_generations}",
        f"seed {cfg.seed}",
        f"start {'random' if cfg.start is None else tuple(cfg.start)!r}",
        "",
        "generation best_params best_fitness mean sigma",
    ]
    for r in result.records:
        bp = " ".join(repr(v) for v in r.best_params)
        m = " ".join(repr(v) for v in r.mean)
        lines.append(f"{r.generation} {bp} {r.best_fitness!r} {m} {r.sigma!r}")
    lines += [
        "",
        f"best_params {' '.join(repr(v) for v in result.best_params)}",
        f"best_fitness {result.best_fitness!r}",
    ]
    return "\n".join(lines) + "\n"


def write_result(result, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_result(result))


def write_trajectory_csv(result, path):
    """Per-generation best for heatmap overlays (two-parameter study)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("generation,theta_deg,l_m,fitness_m,sigma\n")
        for r in result.records:
            fh.write(
                f"{r.generation},{r.best_params[0]!r},{r.best_params[1]!r},"
                f"{r.best_fitness!r},{r.sigma!r}\n"
            )
