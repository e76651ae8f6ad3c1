"""Scenario-driven Monte Carlo experiment runner.

A scenario is one INI-style file describing a data-generating truth, a
testing paradigm and its parameters, a replication count and a seed. Runs
are bit-reproducible: replication i draws from seed.rng(i) regardless of
worker count, and reducers only ever merge order-independent per-rep
results. The single machine-readable output is CSV with floats at 12
significant digits; wall-clock time is the one field excluded from
reproducibility comparisons.

Scenario keys
-------------
[scenario]    name, paradigm, truth (H|K), reps, seed-root, seed-stream
[hypothesis-h] / [hypothesis-k]   symbol = probability (decimal/fraction)
[gaussian]    mu-h, mu-k, sigma
[params]      paradigm-specific:
  fisher             n, k, theta, direction (ge|le|abs), level
                     -- or observed = SYMBOL with [hypothesis-h]
  lr                 s, horizon (sequential monitor)  |  n (one-shot),
                     checkpoints (trajectory summary points, default
                     quarters of n)
  bayes              n, prior-h
  np                 n, alpha (omit alpha for the midpoint rule)
  map                n, prior-h
  hoeffding          n, delta
  optional-stopping  alpha, looks (space-separated), s, lr-eta
"""

from __future__ import annotations

import configparser
import csv
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import evidential, fisher, info_geometry, neyman_pearson
from .dist import (
    FiniteDistribution,
    GaussianPair,
    Seed,
    _finite_indices,
    gaussian_cdf,
    gaussian_quantile,
    parse_probability,
)
from .errors import ScenarioError, TestlabError
from .evidential import Priors, log_ratio_table
from .montecarlo import MCEstimate, mean_estimate, rate_estimate

PARADIGMS = (
    "fisher",
    "lr",
    "bayes",
    "np",
    "map",
    "hoeffding",
    "optional-stopping",
)

_CHUNK = 1024  # fixed chunking so worker count cannot reorder anything

THREADS_ENV_VAR = "TESTLAB_THREADS"


@dataclass(frozen=True)
class Scenario:
    name: str
    paradigm: str
    truth: str = "H"
    reps: int = 0
    seed: Seed = Seed(0)
    h: Optional[FiniteDistribution] = None
    k: Optional[FiniteDistribution] = None
    gaussian: Optional[GaussianPair] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.paradigm not in PARADIGMS:
            raise ScenarioError(
                f"unknown paradigm {self.paradigm!r}; expected one of {PARADIGMS}"
            )
        if self.truth not in ("H", "K"):
            raise ScenarioError(f"truth must be H or K, got {self.truth!r}")
        if self.reps < 0:
            raise ScenarioError(f"reps must be nonnegative, got {self.reps}")


@dataclass
class SimulationReport:
    scenario: str
    paradigm: str
    truth: str
    reps: int
    seed_root: int
    seed_stream: int
    values: dict = field(default_factory=dict)
    verdict_counts: dict = field(default_factory=dict)
    rates: dict = field(default_factory=dict)
    trajectory: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    verdicts: Optional[tuple] = None  # per-replication, kept out of the CSV

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["scenario", "section", "key", "value", "se"])

        def row(section, key, value, se=""):
            writer.writerow([self.scenario, section, key, _render(value), se])

        row("meta", "paradigm", self.paradigm)
        row("meta", "truth", self.truth)
        row("meta", "reps", self.reps)
        row("meta", "seed_root", self.seed_root)
        row("meta", "seed_stream", self.seed_stream)
        for key, value in self.values.items():
            row("value", key, value)
        for key, count in self.verdict_counts.items():
            row("count", key, count)
        for key, est in self.rates.items():
            row("rate", key, est.value, _render(est.se))
        for key, value in self.trajectory.items():
            row("trajectory", key, value)
        row("meta", "wall_clock_s", self.wall_clock)
        return buf.getvalue()


def _render(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def load_scenario(path) -> Scenario:
    parser = configparser.ConfigParser()
    parser.optionxform = str  # symbol labels are case-sensitive
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except (configparser.Error, OSError, UnicodeDecodeError) as exc:
        raise ScenarioError(f"cannot parse scenario {path}: {exc}") from exc
    if "scenario" not in parser:
        raise ScenarioError(f"{path}: missing [scenario] section")
    meta = parser["scenario"]
    name = meta.get("name", Path(path).stem)
    paradigm = meta.get("paradigm", "")
    truth = meta.get("truth", "H")
    try:
        reps = int(meta.get("reps", "0"))
        root = int(meta.get("seed-root", "0"))
        stream = int(meta.get("seed-stream", "0"))
    except ValueError as exc:
        raise ScenarioError(f"{path}: bad integer in [scenario]: {exc}") from exc

    def dist_from(section):
        if section not in parser:
            return None
        items = list(parser[section].items())
        if not items:
            raise ScenarioError(f"{path}: [{section}] is empty")
        labels = tuple(label for label, _ in items)
        probs = tuple(parse_probability(text) for _, text in items)
        return FiniteDistribution(labels, probs)

    gaussian = None
    if "gaussian" in parser:
        g = parser["gaussian"]
        try:
            gaussian = GaussianPair(
                float(g.get("mu-h", "0")),
                float(g.get("mu-k", "0")),
                float(g.get("sigma", "1")),
            )
        except (ValueError, TestlabError) as exc:
            raise ScenarioError(f"{path}: bad [gaussian] section: {exc}") from exc

    params = dict(parser["params"].items()) if "params" in parser else {}
    return Scenario(
        name=name,
        paradigm=paradigm,
        truth=truth,
        reps=reps,
        seed=Seed(root, stream),
        h=dist_from("hypothesis-h"),
        k=dist_from("hypothesis-k"),
        gaussian=gaussian,
        params=params,
    )


# --- typed access to [params] -------------------------------------------


def _param(scenario, key, convert, default=None, required=False):
    raw = scenario.params.get(key)
    if raw is None:
        if required:
            raise ScenarioError(f"scenario {scenario.name}: missing param {key!r}")
        return default
    try:
        return convert(raw)
    except (ValueError, TypeError) as exc:
        raise ScenarioError(
            f"scenario {scenario.name}: bad value {raw!r} for {key!r}"
        ) from exc


def _int_param(scenario, key, default=None, required=False):
    return _param(scenario, key, lambda v: int(str(v)), default, required)


def _float_param(scenario, key, default=None, required=False):
    return _param(scenario, key, lambda v: float(str(v)), default, required)


def _looks_param(scenario):
    raw = scenario.params.get("looks")
    if raw is None:
        raise ScenarioError(f"scenario {scenario.name}: missing param 'looks'")
    looks = tuple(int(part) for part in str(raw).split())
    if not looks or any(b <= a for a, b in zip(looks, looks[1:])) or looks[0] < 1:
        raise ScenarioError(
            f"scenario {scenario.name}: looks must be strictly increasing, got {looks}"
        )
    return looks


def _require_pair(scenario):
    if scenario.h is None or scenario.k is None:
        raise ScenarioError(
            f"scenario {scenario.name}: needs [hypothesis-h] and [hypothesis-k]"
        )
    return scenario.h, scenario.k


def _truth_dist(scenario):
    h, k = _require_pair(scenario)
    return h if scenario.truth == "H" else k


def _workers(workers) -> int:
    if workers is not None:
        return max(1, int(workers))
    return max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))


def _for_each_rep(reps: int, workers: int, body) -> None:
    """Run body(rep_index) for every replication, chunked for thread reuse.

    Chunk boundaries are fixed, bodies write only to their own rep slot,
    and merging is plain indexing, so the worker count can change timing
    but never results.
    """
    spans = [(lo, min(lo + _CHUNK, reps)) for lo in range(0, reps, _CHUNK)]

    def run_span(span):
        lo, hi = span
        for i in range(lo, hi):
            body(i)

    if workers <= 1 or len(spans) <= 1:
        for span in spans:
            run_span(span)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_span, spans))


# --- paradigm runners ------------------------------------------------------


def _run_fisher(scenario, report, workers):
    level = _float_param(scenario, "level", default=0.05)
    if "observed" in scenario.params:
        if scenario.h is None:
            raise ScenarioError(
                f"scenario {scenario.name}: observed-symbol mode needs [hypothesis-h]"
            )
        direction = fisher.TailDirection.parse(
            scenario.params.get("direction", "le")
        )
        observed = scenario.params["observed"]
        if observed not in scenario.h.alphabet:
            # scenario alphabets may be numeric; retry on parsed labels
            try:
                observed = type(scenario.h.alphabet[0])(observed)
            except (TypeError, ValueError):
                pass
        rep = fisher.p_value(scenario.h, observed, direction)
    else:
        n = _int_param(scenario, "n", required=True)
        k = _int_param(scenario, "k", required=True)
        theta = scenario.params.get("theta", "1/2")
        direction = fisher.TailDirection.parse(
            scenario.params.get("direction", "ge")
        )
        rep = fisher.binomial_tail(n, k, theta, direction)
    report.values["direction"] = rep.direction.value
    report.values["p_exact"] = rep.p
    report.values["p_float"] = fisher.float_with_exponent(rep.p)
    report.values["point_prob"] = rep.point_prob
    report.values["point_prob_float"] = fisher.float_with_exponent(rep.point_prob)
    report.values["n_extreme"] = rep.n_extreme
    report.values["level"] = level
    report.values["significant"] = rep.significant(level)


def _lr_checkpoints(scenario, n):
    raw = scenario.params.get("checkpoints")
    if raw is None:
        quarters = sorted({max(1, n // 4), max(1, n // 2), max(1, (3 * n) // 4), n})
        return tuple(quarters)
    points = tuple(int(part) for part in str(raw).split())
    if any(p < 1 or p > n for p in points):
        raise ScenarioError(f"scenario {scenario.name}: checkpoints outside 1..{n}")
    return points


def _run_lr(scenario, report, workers):
    h, k = _require_pair(scenario)
    truth = _truth_dist(scenario)
    s = _float_param(scenario, "s", default=8.0)
    table = log_ratio_table(h, k)
    log_s = math.log(s)
    reps = scenario.reps
    seed = scenario.seed
    report.values["s"] = s

    horizon = _int_param(scenario, "horizon")
    if horizon is not None:
        report.values["horizon"] = horizon
        report.values["crossing_bound"] = 1.0 / s
        crossed = np.zeros(reps, dtype=bool)

        def body(i):
            rng = seed.rng(i)
            idx = _finite_indices(truth, horizon, rng)
            path = np.cumsum(table[idx])
            crossed[i] = bool(path.max() >= log_s)

        _for_each_rep(reps, workers, body)
        report.rates["crossing_rate"] = rate_estimate(int(crossed.sum()), reps)
        return

    n = _int_param(scenario, "n", required=True)
    checkpoints = _lr_checkpoints(scenario, n)
    report.values["n"] = n
    sums = np.empty(reps, dtype=np.float64)
    traj = np.empty((reps, len(checkpoints)), dtype=np.float64)
    marks = np.array(checkpoints) - 1

    def body(i):
        rng = seed.rng(i)
        idx = _finite_indices(truth, n, rng)
        path = np.cumsum(table[idx])
        sums[i] = path[-1]
        traj[i] = path[marks]

    _for_each_rep(reps, workers, body)

    verdicts = np.where(
        sums >= log_s, "accept_k", np.where(sums <= -log_s, "accept_h", "continue")
    )
    report.verdicts = tuple(verdicts.tolist())
    for name in ("accept_k", "accept_h", "continue"):
        count = int((verdicts == name).sum())
        report.verdict_counts[name] = count
        report.rates[f"{name}_rate"] = rate_estimate(count, reps)
    report.rates["mean_log_lr_per_n"] = mean_estimate(sums / n)
    for j, cp in enumerate(checkpoints):
        for q in (5, 25, 50, 75, 95):
            report.trajectory[f"log_lr_q{q:02d}@{cp}"] = float(
                np.percentile(traj[:, j], q)
            )


def _run_bayes(scenario, report, workers):
    h, k = _require_pair(scenario)
    truth = _truth_dist(scenario)
    n = _int_param(scenario, "n", required=True)
    prior_h = _float_param(scenario, "prior-h", default=0.5)
    priors = Priors(prior_h)
    table = log_ratio_table(h, k)
    reps = scenario.reps
    seed = scenario.seed
    report.values["n"] = n
    report.values["prior_h"] = prior_h

    sums = np.empty(reps, dtype=np.float64)

    def body(i):
        rng = seed.rng(i)
        idx = _finite_indices(truth, n, rng)
        sums[i] = table[idx].sum()

    _for_each_rep(reps, workers, body)

    log_odds = sums + priors.log_odds
    with np.errstate(over="ignore"):  # exp overflow saturates to 0/1 correctly
        posterior = 1.0 / (1.0 + np.exp(-log_odds))
    decide_k = log_odds > 0
    report.verdicts = tuple("K" if d else "H" for d in decide_k)
    report.verdict_counts["decide_k"] = int(decide_k.sum())
    report.verdict_counts["decide_h"] = reps - int(decide_k.sum())
    report.rates["decide_k_rate"] = rate_estimate(int(decide_k.sum()), reps)
    report.rates["mean_posterior_k"] = mean_estimate(posterior)


def _run_np(scenario, report, workers):
    pair = scenario.gaussian
    if pair is None:
        raise ScenarioError(f"scenario {scenario.name}: needs a [gaussian] section")
    n = _int_param(scenario, "n", required=True)
    alpha = _float_param(scenario, "alpha")
    if alpha is None:
        rule, rates = neyman_pearson.midpoint_rule(pair, n)
        report.values["rule"] = "midpoint"
    else:
        rule, rates = neyman_pearson.np_test(pair, n, alpha)
        report.values["rule"] = "fixed-alpha"
    report.values["n"] = n
    report.values["cutoff"] = rule.cutoff
    report.values["alpha_analytic"] = rates.alpha
    report.values["beta_analytic"] = rates.beta
    report.values["total_analytic"] = rates.total

    mu = pair.mu_h if scenario.truth == "H" else pair.mu_k
    reps = scenario.reps
    seed = scenario.seed
    decide_k = np.zeros(reps, dtype=bool)

    def body(i):
        rng = seed.rng(i)
        xbar = rng.normal(mu, pair.sigma, size=n).mean()
        decide_k[i] = bool(xbar >= rule.cutoff)

    _for_each_rep(reps, workers, body)

    count = int(decide_k.sum())
    report.verdicts = tuple("K" if d else "H" for d in decide_k)
    report.verdict_counts["decide_k"] = count
    report.verdict_counts["decide_h"] = reps - count
    report.rates["decide_k_rate"] = rate_estimate(count, reps)
    wrong = count if scenario.truth == "H" else reps - count
    report.rates["error_rate"] = rate_estimate(wrong, reps)


def _run_map(scenario, report, workers):
    h, k = _require_pair(scenario)
    truth = _truth_dist(scenario)
    n = _int_param(scenario, "n", required=True)
    prior_h = _float_param(scenario, "prior-h", default=0.5)
    priors = Priors(prior_h)
    table = log_ratio_table(h, k)
    reps = scenario.reps
    seed = scenario.seed
    report.values["n"] = n
    report.values["prior_h"] = prior_h

    decide_k = np.zeros(reps, dtype=bool)

    def body(i):
        rng = seed.rng(i)
        idx = _finite_indices(truth, n, rng)
        decide_k[i] = bool(priors.log_odds + table[idx].sum() > 0)

    _for_each_rep(reps, workers, body)

    count = int(decide_k.sum())
    report.verdicts = tuple("K" if d else "H" for d in decide_k)
    report.verdict_counts["decide_k"] = count
    report.verdict_counts["decide_h"] = reps - count
    report.rates["decide_k_rate"] = rate_estimate(count, reps)
    wrong = count if scenario.truth == "H" else reps - count
    report.rates["error_rate"] = rate_estimate(wrong, reps)


def _run_hoeffding(scenario, report, workers):
    if scenario.h is None:
        raise ScenarioError(f"scenario {scenario.name}: needs [hypothesis-h]")
    h = scenario.h
    if scenario.truth == "H":
        truth = h
    else:
        if scenario.k is None:
            raise ScenarioError(
                f"scenario {scenario.name}: truth=K needs [hypothesis-k]"
            )
        truth = scenario.k
    n = _int_param(scenario, "n", required=True)
    delta = _float_param(scenario, "delta", default=0.05)
    radius = info_geometry.types_bound_radius(h.size, n, delta)
    h_probs = h.float_probs()
    log_h = np.where(h_probs > 0, np.log(np.where(h_probs > 0, h_probs, 1.0)), -np.inf)
    reps = scenario.reps
    seed = scenario.seed
    report.values["n"] = n
    report.values["delta"] = delta
    report.values["radius"] = radius

    rejected = np.zeros(reps, dtype=bool)

    def body(i):
        rng = seed.rng(i)
        idx = _finite_indices(truth, n, rng)
        counts = np.bincount(idx, minlength=h.size)
        mask = counts > 0
        freqs = counts[mask] / n
        if np.any(np.isinf(log_h[mask])):
            statistic = math.inf
        else:
            statistic = float(np.sum(freqs * (np.log(freqs) - log_h[mask])))
        rejected[i] = statistic > radius

    _for_each_rep(reps, workers, body)

    count = int(rejected.sum())
    report.verdicts = tuple("reject_h" if r else "accept_h" for r in rejected)
    report.verdict_counts["reject_h"] = count
    report.verdict_counts["accept_h"] = reps - count
    report.rates["reject_rate"] = rate_estimate(count, reps)


def _run_optional_stopping(scenario, report, workers):
    alpha = _float_param(scenario, "alpha", default=0.05)
    looks = _looks_param(scenario)
    s = _float_param(scenario, "s", default=1.0 / alpha)
    reps = scenario.reps
    seed = scenario.seed
    report.values["alpha"] = alpha
    report.values["s"] = s
    report.values["lr_bound"] = 1.0 / s
    report.values["looks"] = " ".join(str(n) for n in looks)
    horizon = looks[-1]
    marks = np.array(looks) - 1

    pair = scenario.gaussian
    if pair is not None:
        if scenario.truth != "H" or pair.effect != 0:
            raise ScenarioError(
                f"scenario {scenario.name}: optional stopping monitors a true "
                "null; use truth=H and a zero-effect gaussian pair"
            )
        sigma = pair.sigma
        mu = pair.mu_h
        eta = _float_param(scenario, "lr-eta", default=0.5 * sigma)
        if eta <= 0:
            raise ScenarioError(f"scenario {scenario.name}: lr-eta must be positive")
        report.values["lr_eta"] = eta
        z_crit = gaussian_quantile(1.0 - alpha)
        sqrt_looks = np.sqrt(np.array(looks, dtype=np.float64))
        log_s = math.log(s)

        rejected = np.zeros((reps, len(looks)), dtype=bool)
        crossed = np.zeros((reps, len(looks)), dtype=bool)

        def body(i):
            rng = seed.rng(i)
            xs = rng.normal(mu, sigma, size=horizon)
            cum = np.cumsum(xs)
            z = (cum[marks] - np.array(looks) * mu) / (sigma * sqrt_looks)
            rejected[i] = np.maximum.accumulate(z >= z_crit)
            incr = (xs - mu) * eta / sigma**2 - eta**2 / (2.0 * sigma**2)
            prefix_max = np.maximum.accumulate(np.cumsum(incr))
            crossed[i] = prefix_max[marks] >= log_s

        _for_each_rep(reps, workers, body)
    else:
        if scenario.h is None or scenario.k is None or scenario.h.size != 2:
            raise ScenarioError(
                f"scenario {scenario.name}: finite-alphabet optional stopping "
                "needs two-symbol [hypothesis-h] and [hypothesis-k]"
            )
        if scenario.truth != "H":
            raise ScenarioError(
                f"scenario {scenario.name}: optional stopping monitors a true null"
            )
        h, k = scenario.h, scenario.k
        theta = h.probs[1]
        # smallest count whose upper tail is significant, per look; the
        # per-look test then reduces to a threshold on running counts
        cutoffs = []
        for n_j in looks:
            cut = n_j + 1
            for c in range(n_j + 1):
                if fisher.binomial_tail(n_j, c, theta).significant(alpha):
                    cut = c
                    break
            cutoffs.append(cut)
        cutoffs = np.array(cutoffs)
        table = log_ratio_table(h, k)
        log_s = math.log(s)

        rejected = np.zeros((reps, len(looks)), dtype=bool)
        crossed = np.zeros((reps, len(looks)), dtype=bool)

        def body(i):
            rng = seed.rng(i)
            idx = _finite_indices(h, horizon, rng)
            counts = np.cumsum(idx)  # idx is 1 exactly for the second symbol
            rejected[i] = np.maximum.accumulate(counts[marks] >= cutoffs)
            prefix_max = np.maximum.accumulate(np.cumsum(table[idx]))
            crossed[i] = prefix_max[marks] >= log_s

        _for_each_rep(reps, workers, body)

    for j, n_j in enumerate(looks):
        report.rates[f"cumulative_reject@{n_j}"] = rate_estimate(
            int(rejected[:, j].sum()), reps
        )
    for j, n_j in enumerate(looks):
        report.rates[f"lr_crossed@{n_j}"] = rate_estimate(
            int(crossed[:, j].sum()), reps
        )


_RUNNERS = {
    "fisher": _run_fisher,
    "lr": _run_lr,
    "bayes": _run_bayes,
    "np": _run_np,
    "map": _run_map,
    "hoeffding": _run_hoeffding,
    "optional-stopping": _run_optional_stopping,
}


def run(scenario: Scenario, workers: Optional[int] = None) -> SimulationReport:
    """Execute a scenario and return its report.

    Deterministic given (scenario, seed): rerunning, or running with a
    different worker count, yields byte-identical CSV apart from the
    wall-clock row.
    """
    if scenario.paradigm != "fisher" and scenario.reps < 1:
        raise ScenarioError(
            f"scenario {scenario.name}: paradigm {scenario.paradigm!r} needs reps >= 1"
        )
    report = SimulationReport(
        scenario=scenario.name,
        paradigm=scenario.paradigm,
        truth=scenario.truth,
        reps=scenario.reps,
        seed_root=scenario.seed.root,
        seed_stream=scenario.seed.stream,
    )
    started = time.perf_counter()
    try:
        _RUNNERS[scenario.paradigm](scenario, report, _workers(workers))
    except ScenarioError:
        raise
    except TestlabError as exc:
        raise ScenarioError(f"scenario {scenario.name}: {exc}") from exc
    report.wall_clock = time.perf_counter() - started
    return report


@dataclass(frozen=True)
class OptionalStoppingReport:
    """Per-look cumulative rejection rates for naive repeated testing,
    side by side with the ratio monitor's crossing rates."""

    looks: tuple
    alpha: float
    s: float
    cumulative_reject: tuple  # MCEstimate per look
    lr_crossed: tuple  # MCEstimate per look


def optional_stopping_alpha(
    null,
    alpha: float,
    looks,
    reps: int,
    seed: Seed,
    s: Optional[float] = None,
    lr_eta: Optional[float] = None,
    alternative: Optional[FiniteDistribution] = None,
) -> OptionalStoppingReport:
    """Monitor a true null at several looks and measure the error inflation.

    At each look the running data is retested at level alpha; the chance of
    at least one rejection grows past alpha from the second look on. The
    same paths are monitored by the likelihood ratio against threshold s
    (default 1/alpha), whose crossing probability stays below 1/s at every
    look. ``null`` is a zero-effect GaussianPair (the ratio monitor then
    uses the effect ``lr_eta``, default half a sigma) or a two-symbol
    FiniteDistribution (supply the ``alternative`` the monitor tests
    against).
    """
    looks = tuple(int(n) for n in looks)
    params = {"alpha": str(alpha), "looks": " ".join(str(n) for n in looks)}
    if s is not None:
        params["s"] = str(s)
    scenario_kwargs = dict(
        name="optional-stopping",
        paradigm="optional-stopping",
        truth="H",
        reps=reps,
        seed=seed,
        params=params,
    )
    if isinstance(null, GaussianPair):
        if lr_eta is not None:
            params["lr-eta"] = str(lr_eta)
        scenario_kwargs["gaussian"] = null
    elif isinstance(null, FiniteDistribution):
        if alternative is None:
            raise ScenarioError(
                "a finite null needs the alternative the ratio monitor tests"
            )
        scenario_kwargs["h"] = null
        scenario_kwargs["k"] = alternative
    else:
        raise ScenarioError(f"cannot monitor a {type(null).__name__}")
    report = run(Scenario(**scenario_kwargs))
    return OptionalStoppingReport(
        looks=looks,
        alpha=report.values["alpha"],
        s=report.values["s"],
        cumulative_reject=tuple(
            report.rates[f"cumulative_reject@{n}"] for n in looks
        ),
        lr_crossed=tuple(report.rates[f"lr_crossed@{n}"] for n in looks),
    )


def family_wise_error(
    m: int,
    family_alpha: float,
    scheme: str,
    reps: int,
    seed: Seed,
    eta: float = 0.5,
    n: int = 25,
    sigma: float = 1.0,
):
    """FWER under m independent true nulls, plus per-test power at a fixed
    alternative, when each test runs at the adjusted per-test alpha.

    Returns (per_test_alpha, fwer: MCEstimate, analytic_power, mc_power).
    Splitting the budget keeps the estimated FWER under family_alpha, and
    the analytic per-test power falls as m grows: the cost of adjustment.
    """
    if m < 1 or reps < 1:
        raise ScenarioError("m and reps must be at least 1")
    per_test = neyman_pearson.adjust_alpha(family_alpha, m, scheme)
    z_crit = gaussian_quantile(1.0 - per_test)
    shift = eta * math.sqrt(n) / sigma
    analytic_power = 1.0 - gaussian_cdf(z_crit - shift)

    any_reject = 0
    power_hits = 0
    for i in range(reps):
        rng = seed.rng(i)
        z_null = rng.standard_normal(m)
        if np.any(z_null >= z_crit):
            any_reject += 1
        z_alt = rng.standard_normal() + shift
        if z_alt >= z_crit:
            power_hits += 1
    return (
        per_test,
        rate_estimate(any_reject, reps),
        analytic_power,
        rate_estimate(power_hits, reps),
    )
