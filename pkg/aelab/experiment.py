r"""
Seeded experiment driver: honest exchanges followed by the attack.

Each trial builds a fresh system (standard or defense distribution), runs an
honest key agreement, checks that both sides agree, and then attacks the
transcript under the configured data-availability scenario. Every random
choice in a trial comes from streams derived from (seed, "trial", index), so
a report replays exactly.

    from aelab.experiment import ExperimentConfig, run_experiment

    report = run_experiment(ExperimentConfig(n=8, q=32, trials=50, seed=7))
    report.success_rate                      # fraction of trials recovering K
    report.to_dict()                         # canonical JSON payload

    run_experiment(ExperimentConfig.profile("defense"))

Trials fan out over a process pool when AE_LAB_THREADS is above 1; results
are always assembled in trial order. Wall-clock times and peak memory are
only collected with timings=True, since they differ between runs.
"""

import platform
import sys
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from os import environ
from time import perf_counter
from typing import Literal

from aelab.aedh import exchange, gen_system
from aelab.attack import AttackConfig, AttackInput, MissingDataError, attack_run
from aelab.defense import defense_conjugates, gen_high_order_perms
from aelab.ffield import FieldSpec
from aelab.utils import check_positive, debug, derive_rng, derive_seed

try:
    import resource
except ImportError:  # pragma: no cover
    resource = None

__all__ = [
    "Distribution",
    "Scenario",
    "ExperimentConfig",
    "TrialOutcome",
    "ExperimentReport",
    "run_trial",
    "run_experiment",
    "thread_cap",
]

type Distribution = Literal["standard", "defense"]
type Scenario = Literal["full-public", "withheld-pub-b"]

DISTRIBUTIONS = ("standard", "defense")
SCENARIOS = ("full-public", "withheld-pub-b")
MISSING_PUBLIC_KEY = "missing public key"

_PROFILES: dict[str, dict] = {
    "desk": {"n": 8, "q": 32, "k": 4, "l": 4, "trials": 50},
    "defense": {"n": 32, "q": 32, "k": 4, "l": 4, "trials": 20, "distribution": "defense"},
    "long": {"n": 16, "q": 256, "k": 4, "l": 4, "trials": 1},
}


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """One experiment.

    Attributes:
        n: Strand count
        q: Field order
        k: Alice's conjugate count (rho count under the defense)
        l: Bob's conjugate count
        trials: Number of independent trials
        seed: Root seed, recorded in the report
        distribution: "standard" or "defense"
        scenario: "full-public" or "withheld-pub-b"
        word_len: Private conjugate-word length
        base_word_len: Base word length of the system data
        z_len: Length of z, default 2n
        attack: Attack tuning, its seed is replaced per trial
    """

    n: int = 8
    q: int = 32
    k: int = 4
    l: int = 4  # noqa: E741
    trials: int = 50
    seed: int = 0
    distribution: Distribution = "standard"
    scenario: Scenario = "full-public"
    word_len: int = 8
    base_word_len: int = 10
    z_len: int | None = None
    attack: AttackConfig = field(default_factory=AttackConfig)

    def __post_init__(self) -> None:
        check_positive(self.trials, name="trials")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {DISTRIBUTIONS}, got {self.distribution!r}")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        FieldSpec.for_order(self.q)

    @classmethod
    def profile(cls, name: str, **overrides) -> "ExperimentConfig":
        """Named presets: desk (N=8, q=32), defense (N=32), long (N=16, q=256)."""
        if name not in _PROFILES:
            raise ValueError(f"profile must be one of {sorted(_PROFILES)}, got {name!r}")
        return cls(**{**_PROFILES[name], **overrides})


@dataclass(frozen=True, slots=True)
class TrialOutcome:
    """What one trial produced. timings is None unless asked for."""

    trial: int
    seed: int
    agreed: bool
    outcome: str
    failed_stage: str | None
    reason: str | None
    dim_v: int
    dim_c: int
    samples: int
    pure_samples: int
    stage1_word_len: int
    timings: dict[str, float] | None = None


@dataclass(frozen=True, slots=True)
class ExperimentReport:
    config: ExperimentConfig
    trials: tuple[TrialOutcome, ...]
    wall_seconds: float | None = None
    peak_rss_kb: int | None = None

    @property
    def agreement_rate(self) -> float:
        return sum(t.agreed for t in self.trials) / len(self.trials)

    @property
    def success_rate(self) -> float:
        return sum(t.outcome == "recovered" for t in self.trials) / len(self.trials)

    @property
    def failures(self) -> dict[str, int]:
        """Failed stage -> count."""
        return dict(sorted(Counter(t.failed_stage for t in self.trials if t.failed_stage).items()))

    def rate_failed_at(self, stage: str) -> float:
        return self.failures.get(stage, 0) / len(self.trials)

    @property
    def low_order_rate(self) -> float | None:
        """Share of sampled conjugate words with order <= the cap, None if nothing was sampled."""
        samples = sum(t.samples for t in self.trials)
        return sum(t.pure_samples for t in self.trials) / samples if samples else None

    def to_dict(self) -> dict:
        config = asdict(self.config)
        body = {
            "version": 1,
            "kind": "experiment-report",
            "config": config,
            "summary": {
                "trials": len(self.trials),
                "agreement_rate": self.agreement_rate,
                "success_rate": self.success_rate,
                "wrong_keys": sum(t.outcome == "wrong-key" for t in self.trials),
                "failures": self.failures,
                "low_order_rate": self.low_order_rate,
            },
            "trials": [{k: v for k, v in asdict(t).items() if v is not None or k != "timings"} for t in self.trials],
            "environment": {
                "python": platform.python_version(),
                "implementation": platform.python_implementation(),
                "platform": sys.platform,
            },
        }
        if self.wall_seconds is not None:
            body["summary"]["wall_seconds"] = round(self.wall_seconds, 6)
        if self.peak_rss_kb is not None:
            body["summary"]["peak_rss_kb"] = self.peak_rss_kb
        return body


def thread_cap() -> int:
    """Worker count from AE_LAB_THREADS, at least 1."""
    raw = environ.get("AE_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"AE_LAB_THREADS must be an integer, got {raw!r}") from None


def run_trial(config: ExperimentConfig, index: int, *, timings: bool = False) -> TrialOutcome:
    """One system, one honest exchange, one attack."""
    seed = derive_seed(config.seed, "trial", index)
    gf = FieldSpec.for_order(config.q)
    params = gen_system(
        config.n,
        gf,
        config.k,
        config.l,
        derive_rng(seed, "system"),
        base_word_len=config.base_word_len,
        z_len=config.z_len,
    )
    if config.distribution == "defense":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            perm_set = gen_high_order_perms(config.n, config.k, derive_rng(seed, "defense"))
        params = defense_conjugates(params, perm_set, derive_rng(seed, "defense", "bob"))

    ex = exchange(params, derive_rng(seed, "exchange"), word_len=config.word_len)
    public = params.public()
    pub_b = None if config.scenario == "withheld-pub-b" else ex.pub_b
    try:
        data = AttackInput.from_public(public, ex.pub_a, pub_b)
    except MissingDataError:
        debug(f"trial {index}: attack refused, {MISSING_PUBLIC_KEY}")
        return TrialOutcome(index, seed, ex.agreed, "failed", "input", MISSING_PUBLIC_KEY, 0, 0, 0, 0, 0)

    result = attack_run(data, replace(config.attack, seed=derive_seed(seed, "attack")), honest=ex.secret_a.pair)
    s = result.stats
    debug(f"trial {index}: agreed={ex.agreed} {result!r}")
    return TrialOutcome(
        trial=index,
        seed=seed,
        agreed=ex.agreed,
        outcome=result.outcome,
        failed_stage=result.failed_stage.value if result.failed_stage else None,
        reason=result.reason,
        dim_v=s.dim_v,
        dim_c=s.dim_c,
        samples=s.samples,
        pure_samples=s.pure_samples,
        stage1_word_len=s.stage1_word_len,
        timings={k: round(v, 6) for k, v in sorted(s.timings.items())} if timings else None,
    )


def run_experiment(config: ExperimentConfig, *, timings: bool = False, workers: int | None = None) -> ExperimentReport:
    """All trials of config, in trial order."""
    workers = thread_cap() if workers is None else workers
    clock = perf_counter()
    indices = range(config.trials)
    if workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=min(workers, config.trials)) as pool:
            outcomes = tuple(pool.map(partial(run_trial, config, timings=timings), indices))
    else:
        outcomes = tuple(run_trial(config, i, timings=timings) for i in indices)
    if not timings:
        return ExperimentReport(config, outcomes)
    peak = None
    if resource:
        # pool workers report under RUSAGE_CHILDREN once they have exited
        peak = max(resource.getrusage(who).ru_maxrss for who in (resource.RUSAGE_SELF, resource.RUSAGE_CHILDREN))
    return ExperimentReport(config, outcomes, perf_counter() - clock, peak)
