"""Command-line entry point for the lab.

    ae-lab setup --n 8 --q 32 --seed 7 -o sys.json --authority-out auth.json
    ae-lab keygen --system sys.json --side alice --seed 1 -o alice.json
    ae-lab pubkey --system sys.json --private alice.json -o pub_a.json
    ae-lab shared --system sys.json --private alice.json --peer pub_b.json -o k_a.json
    ae-lab verify --secrets k_a.json k_b.json
    ae-lab attack --system sys.json --alice-public pub_a.json --bob-public pub_b.json
    ae-lab defend --n 32 --k 4 --samples 10000
    ae-lab defend --system sys.json --authority auth.json --emit-system defended.json
    ae-lab experiment --profile desk --seed 0 -o report.json

Exit status is 0 on success, 1 on a domain failure (failed attack, failed
check, malformed artifact, missing public data) and 2 on a usage error.
"""

import sys
import warnings
from functools import wraps
from pathlib import Path

import click

from aelab.aedh import compute_public, compute_shared, gen_private, gen_system
from aelab.attack import AttackConfig, AttackInput, MissingDataError, attack_run
from aelab.defense import defense_conjugates, gen_high_order_perms, order_statistics
from aelab.experiment import DISTRIBUTIONS, SCENARIOS, ExperimentConfig, run_experiment
from aelab.ffield import FieldSpec
from aelab.serialize import ArtifactError, attack_result_to_dict, dumps, read_artifact, to_dict, write_artifact
from aelab.utils import derive_rng
from aelab.verify import compare_secrets, run_checks

__all__ = ["main"]

_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)
_OUT = click.Path(dir_okay=False, writable=True, path_type=Path)


def _emit(payload, output: Path | None, indent: int | None = 2) -> None:
    text = dumps(payload, indent=indent)
    if output is None:
        click.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8")


def _domain_errors(fn):
    """Turn artifact and argument errors into exit status 1 with a message."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ArtifactError, MissingDataError, ValueError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _seed_option(fn):
    return click.option("--seed", type=int, default=0, show_default=True, help="Root seed")(fn)


@click.group()
@click.version_option(package_name="ae-lab")
def main():
    """Algebraic Eraser key agreement, the public-key attack and its defense."""


@main.command()
@click.option("--n", "n", type=click.IntRange(min=5), default=8, show_default=True, help="Strand count")
@click.option("--q", "q", type=int, default=32, show_default=True, help="Field order")
@click.option("--k", "k", type=click.IntRange(min=1), default=4, show_default=True, help="Alice's conjugate count")
@click.option("--l", "l", type=click.IntRange(min=1), default=4, show_default=True, help="Bob's conjugate count")
@click.option("--base-word-len", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--z-len", type=click.IntRange(min=0), default=None, help="Length of z, default 2n")
@_seed_option
@click.option("-o", "--output", type=_OUT, default=None, help="System file (stdout if omitted)")
@click.option("--authority-out", type=_OUT, default=None, help="Write z and the base words here")
@_domain_errors
def setup(n, q, k, l, base_word_len, z_len, seed, output, authority_out):  # noqa: E741
    """Generate public system data."""
    params = gen_system(
        n, FieldSpec.for_order(q), k, l, derive_rng(seed, "setup"), base_word_len=base_word_len, z_len=z_len
    )
    if authority_out is not None:
        write_artifact(authority_out, params.authority)
    _emit(params.public(), output)


@main.command()
@click.option("--system", "system_path", type=_FILE, required=True)
@click.option("--side", type=click.Choice(["alice", "bob"]), required=True)
@click.option("--word-len", type=click.IntRange(min=1), default=8, show_default=True)
@_seed_option
@click.option("-o", "--output", type=_OUT, default=None)
@_domain_errors
def keygen(system_path, side, word_len, seed, output):
    """Draw a private key for one side."""
    params = read_artifact(system_path, expect="system-params")
    _emit(gen_private(params, side, derive_rng(seed, "keygen", side), word_len=word_len), output)


@main.command()
@click.option("--system", "system_path", type=_FILE, required=True)
@click.option("--private", "private_path", type=_FILE, required=True)
@_seed_option
@click.option("-o", "--output", type=_OUT, default=None)
@_domain_errors
def pubkey(system_path, private_path, seed, output):
    """Public key of a private key."""
    params = read_artifact(system_path, expect="system-params")
    _emit(compute_public(params, read_artifact(private_path, expect="private-key")), output)


@main.command()
@click.option("--system", "system_path", type=_FILE, required=True)
@click.option("--private", "private_path", type=_FILE, required=True)
@click.option("--peer", "peer_path", type=_FILE, required=True, help="The other side's public key")
@_seed_option
@click.option("-o", "--output", type=_OUT, default=None)
@_domain_errors
def shared(system_path, private_path, peer_path, seed, output):
    """Shared secret from one's own private key and the peer's public key."""
    params = read_artifact(system_path, expect="system-params")
    priv = read_artifact(private_path, expect="private-key")
    peer = read_artifact(peer_path, expect="public-key")
    if peer.side == priv.side:
        raise ValueError(f"peer public key is also from {priv.side}")
    _emit(compute_shared(params, priv, peer), output)


@main.command()
@click.option("--system", "system_path", type=_FILE, required=True)
@click.option("--alice-public", type=_FILE, default=None)
@click.option("--bob-public", type=_FILE, default=None)
@click.option("--scenario", type=click.Choice(SCENARIOS), default="full-public", show_default=True)
@click.option("--honest", "honest_path", type=_FILE, default=None, help="Shared secret to compare against")
@click.option("--word-len-max", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--sample-budget", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--stall-threshold", type=click.IntRange(min=1), default=25, show_default=True)
@click.option("--stage1-budget", type=click.IntRange(min=1), default=1_000_000, show_default=True)
@click.option("--timings", is_flag=True, help="Include per-stage wall-clock times")
@_seed_option
@click.option("-o", "--output", type=_OUT, default=None)
@_domain_errors
def attack(
    system_path,
    alice_public,
    bob_public,
    scenario,
    honest_path,
    word_len_max,
    sample_budget,
    stall_threshold,
    stage1_budget,
    timings,
    seed,
    output,
):
    """Recover the shared secret from public files only."""
    params = read_artifact(system_path, expect="system-params")
    pub_a = read_artifact(alice_public, expect="public-key") if alice_public else None
    pub_b = read_artifact(bob_public, expect="public-key") if bob_public and scenario == "full-public" else None
    honest = read_artifact(honest_path, expect="shared-secret").pair if honest_path else None

    data = AttackInput.from_public(params, pub_a, pub_b)
    config = AttackConfig(
        seed=seed,
        word_len_max=word_len_max,
        sample_budget=sample_budget,
        stall_threshold=stall_threshold,
        stage1_budget=stage1_budget,
    )
    result = attack_run(data, config, honest=honest)
    _emit(attack_result_to_dict(result, timings=timings), output)
    if not result.recovered:
        click.echo(f"attack {result.outcome}: {result.reason or 'key differs from the honest secret'}", err=True)
        sys.exit(1)


@main.command()
@click.option("--n", "n", type=click.IntRange(min=5), default=None, help="Strand count  [default: 32, or the system's]")
@click.option("--k", "k", type=click.IntRange(min=2), default=4, show_default=True)
@click.option("--word-len", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--literal", is_flag=True, help="Read the prime budget as primes below p_max, 2 included")
@click.option("--system", "system_path", type=_FILE, default=None, help="Existing system file to defend")
@click.option("--authority", "authority_path", type=_FILE, default=None, help="Its file from setup --authority-out")
@click.option("--emit-system", type=_OUT, default=None, help="Write the system re-conjugated with the rho_i here")
@_seed_option
@click.option("-o", "--output", type=_OUT, default=None)
@_domain_errors
def defend(n, k, word_len, samples, literal, system_path, authority_path, emit_system, seed, output):
    """High-order permutations and the orders of short words in them."""
    if (system_path is None) != (authority_path is None):
        raise click.UsageError("--system and --authority go together")
    if emit_system is not None and system_path is None:
        raise click.UsageError("--emit-system needs --system and --authority")
    params = None
    if system_path is not None:
        params = read_artifact(system_path, expect="system-params")
        params = params.with_authority(read_artifact(authority_path, expect="authority"))
        if n is not None and n != params.n:
            raise ValueError(f"--n {n} does not match the system's {params.n} strands")
        n = params.n
    n = 32 if n is None else n

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            perm_set = gen_high_order_perms(n, k, derive_rng(seed, "defend", "perms"), literal=literal)
        finally:
            for w in caught:
                click.echo(f"warning: {w.message}", err=True)
    stats = order_statistics(perm_set, word_len, samples, derive_rng(seed, "defend", "orders"))
    if emit_system is not None:
        defended = defense_conjugates(params, perm_set, derive_rng(seed, "defend", "bob"))
        write_artifact(emit_system, defended.public())
    _emit(
        {
            "version": 1,
            "kind": "defense-report",
            "perm_set": to_dict(perm_set),
            "order_statistics": to_dict(stats),
        },
        output,
    )


@main.command()
@click.option("--profile", type=click.Choice(["desk", "defense", "long"]), default=None)
@click.option("--n", "n", type=click.IntRange(min=5), default=None)
@click.option("--q", "q", type=int, default=None)
@click.option("--k", "k", type=click.IntRange(min=1), default=None)
@click.option("--l", "l", type=click.IntRange(min=1), default=None)
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--distribution", type=click.Choice(DISTRIBUTIONS), default=None)
@click.option("--scenario", type=click.Choice(SCENARIOS), default=None)
@click.option("--timings", is_flag=True, help="Record wall-clock and peak memory (breaks byte-identical replays)")
@click.option("--json-indent", type=click.IntRange(min=0), default=2, show_default=True)
@_seed_option
@click.option("-o", "--output", type=_OUT, default=None)
@_domain_errors
def experiment(profile, n, q, k, l, trials, distribution, scenario, timings, json_indent, seed, output):  # noqa: E741
    """Seeded honest exchanges followed by the attack, as a JSON report."""
    given = {"n": n, "q": q, "k": k, "l": l, "trials": trials, "distribution": distribution, "scenario": scenario}
    overrides = {key: v for key, v in given.items() if v is not None}
    config = (
        ExperimentConfig.profile(profile, seed=seed, **overrides)
        if profile
        else ExperimentConfig(seed=seed, **overrides)
    )
    report = run_experiment(config, timings=timings)
    _emit(report.to_dict(), output, indent=json_indent)
    click.echo(
        f"agreement {report.agreement_rate:.0%}, attack success {report.success_rate:.0%} "
        f"over {len(report.trials)} trials",
        err=True,
    )
    if report.low_order_rate is not None:
        click.echo(f"low-order words {report.low_order_rate:.1%} of sampled", err=True)


@main.command()
@click.option("--secrets", nargs=2, type=_FILE, default=None, help="Two shared-secret files that must match")
@click.option("--check", "only", multiple=True, help="Run only these checks (repeatable)")
@click.option("--thorough", is_flag=True, help="Acceptance-scale case counts")
@_seed_option
@_domain_errors
def verify(secrets, only, thorough, seed):
    """Run the invariant suite, or compare two shared secrets."""
    if secrets:
        a, b = (read_artifact(p, expect="shared-secret") for p in secrets)
        checks = [compare_secrets(a, b)]
    else:
        checks = run_checks(seed, thorough=thorough, only=only or None)
    for check in checks:
        line = f"{'PASS' if check.passed else 'FAIL'}  {check.name}  ({check.cases} cases)"
        if check.detail:
            line += f"  first failure: {check.detail}"
        click.echo(line)
    if not all(check.passed for check in checks):
        sys.exit(1)
