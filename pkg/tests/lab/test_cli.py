"""Tests for the ae-lab command line."""

import json

import pytest
from click.testing import CliRunner

from aelab.cli import main


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.delenv("AE_LAB_THREADS", raising=False)
    return CliRunner()


@pytest.fixture
def invoke(runner):
    def run(*args):
        return runner.invoke(main, [str(a) for a in args])

    return run


@pytest.fixture
def transcript(tmp_path, invoke):
    """System, keys, public keys and both shared secrets, all as files."""
    p = {name: tmp_path / f"{name}.json" for name in ("sys", "auth", "a", "b", "pub_a", "pub_b", "k_a", "k_b")}
    steps = [
        ("setup", "--n", 8, "--q", 32, "--seed", 7, "-o", p["sys"], "--authority-out", p["auth"]),
        ("keygen", "--system", p["sys"], "--side", "alice", "--seed", 1, "-o", p["a"]),
        ("keygen", "--system", p["sys"], "--side", "bob", "--seed", 1, "-o", p["b"]),
        ("pubkey", "--system", p["sys"], "--private", p["a"], "-o", p["pub_a"]),
        ("pubkey", "--system", p["sys"], "--private", p["b"], "-o", p["pub_b"]),
        ("shared", "--system", p["sys"], "--private", p["a"], "--peer", p["pub_b"], "-o", p["k_a"]),
        ("shared", "--system", p["sys"], "--private", p["b"], "--peer", p["pub_a"], "-o", p["k_b"]),
    ]
    for step in steps:
        result = invoke(*step)
        assert result.exit_code == 0, (step[0], result.output)
    return p


def load(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestSetup:
    def test_same_seed_same_bytes(self, tmp_path, invoke):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert invoke("setup", "--seed", 3, "-o", a).exit_code == 0
        assert invoke("setup", "--seed", 3, "-o", b).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_and_authority(self, tmp_path, invoke):
        auth = tmp_path / "auth.json"
        result = invoke("setup", "--n", 6, "--k", 2, "--l", 2, "--authority-out", auth)
        assert result.exit_code == 0
        system = json.loads(result.output)
        assert system["kind"] == "system-params"
        assert system["n"] == 6 and len(system["alice_conjugates"]) == 2
        assert "z" not in system
        assert load(auth)["kind"] == "authority"

    def test_too_few_strands_is_usage_error(self, invoke):
        assert invoke("setup", "--n", 4).exit_code == 2

    def test_bad_field_order(self, invoke):
        result = invoke("setup", "--q", 12)
        assert result.exit_code == 1
        assert "prime power" in result.output


class TestKeyAgreement:
    def test_secrets_match(self, transcript, invoke):
        assert load(transcript["k_a"]) == load(transcript["k_b"])
        result = invoke("verify", "--secrets", transcript["k_a"], transcript["k_b"])
        assert result.exit_code == 0
        assert "PASS  secrets-match" in result.output

    def test_mismatched_secrets_fail(self, transcript, tmp_path, invoke):
        other = tmp_path / "other.json"
        sys2, priv = tmp_path / "sys2.json", tmp_path / "x.json"
        assert invoke("setup", "--seed", 99, "-o", sys2).exit_code == 0
        assert invoke("keygen", "--system", sys2, "--side", "alice", "-o", priv).exit_code == 0
        step = ("shared", "--system", sys2, "--private", priv)
        assert invoke(*step, "--peer", transcript["pub_b"], "-o", other).exit_code == 0
        result = invoke("verify", "--secrets", transcript["k_a"], other)
        assert result.exit_code == 1
        assert "FAIL  secrets-match" in result.output

    def test_keygen_deterministic(self, transcript, tmp_path, invoke):
        again = tmp_path / "again.json"
        invoke("keygen", "--system", transcript["sys"], "--side", "alice", "--seed", 1, "-o", again)
        assert again.read_bytes() == transcript["a"].read_bytes()

    def test_peer_from_same_side(self, transcript, invoke):
        p = transcript
        result = invoke("shared", "--system", p["sys"], "--private", p["a"], "--peer", p["pub_a"])
        assert result.exit_code == 1
        assert "also from alice" in result.output

    def test_missing_side_is_usage_error(self, transcript, invoke):
        assert invoke("keygen", "--system", transcript["sys"]).exit_code == 2
        assert invoke("keygen", "--system", transcript["sys"], "--side", "eve").exit_code == 2

    def test_missing_file_is_usage_error(self, tmp_path, invoke):
        assert invoke("keygen", "--system", tmp_path / "nope.json", "--side", "bob").exit_code == 2


class TestMalformedArtifacts:
    def test_missing_field_named(self, transcript, tmp_path, invoke):
        data = load(transcript["sys"])
        del data["m0"]
        broken = tmp_path / "broken.json"
        broken.write_text(json.dumps(data), encoding="utf-8")
        result = invoke("keygen", "--system", broken, "--side", "alice")
        assert result.exit_code == 1
        assert "field 'm0'" in result.output

    def test_wrong_kind(self, transcript, invoke):
        result = invoke("keygen", "--system", transcript["pub_a"], "--side", "alice")
        assert result.exit_code == 1
        assert "system-params: field 'kind'" in result.output

    def test_not_json(self, tmp_path, invoke):
        junk = tmp_path / "junk.json"
        junk.write_text("not json at all", encoding="utf-8")
        result = invoke("keygen", "--system", junk, "--side", "alice")
        assert result.exit_code == 1
        assert "not valid JSON" in result.output


class TestAttack:
    def test_public_files_only(self, transcript, tmp_path, invoke):
        out = tmp_path / "attack.json"
        result = invoke(
            "attack",
            "--system", transcript["sys"],
            "--alice-public", transcript["pub_a"],
            "--bob-public", transcript["pub_b"],
            "--honest", transcript["k_a"],
            "-o", out,
        )  # fmt: skip
        report = load(out)
        assert report["kind"] == "attack-result"
        assert report["outcome"] in ("recovered", "failed")
        assert "timings" not in report["stats"]
        if report["outcome"] == "recovered":
            assert result.exit_code == 0
            assert report["key"] == load(transcript["k_a"])["pair"]
        else:
            assert result.exit_code == 1
            assert report["failed_stage"] is not None

    def test_timings_flag(self, transcript, tmp_path, invoke):
        out = tmp_path / "attack.json"
        invoke(
            "attack",
            "--system", transcript["sys"],
            "--alice-public", transcript["pub_a"],
            "--bob-public", transcript["pub_b"],
            "--sample-budget", 3,
            "--timings",
            "-o", out,
        )  # fmt: skip
        report = load(out)
        assert report["failed_stage"] == "precompute"
        assert "precompute" in report["stats"]["timings"]

    def test_failed_attack_exits_1(self, transcript, invoke):
        result = invoke(
            "attack",
            "--system", transcript["sys"],
            "--alice-public", transcript["pub_a"],
            "--bob-public", transcript["pub_b"],
            "--sample-budget", 3,
        )  # fmt: skip
        assert result.exit_code == 1
        assert "attack failed: budget" in result.output

    def test_withheld_public_key(self, transcript, invoke):
        result = invoke(
            "attack",
            "--system", transcript["sys"],
            "--alice-public", transcript["pub_a"],
            "--bob-public", transcript["pub_b"],
            "--scenario", "withheld-pub-b",
        )  # fmt: skip
        assert result.exit_code == 1
        assert "missing public key" in result.output

    def test_no_bob_file(self, transcript, invoke):
        result = invoke("attack", "--system", transcript["sys"], "--alice-public", transcript["pub_a"])
        assert result.exit_code == 1
        assert "pub_b" in result.output

    def test_private_file_refused(self, transcript, invoke):
        p = transcript
        result = invoke("attack", "--system", p["sys"], "--alice-public", p["a"], "--bob-public", p["pub_b"])
        assert result.exit_code == 1
        assert "public-key: field 'kind'" in result.output


class TestDefend:
    def test_report(self, tmp_path, invoke):
        out = tmp_path / "defense.json"
        result = invoke("defend", "--n", 16, "--k", 3, "--samples", 200, "--seed", 2, "-o", out)
        assert result.exit_code == 0
        assert "warning:" in result.output and "relaxed for p=3" in result.output
        report = load(out)
        assert report["kind"] == "defense-report"
        assert report["perm_set"]["primes"] == [3, 5, 7]
        assert len(report["perm_set"]["rhos"]) == 3
        assert sum(report["order_statistics"]["histogram"].values()) == 200

    @pytest.fixture
    def system20(self, tmp_path, invoke):
        sys_path, auth = tmp_path / "sys20.json", tmp_path / "auth20.json"
        assert invoke("setup", "--n", 20, "--seed", 3, "-o", sys_path, "--authority-out", auth).exit_code == 0
        return sys_path, auth

    def test_emit_system_wraps_existing(self, tmp_path, invoke, system20):
        sys_path, auth = system20
        defended = tmp_path / "defended.json"
        args = ("defend", "--system", sys_path, "--authority", auth, "--samples", 50, "--emit-system", defended)
        result = invoke(*args, "-o", tmp_path / "r.json")
        assert result.exit_code == 0, result.output
        before, after = load(sys_path), load(defended)
        assert after["kind"] == "system-params" and after["n"] == 20
        assert (after["m0"], after["tvalues"], after["field"]) == (before["m0"], before["tvalues"], before["field"])
        assert after["alice_conjugates"] != before["alice_conjugates"]
        key = tmp_path / "key.json"
        assert invoke("keygen", "--system", defended, "--side", "bob", "--word-len", 3, "-o", key).exit_code == 0

    def test_emit_system_needs_a_system(self, tmp_path, invoke):
        result = invoke("defend", "--n", 20, "--samples", 10, "--emit-system", tmp_path / "d.json")
        assert result.exit_code == 2
        assert "--emit-system needs --system" in result.output

    def test_system_needs_authority(self, invoke, system20):
        assert invoke("defend", "--system", system20[0], "--samples", 10).exit_code == 2

    def test_foreign_authority(self, tmp_path, invoke, system20):
        other_sys, other_auth = tmp_path / "o.json", tmp_path / "oa.json"
        assert invoke("setup", "--n", 20, "--seed", 4, "-o", other_sys, "--authority-out", other_auth).exit_code == 0
        result = invoke("defend", "--system", system20[0], "--authority", other_auth, "--samples", 10)
        assert result.exit_code == 1
        assert "does not reproduce" in result.output

    def test_strand_count_must_match_system(self, invoke, system20):
        result = invoke("defend", "--system", system20[0], "--authority", system20[1], "--n", 16, "--samples", 10)
        assert result.exit_code == 1
        assert "does not match the system's 20 strands" in result.output

    def test_literal_budget_does_not_fit(self, invoke):
        result = invoke("defend", "--n", 32, "--literal", "--samples", 10)
        assert result.exit_code == 1
        assert "needs 39 points" in result.output
        assert "only 32 are available" in result.output

    def test_k_below_two_is_usage_error(self, invoke):
        assert invoke("defend", "--k", 1).exit_code == 2


class TestExperiment:
    ARGS = ("experiment", "--n", 6, "--k", 3, "--l", 3, "--trials", 2, "--seed", 5)

    def test_byte_identical_replay(self, tmp_path, invoke):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        first = invoke(*self.ARGS, "-o", a)
        assert first.exit_code == 0
        assert "over 2 trials" in first.output
        assert "low-order words" in first.output
        assert invoke(*self.ARGS, "-o", b).exit_code == 0
        assert a.read_bytes() == b.read_bytes()
        report = load(a)
        assert report["config"]["seed"] == 5
        assert report["summary"]["agreement_rate"] == 1.0
        assert "wall_seconds" not in report["summary"]

    def test_profile_with_overrides(self, tmp_path, invoke):
        out = tmp_path / "r.json"
        result = invoke("experiment", "--profile", "desk", "--n", 6, "--k", 3, "--l", 3, "--trials", 1, "-o", out)
        assert result.exit_code == 0
        config = load(out)["config"]
        assert (config["n"], config["q"], config["trials"]) == (6, 32, 1)

    def test_withheld_scenario(self, tmp_path, invoke):
        out = tmp_path / "r.json"
        assert invoke(*self.ARGS, "--scenario", "withheld-pub-b", "-o", out).exit_code == 0
        summary = load(out)["summary"]
        assert summary["failures"] == {"input": 2}
        assert summary["success_rate"] == 0.0
        assert summary["low_order_rate"] is None

    def test_compact_json(self, tmp_path, invoke):
        out = tmp_path / "r.json"
        assert invoke(*self.ARGS, "--json-indent", 0, "--scenario", "withheld-pub-b", "-o", out).exit_code == 0
        assert json.loads(out.read_text(encoding="utf-8"))["kind"] == "experiment-report"

    def test_bad_thread_cap(self, runner, monkeypatch):
        monkeypatch.setenv("AE_LAB_THREADS", "lots")
        result = runner.invoke(main, ["experiment", "--n", "6", "--trials", "2"])
        assert result.exit_code == 1
        assert "AE_LAB_THREADS" in result.output


class TestVerify:
    def test_selected_checks(self, invoke):
        result = invoke("verify", "--check", "poly-in-m0", "--check", "braid-preimage")
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines == ["PASS  poly-in-m0  (100 cases)", "PASS  braid-preimage  (120 cases)"]

    def test_unknown_check(self, invoke):
        result = invoke("verify", "--check", "vibes")
        assert result.exit_code == 1
        assert "unknown checks" in result.output
