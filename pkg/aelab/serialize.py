r"""
Canonical JSON artifacts.

Every file the lab writes is UTF-8 JSON with a top-level `version` and `kind`,
keys sorted, so the same object always serializes to the same bytes.

    from aelab.serialize import dumps, loads

    text = dumps(params)                    # kind "system-params"
    loads(text) == params                   # True
    loads(text, expect="public-key")        # ArtifactError: wrong kind

Encodings:

    field        {"p": 2, "m": 5, "reduction": [1, 0, 1, 0, 0, 1]}
    element      lowercase hex of the packed coefficient vector, "1f"
    matrix       list of rows of elements
    permutation  1-based image list, [2, 1, 3]
    braid        signed letter list, [1, -2, 3]
    pair         {"matrix": ..., "perm": ...}

The authority data of a system (z and base words) is its own kind, so the
public system file never carries it. Malformed input raises ArtifactError
naming the kind and the offending field.
"""

import json
from collections.abc import Callable, Mapping
from functools import singledispatch
from typing import Any

from aelab.aedh import Authority, PrivateKey, PublicKey, SharedSecret, SystemParams
from aelab.attack import AttackResult
from aelab.braid import BraidWord, ConjugateSet
from aelab.defense import HighOrderPermSet, OrderStatistics
from aelab.emult import EMultPair, TValues
from aelab.ffield import FieldSpec, Matrix
from aelab.perm import Permutation

__all__ = [
    "FORMAT_VERSION",
    "ArtifactError",
    "to_dict",
    "from_dict",
    "dumps",
    "loads",
    "write_artifact",
    "read_artifact",
    "field_to_json",
    "matrix_to_json",
    "pair_to_json",
    "attack_result_to_dict",
]

FORMAT_VERSION = 1


class ArtifactError(ValueError):
    """A serialized artifact is malformed or of the wrong kind."""


# Leaf encoders


def field_to_json(f: FieldSpec) -> dict:
    return {"p": f.p, "m": f.m, "reduction": list(f.reduction)}


def _hex(v: int) -> str:
    return format(v, "x")


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[_hex(v) for v in row] for row in m.rows]


def pair_to_json(p: EMultPair) -> dict:
    return {"matrix": matrix_to_json(p.matrix), "perm": list(p.perm.image)}


def _words(ws) -> list[list[int]]:
    return [list(w.letters) for w in ws]


# Leaf decoders, each names the field it failed on


class _Reader:
    def __init__(self, kind: str, data: Mapping[str, Any]) -> None:
        self.kind = kind
        self.data = data

    def fail(self, name: str, why: str) -> ArtifactError:
        return ArtifactError(f"{self.kind}: field '{name}' {why}")

    def get(self, name: str, data: Mapping[str, Any] | None = None) -> Any:
        data = self.data if data is None else data
        if not isinstance(data, Mapping) or name not in data:
            raise self.fail(name, "is missing")
        return data[name]

    def parse[T](self, name: str, build: Callable[[], T]) -> T:
        try:
            return build()
        except ArtifactError:
            raise
        except (ValueError, TypeError, KeyError, IndexError, AttributeError) as exc:
            raise self.fail(name, f"is invalid: {exc}") from exc

    def integer(self, name: str) -> int:
        v = self.get(name)
        if not isinstance(v, int) or isinstance(v, bool):
            raise self.fail(name, f"must be an integer, got {v!r}")
        return v

    def field_spec(self, name: str = "field") -> FieldSpec:
        d = self.get(name)
        return self.parse(name, lambda: FieldSpec(d["p"], d["m"], d["reduction"]))

    def elements(self, name: str, values: Any) -> tuple[int, ...]:
        return self.parse(name, lambda: tuple(int(x, 16) for x in values))

    def matrix(self, name: str, f: FieldSpec, raw: Any = None) -> Matrix:
        raw = self.get(name) if raw is None else raw
        return self.parse(name, lambda: Matrix(f, [[int(x, 16) for x in row] for row in raw]))

    def perm(self, name: str, raw: Any = None) -> Permutation:
        raw = self.get(name) if raw is None else raw
        return self.parse(name, lambda: Permutation(raw))

    def braid(self, name: str, n: int, raw: Any = None) -> BraidWord:
        raw = self.get(name) if raw is None else raw
        return self.parse(name, lambda: BraidWord(n, tuple(raw)))

    def words(self, name: str, n: int) -> tuple[BraidWord, ...]:
        raw = self.get(name)
        return self.parse(name, lambda: tuple(BraidWord(n, tuple(w)) for w in raw))

    def pair(self, name: str, f: FieldSpec) -> EMultPair:
        raw = self.get(name)
        m = self.matrix(f"{name}.matrix", f, self.get("matrix", raw))
        p = self.perm(f"{name}.perm", self.get("perm", raw))
        return self.parse(name, lambda: EMultPair(m, p))


# Encoders by type


@singledispatch
def to_dict(obj: object) -> dict:
    """Serializable dict for any lab artifact, version and kind included."""
    raise TypeError(f"no artifact encoding for {type(obj).__name__}")


def _envelope(kind: str, body: dict) -> dict:
    return {"version": FORMAT_VERSION, "kind": kind, **body}


@to_dict.register
def _(obj: SystemParams) -> dict:
    return _envelope(
        "system-params",
        {
            "n": obj.n,
            "field": field_to_json(obj.field),
            "m0": matrix_to_json(obj.m0),
            "tvalues": [_hex(v) for v in obj.tvalues.values],
            "alice_conjugates": _words(obj.alice_conjugates.words),
            "bob_conjugates": _words(obj.bob_conjugates.words),
            "z_length": obj.z_length,
            "base_word_len": obj.base_word_len,
        },
    )


@to_dict.register
def _(obj: Authority) -> dict:
    return _envelope(
        "authority",
        {
            "n": obj.z.n,
            "z": list(obj.z.letters),
            "alice_bases": _words(obj.alice_bases),
            "bob_bases": _words(obj.bob_bases),
        },
    )


@to_dict.register
def _(obj: PrivateKey) -> dict:
    return _envelope(
        "private-key",
        {
            "n": obj.braid.n,
            "side": obj.side,
            "field": field_to_json(obj.field),
            "poly_coeffs": [_hex(v) for v in obj.poly_coeffs],
            "conjugate_word": list(obj.conjugate_word),
            "braid": list(obj.braid.letters),
        },
    )


@to_dict.register
def _(obj: PublicKey) -> dict:
    return _envelope(
        "public-key",
        {"n": obj.pair.n, "side": obj.side, "field": field_to_json(obj.pair.field), "pair": pair_to_json(obj.pair)},
    )


@to_dict.register
def _(obj: SharedSecret) -> dict:
    return _envelope(
        "shared-secret",
        {"n": obj.pair.n, "field": field_to_json(obj.pair.field), "pair": pair_to_json(obj.pair)},
    )


@to_dict.register
def _(obj: AttackResult) -> dict:
    return attack_result_to_dict(obj)


def attack_result_to_dict(obj: AttackResult, *, timings: bool = False) -> dict:
    """Attack outcome with stats; stage timings only when asked for."""
    stats = obj.stats
    body: dict[str, Any] = {
        "outcome": obj.outcome,
        "failed_stage": obj.failed_stage.value if obj.failed_stage else None,
        "reason": obj.reason,
        "key": pair_to_json(obj.key) if obj.key else None,
        "stats": {
            "samples": stats.samples,
            "pure_samples": stats.pure_samples,
            "span_trace": list(stats.span_trace),
            "dim_v": stats.dim_v,
            "dim_c": stats.dim_c,
            "dim_intersection": stats.dim_intersection,
            "stage1_expansions": stats.stage1_expansions,
            "stage1_word_len": stats.stage1_word_len,
            "stage2_trials": stats.stage2_trials,
            "basis_entries": stats.basis_entries,
        },
    }
    if timings:
        body["stats"]["timings"] = {k: round(v, 6) for k, v in sorted(stats.timings.items())}
    if obj.provenance is not None:
        pv = obj.provenance
        body["provenance"] = {
            "a_word": list(pv.a_word),
            "a_tilde": matrix_to_json(pv.a_tilde),
            "gamma": matrix_to_json(pv.gamma),
            "c_tilde": matrix_to_json(pv.c_tilde),
            "alpha_prime": matrix_to_json(pv.alpha_prime),
            "lambdas": [_hex(v) for v in pv.lambdas],
        }
    return _envelope("attack-result", body)


@to_dict.register
def _(obj: HighOrderPermSet) -> dict:
    return _envelope(
        "perm-set",
        {
            "n": obj.n,
            "k": obj.k,
            "primes": list(obj.budget.primes),
            "order_product": obj.budget.order_product,
            "literal": obj.budget.literal,
            "rhos": [list(r.image) for r in obj.rhos],
            "cycles": {str(p): [list(c) for c in cs] for p, cs in obj.cycles.items()},
        },
    )


@to_dict.register
def _(obj: OrderStatistics) -> dict:
    return _envelope(
        "order-statistics",
        {
            "samples": obj.samples,
            "histogram": {str(o): c for o, c in obj.histogram.items()},
            "fraction_above": [[th, fr] for th, fr in obj.fraction_above.items()],
        },
    )


# Decoders by kind


def _system(r: _Reader) -> SystemParams:
    n, f = r.integer("n"), r.field_spec()
    return r.parse(
        "system-params",
        lambda: SystemParams(
            n=n,
            field=f,
            m0=r.matrix("m0", f),
            tvalues=r.parse("tvalues", lambda: TValues(f, r.elements("tvalues", r.get("tvalues")))),
            alice_conjugates=r.parse("alice_conjugates", lambda: ConjugateSet(n, r.words("alice_conjugates", n))),
            bob_conjugates=r.parse("bob_conjugates", lambda: ConjugateSet(n, r.words("bob_conjugates", n))),
            z_length=r.integer("z_length"),
            base_word_len=r.integer("base_word_len"),
        ),
    )


def _authority(r: _Reader) -> Authority:
    n = r.integer("n")
    return Authority(r.braid("z", n), r.words("alice_bases", n), r.words("bob_bases", n))


def _side(r: _Reader) -> str:
    side = r.get("side")
    if side not in ("alice", "bob"):
        raise r.fail("side", f"must be 'alice' or 'bob', got {side!r}")
    return side


def _private(r: _Reader) -> PrivateKey:
    n, f = r.integer("n"), r.field_spec()
    word = r.get("conjugate_word")
    coeffs = r.elements("poly_coeffs", r.get("poly_coeffs"))
    if any(c >= f.order for c in coeffs):
        raise r.fail("poly_coeffs", f"holds values outside GF({f.order})")
    return PrivateKey(
        side=_side(r),
        field=f,
        poly_coeffs=coeffs,
        conjugate_word=r.parse("conjugate_word", lambda: tuple(int(x) for x in word)),
        braid=r.braid("braid", n),
    )


def _public(r: _Reader) -> PublicKey:
    pair = r.pair("pair", r.field_spec())
    if pair.n != r.integer("n"):
        raise r.fail("n", f"does not match the pair size {pair.n}")
    return PublicKey(_side(r), pair)


def _shared(r: _Reader) -> SharedSecret:
    return SharedSecret(r.pair("pair", r.field_spec()))


_DECODERS: dict[str, Callable[[_Reader], Any]] = {
    "system-params": _system,
    "authority": _authority,
    "private-key": _private,
    "public-key": _public,
    "shared-secret": _shared,
}


def from_dict(data: Mapping[str, Any], *, expect: str | None = None) -> Any:
    """Rebuild an artifact from its dict. expect pins the kind."""
    if not isinstance(data, Mapping):
        raise ArtifactError(f"artifact must be a JSON object, got {type(data).__name__}")
    kind = data.get("kind")
    if kind not in _DECODERS:
        raise ArtifactError(f"artifact: field 'kind' has unknown value {kind!r}")
    if expect is not None and kind != expect:
        raise ArtifactError(f"{expect}: field 'kind' is {kind!r}")
    r = _Reader(kind, data)
    version = r.integer("version")
    if version != FORMAT_VERSION:
        raise r.fail("version", f"is {version}, expected {FORMAT_VERSION}")
    return _DECODERS[kind](r)


def dumps(obj: object, *, indent: int | None = 2) -> str:
    """Canonical JSON text, sorted keys, trailing newline."""
    payload = obj if isinstance(obj, dict) else to_dict(obj)
    return json.dumps(payload, indent=indent, sort_keys=True) + "\n"


def loads(text: str, *, expect: str | None = None) -> Any:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"artifact is not valid JSON: {exc}") from exc
    return from_dict(data, expect=expect)


def write_artifact(path, obj: object, *, indent: int | None = 2) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, indent=indent))


def read_artifact(path, *, expect: str | None = None) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), expect=expect)
