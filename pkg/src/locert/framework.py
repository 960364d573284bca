"""Execution of local certification and local computation schemes.

A scheme is a prover producing one record per vertex (a tuple of field values
in the scheme's field order) and a node step that sees only a radius-``k``
view. The step either returns an output or raises :class:`Reject`.
"""

from __future__ import annotations

import multiprocessing
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Literal, Mapping, Sequence

from . import codec
from .graph import LabeledGraph, RadiusView, ViewSkeleton, view_skeleton


class Reject(Exception):
    """Raised by a node step; the argument is a short reason code.

    ``witness`` optionally carries the evidence behind the rejection, in a
    scheme-specific form.
    """

    def __init__(self, reason: str, witness: Any = None) -> None:
        super().__init__(reason)
        self.reason = reason
        self.witness = witness


class ContractError(ValueError):
    """An assignment that does not cover exactly the vertex set."""


class SchemeBugError(AssertionError):
    """The honest prover's assignment was rejected: a defect in the scheme."""


MALFORMED = object()

# exceptions a node step may raise on a garbled but decodable certificate
_GARBLE = (codec.MalformedCertificate, KeyError, TypeError, ValueError, IndexError, AttributeError, ZeroDivisionError, OverflowError, RecursionError)


Record = tuple


@dataclass
class CertificateAssignment:
    """Per-vertex records plus their canonical bit encodings."""

    fields: tuple[str, ...]
    records: dict[int, Any]

    def bits(self, v: int) -> str:
        return codec.encode(self.records[v])

    def size_bits(self, v: int, memo: dict | None = None) -> int:
        """Bits of the record: the concatenated encodings of its fields."""
        return sum(self.field_bits(v, memo).values())

    def field_bits(self, v: int, memo: dict | None = None) -> dict[str, int]:
        rec = self.records[v]
        if rec is MALFORMED:
            return {}
        return {name: codec.encoded_size(val, memo) for name, val in zip(self.fields, rec)}

    def domain(self) -> frozenset[int]:
        return frozenset(self.records)


@dataclass
class Scheme:
    """A certification (``kind='decision'``) or computation scheme."""

    name: str
    radius: int
    fields: tuple[str, ...]
    prover: Callable[[LabeledGraph], dict[int, Any]]
    step: Callable[[RadiusView, dict], Any]
    kind: Literal["decision", "computation"] = "decision"
    # direct computation of f(G, u) for computation schemes
    target: Callable[[LabeledGraph], Mapping[int, Any]] | None = None
    # exact property oracle for decision schemes
    predicate: Callable[[LabeledGraph], bool] | None = None
    params: dict[str, Any] = field(default_factory=dict)
    # contract check for computation schemes whose f(G, u) is only specified up
    # to a property of all outputs (e.g. any bijection); replaces equality
    outputs_ok: Callable[[LabeledGraph, Mapping[int, Any]], bool] | None = None

    def prove(self, g: LabeledGraph) -> CertificateAssignment:
        return CertificateAssignment(self.fields, self.prover(g))


@dataclass
class Verdict:
    accepted: bool
    rejecting: dict[int, str]
    outputs: dict[int, Any]

    @property
    def rejecting_vertices(self) -> frozenset[int]:
        return frozenset(self.rejecting)

    def lines(self) -> list[str]:
        out = []
        for v in sorted(self.outputs.keys() | self.rejecting.keys()):
            if v in self.rejecting:
                out.append(f"vertex {v} REJECT {self.rejecting[v]}")
            else:
                out.append(f"vertex {v} ACCEPT ok")
        return out


def evaluate_node(scheme: Scheme, view: RadiusView, memo: dict) -> tuple[bool, Any]:
    """``(True, output)`` or ``(False, reason)`` for one vertex."""
    if any(c is MALFORMED for c in view.certificates.values()):
        return False, "malformed"
    try:
        return True, scheme.step(view, memo)
    except Reject as r:
        return False, r.reason
    except _GARBLE:
        return False, "malformed"


class Runner:
    """Evaluates one scheme on one graph, reusing view skeletons across assignments."""

    def __init__(self, g: LabeledGraph, scheme: Scheme) -> None:
        self.g = g
        self.scheme = scheme
        self._skeletons: dict[int, ViewSkeleton] = {}

    def skeleton(self, v: int) -> ViewSkeleton:
        sk = self._skeletons.get(v)
        if sk is None:
            sk = self._skeletons[v] = view_skeleton(self.g, v, self.scheme.radius)
        return sk

    def evaluate(
        self,
        a: CertificateAssignment | Mapping[int, Any],
        vertices: Iterable[int] | None = None,
        memo: dict | None = None,
        stop_at_reject: bool = False,
        jobs: int = 1,
    ) -> dict[int, tuple[bool, Any]]:
        records = a.records if isinstance(a, CertificateAssignment) else a
        if set(records) != set(self.g.vertices):
            raise ContractError("assignment domain differs from the vertex set")
        if memo is None:
            memo = {}
        verts = list(self.g.vertices if vertices is None else vertices)
        if jobs > 1 and len(verts) > 1 and not stop_at_reject:
            return _parallel_evaluate(self, records, verts, jobs)
        out: dict[int, tuple[bool, Any]] = {}
        for v in verts:
            res = evaluate_node(self.scheme, self.skeleton(v).with_certificates(records), memo)
            out[v] = res
            if stop_at_reject and not res[0]:
                break
        return out


def explain_rejections(g: LabeledGraph, scheme: Scheme, a: CertificateAssignment | Mapping[int, Any] | None = None) -> dict[int, Reject]:
    """The :class:`Reject` raised at every vertex that rejects through its step."""
    if a is None:
        a = scheme.prove(g)
    records = a.records if isinstance(a, CertificateAssignment) else a
    runner = Runner(g, scheme)
    memo: dict = {}
    out = {}
    for v in g.vertices:
        try:
            scheme.step(runner.skeleton(v).with_certificates(records), memo)
        except Reject as r:
            out[v] = r
    return out


_WORK: tuple[Runner, Mapping[int, Any]] | None = None


def _work(chunk: list[int]) -> list[tuple[int, tuple[bool, Any]]]:
    assert _WORK is not None
    runner, records = _WORK
    memo: dict = {}
    return [(v, evaluate_node(runner.scheme, runner.skeleton(v).with_certificates(records), memo)) for v in chunk]


def _parallel_evaluate(runner: Runner, records: Mapping[int, Any], verts: list[int], jobs: int) -> dict[int, tuple[bool, Any]]:
    global _WORK
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        return runner.evaluate(records, verts, jobs=1)
    _WORK = (runner, records)
    chunks = [verts[i::jobs] for i in range(jobs)]
    try:
        with ctx.Pool(jobs) as pool:
            parts = pool.map(_work, chunks)
    finally:
        _WORK = None
    return {v: res for part in parts for v, res in part}


def _verdict(results: Mapping[int, tuple[bool, Any]]) -> Verdict:
    rejecting = {v: r for v, (ok, r) in results.items() if not ok}
    outputs = {v: r for v, (ok, r) in results.items() if ok}
    return Verdict(not rejecting, rejecting, outputs)


def run_certification(
    g: LabeledGraph,
    scheme: Scheme,
    a: CertificateAssignment | Mapping[int, Any] | None = None,
    *,
    jobs: int = 1,
    runner: Runner | None = None,
) -> Verdict:
    """Run every node step on its radius view; ``a=None`` invokes the prover."""
    if a is None:
        a = scheme.prove(g)
    runner = runner or Runner(g, scheme)
    return _verdict(runner.evaluate(a, jobs=jobs))


def run_computation_scheme(g: LabeledGraph, scheme: Scheme, *, jobs: int = 1) -> dict[int, Any]:
    """Honest run of a computation scheme; any rejection is a scheme bug."""
    verdict = run_certification(g, scheme, jobs=jobs)
    if not verdict.accepted:
        raise SchemeBugError(f"honest assignment rejected at {verdict.rejecting}")
    return verdict.outputs


# ---------------------------------------------------------------- measurement


@dataclass(frozen=True)
class SizeReport:
    max_bits: int
    total_bits: int
    per_field_max: dict[str, int]
    per_vertex: dict[int, int]


def measure_certificates(a: CertificateAssignment) -> SizeReport:
    memo: dict = {}
    per_vertex: dict[int, int] = {}
    per_field: dict[str, int] = {}
    for v in a.records:
        fb = a.field_bits(v, memo)
        per_vertex[v] = sum(fb.values())
        for name, bits in fb.items():
            per_field[name] = max(per_field.get(name, 0), bits)
    return SizeReport(max(per_vertex.values(), default=0), sum(per_vertex.values()), per_field, per_vertex)


def dump_assignment(a: CertificateAssignment) -> str:
    """Text dump: one line ``<id> <field> <nbits> <hex>`` per vertex and field."""
    lines = []
    for v in sorted(a.records):
        for name, val in zip(a.fields, a.records[v]):
            bits = codec.encode(val)
            lines.append(f"{v} {name} {len(bits)} {codec.bits_to_hex(bits) or '-'}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_assignment(text: str, fields: Sequence[str]) -> CertificateAssignment:
    """Parse a dump; undecodable payloads become malformed records (rejected at runtime)."""
    names = tuple(fields)
    per_vertex: dict[int, dict[str, Any]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"malformed dump line {lineno}")
        v, name, nbits, payload = int(parts[0]), parts[1], int(parts[2]), parts[3]
        if name not in names:
            raise ValueError(f"unknown field {name!r} at line {lineno}")
        try:
            bits = codec.hex_to_bits("" if payload == "-" else payload, nbits)
            per_vertex.setdefault(v, {})[name] = codec.decode(bits)
        except codec.MalformedCertificate:
            per_vertex.setdefault(v, {})[name] = MALFORMED
    records: dict[int, Any] = {}
    for v, vals in per_vertex.items():
        if any(val is MALFORMED for val in vals.values()) or set(vals) != set(names):
            records[v] = MALFORMED
        else:
            records[v] = tuple(vals[name] for name in names)
    return CertificateAssignment(tuple(fields), records)


# ---------------------------------------------------------------- fuzzing

Strategy = Literal["bitflip", "splice", "relabel", "gadget-hybrid"]


@dataclass
class Violation:
    trial: int
    strategy: str
    detail: str
    assignment: dict[int, Any]


@dataclass
class FuzzReport:
    scheme: str
    strategy: str
    trials: int = 0
    rejected: int = 0
    undetected_harmless: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _flip_value(value: Any, rng: random.Random, flips: int, tries: int = 32) -> Any:
    """Flip bits of the encoding, preferring flips that still decode (those
    reach the semantic checks instead of the parser)."""
    enc = codec.encode(value)
    for _ in range(tries):
        bits = list(enc)
        for _ in range(flips):
            i = rng.randrange(len(bits))
            bits[i] = "1" if bits[i] == "0" else "0"
        try:
            return codec.decode("".join(bits))
        except codec.MalformedCertificate:
            continue
    return MALFORMED


def _bitflip(records: dict[int, Any], fields: tuple[str, ...], rng: random.Random) -> tuple[dict[int, Any], set[int]]:
    out = dict(records)
    verts = sorted(records)
    flips = rng.choice((1, 1, 1, 2, 3))
    if fields and rng.random() < 0.5:
        # consistent corruption: the same flip on every copy of one shared field value
        v = rng.choice(verts)
        fi = rng.randrange(len(fields))
        old = records[v][fi]
        new = _flip_value(old, rng, flips)
        touched = set()
        for x in verts:
            if records[x][fi] == old:
                out[x] = MALFORMED if new is MALFORMED else records[x][:fi] + (new,) + records[x][fi + 1 :]
                touched.add(x)
        return out, touched
    touched = set(rng.sample(verts, min(len(verts), rng.choice((1, 1, 2)))))
    for x in touched:
        if not fields:
            continue
        fi = rng.randrange(len(fields))
        new = _flip_value(records[x][fi], rng, flips)
        out[x] = MALFORMED if new is MALFORMED else records[x][:fi] + (new,) + records[x][fi + 1 :]
    return out, touched


def fuzz_soundness(
    g: LabeledGraph,
    scheme: Scheme,
    strategy: Strategy,
    seed: int = 0,
    budget: int = 100,
    *,
    donors: Sequence[LabeledGraph] = (),
    left: Iterable[int] | None = None,
    expected: Mapping[int, Any] | None = None,
    is_yes: bool | None = None,
) -> FuzzReport:
    """Run ``budget`` adversarial assignments and record contract violations.

    Decision schemes must reject every assignment on a NO-instance (on
    YES-instances corrupted assignments may be accepted; nothing to check).
    Computation schemes must either reject or output ``f(G, u)`` everywhere.
    ``splice`` draws certificates from ``donors`` (graphs on the same identifiers,
    random graphs by default); ``gadget-hybrid`` glues donor 0 on ``left`` to
    donor 1 elsewhere, or random cuts when ``left`` is omitted.
    """
    report = FuzzReport(scheme.name, strategy)
    if budget < 1:
        return report
    rng = random.Random(f"fuzz:{seed}:{strategy}")
    runner = Runner(g, scheme)
    honest = scheme.prover(g)
    if scheme.kind == "computation":
        if expected is None and scheme.outputs_ok is None:
            assert scheme.target is not None
            expected = scheme.target(g)
    elif is_yes is None:
        assert scheme.predicate is not None
        is_yes = scheme.predicate(g)
    if scheme.kind == "decision" and is_yes:
        return report
    memo: dict = {}
    honest_results = runner.evaluate(honest, memo=memo)
    verts = list(g.vertices)
    donor_records: list[dict[int, Any]] = []
    if strategy in ("splice", "gadget-hybrid"):
        pool = list(donors)
        if not pool:
            for j in range(4):
                pool.append(_random_same_ids(g, random.Random(f"donor:{seed}:{j}")))
        donor_records = [scheme.prover(d) for d in pool]
    left_set = None if left is None else set(left)

    for trial in range(budget):
        if strategy == "bitflip":
            records, touched = _bitflip(honest, scheme.fields, rng)
        elif strategy == "splice":
            donor = rng.choice(donor_records)
            touched = set(verts) if rng.random() < 0.5 else set(rng.sample(verts, max(1, len(verts) // 3)))
            records = {v: (donor[v] if v in touched else honest[v]) for v in verts}
        elif strategy == "relabel":
            perm = verts[:]
            rng.shuffle(perm)
            touched = {v for v, w in zip(verts, perm) if v != w}
            records = {v: honest[w] for v, w in zip(verts, perm)}
        elif strategy == "gadget-hybrid":
            if len(donor_records) < 2:
                raise ValueError("gadget-hybrid needs two donors")
            a_rec, b_rec = rng.sample(donor_records, 2) if left_set is None else donor_records[:2]
            cut = left_set if left_set is not None else set(g.distances_from([rng.choice(verts)], limit=rng.randint(0, 3)))
            records = {v: (a_rec[v] if v in cut else b_rec[v]) for v in verts}
            touched = set(verts)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        report.trials += 1
        # only vertices seeing a changed certificate can change their outcome
        changed = {v for v in touched if records[v] is not honest[v] and records[v] != honest[v]}
        dirty = set()
        for v in changed:
            dirty.update(g.distances_from([v], limit=scheme.radius))
        results = dict(honest_results)
        if dirty:
            results.update(runner.evaluate(records, sorted(dirty), memo=memo, stop_at_reject=scheme.kind == "decision"))
        if any(not ok for ok, _ in results.values()):
            report.rejected += 1
            continue
        if scheme.kind == "decision":
            report.violations.append(Violation(trial, strategy, "NO-instance accepted", records))
            continue
        if scheme.outputs_ok is not None:
            outs = {v: out for v, (_, out) in results.items()}
            wrong = [] if scheme.outputs_ok(g, outs) else sorted(outs)
        else:
            wrong = [v for v, (_, out) in results.items() if out != expected[v]]
        if wrong:
            report.violations.append(Violation(trial, strategy, f"wrong outputs at {sorted(wrong)[:5]}", records))
        else:
            report.undetected_harmless += 1
    return report


def _random_same_ids(g: LabeledGraph, rng: random.Random) -> LabeledGraph:
    verts = list(g.vertices)
    p = min(1.0, 2 * g.m / max(1, g.n * (g.n - 1) / 2)) if g.n > 1 else 0.0
    p = max(p, 0.1)
    edges = [(u, v) for i, u in enumerate(verts) for v in verts[i + 1 :] if rng.random() < p]
    return LabeledGraph(verts, edges)
