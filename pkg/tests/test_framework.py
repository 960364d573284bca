import pytest

from locert.basic import acyclicity_scheme
from locert.codec import Bits
from locert.corpus import random_graph
from locert.framework import (
    MALFORMED,
    CertificateAssignment,
    ContractError,
    Reject,
    Scheme,
    dump_assignment,
    load_assignment,
    measure_certificates,
    run_certification,
)
from locert.paths import p4k_scheme

from conftest import cycle, path


def always(accept: bool) -> Scheme:
    def step(view, memo):
        if not accept:
            raise Reject("no")
        return True

    return Scheme("const", 1, ("x",), lambda g: {v: (0,) for v in g.vertices}, step)


def test_acyclic_path_accepted():
    assert run_certification(path(3), acyclicity_scheme()).accepted


def test_always_accept():
    assert run_certification(random_graph(12, 0.4, 1), always(True)).accepted


def test_verdict_invariant():
    v = run_certification(path(3), always(False))
    assert not v.accepted and v.rejecting_vertices == {1, 2, 3}
    assert v.lines()[0] == "vertex 1 REJECT no"


def test_domain_mismatch():
    with pytest.raises(ContractError):
        run_certification(path(3), acyclicity_scheme(), {1: (0,), 2: (1,)})


def test_measure():
    # an 8-bit and a 16-bit record
    a = CertificateAssignment(("f",), {1: (Bits("10"),), 2: ((Bits("10"), 0),)})
    rep = measure_certificates(a)
    assert rep.per_vertex == {1: 8, 2: 16}
    assert rep.max_bits == 16 and rep.total_bits == 24
    assert measure_certificates(CertificateAssignment((), {1: (), 2: ()})).max_bits == 0


def test_dump_round_trip():
    g = random_graph(14, 0.3, 5)
    s = p4k_scheme(2)
    a = s.prove(g)
    b = load_assignment(dump_assignment(a), s.fields)
    assert b.records == a.records
    assert run_certification(g, s, b).accepted == run_certification(g, s, a).accepted


def test_dump_garbled_payload_is_malformed():
    g = path(3)
    s = acyclicity_scheme()
    text = dump_assignment(s.prove(g)).replace("2 dist 5", "2 dist 1", 1)
    b = load_assignment(text, s.fields)
    assert b.records[2] is MALFORMED
    v = run_certification(g, s, b)
    assert v.rejecting.get(2) == "malformed"


def test_determinism_and_parallel():
    g = random_graph(20, 0.3, 9)
    s = p4k_scheme(2)
    a = s.prove(g)
    v1 = run_certification(g, s, a)
    v2 = run_certification(g, s, a)
    v3 = run_certification(g, s, a, jobs=3)
    assert v1.lines() == v2.lines() == v3.lines()


def test_order_invariance():
    from locert.framework import Runner

    g = cycle(9)
    s = p4k_scheme(2)
    a = s.prove(g)
    r = Runner(g, s)
    fwd = r.evaluate(a, sorted(g.vertices))
    back = r.evaluate(a, sorted(g.vertices, reverse=True))
    assert fwd == back
