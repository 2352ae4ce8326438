from dataclasses import replace

import pytest

from quorumlace.model import ConfigError, ContractError, pset
from quorumlace.protocols import GENESIS
from quorumlace.simnet import (
    BroadcastProtocol,
    Crash,
    Equivocate,
    Honest,
    LieConfig,
    Mute,
    Op,
    RegisterProtocol,
    Scenario,
    Trace,
    WorstCase,
    check,
    check_broadcast,
    check_register,
    run,
    sweep,
)

from conftest import make_e4

P = pset
E4 = make_e4()
SPLIT = (P("p1", "p2"), P("p3", "p4"))


def bcast(faulty=None, seed=1, sender="p2", **kw) -> Scenario:
    return Scenario(E4, E4.universe, BroadcastProtocol(sender, "v"), faulty or {}, seed=seed, **kw)


def register(script, faulty=None, seed=1, **kw) -> Scenario:
    return Scenario(E4, E4.universe, RegisterProtocol("p2", tuple(script)), faulty or {}, seed=seed, **kw)


def deliveries(trace: Trace) -> dict:
    return {p: payload["deliver"] for _, kind, p, payload in trace.records if kind == "output"}


def returns(trace: Trace) -> dict:
    return {payload["index"]: payload for _, kind, _, payload in trace.records if kind == "output"}


# --- scenario validation ------------------------------------------------------------


@pytest.mark.parametrize(
    "make",
    [
        lambda: Scenario(E4, P("p9"), BroadcastProtocol("p2", "v")),
        lambda: Scenario(E4, E4.universe, BroadcastProtocol("p9", "v")),
        lambda: bcast({"p9": Mute()}),
        lambda: bcast({"p1": Equivocate(SPLIT, "v", "w")}),
        lambda: bcast(max_steps=0),
        lambda: bcast(adversarial_target="p9"),
        lambda: register([Op("p3", "write", "a")]),
        lambda: register([Op("p2", "write")]),
        lambda: register([Op("p3", "read", after=0)]),
        lambda: register([Op("p3", "scan")]),
        lambda: register([Op("p9", "read")]),
        lambda: register([], {"p2": Equivocate(SPLIT, "v", "w")}),
        lambda: Scenario(E4, E4.universe, RegisterProtocol("p9")),
        lambda: Scenario(E4, E4.universe, "gossip"),
    ],
)
def test_bad_scenarios_are_rejected(make):
    with pytest.raises(ConfigError):
        make()


def test_honest_entries_are_not_faulty():
    sc = bcast({"p1": Honest(), "p4": Mute()})
    assert sc.faulty_set == P("p4")
    assert sc.correct == P("p1", "p2", "p3")


# --- broadcast runs -----------------------------------------------------------------------


def test_honest_broadcast_delivers_everywhere():
    sc = bcast()
    trace = run(sc)
    assert not trace.truncated
    assert deliveries(trace) == {p: "v" for p in E4.universe}
    verdict = check_broadcast(trace, sc)
    assert verdict.ok
    assert all(verdict.properties[k] == "pass" for k in ("validity", "integrity", "consistency", "totality", "cascade"))


def test_lying_and_mute_faulty_processes():
    for seed in range(40):
        sc = bcast({"p1": LieConfig(), "p4": Mute()}, seed=seed)
        trace = run(sc)
        got = deliveries(trace)
        assert got["p2"] == got["p3"] == "v"
        assert check(trace, sc).ok


def test_equivocating_sender_cannot_split_the_league():
    for seed in range(40):
        sc = bcast({"p1": Equivocate(SPLIT, "v", "w"), "p4": LieConfig()}, seed=seed, sender="p1")
        trace = run(sc)
        got = deliveries(trace)
        assert got.get("p2") == got.get("p3")
        assert check(trace, sc).ok


@pytest.mark.parametrize("behavior", [Crash(5), WorstCase(), Mute()])
def test_single_faulty_process(behavior):
    for seed in range(10):
        sc = bcast({"p4": behavior}, seed=seed)
        assert check(run(sc), sc).ok


def test_adversarial_scheduling_still_correct():
    for seed in range(20):
        sc = bcast({"p1": LieConfig()}, seed=seed, adversarial_target="p4")
        assert check(run(sc), sc).ok


def test_mute_sender_delivers_nothing():
    sc = bcast({"p2": Mute()})
    trace = run(sc)
    assert deliveries(trace) == {}
    assert check(trace, sc).status == "precondition-unsatisfied"


def test_untolerated_faulty_set_is_a_precondition_failure():
    sc = bcast({"p2": Mute()})
    verdict = check_broadcast(run(sc), sc)
    assert verdict.ok and "not tolerated" in verdict.note


def test_synthetic_conflicting_deliveries_fail_consistency():
    sc = bcast()
    trace = Trace()
    trace.append("output", "p2", {"deliver": "v"})
    trace.append("output", "p3", {"deliver": "w"})
    verdict = check_broadcast(trace, sc)
    assert not verdict.ok
    assert verdict.properties["consistency"] == "fail"


def test_double_delivery_fails_integrity():
    sc = bcast()
    trace = run(sc)
    trace.append("output", "p3", {"deliver": "v"})
    assert check_broadcast(trace, sc).properties["integrity"] == "fail"


def test_truncated_trace_skips_liveness():
    sc = bcast(max_steps=5)
    trace = run(sc)
    assert trace.truncated
    verdict = check_broadcast(trace, sc)
    assert verdict.ok and verdict.truncated
    assert verdict.properties["validity"] == "skipped"
    assert verdict.properties["totality"] == "skipped"
    assert verdict.properties["consistency"] == "pass"


def test_checkers_reject_the_wrong_protocol():
    with pytest.raises(TypeError):
        check_broadcast(Trace(), register([]))
    with pytest.raises(TypeError):
        check_register(Trace(), bcast())


# --- register runs -------------------------------------------------------------------------


def test_empty_script_is_quiescent_immediately():
    sc = register([])
    trace = run(sc)
    assert trace.records == [] and trace.steps == 0 and not trace.truncated
    assert check(trace, sc).ok


def test_write_then_read():
    sc = register([Op("p2", "write", "a"), Op("p3", "read", after=0)])
    trace = run(sc)
    got = returns(trace)
    assert got[0]["ts"] == 1 and got[1]["value"] == "a"
    assert check(trace, sc).properties == {"termination": "pass", "validity": "pass"}


def test_read_before_any_write_returns_initial_value():
    sc = register([Op("p3", "read")])
    trace = run(sc)
    assert returns(trace)[0]["value"] is None
    assert check(trace, sc).ok


def test_concurrent_read_sees_old_or_new_value():
    script = [Op("p2", "write", "a"), Op("p2", "write", "b", after=0), Op("p3", "read", after=0)]
    seen = set()
    for seed in range(40):
        sc = register(script, seed=seed)
        trace = run(sc)
        seen.add(returns(trace)[2]["value"])
        assert check(trace, sc).ok
    assert seen <= {"a", "b"}


def test_mute_faulty_processes_do_not_block_operations():
    script = [Op("p2", "write", "a"), Op("p3", "read", after=0)]
    for seed in range(20):
        sc = register(script, {"p1": Mute(), "p4": Mute()}, seed=seed)
        trace = run(sc)
        assert set(returns(trace)) == {0, 1}
        assert check(trace, sc).ok


def test_stale_read_fails_validity():
    sc = register([Op("p2", "write", "a"), Op("p3", "read", after=0)])
    trace = run(sc)
    records = [
        (i, k, p, ({**pl, "value": "zzz"} if k == "output" and pl.get("op") == "read" else pl)) for i, k, p, pl in trace.records
    ]
    verdict = check_register(Trace(records, False, trace.steps, trace.meta), sc)
    assert verdict.properties["validity"] == "fail"


def test_missing_return_fails_termination():
    sc = register([Op("p3", "read")])
    trace = run(sc)
    cut = [r for r in trace.records if r[1] != "output"]
    assert check_register(Trace(cut, False, trace.steps, trace.meta), sc).properties["termination"] == "fail"


def test_faulty_writer_is_a_precondition_failure():
    sc = register([Op("p3", "read")], {"p2": Mute()})
    assert check_register(run(sc), sc).status == "precondition-unsatisfied"


# --- trace properties --------------------------------------------------------------------------


def test_replay_is_byte_identical():
    for sc in (bcast({"p1": LieConfig()}, seed=9), register([Op("p2", "write", "a"), Op("p3", "read", after=0)], seed=9)):
        assert run(sc).to_jsonl() == run(replace(sc)).to_jsonl()


def test_different_seeds_reorder_delivery():
    assert run(bcast(seed=1)).to_jsonl() != run(bcast(seed=2)).to_jsonl()


def test_jsonl_round_trip():
    trace = run(bcast({"p4": Mute()}, seed=3))
    text = trace.to_jsonl()
    assert Trace.from_jsonl(text).to_jsonl() == text
    header = text.splitlines()[0]
    assert header.startswith('{"format":1')


def test_jsonl_rejects_unknown_format():
    with pytest.raises(ValueError):
        Trace.from_jsonl('{"format":2}\n')


def _correct_to_correct(trace: Trace, correct: frozenset) -> tuple:
    sent = sum(len(set(pl["to"]) & correct) for _, k, p, pl in trace.records if k == "send" and p in correct)
    got = sum(1 for _, k, p, pl in trace.records if k == "deliver-msg" and p in correct and pl["from"] in correct)
    return sent, got


def test_every_correct_message_reaches_every_correct_recipient():
    scenarios = [bcast({"p1": LieConfig(), "p4": Crash(7)}, seed=s) for s in range(10)]
    scenarios += [register([Op("p2", "write", "a"), Op("p3", "read", after=0)], {"p4": Mute()}, seed=s) for s in range(10)]
    for sc in scenarios:
        trace = run(sc)
        assert not trace.truncated
        sent, got = _correct_to_correct(trace, sc.correct)
        assert sent == got > 0


def test_no_message_forges_a_correct_identity():
    script = [Op("p2", "write", "a"), Op("p2", "write", "b", after=0), Op("p3", "read", after=0), Op("p1", "read")]
    for seed in range(10):
        sc = register(script, {"p1": LieConfig(), "p4": Mute()}, seed=seed)
        trace = run(sc)
        writes = {}
        for _, kind, p, pl in trace.records:
            if kind != "send":
                continue
            m = pl["msg"]
            if p in sc.correct:
                assert m["config"]["trusted"] == sorted(E4.config(p).trusted)
            if m["kind"] == "WRITE":
                writes[(m["ts"], m["value"])] = m["signature"]
        for _, kind, p, pl in trace.records:
            m = pl.get("msg", {})
            if kind == "send" and m.get("kind") == "VALUE":
                if m["ts"] == 0:
                    assert m["signature"] == GENESIS
                else:
                    assert writes[(m["ts"], m["value"])] == m["signature"]


# --- sweeps ------------------------------------------------------------------------------------


def test_sweep_over_tolerated_sets():
    faulty = [{}, {"p1": LieConfig()}, {"p4": Mute()}, {"p1": LieConfig(), "p4": Mute()}]
    report = sweep(bcast(), range(5), faulty)
    assert report.ok and report.runs == 20 and not report.skipped


def test_sweep_skips_expected_untolerated_sets():
    report = sweep(bcast(), range(3), [{"p2": Mute()}], expected_untolerated=[P("p2")])
    assert report.runs == 0
    assert report.skipped == [("{p2}", "expected-untolerated")]


def test_sweep_refuses_unmarked_untolerated_sets():
    with pytest.raises(ContractError):
        sweep(bcast(), range(3), [{"p2": Mute()}])


def test_single_run_sweep_matches_run_and_check():
    sc = bcast({"p1": LieConfig()}, seed=4)
    report = sweep(sc, [4], [{"p1": LieConfig()}])
    assert report.runs == 1 and report.ok == check(run(sc), sc).ok


def test_sweep_reports_merge():
    a = sweep(bcast(), range(2), [{}])
    b = sweep(bcast(), range(3), [{"p4": Mute()}])
    merged = a.merge(b)
    assert merged.runs == 5 and merged.ok
