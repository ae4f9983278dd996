"""Per-host engine: parameter scorers, suspicion, classification, confirmations."""

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from botflow.analytics import DegenerateInput
from botflow.config import PARAMETER_NAMES, EngineConfig
from botflow.flow_model import (
    Conversation,
    Endpoint,
    FlowData,
    FlowMetrics,
    HostCapture,
    PacketType,
)
from botflow.standalone import (
    ApiEvent,
    BotSignature,
    Category,
    DdosKind,
    EventCategory,
    IllegalTransition,
    ProcessState,
    WeightsNotNormalized,
    check_transition,
    classify_category,
    confirm_ddos_kind,
    confirm_keylogger,
    confirm_spam,
    process_log_signature,
    read_event_log,
    read_triggers,
    run_standalone,
    score_active_connections,
    score_connection_attempts,
    score_ip_blacklist,
    score_oi_ratio,
    score_ports,
    score_response_time,
    score_traffic_pattern,
    suspicion_value,
    write_event_log,
    write_triggers,
)

HOST = "192.168.2.5"


def capture_of(records, host=HOST, step=5.0):
    return HostCapture(host=host, interval_seconds=step, flow_data_array=tuple(records))


def flow(out=None, inc=None, rt=0.0, icmp=0, ptype=PacketType.UDP):
    return FlowData(
        packet_type=ptype,
        incoming={Endpoint.parse(k): v for k, v in (inc or {}).items()},
        outgoing={Endpoint.parse(k): v for k, v in (out or {}).items()},
        avg_response_time_ms=rt,
        icmp_errors=icmp,
    )


def conv(src, dst, ptype=PacketType.UDP, start=0, end=1000, packets=10, nbytes=600, **kw):
    return Conversation(
        src=Endpoint.parse(src),
        dst=Endpoint.parse(dst),
        packet_type=ptype,
        start_ms=start,
        end_ms=end,
        packets=packets,
        bytes=nbytes,
        **kw,
    )


def metrics_of(sent=0, recv=0, icmp=0, ratio=1.0):
    return FlowMetrics(
        sent_udp=sent,
        recv_udp=recv,
        icmp_error_packets=icmp,
        udp_work_weight=sent * icmp + recv,
        oi_ratio=ratio,
    )


class TestResponseTime:
    def test_irc_scale_response(self):
        cap = capture_of([(flow(rt=221.0),)] * 4)
        assert score_response_time(cap) == 0.558

    def test_instant_response_saturates(self):
        cap = capture_of([(flow(rt=0.0),)])
        assert score_response_time(cap) == 1.0

    def test_human_scale_scores_zero(self):
        cap = capture_of([(flow(rt=5000.0),)])
        assert score_response_time(cap) == 0.0
        cap = capture_of([(flow(rt=2000.0),)])
        assert score_response_time(cap) == 0.0


class TestIpBlacklist:
    def make(self, weights):
        return capture_of([(flow(out=weights),)])

    def test_all_blacklisted(self):
        cap = self.make({"10.0.0.1:80": 500})
        assert score_ip_blacklist(cap, {"10.0.0.1"}, set()) == 1.0

    def test_none_blacklisted(self):
        cap = self.make({"10.0.0.1:80": 500})
        assert score_ip_blacklist(cap, {"10.9.9.9"}, set()) == 0.0

    def test_byte_fraction(self):
        cap = self.make({"10.0.0.1:80": 600, "10.0.0.2:80": 400})
        assert score_ip_blacklist(cap, {"10.0.0.1"}, set()) == 0.6

    def test_whitelist_removed_from_denominator(self):
        cap = self.make({"10.0.0.1:80": 600, "10.0.0.2:80": 400, "10.0.0.3:80": 1000})
        assert score_ip_blacklist(cap, {"10.0.0.1"}, {"10.0.0.3"}) == 0.6

    def test_no_traffic(self):
        cap = self.make({})
        assert score_ip_blacklist(cap, {"10.0.0.1"}, set()) == 0.0


class TestTrafficPattern:
    def test_idle_host(self):
        cap = capture_of([(flow(),)] * 4)
        assert score_traffic_pattern(cap, [], EngineConfig()) == 0.0

    def test_repetition_only(self):
        # 20 identical-tuple conversations, flat byte rates, balanced O/I.
        cfg = EngineConfig()
        convs = [
            conv(HOST + ":1000", "10.0.0.9:9999", start=i * 100, end=i * 100 + 50, packets=2)
            for i in range(20)
        ]
        cap = capture_of(
            [(flow(out={"10.0.0.9:9999": 1000}, inc={"10.0.0.9:9999": 900}),)] * 4
        )
        assert score_traffic_pattern(cap, convs, cfg) == pytest.approx(1 / 3)

    def test_interrupted_run_does_not_fire(self):
        cfg = EngineConfig()
        convs = []
        for i in range(30):
            dst = "10.0.0.9:9999" if i % 10 != 9 else "10.0.0.7:53"
            convs.append(conv(HOST + ":1000", dst, start=i * 100, end=i * 100 + 50))
        cap = capture_of(
            [(flow(out={"10.0.0.9:9999": 1000}, inc={"10.0.0.9:9999": 900}),)] * 4
        )
        assert score_traffic_pattern(cap, convs, cfg) == 0.0

    def test_intermittent_peaks(self):
        cfg = EngineConfig()
        quiet = (flow(out={"10.0.0.9:9999": 1000}, inc={"10.0.0.9:9999": 1000}),)
        loud = (flow(out={"10.0.0.9:9999": 25000}, inc={"10.0.0.9:9999": 25000}),)
        cap = capture_of([quiet, quiet, loud, quiet, quiet])
        assert score_traffic_pattern(cap, [], cfg) == pytest.approx(1 / 3)

    def test_flood_profile_scores_full(self):
        # All three indicators: repetition, peaks, high O/I at flood rate.
        cfg = EngineConfig()
        convs = [
            conv(
                HOST + ":27444",
                "203.0.113.50:9999",
                start=10_000 + i * 200,
                end=10_000 + i * 200 + 150,
                packets=130,
                nbytes=7800,
            )
            for i in range(25)
        ]
        quiet = (flow(out={"203.0.113.50:9999": 500}, inc={"10.0.0.1:53": 400}),)
        loud = (flow(out={"203.0.113.50:9999": 195000}, inc={"10.0.0.1:53": 100}),)
        cap = capture_of([quiet, quiet, loud, quiet])
        assert score_traffic_pattern(cap, convs, cfg) == 1.0


class TestPorts:
    def test_one_of_four_hits_floor(self):
        convs = [conv(HOST + ":1", "10.0.0.9:6667")] + [
            conv(HOST + ":1", f"10.0.0.{i}:80") for i in (2, 3, 4)
        ]
        assert score_ports(convs, {6667}, 0.25) == 0.25

    def test_floor_applies_below_quarter(self):
        convs = [conv(HOST + ":1", "10.0.0.9:6667")] + [
            conv(HOST + ":1", f"10.0.0.{i}:80") for i in range(2, 11)
        ]
        assert score_ports(convs, {6667}, 0.25) == 0.25

    def test_no_bot_ports(self):
        convs = [conv(HOST + ":1", "10.0.0.9:80")]
        assert score_ports(convs, {6667}, 0.25) == 0.0

    def test_all_on_7000(self):
        convs = [conv(HOST + ":1", "10.0.0.9:7000") for _ in range(3)]
        assert score_ports(convs, {6667, 6668, 7000}, 0.25) == 1.0

    def test_source_port_counts(self):
        convs = [conv(HOST + ":6667", "10.0.0.9:1234")]
        assert score_ports(convs, {6667}, 0.25) == 1.0

    def test_no_conversations(self):
        assert score_ports([], {6667}, 0.25) == 0.0


class TestConnectionAttempts:
    def test_work_weight_reference_saturates(self):
        m = metrics_of(sent=2649, recv=561, icmp=1927)
        assert m.udp_work_weight == 5105184
        assert score_connection_attempts([], m, EngineConfig()) == 1.0

    def test_all_zero(self):
        assert score_connection_attempts([], metrics_of(), EngineConfig()) == 0.0

    def test_half_fail_rate(self):
        # 15 failed handshakes over exactly one minute: F_max/2 -> 0.5.
        convs = [
            conv(
                HOST + ":1",
                "10.0.0.9:6667",
                ptype=PacketType.TCP,
                start=i * 4000,
                end=i * 4000 + 100,
                syn_count=1,
                established=0,
            )
            for i in range(15)
        ]
        convs.append(
            conv(HOST + ":1", "10.0.0.9:80", ptype=PacketType.TCP, start=0, end=60_000,
                 syn_count=1, established=1)
        )
        assert score_connection_attempts(convs, metrics_of(), EngineConfig()) == 0.5

    def test_sub_minute_span_floored_to_one_minute(self):
        convs = [
            conv(HOST + ":1", "10.0.0.9:6667", ptype=PacketType.TCP, start=i * 10,
                 end=i * 10 + 5, syn_count=1, established=0)
            for i in range(15)
        ]
        assert score_connection_attempts(convs, metrics_of(), EngineConfig()) == 0.5

    def test_udp_conversations_are_not_fails(self):
        convs = [conv(HOST + ":1", "10.0.0.9:53", ptype=PacketType.UDP)]
        assert score_connection_attempts(convs, metrics_of(), EngineConfig()) == 0.0


class TestActiveConnections:
    def test_no_connections(self):
        assert score_active_connections([], 50) == 0.0

    def test_saturation(self):
        convs = [
            conv(HOST + ":1", f"10.0.{i}.1:80", ptype=PacketType.TCP, start=0, end=10_000)
            for i in range(50)
        ]
        assert score_active_connections(convs, 50) == 1.0

    def test_quarter(self):
        convs = []
        for i in range(25):
            start = 0 if i < 13 else 20_000
            convs.append(
                conv(HOST + ":1", f"10.0.{i}.1:80", ptype=PacketType.TCP, start=start,
                     end=start + 5000)
            )
        assert score_active_connections(convs, 52) == 0.25

    def test_udp_ignored(self):
        convs = [
            conv(HOST + ":1", f"10.0.{i}.1:53", ptype=PacketType.UDP, start=0, end=10_000)
            for i in range(50)
        ]
        assert score_active_connections(convs, 50) == 0.0


class TestOiRatioScore:
    def test_inside_normal_band(self):
        assert score_oi_ratio(metrics_of(ratio=1.0)) == 0.0
        assert score_oi_ratio(metrics_of(ratio=0.2)) == 0.0
        assert score_oi_ratio(metrics_of(ratio=5.0)) == 0.0

    def test_infinite_saturates(self):
        assert score_oi_ratio(metrics_of(ratio=math.inf)) == 1.0

    def test_decade_above_saturates(self):
        assert score_oi_ratio(metrics_of(ratio=50.0)) == 1.0
        assert score_oi_ratio(metrics_of(ratio=500.0)) == 1.0

    def test_decade_below_saturates(self):
        assert score_oi_ratio(metrics_of(ratio=0.02)) == 1.0

    def test_log_linear_halfway(self):
        assert score_oi_ratio(metrics_of(ratio=5.0 * math.sqrt(10))) == pytest.approx(0.5)
        assert score_oi_ratio(metrics_of(ratio=0.2 / math.sqrt(10))) == pytest.approx(0.5)

    def test_no_traffic_gives_no_signal(self):
        assert score_oi_ratio(metrics_of(ratio=0.0)) == 0.0


class TestSuspicionValue:
    def scores_from(self, values):
        return dict(zip(PARAMETER_NAMES, values))

    def test_all_zero(self):
        weights = EngineConfig().weights
        assert suspicion_value(self.scores_from([0] * 7), weights) == 0.0

    def test_equal_weights_mean(self):
        weights = EngineConfig().weights
        scores = self.scores_from([1, 0, 1, 1, 0, 1, 1])
        assert suspicion_value(scores, weights) == pytest.approx(5 / 7)

    def test_concentrated_weights(self):
        weights = {name: 0.0 for name in PARAMETER_NAMES}
        weights["ports"] = 1.0
        scores = self.scores_from([0.1, 0.2, 0.3, 0.77, 0.5, 0.6, 0.7])
        assert suspicion_value(scores, weights) == 0.77

    def test_unnormalized_weights_rejected(self):
        weights = {name: 1.0 for name in PARAMETER_NAMES}
        with pytest.raises(WeightsNotNormalized):
            suspicion_value(self.scores_from([0] * 7), weights)

    @given(
        st.lists(st.floats(0, 1), min_size=7, max_size=7),
        st.integers(0, 6),
        st.floats(0.01, 1),
    )
    def test_raising_a_score_never_lowers_suspicion(self, values, idx, bump):
        weights = EngineConfig().weights
        scores = self.scores_from(values)
        base = suspicion_value(scores, weights)
        raised = dict(scores)
        name = PARAMETER_NAMES[idx]
        raised[name] = min(1.0, raised[name] + bump)
        assert suspicion_value(raised, weights) >= base - 1e-12
        assert 0.0 <= base <= 1.0


class TestClassify:
    def scores(self, traffic_pattern=0.0):
        base = {name: 0.5 for name in PARAMETER_NAMES}
        base["traffic_pattern"] = traffic_pattern
        return base

    def test_high_oi_flood_pattern_is_ddos(self):
        cat = classify_category(
            self.scores(traffic_pattern=1.0), metrics_of(ratio=80.0), [], [], EngineConfig()
        )
        assert cat is Category.DDOS

    def test_high_oi_port25_dominant_is_spam(self):
        convs = [
            conv(HOST + ":1", "10.0.0.9:25", ptype=PacketType.TCP),
            conv(HOST + ":1", "10.0.0.8:25", ptype=PacketType.TCP),
            conv(HOST + ":1", "10.0.0.7:80", ptype=PacketType.TCP),
        ]
        cat = classify_category(
            self.scores(), metrics_of(ratio=80.0), [], convs, EngineConfig()
        )
        assert cat is Category.SPAM

    def test_ddos_wins_over_spam(self):
        convs = [conv(HOST + ":1", "10.0.0.9:25", ptype=PacketType.TCP)]
        cat = classify_category(
            self.scores(traffic_pattern=1.0), metrics_of(ratio=80.0), convs, convs,
            EngineConfig()
        )
        assert cat is Category.DDOS

    def test_low_oi_keyboard_events_is_keylogging(self):
        events = [ApiEvent(0, EventCategory.KEYBOARD_STATE, "GetAsyncKeyState")]
        cat = classify_category(self.scores(), metrics_of(ratio=0.01), events, [], EngineConfig())
        assert cat is Category.KEYLOGGING

    def test_no_rule_falls_back_to_ddos(self):
        cat = classify_category(self.scores(), metrics_of(ratio=1.0), [], [], EngineConfig())
        assert cat is Category.DDOS


def lockstep_events(bursts=(3, 1, 4, 2, 5), window_ms=1000):
    events = []
    for w, count in enumerate(bursts):
        for k in range(count):
            ts = w * window_ms + k * 20
            events.append(ApiEvent(ts, EventCategory.KEYBOARD_STATE, "GetAsyncKeyState"))
            events.append(ApiEvent(ts + 2, EventCategory.FILE_ACCESS, "WriteFile"))
            events.append(ApiEvent(ts + 5, EventCategory.COMMUNICATION, "send"))
    return events


class TestConfirmKeylogger:
    def test_lockstep_confirmed_with_perfect_rho(self):
        finding = confirm_keylogger(lockstep_events(), window_ms=1000)
        assert finding.confirmed
        assert finding.keyboard_file.rho == 1.0
        assert finding.keyboard_comm.rho == 1.0

    def test_independent_logs_not_confirmed(self):
        rng = random.Random(42)
        events = []
        for w in range(40):
            for _ in range(rng.randrange(0, 6)):
                events.append(ApiEvent(w * 1000 + rng.randrange(990), EventCategory.KEYBOARD_STATE, "k"))
            for _ in range(rng.randrange(0, 6)):
                events.append(ApiEvent(w * 1000 + rng.randrange(990), EventCategory.FILE_ACCESS, "f"))
            for _ in range(rng.randrange(0, 6)):
                events.append(ApiEvent(w * 1000 + rng.randrange(990), EventCategory.COMMUNICATION, "c"))
        events.sort(key=lambda e: e.timestamp_ms)
        finding = confirm_keylogger(events, window_ms=1000)
        assert not finding.confirmed

    def test_constant_series_degenerate(self):
        events = []
        for w in range(8):
            events.append(ApiEvent(w * 1000, EventCategory.KEYBOARD_STATE, "k"))
        with pytest.raises(DegenerateInput):
            confirm_keylogger(events, window_ms=1000)

    def test_short_log_degenerate(self):
        with pytest.raises(DegenerateInput):
            confirm_keylogger(lockstep_events(bursts=(2, 3)), window_ms=1000)

    @given(st.permutations([1, 2, 3, 4, 5, 6]))
    def test_invariant_under_monotone_count_rescaling(self, counts):
        base = confirm_keylogger(lockstep_events(bursts=counts), window_ms=1000)
        scaled = confirm_keylogger(
            lockstep_events(bursts=[c * 7 for c in counts]), window_ms=1000
        )
        assert base.confirmed == scaled.confirmed
        assert base.keyboard_file.rho == pytest.approx(scaled.keyboard_file.rho)


class TestConfirmDdosKind:
    def test_ping_of_death(self):
        convs = [conv(HOST + ":0", "10.0.0.9:0", ptype=PacketType.ICMP, packets=1, nbytes=70000)]
        cap = capture_of([(flow(),)])
        assert confirm_ddos_kind(convs, cap, EngineConfig()) is DdosKind.PING_OF_DEATH

    def test_syn_flood(self):
        convs = [
            conv(HOST + ":1", "10.0.0.9:80", ptype=PacketType.TCP, packets=1000,
                 nbytes=40000, syn_count=1000, established=5)
        ]
        cap = capture_of([(flow(),)])
        assert confirm_ddos_kind(convs, cap, EngineConfig()) is DdosKind.SYN_FLOOD

    def test_smurf_broadcast_ping(self):
        convs = [conv(HOST + ":0", "10.0.0.255:0", ptype=PacketType.ICMP, packets=40, nbytes=2000)]
        cap = capture_of([(flow(),)])
        assert confirm_ddos_kind(convs, cap, EngineConfig()) is DdosKind.SMURF

    def test_generic_flood_by_packet_rate(self):
        convs = [
            conv(HOST + ":27444", "203.0.113.50:9999", start=0, end=5000, packets=3000,
                 nbytes=180000)
        ]
        cap = capture_of([(flow(),)])
        assert confirm_ddos_kind(convs, cap, EngineConfig()) is DdosKind.GENERIC_FLOOD

    def test_unknown(self):
        convs = [conv(HOST + ":1", "10.0.0.9:80", ptype=PacketType.TCP, syn_count=1, established=1)]
        cap = capture_of([(flow(),)])
        assert confirm_ddos_kind(convs, cap, EngineConfig()) is DdosKind.UNKNOWN


class TestConfirmSpam:
    def test_identical_messages(self):
        messages = [{"buy", "now", "cheap"} for _ in range(10)]
        assert confirm_spam(messages, set()).confirmed

    def test_marker_hits(self):
        messages = [{"hello", "viagra"}, {"winner", "announcement"}, {"claim", "lottery"}]
        markers = {"viagra", "winner", "lottery"}
        assert confirm_spam(messages, markers).confirmed

    def test_distinct_marker_free_not_confirmed(self):
        rng = random.Random(7)
        vocabulary = [f"w{i}" for i in range(400)]
        messages = [set(rng.sample(vocabulary, 6)) for _ in range(12)]
        finding = confirm_spam(messages, {"viagra"})
        assert not finding.confirmed
        assert finding.mean_consecutive_jaccard < 0.7

    def test_single_message_not_confirmed(self):
        assert not confirm_spam([{"viagra"}], {"viagra"}).confirmed


class TestProcessLogSignature:
    def test_empty_log(self):
        profile, matched = process_log_signature([])
        assert all(v == 0.0 for v in profile.vector())
        assert matched is None

    def test_matches_own_signature(self):
        events = lockstep_events()
        profile, _ = process_log_signature(events)
        sig = BotSignature(category=Category.KEYLOGGING, api_profile=profile.vector(), version=1)
        _, matched = process_log_signature(events, signatures=(sig,))
        assert matched is sig

    def test_orthogonal_profile_no_match(self):
        only_files = [ApiEvent(i * 10, EventCategory.FILE_ACCESS, "ReadFile") for i in range(30)]
        only_keys = [ApiEvent(i * 10, EventCategory.KEYBOARD_STATE, "GetKeyState") for i in range(30)]
        profile, _ = process_log_signature(only_keys)
        sig = BotSignature(category=Category.KEYLOGGING, api_profile=profile.vector(), version=1)
        _, matched = process_log_signature(only_files, signatures=(sig,))
        assert matched is None


class TestStateMachine:
    LEGAL = {
        (ProcessState.INITIAL, ProcessState.EXECUTING),
        (ProcessState.EXECUTING, ProcessState.SUSPECT),
        (ProcessState.EXECUTING, ProcessState.TERMINATED),
        (ProcessState.SUSPECT, ProcessState.TERMINATED),
    }

    @given(st.lists(st.sampled_from(list(ProcessState)), min_size=1, max_size=6))
    def test_no_illegal_transition_accepted(self, states):
        current = ProcessState.INITIAL
        for nxt in states:
            if (current, nxt) in self.LEGAL:
                check_transition(current, nxt)
                current = nxt
            else:
                with pytest.raises(IllegalTransition):
                    check_transition(current, nxt)


def flood_fixture():
    """Small hand-built corpus: one loud flood host, one quiet host."""
    step_ms = 5000
    loud = "192.168.2.5"
    quiet = "192.168.2.6"
    convs = []
    records_loud = []
    for i in range(6):
        base = i * step_ms
        n = 2800 if i == 3 else 100
        convs.append(
            conv(loud + ":27444", "203.0.113.50:9999", start=base, end=base + step_ms,
                 packets=n, nbytes=n * 60)
        )
        records_loud.append(
            (flow(out={"203.0.113.50:9999": n * 60}, inc={"203.0.113.50:9999": 40},
                  rt=30.0, icmp=50 if i == 3 else 0),)
        )
    for i in range(25):
        convs.append(
            conv(loud + ":27444", "203.0.113.50:9999", start=3 * step_ms + i * 100,
                 end=3 * step_ms + i * 100 + 80, packets=4, nbytes=240)
        )
    records_quiet = [
        (flow(out={"198.51.100.7:80": 2000}, inc={"198.51.100.7:80": 2400}, rt=2400.0,
              ptype=PacketType.TCP),)
        for _ in range(6)
    ]
    convs.append(
        conv(quiet + ":40000", "198.51.100.7:80", ptype=PacketType.TCP, start=0,
             end=6 * step_ms, packets=60, nbytes=2000, syn_count=1, established=1,
             response_time_ms=2400.0)
    )
    captures = [
        capture_of(records_loud, host=loud),
        capture_of(records_quiet, host=quiet),
    ]
    return captures, convs


class TestRunStandalone:
    def test_flood_host_flagged_quiet_host_not(self):
        captures, convs = flood_fixture()
        reports, triggers = run_standalone(captures, convs, {}, EngineConfig())
        by_host = {r.host: r for r in reports}
        assert by_host["192.168.2.5"].state is ProcessState.SUSPECT
        assert by_host["192.168.2.5"].category is Category.DDOS
        assert by_host["192.168.2.6"].state is ProcessState.EXECUTING
        assert by_host["192.168.2.6"].category is Category.NONE
        assert [t.originator_ip for t in triggers] == ["192.168.2.5"]
        trig = triggers[0]
        assert trig.category is Category.DDOS
        assert 9999 in trig.outbound_ports
        assert "203.0.113.50" in trig.peer_ips

    def test_threshold_boundary_emits_trigger(self):
        # rt 250 ms gives a float-exact 0.5 score; threshold 0.5 must trigger.
        captures = [capture_of([(flow(rt=250.0),)] * 3)]
        weights = {name: 0.0 for name in PARAMETER_NAMES}
        weights["response_time"] = 1.0
        cfg = EngineConfig(weights=weights, suspicion_threshold=0.5)
        reports, triggers = run_standalone(captures, [], {}, cfg)
        assert reports[0].suspicion_value == 0.5
        assert reports[0].state is ProcessState.SUSPECT
        assert len(triggers) == 1

    def test_event_log_process_ids_carried(self):
        captures, convs = flood_fixture()
        logs = {("192.168.2.5", "p77"): tuple(lockstep_events())}
        reports, triggers = run_standalone(captures, convs, logs, EngineConfig())
        ids = {r.process_id for r in reports if r.host == "192.168.2.5"}
        assert ids == {"p77"}

    def test_deterministic(self):
        captures, convs = flood_fixture()
        a = run_standalone(captures, convs, {}, EngineConfig())
        b = run_standalone(captures, convs, {}, EngineConfig())
        assert a == b


class TestEventLogIo:
    def test_round_trip(self, tmp_path):
        entries = [
            ("p1", HOST, ApiEvent(100, EventCategory.KEYBOARD_STATE, "GetAsyncKeyState")),
            ("p1", HOST, ApiEvent(105, EventCategory.FILE_ACCESS, "WriteFile")),
            ("p2", "192.168.2.6", ApiEvent(50, EventCategory.COMMUNICATION, "send")),
        ]
        path = tmp_path / "events.jsonl"
        write_event_log(entries, path)
        logs = read_event_log(path)
        assert logs[(HOST, "p1")] == (entries[0][2], entries[1][2])
        assert logs[("192.168.2.6", "p2")] == (entries[2][2],)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "events.jsonl"
        path.write_text(
            '{"pid": "p1", "host": "192.168.2.5", "ts_ms": 1, "category": "OTHER", '
            '"name": "x", "extra": 1}\n'
        )
        with pytest.raises(Exception):
            read_event_log(path)


class TestTriggerIo:
    def test_round_trip(self, tmp_path):
        captures, convs = flood_fixture()
        _, triggers = run_standalone(captures, convs, {}, EngineConfig())
        path = tmp_path / "triggers.jsonl"
        write_triggers(triggers, path)
        assert read_triggers(path) == tuple(triggers)
