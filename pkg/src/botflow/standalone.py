"""Per-host detection engine.

Scores seven traffic parameters for each host's processes, combines them into
a weighted suspicion value, classifies flagged processes into an attack
category, runs category-specific confirmation analyses, and emits trigger
events for the network-wide engine.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .analytics import DegenerateInput, SpearmanResult, spearman_rho, token_jaccard
from .config import PARAMETER_NAMES, EngineConfig
from .flow_model import (
    Conversation,
    FlowMetrics,
    HostCapture,
    MalformedRecord,
    PacketType,
    _iter_jsonl,
    _require_keys,
    oi_ratio,
    outgoing_packet_bins,
    udp_work_weight,
)

_TCP_FAMILY = (PacketType.TCP, PacketType.IRC, PacketType.HTTP)


class WeightsNotNormalized(ValueError):
    """Parameter weights must sum to 1."""


class IllegalTransition(ValueError):
    """Process state change outside the allowed lifecycle."""


class ProcessState(Enum):
    INITIAL = "INITIAL"
    EXECUTING = "EXECUTING"
    SUSPECT = "SUSPECT"
    TERMINATED = "TERMINATED"


_LEGAL_TRANSITIONS = {
    (ProcessState.INITIAL, ProcessState.EXECUTING),
    (ProcessState.EXECUTING, ProcessState.SUSPECT),
    (ProcessState.EXECUTING, ProcessState.TERMINATED),
    (ProcessState.SUSPECT, ProcessState.TERMINATED),
}


def check_transition(current: ProcessState, new: ProcessState) -> None:
    if (current, new) not in _LEGAL_TRANSITIONS:
        raise IllegalTransition(f"{current.value} -> {new.value}")


class EventCategory(Enum):
    COMMUNICATION = "COMMUNICATION"
    FILE_ACCESS = "FILE_ACCESS"
    KEYBOARD_STATE = "KEYBOARD_STATE"
    OTHER = "OTHER"


class Category(Enum):
    KEYLOGGING = "KEYLOGGING"
    DDOS = "DDOS"
    SPAM = "SPAM"
    NONE = "NONE"


class DdosKind(Enum):
    PING_OF_DEATH = "PING_OF_DEATH"
    SYN_FLOOD = "SYN_FLOOD"
    GENERIC_FLOOD = "GENERIC_FLOOD"
    SMURF = "SMURF"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class ApiEvent:
    timestamp_ms: int
    category: EventCategory
    name: str


@dataclass(frozen=True)
class SuspicionReport:
    process_id: str
    host: str
    state: ProcessState
    parameter_scores: dict[str, float]
    weights: dict[str, float]
    suspicion_value: float
    category: Category
    confirmed: bool | None
    ddos_kind: DdosKind | None
    udp_work_weight: int
    oi_ratio: float

    def quarantined(self) -> bool:
        return self.state is ProcessState.SUSPECT


@dataclass(frozen=True)
class TriggerEvent:
    originator_ip: str
    process_id: str
    inbound_ports: tuple[int, ...]
    outbound_ports: tuple[int, ...]
    peer_ips: tuple[str, ...]
    category: Category
    suspicion_value: float
    api_profile: tuple[float, ...] | None = None


@dataclass(frozen=True)
class BotSignature:
    category: Category
    api_profile: tuple[float, ...] | None = None
    traffic_profile: tuple[float, ...] | None = None
    version: int = 1


@dataclass(frozen=True)
class ApiProfile:
    """Invocation-frequency histogram plus category-bigram transition profile."""

    histogram: tuple[float, ...]
    bigrams: tuple[float, ...]

    def vector(self) -> tuple[float, ...]:
        return self.histogram + self.bigrams


@dataclass(frozen=True)
class KeyloggerFinding:
    confirmed: bool
    keyboard_file: SpearmanResult
    keyboard_comm: SpearmanResult


@dataclass(frozen=True)
class SpamFinding:
    confirmed: bool
    marker_fraction: float
    mean_consecutive_jaccard: float


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


def score_response_time(capture: HostCapture, tau_ms: float = 500.0) -> float:
    """clamp(1 - mean_rt / tau): instant responders score 1, humans score 0."""
    mean_rt = capture.mean_response_time_ms()
    if capture.interval_count() == 0:
        return 0.0
    return _clamp(1.0 - mean_rt / tau_ms)


def score_ip_blacklist(
    capture: HostCapture, blacklist: Iterable[str], whitelist: Iterable[str]
) -> float:
    """Fraction of traffic bytes exchanged with blacklisted peers.

    Whitelisted peers drop out of the denominator entirely.
    """
    blacklist, whitelist = set(blacklist), set(whitelist)
    total = 0
    hit = 0
    for group in capture.flow_data_array:
        for fd in group:
            for weights in (fd.incoming, fd.outgoing):
                for endpoint, byte_count in weights.items():
                    if endpoint.ip_address in whitelist:
                        continue
                    total += byte_count
                    if endpoint.ip_address in blacklist:
                        hit += byte_count
    return hit / total if total else 0.0


def _max_run_of_identical_targets(conversations: Sequence[Conversation], host: str) -> int:
    own = sorted(
        (c for c in conversations if c.src.ip_address == host),
        key=lambda c: (c.start_ms, c.end_ms, c.dst.ip_address, c.dst.port),
    )
    best = run = 0
    previous = None
    for c in own:
        key = (c.dst.ip_address, c.dst.port, c.packet_type)
        run = run + 1 if key == previous else 1
        previous = key
        best = max(best, run)
    return best


def _peak_outgoing_pps(
    conversations: Sequence[Conversation], host: str, step_seconds: float
) -> float:
    bins = outgoing_packet_bins(conversations, host, step_seconds)
    return max(bins) / step_seconds if bins else 0.0


def score_traffic_pattern(
    capture: HostCapture, conversations: Sequence[Conversation], config: EngineConfig
) -> float:
    """Mean of three binary indicators of bot-like sending behavior.

    (a) a run of >= n_rep conversations to one (ip, port, protocol) target,
    (b) intermittent byte-rate peaks >= p_peak times the median rate,
    (c) high O/I ratio combined with flood-scale peak packet rate.
    """
    repeated = _max_run_of_identical_targets(conversations, capture.host) >= config.n_rep

    n = capture.interval_count()
    rates = [capture.outgoing_bytes(i) / capture.interval_seconds for i in range(n)]
    positive = [r for r in rates if r > 0]
    peaks = False
    if positive:
        base = statistics.median(rates)
        if base == 0:
            base = min(positive)
        peaks = max(rates) >= config.p_peak * base

    ratio = oi_ratio(capture, range(n)) if n else 0.0
    flood = (
        ratio > config.r_hi
        and _peak_outgoing_pps(conversations, capture.host, capture.interval_seconds)
        >= config.r_flood_pps
    )
    return (int(repeated) + int(peaks) + int(flood)) / 3.0


def score_ports(
    conversations: Sequence[Conversation], bot_ports: Iterable[int], floor: float = 0.25
) -> float:
    """Fraction of conversations touching a bot port, floored when any do."""
    bot_ports = set(bot_ports)
    if not conversations:
        return 0.0
    hits = sum(1 for c in conversations if c.src.port in bot_ports or c.dst.port in bot_ports)
    if hits == 0:
        return 0.0
    return max(hits / len(conversations), floor)


def score_connection_attempts(
    conversations: Sequence[Conversation], metrics: FlowMetrics, config: EngineConfig
) -> float:
    """Max of normalized failed-handshake rate and log-scaled UDP work weight."""
    fails = sum(
        1
        for c in conversations
        if c.packet_type in _TCP_FAMILY and c.syn_count >= 1 and c.established == 0
    )
    fail_score = 0.0
    if conversations:
        span_ms = max(c.end_ms for c in conversations) - min(c.start_ms for c in conversations)
        span_minutes = max(span_ms / 60_000.0, 1.0)
        fail_score = _clamp(fails / span_minutes / config.f_max_fails_per_min)
    weight_score = _clamp(
        math.log10(metrics.udp_work_weight + 1) / math.log10(config.w_ref + 1)
    )
    return max(fail_score, weight_score)


def score_active_connections(conversations: Sequence[Conversation], a_max: int = 50) -> float:
    """Peak number of simultaneously open TCP-family conversations, over a_max."""
    spans = [
        (c.start_ms, c.end_ms) for c in conversations if c.packet_type in _TCP_FAMILY
    ]
    if not spans:
        return 0.0
    events = sorted(
        [(start, 1) for start, _ in spans] + [(end, -1) for _, end in spans],
        key=lambda e: (e[0], -e[1]),
    )
    active = peak = 0
    for _, delta in events:
        active += delta
        peak = max(peak, active)
    return _clamp(peak / a_max)


def score_oi_ratio(metrics: FlowMetrics, r_lo: float = 0.2, r_hi: float = 5.0) -> float:
    """Log-scale distance of the O/I ratio from the normal band [r_lo, r_hi].

    A host with no outgoing traffic at all (ratio 0) gives no reading.
    """
    ratio = metrics.oi_ratio
    if math.isinf(ratio):
        return 1.0
    if ratio == 0.0:
        return 0.0
    if r_lo <= ratio <= r_hi:
        return 0.0
    if ratio > r_hi:
        return _clamp(math.log10(ratio / r_hi))
    return _clamp(math.log10(r_lo / ratio))


def suspicion_value(scores: Mapping[str, float], weights: Mapping[str, float]) -> float:
    """Weighted average of the per-parameter scores."""
    if set(scores) != set(weights):
        raise ValueError("scores and weights must cover the same parameters")
    if any(not 0.0 <= s <= 1.0 for s in scores.values()):
        raise ValueError("parameter scores must lie in [0, 1]")
    if abs(sum(weights.values()) - 1.0) > 1e-9:
        raise WeightsNotNormalized(f"weights sum to {sum(weights.values())}")
    return sum(weights[name] * scores[name] for name in scores)


def classify_category(
    scores: Mapping[str, float],
    metrics: FlowMetrics,
    event_log: Sequence[ApiEvent],
    conversations: Sequence[Conversation] = (),
    config: EngineConfig = EngineConfig(),
) -> Category:
    """Attack category for an above-threshold process; ties break DDOS > SPAM > KEYLOGGING.

    conversations must be the process's outbound exchanges only; the port-25
    dominance test is meaningless with inbound traffic mixed in. A flagged
    process matching no rule falls back to DDOS, the generic network-abuse
    bucket, so flagged always implies a concrete category.
    """
    ratio = metrics.oi_ratio
    oi_high = math.isinf(ratio) or ratio > config.r_hi
    oi_low = ratio < config.r_lo

    if oi_high and scores.get("traffic_pattern", 0.0) >= 2 / 3:
        return Category.DDOS
    if oi_high:
        to_25 = [c for c in conversations if c.dst.port == 25]
        if to_25 and len(to_25) >= len(conversations) / 2:
            return Category.SPAM
    if oi_low and any(e.category is EventCategory.KEYBOARD_STATE for e in event_log):
        return Category.KEYLOGGING
    return Category.DDOS


def confirm_keylogger(
    event_log: Sequence[ApiEvent],
    window_ms: int = 1000,
    rho_min: float = 0.8,
    min_windows: int = 5,
) -> KeyloggerFinding:
    """Rank-correlate per-window counts of keyboard, file, and comm events.

    Confirmed when both keyboard<->file and keyboard<->communication
    correlations reach rho_min. Logs spanning fewer than min_windows windows,
    or with constant per-window counts, raise DegenerateInput.
    """
    if not event_log:
        raise DegenerateInput("empty event log")
    t0 = min(e.timestamp_ms for e in event_log)
    t1 = max(e.timestamp_ms for e in event_log)
    n_windows = int((t1 - t0) // window_ms) + 1
    if n_windows < min_windows:
        raise DegenerateInput(f"log spans {n_windows} windows; need {min_windows}")
    counts = {
        cat: [0] * n_windows
        for cat in (EventCategory.KEYBOARD_STATE, EventCategory.FILE_ACCESS, EventCategory.COMMUNICATION)
    }
    for event in event_log:
        if event.category in counts:
            counts[event.category][int((event.timestamp_ms - t0) // window_ms)] += 1
    keyboard = counts[EventCategory.KEYBOARD_STATE]
    keyboard_file = spearman_rho(keyboard, counts[EventCategory.FILE_ACCESS])
    keyboard_comm = spearman_rho(keyboard, counts[EventCategory.COMMUNICATION])
    return KeyloggerFinding(
        confirmed=min(keyboard_file.rho, keyboard_comm.rho) >= rho_min,
        keyboard_file=keyboard_file,
        keyboard_comm=keyboard_comm,
    )


def confirm_ddos_kind(
    conversations: Sequence[Conversation], capture: HostCapture, config: EngineConfig
) -> DdosKind:
    """Narrow a DDOS finding; checks are ordered most to least specific."""
    icmp = [c for c in conversations if c.packet_type is PacketType.ICMP]
    if any(c.packets > 0 and c.bytes / c.packets > config.ping_of_death_bpp for c in icmp):
        return DdosKind.PING_OF_DEATH
    syn_total = sum(c.syn_count for c in conversations)
    est_total = sum(c.established for c in conversations)
    if syn_total >= config.syn_min and est_total / syn_total < 0.1:
        return DdosKind.SYN_FLOOD
    if any(c.dst.ip_address.endswith(".255") for c in icmp):
        return DdosKind.SMURF
    if _peak_outgoing_pps(conversations, capture.host, capture.interval_seconds) > config.r_flood_pps:
        return DdosKind.GENERIC_FLOOD
    return DdosKind.UNKNOWN


def confirm_spam(
    messages: Sequence[set[str]], markers: Iterable[str]
) -> SpamFinding:
    """Marker scan plus consecutive-message similarity; needs >= 2 messages."""
    markers = set(markers)
    if len(messages) < 2:
        return SpamFinding(confirmed=False, marker_fraction=0.0, mean_consecutive_jaccard=0.0)
    marker_fraction = sum(1 for m in messages if set(m) & markers) / len(messages)
    similarities = [
        token_jaccard(messages[i], messages[i + 1]) for i in range(len(messages) - 1)
    ]
    mean_jaccard = sum(similarities) / len(similarities)
    return SpamFinding(
        confirmed=marker_fraction >= 0.5 or mean_jaccard >= 0.7,
        marker_fraction=marker_fraction,
        mean_consecutive_jaccard=mean_jaccard,
    )


_CATEGORY_ORDER = (
    EventCategory.COMMUNICATION,
    EventCategory.FILE_ACCESS,
    EventCategory.KEYBOARD_STATE,
    EventCategory.OTHER,
)


def _cosine(a: Sequence[float], b: Sequence[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def process_log_signature(
    event_log: Sequence[ApiEvent],
    signatures: Sequence[BotSignature] = (),
    min_cosine: float = 0.9,
) -> tuple[ApiProfile, BotSignature | None]:
    """Behavioral profile of an API event log, matched against stored signatures.

    The profile concatenates the 4-bin category histogram with the 16-bin
    category-transition (bigram) frequencies. An empty log yields the zero
    profile, which matches nothing.
    """
    index = {cat: i for i, cat in enumerate(_CATEGORY_ORDER)}
    histogram = [0.0] * 4
    for event in event_log:
        histogram[index[event.category]] += 1.0
    total = sum(histogram)
    if total:
        histogram = [v / total for v in histogram]

    bigrams = [0.0] * 16
    for prev, cur in zip(event_log, event_log[1:]):
        bigrams[index[prev.category] * 4 + index[cur.category]] += 1.0
    transitions = sum(bigrams)
    if transitions:
        bigrams = [v / transitions for v in bigrams]

    profile = ApiProfile(histogram=tuple(histogram), bigrams=tuple(bigrams))
    best: BotSignature | None = None
    best_cos = min_cosine
    for sig in signatures:
        if sig.api_profile is None:
            continue
        cos = _cosine(profile.vector(), sig.api_profile)
        if cos > best_cos or (best is None and cos >= min_cosine):
            best, best_cos = sig, cos
    return profile, best


def _udp_packets_per_interval(
    conversations: Sequence[Conversation], host: str, capture: HostCapture
) -> tuple[list[int], list[int]]:
    """Allocate UDP conversation packets onto the capture's interval grid."""
    n = capture.interval_count()
    step_ms = capture.interval_seconds * 1000.0
    sent = [0.0] * n
    recv = [0.0] * n
    for c in conversations:
        if c.packet_type is not PacketType.UDP:
            continue
        if c.src.ip_address == host:
            target = sent
        elif c.dst.ip_address == host:
            target = recv
        else:
            continue
        duration = c.end_ms - c.start_ms
        if duration == 0:
            idx = int(c.start_ms // step_ms)
            if 0 <= idx < n:
                target[idx] += c.packets
            continue
        for i in range(n):
            lo = max(c.start_ms, i * step_ms)
            hi = min(c.end_ms, (i + 1) * step_ms)
            if hi > lo:
                target[i] += c.packets * (hi - lo) / duration
    return [round(v) for v in sent], [round(v) for v in recv]


def host_flow_metrics(
    capture: HostCapture, conversations: Sequence[Conversation]
) -> FlowMetrics:
    """Per-host flow metrics from the peak-work-weight interval.

    SENT/RECV/ICMP errors are evaluated per capture interval and the interval
    with the largest work weight is reported; the O/I ratio spans the whole
    capture.
    """
    n = capture.interval_count()
    ratio = oi_ratio(capture, range(n)) if n else 0.0
    sent, recv = _udp_packets_per_interval(conversations, capture.host, capture)
    best = (0, 0, 0, 0)
    for i in range(n):
        icmp = capture.icmp_errors(i)
        ww = udp_work_weight(sent[i], recv[i], icmp)
        if ww > best[0]:
            best = (ww, sent[i], recv[i], icmp)
    return FlowMetrics(
        sent_udp=best[1],
        recv_udp=best[2],
        icmp_error_packets=best[3],
        udp_work_weight=best[0],
        oi_ratio=ratio,
    )


def run_standalone(
    captures: Sequence[HostCapture],
    conversations: Sequence[Conversation],
    event_logs: Mapping[tuple[str, str], Sequence[ApiEvent]],
    config: EngineConfig,
) -> tuple[tuple[SuspicionReport, ...], tuple[TriggerEvent, ...]]:
    """Score every host's processes and emit triggers for SUSPECT ones.

    Traffic is attributed per host; hosts without an event log get a single
    placeholder process "net0". The threshold comparison is >=, so a value
    exactly at the threshold triggers.
    """
    reports: list[SuspicionReport] = []
    triggers: list[TriggerEvent] = []
    logs_by_host: dict[str, list[tuple[str, Sequence[ApiEvent]]]] = {}
    for (host, pid), events in sorted(event_logs.items()):
        logs_by_host.setdefault(host, []).append((pid, events))

    for capture in sorted(captures, key=lambda c: c.host):
        host = capture.host
        host_convs = [
            c for c in conversations if host in (c.src.ip_address, c.dst.ip_address)
        ]
        metrics = host_flow_metrics(capture, host_convs)
        scores = {
            "response_time": score_response_time(capture, config.tau_ms),
            "ip_blacklist": score_ip_blacklist(capture, config.blacklist, config.whitelist),
            "traffic_pattern": score_traffic_pattern(capture, host_convs, config),
            "ports": score_ports(host_convs, config.bot_ports, config.port_score_floor),
            "connection_attempts": score_connection_attempts(host_convs, metrics, config),
            "active_connections": score_active_connections(host_convs, config.a_max_peers),
            "oi_ratio": score_oi_ratio(metrics, config.r_lo, config.r_hi),
        }
        value = suspicion_value(scores, config.weights)
        flagged = value >= config.suspicion_threshold

        for pid, events in logs_by_host.get(host, [("net0", ())]):
            state = ProcessState.EXECUTING
            category = Category.NONE
            confirmed: bool | None = None
            ddos_kind: DdosKind | None = None
            api_profile: tuple[float, ...] | None = None
            if flagged:
                check_transition(state, ProcessState.SUSPECT)
                state = ProcessState.SUSPECT
                outbound = [c for c in host_convs if c.src.ip_address == host]
                category = classify_category(scores, metrics, events, outbound, config)
                if category is Category.KEYLOGGING:
                    try:
                        finding = confirm_keylogger(
                            events,
                            config.keylogger_window_ms,
                            config.keylogger_rho_min,
                            config.keylogger_min_windows,
                        )
                        confirmed = finding.confirmed
                    except DegenerateInput:
                        confirmed = False
                elif category is Category.DDOS:
                    ddos_kind = confirm_ddos_kind(host_convs, capture, config)
                    confirmed = ddos_kind is not DdosKind.UNKNOWN
                elif category is Category.SPAM:
                    messages = [
                        set(c.payload_keywords)
                        for c in host_convs
                        if c.src.ip_address == host and c.dst.port == 25
                    ]
                    confirmed = confirm_spam(messages, config.spam_markers).confirmed
                if confirmed and events:
                    profile, _ = process_log_signature(events)
                    api_profile = profile.vector()

            reports.append(
                SuspicionReport(
                    process_id=pid,
                    host=host,
                    state=state,
                    parameter_scores=scores,
                    weights=dict(config.weights),
                    suspicion_value=value,
                    category=category,
                    confirmed=confirmed,
                    ddos_kind=ddos_kind,
                    udp_work_weight=metrics.udp_work_weight,
                    oi_ratio=metrics.oi_ratio,
                )
            )
            if flagged:
                triggers.append(
                    TriggerEvent(
                        originator_ip=host,
                        process_id=pid,
                        inbound_ports=tuple(
                            sorted({c.dst.port for c in host_convs if c.dst.ip_address == host})
                        ),
                        outbound_ports=tuple(
                            sorted({c.dst.port for c in host_convs if c.src.ip_address == host})
                        ),
                        peer_ips=tuple(
                            sorted(
                                (
                                    {c.src.ip_address for c in host_convs}
                                    | {c.dst.ip_address for c in host_convs}
                                )
                                - {host}
                            )
                        ),
                        category=category,
                        suspicion_value=value,
                        api_profile=api_profile,
                    )
                )
    return tuple(reports), tuple(triggers)


_EVENT_KEYS = {"pid", "host", "ts_ms", "category", "name"}
_TRIGGER_REQUIRED = {
    "originator_ip",
    "process_id",
    "inbound_ports",
    "outbound_ports",
    "peer_ips",
    "category",
    "suspicion_value",
}


def read_event_log(path) -> dict[tuple[str, str], tuple[ApiEvent, ...]]:
    """Load a process event-log JSONL file, grouped by (host, pid)."""
    grouped: dict[tuple[str, str], list[ApiEvent]] = {}
    for line_no, obj in _iter_jsonl(path):
        _require_keys(obj, _EVENT_KEYS, set(), line_no)
        try:
            event = ApiEvent(
                timestamp_ms=int(obj["ts_ms"]),
                category=EventCategory(obj["category"]),
                name=str(obj["name"]),
            )
        except (ValueError, TypeError) as err:
            raise MalformedRecord(line_no, str(err)) from err
        grouped.setdefault((str(obj["host"]), str(obj["pid"])), []).append(event)
    return {
        key: tuple(sorted(events, key=lambda e: e.timestamp_ms))
        for key, events in grouped.items()
    }


def write_event_log(entries: Sequence[tuple[str, str, ApiEvent]], path) -> None:
    """Write (pid, host, event) rows as the event-log JSONL format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pid, host, event in entries:
            rec = {
                "pid": pid,
                "host": host,
                "ts_ms": event.timestamp_ms,
                "category": event.category.value,
                "name": event.name,
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def write_triggers(triggers: Sequence[TriggerEvent], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in triggers:
            rec = {
                "originator_ip": t.originator_ip,
                "process_id": t.process_id,
                "inbound_ports": list(t.inbound_ports),
                "outbound_ports": list(t.outbound_ports),
                "peer_ips": list(t.peer_ips),
                "category": t.category.value,
                "suspicion_value": t.suspicion_value,
            }
            if t.api_profile is not None:
                rec["api_profile"] = list(t.api_profile)
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_triggers(path) -> tuple[TriggerEvent, ...]:
    triggers = []
    for line_no, obj in _iter_jsonl(path):
        _require_keys(obj, _TRIGGER_REQUIRED, {"api_profile"}, line_no)
        try:
            triggers.append(
                TriggerEvent(
                    originator_ip=str(obj["originator_ip"]),
                    process_id=str(obj["process_id"]),
                    inbound_ports=tuple(int(p) for p in obj["inbound_ports"]),
                    outbound_ports=tuple(int(p) for p in obj["outbound_ports"]),
                    peer_ips=tuple(str(ip) for ip in obj["peer_ips"]),
                    category=Category(obj["category"]),
                    suspicion_value=float(obj["suspicion_value"]),
                    api_profile=tuple(obj["api_profile"]) if "api_profile" in obj else None,
                )
            )
        except (ValueError, TypeError) as err:
            raise MalformedRecord(line_no, str(err)) from err
    return tuple(triggers)


def write_reports(reports: Sequence[SuspicionReport], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in reports:
            rec = {
                "process_id": r.process_id,
                "host": r.host,
                "state": r.state.value,
                "parameter_scores": r.parameter_scores,
                "weights": r.weights,
                "suspicion_value": r.suspicion_value,
                "category": r.category.value,
                "quarantined": r.quarantined(),
                "confirmed": r.confirmed,
                "ddos_kind": r.ddos_kind.value if r.ddos_kind else None,
                "udp_work_weight": r.udp_work_weight,
                "oi_ratio": "inf" if math.isinf(r.oi_ratio) else r.oi_ratio,
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
