"""Flow-record data model: capture ingestion, validation, derived metrics.

A capture file holds one JSON object per line, one record per
(host, interval, packet_type). Conversations are the transport-layer
counterpart: one record per observed src/dst exchange. Both formats reject
unknown keys so schema drift fails loudly at ingest time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence


class MalformedRecord(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateInterval(ValueError):
    def __init__(self, host: str, index: int):
        super().__init__(f"host {host}: interval {index} appears twice")
        self.host = host
        self.index = index


class NonContiguousIntervals(ValueError):
    def __init__(self, host: str):
        super().__init__(f"host {host}: interval indices are not contiguous from 0")
        self.host = host


class RangeOutOfBounds(ValueError):
    """Interval range exceeds the capture bounds."""


class PacketType(str, Enum):
    TCP = "TCP"
    UDP = "UDP"
    ICMP = "ICMP"
    IRC = "IRC"
    HTTP = "HTTP"
    OTHER = "OTHER"


def _check_ipv4(ip: str) -> str:
    parts = ip.split(".")
    if len(parts) != 4 or not all(p.isdigit() and 0 <= int(p) <= 255 and p == str(int(p)) for p in parts):
        raise ValueError(f"not a dotted-quad IPv4 address: {ip!r}")
    return ip


@dataclass(frozen=True, order=True)
class Endpoint:
    ip_address: str
    port: int

    def __post_init__(self) -> None:
        _check_ipv4(self.ip_address)
        if not 0 <= self.port <= 65535:
            raise ValueError(f"port out of range: {self.port}")

    @classmethod
    def parse(cls, raw: str) -> "Endpoint":
        ip, sep, port = raw.rpartition(":")
        if not sep or not port.lstrip("-").isdigit():
            raise ValueError(f"expected ip:port, got {raw!r}")
        return cls(ip, int(port))

    def __str__(self) -> str:
        return f"{self.ip_address}:{self.port}"


@dataclass(frozen=True)
class FlowData:
    """One host's traffic snapshot for one interval and one packet type."""

    packet_type: PacketType
    incoming: Mapping[Endpoint, int]
    outgoing: Mapping[Endpoint, int]
    avg_response_time_ms: float
    icmp_errors: int

    def __post_init__(self) -> None:
        for label, weights in (("incoming", self.incoming), ("outgoing", self.outgoing)):
            for endpoint, byte_count in weights.items():
                if byte_count < 0:
                    raise ValueError(f"{label} weight for {endpoint} is negative")
        if self.avg_response_time_ms < 0:
            raise ValueError("avg_response_time_ms must be non-negative")
        if self.icmp_errors < 0:
            raise ValueError("icmp_errors must be non-negative")

    def __eq__(self, other) -> bool:
        if not isinstance(other, FlowData):
            return NotImplemented
        return (
            self.packet_type == other.packet_type
            and dict(self.incoming) == dict(other.incoming)
            and dict(self.outgoing) == dict(other.outgoing)
            and self.avg_response_time_ms == other.avg_response_time_ms
            and self.icmp_errors == other.icmp_errors
        )


@dataclass(frozen=True)
class HostCapture:
    """Per-host capture: flow_data_array[i] holds interval i's records."""

    host: str
    interval_seconds: float
    flow_data_array: tuple[tuple[FlowData, ...], ...]

    def __post_init__(self) -> None:
        _check_ipv4(self.host)
        if self.interval_seconds <= 0:
            raise ValueError("interval_seconds must be positive")

    def interval_count(self) -> int:
        return len(self.flow_data_array)

    def outgoing_bytes(self, interval: int) -> int:
        return sum(b for fd in self.flow_data_array[interval] for b in fd.outgoing.values())

    def incoming_bytes(self, interval: int) -> int:
        return sum(b for fd in self.flow_data_array[interval] for b in fd.incoming.values())

    def icmp_errors(self, interval: int) -> int:
        return sum(fd.icmp_errors for fd in self.flow_data_array[interval])

    def mean_response_time_ms(self) -> float:
        values = [fd.avg_response_time_ms for group in self.flow_data_array for fd in group]
        return sum(values) / len(values) if values else 0.0


@dataclass(frozen=True)
class FlowMetrics:
    sent_udp: int
    recv_udp: int
    icmp_error_packets: int
    udp_work_weight: int
    oi_ratio: float

    def __post_init__(self) -> None:
        assert self.udp_work_weight == self.sent_udp * self.icmp_error_packets + self.recv_udp


@dataclass(frozen=True)
class Conversation:
    """One transport-layer exchange between two endpoints."""

    src: Endpoint
    dst: Endpoint
    packet_type: PacketType
    start_ms: int
    end_ms: int
    packets: int
    bytes: int
    syn_count: int = 0
    established: int = 0
    payload_keywords: tuple[str, ...] = ()
    response_time_ms: float | None = None

    def __post_init__(self) -> None:
        if self.start_ms > self.end_ms:
            raise ValueError("conversation ends before it starts")
        for label in ("packets", "bytes", "syn_count", "established"):
            if getattr(self, label) < 0:
                raise ValueError(f"{label} must be non-negative")
        if self.response_time_ms is not None and self.response_time_ms < 0:
            raise ValueError("response_time_ms must be non-negative")


def udp_work_weight(sent: int, recv: int, icmp_errors: int) -> int:
    """Scan/flood noise proxy: sent * icmp_errors + recv, in packets."""
    if sent < 0 or recv < 0 or icmp_errors < 0:
        raise ValueError("packet counts must be non-negative")
    return sent * icmp_errors + recv


def oi_ratio(capture: HostCapture, interval_range: Iterable[int]) -> float:
    """Outgoing/incoming byte ratio over the given intervals.

    0/0 is defined as 0.0; outgoing with zero incoming returns +infinity.
    """
    indices = list(interval_range)
    n = capture.interval_count()
    if any(i < 0 or i >= n for i in indices):
        raise RangeOutOfBounds(f"interval range outside 0..{n - 1}")
    out_total = sum(capture.outgoing_bytes(i) for i in indices)
    in_total = sum(capture.incoming_bytes(i) for i in indices)
    if in_total == 0:
        return math.inf if out_total > 0 else 0.0
    return out_total / in_total


def outgoing_packet_bins(
    conversations: Sequence[Conversation], host: str, step_seconds: float = 5.0
) -> tuple[float, ...]:
    """Per-bin outgoing packet counts for one host, at step_seconds bins.

    Bins cover the host's own conversation span; each conversation's packets
    spread uniformly over the bins it overlaps. Instant conversations land
    entirely in their start bin.
    """
    own = [c for c in conversations if c.src.ip_address == host]
    if not own:
        return ()
    step_ms = step_seconds * 1000.0
    t0 = min(c.start_ms for c in own)
    t1 = max(c.end_ms for c in own)
    n_bins = max(1, math.ceil((t1 - t0) / step_ms)) if t1 > t0 else 1
    bins = [0.0] * n_bins
    for conv in own:
        duration = conv.end_ms - conv.start_ms
        if duration == 0:
            bins[min(int((conv.start_ms - t0) // step_ms), n_bins - 1)] += conv.packets
            continue
        first = int((conv.start_ms - t0) // step_ms)
        last = min(int(math.ceil((conv.end_ms - t0) / step_ms)), n_bins)
        for b in range(first, last):
            lo = max(conv.start_ms, t0 + b * step_ms)
            hi = min(conv.end_ms, t0 + (b + 1) * step_ms)
            if hi > lo:
                bins[b] += conv.packets * (hi - lo) / duration
    return tuple(bins)


_FLOW_KEYS = {
    "host",
    "interval",
    "interval_seconds",
    "packet_type",
    "incoming",
    "outgoing",
    "avg_response_time_ms",
    "icmp_errors",
}
_CONV_REQUIRED = {"src", "dst", "packet_type", "start_ms", "end_ms", "packets", "bytes"}
_CONV_OPTIONAL = {"syn_count", "established", "payload_keywords", "response_time_ms"}


def _require_keys(obj: dict, required: set, optional: set, line_no: int) -> None:
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise MalformedRecord(line_no, f"missing keys: {sorted(missing)}")
    if unknown:
        raise MalformedRecord(line_no, f"unknown keys: {sorted(unknown)}")


def _iter_jsonl(path) -> Iterable[tuple[int, dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise MalformedRecord(line_no, f"invalid JSON: {err}") from err
            if not isinstance(obj, dict):
                raise MalformedRecord(line_no, "record is not a JSON object")
            yield line_no, obj


def _parse_weights(raw: dict, label: str, line_no: int) -> dict[Endpoint, int]:
    weights: dict[Endpoint, int] = {}
    for key, value in raw.items():
        try:
            endpoint = Endpoint.parse(key)
        except ValueError as err:
            raise MalformedRecord(line_no, f"{label} key {key!r}: {err}") from err
        if not isinstance(value, int) or value < 0:
            raise MalformedRecord(line_no, f"{label} weight for {key} must be a non-negative integer")
        weights[endpoint] = value
    return weights


def ingest_captures(path) -> tuple[HostCapture, ...]:
    """Load a flow-record JSONL file into per-host captures, intervals sorted."""
    per_host: dict[str, dict[int, dict[PacketType, FlowData]]] = {}
    host_step: dict[str, float] = {}
    for line_no, obj in _iter_jsonl(path):
        _require_keys(obj, _FLOW_KEYS, set(), line_no)
        try:
            host = _check_ipv4(obj["host"])
            packet_type = PacketType(obj["packet_type"])
        except ValueError as err:
            raise MalformedRecord(line_no, str(err)) from err
        interval = obj["interval"]
        if not isinstance(interval, int) or interval < 0:
            raise MalformedRecord(line_no, "interval must be a non-negative integer")
        step = obj["interval_seconds"]
        if not isinstance(step, (int, float)) or step <= 0:
            raise MalformedRecord(line_no, "interval_seconds must be positive")
        if host in host_step and host_step[host] != float(step):
            raise MalformedRecord(line_no, f"host {host}: interval_seconds changed mid-file")
        host_step[host] = float(step)
        rt = obj["avg_response_time_ms"]
        if not isinstance(rt, (int, float)) or rt < 0:
            raise MalformedRecord(line_no, "avg_response_time_ms must be non-negative")
        icmp = obj["icmp_errors"]
        if not isinstance(icmp, int) or icmp < 0:
            raise MalformedRecord(line_no, "icmp_errors must be a non-negative integer")
        flow = FlowData(
            packet_type=packet_type,
            incoming=_parse_weights(obj["incoming"], "incoming", line_no),
            outgoing=_parse_weights(obj["outgoing"], "outgoing", line_no),
            avg_response_time_ms=float(rt),
            icmp_errors=icmp,
        )
        by_interval = per_host.setdefault(host, {})
        by_type = by_interval.setdefault(interval, {})
        if packet_type in by_type:
            raise DuplicateInterval(host, interval)
        by_type[packet_type] = flow

    captures = []
    for host in sorted(per_host):
        by_interval = per_host[host]
        if sorted(by_interval) != list(range(len(by_interval))):
            raise NonContiguousIntervals(host)
        array = tuple(
            tuple(by_interval[i][pt] for pt in sorted(by_interval[i], key=lambda p: p.value))
            for i in range(len(by_interval))
        )
        captures.append(
            HostCapture(host=host, interval_seconds=host_step[host], flow_data_array=array)
        )
    return tuple(captures)


def serialize_captures(captures: Sequence[HostCapture], path) -> None:
    """Write captures back to the flow-record JSONL format, canonically ordered."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for capture in sorted(captures, key=lambda c: c.host):
            for interval, group in enumerate(capture.flow_data_array):
                for fd in sorted(group, key=lambda f: f.packet_type.value):
                    rec = {
                        "host": capture.host,
                        "interval": interval,
                        "interval_seconds": capture.interval_seconds,
                        "packet_type": fd.packet_type.value,
                        "incoming": {str(ep): b for ep, b in sorted(fd.incoming.items())},
                        "outgoing": {str(ep): b for ep, b in sorted(fd.outgoing.items())},
                        "avg_response_time_ms": fd.avg_response_time_ms,
                        "icmp_errors": fd.icmp_errors,
                    }
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_conversations(path) -> tuple[Conversation, ...]:
    conversations = []
    for line_no, obj in _iter_jsonl(path):
        _require_keys(obj, _CONV_REQUIRED, _CONV_OPTIONAL, line_no)
        try:
            conv = Conversation(
                src=Endpoint.parse(obj["src"]),
                dst=Endpoint.parse(obj["dst"]),
                packet_type=PacketType(obj["packet_type"]),
                start_ms=obj["start_ms"],
                end_ms=obj["end_ms"],
                packets=obj["packets"],
                bytes=obj["bytes"],
                syn_count=obj.get("syn_count", 0),
                established=obj.get("established", 0),
                payload_keywords=tuple(obj.get("payload_keywords", ())),
                response_time_ms=obj.get("response_time_ms"),
            )
        except (ValueError, TypeError) as err:
            raise MalformedRecord(line_no, str(err)) from err
        conversations.append(conv)
    return tuple(conversations)


def write_conversations(conversations: Sequence[Conversation], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for conv in conversations:
            rec = {
                "src": str(conv.src),
                "dst": str(conv.dst),
                "packet_type": conv.packet_type.value,
                "start_ms": conv.start_ms,
                "end_ms": conv.end_ms,
                "packets": conv.packets,
                "bytes": conv.bytes,
                "syn_count": conv.syn_count,
                "established": conv.established,
                "payload_keywords": list(conv.payload_keywords),
            }
            if conv.response_time_ms is not None:
                rec["response_time_ms"] = conv.response_time_ms
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
