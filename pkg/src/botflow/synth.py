"""Deterministic synthetic traffic corpora for exercising the detectors.

Each scenario builds its conversation list first and derives every capture
record from it, so the two views of the traffic can never drift apart. All
randomness comes from one seeded stream per scenario, split per host by a
stable counter; reordering one host's construction never perturbs another's
draws, and the same seed always yields byte-identical output files.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .flow_model import (
    Conversation,
    Endpoint,
    FlowData,
    HostCapture,
    PacketType,
    serialize_captures,
    write_conversations,
)
from .standalone import ApiEvent, EventCategory, write_event_log

__all__ = [
    "Corpus",
    "SCENARIOS",
    "gen_irc_bot",
    "gen_keylogger",
    "gen_normal",
    "gen_spam",
    "gen_syn_flood",
    "gen_udp_flood",
    "generate",
    "write_corpus",
]

STEP_SECONDS = 5.0
STEP_MS = 5000


@dataclass(frozen=True)
class Corpus:
    """One generated scenario with its ground-truth labels."""

    name: str
    seed: int
    captures: tuple[HostCapture, ...]
    conversations: tuple[Conversation, ...]
    event_logs: dict[tuple[str, str], tuple[ApiEvent, ...]]
    labels: dict


def _stream(name: str, seed: int, counter: int) -> random.Random:
    return random.Random(f"{name}:{seed}:{counter}")


def _canonical(conversations: Sequence[Conversation]) -> tuple[Conversation, ...]:
    return tuple(
        sorted(
            conversations,
            key=lambda c: (c.start_ms, c.end_ms, str(c.src), str(c.dst), c.packet_type.value),
        )
    )


def _build_captures(
    monitored: Mapping[str, PacketType],
    conversations: Sequence[Conversation],
    n_intervals: int,
    rt_of: Callable[[str, PacketType, int], float],
    icmp: Mapping[tuple[str, PacketType, int], int] | None = None,
) -> tuple[HostCapture, ...]:
    """Derive per-host captures from conversations on a fixed interval grid.

    Conversation bytes spread over the intervals they overlap, credited to
    both monitored ends, so paired capture views stay mutually consistent.
    Intervals without traffic still get one empty record of the host's
    default packet type to keep the grid contiguous.
    """
    icmp = icmp or {}
    traffic: dict[str, dict[int, dict[PacketType, dict[str, dict[Endpoint, float]]]]] = {}
    for conv in conversations:
        duration = conv.end_ms - conv.start_ms
        if duration == 0:
            share = {min(conv.start_ms // STEP_MS, n_intervals - 1): 1.0}
        else:
            share = {}
            first = max(conv.start_ms // STEP_MS, 0)
            last = min(-(-conv.end_ms // STEP_MS), n_intervals)
            for i in range(first, last):
                lo = max(conv.start_ms, i * STEP_MS)
                hi = min(conv.end_ms, (i + 1) * STEP_MS)
                if hi > lo:
                    share[i] = (hi - lo) / duration
        for own, remote, direction in (
            (conv.src, conv.dst, "out"),
            (conv.dst, conv.src, "in"),
        ):
            host = own.ip_address
            if host not in monitored:
                continue
            for i, fraction in share.items():
                maps = (
                    traffic.setdefault(host, {})
                    .setdefault(i, {})
                    .setdefault(conv.packet_type, {"in": {}, "out": {}})
                )
                sofar = maps[direction].get(remote, 0.0)
                maps[direction][remote] = sofar + conv.bytes * fraction

    captures = []
    for host in sorted(monitored):
        rows = []
        for i in range(n_intervals):
            by_type = traffic.get(host, {}).get(i, {})
            types = sorted(by_type, key=lambda p: p.value) or [monitored[host]]
            group = []
            for ptype in types:
                maps = by_type.get(ptype, {"in": {}, "out": {}})
                group.append(
                    FlowData(
                        packet_type=ptype,
                        incoming={ep: round(v) for ep, v in maps["in"].items()},
                        outgoing={ep: round(v) for ep, v in maps["out"].items()},
                        avg_response_time_ms=rt_of(host, ptype, i),
                        icmp_errors=icmp.get((host, ptype, i), 0),
                    )
                )
            rows.append(tuple(group))
        captures.append(
            HostCapture(host=host, interval_seconds=STEP_SECONDS, flow_data_array=tuple(rows))
        )
    return tuple(captures)


def _labels(name: str, seed: int, hosts: dict, expected: dict, victims: Sequence[str]) -> dict:
    return {
        "scenario": name,
        "seed": seed,
        "interval_seconds": STEP_SECONDS,
        "hosts": hosts,
        "expected_trigger_hosts": sorted(expected),
        "expected_categories": dict(sorted(expected.items())),
        "victims": sorted(victims),
    }


def _browsing(
    convs: list[Conversation],
    rt: dict[tuple[str, PacketType, int], float],
    rng: random.Random,
    host: str,
    peers: Sequence[str],
    n_intervals: int,
) -> None:
    # Human web traffic: one request/response pair per interval, download
    # heavier than upload, response times at keyboard speed.
    for i in range(n_intervals):
        t = i * STEP_MS
        peer = peers[i % len(peers)]
        start = t + rng.randint(0, 600)
        duration = rng.randint(1500, 3200)
        packets = rng.randint(5, 40)
        convs.append(
            Conversation(
                src=Endpoint(host, 5100),
                dst=Endpoint(peer, 443),
                packet_type=PacketType.TCP,
                start_ms=start,
                end_ms=start + duration,
                packets=packets,
                bytes=packets * 600,
                syn_count=1,
                established=1,
            )
        )
        reply = rng.randint(10, 60)
        convs.append(
            Conversation(
                src=Endpoint(peer, 443),
                dst=Endpoint(host, 5100),
                packet_type=PacketType.TCP,
                start_ms=start + 250,
                end_ms=start + duration,
                packets=reply,
                bytes=reply * 1000,
            )
        )
        rt[(host, PacketType.TCP, i)] = rng.uniform(2200.0, 3400.0)


def gen_udp_flood(seed: int = 7, n_agents: int = 2) -> Corpus:
    """Flood botnet: agents burst UDP at an external victim on command.

    Agents keep a low-rate keep-alive channel to their master, flood during
    the attack window, and absorb a spike of ICMP errors at the peak, which
    pins the first agent's peak interval to the reference work weight. The
    attacker instructs the master over a separate command session.
    """
    if n_agents < 1:
        raise ValueError("n_agents must be at least 1")
    name = "udp_flood"
    n = 20
    bursts = range(8, 14)
    attacker = "192.168.1.9"
    master = "192.168.1.10"
    agents = [f"192.168.1.{11 + i}" for i in range(n_agents)]
    normal_host = "192.168.1.20"
    victim = "203.0.113.50"
    web = ("198.51.100.4", "198.51.100.5", "198.51.100.6")

    convs: list[Conversation] = []
    rt: dict[tuple[str, PacketType, int], float] = {}
    icmp: dict[tuple[str, PacketType, int], int] = {}

    for index, agent in enumerate(agents):
        rng = _stream(name, seed, index)
        for i in range(n):
            t = i * STEP_MS
            convs.append(
                Conversation(
                    src=Endpoint(agent, 2000),
                    dst=Endpoint(master, 31335),
                    packet_type=PacketType.UDP,
                    start_ms=t,
                    end_ms=t + 10,
                    packets=1,
                    bytes=20,
                    response_time_ms=30.0,
                )
            )
            convs.append(
                Conversation(
                    src=Endpoint(master, 27444),
                    dst=Endpoint(agent, 3000),
                    packet_type=PacketType.UDP,
                    start_ms=t + 5,
                    end_ms=t + 15,
                    packets=1,
                    bytes=26,
                    payload_keywords=("png",),
                )
            )
            if i in bursts:
                for j in range(22):
                    # Interval 10 is pinned so SENT lands exactly on the
                    # reference example; other bursts draw around it.
                    packets = (120 if j < 21 else 128) if i == 10 else rng.randint(110, 135)
                    start = t + 50 + j * 220
                    convs.append(
                        Conversation(
                            src=Endpoint(agent, 4000),
                            dst=Endpoint(victim, 9999),
                            packet_type=PacketType.UDP,
                            start_ms=start,
                            end_ms=start + 180,
                            packets=packets,
                            bytes=packets * 60,
                        )
                    )
                convs.append(
                    Conversation(
                        src=Endpoint(victim, 9999),
                        dst=Endpoint(agent, 4000),
                        packet_type=PacketType.UDP,
                        start_ms=t + 100,
                        end_ms=t + 4900,
                        packets=560,
                        bytes=11200,
                    )
                )
        convs.append(
            Conversation(
                src=Endpoint(master, 27444),
                dst=Endpoint(agent, 3000),
                packet_type=PacketType.UDP,
                start_ms=bursts.start * STEP_MS + 2,
                end_ms=bursts.start * STEP_MS + 20,
                packets=1,
                bytes=30,
                payload_keywords=("aaa",),
            )
        )
        icmp[(agent, PacketType.UDP, 10)] = 1927

    # Attacker drives the master over its control port: a short setup session
    # and a long one spanning the attack window.
    sessions = (
        (100, 4400, 12, 700, ("mtimer",), 150, 6, 300),
        (bursts.start * STEP_MS, bursts.stop * STEP_MS - 10, 40, 2100, ("mdos", "mtimer"), 100, 14, 840),
    )
    for start, end, packets, size, keywords, lag, reply_packets, reply_size in sessions:
        convs.append(
            Conversation(
                src=Endpoint(attacker, 5000),
                dst=Endpoint(master, 27665),
                packet_type=PacketType.TCP,
                start_ms=start,
                end_ms=end,
                packets=packets,
                bytes=size,
                syn_count=1,
                established=1,
                payload_keywords=keywords,
            )
        )
        convs.append(
            Conversation(
                src=Endpoint(master, 27665),
                dst=Endpoint(attacker, 5000),
                packet_type=PacketType.TCP,
                start_ms=start + lag,
                end_ms=end,
                packets=reply_packets,
                bytes=reply_size,
                established=1,
            )
        )

    _browsing(convs, rt, _stream(name, seed, n_agents), normal_host, web, n)

    monitored = {attacker: PacketType.TCP, master: PacketType.UDP, normal_host: PacketType.TCP}
    monitored.update({agent: PacketType.UDP for agent in agents})
    defaults = {attacker: 2200.0, master: 250.0, normal_host: 2600.0}
    defaults.update({agent: 30.0 for agent in agents})

    def rt_of(host: str, ptype: PacketType, interval: int) -> float:
        return rt.get((host, ptype, interval), defaults[host])

    hosts = {attacker: "ATTACKER", master: "DDOS_MASTER", normal_host: "NORMAL", victim: "VICTIM"}
    hosts.update({agent: "DDOS_AGENT" for agent in agents})
    return Corpus(
        name=name,
        seed=seed,
        captures=_build_captures(monitored, convs, n, rt_of, icmp),
        conversations=_canonical(convs),
        event_logs={},
        labels=_labels(name, seed, hosts, {a: "DDOS" for a in agents}, [victim]),
    )


def gen_irc_bot(seed: int = 7) -> Corpus:
    """IRC bots answering channel traffic at machine speed beside a human.

    Bots reply to server messages within ~221 ms; the human on the same
    channel replies at keyboard speed. A mid-capture server outage makes the
    bots hammer reconnects, which the humans never do.
    """
    name = "irc_bot"
    n = 30
    outage = (15, 16)
    server = "199.66.238.5"
    bots = ["192.168.2.5", "192.168.2.6"]
    human = "192.168.2.7"

    convs: list[Conversation] = []
    rt: dict[tuple[str, PacketType, int], float] = {}

    for index, bot in enumerate(bots):
        rng = _stream(name, seed, index)
        port = 5200 + index
        for i in range(n):
            t = i * STEP_MS
            if i in outage:
                rt[(bot, PacketType.IRC, i)] = 0.0
                for j in range(120):
                    start = t + j * 41
                    convs.append(
                        Conversation(
                            src=Endpoint(bot, port),
                            dst=Endpoint(server, 6667),
                            packet_type=PacketType.IRC,
                            start_ms=start,
                            end_ms=start + 30,
                            packets=1,
                            bytes=60,
                            syn_count=1,
                        )
                    )
                continue
            drawn = []
            for k in range(4):
                req_start = t + k * 1200 + rng.randint(0, 80)
                convs.append(
                    Conversation(
                        src=Endpoint(server, 6667),
                        dst=Endpoint(bot, port),
                        packet_type=PacketType.IRC,
                        start_ms=req_start,
                        end_ms=req_start + 40,
                        packets=2,
                        bytes=180,
                    )
                )
                reply_ms = max(150.0, rng.gauss(221.0, 15.0))
                drawn.append(reply_ms)
                convs.append(
                    Conversation(
                        src=Endpoint(bot, port),
                        dst=Endpoint(server, 6667),
                        packet_type=PacketType.IRC,
                        start_ms=req_start + int(reply_ms),
                        end_ms=req_start + int(reply_ms) + 40,
                        packets=2,
                        bytes=140,
                        established=1,
                        response_time_ms=reply_ms,
                    )
                )
            rt[(bot, PacketType.IRC, i)] = sum(drawn) / len(drawn)

    rng = _stream(name, seed, len(bots))
    for i in range(n):
        t = i * STEP_MS
        drawn = []
        for k in range(2):
            req_start = t + k * 2300 + rng.randint(0, 120)
            convs.append(
                Conversation(
                    src=Endpoint(server, 6667),
                    dst=Endpoint(human, 5300),
                    packet_type=PacketType.IRC,
                    start_ms=req_start,
                    end_ms=req_start + 40,
                    packets=2,
                    bytes=160,
                )
            )
            reply_ms = rng.uniform(2100.0, 3200.0)
            drawn.append(reply_ms)
            convs.append(
                Conversation(
                    src=Endpoint(human, 5300),
                    dst=Endpoint(server, 6667),
                    packet_type=PacketType.IRC,
                    start_ms=req_start + int(reply_ms),
                    end_ms=req_start + int(reply_ms) + 40,
                    packets=2,
                    bytes=150,
                    established=1,
                    response_time_ms=reply_ms,
                )
            )
        rt[(human, PacketType.IRC, i)] = sum(drawn) / len(drawn)

    monitored = {bot: PacketType.IRC for bot in bots}
    monitored[human] = PacketType.IRC

    def rt_of(host: str, ptype: PacketType, interval: int) -> float:
        return rt[(host, ptype, interval)]

    hosts = {bot: "IRC_BOT" for bot in bots}
    hosts[human] = "NORMAL"
    return Corpus(
        name=name,
        seed=seed,
        captures=_build_captures(monitored, convs, n, rt_of),
        conversations=_canonical(convs),
        event_logs={},
        labels=_labels(name, seed, hosts, {b: "DDOS" for b in bots}, []),
    )


def gen_keylogger(seed: int = 7) -> Corpus:
    """Keylogger exfiltrating over IRC while its host barely browses.

    The infected process logs keystrokes, writes them to a file, and ships
    them out in lockstep, so its per-second API counts correlate perfectly.
    The clean host's activity streams are drawn independently.
    """
    name = "keylogger"
    n = 60
    storm = range(20, 39)
    infected = "192.168.3.5"
    clean = "192.168.3.6"
    cc = "198.18.7.9"
    web = ("198.51.100.7", "198.51.100.8")
    browse_intervals = (3, 13, 27, 41, 50, 57)

    convs: list[Conversation] = []
    rt: dict[tuple[str, PacketType, int], float] = {}

    session = [i for i in range(n) if i not in storm]
    for i in session:
        t = i * STEP_MS
        convs.append(
            Conversation(
                src=Endpoint(cc, 6667),
                dst=Endpoint(infected, 5400),
                packet_type=PacketType.IRC,
                start_ms=t + 200,
                end_ms=t + 230,
                packets=1,
                bytes=30,
            )
        )
        convs.append(
            Conversation(
                src=Endpoint(infected, 5400),
                dst=Endpoint(cc, 6667),
                packet_type=PacketType.IRC,
                start_ms=t + 230,
                end_ms=t + 250,
                packets=1,
                bytes=25,
                established=1,
                response_time_ms=30.0,
            )
        )
        rt[(infected, PacketType.IRC, i)] = 30.0
    for i in storm:
        rt[(infected, PacketType.IRC, i)] = 0.0
    for i in session[:12]:
        t = i * STEP_MS
        convs.append(
            Conversation(
                src=Endpoint(infected, 5400),
                dst=Endpoint(cc, 6667),
                packet_type=PacketType.IRC,
                start_ms=t + 2500,
                end_ms=t + 2900,
                packets=4,
                bytes=300,
                established=1,
            )
        )
    for j in range(120):
        start = storm.start * STEP_MS + j * 790
        convs.append(
            Conversation(
                src=Endpoint(infected, 5400),
                dst=Endpoint(cc, 6667),
                packet_type=PacketType.IRC,
                start_ms=start,
                end_ms=start + 40,
                packets=1,
                bytes=60,
                syn_count=1,
            )
        )

    for k, i in enumerate(browse_intervals):
        t = i * STEP_MS
        peer = web[k % len(web)]
        convs.append(
            Conversation(
                src=Endpoint(infected, 5500),
                dst=Endpoint(peer, 443),
                packet_type=PacketType.TCP,
                start_ms=t + 300,
                end_ms=t + 2900,
                packets=6,
                bytes=900,
                syn_count=1,
                established=1,
            )
        )
        convs.append(
            Conversation(
                src=Endpoint(peer, 443),
                dst=Endpoint(infected, 5500),
                packet_type=PacketType.TCP,
                start_ms=t + 900,
                end_ms=t + 2900,
                packets=40,
                bytes=35000,
            )
        )
        rt[(infected, PacketType.TCP, i)] = 2400.0

    rng = _stream(name, seed, 1)
    for i in range(n):
        rt[(clean, PacketType.TCP, i)] = rng.uniform(2200.0, 3400.0)
        if i % 3:
            continue
        t = i * STEP_MS
        peer = web[(i // 3) % len(web)]
        start = t + rng.randint(100, 700)
        packets = rng.randint(6, 30)
        convs.append(
            Conversation(
                src=Endpoint(clean, 5600),
                dst=Endpoint(peer, 443),
                packet_type=PacketType.TCP,
                start_ms=start,
                end_ms=start + 2400,
                packets=packets,
                bytes=packets * 600,
                syn_count=1,
                established=1,
            )
        )
        reply = rng.randint(12, 50)
        convs.append(
            Conversation(
                src=Endpoint(peer, 443),
                dst=Endpoint(clean, 5600),
                packet_type=PacketType.TCP,
                start_ms=start + 300,
                end_ms=start + 2400,
                packets=reply,
                bytes=reply * 1000,
            )
        )

    rng = _stream(name, seed, 2)
    lockstep: list[ApiEvent] = []
    counts = [2, 5] + [rng.randint(1, 6) for _ in range(58)]
    for w, count in enumerate(counts):
        base = w * 1000
        for j in range(count):
            lockstep.append(ApiEvent(base + j * 150, EventCategory.KEYBOARD_STATE, "GetAsyncKeyState"))
            lockstep.append(ApiEvent(base + j * 150 + 50, EventCategory.FILE_ACCESS, "WriteFile"))
            lockstep.append(ApiEvent(base + j * 150 + 90, EventCategory.COMMUNICATION, "send"))

    independent: list[ApiEvent] = []
    for w in range(40):
        base = w * 1000
        for j in range(rng.randint(0, 5)):
            independent.append(ApiEvent(base + j * 120, EventCategory.KEYBOARD_STATE, "GetForegroundWindow"))
        for j in range(rng.randint(0, 5)):
            independent.append(ApiEvent(base + j * 120 + 40, EventCategory.FILE_ACCESS, "ReadFile"))
        for j in range(rng.randint(0, 5)):
            independent.append(ApiEvent(base + j * 120 + 80, EventCategory.COMMUNICATION, "recv"))

    monitored = {infected: PacketType.IRC, clean: PacketType.TCP}
    defaults = {infected: 30.0, clean: 2600.0}

    def rt_of(host: str, ptype: PacketType, interval: int) -> float:
        return rt.get((host, ptype, interval), defaults[host])

    hosts = {infected: "KEYLOGGER", clean: "NORMAL"}
    return Corpus(
        name=name,
        seed=seed,
        captures=_build_captures(monitored, convs, n, rt_of),
        conversations=_canonical(convs),
        event_logs={
            (infected, "klg7"): tuple(sorted(lockstep, key=lambda e: e.timestamp_ms)),
            (clean, "brw2"): tuple(sorted(independent, key=lambda e: e.timestamp_ms)),
        },
        labels=_labels(name, seed, hosts, {infected: "KEYLOGGING"}, []),
    )


def gen_spam(seed: int = 7) -> Corpus:
    """Spam bots blasting near-identical messages at a pool of mail servers.

    Each wave opens dozens of parallel SMTP sessions whose payload tokens
    share campaign markers; greylisting bounces a slice of them, and a
    bystander host just browses.
    """
    name = "spam"
    n = 40
    waves = (5, 20, 35)
    spammers = ["192.168.4.5", "192.168.4.6"]
    normal_host = "192.168.4.9"
    mx = [f"203.0.113.{10 + i}" for i in range(8)]
    dns = "198.51.100.53"
    web = ("198.51.100.3", "198.51.100.4")
    markers = ("winner", "lottery", "pills")

    convs: list[Conversation] = []
    rt: dict[tuple[str, PacketType, int], float] = {}

    for index, spammer in enumerate(spammers):
        rng = _stream(name, seed, index)
        for w in waves:
            t = w * STEP_MS
            for j in range(40):
                tokens = ["mail-batch", f"msg-{w}-{j}"]
                if rng.random() < 0.65:
                    tokens.append(rng.choice(markers))
                start = t + j * 30
                convs.append(
                    Conversation(
                        src=Endpoint(spammer, 4600 + j % 16),
                        dst=Endpoint(mx[j % 8], 25),
                        packet_type=PacketType.TCP,
                        start_ms=start,
                        end_ms=start + 20000,
                        packets=30,
                        bytes=8000,
                        syn_count=1,
                        established=1,
                        payload_keywords=tuple(tokens),
                    )
                )
                convs.append(
                    Conversation(
                        src=Endpoint(mx[j % 8], 25),
                        dst=Endpoint(spammer, 4600 + j % 16),
                        packet_type=PacketType.TCP,
                        start_ms=start + 500,
                        end_ms=start + 20000,
                        packets=10,
                        bytes=600,
                    )
                )
        for j in range(40):
            tokens = ["mail-batch", f"retry-{j}"]
            if rng.random() < 0.65:
                tokens.append(rng.choice(markers))
            start = (10 + j % 20) * STEP_MS + 700 + (j // 20) * 900
            convs.append(
                Conversation(
                    src=Endpoint(spammer, 4700),
                    dst=Endpoint(mx[j % 8], 25),
                    packet_type=PacketType.TCP,
                    start_ms=start,
                    end_ms=start + 200,
                    packets=3,
                    bytes=180,
                    syn_count=1,
                    payload_keywords=tuple(tokens),
                )
            )
        for i in range(n):
            t = i * STEP_MS
            convs.append(
                Conversation(
                    src=Endpoint(spammer, 5600),
                    dst=Endpoint(dns, 53),
                    packet_type=PacketType.UDP,
                    start_ms=t + 100,
                    end_ms=t + 150,
                    packets=2,
                    bytes=160,
                )
            )
            convs.append(
                Conversation(
                    src=Endpoint(dns, 53),
                    dst=Endpoint(spammer, 5600),
                    packet_type=PacketType.UDP,
                    start_ms=t + 150,
                    end_ms=t + 200,
                    packets=2,
                    bytes=300,
                )
            )

    _browsing(convs, rt, _stream(name, seed, len(spammers)), normal_host, web, n)

    monitored = {spammer: PacketType.TCP for spammer in spammers}
    monitored[normal_host] = PacketType.TCP
    defaults = {spammer: 130.0 for spammer in spammers}
    defaults[normal_host] = 2600.0

    def rt_of(host: str, ptype: PacketType, interval: int) -> float:
        return rt.get((host, ptype, interval), defaults[host])

    hosts = {spammer: "SPAMMER" for spammer in spammers}
    hosts[normal_host] = "NORMAL"
    return Corpus(
        name=name,
        seed=seed,
        captures=_build_captures(monitored, convs, n, rt_of),
        conversations=_canonical(convs),
        event_logs={},
        labels=_labels(name, seed, hosts, {s: "SPAM" for s in spammers}, []),
    )


def gen_syn_flood(seed: int = 7) -> Corpus:
    """SYN flood: one bot machine-guns connection attempts at a web server.

    Almost nothing completes the handshake, responses never arrive, and the
    attack window dwarfs the bot's idle beaconing.
    """
    name = "syn_flood"
    n = 24
    bursts = range(6, 17)
    bot = "192.168.5.5"
    normal_host = "192.168.5.20"
    victim = "203.0.113.80"
    beacon = "198.51.100.9"
    web = ("198.51.100.11", "198.51.100.12")

    convs: list[Conversation] = []
    rt: dict[tuple[str, PacketType, int], float] = {}

    for i in range(n):
        t = i * STEP_MS
        convs.append(
            Conversation(
                src=Endpoint(bot, 6300),
                dst=Endpoint(beacon, 443),
                packet_type=PacketType.TCP,
                start_ms=t + 4700,
                end_ms=t + 4900,
                packets=1,
                bytes=60,
                syn_count=1,
                established=1,
            )
        )
        if i not in bursts:
            continue
        for j in range(100):
            start = t + j * 45
            convs.append(
                Conversation(
                    src=Endpoint(bot, 6200 + j % 64),
                    dst=Endpoint(victim, 80),
                    packet_type=PacketType.TCP,
                    start_ms=start,
                    end_ms=start + 3000,
                    packets=30,
                    bytes=1200,
                    syn_count=30,
                )
            )
        convs.append(
            Conversation(
                src=Endpoint(victim, 80),
                dst=Endpoint(bot, 6200),
                packet_type=PacketType.TCP,
                start_ms=t + 200,
                end_ms=t + 4600,
                packets=30,
                bytes=2000,
            )
        )
    for j in range(5):
        start = bursts.start * STEP_MS + j * 11
        convs.append(
            Conversation(
                src=Endpoint(bot, 6100),
                dst=Endpoint(victim, 80),
                packet_type=PacketType.TCP,
                start_ms=start,
                end_ms=start + 2500,
                packets=45,
                bytes=2500,
                syn_count=1,
                established=1,
            )
        )

    _browsing(convs, rt, _stream(name, seed, 0), normal_host, web, n)

    monitored = {bot: PacketType.TCP, normal_host: PacketType.TCP}
    defaults = {bot: 0.0, normal_host: 2600.0}

    def rt_of(host: str, ptype: PacketType, interval: int) -> float:
        return rt.get((host, ptype, interval), defaults[host])

    hosts = {bot: "DDOS_AGENT", normal_host: "NORMAL", victim: "VICTIM"}
    return Corpus(
        name=name,
        seed=seed,
        captures=_build_captures(monitored, convs, n, rt_of),
        conversations=_canonical(convs),
        event_logs={},
        labels=_labels(name, seed, hosts, {bot: "DDOS"}, [victim]),
    )


def gen_normal(seed: int = 7) -> Corpus:
    """Benign office traffic: DNS lookups plus interactive browsing."""
    name = "normal"
    n = 40
    hosts = ["192.168.6.5", "192.168.6.6", "192.168.6.7"]
    dns = "198.51.100.53"
    web = [f"198.51.100.{11 + i}" for i in range(4)]

    convs: list[Conversation] = []
    rt: dict[tuple[str, PacketType, int], float] = {}

    for index, host in enumerate(hosts):
        rng = _stream(name, seed, index)
        for i in range(n):
            t = i * STEP_MS
            convs.append(
                Conversation(
                    src=Endpoint(host, 5600),
                    dst=Endpoint(dns, 53),
                    packet_type=PacketType.UDP,
                    start_ms=t + 100,
                    end_ms=t + 150,
                    packets=2,
                    bytes=160,
                )
            )
            convs.append(
                Conversation(
                    src=Endpoint(dns, 53),
                    dst=Endpoint(host, 5600),
                    packet_type=PacketType.UDP,
                    start_ms=t + 150,
                    end_ms=t + 200,
                    packets=2,
                    bytes=320,
                )
            )
            rt[(host, PacketType.UDP, i)] = rng.uniform(2000.0, 3500.0)
            for k, packets in enumerate((rng.randint(4, 50), rng.randint(3, 51))):
                start = t + 400 + k * 1800
                duration = rng.randint(1200, 2400)
                peer = web[(i + k) % len(web)]
                convs.append(
                    Conversation(
                        src=Endpoint(host, 5100 + k),
                        dst=Endpoint(peer, 443),
                        packet_type=PacketType.TCP,
                        start_ms=start,
                        end_ms=start + duration,
                        packets=packets,
                        bytes=packets * 600,
                        syn_count=1,
                        established=1,
                    )
                )
                reply = packets * 2
                convs.append(
                    Conversation(
                        src=Endpoint(peer, 443),
                        dst=Endpoint(host, 5100 + k),
                        packet_type=PacketType.TCP,
                        start_ms=start + 200,
                        end_ms=start + duration,
                        packets=reply,
                        bytes=reply * 1000,
                    )
                )
            rt[(host, PacketType.TCP, i)] = rng.uniform(2000.0, 3500.0)

    monitored = {host: PacketType.TCP for host in hosts}

    def rt_of(host: str, ptype: PacketType, interval: int) -> float:
        return rt[(host, ptype, interval)]

    return Corpus(
        name=name,
        seed=seed,
        captures=_build_captures(monitored, convs, n, rt_of),
        conversations=_canonical(convs),
        event_logs={},
        labels=_labels(name, seed, {h: "NORMAL" for h in hosts}, {}, []),
    )


SCENARIOS: dict[str, Callable[..., Corpus]] = {
    "udp_flood": gen_udp_flood,
    "irc_bot": gen_irc_bot,
    "keylogger": gen_keylogger,
    "spam": gen_spam,
    "syn_flood": gen_syn_flood,
    "normal": gen_normal,
}


def generate(name: str, seed: int = 7, **options) -> Corpus:
    """Build a named scenario; unknown names raise ValueError."""
    try:
        factory = SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise ValueError(f"unknown scenario {name!r}; expected one of: {known}") from None
    return factory(seed=seed, **options)


def write_corpus(corpus: Corpus, out_dir) -> dict[str, Path]:
    """Write a corpus as JSONL files plus ground-truth labels."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "captures": out / "captures.jsonl",
        "conversations": out / "conversations.jsonl",
        "events": out / "events.jsonl",
        "labels": out / "labels.json",
    }
    serialize_captures(corpus.captures, paths["captures"])
    write_conversations(corpus.conversations, paths["conversations"])
    entries = [
        (pid, host, event)
        for (host, pid) in sorted(corpus.event_logs)
        for event in corpus.event_logs[(host, pid)]
    ]
    write_event_log(entries, paths["events"])
    text = json.dumps(corpus.labels, indent=2, sort_keys=True) + "\n"
    paths["labels"].write_text(text, encoding="utf-8")
    return paths
