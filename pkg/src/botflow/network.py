"""Network-wide detection engine.

Consumes trigger events raised by per-host engines plus the network-wide flow
corpus, narrows the corpus through a filter funnel (suspect hosts, packet
types, ports, response times), then looks for coordination: synchronized
activity, similar traffic patterns under dynamic time warping, traffic-graph
roles, and correlated command/activity clusters. Coordinated findings become
alerts, bot signatures, and a soft blacklist.
"""

from __future__ import annotations

import ipaddress
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .analytics import Series, dtw_distance, kmeans
from .config import EngineConfig
from .flow_model import (
    Conversation,
    HostCapture,
    PacketType,
    outgoing_packet_bins,
)
from .standalone import BotSignature, Category, TriggerEvent

__all__ = [
    "ActivityCluster",
    "ActivityRecord",
    "ActivityType",
    "Alert",
    "AlertBundle",
    "Blacklist",
    "BotSignature",
    "CommandCluster",
    "Conversation",
    "CorrelatedPair",
    "Evidence",
    "GraphEdge",
    "GraphFindings",
    "IntervalMissing",
    "NetworkResult",
    "PortPartition",
    "ResponseTimeResult",
    "Role",
    "SimilarityResult",
    "SyncGroup",
    "TrafficGraph",
    "analyze_graph",
    "build_traffic_graph",
    "cluster_activity_plane",
    "cluster_command_plane",
    "cluster_response_times",
    "cross_correlate",
    "dtw_similarity_matrix",
    "export_dot",
    "filter_packet_type",
    "filter_ports",
    "filter_synchronization",
    "issue_alerts",
    "network_document",
    "run_network",
    "select_suspect_flows",
    "write_network_outputs",
]

_TCP_FAMILY = (PacketType.TCP, PacketType.IRC, PacketType.HTTP)


class IntervalMissing(ValueError):
    """Requested capture interval does not exist."""


class Role(Enum):
    AGENT = "AGENT"
    MASTER = "MASTER"
    ATTACKER = "ATTACKER"
    VICTIM = "VICTIM"


class ActivityType(Enum):
    PORT_SCAN = "PORT_SCAN"
    SPAM = "SPAM"
    BINARY_DOWNLOAD = "BINARY_DOWNLOAD"
    DDOS = "DDOS"


def _is_internal(ip: str, networks: Iterable[str]) -> bool:
    addr = ipaddress.ip_address(ip)
    return any(addr in ipaddress.ip_network(net) for net in networks)


def select_suspect_flows(
    triggers: Sequence[TriggerEvent], corpus: Sequence[Conversation]
) -> tuple[Conversation, ...]:
    """Conversations touching any trigger originator or trigger peer."""
    suspects: set[str] = set()
    for t in triggers:
        suspects.add(t.originator_ip)
        suspects.update(t.peer_ips)
    if not suspects:
        return ()
    return tuple(
        c for c in corpus
        if c.src.ip_address in suspects or c.dst.ip_address in suspects
    )


def filter_packet_type(flows: Sequence[Conversation]) -> tuple[Conversation, ...]:
    return tuple(c for c in flows if c.packet_type is not PacketType.OTHER)


@dataclass(frozen=True)
class PortPartition:
    standard: tuple[Conversation, ...]
    nonstandard: tuple[Conversation, ...]

    def combined(self) -> tuple[Conversation, ...]:
        return self.standard + self.nonstandard


def filter_ports(
    flows: Sequence[Conversation],
    standard_ports: Iterable[int],
    enable_nonstandard: bool = True,
    *,
    fanout_min: int = 10,
    ppf_max: float = 10.0,
    bpp_max: float = 300.0,
    duration_min_s: float = 60.0,
) -> PortPartition:
    """Split flows into known-bot-port traffic and non-standard-port candidates.

    Candidates come from two heuristics: one source port fanning out to many
    distinct targets, and flows shaped like command channels (few packets,
    small packets, long-lived) on arbitrary ports.
    """
    standard_ports = set(standard_ports)
    standard = tuple(
        c for c in flows if c.src.port in standard_ports or c.dst.port in standard_ports
    )
    if not enable_nonstandard:
        return PortPartition(standard=standard, nonstandard=())

    fanout: dict[tuple[str, int], set[str]] = {}
    for c in flows:
        fanout.setdefault((c.src.ip_address, c.src.port), set()).add(c.dst.ip_address)
    wide = {key for key, targets in fanout.items() if len(targets) >= fanout_min}

    taken = set(standard)
    nonstandard = []
    for c in flows:
        if c in taken:
            continue
        if (c.src.ip_address, c.src.port) in wide:
            nonstandard.append(c)
            continue
        duration_s = (c.end_ms - c.start_ms) / 1000.0
        bpp = c.bytes / c.packets if c.packets else 0.0
        if c.packets <= ppf_max and bpp <= bpp_max and duration_s >= duration_min_s:
            nonstandard.append(c)
    return PortPartition(standard=standard, nonstandard=tuple(nonstandard))


@dataclass(frozen=True)
class ResponseTimeResult:
    low_hosts: frozenset[str]
    ambiguous: bool
    reason: str
    passed: tuple[Conversation, ...]


def cluster_response_times(
    flows: Sequence[Conversation], *, separation_min: float = 3.0, seed: int = 0
) -> ResponseTimeResult:
    """Keep flows from hosts in the fast-responding k=2 cluster.

    Hosts without response data always pass. With fewer than 2 measured hosts,
    or when the two centroids are not separated by at least separation_min,
    the split is meaningless and everything passes, flagged accordingly.
    """
    by_host: dict[str, list[float]] = {}
    for c in flows:
        if c.response_time_ms is not None:
            by_host.setdefault(c.src.ip_address, []).append(c.response_time_ms)
    means = {host: sum(v) / len(v) for host, v in sorted(by_host.items())}

    def everything(reason: str) -> ResponseTimeResult:
        return ResponseTimeResult(
            low_hosts=frozenset(means),
            ambiguous=True,
            reason=reason,
            passed=tuple(flows),
        )

    if len(means) < 2:
        return everything("insufficient-data")
    if len(set(means.values())) < 2:
        return everything("low-separation")
    hosts = list(means)
    result = kmeans([(means[h],) for h in hosts], 2, seed=seed)
    low_idx = min(range(2), key=lambda i: result.centroids[i][0])
    lower, upper = sorted(c[0] for c in result.centroids)
    if lower > 0 and upper / lower < separation_min:
        return everything("low-separation")
    low_hosts = frozenset(
        h for h, a in zip(hosts, result.assignments) if a == low_idx
    )
    passed = tuple(
        c for c in flows
        if c.src.ip_address in low_hosts or c.src.ip_address not in means
    )
    return ResponseTimeResult(low_hosts=low_hosts, ambiguous=False, reason="", passed=passed)


@dataclass(frozen=True)
class SyncGroup:
    conversations: tuple[Conversation, ...]
    hosts: frozenset[str]

    def start_ms(self) -> int:
        return min(c.start_ms for c in self.conversations)


def filter_synchronization(
    flows: Sequence[Conversation], window_ms: int = 5000
) -> tuple[SyncGroup, ...]:
    """Single-linkage grouping of conversation starts; a group is reported
    when it holds >= 2 conversations from >= 2 distinct source hosts."""
    ordered = sorted(flows, key=lambda c: (c.start_ms, c.src.ip_address, c.src.port))
    groups: list[SyncGroup] = []
    chain: list[Conversation] = []
    for c in ordered:
        if chain and c.start_ms - chain[-1].start_ms > window_ms:
            groups.append(_close_group(chain))
            chain = []
        chain.append(c)
    if chain:
        groups.append(_close_group(chain))
    return tuple(
        g for g in groups if len(g.conversations) >= 2 and len(g.hosts) >= 2
    )


def _close_group(chain: Sequence[Conversation]) -> SyncGroup:
    return SyncGroup(
        conversations=tuple(chain),
        hosts=frozenset(c.src.ip_address for c in chain),
    )


@dataclass(frozen=True)
class SimilarityResult:
    hosts: tuple[str, ...]
    matrix: tuple[tuple[float, ...], ...]
    theta: float
    similar_pairs: tuple[tuple[str, str], ...]


def dtw_similarity_matrix(
    host_series: Mapping[str, Series],
    *,
    theta_floor: float = 1000.0,
    theta_factor: float = 3.0,
    jobs: int = 1,
) -> SimilarityResult:
    """Pairwise accumulated warping distances between per-host traffic series.

    The similarity threshold adapts to the closest pair (theta_factor times
    the smallest off-diagonal distance) with an absolute floor, so near-equal
    bot series stay together without a magic constant per corpus. jobs > 1
    spreads pair computations over a thread pool; results are placed by pair
    index, so the matrix is identical for any job count.
    """
    hosts = tuple(sorted(host_series))
    if len(hosts) < 2:
        return SimilarityResult(hosts=(), matrix=(), theta=0.0, similar_pairs=())
    n = len(hosts)
    matrix = [[0.0] * n for _ in range(n)]
    index_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def pair_distance(pair: tuple[int, int]) -> float:
        i, j = pair
        return dtw_distance(host_series[hosts[i]], host_series[hosts[j]]).accumulated

    if jobs > 1 and len(index_pairs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            distances = list(pool.map(pair_distance, index_pairs))
    else:
        distances = [pair_distance(p) for p in index_pairs]
    for (i, j), d in zip(index_pairs, distances):
        matrix[i][j] = matrix[j][i] = d
    offdiag = [matrix[i][j] for i in range(n) for j in range(i + 1, n)]
    theta = max(theta_floor, theta_factor * min(offdiag))
    pairs = tuple(
        (hosts[i], hosts[j])
        for i in range(n)
        for j in range(i + 1, n)
        if matrix[i][j] <= theta
    )
    return SimilarityResult(
        hosts=hosts,
        matrix=tuple(tuple(row) for row in matrix),
        theta=theta,
        similar_pairs=pairs,
    )


@dataclass(frozen=True)
class GraphEdge:
    bytes: int
    packets: int
    packet_type: PacketType | None
    carries_bot_commands: bool
    discrepancy: bool


@dataclass(frozen=True)
class TrafficGraph:
    nodes: frozenset[str]
    edges: dict[tuple[str, str], GraphEdge]
    interval: int


def build_traffic_graph(
    captures: Sequence[HostCapture],
    interval: int | None = None,
    conversations: Sequence[Conversation] = (),
    command_keywords: Iterable[str] = (),
) -> TrafficGraph:
    """Directed host graph for one capture interval (default: the busiest).

    Edge weights come from the sender's outgoing record; when only the
    receiver captured the traffic its incoming record stands in. When both
    sides are captured and disagree by more than 1% the edge is flagged.
    Conversations overlapping the interval contribute packet counts and
    command-keyword flags.
    """
    counts = [c.interval_count() for c in captures]
    max_intervals = max(counts, default=0)
    if interval is None:
        best, best_bytes = 0, -1
        for i in range(max_intervals):
            total = sum(
                c.outgoing_bytes(i) for c in captures if i < c.interval_count()
            )
            if total > best_bytes:
                best, best_bytes = i, total
        interval = best
    elif interval < 0 or interval >= max_intervals:
        raise IntervalMissing(f"interval {interval} outside 0..{max_intervals - 1}")

    captured = {c.host for c in captures}
    out_view: dict[tuple[str, str], int] = {}
    in_view: dict[tuple[str, str], int] = {}
    type_bytes: dict[tuple[str, str], dict[PacketType, int]] = {}
    nodes = set(captured)
    step_ms = {c.host: c.interval_seconds * 1000.0 for c in captures}

    for cap in captures:
        if interval >= cap.interval_count():
            continue
        for fd in cap.flow_data_array[interval]:
            for endpoint, b in fd.outgoing.items():
                key = (cap.host, endpoint.ip_address)
                out_view[key] = out_view.get(key, 0) + b
                type_bytes.setdefault(key, {})[fd.packet_type] = (
                    type_bytes.setdefault(key, {}).get(fd.packet_type, 0) + b
                )
                nodes.add(endpoint.ip_address)
            for endpoint, b in fd.incoming.items():
                key = (endpoint.ip_address, cap.host)
                in_view[key] = in_view.get(key, 0) + b
                type_bytes.setdefault(key, {})[fd.packet_type] = (
                    type_bytes.setdefault(key, {}).get(fd.packet_type, 0) + b
                )
                nodes.add(endpoint.ip_address)

    keywords = set(command_keywords)
    edges: dict[tuple[str, str], GraphEdge] = {}
    for key in sorted(set(out_view) | set(in_view)):
        src, dst = key
        out_b = out_view.get(key, 0)
        in_b = in_view.get(key, 0)
        weight = out_b if src in captured and out_b > 0 else in_b
        if weight <= 0:
            continue
        discrepancy = (
            src in captured
            and dst in captured
            and abs(out_b - in_b) > 0.01 * max(out_b, in_b)
        )
        lo = interval * step_ms.get(src, 5000.0)
        hi = lo + step_ms.get(src, 5000.0)
        overlapping = [
            c for c in conversations
            if c.src.ip_address == src and c.dst.ip_address == dst
            and c.start_ms < hi and (c.end_ms > lo or c.end_ms == c.start_ms >= lo)
        ]
        dominant = max(
            type_bytes.get(key, {None: 0}).items(), key=lambda kv: (kv[1], str(kv[0]))
        )[0]
        edges[key] = GraphEdge(
            bytes=weight,
            packets=sum(c.packets for c in overlapping),
            packet_type=dominant,
            carries_bot_commands=any(
                keywords & set(c.payload_keywords) for c in overlapping
            ),
            discrepancy=discrepancy,
        )
    return TrafficGraph(nodes=frozenset(nodes), edges=edges, interval=interval)


@dataclass(frozen=True)
class GraphFindings:
    agents: frozenset[str]
    masters: frozenset[str]
    attackers: frozenset[str]


def analyze_graph(
    graph: TrafficGraph, *, ratio_min: float = 10.0, min_bytes: int = 100_000
) -> GraphFindings:
    """Out-heavy nodes are agent candidates; command edges point at their
    controllers (masters), and command edges into masters at the attacker."""
    out_bytes: dict[str, int] = {}
    in_bytes: dict[str, int] = {}
    for (src, dst), edge in graph.edges.items():
        out_bytes[src] = out_bytes.get(src, 0) + edge.bytes
        in_bytes[dst] = in_bytes.get(dst, 0) + edge.bytes
    agents = frozenset(
        node
        for node in graph.nodes
        if out_bytes.get(node, 0) >= min_bytes
        and (
            in_bytes.get(node, 0) == 0
            or out_bytes.get(node, 0) / in_bytes[node] >= ratio_min
        )
    )
    masters = frozenset(
        src
        for (src, dst), edge in graph.edges.items()
        if edge.carries_bot_commands and dst in agents and src != dst
    )
    attackers = frozenset(
        src
        for (src, dst), edge in graph.edges.items()
        if edge.carries_bot_commands and dst in masters and src != dst
    )
    return GraphFindings(agents=agents, masters=masters, attackers=attackers)


@dataclass(frozen=True)
class CommandCluster:
    members: tuple[tuple[str, str], ...]
    hosts: frozenset[str]
    endpoints: frozenset[str]


def _zscore_columns(rows: list[list[float]]) -> list[tuple[float, ...]]:
    n = len(rows)
    dims = len(rows[0])
    out = [[0.0] * dims for _ in range(n)]
    for d in range(dims):
        column = [r[d] for r in rows]
        mean = sum(column) / n
        var = sum((v - mean) ** 2 for v in column) / n
        std = math.sqrt(var)
        if std > 0:
            for i in range(n):
                out[i][d] = (column[i] - mean) / std
    return [tuple(r) for r in out]


def cluster_command_plane(
    flows: Sequence[Conversation],
    legit_servers: Iterable[str] = (),
    k: int = 4,
    *,
    internal_networks: Iterable[str] = ("192.168.0.0/16",),
    seed: int = 0,
) -> tuple[CommandCluster, ...]:
    """Cluster internal->external conversation groups by flow-shape features.

    Internal-to-internal traffic, known legitimate servers, and one-way
    exchanges are excluded. Features (flows/hour, packets/flow, bytes/packet,
    bytes/second, port) are z-scored; k is capped below the group count so
    near-identical groups always share a cluster.
    """
    legit = set(legit_servers)
    networks = tuple(internal_networks)
    reverse_pairs = {(c.src.ip_address, c.dst.ip_address) for c in flows}

    groups: dict[tuple[str, str], list[Conversation]] = {}
    for c in flows:
        if not _is_internal(c.src.ip_address, networks):
            continue
        if _is_internal(c.dst.ip_address, networks):
            continue
        if c.dst.ip_address in legit:
            continue
        if c.packet_type in _TCP_FAMILY:
            if c.established < 1:
                continue
        elif (c.dst.ip_address, c.src.ip_address) not in reverse_pairs:
            continue
        groups.setdefault((c.src.ip_address, str(c.dst)), []).append(c)

    if not groups:
        return ()
    keys = sorted(groups)
    rows = []
    for key in keys:
        convs = groups[key]
        n = len(convs)
        packets = sum(c.packets for c in convs)
        nbytes = sum(c.bytes for c in convs)
        span_ms = max(c.end_ms for c in convs) - min(c.start_ms for c in convs)
        span_h = max(span_ms / 3_600_000.0, 1.0)
        span_s = max(span_ms / 1000.0, 1.0)
        rows.append([
            n / span_h,
            packets / n,
            nbytes / packets if packets else 0.0,
            nbytes / span_s,
            float(convs[0].dst.port),
        ])
    vectors = _zscore_columns(rows)
    k_eff = min(k, max(1, len(keys) - 1), len(set(vectors)))
    result = kmeans(vectors, k_eff, seed=seed)
    clusters = []
    for cluster_idx in range(k_eff):
        members = tuple(
            keys[i] for i, a in enumerate(result.assignments) if a == cluster_idx
        )
        if not members:
            continue
        clusters.append(
            CommandCluster(
                members=members,
                hosts=frozenset(host for host, _ in members),
                endpoints=frozenset(endpoint for _, endpoint in members),
            )
        )
    return tuple(sorted(clusters, key=lambda c: c.members))


@dataclass(frozen=True)
class ActivityRecord:
    host: str
    activity_type: ActivityType
    features: tuple[float, ...]
    tokens: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ActivityCluster:
    activity_type: ActivityType
    records: tuple[ActivityRecord, ...]
    hosts: frozenset[str]


def cluster_activity_plane(
    flows: Sequence[Conversation],
    captures: Sequence[HostCapture] = (),
    *,
    scan_ports_min: int = 20,
    scan_established_max: float = 0.2,
    flood_pps: float = 500.0,
    download_markers: Iterable[str] = ("download", "exe", "bin", "payload"),
    dest_jaccard: float = 0.5,
    k: int = 2,
    seed: int = 0,
) -> tuple[ActivityCluster, ...]:
    """Two-layer activity clustering: rule-based typing, then grouping.

    Spam records group by shared SMTP destination sets (jaccard linkage);
    the other types run k-means on per-type feature vectors.
    """
    markers = tuple(download_markers)
    step_by_host = {c.host: c.interval_seconds for c in captures}
    hosts = sorted({c.src.ip_address for c in flows})
    records: list[ActivityRecord] = []
    for host in hosts:
        own = [c for c in flows if c.src.ip_address == host]
        step = step_by_host.get(host, 5.0)

        ports = {c.dst.port for c in own}
        syn = sum(c.syn_count for c in own)
        est = sum(c.established for c in own)
        est_fraction = est / syn if syn else (1.0 if est else 0.0)
        if len(ports) >= scan_ports_min and est_fraction < scan_established_max:
            records.append(ActivityRecord(
                host=host,
                activity_type=ActivityType.PORT_SCAN,
                features=(float(len(ports)), est_fraction),
            ))

        smtp = [c for c in own if c.dst.port == 25]
        if smtp:
            records.append(ActivityRecord(
                host=host,
                activity_type=ActivityType.SPAM,
                features=(float(len(smtp)), float(len({c.dst.ip_address for c in smtp}))),
                tokens=frozenset(str(c.dst) for c in smtp),
            ))

        downloads = [
            c for c in own
            if c.packet_type is PacketType.HTTP
            and any(m in kw for kw in c.payload_keywords for m in markers)
        ]
        if downloads:
            records.append(ActivityRecord(
                host=host,
                activity_type=ActivityType.BINARY_DOWNLOAD,
                features=(
                    float(len(downloads)),
                    sum(c.bytes for c in downloads) / len(downloads),
                ),
            ))

        bins = outgoing_packet_bins(own, host, step)
        peak_pps = max(bins) / step if bins else 0.0
        if peak_pps >= flood_pps:
            packets = sum(c.packets for c in own)
            records.append(ActivityRecord(
                host=host,
                activity_type=ActivityType.DDOS,
                features=(
                    peak_pps,
                    sum(c.bytes for c in own) / packets if packets else 0.0,
                    float(len(own)),
                ),
            ))

    clusters: list[ActivityCluster] = []
    for activity in ActivityType:
        typed = [r for r in records if r.activity_type is activity]
        if not typed:
            continue
        if activity is ActivityType.SPAM:
            clusters.extend(_group_by_jaccard(typed, dest_jaccard))
            continue
        vectors = [r.features for r in typed]
        k_eff = min(k, max(1, len(typed) - 1), len(set(vectors)))
        result = kmeans(vectors, k_eff, seed=seed)
        for cluster_idx in range(k_eff):
            members = tuple(
                typed[i] for i, a in enumerate(result.assignments) if a == cluster_idx
            )
            if members:
                clusters.append(ActivityCluster(
                    activity_type=activity,
                    records=members,
                    hosts=frozenset(r.host for r in members),
                ))
    return tuple(sorted(clusters, key=lambda c: (c.activity_type.value, sorted(c.hosts))))


def _group_by_jaccard(
    records: Sequence[ActivityRecord], threshold: float
) -> list[ActivityCluster]:
    remaining = list(records)
    groups: list[list[ActivityRecord]] = []
    while remaining:
        seed_record = remaining.pop(0)
        group = [seed_record]
        changed = True
        while changed:
            changed = False
            for other in list(remaining):
                for member in group:
                    union = member.tokens | other.tokens
                    inter = member.tokens & other.tokens
                    score = len(inter) / len(union) if union else 1.0
                    if score >= threshold:
                        group.append(other)
                        remaining.remove(other)
                        changed = True
                        break
        groups.append(group)
    return [
        ActivityCluster(
            activity_type=ActivityType.SPAM,
            records=tuple(g),
            hosts=frozenset(r.host for r in g),
        )
        for g in groups
    ]


@dataclass(frozen=True)
class CorrelatedPair:
    command_index: int
    activity_index: int
    score: float
    reported: bool


def cross_correlate(
    command_clusters: Sequence, activity_clusters: Sequence, chi: float = 0.5
) -> tuple[CorrelatedPair, ...]:
    """Score every (command, activity) cluster pair by host-set overlap."""
    pairs = []
    for ci, command in enumerate(command_clusters):
        for ai, activity in enumerate(activity_clusters):
            union = command.hosts | activity.hosts
            inter = command.hosts & activity.hosts
            score = len(inter) / len(union) if union else 1.0
            pairs.append(CorrelatedPair(
                command_index=ci,
                activity_index=ai,
                score=score,
                reported=score >= chi,
            ))
    return tuple(pairs)


@dataclass(frozen=True)
class Evidence:
    stage: str
    hosts: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class Alert:
    hosts: tuple[str, ...]
    roles: dict[str, Role]
    attack_type: Category
    evidence: tuple[Evidence, ...]


@dataclass(frozen=True)
class Blacklist:
    ips: frozenset[str]
    soft: bool = True


@dataclass(frozen=True)
class AlertBundle:
    alerts: tuple[Alert, ...]
    signatures: tuple[BotSignature, ...]
    blacklist: Blacklist


_CATEGORY_PRIORITY = (Category.DDOS, Category.SPAM, Category.KEYLOGGING)
_ACTIVITY_CATEGORY = {
    ActivityType.DDOS: Category.DDOS,
    ActivityType.SPAM: Category.SPAM,
    ActivityType.PORT_SCAN: Category.DDOS,
    ActivityType.BINARY_DOWNLOAD: Category.DDOS,
}


def issue_alerts(
    triggers: Sequence[TriggerEvent],
    similarity: SimilarityResult,
    sync_groups: Sequence[SyncGroup],
    findings: GraphFindings,
    command_clusters: Sequence[CommandCluster],
    activity_clusters: Sequence[ActivityCluster],
    correlations: Sequence[CorrelatedPair],
    graph: TrafficGraph,
    host_series: Mapping[str, Series] | None = None,
    config: EngineConfig = EngineConfig(),
) -> AlertBundle:
    """Combine stage findings into alerts, signatures, and a soft blacklist.

    A host is alerted only when implicated by two independent stages; the
    dominant destination of alerted agents' traffic is attached as the victim
    without being alerted itself. Whitelisted hosts never appear.
    """
    whitelist = set(config.whitelist)
    host_series = host_series or {}

    def visible(hosts: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(set(hosts) - whitelist))

    items: list[Evidence] = []
    index = {h: i for i, h in enumerate(similarity.hosts)}
    for a, b in similarity.similar_pairs:
        hosts = visible((a, b))
        if hosts:
            d = similarity.matrix[index[a]][index[b]]
            items.append(Evidence(
                stage="dtw_similarity",
                hosts=hosts,
                detail=f"accumulated distance {d:.1f} <= theta {similarity.theta:.1f}",
            ))
    for label, candidates in (
        ("agent candidate", findings.agents),
        ("master candidate", findings.masters),
        ("attacker candidate", findings.attackers),
    ):
        for host in sorted(candidates):
            hosts = visible((host,))
            if hosts:
                items.append(Evidence(stage="graph_analysis", hosts=hosts, detail=label))
    for pair in correlations:
        if not pair.reported:
            continue
        overlap = (
            command_clusters[pair.command_index].hosts
            & activity_clusters[pair.activity_index].hosts
        )
        hosts = visible(overlap)
        if hosts:
            activity = activity_clusters[pair.activity_index].activity_type.value
            items.append(Evidence(
                stage="cross_correlation",
                hosts=hosts,
                detail=f"command/{activity} cluster overlap {pair.score:.2f}",
            ))
    for group in sync_groups:
        hosts = visible(group.hosts)
        if len(hosts) >= 2:
            items.append(Evidence(
                stage="synchronization",
                hosts=hosts,
                detail=f"{len(group.conversations)} conversations co-start",
            ))

    sources: dict[str, set[str]] = {}
    for item in items:
        for host in item.hosts:
            sources.setdefault(host, set()).add(item.stage)
    alerted = sorted(h for h, stages in sources.items() if len(stages) >= 2)

    parent = {h: h for h in alerted}

    def find(h: str) -> str:
        while parent[h] != h:
            parent[h] = parent[parent[h]]
            h = parent[h]
        return h

    for item in items:
        involved = [h for h in item.hosts if h in parent]
        for a, b in zip(involved, involved[1:]):
            parent[find(a)] = find(b)

    components: dict[str, list[str]] = {}
    for h in alerted:
        components.setdefault(find(h), []).append(h)

    def role_of(host: str) -> Role:
        if host in findings.attackers:
            return Role.ATTACKER
        if host in findings.masters:
            return Role.MASTER
        return Role.AGENT

    trigger_categories: dict[str, list[Category]] = {}
    for t in triggers:
        trigger_categories.setdefault(t.originator_ip, []).append(t.category)

    alerts = []
    victims_all: set[str] = set()
    for component in sorted(components.values(), key=min):
        roles = {h: role_of(h) for h in component}
        agent_hosts = [h for h, r in roles.items() if r is Role.AGENT]
        victim = _flood_victim(graph, agent_hosts, set(alerted) | whitelist, config.g_min_bytes)
        evidence = [e for e in items if set(e.hosts) & set(component)]
        hosts = sorted(component)
        if victim is not None:
            victims_all.add(victim)
            roles[victim] = Role.VICTIM
            hosts = sorted(component + [victim])
            received = sum(
                edge.bytes
                for (src, dst), edge in graph.edges.items()
                if dst == victim and src in agent_hosts
            )
            evidence.append(Evidence(
                stage="flood_target",
                hosts=(victim,),
                detail=f"receives {received} bytes from flagged agents",
            ))
        categories = [
            c
            for h in component
            for c in trigger_categories.get(h, ())
        ]
        attack_type = next(
            (c for c in _CATEGORY_PRIORITY if c in categories), None
        )
        if attack_type is None:
            cluster_types = [
                cluster.activity_type
                for cluster in activity_clusters
                if cluster.hosts & set(component)
            ]
            attack_type = next(
                (
                    _ACTIVITY_CATEGORY[t]
                    for t in (ActivityType.DDOS, ActivityType.SPAM,
                              ActivityType.PORT_SCAN, ActivityType.BINARY_DOWNLOAD)
                    if t in cluster_types
                ),
                Category.NONE,
            )
        ordered = tuple(sorted(evidence, key=lambda e: (e.stage, e.hosts, e.detail)))
        alerts.append(Alert(
            hosts=tuple(hosts), roles=roles, attack_type=attack_type, evidence=ordered,
        ))

    signatures = _build_signatures(triggers, alerted, host_series)
    blacklist_ips = {
        h
        for alert in alerts
        for h, role in alert.roles.items()
        if role is not Role.VICTIM and not _is_internal(h, config.internal_networks)
    }
    for pair in correlations:
        if pair.reported:
            for endpoint in command_clusters[pair.command_index].endpoints:
                blacklist_ips.add(endpoint.rsplit(":", 1)[0])
    blacklist_ips -= victims_all | whitelist
    return AlertBundle(
        alerts=tuple(alerts),
        signatures=signatures,
        blacklist=Blacklist(ips=frozenset(blacklist_ips)),
    )


def _flood_victim(
    graph: TrafficGraph,
    agent_hosts: Sequence[str],
    excluded: set[str],
    min_bytes: int,
) -> str | None:
    received: dict[str, int] = {}
    for (src, dst), edge in graph.edges.items():
        if src in agent_hosts and dst not in excluded and dst not in agent_hosts:
            received[dst] = received.get(dst, 0) + edge.bytes
    if not received:
        return None
    victim, total = max(received.items(), key=lambda kv: (kv[1], kv[0]))
    return victim if total >= min_bytes else None


def _build_signatures(
    triggers: Sequence[TriggerEvent],
    alerted: Sequence[str],
    host_series: Mapping[str, Series],
) -> tuple[BotSignature, ...]:
    alerted_set = set(alerted)
    relevant = [t for t in triggers if t.originator_ip in alerted_set]
    signatures = []
    for category in sorted({t.category for t in relevant}, key=lambda c: c.value):
        owners = sorted(
            (t for t in relevant if t.category is category),
            key=lambda t: (t.originator_ip, t.process_id),
        )
        profiled = next((t for t in owners if t.api_profile is not None), None)
        if profiled is not None:
            signatures.append(BotSignature(category=category, api_profile=profiled.api_profile))
            continue
        with_series = next((t for t in owners if t.originator_ip in host_series), None)
        if with_series is not None:
            signatures.append(BotSignature(
                category=category,
                traffic_profile=tuple(host_series[with_series.originator_ip].points),
            ))
    return tuple(signatures)


@dataclass(frozen=True)
class NetworkResult:
    suspect_flows: tuple[Conversation, ...]
    typed_flows: tuple[Conversation, ...]
    port_partition: PortPartition
    response_clusters: ResponseTimeResult
    sync_groups: tuple[SyncGroup, ...]
    host_series: dict[str, Series]
    similarity: SimilarityResult
    graph: TrafficGraph
    graph_findings: GraphFindings
    command_clusters: tuple[CommandCluster, ...]
    activity_clusters: tuple[ActivityCluster, ...]
    correlations: tuple[CorrelatedPair, ...]
    alerts: tuple[Alert, ...]
    signatures: tuple[BotSignature, ...]
    blacklist: Blacklist


def run_network(
    captures: Sequence[HostCapture],
    conversations: Sequence[Conversation],
    triggers: Sequence[TriggerEvent],
    config: EngineConfig = EngineConfig(),
    *,
    interval: int | None = None,
    jobs: int = 1,
) -> NetworkResult:
    """Full pipeline: funnel the corpus down to suspect hosts, then look for
    coordination among them and issue alerts."""
    suspects = select_suspect_flows(triggers, conversations)
    typed = filter_packet_type(suspects)
    partition = filter_ports(
        typed,
        config.bot_ports,
        enable_nonstandard=True,
        fanout_min=config.fanout_min,
        ppf_max=config.irc_ppf_max,
        bpp_max=config.irc_bpp_max,
        duration_min_s=config.irc_duration_min_s,
    )
    response = cluster_response_times(
        partition.combined(), separation_min=config.rt_separation_min
    )
    member_hosts = sorted(
        {c.src.ip_address for c in response.passed}
        | {c.dst.ip_address for c in response.passed}
    )
    member_flows = tuple(c for c in typed if c.src.ip_address in member_hosts)
    sync_groups = filter_synchronization(member_flows, config.sync_window_ms)

    host_series: dict[str, Series] = {}
    for host in member_hosts:
        bins = outgoing_packet_bins(member_flows, host, config.dtw_step_seconds)
        if bins and sum(bins) >= config.dtw_min_packets:
            host_series[host] = Series(bins, config.dtw_step_seconds)
    similarity = dtw_similarity_matrix(
        host_series,
        theta_floor=config.theta_floor,
        theta_factor=config.theta_factor,
        jobs=jobs,
    )

    graph = build_traffic_graph(
        captures,
        interval=interval,
        conversations=conversations,
        command_keywords=config.command_keywords,
    )
    findings = analyze_graph(graph, ratio_min=config.g_ratio, min_bytes=config.g_min_bytes)
    command_clusters = cluster_command_plane(
        typed,
        legit_servers=config.legit_servers,
        k=config.k_command,
        internal_networks=config.internal_networks,
    )
    activity_clusters = cluster_activity_plane(
        typed,
        captures,
        scan_ports_min=config.scan_ports_min,
        scan_established_max=config.scan_established_max,
        flood_pps=config.r_flood_pps,
        download_markers=config.download_markers,
        dest_jaccard=config.spam_dest_jaccard,
        k=config.k_activity,
    )
    correlations = cross_correlate(command_clusters, activity_clusters, config.chi)
    bundle = issue_alerts(
        triggers=triggers,
        similarity=similarity,
        sync_groups=sync_groups,
        findings=findings,
        command_clusters=command_clusters,
        activity_clusters=activity_clusters,
        correlations=correlations,
        graph=graph,
        host_series=host_series,
        config=config,
    )
    return NetworkResult(
        suspect_flows=suspects,
        typed_flows=typed,
        port_partition=partition,
        response_clusters=response,
        sync_groups=sync_groups,
        host_series=host_series,
        similarity=similarity,
        graph=graph,
        graph_findings=findings,
        command_clusters=command_clusters,
        activity_clusters=activity_clusters,
        correlations=correlations,
        alerts=bundle.alerts,
        signatures=bundle.signatures,
        blacklist=bundle.blacklist,
    )


def export_dot(graph: TrafficGraph) -> str:
    """DOT rendering: edge labels carry byte weights, command edges stand out."""
    lines = ["digraph traffic {"]
    for node in sorted(graph.nodes):
        lines.append(f'  "{node}";')
    for (src, dst), edge in sorted(graph.edges.items()):
        style = ' color="red" penwidth=2' if edge.carries_bot_commands else ""
        lines.append(f'  "{src}" -> "{dst}" [label="{edge.bytes}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _alert_to_dict(alert: Alert) -> dict:
    return {
        "hosts": list(alert.hosts),
        "roles": {h: r.value for h, r in sorted(alert.roles.items())},
        "attack_type": alert.attack_type.value,
        "evidence": [
            {"stage": e.stage, "hosts": list(e.hosts), "detail": e.detail}
            for e in alert.evidence
        ],
    }


def _signature_to_dict(sig: BotSignature) -> dict:
    return {
        "category": sig.category.value,
        "api_profile": list(sig.api_profile) if sig.api_profile is not None else None,
        "traffic_profile": (
            list(sig.traffic_profile) if sig.traffic_profile is not None else None
        ),
        "version": sig.version,
    }


def network_document(result: NetworkResult) -> dict:
    """Serializable summary of a full network run."""
    return {
        "alerts": [_alert_to_dict(a) for a in result.alerts],
        "signatures": [_signature_to_dict(s) for s in result.signatures],
        "blacklist": {"ips": sorted(result.blacklist.ips), "soft": result.blacklist.soft},
        "similar_pairs": [list(p) for p in result.similarity.similar_pairs],
        "theta": result.similarity.theta,
        "graph": {
            "interval": result.graph.interval,
            "agents": sorted(result.graph_findings.agents),
            "masters": sorted(result.graph_findings.masters),
            "attackers": sorted(result.graph_findings.attackers),
        },
        "correlations": [
            {
                "command": p.command_index,
                "activity": p.activity_index,
                "score": p.score,
                "reported": p.reported,
            }
            for p in result.correlations
        ],
        "sync_groups": [
            {"hosts": sorted(g.hosts), "conversations": len(g.conversations)}
            for g in result.sync_groups
        ],
    }


def write_network_outputs(result: NetworkResult, out_dir) -> None:
    """Write alerts.json, signatures.json, blacklist.json, and graph.dot."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = network_document(result)
    (out / "alerts.json").write_text(
        json.dumps({"alerts": doc["alerts"]}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    (out / "signatures.json").write_text(
        json.dumps({"signatures": doc["signatures"]}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    (out / "blacklist.json").write_text(
        json.dumps(doc["blacklist"], indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    (out / "graph.dot").write_text(export_dot(result.graph), encoding="utf-8")
