"""Acceptance gate: ten criteria, one test and one pass/fail line each.

Every numeric target carries its tolerance inline, and timed criteria assert
their budget. The oracles used here (exhaustive path enumeration, exhaustive
partition search) are implemented in this file so the gate stands on its own
rather than leaning on the unit suites.

Run with `pytest tests/test_acceptance.py -v` for the per-criterion lines.
"""

import functools
import itertools
import json
import math
import random
import subprocess
import sys
import time

from conftest import AGENT_TRACE_A, AGENT_TRACE_B, BENIGN_TRACE

from botflow.analytics import dtw_distance, kmeans, spearman_rho
from botflow.config import EngineConfig
from botflow.flow_model import udp_work_weight
from botflow.network import Role, run_network
from botflow.standalone import Category, confirm_keylogger, run_standalone
from botflow.synth import generate

CONFIG = EngineConfig()


def hosts_with_role(corpus, role):
    return sorted(ip for ip, r in corpus.labels["hosts"].items() if r == role)


# Exhaustive oracle: every monotone alignment path, diagonal steps weighted
# double, endpoints forced to the corners. The dynamic program must agree.


@functools.lru_cache(maxsize=None)
def all_monotone_paths(n, m):
    if n == 1 and m == 1:
        return (((1, 1),),)
    paths = []
    if n > 1:
        paths += [p + ((n, m),) for p in all_monotone_paths(n - 1, m)]
    if m > 1:
        paths += [p + ((n, m),) for p in all_monotone_paths(n, m - 1)]
    if n > 1 and m > 1:
        paths += [p + ((n, m),) for p in all_monotone_paths(n - 1, m - 1)]
    return tuple(paths)


def oracle_accumulated(a, b):
    best = None
    for path in all_monotone_paths(len(a), len(b)):
        cost = 2 * abs(a[0] - b[0])
        for (pi, pj), (i, j) in zip(path, path[1:]):
            weight = 2 if (i > pi and j > pj) else 1
            cost += weight * abs(a[i - 1] - b[j - 1])
        if best is None or cost < best:
            best = cost
    return best


def close(x, y):
    return math.isclose(x, y, rel_tol=1e-9, abs_tol=1e-9)


def test_criterion_01_dtw_golden_values():
    # Reference traces: agent pair -> 8729, agent/benign -> 30689, each
    # within 1 percent (boundary-convention slack), each under 100 ms.
    start = time.perf_counter()
    near = dtw_distance(AGENT_TRACE_A, AGENT_TRACE_B)
    near_elapsed = time.perf_counter() - start

    start = time.perf_counter()
    far = dtw_distance(AGENT_TRACE_A, BENIGN_TRACE)
    far_elapsed = time.perf_counter() - start

    assert abs(near.accumulated - 8729.0) <= 0.01 * 8729.0
    assert abs(far.accumulated - 30689.0) <= 0.01 * 30689.0
    assert near_elapsed < 0.1
    assert far_elapsed < 0.1


def test_criterion_02_udp_work_weight_exact():
    assert udp_work_weight(2649, 561, 1927) == 5105184


def test_criterion_03_dtw_matches_exhaustive_oracle():
    # Every ordered pair of integer series with lengths 1..4 over {0, 1, 2}:
    # the DP must equal the enumerated minimum exactly, all under 10 s.
    start = time.perf_counter()
    series = [
        seq
        for length in (1, 2, 3, 4)
        for seq in itertools.product((0, 1, 2), repeat=length)
    ]
    for a, b in itertools.product(series, repeat=2):
        assert dtw_distance(a, b).accumulated == oracle_accumulated(a, b)
    assert time.perf_counter() - start < 10.0


def test_criterion_04_dtw_metric_properties():
    rng = random.Random(4)
    for _ in range(200):
        a = [rng.uniform(0.0, 100.0) for _ in range(rng.randint(1, 50))]
        b = [rng.uniform(0.0, 100.0) for _ in range(rng.randint(1, 50))]
        forward = dtw_distance(a, b)
        backward = dtw_distance(b, a)
        assert forward.accumulated >= 0.0
        assert close(forward.accumulated, backward.accumulated)
        assert dtw_distance(a, a).accumulated == 0.0
        assert dtw_distance(b, b).distance == 0.0

        c = rng.uniform(0.1, 10.0)
        scaled = dtw_distance([c * v for v in a], [c * v for v in b])
        assert close(scaled.accumulated, c * forward.accumulated)
        assert close(scaled.distance, c * forward.distance)


def test_criterion_05_spearman_hand_case_and_monotone_invariance():
    assert spearman_rho([1, 2, 3, 4], [2, 1, 4, 3]).rho == 0.6

    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(3, 40)
        x = [rng.uniform(0.1, 100.0) for _ in range(n)]
        y = [rng.uniform(-50.0, 50.0) for _ in range(n)]
        base = spearman_rho(x, y).rho
        assert -1.0 <= base <= 1.0
        # Strictly monotone transforms preserve ranks, hence rho, exactly.
        assert spearman_rho([v**3 for v in x], y).rho == base
        assert spearman_rho(x, [3.0 * v + 7.0 for v in y]).rho == base


def test_criterion_06_kmeans_sse_monotone_and_partition_optimum():
    for seed in range(100):
        rng = random.Random(seed)
        points = [rng.uniform(0.0, 100.0) for _ in range(rng.randint(5, 25))]
        history = kmeans(points, rng.randint(1, 4), seed=seed).sse_history
        assert history
        assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))

    # Response-time example: the best of all 2-partitions is the slow/fast
    # split, and the solver must land exactly on its SSE.
    points = (190.0, 200.0, 210.0, 4800.0, 5000.0)
    best = math.inf
    for labels in itertools.product((0, 1), repeat=len(points)):
        if len(set(labels)) < 2:
            continue
        sse = 0.0
        for cluster in (0, 1):
            members = [p for p, l in zip(points, labels) if l == cluster]
            mean = sum(members) / len(members)
            sse += sum((p - mean) ** 2 for p in members)
        best = min(best, sse)

    result = kmeans(points, 2, seed=0)
    assert result.sse == best
    assert len({result.assignments[0], result.assignments[1], result.assignments[2]}) == 1
    assert result.assignments[3] == result.assignments[4]
    assert result.assignments[0] != result.assignments[3]
    assert sorted(c[0] for c in result.centroids) == [200.0, 4900.0]


def test_criterion_07_udp_flood_end_to_end():
    start = time.perf_counter()

    flood = generate("udp_flood", seed=7)
    agents = hosts_with_role(flood, "DDOS_AGENT")
    master = hosts_with_role(flood, "DDOS_MASTER")[0]
    normal = hosts_with_role(flood, "NORMAL")[0]

    _, triggers = run_standalone(
        flood.captures, flood.conversations, flood.event_logs, CONFIG
    )
    assert sorted(t.originator_ip for t in triggers) == agents
    assert all(t.category is Category.DDOS for t in triggers)

    result = run_network(flood.captures, flood.conversations, triggers, CONFIG)
    assert any(set(pair) == set(agents) for pair in result.similarity.similar_pairs)
    assert normal not in result.similarity.hosts
    assert len(result.alerts) == 1
    roles = result.alerts[0].roles
    assert all(roles[agent] is Role.AGENT for agent in agents)
    assert roles[master] is Role.MASTER

    quiet = generate("normal", seed=7)
    _, quiet_triggers = run_standalone(
        quiet.captures, quiet.conversations, quiet.event_logs, CONFIG
    )
    assert quiet_triggers == ()
    quiet_result = run_network(
        quiet.captures, quiet.conversations, quiet_triggers, CONFIG
    )
    assert quiet_result.alerts == ()

    assert time.perf_counter() - start < 30.0


def test_criterion_08_irc_bot_response_time():
    irc = generate("irc_bot", seed=7)
    bots = hosts_with_role(irc, "IRC_BOT")
    human = hosts_with_role(irc, "NORMAL")[0]

    reports, triggers = run_standalone(
        irc.captures, irc.conversations, irc.event_logs, CONFIG
    )
    for bot in bots:
        capture = next(c for c in irc.captures if c.host == bot)
        assert 200.0 <= capture.mean_response_time_ms() <= 240.0
        report = next(r for r in reports if r.host == bot)
        assert report.parameter_scores["response_time"] >= 0.5
    assert set(bots) <= {t.originator_ip for t in triggers}

    human_capture = next(c for c in irc.captures if c.host == human)
    assert human_capture.mean_response_time_ms() >= 2000.0
    human_report = next(r for r in reports if r.host == human)
    assert human_report.parameter_scores["response_time"] == 0.0


def test_criterion_09_keylogger_correlation():
    keylog = generate("keylogger", seed=7)
    infected = hosts_with_role(keylog, "KEYLOGGER")[0]
    clean = hosts_with_role(keylog, "NORMAL")[0]

    (lockstep,) = [ev for (host, _), ev in keylog.event_logs.items() if host == infected]
    finding = confirm_keylogger(lockstep)
    assert finding.confirmed is True
    assert finding.keyboard_file.rho == 1.0
    assert finding.keyboard_comm.rho == 1.0

    (independent,) = [ev for (host, _), ev in keylog.event_logs.items() if host == clean]
    assert confirm_keylogger(independent).confirmed is False


def test_criterion_10_byte_identical_determinism(tmp_path):
    # Two full corpus -> standalone -> network runs, same seed and config,
    # different worker counts: trigger, alert, and DOT outputs must be
    # byte-identical.
    def pipeline(root, jobs):
        corpus = root / "corpus"
        scored = root / "scored"
        analyzed = root / "analyzed"
        steps = [
            ["synth", "--scenario", "udp_flood", "--seed", "7", "--out", str(corpus)],
            [
                "standalone",
                "--flows", str(corpus / "captures.jsonl"),
                "--conversations", str(corpus / "conversations.jsonl"),
                "--events", str(corpus / "events.jsonl"),
                "--out", str(scored),
            ],
            [
                "netanalyze",
                "--flows", str(corpus / "captures.jsonl"),
                "--conversations", str(corpus / "conversations.jsonl"),
                "--triggers", str(scored / "triggers.jsonl"),
                "--jobs", str(jobs),
                "--out", str(analyzed),
            ],
        ]
        for step in steps:
            done = subprocess.run(
                [sys.executable, "-m", "botflow.cli", *step],
                capture_output=True,
                text=True,
            )
            assert done.returncode == 0, done.stderr
        return {
            "triggers": (scored / "triggers.jsonl").read_bytes(),
            "alerts": (analyzed / "alerts.json").read_bytes(),
            "dot": (analyzed / "graph.dot").read_bytes(),
        }

    first = pipeline(tmp_path / "first", jobs=1)
    second = pipeline(tmp_path / "second", jobs=4)
    assert first["triggers"] == second["triggers"]
    assert first["alerts"] == second["alerts"]
    assert first["dot"] == second["dot"]

    parsed = json.loads(first["alerts"].decode("utf-8"))
    assert len(parsed["alerts"]) == 1
