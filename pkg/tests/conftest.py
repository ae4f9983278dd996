"""Shared test data: reference packet-rate traces with known warped distances.

The two agent traces are packets-per-step samples (5 s steps) from coordinated
flood hosts; the benign trace is a quiet host. Reference distances for these
traces: agent A vs agent B accumulates to about 8729, agent A vs benign to
about 30689 (both within 1%).
"""

import pytest

AGENT_TRACE_A = (
    123, 2387, 2265, 2465, 2409, 2057, 257, 1334, 511, 2343,
    2426, 2489, 2412, 1324, 784, 1213, 2334, 213, 734, 755,
)

AGENT_TRACE_B = (
    130, 153, 514, 2414, 2389, 2337, 2214, 2034, 1807, 1753,
    1764, 2419, 2309, 2409, 2411, 2216, 2367, 2354, 1302, 456,
    2456, 1215, 1347, 1385, 124,
)

BENIGN_TRACE = (
    11, 33, 25, 27, 103, 123, 124, 29, 63, 9, 52, 51, 53, 48, 23, 35, 33,
)

AB_REFERENCE = 8729.0
A_BENIGN_REFERENCE = 30689.0


@pytest.fixture
def flood_traces():
    return AGENT_TRACE_A, AGENT_TRACE_B, BENIGN_TRACE
