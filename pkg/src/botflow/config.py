"""Engine configuration: every tunable constant in one frozen object.

Defaults are calibrated so the bundled synthetic scenarios separate cleanly:
each attack profile scores well above the suspicion threshold while the
normal-traffic host stays far below it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

PARAMETER_NAMES = (
    "response_time",
    "ip_blacklist",
    "traffic_pattern",
    "ports",
    "connection_attempts",
    "active_connections",
    "oi_ratio",
)


def _uniform_weights() -> dict[str, float]:
    return {name: 1.0 / len(PARAMETER_NAMES) for name in PARAMETER_NAMES}


@dataclass(frozen=True)
class EngineConfig:
    # Stand-alone engine
    weights: dict[str, float] = field(default_factory=_uniform_weights)
    suspicion_threshold: float = 0.30
    tau_ms: float = 500.0
    f_max_fails_per_min: float = 30.0
    a_max_peers: int = 50
    r_lo: float = 0.2
    r_hi: float = 5.0
    n_rep: int = 20
    p_peak: float = 10.0
    r_flood_pps: float = 500.0
    w_ref: int = 5105184
    port_score_floor: float = 0.25
    bot_ports: frozenset[int] = frozenset({6667, 6668, 7000, 27444, 27665, 31335})
    ping_of_death_bpp: float = 65500.0
    syn_min: int = 100
    keylogger_window_ms: int = 1000
    keylogger_rho_min: float = 0.8
    keylogger_min_windows: int = 5
    spam_marker_fraction: float = 0.5
    spam_jaccard_min: float = 0.7
    signature_cosine_min: float = 0.9
    spam_markers: tuple[str, ...] = ("viagra", "lottery", "winner", "pills", "claim-prize")

    # Network engine
    fanout_min: int = 10
    irc_ppf_max: float = 10.0
    irc_bpp_max: float = 300.0
    irc_duration_min_s: float = 60.0
    rt_separation_min: float = 3.0
    sync_window_ms: int = 5000
    dtw_step_seconds: float = 5.0
    dtw_min_packets: float = 1000.0
    theta_floor: float = 1000.0
    theta_factor: float = 3.0
    g_ratio: float = 10.0
    g_min_bytes: int = 100000
    k_command: int = 4
    k_activity: int = 2
    chi: float = 0.5
    scan_ports_min: int = 20
    scan_established_max: float = 0.2
    spam_dest_jaccard: float = 0.5
    download_markers: tuple[str, ...] = ("download", "exe", "bin", "payload")
    command_keywords: tuple[str, ...] = ("aaa", "png", "d1e", "mdie", "mdos", "mtimer")
    internal_networks: tuple[str, ...] = ("192.168.0.0/16",)
    legit_servers: frozenset[str] = frozenset()
    blacklist: frozenset[str] = frozenset()
    whitelist: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if set(self.weights) != set(PARAMETER_NAMES):
            raise ValueError(f"weights must cover exactly {PARAMETER_NAMES}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be non-negative")
        if abs(sum(self.weights.values()) - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")
        if not 0 <= self.suspicion_threshold <= 1:
            raise ValueError("suspicion_threshold must lie in [0, 1]")
        if self.r_lo <= 0 or self.r_hi <= self.r_lo:
            raise ValueError("need 0 < r_lo < r_hi")


_SET_FIELDS = {"bot_ports", "legit_servers", "blacklist", "whitelist"}
_TUPLE_FIELDS = {"spam_markers", "download_markers", "command_keywords", "internal_networks"}
_PATH_KEYS = {"blacklist_path": "blacklist", "whitelist_path": "whitelist"}


def load_config(path) -> EngineConfig:
    """Read a JSON config file; unknown keys are rejected.

    blacklist_path / whitelist_path point at plain-text files with one IP per
    line and are merged into the corresponding sets.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    known = {f.name for f in fields(EngineConfig)}
    unknown = set(raw) - known - set(_PATH_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    kwargs = {}
    for key, value in raw.items():
        if key in _PATH_KEYS:
            continue
        if key in _SET_FIELDS:
            value = frozenset(value)
        elif key in _TUPLE_FIELDS:
            value = tuple(value)
        kwargs[key] = value
    config = EngineConfig(**kwargs)

    for path_key, target in _PATH_KEYS.items():
        if path_key in raw:
            listed = Path(raw[path_key])
            if not listed.is_absolute():
                listed = Path(path).parent / listed
            entries = frozenset(
                line.strip() for line in listed.read_text(encoding="utf-8").splitlines() if line.strip()
            )
            config = replace(config, **{target: getattr(config, target) | entries})
    return config
