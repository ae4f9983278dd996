"""Request bodies for the HTTP service.

Corpus payloads travel as JSONL text in the same format the files use, so
the service parses them with the same readers and error messages keep their
line numbers. Trigger rows mirror the trigger file schema.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class DtwRequest(BaseModel):
    series_a: list[float]
    series_b: list[float]
    include_path: bool = False


class SynthRequest(BaseModel):
    scenario: str
    seed: int = 7
    n_agents: int | None = None


class StandaloneRequest(BaseModel):
    captures_jsonl: str
    conversations_jsonl: str
    events_jsonl: str | None = None


class TriggerIn(BaseModel):
    originator_ip: str
    process_id: str
    inbound_ports: list[int] = Field(default_factory=list)
    outbound_ports: list[int] = Field(default_factory=list)
    peer_ips: list[str] = Field(default_factory=list)
    category: str
    suspicion_value: float
    api_profile: list[float] | None = None


class TriggerBatch(BaseModel):
    triggers: list[TriggerIn]


class NetworkRequest(BaseModel):
    captures_jsonl: str
    conversations_jsonl: str
    # None means "use the service's trigger inbox"; an explicit list (possibly
    # empty) overrides it for just this call.
    triggers: list[TriggerIn] | None = None
    interval: int | None = None
