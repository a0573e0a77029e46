"""Scheduling decision engine for multipath tunnels.

Pure, simulator-agnostic logic: a flow table keyed by 5-tuple, the
flow-aware candidate computation, the weighted-fill adaptive selection,
and a round-robin baseline. All timestamps are integer nanoseconds;
weighted fills are floating-point seconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

NS_PER_SEC = 1_000_000_000

#: SRTT assumed for a subtunnel before its transport has any RTT sample.
INITIAL_SRTT_NS = 100 * 1_000_000

#: Flow-table entries idle longer than this are eligible for eviction.
DEFAULT_IDLE_TIMEOUT_NS = 60 * NS_PER_SEC


@dataclass(frozen=True, slots=True)
class FlowId:
    """5-tuple identity of a transport-layer flow.

    Protocols without ports use zero for both port fields.
    """

    src_addr: str
    dst_addr: str
    protocol: int
    src_port: int
    dst_port: int

    def reversed(self) -> "FlowId":
        """The same association seen from the opposite direction."""
        return FlowId(self.dst_addr, self.src_addr, self.protocol,
                      self.dst_port, self.src_port)


@dataclass(slots=True)
class FlowTableEntry:
    last_subtunnel: int
    last_sent: int  # ns


@dataclass(slots=True)
class SubtunnelStats:
    """Live transport state of one subtunnel, sampled at decision time."""

    srtt: float  # ns
    cwnd: float  # bytes
    fill: int    # bytes queued or unacknowledged in the send buffer


@dataclass(slots=True)
class SchedDecision:
    chosen: int
    applicable: list[int]
    weighted_fills: list[float]  # seconds, aligned with `applicable`


class FlowTable:
    """Maps FlowId -> (last subtunnel, last-sent timestamp)."""

    def __init__(self) -> None:
        self._entries: dict[FlowId, FlowTableEntry] = {}

    def lookup(self, flow_id: FlowId) -> FlowTableEntry | None:
        return self._entries.get(flow_id)

    def update(self, flow_id: FlowId, subtunnel: int, now: int) -> None:
        entry = self._entries.get(flow_id)
        if entry is None:
            self._entries[flow_id] = FlowTableEntry(subtunnel, now)
        else:
            if now < entry.last_sent:
                raise ValueError("last_sent may not decrease")
            entry.last_subtunnel = subtunnel
            entry.last_sent = now

    def items(self) -> Iterator[tuple[FlowId, FlowTableEntry]]:
        return iter(self._entries.items())

    def remove(self, flow_id: FlowId) -> None:
        del self._entries[flow_id]

    def __contains__(self, flow_id: FlowId) -> bool:
        return flow_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)


def flow_id_of(packet) -> FlowId:
    """Flow identity of a simulated packet (pure function of its 5-tuple)."""
    return packet.flow


def applicable_subtunnels(entry: FlowTableEntry,
                          stats: Sequence[SubtunnelStats],
                          now: int) -> list[int]:
    """Subtunnels this flow may use without predicted reordering.

    The subtunnel the flow last used is always applicable and heads the
    list. Any other subtunnel i qualifies when a packet sent on it now is
    predicted to arrive after the flow's previous packet, i.e. when
    stats[i].srtt + delta > stats[last].srtt with delta the idle gap since
    the flow's last packet. Equality keeps the subtunnel out (strict
    inequality: a predicted simultaneous arrival is not safe).
    """
    last = entry.last_subtunnel
    if not 0 <= last < len(stats):
        raise ValueError(f"last_subtunnel {last} out of range for {len(stats)} subtunnels")
    if now < entry.last_sent:
        raise ValueError("now precedes the flow's last-sent timestamp")
    delta = now - entry.last_sent
    threshold = stats[last].srtt
    result = [last]
    for i, s in enumerate(stats):
        if i != last and s.srtt + delta > threshold:
            result.append(i)
    return result


def select_adaptively(candidates: Sequence[int],
                      stats: Sequence[SubtunnelStats],
                      packet_size: int) -> SchedDecision:
    """Pick the candidate with the smallest weighted fill.

    weighted_fill(i) = (fill_i + packet_size) * srtt_i / cwnd_i, in
    seconds: the time subtunnel i would need to drain its backlog plus
    this packet at its current estimated rate cwnd/srtt. Ties go to the
    lowest subtunnel index.
    """
    if not candidates:
        raise ValueError("empty candidate list")
    fills: list[float] = []
    chosen = -1
    best = float("inf")
    for i in candidates:
        s = stats[i]
        wf = (s.fill + packet_size) * s.srtt / s.cwnd / NS_PER_SEC
        fills.append(wf)
        if wf < best or (wf == best and i < chosen):
            best = wf
            chosen = i
    return SchedDecision(chosen, list(candidates), fills)


def afmt_schedule(packet, flow_table: FlowTable,
                  stats: Sequence[SubtunnelStats], now: int) -> SchedDecision:
    """Full scheduling step for one packet.

    Known flows choose among their applicable subtunnels; unknown flows
    choose among all subtunnels. Either way the flow table ends up
    mapping the packet's flow to the chosen subtunnel at time `now`.
    """
    flow_id = flow_id_of(packet)
    entry = flow_table.lookup(flow_id)
    if entry is not None:
        candidates: Sequence[int] = applicable_subtunnels(entry, stats, now)
    else:
        candidates = range(len(stats))
    decision = select_adaptively(candidates, stats, packet.size)
    flow_table.update(flow_id, decision.chosen, now)
    return decision


@dataclass(slots=True)
class RoundRobinState:
    cursor: int = 0


def rr_schedule(packet, state: RoundRobinState, n_subtunnels: int) -> int:
    """Baseline: strict rotation, blind to flow identity and path state."""
    if n_subtunnels < 1:
        raise ValueError("need at least one subtunnel")
    chosen = state.cursor % n_subtunnels
    state.cursor = (chosen + 1) % n_subtunnels
    return chosen


def flow_table_evict(flow_table: FlowTable, now: int, idle_timeout: int) -> int:
    """Drop entries idle for strictly longer than `idle_timeout`."""
    if idle_timeout <= 0:
        raise ValueError("idle_timeout must be positive")
    stale = [fid for fid, e in flow_table.items() if now - e.last_sent > idle_timeout]
    for fid in stale:
        flow_table.remove(fid)
    return len(stale)
