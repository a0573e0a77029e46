"""Deterministic reordering harness.

Models subtunnels as pure delay lines with fixed one-way delays and runs
a single flow's packet sequence through a scheduler: no queues, no loss,
no feedback. The count of out-of-order deliveries isolates the
scheduling policy's reordering behaviour from everything else. Each
subtunnel's advertised SRTT is twice its one-way delay (a symmetric
round trip), which is what the flow-aware predicate consumes.
"""

from __future__ import annotations

from typing import Sequence

from .netsim import Packet
from .sched import (FlowId, FlowTable, RoundRobinState, SubtunnelStats,
                    afmt_schedule, rr_schedule)

_FLOW = FlowId("h0", "h1", 6, 1000, 2000)
_CWND = 10 * 1448


def run_reorder_harness(scheduler: str, one_way_delays_ns: Sequence[int],
                        gaps_ns: Sequence[int], packet_size: int = 1500) -> int:
    """Count reordered deliveries for one flow over fixed-delay subtunnels.

    `gaps_ns[i]` is the send gap before packet i (the first packet goes
    at t = gaps_ns[0]). Returns the number of deliveries whose emission
    index is lower than one already delivered; simultaneous arrivals
    count as in order.
    """
    if scheduler not in ("afmt", "rr"):
        raise ValueError(f"unknown scheduler {scheduler!r}")
    delays = list(one_way_delays_ns)
    stats = [SubtunnelStats(srtt=2.0 * d, cwnd=_CWND, fill=0) for d in delays]
    table = FlowTable()
    rr_state = RoundRobinState()

    arrivals: list[tuple[int, int]] = []
    now = 0
    for i, gap in enumerate(gaps_ns):
        now += gap
        pkt = Packet(size=packet_size, flow=_FLOW, seq=i, created_at=now)
        if scheduler == "afmt":
            chosen = afmt_schedule(pkt, table, stats, now).chosen
        else:
            chosen = rr_schedule(pkt, rr_state, len(delays))
        arrivals.append((now + delays[chosen], i))

    reordered = 0
    max_seen = -1
    for _, emission in sorted(arrivals):
        if emission < max_seen:
            reordered += 1
        else:
            max_seen = emission
    return reordered
