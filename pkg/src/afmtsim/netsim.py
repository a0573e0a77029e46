"""Deterministic discrete-event network core.

Time is integer nanoseconds. Events at equal times run in insertion
order, so identical call sequences replay identically. Links model
serialization at the configured data rate, a fixed propagation delay,
and a drop-tail queue in packets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import partial
from heapq import heappop, heappush
from typing import Callable

from .sched import FlowId

US = 1_000
MS = 1_000_000
SECOND = 1_000_000_000


class SimulationError(Exception):
    pass


class Engine:
    """Event loop: a time-ordered heap of zero-argument callbacks."""

    __slots__ = ("now", "_heap", "_seq")

    def __init__(self) -> None:
        self.now = 0
        self._heap: list[tuple[int, int, Callable[[], None]]] = []
        self._seq = 0

    def schedule_at(self, time: int, action: Callable[[], None]) -> None:
        if time < self.now:
            raise SimulationError(f"schedule_at({time}) is in the past (now={self.now})")
        heappush(self._heap, (time, self._seq, action))
        self._seq += 1

    def schedule_after(self, delay: int, action: Callable[[], None]) -> None:
        self.schedule_at(self.now + delay, action)

    def run_until(self, horizon: int) -> None:
        """Execute every event with time <= horizon."""
        heap = self._heap
        while heap and heap[0][0] <= horizon:
            time, _, action = heappop(heap)
            self.now = time
            action()
        if horizon > self.now:
            self.now = horizon

    def pending(self) -> int:
        return len(self._heap)


@dataclass(slots=True)
class LinkConfig:
    data_rate: int            # bits/second
    propagation_delay: int    # ns
    queue_capacity: int = 100  # packets

    def __post_init__(self) -> None:
        if self.data_rate <= 0:
            raise ValueError("data_rate must be positive")
        if self.queue_capacity < 1:
            raise ValueError("queue_capacity must be at least 1")


@dataclass(slots=True)
class Packet:
    """A simulated datagram; `size` is the on-wire byte count.

    The kind-specific fields double up across packet types: payload TCP
    uses segno/ackno in segments, tunnel streams use offset/ackno in
    stream bytes, datagram tunnels carry the encapsulated packet in
    `payload`.
    """

    size: int
    flow: FlowId
    seq: int              # per-flow emission sequence, strictly increasing
    created_at: int
    enqueued_at: int = 0
    kind: str = "data"
    data_len: int = 0     # application payload bytes (payload data segments)
    segno: int = -1       # payload TCP segment number
    ackno: int = -1       # cumulative ack (segments or stream bytes)
    tunnel: int = -1      # subtunnel index for tunnel packets
    offset: int = -1      # stream byte offset (tunnel stream segments)
    payload: bytes = b""


class Link:
    """One direction of a point-to-point link with a drop-tail queue.

    The packet being serialized occupies the transmitter and is not
    counted against the queue capacity; FIFO order is preserved.
    """

    __slots__ = ("engine", "name", "rate", "prop", "capacity", "deliver",
                 "_queue", "_busy", "_propagating", "injected", "delivered",
                 "dropped")

    def __init__(self, engine: Engine, name: str, config: LinkConfig,
                 deliver: Callable[[Packet], None]) -> None:
        self.engine = engine
        self.name = name
        self.rate = config.data_rate
        self.prop = config.propagation_delay
        self.capacity = config.queue_capacity
        self.deliver = deliver
        self._queue: deque[Packet] = deque()
        self._busy = False
        self._propagating = 0
        self.injected = 0
        self.delivered = 0
        self.dropped = 0

    def transmit(self, pkt: Packet) -> bool:
        """Hand a packet to the link; True if accepted, False if tail-dropped."""
        self.injected += 1
        pkt.enqueued_at = self.engine.now
        if self._busy:
            if len(self._queue) >= self.capacity:
                self.dropped += 1
                return False
            self._queue.append(pkt)
            return True
        self._busy = True
        self._start_tx(pkt)
        return True

    def _start_tx(self, pkt: Packet) -> None:
        tx_ns = pkt.size * 8 * SECOND // self.rate
        self.engine.schedule_after(tx_ns, partial(self._departed, pkt))

    def _departed(self, pkt: Packet) -> None:
        self._propagating += 1
        self.engine.schedule_after(self.prop, partial(self._arrived, pkt))
        if self._queue:
            self._start_tx(self._queue.popleft())
        else:
            self._busy = False

    def _arrived(self, pkt: Packet) -> None:
        self._propagating -= 1
        self.delivered += 1
        self.deliver(pkt)

    @property
    def in_flight(self) -> int:
        """Packets physically inside the link: queued, serializing, propagating."""
        return len(self._queue) + (1 if self._busy else 0) + self._propagating


class Node:
    """Forwards packets to local endpoints or out the route for their destination.

    Endpoints register under (address, port); route targets are anything
    with a transmit(packet) method, which lets tunnel ingresses intercept
    destinations transparently.
    """

    __slots__ = ("name", "_apps", "_routes")

    def __init__(self, name: str) -> None:
        self.name = name
        self._apps: dict[tuple[str, int], Callable[[Packet], None]] = {}
        self._routes: dict[str, object] = {}

    def attach(self, addr: str, port: int, handler: Callable[[Packet], None]) -> None:
        self._apps[(addr, port)] = handler

    def add_route(self, dst_addr: str, via) -> None:
        self._routes[dst_addr] = via

    def receive(self, pkt: Packet) -> None:
        handler = self._apps.get((pkt.flow.dst_addr, pkt.flow.dst_port))
        if handler is not None:
            handler(pkt)
            return
        via = self._routes.get(pkt.flow.dst_addr)
        if via is None:
            raise SimulationError(f"{self.name}: no route to {pkt.flow.dst_addr}")
        via.transmit(pkt)

    # Sending from a locally attached application is the same dispatch.
    send = receive


@dataclass
class Uplink:
    """One tunnel path: the rate-limited link pair plus its routers."""

    index: int
    rate: int
    down: Link        # router -> tunnel entry (payload data direction)
    up: Link          # tunnel entry -> router
    backbone_down: Link  # tunnel exit -> router
    backbone_up: Link    # router -> tunnel exit
    router: Node


@dataclass
class Network:
    engine: Engine
    nodes: dict[str, Node]
    links: list[Link] = field(default_factory=list)
    uplinks: list[Uplink] = field(default_factory=list)
    variant: str = ""

    def link_audit(self) -> dict[str, tuple[int, int, int, int]]:
        """Per-link (injected, delivered, dropped, in_flight) counters."""
        return {ln.name: (ln.injected, ln.delivered, ln.dropped, ln.in_flight)
                for ln in self.links}
