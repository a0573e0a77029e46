"""Tunnel endpoints: encapsulation, scheduling, and decapsulation.

The adaptive tunnel frames each payload datagram (8-byte length prefix)
and writes it into the per-subtunnel byte stream chosen by the
flow-aware scheduler; the exit reassembles frames and re-injects the
packets. The round-robin tunnel wraps each payload datagram into one
datagram per rotation slot with a fixed encapsulation overhead and no
reliability of its own.
"""

from __future__ import annotations

import struct

from .netsim import Engine, Network, Packet, SECOND
from .sched import (DEFAULT_IDLE_TIMEOUT_NS, FlowId, FlowTable,
                    RoundRobinState, afmt_schedule, flow_table_evict,
                    rr_schedule)
from .stream import StreamReceiver, StreamSender
from .transport import frame_decode, frame_encode

#: IP + UDP header bytes added per datagram-tunnel packet.
DATAGRAM_OVERHEAD = 28

EVICT_INTERVAL_NS = SECOND

# Wire-port scheme for tunnel transports: base + subtunnel index.
_DOWN_SRC = 7000  # tx -> te stream (payload data direction)
_DOWN_DST = 7200
_UP_SRC = 7400    # te -> tx stream (payload ACK direction)
_UP_DST = 7600
_DGRAM_DOWN = 7800
_DGRAM_UP = 7900

_DESC = struct.Struct("!4s4sBHHQQBIqq")
_KIND_CODE = {"data": 1, "ack": 2}
_KIND_NAME = {1: "data", 2: "ack"}


def encode_packet(pkt: Packet) -> bytes:
    """Serialize a payload packet at its on-wire size (header + padding)."""
    f = pkt.flow
    src, dst = f.src_addr.encode(), f.dst_addr.encode()
    if len(src) > 4 or len(dst) > 4:
        # struct would truncate silently and merge distinct flows
        raise ValueError(f"addresses longer than 4 bytes cannot be tunnelled: {f}")
    head = _DESC.pack(src, dst, f.protocol,
                      f.src_port, f.dst_port, pkt.seq, pkt.created_at,
                      _KIND_CODE[pkt.kind], pkt.data_len, pkt.segno, pkt.ackno)
    if pkt.size < len(head):
        raise ValueError(f"packet size {pkt.size} below descriptor size {len(head)}")
    return head + b"\x00" * (pkt.size - len(head))


def decode_packet(datagram: bytes) -> Packet:
    (src, dst, proto, sport, dport, seq, created, kind_code,
     data_len, segno, ackno) = _DESC.unpack_from(datagram)
    flow = FlowId(src.rstrip(b"\x00").decode(), dst.rstrip(b"\x00").decode(),
                  proto, sport, dport)
    return Packet(size=len(datagram), flow=flow, seq=seq, created_at=created,
                  kind=_KIND_NAME[kind_code], data_len=data_len,
                  segno=segno, ackno=ackno)


class _Reassembler:
    """Accumulates stream bytes and pops out complete frames."""

    __slots__ = ("_buf", "on_datagram")

    def __init__(self, on_datagram) -> None:
        self._buf = b""
        self.on_datagram = on_datagram

    def push(self, data: bytes) -> None:
        frames, self._buf = frame_decode(self._buf + data)
        for frame in frames:
            self.on_datagram(frame)


class StreamTunnelDirection:
    """One scheduling direction: flow table + the per-path stream senders."""

    def __init__(self, engine: Engine, senders: list[StreamSender]) -> None:
        self.engine = engine
        self.senders = senders
        self.flow_table = FlowTable()
        self.scheduled_bytes = [0] * len(senders)
        self.evicted = 0
        engine.schedule_after(EVICT_INTERVAL_NS, self._evict_tick)

    def transmit(self, pkt: Packet) -> None:
        """Route-target hook: encapsulate and hand off to the chosen stream."""
        stats = [s.stats() for s in self.senders]
        decision = afmt_schedule(pkt, self.flow_table, stats, self.engine.now)
        frame = frame_encode(encode_packet(pkt))
        self.scheduled_bytes[decision.chosen] += len(frame)
        self.senders[decision.chosen].write(frame)

    def _evict_tick(self) -> None:
        self.evicted += flow_table_evict(self.flow_table, self.engine.now,
                                         DEFAULT_IDLE_TIMEOUT_NS)
        self.engine.schedule_after(EVICT_INTERVAL_NS, self._evict_tick)


class AdaptiveTunnel:
    """Both directions of the flow-aware tunnel installed on a network."""

    def __init__(self, net: Network, *, subtunnel_rwnd: int) -> None:
        engine = net.engine
        te, tx = net.nodes["te"], net.nodes["tx"]
        down_senders: list[StreamSender] = []  # tx -> te (payload data)
        up_senders: list[StreamSender] = []    # te -> tx (payload ACKs)
        for uplink in net.uplinks:
            i = uplink.index
            down_flow = FlowId("tx", "te", 6, _DOWN_SRC + i, _DOWN_DST + i)
            up_flow = FlowId("te", "tx", 6, _UP_SRC + i, _UP_DST + i)

            down = StreamSender(engine, down_flow, i,
                                uplink.backbone_down.transmit, rwnd=subtunnel_rwnd)
            down_sink = _Reassembler(lambda f, node=te: node.receive(decode_packet(f)))
            down_rx = StreamReceiver(engine, down_flow, i, uplink.up.transmit,
                                     down_sink.push)
            te.attach("te", _DOWN_DST + i, down_rx.handle_segment)
            tx.attach("tx", _DOWN_SRC + i, down.handle_ack)

            up = StreamSender(engine, up_flow, i, uplink.up.transmit,
                              rwnd=subtunnel_rwnd)
            up_sink = _Reassembler(lambda f, node=tx: node.receive(decode_packet(f)))
            up_rx = StreamReceiver(engine, up_flow, i, uplink.backbone_down.transmit,
                                   up_sink.push)
            tx.attach("tx", _UP_DST + i, up_rx.handle_segment)
            te.attach("te", _UP_SRC + i, up.handle_ack)

            down_senders.append(down)
            up_senders.append(up)

        self.down = StreamTunnelDirection(engine, down_senders)
        self.up = StreamTunnelDirection(engine, up_senders)
        # Intercept payload destinations at the tunnel ends.
        for c in ("c0", "c1", "c2"):
            tx.add_route(c, self.down)
        te.add_route("s", self.up)

    def scheduled_bytes(self) -> list[int]:
        return [a + b for a, b in zip(self.down.scheduled_bytes,
                                      self.up.scheduled_bytes)]

    def subtunnel_retransmits(self) -> int:
        return sum(s.retransmits for s in self.down.senders + self.up.senders)


class DatagramTunnelDirection:
    """Round-robin rotation over per-path datagram sockets."""

    def __init__(self, engine: Engine, first_hops: list, wire_flows: list[FlowId]) -> None:
        self.engine = engine
        self.first_hops = first_hops
        self.wire_flows = wire_flows
        self.state = RoundRobinState()
        self.scheduled_bytes = [0] * len(first_hops)
        self._seqs = [0] * len(first_hops)

    def transmit(self, pkt: Packet) -> None:
        idx = rr_schedule(pkt, self.state, len(self.first_hops))
        body = encode_packet(pkt)
        wire = Packet(size=pkt.size + DATAGRAM_OVERHEAD, flow=self.wire_flows[idx],
                      seq=self._seqs[idx], created_at=self.engine.now,
                      kind="dgram", tunnel=idx, payload=body)
        self._seqs[idx] += 1
        self.scheduled_bytes[idx] += wire.size
        self.first_hops[idx].transmit(wire)


class RoundRobinTunnel:
    """Both directions of the datagram tunnel installed on a network."""

    def __init__(self, net: Network) -> None:
        engine = net.engine
        te, tx = net.nodes["te"], net.nodes["tx"]
        down_hops, up_hops = [], []
        down_flows, up_flows = [], []
        for uplink in net.uplinks:
            i = uplink.index
            down_flows.append(FlowId("tx", "te", 17, _DGRAM_DOWN + i, _DGRAM_DOWN + i))
            up_flows.append(FlowId("te", "tx", 17, _DGRAM_UP + i, _DGRAM_UP + i))
            down_hops.append(uplink.backbone_down)
            up_hops.append(uplink.up)
            te.attach("te", _DGRAM_DOWN + i, self._unwrap_into(te))
            tx.attach("tx", _DGRAM_UP + i, self._unwrap_into(tx))

        self.down = DatagramTunnelDirection(engine, down_hops, down_flows)
        self.up = DatagramTunnelDirection(engine, up_hops, up_flows)
        for c in ("c0", "c1", "c2"):
            tx.add_route(c, self.down)
        te.add_route("s", self.up)

    @staticmethod
    def _unwrap_into(node):
        def handler(pkt: Packet) -> None:
            node.receive(decode_packet(pkt.payload))
        return handler

    def scheduled_bytes(self) -> list[int]:
        return [a + b for a, b in zip(self.down.scheduled_bytes,
                                      self.up.scheduled_bytes)]
