"""Byte-stream TCP for the tunnel's subtunnels.

Each subtunnel direction is one sender/receiver pair over a fixed path.
The sender buffers whatever the scheduler writes (its backlog is the
`fill` the scheduler reads), segments it MSS-wise with no Nagle delay,
and recovers losses itself, so the decapsulator always sees a reliable
in-order byte stream. Delayed ACKs use the 40 ms tunnel setting.
"""

from __future__ import annotations

from typing import Callable

from .netsim import Engine, Packet, MS, SECOND
from .sched import INITIAL_SRTT_NS, FlowId, SubtunnelStats
from .transport import (CONGESTION_AVOIDANCE, FAST_RECOVERY, FAST_RETRANSMIT,
                        MSS, SEGMENT_HEADER, CongestionState, RttEstimator)

TUNNEL_DELACK_NS = 40 * MS
ACK_SIZE = SEGMENT_HEADER

_TRIM_THRESHOLD = 1 << 18


class StreamSender:
    """Reliable ordered byte stream pinned to one path."""

    __slots__ = ("engine", "flow", "index", "emit", "mss", "header", "rwnd",
                 "cc", "rtt", "snd_una", "snd_nxt", "end", "recover",
                 "_buf", "_base", "_times", "_sent_hwm", "_rexmit_hwm",
                 "_pkt_seq", "_rto_deadline", "_timer_pending",
                 "_rto_backoff", "retransmits", "wire_bytes")

    def __init__(self, engine: Engine, flow: FlowId, index: int,
                 emit: Callable[[Packet], None], *, rwnd: int,
                 mss: int = MSS, header: int = SEGMENT_HEADER) -> None:
        self.engine = engine
        self.flow = flow
        self.index = index
        self.emit = emit
        self.mss = mss
        self.header = header
        self.rwnd = rwnd
        self.cc = CongestionState(mss)
        self.rtt = RttEstimator()
        self.snd_una = 0
        self.snd_nxt = 0
        self.end = 0
        self.recover = -1
        self._buf = bytearray()
        self._base = 0  # stream offset of _buf[0]
        self._times: list[tuple[int, int]] = []  # (end_offset, sent_at), new data only
        self._sent_hwm = 0
        self._rexmit_hwm = 0
        self._pkt_seq = 0
        self._rto_deadline: int | None = None
        self._timer_pending = False
        self._rto_backoff = 1
        self.retransmits = 0
        self.wire_bytes = 0

    # -- scheduler-facing surface ----------------------------------------

    @property
    def fill(self) -> int:
        """Bytes written but not yet acknowledged (backlog + in flight)."""
        return self.end - self.snd_una

    @property
    def srtt(self) -> float:
        return self.rtt.srtt if self.rtt.has_sample else float(INITIAL_SRTT_NS)

    def stats(self) -> SubtunnelStats:
        return SubtunnelStats(self.srtt, self.cc.cwnd, self.fill)

    def write(self, data: bytes) -> None:
        self._buf += data
        self.end += len(data)
        self._pump()

    # -- transmission -----------------------------------------------------

    def _pump(self) -> None:
        mss = self.mss
        window = min(int(self.cc.cwnd), self.rwnd)
        while True:
            avail = self.end - self.snd_nxt
            if avail <= 0:
                break
            room = window - (self.snd_nxt - self.snd_una)
            seg = min(mss, avail, room)
            if seg <= 0:
                break
            self._emit(self.snd_nxt, seg)
            self.snd_nxt += seg

    def _emit(self, offset: int, length: int) -> None:
        now = self.engine.now
        end = offset + length
        if end <= self._sent_hwm:
            self.retransmits += 1
            self._rexmit_hwm = max(self._rexmit_hwm, end)
        else:
            self._sent_hwm = end
            self._times.append((end, now))
        lo = offset - self._base
        chunk = bytes(self._buf[lo:lo + length])
        pkt = Packet(size=length + self.header, flow=self.flow,
                     seq=self._pkt_seq, created_at=now, kind="tseg",
                     tunnel=self.index, offset=offset, payload=chunk)
        self._pkt_seq += 1
        self.wire_bytes += pkt.size
        if self._rto_deadline is None:
            self._arm_rto()
        self.emit(pkt)

    # -- acknowledgement processing ----------------------------------------

    def handle_ack(self, pkt: Packet) -> None:
        ackno = pkt.ackno
        if ackno > self.snd_una:
            self._advance(ackno)
        elif self._sent_hwm > self.snd_una:
            self._duplicate()

    def _advance(self, ackno: int) -> None:
        times = self._times
        sample = None
        i = 0
        for end, sent_at in times:
            if end > ackno:
                break
            i += 1
            if end > self._rexmit_hwm:  # Karn: never sample retransmitted spans
                sample = sent_at
        if i:
            del times[:i]
        if sample is not None:
            self.rtt.update(max(self.engine.now - sample, 1))
        newly = ackno - self.snd_una
        self._rto_backoff = 1
        self.snd_una = ackno
        if self.snd_nxt < ackno:
            self.snd_nxt = ackno
        trimmed = self.snd_una - self._base
        if trimmed > _TRIM_THRESHOLD:
            del self._buf[:trimmed]
            self._base = self.snd_una
        cc = self.cc
        if cc.phase == FAST_RECOVERY:
            if ackno > self.recover:
                cc.cwnd = cc.ssthresh
                cc.phase = CONGESTION_AVOIDANCE
                cc.dup_acks = 0
            else:
                cc.cwnd = max(cc.cwnd - newly + self.mss, float(self.mss))
                self._retransmit_head()
        else:
            cc.on_ack(newly)
        if self.snd_una == self._sent_hwm:
            self._rto_deadline = None
        else:
            self._arm_rto()
        self._pump()

    def _duplicate(self) -> None:
        action = self.cc.on_dup_ack()
        if action == FAST_RETRANSMIT:
            self.recover = self._sent_hwm
            self._retransmit_head()
        elif self.cc.phase == FAST_RECOVERY:
            self.cc.cwnd += self.mss
            self._pump()

    def _retransmit_head(self) -> None:
        length = min(self.mss, self._sent_hwm - self.snd_una)
        if length > 0:
            self._emit(self.snd_una, length)

    # -- retransmission timer ----------------------------------------------

    def _current_rto(self) -> int:
        return min(int(self.rtt.rto) * self._rto_backoff, 60 * SECOND)

    def _arm_rto(self) -> None:
        self._rto_deadline = self.engine.now + self._current_rto()
        if not self._timer_pending:
            self._timer_pending = True
            self.engine.schedule_at(self._rto_deadline, self._on_timer)

    def _on_timer(self) -> None:
        self._timer_pending = False
        deadline = self._rto_deadline
        if deadline is None:
            return
        if self.engine.now < deadline:
            self._timer_pending = True
            self.engine.schedule_at(deadline, self._on_timer)
            return
        self._timeout()

    def _timeout(self) -> None:
        if self.snd_una == self._sent_hwm:
            self._rto_deadline = None
            return
        self.cc.on_timeout()
        self._rto_backoff = min(self._rto_backoff * 2, 64)
        self.recover = self._sent_hwm
        self.snd_nxt = self.snd_una
        self._arm_rto()
        self._pump()


class StreamReceiver:
    """Reassembles the byte stream and hands contiguous bytes onward."""

    __slots__ = ("engine", "flow", "ack_flow", "index", "emit", "deliver",
                 "delack", "rcv_nxt", "_ooo", "_pending", "_ack_deadline",
                 "_timer_pending", "_ack_seq")

    def __init__(self, engine: Engine, flow: FlowId, index: int,
                 emit: Callable[[Packet], None],
                 deliver: Callable[[bytes], None], *,
                 delack_ns: int = TUNNEL_DELACK_NS) -> None:
        self.engine = engine
        self.flow = flow
        self.ack_flow = flow.reversed()
        self.index = index
        self.emit = emit
        self.deliver = deliver
        self.delack = delack_ns
        self.rcv_nxt = 0
        self._ooo: dict[int, bytes] = {}
        self._pending = 0
        self._ack_deadline: int | None = None
        self._timer_pending = False
        self._ack_seq = 0

    def handle_segment(self, pkt: Packet) -> None:
        offset = pkt.offset
        data = pkt.payload
        end = offset + len(data)
        if end <= self.rcv_nxt:
            self._send_ack()  # stale duplicate
            return
        if offset <= self.rcv_nxt:
            self.deliver(data[self.rcv_nxt - offset:])
            self.rcv_nxt = end
            progressed = self._drain()
            if progressed or self._ooo:
                self._send_ack()
            else:
                self._pending += 1
                if self._pending >= 2:
                    self._send_ack()
                else:
                    self._arm_delack()
        else:
            held = self._ooo.get(offset)
            if held is None or len(held) < len(data):
                self._ooo[offset] = data
            self._send_ack()  # immediate duplicate ACK

    def _drain(self) -> bool:
        ooo = self._ooo
        progressed = False
        while ooo:
            hit = None
            for off in ooo:
                if off <= self.rcv_nxt:
                    hit = off
                    break
            if hit is None:
                break
            data = ooo.pop(hit)
            end = hit + len(data)
            if end > self.rcv_nxt:
                self.deliver(data[self.rcv_nxt - hit:])
                self.rcv_nxt = end
                progressed = True
        return progressed

    def _send_ack(self) -> None:
        self._pending = 0
        self._ack_deadline = None
        pkt = Packet(size=ACK_SIZE, flow=self.ack_flow, seq=self._ack_seq,
                     created_at=self.engine.now, kind="tack",
                     tunnel=self.index, ackno=self.rcv_nxt)
        self._ack_seq += 1
        self.emit(pkt)

    def _arm_delack(self) -> None:
        self._ack_deadline = self.engine.now + self.delack
        if not self._timer_pending:
            self._timer_pending = True
            self.engine.schedule_at(self._ack_deadline, self._on_timer)

    def _on_timer(self) -> None:
        self._timer_pending = False
        deadline = self._ack_deadline
        if deadline is None:
            return
        if self.engine.now < deadline:
            self._timer_pending = True
            self.engine.schedule_at(deadline, self._on_timer)
            return
        if self._pending:
            self._send_ack()
