"""Segment-granularity bulk TCP endpoints for the payload flows.

Sender: slow start, congestion avoidance, fast retransmit with window
inflation, partial-ack retransmission, and a backed-off retransmission
timer. Receiver: cumulative ACKs, out-of-order buffering, delayed ACKs
(every 2nd segment or a timer), immediate duplicate ACKs on gaps. This
is exactly the machinery that turns scheduler-induced reordering into
duplicate ACKs and window halvings.
"""

from __future__ import annotations

from typing import Callable

from .netsim import Engine, Packet, SECOND
from .sched import FlowId
from .transport import (CONGESTION_AVOIDANCE, FAST_RECOVERY, FAST_RETRANSMIT,
                        MSS, SEGMENT_HEADER, CongestionState, RttEstimator)

ACK_SIZE = SEGMENT_HEADER  # a pure ACK is all header


class BulkSender:
    """Sends an unbounded stream of fixed-size segments while active."""

    __slots__ = ("engine", "flow", "send", "mss", "header", "rwnd",
                 "cc", "rtt", "snd_una", "snd_nxt", "snd_max", "recover",
                 "active", "_send_times", "_pkt_seq", "_rto_deadline",
                 "_timer_pending", "_rto_backoff", "retransmits",
                 "injected_segments")

    def __init__(self, engine: Engine, flow: FlowId,
                 send: Callable[[Packet], None], *,
                 rwnd: int, mss: int = MSS, header: int = SEGMENT_HEADER) -> None:
        self.engine = engine
        self.flow = flow
        self.send = send
        self.mss = mss
        self.header = header
        self.rwnd = rwnd
        self.cc = CongestionState(mss)
        self.rtt = RttEstimator()
        self.snd_una = 0   # lowest unacknowledged segment
        self.snd_nxt = 0   # next segment to transmit
        self.snd_max = 0   # highest segment ever transmitted + 1
        self.recover = -1  # fast-recovery exit point
        self.active = False
        self._send_times: dict[int, tuple[int, bool]] = {}
        self._pkt_seq = 0
        self._rto_deadline: int | None = None
        self._timer_pending = False
        self._rto_backoff = 1
        self.retransmits = 0
        self.injected_segments = 0

    def start(self, at: int) -> None:
        self.engine.schedule_at(at, self._start)

    def stop(self, at: int) -> None:
        self.engine.schedule_at(at, self._stop)

    def _start(self) -> None:
        self.active = True
        self._pump()

    def _stop(self) -> None:
        self.active = False

    def _pump(self) -> None:
        mss = self.mss
        window = min(self.cc.cwnd, self.rwnd)
        while (self.snd_nxt - self.snd_una + 1) * mss <= window:
            if self.snd_nxt >= self.snd_max and not self.active:
                break
            self._emit(self.snd_nxt)
            self.snd_nxt += 1
            if self.snd_nxt > self.snd_max:
                self.snd_max = self.snd_nxt

    def _emit(self, segno: int) -> None:
        now = self.engine.now
        rexmit = segno in self._send_times
        if rexmit:
            self.retransmits += 1
        else:
            self.injected_segments += 1
        self._send_times[segno] = (now, rexmit)
        pkt = Packet(size=self.header + self.mss, flow=self.flow,
                     seq=self._pkt_seq, created_at=now, kind="data",
                     data_len=self.mss, segno=segno)
        self._pkt_seq += 1
        if self._rto_deadline is None:
            self._arm_rto()
        self.send(pkt)

    # -- acknowledgement processing ------------------------------------

    def handle_ack(self, pkt: Packet) -> None:
        ackno = pkt.ackno
        if ackno > self.snd_una:
            self._advance(ackno)
        elif self.snd_max > self.snd_una:
            self._duplicate()

    def _advance(self, ackno: int) -> None:
        newest = None
        for seg in range(self.snd_una, ackno):
            entry = self._send_times.pop(seg, None)
            if entry is not None:
                newest = entry
        if newest is not None and not newest[1]:  # Karn: skip retransmitted
            self.rtt.update(max(self.engine.now - newest[0], 1))
        newly = ackno - self.snd_una
        self._rto_backoff = 1
        self.snd_una = ackno
        if self.snd_nxt < ackno:
            self.snd_nxt = ackno
        cc = self.cc
        if cc.phase == FAST_RECOVERY:
            if ackno > self.recover:
                cc.cwnd = cc.ssthresh
                cc.phase = CONGESTION_AVOIDANCE
                cc.dup_acks = 0
            else:
                # Partial ack: the next hole starts right here. Retransmit
                # it, deflate by the acked amount plus one segment.
                cc.cwnd = max(cc.cwnd - newly * self.mss + self.mss, float(self.mss))
                self._emit(self.snd_una)
        else:
            cc.on_ack(newly * self.mss)
        if self.snd_una == self.snd_max:
            self._rto_deadline = None
        else:
            self._arm_rto()
        self._pump()

    def _duplicate(self) -> None:
        action = self.cc.on_dup_ack()
        if action == FAST_RETRANSMIT:
            self.recover = self.snd_max
            self._emit(self.snd_una)
        elif self.cc.phase == FAST_RECOVERY:
            self.cc.cwnd += self.mss  # inflation keeps the pipe full
            self._pump()

    # -- retransmission timer ------------------------------------------

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
        if self.snd_una == self.snd_max:
            self._rto_deadline = None
            return
        self.cc.on_timeout()
        self._rto_backoff = min(self._rto_backoff * 2, 64)
        self.recover = self.snd_max
        self.snd_nxt = self.snd_una  # go-back-N from the hole
        self._arm_rto()
        self._pump()


class BulkReceiver:
    """Receives data segments, produces cumulative (possibly delayed) ACKs."""

    __slots__ = ("engine", "flow", "ack_flow", "send", "delack", "on_data",
                 "rcv_nxt", "_ooo", "_pending", "_ack_deadline",
                 "_timer_pending", "_ack_seq", "duplicates")

    def __init__(self, engine: Engine, flow: FlowId,
                 send: Callable[[Packet], None], *, delack_ns: int,
                 on_data: Callable[[Packet], None] | None = None) -> None:
        self.engine = engine
        self.flow = flow
        self.ack_flow = flow.reversed()
        self.send = send
        self.delack = delack_ns
        self.on_data = on_data
        self.rcv_nxt = 0
        self._ooo: set[int] = set()
        self._pending = 0
        self._ack_deadline: int | None = None
        self._timer_pending = False
        self._ack_seq = 0
        self.duplicates = 0

    def handle_data(self, pkt: Packet) -> None:
        if self.on_data is not None:
            self.on_data(pkt)
        segno = pkt.segno
        if segno == self.rcv_nxt:
            self.rcv_nxt += 1
            ooo = self._ooo
            filled = False
            while self.rcv_nxt in ooo:
                ooo.remove(self.rcv_nxt)
                self.rcv_nxt += 1
                filled = True
            if filled or ooo:
                self._send_ack()
            else:
                self._pending += 1
                if self._pending >= 2:
                    self._send_ack()
                else:
                    self._arm_delack()
        elif segno > self.rcv_nxt:
            self._ooo.add(segno)
            self._send_ack()  # immediate duplicate ACK signals the gap
        else:
            self.duplicates += 1
            self._send_ack()

    def _send_ack(self) -> None:
        self._pending = 0
        self._ack_deadline = None
        pkt = Packet(size=ACK_SIZE, flow=self.ack_flow, seq=self._ack_seq,
                     created_at=self.engine.now, kind="ack", ackno=self.rcv_nxt)
        self._ack_seq += 1
        self.send(pkt)

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
