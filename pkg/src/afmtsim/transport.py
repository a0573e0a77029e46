"""Transport-layer building blocks: RTT smoothing, congestion state, framing.

These are pure state machines; the event-driven endpoint logic that feeds
them lives in `tcp` (payload segments) and `stream` (tunnel byte streams).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MS = 1_000_000  # ns

#: Retransmission timer never drops below this.
MIN_RTO_NS = 200 * MS

#: Segment payload; on-wire segment adds SEGMENT_HEADER bytes.
MSS = 1448
SEGMENT_HEADER = 52

SLOW_START = "slow-start"
CONGESTION_AVOIDANCE = "congestion-avoidance"
FAST_RECOVERY = "fast-recovery"
FAST_RETRANSMIT = "fast-retransmit"


@dataclass(slots=True)
class RttEstimator:
    """Exponentially smoothed RTT with the usual 1/8 and 1/4 gains."""

    srtt: float = 0.0    # ns
    rttvar: float = 0.0  # ns
    rto: float = MIN_RTO_NS
    has_sample: bool = False

    def update(self, sample: float) -> None:
        if sample <= 0:
            raise ValueError("RTT sample must be positive")
        if not self.has_sample:
            self.srtt = float(sample)
            self.rttvar = sample / 2.0
            self.has_sample = True
        else:
            self.rttvar = 0.75 * self.rttvar + 0.25 * abs(self.srtt - sample)
            self.srtt = 0.875 * self.srtt + 0.125 * sample
        self.rto = max(MIN_RTO_NS, self.srtt + 4.0 * self.rttvar)


@dataclass(slots=True)
class CongestionState:
    """Slow start / congestion avoidance with fast-retransmit halving.

    cwnd is kept in (possibly fractional) bytes so the avoidance-phase
    mss*mss/cwnd increments accumulate exactly; it never falls below one
    segment.
    """

    mss: int = MSS
    cwnd: float = 0.0
    ssthresh: float = math.inf
    phase: str = SLOW_START
    dup_acks: int = 0

    def __post_init__(self) -> None:
        if self.cwnd <= 0:
            self.cwnd = 10.0 * self.mss

    def on_ack(self, acked_bytes: int) -> None:
        """A new cumulative ACK (not a duplicate) covering acked_bytes."""
        if acked_bytes <= 0:
            raise ValueError("acked_bytes must be positive")
        self.dup_acks = 0
        if self.phase == SLOW_START:
            self.cwnd += min(acked_bytes, self.mss)
            if self.cwnd >= self.ssthresh:
                self.phase = CONGESTION_AVOIDANCE
        elif self.phase == CONGESTION_AVOIDANCE:
            self.cwnd += self.mss * self.mss / self.cwnd
        # fast-recovery ACK handling (exit, partial-ack deflation) is the
        # endpoint's job; see tcp.py / stream.py.

    def on_dup_ack(self) -> str | None:
        """Count a duplicate ACK; the third one halves the window."""
        self.dup_acks += 1
        if self.dup_acks == 3 and self.phase != FAST_RECOVERY:
            self.ssthresh = max(self.cwnd / 2.0, 2.0 * self.mss)
            self.cwnd = self.ssthresh
            self.phase = FAST_RECOVERY
            return FAST_RETRANSMIT
        return None

    def on_timeout(self) -> None:
        self.ssthresh = max(self.cwnd / 2.0, 2.0 * self.mss)
        self.cwnd = float(self.mss)
        self.phase = SLOW_START
        self.dup_acks = 0


FRAME_HEADER_LEN = 8
_MAX_FRAME = 2 ** 32


def frame_encode(datagram: bytes) -> bytes:
    """Length-prefix a datagram: 8-byte big-endian length, then the bytes."""
    n = len(datagram)
    if n >= _MAX_FRAME:
        raise ValueError("datagram too large to frame")
    return n.to_bytes(FRAME_HEADER_LEN, "big") + datagram


def frame_decode(buffer: bytes) -> tuple[list[bytes], bytes]:
    """Greedily split a byte stream into complete frames.

    Returns (datagrams, remainder). A partial header or partial payload
    is left in the remainder untouched; feeding the stream in arbitrary
    chunks yields the same datagrams as feeding it whole.
    """
    out: list[bytes] = []
    view = memoryview(buffer)
    off = 0
    n = len(view)
    while n - off >= FRAME_HEADER_LEN:
        length = int.from_bytes(view[off:off + FRAME_HEADER_LEN], "big")
        if n - off - FRAME_HEADER_LEN < length:
            break
        start = off + FRAME_HEADER_LEN
        out.append(bytes(view[start:start + length]))
        off = start + length
    return out, bytes(view[off:])
