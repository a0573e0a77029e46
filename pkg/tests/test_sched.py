"""Scheduler-core behaviour: worked examples, invariants, oracle equivalence."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from afmtsim.netsim import Packet
from afmtsim.sched import (FlowId, FlowTable, FlowTableEntry, RoundRobinState,
                           SubtunnelStats, afmt_schedule, applicable_subtunnels,
                           flow_id_of, flow_table_evict, rr_schedule,
                           select_adaptively)

MS = 1_000_000
SEC = 1_000_000_000


def mkpkt(size=1500, flow=None, seq=0):
    return Packet(size=size, flow=flow or FlowId("10.0.0.1", "10.1.0.9", 6, 40001, 80),
                  seq=seq, created_at=0)


# ---------------------------------------------------------------- flow ids

def test_flow_id_identity_mapping():
    flow = FlowId("10.0.0.1", "10.1.0.9", 6, 40001, 80)
    fid = flow_id_of(mkpkt(flow=flow))
    assert (fid.src_addr, fid.dst_addr, fid.protocol, fid.src_port, fid.dst_port) == \
        ("10.0.0.1", "10.1.0.9", 6, 40001, 80)


def test_flow_id_deterministic():
    a = flow_id_of(mkpkt(seq=1))
    b = flow_id_of(mkpkt(seq=2))
    assert a == b and hash(a) == hash(b)


def test_flow_id_swapped_ports_differ():
    x = FlowId("a", "b", 6, 1, 2)
    y = FlowId("a", "b", 6, 2, 1)
    assert x != y
    assert x.reversed() == FlowId("b", "a", 6, 2, 1)


# ------------------------------------------------- applicable subtunnels

def stats(*pairs):
    """pairs of (srtt_ms, fill) with a fixed cwnd."""
    return [SubtunnelStats(srtt=ms * MS, cwnd=20000.0, fill=fill) for ms, fill in pairs]


def test_applicable_candidate_with_larger_srtt_joins():
    # last=A srtt 30 ms, B srtt 25 ms, gap 10 ms: 25+10 > 30
    entry = FlowTableEntry(0, 0)
    got = applicable_subtunnels(entry, stats((30, 0), (25, 0)), now=10 * MS)
    assert got == [0, 1]


def test_applicable_equality_is_excluded():
    entry = FlowTableEntry(0, 0)
    got = applicable_subtunnels(entry, stats((30, 0), (30, 0)), now=0)
    assert got == [0]


def test_applicable_mixed_candidates():
    # last=A srtt 10 ms; B 50 ms and C 4 ms with gap 5 ms: B in (55>10), C out (9>10 false)
    entry = FlowTableEntry(0, 0)
    got = applicable_subtunnels(entry, stats((10, 0), (50, 0), (4, 0)), now=5 * MS)
    assert got == [0, 1]


def test_applicable_rejects_bad_index_and_time():
    with pytest.raises(ValueError):
        applicable_subtunnels(FlowTableEntry(3, 0), stats((10, 0)), now=0)
    with pytest.raises(ValueError):
        applicable_subtunnels(FlowTableEntry(0, 100), stats((10, 0)), now=50)


@given(st.data())
def test_applicable_matches_brute_force(data):
    n = data.draw(st.integers(1, 6))
    srtts = [data.draw(st.integers(1, 200 * MS)) for _ in range(n)]
    last = data.draw(st.integers(0, n - 1))
    delta = data.draw(st.integers(0, 100 * MS))
    sub = [SubtunnelStats(srtt=float(r), cwnd=1000.0, fill=0) for r in srtts]
    got = applicable_subtunnels(FlowTableEntry(last, 0), sub, now=delta)
    expected = {i for i in range(n) if i == last or srtts[i] + delta > srtts[last]}
    assert set(got) == expected
    assert got[0] == last
    assert got[1:] == sorted(got[1:])


# ----------------------------------------------------- adaptive selection

def test_select_weighted_fill_example():
    sub = [SubtunnelStats(srtt=40 * MS, cwnd=20000, fill=0),
           SubtunnelStats(srtt=10 * MS, cwnd=20000, fill=6000)]
    d = select_adaptively([0, 1], sub, packet_size=1500)
    assert d.chosen == 0
    assert d.weighted_fills == pytest.approx([0.003, 0.00375])


def test_select_singleton():
    sub = [SubtunnelStats(srtt=999 * MS, cwnd=1.0, fill=10 ** 9)]
    assert select_adaptively([0], sub, 1500).chosen == 0


def test_select_tie_breaks_to_lowest_index():
    sub = [SubtunnelStats(srtt=20 * MS, cwnd=10000, fill=0),
           SubtunnelStats(srtt=20 * MS, cwnd=30000, fill=3000)]
    d = select_adaptively([0, 1], sub, 1500)
    assert d.weighted_fills[0] == d.weighted_fills[1] == pytest.approx(0.003)
    assert d.chosen == 0


def test_select_empty_candidates_rejected():
    with pytest.raises(ValueError):
        select_adaptively([], [], 1500)


def test_select_chosen_is_minimum_member():
    sub = [SubtunnelStats(srtt=5 * MS, cwnd=1000, fill=100),
           SubtunnelStats(srtt=9 * MS, cwnd=2000, fill=0),
           SubtunnelStats(srtt=3 * MS, cwnd=500, fill=50)]
    d = select_adaptively([2, 0, 1], sub, 1000)
    assert d.chosen in d.applicable
    assert min(d.weighted_fills) == d.weighted_fills[d.applicable.index(d.chosen)]


@given(st.data())
def test_select_argmin_scale_invariance(data):
    # bounds keep every numerator product exactly representable in float64,
    # so the scaled weighted fills are bit-identical to the originals
    n = data.draw(st.integers(1, 5))
    fills = [data.draw(st.integers(0, 10 ** 5)) for _ in range(n)]
    cwnds = [data.draw(st.integers(1, 10 ** 6)) for _ in range(n)]
    srtts = [data.draw(st.integers(1, 10 ** 8)) for _ in range(n)]
    size = data.draw(st.integers(1, 9000))
    scale = data.draw(st.integers(2, 100))
    base = [SubtunnelStats(float(r), float(c), f) for r, c, f in zip(srtts, cwnds, fills)]
    scaled = [SubtunnelStats(float(r), float(c * scale), f * scale)
              for r, c, f in zip(srtts, cwnds, fills)]
    assert select_adaptively(range(n), base, size).chosen == \
        select_adaptively(range(n), scaled, size * scale).chosen


# ------------------------------------------------------------ afmt_schedule

def test_afmt_new_flow_considers_all_and_updates_table():
    table = FlowTable()
    sub = [SubtunnelStats(srtt=10 * MS, cwnd=10000, fill=5000),
           SubtunnelStats(srtt=10 * MS, cwnd=10000, fill=0),
           SubtunnelStats(srtt=10 * MS, cwnd=10000, fill=9000)]
    pkt = mkpkt()
    d = afmt_schedule(pkt, table, sub, now=7 * SEC)
    assert d.applicable == [0, 1, 2]
    assert d.chosen == 1
    entry = table.lookup(flow_id_of(pkt))
    assert entry.last_subtunnel == 1 and entry.last_sent == 7 * SEC


def test_afmt_known_flow_small_gap_stays_put():
    table = FlowTable()
    sub = [SubtunnelStats(srtt=10 * MS, cwnd=10000, fill=9000),
           SubtunnelStats(srtt=10 * MS, cwnd=10000, fill=0)]
    first = afmt_schedule(mkpkt(seq=0), table, sub, now=0)
    assert first.chosen == 1
    # zero gap, equal SRTTs: only the last subtunnel is applicable even
    # though its fill is now far worse
    sub[1] = SubtunnelStats(srtt=10 * MS, cwnd=10000, fill=10 ** 6)
    second = afmt_schedule(mkpkt(seq=1), table, sub, now=0)
    assert second.applicable == [1]
    assert second.chosen == 1


def test_afmt_flow_table_postcondition():
    table = FlowTable()
    sub = [SubtunnelStats(srtt=10 * MS, cwnd=10000, fill=0),
           SubtunnelStats(srtt=40 * MS, cwnd=10000, fill=0)]
    for i, now in enumerate((0, 5 * MS, 80 * MS)):
        d = afmt_schedule(mkpkt(seq=i), table, sub, now=now)
        entry = table.lookup(flow_id_of(mkpkt()))
        assert entry.last_subtunnel == d.chosen
        assert entry.last_sent == now


@given(st.data())
def test_afmt_new_flow_candidate_count(data):
    n = data.draw(st.integers(1, 6))
    sub = [SubtunnelStats(srtt=float(data.draw(st.integers(1, 10 ** 8))),
                          cwnd=float(data.draw(st.integers(1, 10 ** 6))),
                          fill=data.draw(st.integers(0, 10 ** 6)))
           for _ in range(n)]
    d = afmt_schedule(mkpkt(), FlowTable(), sub, now=0)
    assert len(d.applicable) == n


# ------------------------------------------------------------- round robin

def test_rr_rotation():
    state = RoundRobinState()
    assert [rr_schedule(mkpkt(), state, 3) for _ in range(6)] == [0, 1, 2, 0, 1, 2]


def test_rr_degenerate_single():
    state = RoundRobinState()
    assert [rr_schedule(mkpkt(), state, 1) for _ in range(4)] == [0, 0, 0, 0]


def test_rr_two_subtunnels():
    state = RoundRobinState()
    assert [rr_schedule(mkpkt(), state, 2) for _ in range(5)] == [0, 1, 0, 1, 0]


@given(st.integers(1, 8), st.integers(1, 10))
def test_rr_period(n, k):
    state = RoundRobinState()
    seen = [rr_schedule(mkpkt(), state, n) for _ in range(k * n)]
    for i in range(n):
        assert seen.count(i) == k


# ---------------------------------------------------------------- eviction

def test_evict_empty_table():
    assert flow_table_evict(FlowTable(), now=10 * SEC, idle_timeout=60 * SEC) == 0


def test_evict_threshold_crossing():
    table = FlowTable()
    table.update(FlowId("a", "b", 6, 1, 2), 0, now=0)
    assert flow_table_evict(table, now=61 * SEC, idle_timeout=60 * SEC) == 1
    assert len(table) == 0


def test_evict_boundary_is_strict():
    table = FlowTable()
    fid = FlowId("a", "b", 6, 1, 2)
    table.update(fid, 0, now=0)
    assert flow_table_evict(table, now=60 * SEC, idle_timeout=60 * SEC) == 0
    assert fid in table


def test_evict_rejects_nonpositive_timeout():
    with pytest.raises(ValueError):
        flow_table_evict(FlowTable(), now=0, idle_timeout=0)


# ------------------------------------------------------------- determinism

def test_identical_sequences_identical_decisions():
    def run():
        table = FlowTable()
        sub = [SubtunnelStats(srtt=(7 + i) * MS, cwnd=10000.0 + i, fill=i * 100)
               for i in range(3)]
        out = []
        for i in range(50):
            pkt = mkpkt(seq=i, flow=FlowId("x", "y", 6, i % 4, 9))
            out.append(afmt_schedule(pkt, table, sub, now=i * MS).chosen)
        return out

    assert run() == run()
