"""Scenario configuration and the end-to-end experiment driver.

A run installs three bulk download flows server -> clients over the
payload window, one plain bulk TCP background flow on the 32 Mbit/s
uplink over the background window, runs the event loop to the horizon,
and collects per-second goodput plus the bookkeeping counters.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .metrics import MetricsCollector, MetricsRecord
from .netsim import MS, SECOND
from .sched import FlowId
from .tcp import BulkReceiver, BulkSender
from .topology import CLIENTS, VARIANT_RATES, ConfigError, build_topology
from .tunnel import AdaptiveTunnel, RoundRobinTunnel

SCHEDULERS = ("afmt", "rr")

PAYLOAD_DELACK_NS = 200 * MS

#: Start jitter applied to each payload flow, +-1 ms.
START_JITTER_NS = 1 * MS

_BG_RATE = 32_000_000


@dataclass
class ScenarioConfig:
    variant: str = "three-sub"
    scheduler: str = "afmt"
    sim_duration: int = 30  # seconds
    payload_window: tuple[float, float] = (4.0, 24.0)
    background_window: tuple[float, float] = (8.0, 16.0)
    seed: int = 1
    out_path: str | None = None
    queue_capacity: int = 100
    payload_rwnd: int = 1 << 20
    subtunnel_rwnd: int = 1 << 20

    def validate(self) -> None:
        if self.variant not in VARIANT_RATES:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.variant != "single-path" and self.scheduler not in SCHEDULERS:
            raise ConfigError(f"unknown scheduler {self.scheduler!r}")
        if self.sim_duration <= 0:
            raise ConfigError("sim_duration must be positive")
        for name, window in (("payload_window", self.payload_window),
                             ("background_window", self.background_window)):
            lo, hi = window
            if not 0 <= lo < hi <= self.sim_duration:
                raise ConfigError(f"{name} {window} outside [0, {self.sim_duration}]")

    @property
    def effective_scheduler(self) -> str:
        return "-" if self.variant == "single-path" else self.scheduler


def run_cell(variant: str, scheduler: str, seed: int) -> MetricsRecord:
    """One sweep cell with default parameters (picklable worker helper)."""
    return run_scenario(ScenarioConfig(variant=variant, scheduler=scheduler, seed=seed))


def run_cell_timed(variant: str, scheduler: str, seed: int) -> tuple[MetricsRecord, float]:
    """run_cell plus its wall-clock duration in seconds."""
    t0 = time.perf_counter()
    record = run_cell(variant, scheduler, seed)
    return record, time.perf_counter() - t0


def run_scenario(config: ScenarioConfig) -> MetricsRecord:
    config.validate()
    rng = random.Random(config.seed)
    net = build_topology(config)
    engine = net.engine
    horizon = config.sim_duration * SECOND

    tunnel = None
    if config.variant != "single-path":
        if config.scheduler == "afmt":
            tunnel = AdaptiveTunnel(net, subtunnel_rwnd=config.subtunnel_rwnd)
        else:
            tunnel = RoundRobinTunnel(net)

    collector = MetricsCollector(engine, len(CLIENTS), config.sim_duration)
    senders: list[BulkSender] = []
    start_ns = int(config.payload_window[0] * SECOND)
    stop_ns = int(config.payload_window[1] * SECOND)
    for k, client in enumerate(CLIENTS):
        flow = FlowId("s", client, 6, 8000 + k, 49152 + k)
        sender = BulkSender(engine, flow, net.nodes["s"].send,
                            rwnd=config.payload_rwnd)
        receiver = BulkReceiver(engine, flow, net.nodes[client].send,
                                delack_ns=PAYLOAD_DELACK_NS,
                                on_data=collector.hook(k))
        net.nodes["s"].attach("s", 8000 + k, sender.handle_ack)
        net.nodes[client].attach(client, 49152 + k, receiver.handle_data)
        jitter = rng.randint(-START_JITTER_NS, START_JITTER_NS)
        sender.start(start_ns + jitter)
        sender.stop(stop_ns)
        senders.append(sender)

    bg_sender = None
    if config.variant != "single-path":
        bg_uplink = next(u for u in net.uplinks if u.rate == _BG_RATE)
        router = bg_uplink.router
        bg_flow = FlowId(router.name, "te", 6, 8100, 8101)
        bg_sender = BulkSender(engine, bg_flow, router.send,
                               rwnd=config.payload_rwnd)
        bg_receiver = BulkReceiver(engine, bg_flow, net.nodes["te"].send,
                                   delack_ns=PAYLOAD_DELACK_NS)
        router.attach(router.name, 8100, bg_sender.handle_ack)
        net.nodes["te"].attach("te", 8101, bg_receiver.handle_data)
        bg_sender.start(int(config.background_window[0] * SECOND))
        bg_sender.stop(int(config.background_window[1] * SECOND))

    engine.run_until(horizon)

    n_subtunnels = 0 if config.variant == "single-path" else len(net.uplinks)
    return MetricsRecord(
        variant=config.variant,
        scheduler=config.effective_scheduler,
        seed=config.seed,
        sim_duration=config.sim_duration,
        bin_seconds=1,
        flow_bins=collector.flow_bins,
        reordered=collector.reordered,
        retransmits=[s.retransmits for s in senders],
        subtunnel_bytes=tunnel.scheduled_bytes() if tunnel else [],
        queue_drops={ln.name: ln.dropped for ln in net.links},
        injected_bytes=[s.injected_segments * s.mss for s in senders],
        link_injected=sum(ln.injected for ln in net.links),
        link_delivered=sum(ln.delivered for ln in net.links),
        link_dropped=sum(ln.dropped for ln in net.links),
        link_in_flight=sum(ln.in_flight for ln in net.links),
    )
