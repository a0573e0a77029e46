"""Topology construction for the goodput scenarios.

Chain: clients c0..c2 -- 1 Gbit/s -- te (tunnel entry) -- rate-limited
uplinks -- one router per uplink -- 1 Gbit/s backbone -- tx (tunnel
exit) -- 1 Gbit/s -- server s. Every link carries the same 6560 ns
propagation delay and a drop-tail queue. The rate set depends on the
variant; the single-path variant keeps only the 50 Mbit/s line and no
tunnel machinery is wired on top.
"""

from __future__ import annotations

from .netsim import Engine, Link, LinkConfig, Network, Node, Uplink

GIGABIT = 1_000_000_000
PROPAGATION_NS = 6560

VARIANT_RATES: dict[str, tuple[int, ...]] = {
    "three-sub": (16_000_000, 32_000_000, 50_000_000),
    "two-sub": (32_000_000, 50_000_000),
    "single-path": (50_000_000,),
}

CLIENTS = ("c0", "c1", "c2")


class ConfigError(Exception):
    pass


def _duplex(net: Network, a: Node, b: Node, rate: int, capacity: int) -> tuple[Link, Link]:
    """Two simplex links a->b and b->a with identical parameters."""
    cfg = LinkConfig(rate, PROPAGATION_NS, capacity)
    ab = Link(net.engine, f"{a.name}->{b.name}", cfg, b.receive)
    ba = Link(net.engine, f"{b.name}->{a.name}", cfg, a.receive)
    net.links.extend((ab, ba))
    return ab, ba


def build_topology(config) -> Network:
    """Build the node/link graph for `config.variant`.

    Expects `variant` and `queue_capacity` attributes; plain routing is
    fully wired (the tunnelled variants later intercept the payload
    destinations at te/tx).
    """
    rates = VARIANT_RATES.get(config.variant)
    if rates is None:
        raise ConfigError(f"unknown variant {config.variant!r}")
    capacity = config.queue_capacity

    engine = Engine()
    nodes = {name: Node(name) for name in
             (*CLIENTS, "te", "tx", "s", *(f"r{r // 1_000_000}" for r in rates))}
    net = Network(engine=engine, nodes=nodes, variant=config.variant)

    te, tx, s = nodes["te"], nodes["tx"], nodes["s"]

    for c in CLIENTS:
        to_te, to_client = _duplex(net, nodes[c], te, GIGABIT, capacity)
        nodes[c].add_route("s", to_te)
        te.add_route(c, to_client)

    s_to_tx, tx_to_s = _duplex(net, s, tx, GIGABIT, capacity)
    for c in CLIENTS:
        s.add_route(c, s_to_tx)
    tx.add_route("s", tx_to_s)

    fastest_router = f"r{max(rates) // 1_000_000}"
    for idx, rate in enumerate(rates):
        router = nodes[f"r{rate // 1_000_000}"]
        up, down = _duplex(net, te, router, rate, capacity)
        backbone_down, backbone_up = _duplex(net, tx, router, GIGABIT, capacity)
        net.uplinks.append(Uplink(idx, rate, down, up, backbone_down, backbone_up, router))
        # Routers pass traffic straight through in either direction.
        for c in CLIENTS:
            router.add_route(c, down)
        router.add_route("te", down)
        router.add_route("tx", backbone_up)
        router.add_route("s", backbone_up)
        te.add_route(router.name, up)
        tx.add_route(router.name, backbone_down)

    # Default (untunnelled) payload routing rides the fastest line.
    fastest = net.uplinks[-1]
    assert fastest.router.name == fastest_router
    for c in CLIENTS:
        tx.add_route(c, fastest.backbone_down)
    te.add_route("s", fastest.up)

    return net
