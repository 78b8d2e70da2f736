"""Seeded random event streams for tests and experiments.

Streams are built forward: a start graph, then one applicable event per
timestamp, with the live state tracked so every event is legal by
construction.  Disconnected instances split the id space into two halves
that never share an edge and never lose their last node, which keeps at
least two components alive at every timestamp.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cdg import (
    ADD,
    ATTR_CHANGE,
    Cdg,
    DELETE,
    EDGE,
    Event,
    NODE,
    StartGraph,
    edge_key,
    snapshots,
    universe,
)
from .components import is_disconnected
from .errors import GenerationExhaustedError


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for one random stream; all sizes are upper bounds."""

    n_nodes: int = 5
    n_events: int = 8
    dim: int = 1
    attr_values: int = 4
    p_start_node: float = 0.8
    p_start_edge: float = 0.5
    allow_deletes: bool = True
    ensure_disconnected: bool = False
    max_attempts: int = 200


def _alphabet(config):
    return [tuple((j + 1) / 2.0 for _ in range(config.dim)) for j in range(config.attr_values)]


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def _half(v):
    return int(v[1:]) % 2


def _build_start(rng, config, ids, alphabet):
    nodes = {}
    for v in ids:
        if rng.random() < config.p_start_node:
            nodes[v] = _pick(rng, alphabet)
    if config.ensure_disconnected:
        for parity in (0, 1):
            half = [v for v in ids if _half(v) == parity]
            if half and not any(v in nodes for v in half):
                nodes[_pick(rng, half)] = _pick(rng, alphabet)
    edges = {}
    for u, v in itertools.combinations(sorted(nodes), 2):
        if config.ensure_disconnected and _half(u) != _half(v):
            continue
        if rng.random() < config.p_start_edge:
            edges[(u, v)] = _pick(rng, alphabet)
    return StartGraph(nodes, edges)


def _applicable_kinds(config, ids, live_nodes, live_edges, alphabet):
    kinds = []
    absent = [v for v in ids if v not in live_nodes]
    if absent:
        kinds.append("add-node")
    deletable = sorted(live_nodes)
    if config.ensure_disconnected:
        deletable = [
            v
            for v in deletable
            if sum(1 for u in live_nodes if _half(u) == _half(v)) > 1
        ]
    if config.allow_deletes and deletable:
        kinds.append("delete-node")
    addable_edges = [
        (u, v)
        for u, v in itertools.combinations(sorted(live_nodes), 2)
        if (u, v) not in live_edges
        and not (config.ensure_disconnected and _half(u) != _half(v))
    ]
    if addable_edges:
        kinds.append("add-edge")
    if config.allow_deletes and live_edges:
        kinds.append("delete-edge")
    if live_nodes and len(alphabet) > 1:
        kinds.append("attr-node")
    if live_edges and len(alphabet) > 1:
        kinds.append("attr-edge")
    return kinds, absent, deletable, addable_edges


def _try_stream(rng, config, ids, alphabet):
    start = _build_start(rng, config, ids, alphabet)
    live_nodes = dict(start.nodes)
    live_edges = dict(start.edges)
    events = []
    t = 0.0
    for _ in range(config.n_events):
        t += float(_pick(rng, [0.5, 1.0, 1.5]))
        kinds, absent, deletable, addable_edges = _applicable_kinds(
            config, ids, live_nodes, live_edges, alphabet
        )
        if not kinds:
            return None
        kind = _pick(rng, kinds)
        if kind == "add-node":
            v = _pick(rng, absent)
            attr = _pick(rng, alphabet)
            events.append(Event(t, NODE, v, ADD, attr))
            live_nodes[v] = attr
        elif kind == "delete-node":
            v = _pick(rng, deletable)
            events.append(Event(t, NODE, v, DELETE))
            del live_nodes[v]
            live_edges = {e: a for e, a in live_edges.items() if v not in e}
        elif kind == "add-edge":
            u, v = _pick(rng, addable_edges)
            attr = _pick(rng, alphabet)
            events.append(Event(t, EDGE, (u, v), ADD, attr))
            live_edges[(u, v)] = attr
        elif kind == "delete-edge":
            e = _pick(rng, sorted(live_edges))
            events.append(Event(t, EDGE, e, DELETE))
            del live_edges[e]
        elif kind == "attr-node":
            v = _pick(rng, sorted(live_nodes))
            choices = [a for a in alphabet if a != live_nodes[v]]
            attr = _pick(rng, choices)
            events.append(Event(t, NODE, v, ATTR_CHANGE, attr))
            live_nodes[v] = attr
        else:
            e = _pick(rng, sorted(live_edges))
            choices = [a for a in alphabet if a != live_edges[e]]
            attr = _pick(rng, choices)
            events.append(Event(t, EDGE, e, ATTR_CHANGE, attr))
            live_edges[e] = attr
    return Cdg(start, tuple(events), dim=config.dim)


def generate(config, seed=0):
    """One random valid stream; retries until constraints hold.

    ``seed`` may be an int, a ``numpy`` SeedSequence, or a Generator.
    """
    rng = np.random.default_rng(seed)
    ids = [f"n{i}" for i in range(config.n_nodes)]
    if config.ensure_disconnected and config.n_nodes < 2:
        raise GenerationExhaustedError("disconnected streams need at least 2 node ids")
    alphabet = _alphabet(config)
    for _ in range(config.max_attempts):
        g = _try_stream(rng, config, ids, alphabet)
        if g is None:
            continue
        if config.ensure_disconnected and not all(
            is_disconnected(s) for s in snapshots(g)
        ):
            continue
        return g
    raise GenerationExhaustedError(
        f"no valid stream after {config.max_attempts} attempts"
    )


def _all_attrs(cdg_):
    attrs = set(cdg_.start.nodes.values()) | set(cdg_.start.edges.values())
    for e in cdg_.events:
        if e.attr is not None:
            attrs.add(e.attr)
    return attrs


def relabel_cdg(cdg_, node_map, attr_map=None):
    """Rewrite node ids (and optionally attribute values) everywhere.

    ``node_map`` must cover the universe; ``attr_map`` must be injective on
    the attribute values it rewrites.
    """

    def m(a):
        if a is None or attr_map is None:
            return a
        return attr_map.get(a, a)

    start = StartGraph(
        {node_map[v]: m(a) for v, a in cdg_.start.nodes.items()},
        {
            edge_key(node_map[u], node_map[v]): m(a)
            for (u, v), a in cdg_.start.edges.items()
        },
    )
    events = []
    for e in cdg_.events:
        key = node_map[e.key] if e.item == NODE else (node_map[e.key[0]], node_map[e.key[1]])
        events.append(Event(e.time, e.item, key, e.kind, m(e.attr)))
    return Cdg(
        start,
        tuple(events),
        dim=cdg_.dim,
        start_time=cdg_.start_time,
        max_nodes=cdg_.max_nodes,
    )


def generate_isomorphic_pair(config, seed=0, rename_attrs=False):
    """A stream plus an isomorphic copy under a seeded node permutation.

    With ``rename_attrs`` the copy also rewrites every attribute value
    injectively into a disjoint range, giving a pair that is isomorphic
    under attribute renaming but not under attribute identity.  Returns
    (original, copy, node mapping).
    """
    rng = np.random.default_rng(seed)
    g1 = generate(config, rng)
    us = universe(g1)
    perm = list(us)
    rng.shuffle(perm)
    node_map = dict(zip(us, perm))
    attr_map = None
    if rename_attrs:
        attr_map = {
            a: tuple(1000.0 + i for _ in a)
            for i, a in enumerate(sorted(_all_attrs(g1)))
        }
    return g1, relabel_cdg(g1, node_map, attr_map), node_map


def two_triangles():
    """Six uniformly attributed nodes forming two disjoint triangles."""
    ids = [f"n{i}" for i in range(6)]
    nodes = {v: (1.0,) for v in ids}
    edges = {
        e: (1.0,)
        for e in [
            ("n0", "n1"), ("n1", "n2"), ("n0", "n2"),
            ("n3", "n4"), ("n4", "n5"), ("n3", "n5"),
        ]
    }
    return Cdg(StartGraph(nodes, edges))


def six_cycle():
    """Six uniformly attributed nodes forming one cycle."""
    ids = [f"n{i}" for i in range(6)]
    nodes = {v: (1.0,) for v in ids}
    edges = {(ids[i], ids[(i + 1) % 6]): (1.0,) for i in range(6)}
    return Cdg(StartGraph(nodes, edges))
