"""Event-sourced continuous-time dynamic graphs.

A dynamic graph is a start graph plus a finite sequence of timestamped
events (node/edge addition, deletion, attribute change) at strictly
increasing times.  Snapshots materialize the graph state at any timestamp
by replaying the stream up to and including that time.  All values are
treated as immutable after construction and every operation is a pure
function returning fresh values.

Graphs are undirected and simple: no self-loops, no parallel edges, and
an undirected edge is keyed by its sorted endpoint pair.  Attributes are
fixed-length tuples of finite floats compared bitwise, never with a
tolerance.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

from .errors import (
    AddExistingError,
    AttrChangeMissingError,
    DeleteMissingError,
    EdgeEndpointMissingError,
    InvalidCdgError,
    UnknownTimestampError,
)

NODE = "node"
EDGE = "edge"
ADD = "add"
DELETE = "delete"
ATTR_CHANGE = "attr"

ITEM_KINDS = (NODE, EDGE)
EVENT_KINDS = (ADD, DELETE, ATTR_CHANGE)


def attr_bytes(attr):
    """Canonical byte encoding of an attribute vector (exact, bitwise)."""
    return struct.pack(f"<{len(attr)}d", *attr)


def edge_key(u, v):
    """Normalize an undirected edge to its sorted endpoint pair."""
    if u == v:
        raise ValueError(f"self-loop at {u!r} not allowed")
    return (u, v) if u <= v else (v, u)


def _checked_attr(attr):
    vec = tuple(float(x) for x in attr)
    if not vec:
        raise ValueError("attribute vectors must have at least one component")
    if not all(math.isfinite(x) for x in vec):
        raise ValueError(f"attribute components must be finite, got {vec}")
    return vec


@dataclass(frozen=True)
class Event:
    """One timestamped change to the graph.

    ``item`` selects nodes or edges, ``kind`` the operation.  Delete events
    carry no attribute; add and attribute-change events require one.
    """

    time: float
    item: str
    key: object
    kind: str
    attr: tuple | None = None

    def __post_init__(self):
        if self.item not in ITEM_KINDS:
            raise ValueError(f"unknown item kind {self.item!r}")
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        t = float(self.time)
        if not math.isfinite(t) or t < 0:
            raise ValueError(f"event time must be finite and non-negative, got {self.time!r}")
        object.__setattr__(self, "time", t)
        if self.item == EDGE:
            u, v = self.key
            object.__setattr__(self, "key", edge_key(u, v))
        if self.kind == DELETE:
            if self.attr is not None:
                raise ValueError("delete events carry no attribute")
        else:
            if self.attr is None:
                raise ValueError(f"{self.kind} events require an attribute")
            object.__setattr__(self, "attr", _checked_attr(self.attr))


@dataclass(frozen=True)
class StartGraph:
    """Initial attributed graph; endpoint pairs are normalized on build."""

    nodes: dict
    edges: dict

    def __post_init__(self):
        object.__setattr__(
            self, "nodes", {v: _checked_attr(a) for v, a in self.nodes.items()}
        )
        object.__setattr__(
            self, "edges", {edge_key(*k): _checked_attr(a) for k, a in self.edges.items()}
        )


@dataclass(frozen=True)
class Snapshot:
    """Graph state at one timestamp: node and edge attribute maps."""

    time: float
    nodes: dict
    edges: dict


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding; ``index`` is the offending event position."""

    index: int | None
    message: str

    def __str__(self):
        where = "start graph" if self.index is None else f"event {self.index}"
        return f"{where}: {self.message}"


def apply_event(snapshot, event):
    """Return a new snapshot with one event applied.

    Node deletion cascades to incident edges.  Raises when the event does
    not apply cleanly: duplicate add, missing delete/attr-change target, or
    a dangling edge endpoint.
    """
    if event.time <= snapshot.time:
        raise ValueError(
            f"event time {event.time} not after snapshot time {snapshot.time}"
        )
    nodes = dict(snapshot.nodes)
    edges = dict(snapshot.edges)
    if event.item == NODE:
        nid = event.key
        if event.kind == ADD:
            if nid in nodes:
                raise AddExistingError(f"node {nid!r} already present")
            nodes[nid] = event.attr
        elif event.kind == DELETE:
            if nid not in nodes:
                raise DeleteMissingError(f"node {nid!r} not present")
            del nodes[nid]
            for pair in [p for p in edges if nid in p]:
                del edges[pair]
        else:
            if nid not in nodes:
                raise AttrChangeMissingError(f"node {nid!r} not present")
            nodes[nid] = event.attr
    else:
        pair = event.key
        if event.kind == ADD:
            if pair in edges:
                raise AddExistingError(f"edge {pair!r} already present")
            for end in pair:
                if end not in nodes:
                    raise EdgeEndpointMissingError(f"endpoint {end!r} missing for edge {pair!r}")
            edges[pair] = event.attr
        elif event.kind == DELETE:
            if pair not in edges:
                raise DeleteMissingError(f"edge {pair!r} not present")
            del edges[pair]
        else:
            if pair not in edges:
                raise AttrChangeMissingError(f"edge {pair!r} not present")
            edges[pair] = event.attr
    return Snapshot(time=event.time, nodes=nodes, edges=edges)


def _collect_dims(start, events):
    for a in start.nodes.values():
        yield None, a
    for a in start.edges.values():
        yield None, a
    for i, e in enumerate(events):
        if e.attr is not None:
            yield i, e.attr


def validate_stream(start, events, dim=None, start_time=0.0, max_nodes=None):
    """Check a raw (start graph, event list) pair; return a diagnostic list.

    An empty list means every event applies cleanly in order, timestamps
    strictly increase from the start time, attribute dimensions agree, and
    the node universe stays within ``max_nodes`` when a bound is given.
    """
    problems = []
    for pair in start.edges:
        for end in pair:
            if end not in start.nodes:
                problems.append(Diagnostic(None, f"edge {pair!r} endpoint {end!r} missing"))
    for idx, a in _collect_dims(start, events):
        if dim is None:
            dim = len(a)
        elif len(a) != dim:
            problems.append(Diagnostic(idx, f"attribute dimension {len(a)} != {dim}"))
    prev_t = start_time
    state = Snapshot(time=start_time, nodes=dict(start.nodes), edges=dict(start.edges))
    seen = set(start.nodes)
    for i, e in enumerate(events):
        if e.time <= prev_t:
            problems.append(
                Diagnostic(i, f"timestamp {e.time} not after previous timestamp {prev_t}")
            )
            continue
        prev_t = e.time
        if e.item == NODE and e.kind == ADD:
            seen.add(e.key)
        try:
            state = apply_event(state, e)
        except (
            AddExistingError,
            DeleteMissingError,
            AttrChangeMissingError,
            EdgeEndpointMissingError,
        ) as err:
            problems.append(Diagnostic(i, str(err)))
    if max_nodes is not None and len(seen) > max_nodes:
        problems.append(
            Diagnostic(None, f"node universe size {len(seen)} exceeds bound {max_nodes}")
        )
    return problems


@dataclass(frozen=True)
class Cdg:
    """A validated dynamic graph: start state plus ordered events.

    The start graph occupies the first timestamp (``start_time``); each
    event occupies one strictly later timestamp.  Construction replays the
    full stream and raises ``InvalidCdgError`` with diagnostics if any
    event fails to apply.
    """

    start: StartGraph
    events: tuple = ()
    dim: int | None = None
    start_time: float = 0.0
    max_nodes: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if self.dim is None:
            for _, a in _collect_dims(self.start, self.events):
                object.__setattr__(self, "dim", len(a))
                break
            else:
                raise ValueError(
                    "attribute dimension cannot be inferred from an attribute-free stream"
                )
        problems = validate_stream(
            self.start,
            self.events,
            dim=self.dim,
            start_time=self.start_time,
            max_nodes=self.max_nodes,
        )
        if problems:
            raise InvalidCdgError(problems)


def validate(cdg):
    """Diagnostics for an already-constructed graph (empty by construction)."""
    return validate_stream(
        cdg.start, cdg.events, dim=cdg.dim, start_time=cdg.start_time, max_nodes=cdg.max_nodes
    )


def timestamps(cdg):
    """All timestamps of the stream: start time, then one per event."""
    return (cdg.start_time,) + tuple(e.time for e in cdg.events)


def universe(cdg):
    """Every node id that ever exists, sorted: start nodes plus added ids."""
    seen = set(cdg.start.nodes)
    for e in cdg.events:
        if e.item == NODE and e.kind == ADD:
            seen.add(e.key)
    return tuple(sorted(seen))


def snapshots(cdg):
    """Snapshots at every timestamp, in order, by replaying the stream."""
    out = [Snapshot(time=cdg.start_time, nodes=dict(cdg.start.nodes), edges=dict(cdg.start.edges))]
    for e in cdg.events:
        out.append(apply_event(out[-1], e))
    return out


def replay(cdg, t):
    """State at timestamp ``t`` (inclusive of the event at ``t``).

    ``t`` must be the start time or one of the event times; anything else
    raises ``UnknownTimestampError``.
    """
    if t not in timestamps(cdg):
        raise UnknownTimestampError(f"{t} is not a timestamp of this stream")
    state = Snapshot(time=cdg.start_time, nodes=dict(cdg.start.nodes), edges=dict(cdg.start.edges))
    for e in cdg.events:
        if e.time > t:
            break
        state = apply_event(state, e)
    return state


def neighbors(snapshot, v):
    """Set of (neighbor id, edge attribute) pairs of ``v`` in a snapshot."""
    if v not in snapshot.nodes:
        return set()
    out = set()
    for (a, b), w in snapshot.edges.items():
        if a == v:
            out.add((b, w))
        elif b == v:
            out.add((a, w))
    return out


def adjacency(snapshot):
    """Adjacency map: node id -> list of (neighbor id, edge attribute)."""
    adj = {v: [] for v in snapshot.nodes}
    for (a, b), w in snapshot.edges.items():
        adj[a].append((b, w))
        adj[b].append((a, w))
    return adj
