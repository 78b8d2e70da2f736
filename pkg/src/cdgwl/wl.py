"""Attributed color refinement on snapshots and its temporal extension.

Refinement replaces the idealized injective hash with a canonical key plus
an append-only dictionary that assigns compact integer ids.  Color 0 is
reserved for nodes that are not alive in a snapshot and is never assigned
to a key.  One dictionary defines one comparison session: every id minted
in a session is directly comparable, and ids from different sessions are
not.

The temporal test runs refinement independently per timestamp but jointly
over the disjoint union of all compared snapshots, so colors of different
graphs at the same timestamp line up by construction.  A node's color
trajectory is the tuple of its per-timestamp final colors.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .cdg import Snapshot, adjacency, attr_bytes, edge_key, snapshots, universe
from .errors import DimensionMismatchError, LengthMismatchError, TimestampMismatchError

BOTTOM = 0

BIJECTION = "bijection"
EXISTENCE = "existence"


class ColorDictionary:
    """Injective, append-only mapping from canonical keys to ids >= 1."""

    def __init__(self):
        self._ids = {}
        self._next = 1

    def id_of(self, key):
        got = self._ids.get(key)
        if got is None:
            got = self._next
            self._ids[key] = got
            self._next += 1
        return got

    def __len__(self):
        return len(self._ids)


def awl_init(snapshot, universe_, dictionary):
    """Iteration-0 colors: attribute color for live nodes, 0 otherwise."""
    colors = {}
    for v in sorted(universe_):
        if v in snapshot.nodes:
            colors[v] = dictionary.id_of(("c0", attr_bytes(snapshot.nodes[v])))
        else:
            colors[v] = BOTTOM
    return colors


def awl_step(snapshot, prev, dictionary, adj=None):
    """One refinement round.

    A live node's new color keys on its previous color plus the multiset of
    (edge attribute, neighbor color) pairs, sorted canonically.  Nodes that
    are not alive keep color 0.
    """
    if adj is None:
        adj = adjacency(snapshot)
    colors = {}
    for v in sorted(prev):
        if v not in snapshot.nodes:
            colors[v] = BOTTOM
            continue
        ms = tuple(sorted((attr_bytes(w), prev[u]) for u, w in adj[v]))
        colors[v] = dictionary.id_of(("c", prev[v], ms))
    return colors


def partition_of(coloring):
    """Relabeling-invariant view of a coloring: frozenset of color classes."""
    cells = {}
    for v, c in coloring.items():
        cells.setdefault(c, []).append(v)
    return frozenset(frozenset(cell) for cell in cells.values())


def awl_stable(snapshot, universe_, dictionary):
    """Refine until the induced partition stops changing.

    Returns the final coloring and the number of rounds executed; the
    partition provably stabilizes within ``len(universe_)`` rounds.
    """
    adj = adjacency(snapshot)
    colors = awl_init(snapshot, universe_, dictionary)
    part = partition_of(colors)
    iterations = 0
    for _ in range(len(universe_)):
        new = awl_step(snapshot, colors, dictionary, adj)
        iterations += 1
        new_part = partition_of(new)
        colors = new
        if new_part == part:
            break
        part = new_part
    return colors, iterations


def merged_snapshot(snaps, universes):
    """Disjoint union of snapshots; node ids are tagged with graph index."""
    nodes, edges = {}, {}
    for gi, s in enumerate(snaps):
        for v, a in s.nodes.items():
            nodes[(gi, v)] = a
        for (u, v), a in s.edges.items():
            edges[edge_key((gi, u), (gi, v))] = a
    t = snaps[0].time if snaps else 0.0
    joint = [(gi, v) for gi, us in enumerate(universes) for v in us]
    return Snapshot(time=t, nodes=nodes, edges=edges), joint


def check_comparable(cdgs):
    dims = {g.dim for g in cdgs}
    if len(dims) > 1:
        raise DimensionMismatchError(f"attribute dimensions differ: {sorted(dims)}")
    counts = {len(g.events) for g in cdgs}
    if len(counts) > 1:
        raise TimestampMismatchError(f"timestamp counts differ: {sorted(counts)}")


def refine_at_depth(snapshot, universe_, dictionary, depth):
    """Colors after exactly ``depth`` rounds (depth 0 = initial colors)."""
    adj = adjacency(snapshot)
    colors = awl_init(snapshot, universe_, dictionary)
    for _ in range(depth):
        colors = awl_step(snapshot, colors, dictionary, adj)
    return colors


def cwl(cdgs, depth=None, dictionary=None):
    """Color trajectories for one or more dynamic graphs, jointly refined.

    ``depth=None`` refines each timestamp to joint stabilization; an integer
    runs exactly that many rounds.  Returns one map per input graph from
    node id to its trajectory tuple (color 0 marks timestamps where the
    node is not alive).
    """
    check_comparable(cdgs)
    if dictionary is None:
        dictionary = ColorDictionary()
    universes = [universe(g) for g in cdgs]
    snap_seqs = [snapshots(g) for g in cdgs]
    trajs = [{v: [] for v in us} for us in universes]
    for i in range(len(snap_seqs[0])):
        snap, joint = merged_snapshot([sq[i] for sq in snap_seqs], universes)
        if depth is None:
            colors, _ = awl_stable(snap, joint, dictionary)
        else:
            colors = refine_at_depth(snap, joint, dictionary, depth)
        for gi, us in enumerate(universes):
            for v in us:
                trajs[gi][v].append(colors[(gi, v)])
    return [{v: tuple(t) for v, t in tr.items()} for tr in trajs]


def node_cwl_equivalent(traj_a, traj_b):
    """Entrywise trajectory equality; lengths must match."""
    if len(traj_a) != len(traj_b):
        raise LengthMismatchError(f"trajectory lengths differ: {len(traj_a)} vs {len(traj_b)}")
    return traj_a == traj_b


@dataclass(frozen=True)
class GraphComparison:
    equivalent: bool
    trajectories: tuple
    first_divergence: int | None


def compare_graphs(g1, g2, mode=BIJECTION, dictionary=None):
    """Graph-level verdict over a shared refinement session.

    ``bijection`` mode demands equal trajectory multisets, ``existence``
    mode only equal trajectory sets.  ``first_divergence`` is the earliest
    timestamp index whose per-timestamp color statistics already differ,
    or None when the difference only shows across whole trajectories.
    """
    if mode not in (BIJECTION, EXISTENCE):
        raise ValueError(f"unknown comparison mode {mode!r}")
    trajs = cwl([g1, g2], dictionary=dictionary)
    t1, t2 = trajs
    if mode == BIJECTION:
        equivalent = Counter(t1.values()) == Counter(t2.values())
    else:
        equivalent = set(t1.values()) == set(t2.values())
    first = None
    if not equivalent:
        n_t = len(next(iter(t1.values()))) if t1 else 0
        for i in range(n_t):
            a = [tr[i] for tr in t1.values()]
            b = [tr[i] for tr in t2.values()]
            if mode == BIJECTION and Counter(a) != Counter(b):
                first = i
                break
            if mode == EXISTENCE and set(a) != set(b):
                first = i
                break
    return GraphComparison(equivalent, (t1, t2), first)


def graph_cwl_equivalent(g1, g2, mode=BIJECTION, dictionary=None):
    return compare_graphs(g1, g2, mode=mode, dictionary=dictionary).equivalent
