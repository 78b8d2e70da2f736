"""Unfolding trees of snapshot nodes and their canonical signatures.

The depth-d unfolding tree of a live node carries the node's attribute at
the root and, below it, one subtree per incident edge (a multiset: walks
may revisit nodes).  Nodes that are not alive unfold to the empty tree.

Explicit trees grow exponentially with depth, so equality checking runs on
signatures instead: a bottom-up refinement assigns compact ids per depth
via the shared color dictionary, mirroring how color refinement compacts
hashes.  Explicit materialization stays available as a cross-check oracle
for small depths.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass, field

from .cdg import adjacency, attr_bytes, snapshots, universe
from .components import is_disconnected
from .errors import DepthMismatchError, InvalidBoundError, LengthMismatchError
from .wl import (
    ColorDictionary,
    awl_stable,
    check_comparable,
    cwl,
    merged_snapshot,
    partition_of,
    refine_at_depth,
)

EMPTY_SIGNATURE = 0


@dataclass(frozen=True)
class UnfoldingTree:
    """Rooted attributed tree; ``attr=None`` encodes the empty tree.

    ``children`` holds (edge attribute, subtree) pairs.  Child order is
    not significant: trees compare as equal exactly when their canonical
    signatures match.
    """

    attr: tuple | None
    children: tuple = ()

    def __post_init__(self):
        if self.attr is None and self.children:
            raise ValueError("the empty tree has no children")

    @property
    def is_empty(self):
        return self.attr is None


EMPTY_TREE = UnfoldingTree(None)


def unfolding_tree(snapshot, v, depth, adj=None):
    """Materialize the depth-``depth`` unfolding tree of ``v``.

    Exponential in ``depth``; intended for small-depth oracle checks.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if v not in snapshot.nodes:
        return EMPTY_TREE
    if adj is None:
        adj = adjacency(snapshot)

    def expand(u, d):
        a = snapshot.nodes[u]
        if d == 0:
            return UnfoldingTree(a)
        kids = tuple((w, expand(nb, d - 1)) for nb, w in sorted(adj[u]))
        return UnfoldingTree(a, kids)

    return expand(v, depth)


def _frame(b):
    return struct.pack("<I", len(b)) + b


def signature(tree):
    """Canonical byte encoding: equal bytes iff equal trees (multiset children)."""
    if tree.is_empty:
        return b"E"
    parts = sorted(_frame(attr_bytes(w)) + _frame(signature(c)) for w, c in tree.children)
    return (
        b"N"
        + _frame(attr_bytes(tree.attr))
        + struct.pack("<I", len(parts))
        + b"".join(parts)
    )


def tree_sig_levels(snapshot, universe_, dictionary, max_depth, adj=None):
    """Signature ids per depth 0..max_depth, computed bottom-up.

    Level d of a live node keys on its attribute plus the sorted multiset
    of (edge attribute, neighbor level d-1) pairs; dead nodes carry the
    reserved empty signature 0 at every level.
    """
    if adj is None:
        adj = adjacency(snapshot)
    levels = []
    sigs = {}
    for v in sorted(universe_):
        if v in snapshot.nodes:
            sigs[v] = dictionary.id_of(("t0", attr_bytes(snapshot.nodes[v])))
        else:
            sigs[v] = EMPTY_SIGNATURE
    levels.append(sigs)
    for _ in range(max_depth):
        prev = levels[-1]
        nxt = {}
        for v in sorted(universe_):
            if v not in snapshot.nodes:
                nxt[v] = EMPTY_SIGNATURE
                continue
            ms = tuple(sorted((attr_bytes(w), prev[u]) for u, w in adj[v]))
            nxt[v] = dictionary.id_of(("t", attr_bytes(snapshot.nodes[v]), ms))
        levels.append(nxt)
    return levels


def tree_sigs_at_depth(snapshot, universe_, dictionary, depth):
    return tree_sig_levels(snapshot, universe_, dictionary, depth)[-1]


def tree_sigs_stable(snapshot, universe_, dictionary):
    """Deepen until the signature partition stops changing."""
    adj = adjacency(snapshot)
    levels = tree_sig_levels(snapshot, universe_, dictionary, 0, adj)
    sigs = levels[0]
    part = partition_of(sigs)
    depth = 0
    for _ in range(len(universe_)):
        nxt = {}
        for v in sorted(universe_):
            if v not in snapshot.nodes:
                nxt[v] = EMPTY_SIGNATURE
                continue
            ms = tuple(sorted((attr_bytes(w), sigs[u]) for u, w in adj[v]))
            nxt[v] = dictionary.id_of(("t", attr_bytes(snapshot.nodes[v]), ms))
        depth += 1
        new_part = partition_of(nxt)
        sigs = nxt
        if new_part == part:
            break
        part = new_part
    return sigs, depth


def depth_bound(n, both_disconnected=False):
    """Tree depth at which equality decides equality at every depth.

    ``2n - 1`` for graphs of at most ``n`` nodes; ``2n - 3`` when both
    compared snapshots are disconnected (components then have at most
    ``n - 1`` nodes).
    """
    if n < 1:
        raise InvalidBoundError("node bound must be at least 1")
    if both_disconnected:
        if n < 2:
            raise InvalidBoundError("a disconnected snapshot needs at least 2 nodes")
        return 2 * n - 3
    return 2 * n - 1


@dataclass(frozen=True)
class TreeTrajectory:
    """Per-timestamp signature ids of one node's trees at a fixed depth."""

    depth: int
    sigs: tuple


def cut_trajectories(cdgs, depth=None, dictionary=None):
    """Tree trajectories for one or more graphs over a shared session.

    ``depth=None`` uses the decisive bound for the largest universe among
    the inputs.  Signatures of different graphs at the same timestamp are
    comparable by construction.
    """
    check_comparable(cdgs)
    if dictionary is None:
        dictionary = ColorDictionary()
    universes = [universe(g) for g in cdgs]
    if depth is None:
        depth = depth_bound(max((len(u) for u in universes), default=1))
    snap_seqs = [snapshots(g) for g in cdgs]
    trajs = [{v: [] for v in us} for us in universes]
    for i in range(len(snap_seqs[0])):
        snap, joint = merged_snapshot([sq[i] for sq in snap_seqs], universes)
        sigs = tree_sigs_at_depth(snap, joint, dictionary, depth)
        for gi, us in enumerate(universes):
            for v in us:
                trajs[gi][v].append(sigs[(gi, v)])
    return [
        {v: TreeTrajectory(depth, tuple(t)) for v, t in tr.items()} for tr in trajs
    ]


def node_cut_equivalent(traj_a, traj_b):
    """Entrywise tree-trajectory equality; depth and length must match."""
    if traj_a.depth != traj_b.depth:
        raise DepthMismatchError(f"depths differ: {traj_a.depth} vs {traj_b.depth}")
    if len(traj_a.sigs) != len(traj_b.sigs):
        raise LengthMismatchError(
            f"trajectory lengths differ: {len(traj_a.sigs)} vs {len(traj_b.sigs)}"
        )
    return traj_a.sigs == traj_b.sigs


@dataclass(frozen=True)
class CutVerdict:
    equivalent: bool
    bijection: dict | None = None


def graph_cut_equivalent(g1, g2, depth=None, dictionary=None):
    """Multiset equality of tree trajectories, with a witness on success."""
    trajs = cut_trajectories([g1, g2], depth=depth, dictionary=dictionary)
    t1, t2 = trajs
    if Counter(tr.sigs for tr in t1.values()) != Counter(tr.sigs for tr in t2.values()):
        return CutVerdict(False)
    order1 = sorted(t1, key=lambda v: (t1[v].sigs, v))
    order2 = sorted(t2, key=lambda v: (t2[v].sigs, v))
    return CutVerdict(True, dict(zip(order1, order2)))


def stable_trajectories(g1, g2, dictionary=None):
    """Color and tree trajectories of a pair at per-timestamp stabilization.

    Returns ({tagged node: color trajectory}, {tagged node: sig trajectory})
    where tags are (graph index, node id); both computed in one session.
    """
    check_comparable([g1, g2])
    if dictionary is None:
        dictionary = ColorDictionary()
    universes = [universe(g1), universe(g2)]
    seqs = [snapshots(g1), snapshots(g2)]
    color_tr = {}
    sig_tr = {}
    for i in range(len(seqs[0])):
        snap, joint = merged_snapshot([seqs[0][i], seqs[1][i]], universes)
        colors, _ = awl_stable(snap, joint, dictionary)
        sigs, _ = tree_sigs_stable(snap, joint, dictionary)
        for tagged in joint:
            color_tr.setdefault(tagged, []).append(colors[tagged])
            sig_tr.setdefault(tagged, []).append(sigs[tagged])
    return (
        {k: tuple(v) for k, v in color_tr.items()},
        {k: tuple(v) for k, v in sig_tr.items()},
    )


@dataclass
class CorrespondenceReport:
    """Outcome of the tree-vs-color certification over a pair corpus."""

    pairs_checked: int = 0
    timestamps_checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches


def _partition_at(trajectories, i):
    cells = {}
    for tagged, tr in trajectories.items():
        cells.setdefault(tr[i], set()).add(tagged)
    return frozenset(frozenset(cell) for cell in cells.values())


def verify_cut_cwl_correspondence(pairs, depth=None):
    """Certify that tree partitions and color partitions coincide.

    At every timestamp of every pair, the partition of the joint node set
    by stabilized tree signature must equal the partition by stabilized
    color (which also forces trajectory equality to agree).  ``depth``
    switches both sides to a fixed depth/round count instead.
    """
    report = CorrespondenceReport()
    for idx, (g1, g2) in enumerate(pairs):
        if depth is None:
            color_tr, sig_tr = stable_trajectories(g1, g2)
        else:
            dictionary = ColorDictionary()
            colors = cwl([g1, g2], depth=depth, dictionary=dictionary)
            sig_maps = cut_trajectories([g1, g2], depth=depth, dictionary=dictionary)
            color_tr, sig_tr = {}, {}
            for gi in (0, 1):
                for v, tr in colors[gi].items():
                    color_tr[(gi, v)] = tr
                for v, tr in sig_maps[gi].items():
                    sig_tr[(gi, v)] = tr.sigs
        n_t = len(next(iter(color_tr.values()))) if color_tr else 0
        for i in range(n_t):
            report.timestamps_checked += 1
            if _partition_at(color_tr, i) != _partition_at(sig_tr, i):
                report.mismatches.append({"pair": idx, "timestamp_index": i})
        report.pairs_checked += 1
    return report


@dataclass
class DepthBoundReport:
    """Outcome of the decisive-depth certification over a pair corpus."""

    pairs_checked: int = 0
    node_pairs_checked: int = 0
    disconnected_timestamps: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def verify_depth_bound(pairs, n_bound):
    """Certify that signature equality at the bound persists when deepening.

    At every timestamp of every pair, nodes with equal signatures at depth
    ``2n-1`` must stay equal at depths ``2n`` and ``2n+1``; when both
    snapshots are disconnected the same is required from depth ``2n-3``.
    """
    report = DepthBoundReport()
    d_full = depth_bound(n_bound)
    d_tight = depth_bound(n_bound, both_disconnected=True) if n_bound >= 2 else None
    for idx, (g1, g2) in enumerate(pairs):
        check_comparable([g1, g2])
        universes = [universe(g1), universe(g2)]
        for u in universes:
            if len(u) > n_bound:
                raise InvalidBoundError(
                    f"universe size {len(u)} exceeds the stated bound {n_bound}"
                )
        seqs = [snapshots(g1), snapshots(g2)]
        dictionary = ColorDictionary()
        for i in range(len(seqs[0])):
            s1, s2 = seqs[0][i], seqs[1][i]
            snap, joint = merged_snapshot([s1, s2], universes)
            levels = tree_sig_levels(snap, joint, dictionary, d_full + 2)
            both_disc = is_disconnected(s1) and is_disconnected(s2)
            if both_disc:
                report.disconnected_timestamps += 1
            start_depths = [d_full]
            if both_disc and d_tight is not None:
                start_depths.append(d_tight)
            tagged = sorted(joint)
            for a_i in range(len(tagged)):
                for b_i in range(a_i + 1, len(tagged)):
                    x, y = tagged[a_i], tagged[b_i]
                    report.node_pairs_checked += 1
                    for d0 in start_depths:
                        if levels[d0][x] != levels[d0][y]:
                            continue
                        for d in (d_full + 1, d_full + 2):
                            if levels[d][x] != levels[d][y]:
                                report.violations.append(
                                    {
                                        "pair": idx,
                                        "timestamp_index": i,
                                        "nodes": [list(x), list(y)],
                                        "equal_at": d0,
                                        "diverged_at": d,
                                    }
                                )
        report.pairs_checked += 1
    return report
