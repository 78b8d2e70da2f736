"""A small dynamic graph network over event streams.

Per timestamp, a message-passing encoder computes node embeddings from the
snapshot; a recurrent update then folds each node's embedding into its
running state.  Nodes that are not alive carry no state (a None marker,
never a zero vector); a node that reappears restarts from its fresh
embedding.

Two modes share this shape.  Symbolic mode realizes the encoder as
injective color refinement and the recurrent update as injective pairing,
so states are ids that carry exactly the refinement history.  Numeric mode
is a trainable float network with hand-written backpropagation; neighbor
messages are summed in a canonical value order, which makes equal input
multisets produce bitwise-equal sums.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cdg import adjacency, attr_bytes, snapshots, universe
from .errors import TargetNotCutRespectingError
from .trees import cut_trajectories
from .wl import (
    BOTTOM,
    ColorDictionary,
    awl_stable,
    check_comparable,
    cwl,
    merged_snapshot,
    refine_at_depth,
)

SYMBOLIC = "symbolic"
NUMERIC = "numeric"
PER_INTERVAL = "per-interval"
SHARED_DT = "shared-dt"
TANH = "tanh"
IDENTITY_ACT = "identity"


@dataclass(frozen=True)
class SgnnConfig:
    """Encoder hyperparameters.

    ``layers=None`` lets symbolic mode refine to stabilization; numeric
    mode always needs an explicit count (``depth_bound(n)`` recovers the
    decisive default for graphs of at most ``n`` nodes).
    """

    mode: str = NUMERIC
    layers: int | None = 3
    hidden_dim: int = 8
    mlp_hidden: int = 16
    activation: str = TANH


@dataclass(frozen=True)
class TemporalConfig:
    """Recurrent update hyperparameters.

    ``per-interval`` gives every inter-event interval its own cell;
    ``shared-dt`` uses one cell fed the elapsed time as an extra input.
    """

    mode: str = PER_INTERVAL
    state_dim: int = 8
    mlp_hidden: int = 16
    activation: str = TANH


def _act(z, activation):
    if activation == TANH:
        return np.tanh(z)
    return z


def _dact(z, a, activation):
    if activation == TANH:
        return 1.0 - a * a
    return np.ones_like(z)


@dataclass
class Mlp:
    """Two affine layers around one activation; operates on row batches."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    activation: str = TANH

    @classmethod
    def init(cls, rng, in_dim, hidden, out_dim, activation=TANH):
        w1 = rng.normal(0.0, 1.0, (hidden, in_dim)) / math.sqrt(in_dim)
        w2 = rng.normal(0.0, 1.0, (out_dim, hidden)) / math.sqrt(hidden)
        return cls(w1, np.zeros(hidden), w2, np.zeros(out_dim), activation)

    def forward(self, x):
        z = x @ self.w1.T + self.b1
        a = _act(z, self.activation)
        y = a @ self.w2.T + self.b2
        return y, (x, z, a)

    def backward(self, dy, cache, grads, prefix):
        x, z, a = cache
        grads[f"{prefix}.w2"] += dy.T @ a
        grads[f"{prefix}.b2"] += dy.sum(axis=0)
        da = dy @ self.w2
        dz = da * _dact(z, a, self.activation)
        grads[f"{prefix}.w1"] += dz.T @ x
        grads[f"{prefix}.b1"] += dz.sum(axis=0)
        return dz @ self.w1

    def named(self, prefix):
        return [
            (f"{prefix}.w1", self.w1),
            (f"{prefix}.b1", self.b1),
            (f"{prefix}.w2", self.w2),
            (f"{prefix}.b2", self.b2),
        ]


@dataclass(frozen=True)
class StateMatrix:
    """Per-node embedding and state maps at one timestamp (None = absent)."""

    time: float
    hidden: dict
    state: dict


@dataclass
class CgnnModel:
    """Configs plus parameters; symbolic models carry a dictionary instead."""

    sgnn: SgnnConfig
    temporal: TemporalConfig
    attr_dim: int
    out_dim: int
    n_intervals: int
    aggr: list | None = None
    comb: list | None = None
    cells: list | None = None
    readout_net: Mlp | None = None
    adapter: list | None = None
    dictionary: ColorDictionary | None = None

    @classmethod
    def init(cls, attr_dim, out_dim, sgnn, temporal, n_intervals, seed=0):
        if sgnn.mode == SYMBOLIC:
            return cls(sgnn, temporal, attr_dim, out_dim, n_intervals, dictionary=ColorDictionary())
        if sgnn.mode != NUMERIC:
            raise ValueError(f"unknown encoder mode {sgnn.mode!r}")
        if sgnn.layers is None:
            raise ValueError("numeric mode needs an explicit layer count")
        if sgnn.layers < 1:
            raise ValueError("at least one message-passing layer is required")
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        r, s, d = sgnn.hidden_dim, temporal.state_dim, attr_dim
        aggr, comb = [], []
        for li in range(sgnn.layers):
            h_in = d if li == 0 else r
            aggr.append(Mlp.init(rng, h_in + d, sgnn.mlp_hidden, r, sgnn.activation))
            comb.append(Mlp.init(rng, h_in + r, sgnn.mlp_hidden, r, sgnn.activation))
        if temporal.mode == PER_INTERVAL:
            cells = [
                Mlp.init(rng, s + r, temporal.mlp_hidden, s, temporal.activation)
                for _ in range(n_intervals)
            ]
        elif temporal.mode == SHARED_DT:
            cells = [Mlp.init(rng, s + r + 1, temporal.mlp_hidden, s, temporal.activation)]
        else:
            raise ValueError(f"unknown temporal mode {temporal.mode!r}")
        readout_net = Mlp.init(rng, s, temporal.mlp_hidden, out_dim, temporal.activation)
        adapter = None
        if r != s:
            adapter = [rng.normal(0.0, 1.0, (s, r)) / math.sqrt(r), np.zeros(s)]
        return cls(
            sgnn, temporal, attr_dim, out_dim, n_intervals,
            aggr=aggr, comb=comb, cells=cells, readout_net=readout_net, adapter=adapter,
        )

    def parameters(self):
        if self.sgnn.mode == SYMBOLIC:
            return []
        out = []
        for li, m in enumerate(self.aggr):
            out.extend(m.named(f"aggr{li}"))
        for li, m in enumerate(self.comb):
            out.extend(m.named(f"comb{li}"))
        for ci, m in enumerate(self.cells):
            out.extend(m.named(f"cell{ci}"))
        out.extend(self.readout_net.named("readout"))
        if self.adapter is not None:
            out.append(("adapter.w", self.adapter[0]))
            out.append(("adapter.b", self.adapter[1]))
        return out


def _canonical_rows(adj_v, h):
    return sorted(adj_v, key=lambda uw: (attr_bytes(uw[1]), h[uw[0]].tobytes()))


def _numeric_sgnn(snapshot, universe_, model, collect=False):
    """Message passing over one snapshot; returns embeddings and caches.

    Messages into a node are summed sequentially in canonical (edge bytes,
    sender bytes) order, so equal multisets of inputs give bitwise-equal
    results no matter which nodes supplied them.
    """
    adj = adjacency(snapshot)
    present = [v for v in sorted(universe_) if v in snapshot.nodes]
    h = {v: np.asarray(snapshot.nodes[v], dtype=float) for v in present}
    r = model.sgnn.hidden_dim
    layer_caches = []
    for li in range(model.sgnn.layers):
        new_h = {}
        node_caches = {}
        for v in present:
            rows = _canonical_rows(adj[v], h)
            if rows:
                x = np.stack(
                    [np.concatenate([h[u], np.asarray(w, dtype=float)]) for u, w in rows]
                )
                msgs, acache = model.aggr[li].forward(x)
                m = np.zeros(r)
                for row in msgs:
                    m = m + row
            else:
                acache = None
                m = np.zeros(r)
            y, ccache = model.comb[li].forward(np.concatenate([h[v], m])[None, :])
            new_h[v] = y[0]
            if collect:
                node_caches[v] = (rows, acache, ccache)
        if collect:
            layer_caches.append(node_caches)
        h = new_h
    out = {v: h.get(v) for v in universe_}
    return out, layer_caches


def _numeric_sgnn_backward(model, layer_caches, dh_top, grads):
    dh = dh_top
    for li in reversed(range(model.sgnn.layers)):
        h_in = model.attr_dim if li == 0 else model.sgnn.hidden_dim
        dh_prev = {}
        node_caches = layer_caches[li]
        for v, dy in dh.items():
            rows, acache, ccache = node_caches[v]
            dxc = model.comb[li].backward(dy[None, :], ccache, grads, f"comb{li}")
            if li > 0:
                dh_prev[v] = dh_prev.get(v, 0) + dxc[0, :h_in]
            if rows:
                dm = dxc[0, h_in:]
                dmsgs = np.repeat(dm[None, :], len(rows), axis=0)
                dx = model.aggr[li].backward(dmsgs, acache, grads, f"aggr{li}")
                if li > 0:
                    for ri, (u, _w) in enumerate(rows):
                        dh_prev[u] = dh_prev.get(u, 0) + dx[ri, :h_in]
        dh = dh_prev


def sgnn_forward(snapshot, universe_, model):
    """Per-node embeddings for one snapshot (None for absent nodes).

    Symbolic embeddings are color ids after the configured round count, or
    after stabilization when the count is None.
    """
    if model.sgnn.mode == SYMBOLIC:
        if model.sgnn.layers is None:
            colors, _ = awl_stable(snapshot, sorted(universe_), model.dictionary)
        else:
            colors = refine_at_depth(snapshot, sorted(universe_), model.dictionary, model.sgnn.layers)
        return {v: (None if c == BOTTOM else c) for v, c in colors.items()}
    out, _ = _numeric_sgnn(snapshot, universe_, model)
    return out


def _fresh_state(model, hv):
    if model.adapter is not None:
        w, b = model.adapter
        return w @ hv + b
    return hv


def _forward_pass(model, cdg_, collect=False):
    snaps = snapshots(cdg_)
    us = universe(cdg_)
    times = [s.time for s in snaps]
    hs, qs, sgnn_caches, temporal_caches = [], [], [], []
    prev_q = {v: None for v in us}
    for i, snap in enumerate(snaps):
        h, lcache = _numeric_sgnn(snap, us, model, collect)
        q, tcache = {}, {}
        for v in sorted(us):
            hv = h[v]
            if hv is None:
                q[v] = None
                continue
            if prev_q[v] is None:
                q[v] = _fresh_state(model, hv)
                tcache[v] = ("fresh", hv)
            else:
                if model.temporal.mode == PER_INTERVAL:
                    cell = model.cells[i - 1]
                    x = np.concatenate([prev_q[v], hv])
                    cname = f"cell{i - 1}"
                else:
                    cell = model.cells[0]
                    x = np.concatenate([prev_q[v], hv, [times[i] - times[i - 1]]])
                    cname = "cell0"
                y, cc = cell.forward(x[None, :])
                q[v] = y[0]
                tcache[v] = ("cell", cc, cname, cell)
        hs.append(h)
        qs.append(q)
        sgnn_caches.append(lcache)
        temporal_caches.append(tcache)
        prev_q = q
    return snaps, us, hs, qs, sgnn_caches, temporal_caches


def cgnn_forward(cdg_, model):
    """States at every timestamp of one dynamic graph."""
    if model.sgnn.mode == SYMBOLIC:
        h_tr, q_tr = symbolic_state_trajectories(
            [cdg_], dictionary=model.dictionary, layers=model.sgnn.layers
        )
        snaps = snapshots(cdg_)
        out = []
        for i, snap in enumerate(snaps):
            out.append(
                StateMatrix(
                    time=snap.time,
                    hidden={v: tr[i] for v, tr in h_tr[0].items()},
                    state={v: tr[i] for v, tr in q_tr[0].items()},
                )
            )
        return out
    snaps, _us, hs, qs, _sc, _tc = _forward_pass(model, cdg_)
    return [
        StateMatrix(time=snap.time, hidden=hs[i], state=qs[i])
        for i, snap in enumerate(snaps)
    ]


def symbolic_state_trajectories(cdgs, dictionary=None, layers=None):
    """Symbolic embedding and state trajectories, jointly refined.

    Returns (hidden, states): per graph, node id -> list over timestamps of
    color id / state id, with None at timestamps where the node is absent.
    A state is the fresh embedding at (re)appearance and otherwise the
    injective pairing of the previous state with the current embedding.
    """
    check_comparable(cdgs)
    if dictionary is None:
        dictionary = ColorDictionary()
    universes = [universe(g) for g in cdgs]
    seqs = [snapshots(g) for g in cdgs]
    hidden = [{v: [] for v in us} for us in universes]
    states = [{v: [] for v in us} for us in universes]
    prev_q = [{v: None for v in us} for us in universes]
    for i in range(len(seqs[0])):
        snap, joint = merged_snapshot([sq[i] for sq in seqs], universes)
        if layers is None:
            colors, _ = awl_stable(snap, joint, dictionary)
        else:
            colors = refine_at_depth(snap, joint, dictionary, layers)
        for gi, us in enumerate(universes):
            for v in us:
                c = colors[(gi, v)]
                if c == BOTTOM:
                    h = q = None
                else:
                    h = c
                    prev = prev_q[gi][v]
                    q = h if prev is None else dictionary.id_of(("q", prev, h))
                hidden[gi][v].append(h)
                states[gi][v].append(q)
                prev_q[gi][v] = q
    return hidden, states


def readout(state_matrix, model):
    """Per-node outputs; absent nodes map to the designated zero output."""
    out = {}
    for v, q in state_matrix.state.items():
        if model.sgnn.mode == SYMBOLIC:
            out[v] = 0 if q is None else q
        elif q is None:
            out[v] = np.zeros(model.out_dim)
        else:
            y, _ = model.readout_net.forward(np.asarray(q)[None, :])
            out[v] = y[0]
    return out


# ---------------------------------------------------------------------------
# Training targets


@dataclass
class CdynTarget:
    """Function table from (timestamp index, trajectory prefix) to outputs.

    Keys are signature-id prefixes of tree trajectories, so the table is
    well defined on tree-equivalence classes by construction; builders that
    start from per-node labels raise when two equal prefixes disagree.
    Targets are bound to the corpus (and its ordering) whose trajectory
    session minted the signature ids.
    """

    output_dim: int
    table: dict = field(default_factory=dict)
    default: tuple | None = None

    def value_for(self, t_index, prefix):
        key = (t_index, tuple(prefix))
        if key in self.table:
            return self.table[key]
        if self.default is not None:
            return self.default
        raise KeyError(f"target undefined at timestamp {t_index} for prefix {prefix}")

    @classmethod
    def from_entries(cls, entries, output_dim, default=None):
        table = {}
        for t_index, prefix, value in entries:
            key = (int(t_index), tuple(prefix))
            value = tuple(float(x) for x in value)
            if len(value) != output_dim:
                raise ValueError(f"target value {value} has dimension != {output_dim}")
            if key in table and table[key] != value:
                raise TargetNotCutRespectingError(
                    f"equal trajectory prefixes at timestamp {t_index} map to "
                    f"{table[key]} and {value}"
                )
            table[key] = value
        return cls(output_dim, table, tuple(default) if default is not None else None)

    @classmethod
    def from_node_labels(cls, corpus, labels, output_dim, default=None):
        """Build from {(graph index, node id, timestamp index): value} labels."""
        trajs = trajectory_prefixes(corpus)
        entries = []
        for (gi, v, t_index), value in sorted(labels.items()):
            prefix = trajs[gi][v].sigs[: t_index + 1]
            entries.append((t_index, prefix, value))
        return cls.from_entries(entries, output_dim, default)

    @classmethod
    def prefix_indicator(cls, corpus, anchor_graph, anchor_node):
        """Indicator of the anchor node's trajectory-prefix class, per timestamp."""
        trajs = trajectory_prefixes(corpus)
        anchor = trajs[anchor_graph][anchor_node].sigs
        entries = [(i, anchor[: i + 1], (1.0,)) for i in range(len(anchor))]
        return cls.from_entries(entries, 1, default=(0.0,))

    def to_json(self):
        entries = [
            {"t": t, "prefix": list(prefix), "value": list(value)}
            for (t, prefix), value in sorted(self.table.items())
        ]
        return json.dumps(
            {
                "output_dim": self.output_dim,
                "default": list(self.default) if self.default is not None else None,
                "entries": entries,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        entries = [(e["t"], tuple(e["prefix"]), e["value"]) for e in obj["entries"]]
        return cls.from_entries(entries, obj["output_dim"], obj.get("default"))


def trajectory_prefixes(corpus):
    """Tree trajectories of a corpus in one canonical session."""
    return cut_trajectories(list(corpus))


# ---------------------------------------------------------------------------
# Loss, gradients, training


def _graph_terms(model, corpus, target, prefixes):
    """Forward every graph; return per-graph forward state and target rows."""
    passes = []
    n_terms = 0
    for gi, g in enumerate(corpus):
        fwd = _forward_pass(model, g, collect=True)
        _snaps, us, _hs, qs, _sc, _tc = fwd
        rows = []
        for i in range(len(qs)):
            for v in sorted(us):
                if qs[i][v] is None:
                    continue
                y = target.value_for(i, prefixes[gi][v].sigs[: i + 1])
                rows.append((i, v, np.asarray(y, dtype=float)))
                n_terms += target.output_dim
        passes.append((fwd, rows))
    return passes, n_terms


def training_loss(model, corpus, target, prefixes=None):
    """Mean squared error of readout outputs over all live (time, node) pairs."""
    if prefixes is None:
        prefixes = trajectory_prefixes(corpus)
    passes, n_terms = _graph_terms(model, corpus, target, prefixes)
    if n_terms == 0:
        return 0.0
    total = 0.0
    for (fwd, rows) in passes:
        qs = fwd[3]
        for i, v, y in rows:
            pred, _ = model.readout_net.forward(qs[i][v][None, :])
            diff = pred[0] - y
            total += float(diff @ diff)
    return total / n_terms


def loss_and_gradients(model, corpus, target, prefixes=None):
    """Loss plus accumulated parameter gradients via backpropagation."""
    if prefixes is None:
        prefixes = trajectory_prefixes(corpus)
    grads = {name: np.zeros_like(arr) for name, arr in model.parameters()}
    passes, n_terms = _graph_terms(model, corpus, target, prefixes)
    if n_terms == 0:
        return 0.0, grads
    total = 0.0
    s_dim = model.temporal.state_dim
    for (fwd, rows) in passes:
        snaps, us, hs, qs, sgnn_caches, temporal_caches = fwd
        dq = [dict() for _ in snaps]
        for i, v, y in rows:
            pred, rcache = model.readout_net.forward(qs[i][v][None, :])
            diff = pred[0] - y
            total += float(diff @ diff)
            dpred = (2.0 / n_terms) * diff
            dx = model.readout_net.backward(dpred[None, :], rcache, grads, "readout")
            dq[i][v] = dq[i].get(v, 0) + dx[0]
        dh_by_time = [dict() for _ in snaps]
        for i in reversed(range(len(snaps))):
            for v, dqv in dq[i].items():
                entry = temporal_caches[i][v]
                if entry[0] == "fresh":
                    hv = entry[1]
                    if model.adapter is not None:
                        w, _b = model.adapter
                        grads["adapter.w"] += np.outer(dqv, hv)
                        grads["adapter.b"] += dqv
                        dh_by_time[i][v] = dh_by_time[i].get(v, 0) + w.T @ dqv
                    else:
                        dh_by_time[i][v] = dh_by_time[i].get(v, 0) + dqv
                else:
                    _kind, cc, cname, cell = entry
                    dx = cell.backward(dqv[None, :], cc, grads, cname)
                    dq_prev = dx[0, :s_dim]
                    dh_part = dx[0, s_dim : s_dim + model.sgnn.hidden_dim]
                    dq[i - 1][v] = dq[i - 1].get(v, 0) + dq_prev
                    dh_by_time[i][v] = dh_by_time[i].get(v, 0) + dh_part
        for i in range(len(snaps)):
            if dh_by_time[i]:
                _numeric_sgnn_backward(model, sgnn_caches[i], dh_by_time[i], grads)
    return total / n_terms, grads


@dataclass
class TrainResult:
    model: CgnnModel
    final_loss: float
    steps_run: int
    initial_loss: float


def train_to_target(
    corpus,
    target,
    sgnn,
    temporal,
    steps=2000,
    lr=0.5,
    seed=0,
    goal=None,
):
    """Full-batch gradient descent with a fixed step size.

    Stops early once ``goal`` (an MSE threshold) is reached.  The target
    must resolve for every live (timestamp, node) prefix in the corpus.
    """
    corpus = list(corpus)
    check_comparable(corpus)
    prefixes = trajectory_prefixes(corpus)
    for gi, g in enumerate(corpus):
        n_t = len(g.events) + 1
        for v, traj in prefixes[gi].items():
            for i in range(n_t):
                sig = traj.sigs[i]
                if sig != 0:
                    target.value_for(i, traj.sigs[: i + 1])
    model = CgnnModel.init(
        corpus[0].dim, target.output_dim, sgnn, temporal,
        n_intervals=len(corpus[0].events), seed=seed,
    )
    initial = training_loss(model, corpus, target, prefixes)
    updates = 0
    for _ in range(steps):
        loss, grads = loss_and_gradients(model, corpus, target, prefixes)
        if goal is not None and loss <= goal:
            break
        for name, arr in model.parameters():
            arr -= lr * grads[name]
        updates += 1
    final = training_loss(model, corpus, target, prefixes)
    return TrainResult(model, final, updates, initial)


def gradient_check(probe, sgnn, temporal, n_samples=25, step=1e-5, seed=0):
    """Max relative error between analytic and central-difference gradients.

    The loss is taken against a seeded random target that is constant on
    trajectory-prefix classes.  Returns 0.0 when no parameters are sampled.
    """
    corpus = [probe]
    prefixes = trajectory_prefixes(corpus)
    rng = np.random.default_rng(np.random.SeedSequence((seed, 7)))
    keys = set()
    for v, traj in prefixes[0].items():
        for i in range(len(traj.sigs)):
            if traj.sigs[i] != 0:
                keys.add((i, traj.sigs[: i + 1]))
    entries = [(i, prefix, (float(rng.uniform(-1.0, 1.0)),)) for i, prefix in sorted(keys)]
    target = CdynTarget.from_entries(entries, 1)
    model = CgnnModel.init(
        probe.dim, 1, sgnn, temporal, n_intervals=len(probe.events), seed=seed
    )
    _loss, grads = loss_and_gradients(model, corpus, target, prefixes)
    params = model.parameters()
    coords = [(name, arr, i) for name, arr in params for i in range(arr.size)]
    if not coords or n_samples <= 0:
        return 0.0
    picks = rng.choice(len(coords), size=min(n_samples, len(coords)), replace=False)
    worst = 0.0
    for pick in sorted(picks):
        name, arr, i = coords[pick]
        old = arr.flat[i]
        arr.flat[i] = old + step
        up = training_loss(model, corpus, target, prefixes)
        arr.flat[i] = old - step
        down = training_loss(model, corpus, target, prefixes)
        arr.flat[i] = old
        numeric = (up - down) / (2.0 * step)
        analytic = grads[name].flat[i]
        err = abs(analytic - numeric) / max(1.0, abs(analytic), abs(numeric))
        worst = max(worst, err)
    return float(worst)


def model_params_json(model):
    """Shape-tagged flat-array JSON of all trainable parameters."""
    obj = {
        name: {"shape": list(arr.shape), "data": arr.ravel().tolist()}
        for name, arr in model.parameters()
    }
    return json.dumps(obj, sort_keys=True)


# ---------------------------------------------------------------------------
# Expressivity certification


@dataclass
class ExpressivityReport:
    """Symbolic-exactness and numeric-coarseness results over a pair corpus."""

    instances: int = 0
    symbolic_exact: int = 0
    symbolic_mismatches: list = field(default_factory=list)
    numeric_violations: list = field(default_factory=list)

    @property
    def ok(self):
        return (
            self.symbolic_exact == self.instances
            and not self.symbolic_mismatches
            and not self.numeric_violations
        )


def _prefix_partition(values, length):
    cells = {}
    for tagged, seq in values.items():
        cells.setdefault(tuple(seq[:length]), set()).add(tagged)
    return frozenset(frozenset(cell) for cell in cells.values())


def expressivity_check(
    pairs,
    seeds=5,
    layers=3,
    hidden_dim=8,
    state_dim=8,
    temporal_mode=PER_INTERVAL,
    base_seed=0,
):
    """Compare color refinement against both network modes, per prefix.

    For every pair and every prefix length: the partition of nodes by
    symbolic state prefix must equal the partition by color-trajectory
    prefix, and no randomly initialized numeric model may separate two
    nodes whose color prefixes agree (their state prefixes must be
    bitwise equal).
    """
    report = ExpressivityReport()
    for idx, (g1, g2) in enumerate(pairs):
        dictionary = ColorDictionary()
        color_maps = cwl([g1, g2], dictionary=dictionary)
        colors = {
            (gi, v): tr for gi in (0, 1) for v, tr in color_maps[gi].items()
        }
        _h, sym_states = symbolic_state_trajectories(
            [g1, g2], dictionary=dictionary, layers=None
        )
        states = {
            (gi, v): tr for gi in (0, 1) for v, tr in sym_states[gi].items()
        }
        n_t = len(g1.events) + 1
        exact = all(
            _prefix_partition(colors, i + 1) == _prefix_partition(states, i + 1)
            for i in range(n_t)
        )
        if exact:
            report.symbolic_exact += 1
        else:
            report.symbolic_mismatches.append({"pair": idx})
        sg = SgnnConfig(mode=NUMERIC, layers=layers, hidden_dim=hidden_dim)
        tc = TemporalConfig(mode=temporal_mode, state_dim=state_dim)
        for s in range(seeds):
            model = CgnnModel.init(
                g1.dim, 1, sg, tc, n_intervals=len(g1.events), seed=base_seed + s
            )
            numeric = {}
            for gi, g in enumerate((g1, g2)):
                for sm_i, sm in enumerate(cgnn_forward(g, model)):
                    for v, q in sm.state.items():
                        numeric.setdefault((gi, v), []).append(
                            None if q is None else q.tobytes()
                        )
            for i in range(n_t):
                groups = {}
                for tagged, tr in colors.items():
                    groups.setdefault(tr[: i + 1], []).append(tagged)
                for prefix, members in groups.items():
                    first = numeric[members[0]][: i + 1]
                    for other in members[1:]:
                        if numeric[other][: i + 1] != first:
                            report.numeric_violations.append(
                                {
                                    "pair": idx,
                                    "seed": base_seed + s,
                                    "prefix_length": i + 1,
                                    "nodes": [list(members[0]), list(other)],
                                }
                            )
        report.instances += 1
    return report
