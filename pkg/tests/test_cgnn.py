"""Dynamic network: forward semantics, targets, training, gradients."""

import json

import numpy as np
import pytest

from cdgwl import (
    Cdg,
    CdynTarget,
    CgnnModel,
    GeneratorConfig,
    IDENTITY_ACT,
    NUMERIC,
    PER_INTERVAL,
    SHARED_DT,
    SYMBOLIC,
    SgnnConfig,
    StartGraph,
    TargetNotCutRespectingError,
    TemporalConfig,
    cgnn_forward,
    expressivity_check,
    generate,
    generate_isomorphic_pair,
    gradient_check,
    make_pair,
    model_params_json,
    readout,
    relabel_cdg,
    replay,
    sgnn_forward,
    six_cycle,
    symbolic_state_trajectories,
    train_to_target,
    training_loss,
    trajectory_prefixes,
    two_triangles,
    universe,
)
from conftest import A, B, delete_readd_cdg, k3, static_cdg


def numeric_cfg(layers=2, hidden=4, state=4, mode=PER_INTERVAL, act=None):
    sg = SgnnConfig(mode=NUMERIC, layers=layers, hidden_dim=hidden, mlp_hidden=8,
                    activation=act or "tanh")
    tc = TemporalConfig(mode=mode, state_dim=state, mlp_hidden=8,
                        activation=act or "tanh")
    return sg, tc


def test_isolated_node_uses_empty_sum():
    g = Cdg(StartGraph({"a": A}, {}))
    sg, tc = numeric_cfg(layers=1)
    model = CgnnModel.init(1, 1, sg, tc, n_intervals=0, seed=0)
    h = sgnn_forward(replay(g, 0.0), universe(g), model)["a"]
    x = np.concatenate([np.asarray(A), np.zeros(sg.hidden_dim)])[None, :]
    expected = model.comb[0].forward(x)[0][0]
    assert h.tobytes() == expected.tobytes()


def test_symbolic_k3_is_uniform():
    g = static_cdg(k3())
    model = CgnnModel.init(1, 1, SgnnConfig(mode=SYMBOLIC, layers=None),
                           TemporalConfig(), n_intervals=0)
    h = sgnn_forward(replay(g, 0.0), universe(g), model)
    assert len(set(h.values())) == 1
    assert None not in h.values()


def test_equivalent_nodes_get_bitwise_equal_embeddings():
    # path endpoints are refinement-equivalent; sums must agree exactly
    g = Cdg(StartGraph({"a": A, "b": A, "c": A}, {("a", "b"): A, ("b", "c"): A}))
    sg, tc = numeric_cfg(layers=3)
    model = CgnnModel.init(1, 1, sg, tc, n_intervals=0, seed=1)
    h = sgnn_forward(replay(g, 0.0), universe(g), model)
    assert h["a"].tobytes() == h["c"].tobytes()
    assert h["a"].tobytes() != h["b"].tobytes()


def test_start_only_stream_state_equals_embedding():
    g = static_cdg(k3())
    sg, tc = numeric_cfg()  # hidden == state, no adapter
    model = CgnnModel.init(1, 1, sg, tc, n_intervals=0, seed=2)
    sm = cgnn_forward(g, model)
    assert len(sm) == 1
    for v in universe(g):
        assert sm[0].state[v].tobytes() == sm[0].hidden[v].tobytes()


def test_absent_node_state_is_none_and_restart_is_fresh():
    g = delete_readd_cdg()
    sg, tc = numeric_cfg()
    model = CgnnModel.init(1, 1, sg, tc, n_intervals=len(g.events), seed=3)
    sm = cgnn_forward(g, model)
    assert sm[1].state["b"] is None and sm[1].hidden["b"] is None
    # reappearing node restarts from its fresh embedding (no recurrent cell)
    fresh = sgnn_forward(replay(g, 2.0), universe(g), model)["b"]
    assert sm[2].state["b"].tobytes() == fresh.tobytes()
    # the continuously-present node does pass through the cell
    assert sm[2].state["a"].tobytes() != sm[2].hidden["a"].tobytes()


def test_symbolic_restart_reuses_hidden_id():
    g = delete_readd_cdg()
    hidden, states = symbolic_state_trajectories([g])
    assert states[0]["b"][1] is None
    assert states[0]["b"][2] == hidden[0]["b"][2]
    assert states[0]["a"][2] != hidden[0]["a"][2]


def test_adapter_bridges_dimension_mismatch():
    g = delete_readd_cdg()
    sg, tc = numeric_cfg(hidden=3, state=5)
    model = CgnnModel.init(1, 1, sg, tc, n_intervals=len(g.events), seed=4)
    assert model.adapter is not None
    sm = cgnn_forward(g, model)
    assert sm[0].state["a"].shape == (5,)
    assert sm[0].hidden["a"].shape == (3,)


def test_readout_conventions():
    g = delete_readd_cdg()
    sg, tc = numeric_cfg()
    model = CgnnModel.init(1, 2, sg, tc, n_intervals=len(g.events), seed=5)
    sm = cgnn_forward(g, model)
    out = readout(sm[1], model)
    assert np.array_equal(out["b"], np.zeros(2))
    assert out["a"].shape == (2,)
    sym = CgnnModel.init(1, 1, SgnnConfig(mode=SYMBOLIC, layers=None),
                         TemporalConfig(), n_intervals=len(g.events))
    sout = readout(cgnn_forward(g, sym)[1], sym)
    assert sout["b"] == 0 and sout["a"] != 0


def test_permutation_equivariance_bitwise():
    g1 = generate(GeneratorConfig(n_nodes=5, n_events=4), seed=6)
    mapping = {v: f"m{i}" for i, v in enumerate(universe(g1))}
    g2 = relabel_cdg(g1, mapping)
    sg, tc = numeric_cfg(layers=2)
    model = CgnnModel.init(g1.dim, 1, sg, tc, n_intervals=len(g1.events), seed=7)
    sm1, sm2 = cgnn_forward(g1, model), cgnn_forward(g2, model)
    for i in range(len(sm1)):
        for v in universe(g1):
            a, b = sm1[i].state[v], sm2[i].state[mapping[v]]
            assert (a is None) == (b is None)
            if a is not None:
                assert a.tobytes() == b.tobytes()


def test_model_init_guards():
    with pytest.raises(ValueError):
        CgnnModel.init(1, 1, SgnnConfig(mode=NUMERIC, layers=None), TemporalConfig(), 2)
    with pytest.raises(ValueError):
        CgnnModel.init(1, 1, SgnnConfig(mode=NUMERIC, layers=0), TemporalConfig(), 2)
    with pytest.raises(ValueError):
        CgnnModel.init(1, 1, SgnnConfig(mode="bogus"), TemporalConfig(), 2)
    with pytest.raises(ValueError):
        CgnnModel.init(1, 1, SgnnConfig(mode=NUMERIC), TemporalConfig(mode="bogus"), 2)
    assert CgnnModel.init(1, 1, SgnnConfig(mode=SYMBOLIC), TemporalConfig(), 2).parameters() == []


def test_expressivity_check_on_random_pairs():
    pairs = [make_pair(21, i) for i in range(6)]
    report = expressivity_check(pairs, seeds=2, layers=2)
    assert report.ok
    assert report.instances == 6
    assert report.symbolic_exact == 6


def test_expressivity_on_blind_spot_pair():
    tri, cyc = two_triangles(), six_cycle()
    report = expressivity_check([(tri, cyc)], seeds=2, layers=3)
    assert report.ok
    _, states = symbolic_state_trajectories([tri, cyc])
    trajs = {tr for side in states for tr in (tuple(t) for t in side.values())}
    assert len(trajs) == 1  # neither mode separates any node across the pair


def test_target_conflicts_detected():
    with pytest.raises(TargetNotCutRespectingError):
        CdynTarget.from_entries([(0, (1,), (1.0,)), (0, (1,), (2.0,))], 1)
    # consistent duplicates are fine
    t = CdynTarget.from_entries([(0, (1,), (1.0,)), (0, (1,), (1.0,))], 1)
    assert t.value_for(0, (1,)) == (1.0,)

    g = static_cdg(k3())  # all three nodes share every prefix
    labels = {(0, "a", 0): (1.0,), (0, "b", 0): (0.0,)}
    with pytest.raises(TargetNotCutRespectingError):
        CdynTarget.from_node_labels([g], labels, 1)


def test_target_lookup_and_json_round_trip():
    t = CdynTarget.from_entries([(1, (4, 7), (0.5, 1.5))], 2, default=(0.0, 0.0))
    assert t.value_for(1, (4, 7)) == (0.5, 1.5)
    assert t.value_for(0, (9,)) == (0.0, 0.0)
    back = CdynTarget.from_json(t.to_json())
    assert back.table == t.table and back.default == t.default and back.output_dim == 2
    bare = CdynTarget.from_entries([(0, (3,), (1.0,))], 1)
    with pytest.raises(KeyError):
        bare.value_for(0, (99,))


def test_prefix_indicator_marks_anchor_class():
    g = static_cdg(k3())
    target = CdynTarget.prefix_indicator([g], 0, "a")
    prefix = trajectory_prefixes([g])[0]["a"].sigs
    assert target.value_for(0, prefix[:1]) == (1.0,)
    assert target.value_for(0, (99999,)) == (0.0,)


def test_constant_target_fits_below_1e6():
    corpus = [generate(GeneratorConfig(n_nodes=3, n_events=2), seed=s) for s in (31, 32)]
    target = CdynTarget.from_entries([], 1, default=(0.7,))
    result = train_to_target(
        corpus, target, *numeric_cfg(layers=1, act=IDENTITY_ACT),
        steps=2000, lr=0.3, seed=0, goal=1e-7,
    )
    assert result.final_loss < 1e-6


def test_training_is_seed_deterministic():
    corpus = [generate(GeneratorConfig(n_nodes=3, n_events=2), seed=40)]
    target = CdynTarget.from_entries([], 1, default=(0.25,))
    r1 = train_to_target(corpus, target, *numeric_cfg(layers=1), steps=50, lr=0.2, seed=9)
    r2 = train_to_target(corpus, target, *numeric_cfg(layers=1), steps=50, lr=0.2, seed=9)
    assert r1.final_loss == r2.final_loss
    assert r1.initial_loss == r2.initial_loss


def test_gradient_check_identity_activations():
    probe = generate(GeneratorConfig(n_nodes=3, n_events=2), seed=50)
    sg, tc = numeric_cfg(layers=2, act=IDENTITY_ACT)
    assert gradient_check(probe, sg, tc, n_samples=40, seed=1) <= 1e-9


@pytest.mark.parametrize("mode", [PER_INTERVAL, SHARED_DT])
def test_gradient_check_default_activation(mode):
    probe = generate(GeneratorConfig(n_nodes=3, n_events=2), seed=51)
    sg, tc = numeric_cfg(layers=2, mode=mode)
    assert gradient_check(probe, sg, tc, n_samples=40, seed=2) <= 1e-4


def test_gradient_check_covers_adapter():
    probe = generate(GeneratorConfig(n_nodes=3, n_events=2), seed=52)
    sg, tc = numeric_cfg(hidden=3, state=5)
    assert gradient_check(probe, sg, tc, n_samples=60, seed=3) <= 1e-4


def test_gradient_check_empty_subset_is_zero():
    probe = generate(GeneratorConfig(n_nodes=3, n_events=2), seed=53)
    assert gradient_check(probe, *numeric_cfg(), n_samples=0) == 0.0


def test_training_loss_matches_gradient_path_loss():
    corpus = [generate(GeneratorConfig(n_nodes=3, n_events=2), seed=60)]
    target = CdynTarget.from_entries([], 1, default=(0.1,))
    sg, tc = numeric_cfg(layers=1)
    model = CgnnModel.init(1, 1, sg, tc, n_intervals=2, seed=11)
    from cdgwl import loss_and_gradients

    loss_a = training_loss(model, corpus, target)
    loss_b, grads = loss_and_gradients(model, corpus, target)
    assert loss_a == loss_b
    assert set(grads) == {name for name, _ in model.parameters()}


def test_model_params_json_shapes():
    sg, tc = numeric_cfg(layers=1, hidden=3, state=5)
    model = CgnnModel.init(1, 2, sg, tc, n_intervals=2, seed=0)
    obj = json.loads(model_params_json(model))
    for name, arr in model.parameters():
        assert obj[name]["shape"] == list(arr.shape)
        assert len(obj[name]["data"]) == arr.size
    assert "adapter.w" in obj
    assert "cell1.w1" in obj  # one cell block per interval
