"""Color refinement: known partitions, trajectory semantics, comparisons."""

import pytest

from cdgwl import (
    BIJECTION,
    BOTTOM,
    Cdg,
    ColorDictionary,
    DimensionMismatchError,
    EXISTENCE,
    GeneratorConfig,
    LengthMismatchError,
    StartGraph,
    TimestampMismatchError,
    awl_init,
    awl_stable,
    awl_step,
    check_comparable,
    compare_graphs,
    cwl,
    generate,
    generate_isomorphic_pair,
    graph_cwl_equivalent,
    merged_snapshot,
    node_cwl_equivalent,
    partition_of,
    snapshots,
    universe,
)
from conftest import A, B, churn_cdg, delete_readd_cdg, k3, path3, snap, star4


def cells(coloring):
    return {frozenset(c) for c in partition_of(coloring)}


def test_path3_stable_partition():
    colors, _ = awl_stable(path3(), ["a", "b", "c"], ColorDictionary())
    assert cells(colors) == {frozenset({"a", "c"}), frozenset({"b"})}


def test_star_center_separates_from_leaves():
    colors, _ = awl_stable(star4(), ["x", "a", "b", "c"], ColorDictionary())
    assert cells(colors) == {frozenset({"x"}), frozenset({"a", "b", "c"})}


def test_k3_is_one_class():
    colors, _ = awl_stable(k3(), ["a", "b", "c"], ColorDictionary())
    assert cells(colors) == {frozenset({"a", "b", "c"})}


def test_distinct_attributes_separate_at_init():
    s = snap({"a": A, "b": B})
    colors = awl_init(s, ["a", "b"], ColorDictionary())
    assert colors["a"] != colors["b"]


def test_absent_nodes_keep_reserved_color():
    s = path3()
    d = ColorDictionary()
    colors = awl_init(s, ["a", "b", "c", "ghost"], d)
    assert colors["ghost"] == BOTTOM
    stepped = awl_step(s, colors, d)
    assert stepped["ghost"] == BOTTOM
    assert all(c != BOTTOM for v, c in stepped.items() if v != "ghost")


def test_refinement_is_monotone():
    # every cell of round k+1 must lie inside one cell of round k
    for seed in range(10):
        g = generate(GeneratorConfig(n_nodes=6, n_events=3), seed=seed)
        s = snapshots(g)[-1]
        d = ColorDictionary()
        colors = awl_init(s, universe(g), d)
        for _ in range(len(universe(g))):
            nxt = awl_step(s, colors, d)
            for cell in partition_of(nxt):
                parents = {colors[v] for v in cell}
                assert len(parents) == 1
            colors = nxt


def test_stabilizes_within_universe_size_rounds():
    for seed in range(10):
        g = generate(GeneratorConfig(n_nodes=6, n_events=2), seed=seed)
        s = snapshots(g)[-1]
        _, iterations = awl_stable(s, universe(g), ColorDictionary())
        assert iterations <= len(universe(g))


def test_dictionary_session_is_deterministic():
    g = churn_cdg()
    assert cwl([g]) == cwl([g])


def test_trajectory_shape_and_bottom_entries():
    g = delete_readd_cdg()
    trajs = cwl([g])[0]
    assert set(trajs) == {"a", "b"}
    assert all(len(tr) == 1 + len(g.events) for tr in trajs.values())
    assert trajs["b"][1] == BOTTOM     # deleted at t=1
    assert trajs["b"][2] != BOTTOM     # re-added at t=2
    assert trajs["a"][0] != BOTTOM


def test_joint_refinement_makes_graphs_comparable():
    g = churn_cdg()
    t1, t2 = cwl([g, g])
    assert t1 == t2
    assert graph_cwl_equivalent(g, g)


def test_permutation_equivariance_of_partitions():
    cfg = GeneratorConfig(n_nodes=5, n_events=4)
    g1, g2, mapping = generate_isomorphic_pair(cfg, seed=5)
    t1, t2 = cwl([g1, g2])
    for v, tr in t1.items():
        assert t2[mapping[v]] == tr


def test_bijection_vs_existence_modes():
    two = Cdg(StartGraph({"a": A, "b": A}, {}))
    three = Cdg(StartGraph({"x": A, "y": A, "z": A}, {}))
    assert graph_cwl_equivalent(two, three, mode=EXISTENCE)
    assert not graph_cwl_equivalent(two, three, mode=BIJECTION)


def test_first_divergence_reported():
    g1 = churn_cdg()
    g2 = generate(GeneratorConfig(n_nodes=4, n_events=7), seed=1)
    verdict = compare_graphs(g1, g2, mode=BIJECTION)
    assert not verdict.equivalent
    assert verdict.first_divergence is not None
    i = verdict.first_divergence
    from collections import Counter

    t1, t2 = verdict.trajectories
    assert Counter(tr[i] for tr in t1.values()) != Counter(tr[i] for tr in t2.values())


def test_node_cwl_equivalent_checks_length():
    with pytest.raises(LengthMismatchError):
        node_cwl_equivalent((1, 2), (1, 2, 3))
    assert node_cwl_equivalent((1, 2), (1, 2))
    assert not node_cwl_equivalent((1, 2), (1, 3))


def test_check_comparable_raises():
    g1 = Cdg(StartGraph({"a": A}, {}))
    g2 = Cdg(StartGraph({"a": (1.0, 2.0)}, {}))
    with pytest.raises(DimensionMismatchError):
        check_comparable([g1, g2])
    g3 = churn_cdg()
    with pytest.raises(TimestampMismatchError):
        check_comparable([g1, g3])
    with pytest.raises(TimestampMismatchError):
        compare_graphs(g1, g3)


def test_merged_snapshot_tags_and_joins():
    s = k3()
    merged, joint = merged_snapshot([s, s], [["a", "b", "c"], ["a", "b", "c"]])
    assert set(joint) == {(0, "a"), (0, "b"), (0, "c"), (1, "a"), (1, "b"), (1, "c")}
    assert len(merged.nodes) == 6
    assert len(merged.edges) == 6
    assert all(u[0] == v[0] for (u, v) in merged.edges)


def test_fixed_depth_trajectories():
    g = churn_cdg()
    shallow = cwl([g], depth=0)[0]
    live_colors = [tr[0] for v, tr in shallow.items() if tr[0] != BOTTOM]
    # depth 0 is attribute-only: nodes a and b share attrs at t0
    assert len(set(live_colors)) < len(live_colors)
