import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfxsim.treegraph import (
    Block,
    DanglingEdgeError,
    DuplicateBlockError,
    InvalidBlockError,
    NotEpochedError,
    RewardParams,
    TreeGraph,
    UnknownBlockError,
    apply_transactions,
    block_reward,
    block_reward_drip,
    genesis,
    graph_rewards,
)
from cfxsim.treegraph import figure1, snapshot

from . import oracles

F = figure1.ID


def chain(n):
    return TreeGraph([genesis()] + [Block(i, i - 1) for i in range(1, n)])


# -- insertion ----------------------------------------------------------------


def test_insert_genesis():
    g = TreeGraph()
    g.insert(genesis())
    assert len(g) == 1
    assert g.pivot_chain() == [0]


def test_insert_single_child_extends_pivot():
    g = TreeGraph([genesis()])
    g.insert(Block(1, 0))
    assert g.pivot_chain() == [0, 1]


def test_dangling_parent_rejected():
    g = TreeGraph([genesis()])
    with pytest.raises(DanglingEdgeError, match="dangling edge"):
        g.insert(Block(2, 1))


def test_dangling_reference_rejected():
    g = TreeGraph([genesis()])
    with pytest.raises(DanglingEdgeError):
        g.insert(Block(1, 0, {7}))


def test_duplicate_rejected():
    g = chain(2)
    with pytest.raises(DuplicateBlockError):
        g.insert(Block(1, 0))


@pytest.mark.parametrize(
    "block",
    [Block(1, 1), Block(1, 0, {1}), Block(1, 0, {0}), Block(5, None)],
    ids=["self-parent", "self-reference", "parent-in-refs", "second-genesis"],
)
def test_malformed_blocks_rejected(block):
    g = TreeGraph([genesis()])
    with pytest.raises(InvalidBlockError):
        g.insert(block)


def test_genesis_must_come_first():
    with pytest.raises(InvalidBlockError):
        TreeGraph().insert(Block(1, 0))
    with pytest.raises(InvalidBlockError):
        TreeGraph().insert(Block(3, None))


def test_failed_insert_leaves_graph_unchanged():
    g = chain(3)
    with pytest.raises(DanglingEdgeError):
        g.insert(Block(9, 2, {8}))
    assert len(g) == 3 and 9 not in g
    assert g.pivot_chain() == [0, 1, 2]


def test_unknown_block_lookup():
    with pytest.raises(UnknownBlockError):
        chain(2).anticone(5)


# -- pivot, epochs, order -------------------------------------------------------


def test_figure1_pivot_chain():
    g = figure1.build()
    assert figure1.names(g.pivot_chain()) == ["Genesis", "A", "C", "E", "H"]


def test_single_chain_pivot_and_epochs():
    g = chain(3)
    assert g.pivot_chain() == [0, 1, 2]
    assert [e.members for e in g.partition_epochs()] == [(0,), (1,), (2,)]


def test_pivot_tie_broken_by_smaller_id():
    g = TreeGraph([genesis(), Block(2, 0), Block(1, 0)])
    assert g.pivot_chain() == [0, 1]


def test_figure1_epochs():
    g = figure1.build()
    eps = g.partition_epochs()
    assert [e.pivot_block for e in eps] == [F[n] for n in ["Genesis", "A", "C", "E", "H"]]
    assert g.epoch_of(F["J"]) == g.epoch_of(F["H"]) == 4
    assert not g.unepoched()
    for e in eps:
        assert e.pivot_block in e.members


def test_figure1_total_order():
    g = figure1.build()
    order = g.total_order()
    assert order.index(F["A"]) < order.index(F["F"])
    assert order.index(F["J"]) < order.index(F["H"])
    assert sorted(order) == sorted(g.ids())


def test_unreferenced_off_pivot_block_is_unepoched():
    g = TreeGraph([genesis(), Block(1, 0), Block(2, 1), Block(3, 0)])
    assert g.pivot_chain() == [0, 1, 2]
    assert g.unepoched() == [3]
    assert g.epoch_of(3) is None
    assert 3 not in g.total_order()


def test_incomparable_same_epoch_ordered_by_id():
    # 9 and 5 are siblings under genesis; 10 extends 5 and references 9
    g = TreeGraph([genesis(), Block(9, 0), Block(5, 0), Block(10, 5, {9})])
    assert g.pivot_chain() == [0, 5, 10]
    order = g.total_order()
    assert order == [0, 5, 9, 10]


def test_past_and_future_sets():
    g = figure1.build()
    assert g.past(F["F"]) == {F[n] for n in ["Genesis", "A", "B", "C", "E"]}
    assert g.future(F["F"]) == {F[n] for n in ["J", "I", "H"]}


# -- anticone -----------------------------------------------------------------


def test_figure1_anticone_of_F():
    g = figure1.build()
    assert g.anticone(F["F"]) == {F["D"], F["G"]}


def test_genesis_anticone_empty():
    assert figure1.build().anticone(0) == set()


def test_chain_tip_anticone_empty():
    g = chain(6)
    assert g.anticone(5) == set()


def test_anticone_of_unepoched_block_deferred():
    g = TreeGraph([genesis(), Block(1, 0), Block(2, 1), Block(3, 0)])
    with pytest.raises(NotEpochedError):
        g.anticone(3)


def test_anticone_horizon_excludes_later_epochs():
    # side block 1 off genesis; main chain 2..14; 14 references 1 late
    blocks = [genesis(), Block(1, 0), Block(2, 0)]
    blocks += [Block(i, i - 1) for i in range(3, 15)]
    blocks[-1] = Block(14, 13, {1})
    g = TreeGraph(blocks)
    assert g.epoch_of(1) == 13
    assert g.epoch_of(2) == 1
    # every main block 2..13 is incomparable with 1; all lie in epochs <= 13+10
    assert g.anticone(1) == set(range(2, 14))
    g0 = TreeGraph(blocks, anticone_horizon=0)
    assert g0.anticone(2) == set()  # block 1 sits in epoch 13 > 1 + 0
    g3 = TreeGraph(blocks, anticone_horizon=12)
    assert g3.anticone(2) == {1}
    g4 = TreeGraph(blocks, anticone_horizon=11)
    assert g4.anticone(2) == set()


def test_maturity():
    g = chain(12)
    assert g.is_mature(1)
    assert not g.is_mature(2)


# -- rewards ------------------------------------------------------------------


@pytest.mark.parametrize(
    "a,expected", [(0, Fraction(1)), (100, Fraction(0)), (10, Fraction(99, 100)), (250, Fraction(0))]
)
def test_block_reward_examples(a, expected):
    assert block_reward(RewardParams(1), a) == expected


def test_block_reward_drip_floor():
    assert block_reward_drip(RewardParams(10**18), 3) == 10**18 * 9991 // 10000
    assert block_reward_drip(RewardParams(7), 50) == 5  # floor(7 * 0.75)


def test_reward_params_validation():
    with pytest.raises(ValueError):
        RewardParams(1, 0)


@given(st.integers(0, 300), st.integers(1, 10**20))
def test_reward_bounds_and_monotone(a, base):
    p = RewardParams(base)
    r = block_reward(p, a)
    assert 0 <= r <= base
    assert block_reward(p, a + 1) <= r


def test_graph_rewards_only_mature():
    g = chain(15)
    rewards = graph_rewards(g, RewardParams(100))
    assert set(rewards) == set(range(5))
    assert all(v == 100 for v in rewards.values())


def test_graph_rewards_respects_param_horizon():
    g = chain(4)
    rewards = graph_rewards(g, RewardParams(100, 100, 1))
    assert set(rewards) == {0, 1, 2}
    assert g.anticone_horizon == 10


# -- transactions -------------------------------------------------------------


def test_duplicate_tx_first_occurrence_wins():
    blocks = figure1.blocks()
    by_id = {b.id: b for b in blocks}
    by_id[F["J"]] = Block(F["J"], F["F"], frozenset(), tx_ids=(7,))
    by_id[F["H"]] = Block(F["H"], F["E"], by_id[F["H"]].references, tx_ids=(7, 8))
    g = TreeGraph(blocks[:1] + [by_id[b.id] for b in blocks[1:]])
    executed = apply_transactions(g)
    assert executed == [(7, F["J"]), (8, F["H"])]


def test_no_duplicates_concatenates():
    g = TreeGraph([genesis(), Block(1, 0, tx_ids=(1, 2)), Block(2, 1, tx_ids=(3,))])
    assert [tx for tx, _ in apply_transactions(g)] == [1, 2, 3]


def test_duplicate_within_block_discarded():
    g = TreeGraph([genesis(), Block(1, 0, tx_ids=(4, 4, 5))])
    assert apply_transactions(g) == [(4, 1), (5, 1)]


# -- snapshot -----------------------------------------------------------------


def test_snapshot_genesis_line():
    assert snapshot.dumps(TreeGraph([genesis()])) == "0 - - 0 0.0\n"


def test_snapshot_round_trip():
    g = figure1.build()
    text = snapshot.dumps(g)
    h = snapshot.loads(text)
    assert snapshot.dumps(h) == text
    assert h.pivot_chain() == g.pivot_chain()


def test_snapshot_parse_errors():
    with pytest.raises(snapshot.SnapshotError):
        snapshot.loads("0 - -\n")
    with pytest.raises(snapshot.SnapshotError):
        snapshot.loads("0 - - x 0.0\n")


# -- properties against brute force ---------------------------------------------


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 30))
def test_pivot_and_epochs_match_oracle(seed, n):
    blocks = oracles.random_graph(random.Random(seed), n, close=False)
    g = TreeGraph(blocks)
    assert g.pivot_chain() == oracles.pivot(blocks)
    got = [set(e.members) for e in g.partition_epochs()]
    assert got == oracles.epochs(blocks)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 30))
def test_epoch_partition_disjoint_and_covering(seed, n):
    g = TreeGraph(oracles.random_graph(random.Random(seed), n))
    members = [x for e in g.partition_epochs() for x in e.members]
    assert len(members) == len(set(members)) == len(g)
    assert not g.unepoched()


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 25), st.integers(0, 10))
def test_anticone_matches_bruteforce(seed, n, horizon):
    blocks = oracles.random_graph(random.Random(seed), n)
    g = TreeGraph(blocks, anticone_horizon=horizon)
    for b in g.ids():
        assert g.anticone(b) == oracles.anticone(blocks, b, horizon)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 30))
def test_views_independent_of_insertion_order(seed, n):
    rng = random.Random(seed)
    ids = [0] + rng.sample(range(1, 10**6), n)
    blocks = oracles.random_graph(rng, n, id_space=ids)
    a, b = TreeGraph(blocks), TreeGraph(oracles.random_topological(blocks, rng))
    assert a.pivot_chain() == b.pivot_chain()
    assert a.partition_epochs() == b.partition_epochs()
    assert a.total_order() == b.total_order()


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 30))
def test_total_order_is_topological(seed, n):
    blocks = oracles.random_graph(random.Random(seed), n)
    g = TreeGraph(blocks)
    pos = {b: i for i, b in enumerate(g.total_order())}
    for blk in blocks:
        for p in blk.predecessors():
            assert pos[p] < pos[blk.id]


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 30), st.integers(1, 5))
def test_pivot_never_shortens_under_honest_growth(seed, n, extra):
    rng = random.Random(seed)
    g = TreeGraph(oracles.random_graph(rng, n, close=False))
    next_id = n
    for _ in range(extra):
        before = g.pivot_chain()
        g.insert(Block(next_id, before[-1], frozenset(t for t in g.tips() if t != before[-1])))
        after = g.pivot_chain()
        assert len(after) >= len(before)
        assert after[: len(before)] == before
        next_id += 1
