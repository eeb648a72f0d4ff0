import pytest
from hypothesis import given, strategies as st

import oracles
from deltaidx import (RLSLP, CompressorConfig, Rule, build_grammar_tree, compress,
                      symbol_weights)
from deltaidx.errors import InvalidArgumentError
from deltaidx.rlslp import block, occurrence_slots, run


def toy():
    # 0=a 1=b; 2 -> ab, 3 -> 2^3, 4 -> 3 a
    return RLSLP(2, [block(0, 1), run(2, 3), block(3, 0)], start=4)


def test_expand_and_lengths():
    g = toy()
    assert g.expand(g.start) == bytes([0, 1] * 3 + [0])
    assert g.n == 7
    assert g.exp_len == [1, 1, 2, 6, 7]
    assert g.size == 2 + 2 + 2
    assert g.height() == 3
    assert g.validate() == []


def test_rule_helpers():
    r = run(5, 4)
    assert r.is_run and r.base == 5 and r.mult == 4
    assert not block(1, 2).is_run
    assert Rule((1, 2)) == block(1, 2)


def test_validate_flags_problems():
    with pytest.raises(InvalidArgumentError):
        RLSLP(2, [block(0, 3)], start=2)
    bad = RLSLP(2, [block(0, 3)], start=2, exp_len=[1, 1, 2])
    assert any("out of order" in p for p in bad.validate())
    wrong = RLSLP(2, [block(0, 1)], start=2, exp_len=[1, 1, 5])
    assert any("length 5" in p for p in wrong.validate())
    short = RLSLP(2, [block(0)], start=2)
    assert any("arity" in p for p in short.validate())


def test_expansion_length_rejects_bad_symbol():
    with pytest.raises(InvalidArgumentError):
        toy().expansion_length(99)


def test_period_check_flags_bad_runs():
    # (aa)^2 has period 1, not 2
    g = RLSLP(1, [run(0, 2), run(1, 2)], start=2)
    assert g.check_runlength_periods() == [(2, 1, 2)]
    assert toy().check_runlength_periods() == []


def test_weights_match_parse_tree():
    g = toy()
    assert symbol_weights(g) == oracles.parse_tree_counts(g)


@given(st.binary(min_size=1, max_size=200).map(lambda b: bytes(x % 3 for x in b)),
       st.integers(0, 3))
def test_compressed_weights_and_slots(text, seed):
    g = compress(list(text), 3, CompressorConfig(seed=seed)).grammar
    assert g.expand(g.start) == text
    w = symbol_weights(g)
    assert w == oracles.parse_tree_counts(g)
    slots = occurrence_slots(g)
    # every parse-tree node except the root is one repetition of one slot
    for a in range(g.num_symbols):
        if a == g.start:
            continue
        assert w[a] == sum(w[p] * reps for p, _, reps, _ in slots[a])


@given(st.binary(min_size=1, max_size=150).map(lambda b: bytes(x % 2 for x in b)))
def test_grammar_tree_partition(text):
    g = compress(list(text), 2).grammar
    tree, part = build_grammar_tree(g)
    # one internal node per reachable nonterminal
    assert set(tree.internal_node) == {a for a, c in enumerate(oracles.parse_tree_counts(g))
                                       if c and a >= g.sigma}
    # leaves tile the text left to right
    assert part.ends[-1] == len(text)
    prev = 0
    for v, e in zip(part.leaves, part.ends):
        assert tree.start[v] == prev
        assert e - prev == tree.node_length(v)
        prev = e
    for pos in (1, len(text)):
        v = part.leaf_at(pos)
        assert tree.start[v] < pos <= tree.start[v] + tree.node_length(v)
