import numpy as np
from hypothesis import given, strategies as st

import oracles
from deltaidx import CompressorConfig, compress, corpus, symbol_weights
from deltaidx.grid import (BLOCK, RUN, KEY_LEN, WaveletMatrix, XAxis, YAxis, build_grid,
                           enumerate_points, first_positions, sort_by_extraction)

texts = st.tuples(st.integers(1, 3), st.binary(min_size=2, max_size=250)).map(
    lambda t: bytes(x % t[0] for x in t[1]))


def grammar_of(text, seed=0):
    return compress(list(text), max(text) + 1, CompressorConfig(seed=seed)).grammar


def axis_strings(grid, g):
    memo = {}
    xs, ys = [], []
    for pid in range(len(grid)):
        xs.append(oracles.expansion(g, int(grid.xsym[pid]), memo)[::-1])
        a, b = int(grid.parent[pid]), int(grid.border[pid])
        ys.append(oracles.expansion(g, a, memo)[b:])
    return xs, ys


@given(texts, st.integers(0, 3))
def test_points_match_full_expansions(text, seed):
    g = grammar_of(text, seed)
    w = symbol_weights(g)
    kind, parent, child, border, xsym, weight, mult, base_len = enumerate_points(g, w)
    memo = {}
    got = sorted(zip((oracles.expansion(g, int(c), memo)[::-1] for c in xsym),
                     (oracles.expansion(g, int(a), memo)[int(b):] for a, b in zip(parent, border)),
                     parent.tolist(), border.tolist(), kind.tolist()))
    assert got == sorted(oracles.grid_points(g))
    assert all(weight[i] == w[parent[i]] for i in range(len(kind)))


@given(texts, st.booleans())
def test_ranks_follow_string_order(text, use_text):
    g = grammar_of(text)
    ids = np.frombuffer(text, dtype=np.uint8)
    grid = build_grid(g, symbol_weights(g), text=ids if use_text else None)
    xs, ys = axis_strings(grid, g)
    for strings, rank in ((xs, grid.x_rank), (ys, grid.y_rank)):
        for i in range(len(strings)):
            for j in range(len(strings)):
                assert (strings[i] < strings[j]) == (rank[i] < rank[j])


@given(texts, st.data())
def test_prefix_range_matches_naive(text, data):
    g = grammar_of(text)
    grid = build_grid(g, symbol_weights(g), text=np.frombuffer(text, dtype=np.uint8))
    xs, ys = axis_strings(grid, g)
    for which, strings, rank in ((0, xs, grid.x_rank), (1, ys, grid.y_rank)):
        distinct = [None] * (int(rank.max()) + 1 if len(rank) else 0)
        for s, r in zip(strings, rank.tolist()):
            distinct[r] = s
        pick = data.draw(st.sampled_from(distinct)) if distinct else b""
        L = data.draw(st.integers(0, len(pick)))
        Q = data.draw(st.sampled_from([pick[:L], pick[:L] + b"\x00", bytes([2]) + pick[:L]]))
        want = oracles.prefix_range(distinct, Q)
        got = grid.prefix_range(which, Q)
        if want is None:
            assert got[0] >= got[1]
        else:
            assert got == want


def test_long_prefix_queries_refine_past_key_length():
    text = corpus.mutated_repeat(64, 16, 0.02, 1, 2)
    ids = np.frombuffer(text, dtype=np.uint8) - ord("a")
    g = compress(ids, 2).grammar
    grid = build_grid(g, symbol_weights(g), text=ids)
    xs, ys = axis_strings(grid, g)
    distinct = sorted(set(ys))
    for s in distinct[::7]:
        for L in (KEY_LEN + 1, 2 * KEY_LEN + 5, len(s)):
            Q = bytes(s[:L])
            assert grid.prefix_range(1, Q) == oracles.prefix_range(distinct, Q)


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 5)), min_size=1, max_size=60),
       st.data())
def test_wavelet_matrix(points, data):
    vals = np.array([v for v, _ in points])
    w = np.array([x for _, x in points])
    wm = WaveletMatrix(vals, w, np.arange(len(points)))
    n = len(points)
    p0 = data.draw(st.integers(0, n))
    p1 = data.draw(st.integers(p0, n))
    y0 = data.draw(st.integers(0, 21))
    y1 = data.draw(st.integers(y0, 22))
    inside = [i for i in range(p0, p1) if y0 <= vals[i] < y1]
    assert sorted(wm.report(p0, p1, y0, y1).tolist()) == inside
    assert wm.weight_sum(p0, p1, y0, y1) == int(w[inside].sum())
    again = WaveletMatrix.from_bits(wm.bits, wm.leaf_ids, w)
    assert again.weight_sum(p0, p1, y0, y1) == wm.weight_sum(p0, p1, y0, y1)


def test_sort_by_extraction_groups_equal_strings():
    g = grammar_of(b"\x00\x01" * 40 + b"\x01")
    handles = list(range(g.num_symbols))
    groups = sort_by_extraction(handles, XAxis(g))
    strings = [g.expand(grp[0])[::-1] for grp in groups]
    assert strings == sorted(set(strings))
    assert sorted(h for grp in groups for h in grp) == handles


def test_first_positions():
    text = b"\x00\x01\x00\x00\x01\x00\x01\x00"
    g = grammar_of(text)
    for a, p in enumerate(first_positions(g)):
        if p >= 0:
            e = g.expand(a)
            assert text[p:p + len(e)] == e


def test_run_point_multipliers():
    # run A -> X^s with a pattern of length m cut after q chars
    for s in range(2, 7):
        for L in (1, 2, 3):
            for m in range(2, s * L + 1):
                for q in range(1, min(L, m - 1) + 1):
                    want = oracles.run_placements(s, L, m, q)
                    assert max(s - -(-(m - q) // L), 0) == want


def test_axis_prefixes():
    g = grammar_of(b"\x00\x01\x01\x00\x02")
    y = YAxis(g)
    h = (g.start << YAxis.SHIFT) | 1
    assert y.prefix(h, 3) == b"\x01\x01\x00"
    assert y.length(h) == 4
    assert XAxis(g).prefix(g.start, 2) == b"\x02\x00"


def test_kinds_present():
    g = grammar_of(b"\x00" * 9 + b"\x01\x00")
    grid = build_grid(g, symbol_weights(g))
    assert RUN in grid.kind.tolist() and BLOCK in grid.kind.tolist()
