"""Parse a pattern with the text's stored rank orders and derive its candidate cuts."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .compressor import active_limit, ell
from .errors import InvalidArgumentError

MCUT = "mcut"
EXHAUSTIVE = "exhaustive"


def alpha(k):
    """Window radius floor(8 * ell_k); ell_0 = 3/4."""
    return math.floor(8 * ell(k))


def height_bound(m):
    """12 + 2 floor(log_{4/3} m)."""
    t = 0
    while 4 ** (t + 1) <= m * 3 ** (t + 1):
        t += 1
    return 12 + 2 * t


@dataclass
class PatternParse:
    m: int
    levels: list            # level k -> list of symbol ids (foreign ids >= num_symbols)
    lengths: list           # level k -> list of expansion lengths
    foreign: dict = field(default_factory=dict)   # foreign id -> level it was created at

    @property
    def h(self):
        return len(self.levels) - 1

    def boundaries(self, k):
        """Interior phrase ends of level k as prefix lengths in [1, m-1]."""
        out = []
        pos = 0
        for L in self.lengths[k][:-1]:
            pos += L
            out.append(pos)
        return out

    def spans(self, k):
        pos = 0
        for a, L in zip(self.levels[k], self.lengths[k]):
            yield a, pos, pos + L
            pos += L

    def impossible(self):
        """True when some foreign entry sits where every occurrence would have to agree.

        A foreign entry of level k spanning [s, e) with s >= 2*alpha_k and
        m - e >= alpha_k would have to be a grammar symbol in any occurrence.
        Foreign terminals (characters absent from the text) reject anywhere.
        """
        if not self.foreign:
            return False
        for a, s, e in self.spans(0):
            if a in self.foreign:
                return True
        for k in range(1, len(self.levels)):
            ak = alpha(k)
            for a, s, e in self.spans(k):
                if a in self.foreign and s >= 2 * ak and self.m - e >= ak:
                    return True
        return False


@dataclass
class CutSet:
    cuts: list
    alphas: list
    mode: str

    def __len__(self):
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)


class _Lookup:
    def __init__(self, index):
        self.exp_len = index.grammar.exp_len
        self.nsym = index.grammar.num_symbols
        self.block_lookup = index.block_lookup
        self.run_lookup = index.run_lookup
        self.perms = index.perms
        self.num_levels = index.num_levels


def parse_pattern(ids, index):
    """Level-by-level parse of ``ids`` (terminal ids, -1 for unknown characters).

    ``index`` needs ``grammar``, ``perms``, ``block_lookup``, ``run_lookup``
    and ``num_levels``; a CompressionResult or an Index both qualify.
    """
    m = len(ids)
    if m == 0:
        raise InvalidArgumentError("empty pattern")
    lk = _Lookup(index)
    exp_len = lk.exp_len
    foreign = {}
    flen = {}
    next_id = lk.nsym

    def new_foreign(length, k):
        nonlocal next_id
        a = next_id
        next_id += 1
        foreign[a] = k
        flen[a] = length
        return a

    cur = []
    lens = []
    for c in ids:
        c = int(c)
        if c < 0:
            cur.append(new_foreign(1, 0))
        else:
            cur.append(c)
        lens.append(1)
    levels = [cur]
    lengths = [lens]
    k = 0
    while len(cur) > 1 and k < lk.num_levels:
        k += 1
        lim = active_limit(k)
        act = np.fromiter(((a not in foreign and exp_len[a] <= lim) for a in cur),
                          dtype=np.uint8, count=len(cur))
        seq = np.asarray(cur, dtype=np.int64)
        if k % 2:
            bnd = kernels.rle_boundaries(seq, act)
        else:
            pi = lk.perms.get(k, {})
            rank = np.fromiter((pi.get(a, 0) if act[i] else 0 for i, a in enumerate(cur)),
                               dtype=np.int64, count=len(cur))
            bnd = kernels.bc_boundaries(seq, act, rank)
        cuts = np.flatnonzero(bnd).tolist()
        nxt, nlens = [], []
        s = 0
        for e in cuts + [len(cur) - 1]:
            group = cur[s:e + 1]
            L = sum(lens[s:e + 1])
            if len(group) == 1:
                nxt.append(group[0])
            elif k % 2:
                a = lk.run_lookup.get((group[0], len(group)))
                nxt.append(a if a is not None else new_foreign(L, k))
            else:
                a = lk.block_lookup.get(tuple(group))
                nxt.append(a if a is not None else new_foreign(L, k))
            nlens.append(L)
            s = e + 1
        cur, lens = nxt, nlens
        levels.append(cur)
        lengths.append(lens)
    return PatternParse(m=m, levels=levels, lengths=lengths, foreign=foreign)


def candidate_cuts(parse, mode=MCUT):
    m = parse.m
    if m < 2:
        return CutSet([], [], mode)
    if mode == EXHAUSTIVE:
        return CutSet(list(range(1, m)), [], mode)
    if mode != MCUT:
        raise InvalidArgumentError(f"unknown cut mode {mode!r}")
    chosen = set()
    alphas = []
    for k in range(len(parse.levels)):
        a1 = alpha(k + 1)
        alphas.append(a1)
        middle = None
        for b in parse.boundaries(k):
            if b < 2 * a1 or m - b <= a1:
                chosen.add(b)
            elif middle is None:
                middle = b
        if middle is not None:
            chosen.add(middle)
    return CutSet(sorted(chosen), alphas, mode)
