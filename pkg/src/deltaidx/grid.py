"""Two-dimensional grid of (reversed left part, right part) pairs at rule borders.

Every border inside a rule gives one point. For a block rule A -> A_1 ... A_s
the border after child i pairs rev(exp(A_i)) with exp(A_{i+1} ... A_s); a run
rule A -> A_1^s contributes the single pair (rev(exp(A_1)), exp(A_1)^(s-1)).
Axis strings are identified by handles and never materialized in full:
an x handle is a symbol c (string rev(exp(c))), a y handle is a pair
(A, border) (string exp(A)[border:]).

Rank intervals are half open: ``(lo, hi)`` covers ranks lo .. hi-1.
"""

from bisect import bisect_left, bisect_right

import numpy as np

from . import kernels
from .extraction import extract_range
from .rlslp import pack

BLOCK = 0
RUN = 1
KEY_LEN = 32


def first_positions(g):
    """0-based start of one occurrence of every symbol in S (-1 if unreachable)."""
    pos = [-1] * g.num_symbols
    pos[g.start] = 0
    for a in range(g.num_symbols - 1, g.sigma - 1, -1):
        p = pos[a]
        if p < 0:
            continue
        r = g.rules[a - g.sigma]
        if r.is_run:
            if pos[r.base] < 0:
                pos[r.base] = p
        else:
            off = p
            for c in r.children:
                if pos[c] < 0:
                    pos[c] = off
                off += g.exp_len[c]
    return pos


def enumerate_points(g, weights):
    """Point arrays in rule order: kind, parent, child, border, xsym, weight, mult, base_len."""
    kind, parent, child, border, xsym, weight, mult, base_len = ([] for _ in range(8))
    for i, r in enumerate(g.rules):
        a = g.sigma + i
        if r.is_run:
            L = g.exp_len[r.base]
            kind.append(RUN); parent.append(a); child.append(0); border.append(L)
            xsym.append(r.base); weight.append(weights[a]); mult.append(r.mult)
            base_len.append(L)
        else:
            off = 0
            for j, c in enumerate(r.children[:-1]):
                off += g.exp_len[c]
                kind.append(BLOCK); parent.append(a); child.append(j); border.append(off)
                xsym.append(c); weight.append(weights[a]); mult.append(1)
                base_len.append(0)
    as64 = lambda v: np.asarray(v, dtype=np.int64)
    return tuple(as64(v) for v in (kind, parent, child, border, xsym, weight, mult, base_len))


# ---------------------------------------------------------------- axis strings

class XAxis:
    """rev(exp(c)) for symbols c."""

    def __init__(self, g):
        self.g = g

    def length(self, c):
        return self.g.exp_len[c]

    def prefix(self, c, L):
        n = self.g.exp_len[c]
        s = extract_range(self.g, c, max(n - L, 0), n)
        return s[::-1]


class YAxis:
    """exp(A)[border:] for (A, border) pairs, packed as A * 2^40 + border."""

    SHIFT = 40

    def __init__(self, g):
        self.g = g

    def split(self, h):
        return h >> self.SHIFT, h & ((1 << self.SHIFT) - 1)

    def length(self, h):
        a, b = self.split(h)
        return self.g.exp_len[a] - b

    def prefix(self, h, L):
        a, b = self.split(h)
        return extract_range(self.g, a, b, b + L)


def sort_by_extraction(handles, axis):
    """Group handles into equal-string classes in lexicographic order.

    Compares K-character prefixes first and doubles the length only inside
    tied groups, so the work follows the longest shared prefixes.
    """
    result = []

    def refine(group, L):
        keyed = sorted(((axis.prefix(h, L), h) for h in group))
        i = 0
        res = []
        while i < len(keyed):
            j = i
            while j < len(keyed) and keyed[j][0] == keyed[i][0]:
                j += 1
            members = [h for _, h in keyed[i:j]]
            if len(members) > 1 and len(keyed[i][0]) == L:
                res.append((members, 2 * L))
            else:
                res.append((members, None))
            i = j
        return res

    work = [(sorted(set(handles)), KEY_LEN)]
    while work:
        members, L = work.pop()
        if L is None:
            result.append(members)
            continue
        parts = refine(members, L)
        work.extend(reversed(parts))
    return result


def _sparse_min(a):
    table = [a]
    p = 1
    while 2 * p <= len(a):
        prev = table[-1]
        table.append(np.minimum(prev[:-p], prev[p:]))
        p *= 2
    return table


def _interval_starts(rank, lcp_table, pos, lengths):
    """Smallest suffix-array rank whose suffix shares the first ``lengths`` chars with ``pos``."""
    cur = rank[pos].copy()
    for p in range(len(lcp_table) - 1, -1, -1):
        step = 1 << p
        cand = cur - step
        ok = cand >= 0
        idx = np.where(ok, cand + 1, 0)
        tab = lcp_table[p]
        idx = np.minimum(idx, len(tab) - 1)
        mins = tab[idx]
        move = ok & (mins >= lengths)
        cur = np.where(move, cand, cur)
    return cur


class TextOrder:
    """Sorts substrings of S (or of reversed S) via suffix arrays."""

    def __init__(self, text):
        self.text = np.ascontiguousarray(text, dtype=np.int64)
        n = len(self.text)
        self.sa = kernels.suffix_array(self.text)
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[self.sa] = np.arange(n)
        lcp = kernels.lcp_array(self.text, self.sa)
        self.table = _sparse_min(lcp)

    def keys(self, pos, lengths):
        """Sort key pairs (interval start, length) for substrings text[pos:pos+length]."""
        pos = np.asarray(pos, dtype=np.int64)
        lengths = np.asarray(lengths, dtype=np.int64)
        if len(pos) == 0:
            return np.zeros(0, dtype=np.int64), lengths
        return _interval_starts(self.rank, self.table, pos, lengths), lengths


def _dense_rank(k1, k2):
    """Ranks of (k1, k2) pairs; equal pairs share a rank. Returns (rank, order of first reps)."""
    order = np.lexsort((k2, k1))
    a, b = k1[order], k2[order]
    new = np.ones(len(order), dtype=bool)
    if len(order) > 1:
        new[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
    ranks_sorted = np.cumsum(new) - 1
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = ranks_sorted
    reps = order[new]
    return rank, reps


# ---------------------------------------------------------------- wavelet matrix

class WaveletMatrix:
    def __init__(self, values, weights, ids, nbits=None):
        values = np.asarray(values, dtype=np.int64)
        weights = np.asarray(weights, dtype=np.int64)
        ids = np.asarray(ids, dtype=np.int64)
        n = len(values)
        if nbits is None:
            top = int(values.max()) if n else 0
            nbits = max(1, top.bit_length())
        self.n = n
        self.nbits = nbits
        self.bits = []
        self.rank1 = []
        self.zeros = []
        self.cumw = []
        for lvl in range(nbits):
            bit = (values >> (nbits - 1 - lvl)) & 1
            self.bits.append(bit.astype(np.uint8))
            self.rank1.append(np.concatenate(([0], np.cumsum(bit))).astype(np.int64))
            self.cumw.append(np.concatenate(([0], np.cumsum(weights))).astype(np.int64))
            zero = bit == 0
            self.zeros.append(int(zero.sum()))
            order = np.concatenate((np.flatnonzero(zero), np.flatnonzero(~zero)))
            values, weights, ids = values[order], weights[order], ids[order]
        self.leaf_ids = ids
        self.leaf_weights = np.concatenate(([0], np.cumsum(weights))).astype(np.int64)

    @classmethod
    def from_bits(cls, bits, leaf_ids, weights_in_order):
        """Rebuild from the stored bit rows (weights given in the top-level order)."""
        self = cls.__new__(cls)
        self.nbits = len(bits)
        self.n = len(leaf_ids)
        self.bits = [np.asarray(b, dtype=np.uint8) for b in bits]
        self.rank1, self.zeros, self.cumw = [], [], []
        w = np.asarray(weights_in_order, dtype=np.int64)
        for b in self.bits:
            self.rank1.append(np.concatenate(([0], np.cumsum(b, dtype=np.int64))))
            self.cumw.append(np.concatenate(([0], np.cumsum(w))).astype(np.int64))
            zero = b == 0
            self.zeros.append(int(zero.sum()))
            w = np.concatenate((w[zero], w[~zero]))
        self.leaf_ids = np.asarray(leaf_ids, dtype=np.int64)
        self.leaf_weights = np.concatenate(([0], np.cumsum(w))).astype(np.int64)
        return self

    def _walk(self, p0, p1, y0, y1, want_sum):
        nb = self.nbits
        out = [] if not want_sum else 0
        stack = [(0, p0, p1, 0)]
        while stack:
            lvl, lo, hi, v = stack.pop()
            if lo >= hi:
                continue
            width = 1 << (nb - lvl)
            vlo, vhi = v, v + width
            if vhi <= y0 or vlo >= y1:
                continue
            if want_sum and y0 <= vlo and vhi <= y1:
                if lvl == nb:
                    out += int(self.leaf_weights[hi] - self.leaf_weights[lo])
                else:
                    cw = self.cumw[lvl]
                    out += int(cw[hi] - cw[lo])
                continue
            if lvl == nb:
                out.append(self.leaf_ids[lo:hi])
                continue
            r = self.rank1[lvl]
            a, b = int(r[lo]), int(r[hi])
            z = self.zeros[lvl]
            half = width >> 1
            stack.append((lvl + 1, z + a, z + b, v + half))
            stack.append((lvl + 1, lo - a, hi - b, v))
        return out

    def report(self, p0, p1, y0, y1):
        parts = self._walk(p0, p1, y0, y1, False)
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)

    def weight_sum(self, p0, p1, y0, y1):
        return self._walk(p0, p1, y0, y1, True)


# ---------------------------------------------------------------- the grid

class Grid:
    def __init__(self, g, kind, parent, child, border, xsym, weight, mult, base_len,
                 x_rank, y_rank, x_reps, y_reps, x_keys=None, y_keys=None, wm=None):
        self.g = g
        self.kind, self.parent, self.child, self.border = kind, parent, child, border
        self.xsym, self.weight, self.mult, self.base_len = xsym, weight, mult, base_len
        self.x_rank, self.y_rank = x_rank, y_rank
        self.x_reps, self.y_reps = x_reps, y_reps       # representative handle per rank
        self.xaxis, self.yaxis = XAxis(g), YAxis(g)
        self.x_keys = x_keys if x_keys is not None else [
            self.xaxis.prefix(int(h), KEY_LEN) for h in x_reps]
        self.y_keys = y_keys if y_keys is not None else [
            self.yaxis.prefix(int(h), KEY_LEN) for h in y_reps]
        self.order = np.lexsort((np.arange(len(x_rank)), x_rank))
        self.xs_sorted = x_rank[self.order]
        if wm is None:
            w = np.where(kind[self.order] == BLOCK, weight[self.order], 0)
            wm = WaveletMatrix(y_rank[self.order], w, self.order)
        self.wm = wm
        runs = np.flatnonzero(kind == RUN)
        runs = runs[np.lexsort((runs, x_rank[runs]))]
        self.run_ids = runs
        self.run_x = x_rank[runs]
        self.run_y = y_rank[runs]
        self._cache = ({}, {})

    def __len__(self):
        return len(self.kind)

    @property
    def num_x(self):
        return len(self.x_reps)

    @property
    def num_y(self):
        return len(self.y_reps)

    def y_handle(self, pid):
        return (int(self.parent[pid]) << YAxis.SHIFT) | int(self.border[pid])

    # -- prefix ranges

    def _prefix(self, which, r, L):
        cache = self._cache[which]
        got = cache.get(r)
        if got is not None and (len(got[0]) >= L or got[1]):
            return got[0][:L]
        axis = self.xaxis if which == 0 else self.yaxis
        reps = self.x_reps if which == 0 else self.y_reps
        h = int(reps[r])
        s = axis.prefix(h, L)
        cache[r] = (s, len(s) < L)
        return s

    def prefix_range(self, which, Q):
        """Ranks of the axis strings that start with Q (``which`` 0 = x, 1 = y)."""
        keys = self.x_keys if which == 0 else self.y_keys
        if len(Q) == 0:
            return 0, len(keys)
        q = Q[:KEY_LEN]
        lq = len(q)
        lo = bisect_left(keys, q, key=lambda s: s[:lq])
        hi = bisect_right(keys, q, lo=lo, key=lambda s: s[:lq])
        if len(Q) <= KEY_LEN or lo >= hi:
            return lo, hi
        L = len(Q)
        pref = lambda r: self._prefix(which, r, L)
        ranks = range(lo, hi)
        lo2 = bisect_left(ranks, Q, key=pref)
        hi2 = bisect_right(ranks, Q, lo=lo2, key=pref)
        return lo + lo2, lo + hi2

    # -- rectangles

    def _positions(self, xr):
        x0, x1 = xr
        p0 = int(np.searchsorted(self.xs_sorted, x0, "left"))
        p1 = int(np.searchsorted(self.xs_sorted, x1, "left"))
        return p0, p1

    def range_report(self, xr, yr):
        """Point ids with x_rank in xr and y_rank in yr."""
        if xr[0] >= xr[1] or yr[0] >= yr[1]:
            return np.zeros(0, dtype=np.int64)
        p0, p1 = self._positions(xr)
        return self.wm.report(p0, p1, yr[0], yr[1])

    def range_weight_sum(self, xr, yr):
        """Sum of weights of block points in the rectangle."""
        if xr[0] >= xr[1] or yr[0] >= yr[1]:
            return 0
        p0, p1 = self._positions(xr)
        return self.wm.weight_sum(p0, p1, yr[0], yr[1])

    def run_points_in(self, xr, yr):
        if xr[0] >= xr[1] or yr[0] >= yr[1] or len(self.run_ids) == 0:
            return np.zeros(0, dtype=np.int64)
        a = int(np.searchsorted(self.run_x, xr[0], "left"))
        b = int(np.searchsorted(self.run_x, xr[1], "left"))
        ys = self.run_y[a:b]
        return self.run_ids[a:b][(ys >= yr[0]) & (ys < yr[1])]


def build_grid(g, weights, text=None):
    """Build the grid; with ``text`` the axes are sorted through suffix arrays."""
    kind, parent, child, border, xsym, weight, mult, base_len = enumerate_points(g, weights)
    yh = (parent << YAxis.SHIFT) | border
    if text is not None and len(kind):
        text = np.asarray(text, dtype=np.int64)
        n = len(text)
        pos = np.asarray(first_positions(g), dtype=np.int64)
        exp_len = np.asarray(g.exp_len, dtype=np.int64)
        fwd = TextOrder(text)
        rev = TextOrder(text[::-1])
        # x: rev(exp(c)) starts at n - (pos[c] + |c|) in reversed S
        xs = np.unique(xsym)
        xk1, xk2 = rev.keys(n - (pos[xs] + exp_len[xs]), exp_len[xs])
        xr, xreps = _dense_rank(xk1, xk2)
        x_rank = xr[np.searchsorted(xs, xsym)]
        x_reps = xs[xreps]
        yk1, yk2 = fwd.keys(pos[parent] + border, exp_len[parent] - border)
        y_rank, yreps = _dense_rank(yk1, yk2)
        y_reps = yh[yreps]
        x_keys = []
        for c in x_reps.tolist():
            end = int(pos[c]) + int(exp_len[c])
            x_keys.append(pack(text[end - min(KEY_LEN, int(exp_len[c])):end][::-1].tolist(), g.sigma))
        y_keys = []
        for h in y_reps.tolist():
            a, b = h >> YAxis.SHIFT, h & ((1 << YAxis.SHIFT) - 1)
            st = int(pos[a]) + b
            y_keys.append(pack(text[st:st + min(KEY_LEN, int(exp_len[a]) - b)].tolist(), g.sigma))
    else:
        xs_groups = sort_by_extraction(xsym.tolist(), XAxis(g))
        ys_groups = sort_by_extraction(yh.tolist(), YAxis(g))
        x_reps = np.asarray([grp[0] for grp in xs_groups], dtype=np.int64)
        y_reps = np.asarray([grp[0] for grp in ys_groups], dtype=np.int64)
        xmap = {h: r for r, grp in enumerate(xs_groups) for h in grp}
        ymap = {h: r for r, grp in enumerate(ys_groups) for h in grp}
        x_rank = np.asarray([xmap[h] for h in xsym.tolist()], dtype=np.int64)
        y_rank = np.asarray([ymap[h] for h in yh.tolist()], dtype=np.int64)
        x_keys = y_keys = None
    return Grid(g, kind, parent, child, border, xsym, weight, mult, base_len,
                x_rank, y_rank, x_reps, y_reps, x_keys, y_keys)
