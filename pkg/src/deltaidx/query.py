"""The index: build, locate, count.

An occurrence of P (m >= 2) has a unique lowest parse-tree node covering
it. There it crosses exactly one border between consecutive children (or
consecutive copies of a run base), which is a grid point with cut q; this
is the primary occurrence. All other copies of that node are reached by
pushing the (symbol, offset) pair up through every place the symbol is used.
"""

import heapq
import math
import threading
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alphabet import Alphabet
from .compressor import CompressorConfig, compress
from .errors import InvalidArgumentError
from .extraction import FingerprintTable, draw_base, extract_substring
from .grid import BLOCK, build_grid
from .measures import substring_complexity
from .pattern import MCUT, candidate_cuts, parse_pattern
from .rlslp import occurrence_slots, pack, symbol_weights


# ---------------------------------------------------------------- short trie

class ShortTrie:
    """All substrings of S of length <= ell, kept as the sorted distinct length-ell windows.

    A string of length <= ell occurs in S iff it prefixes some window, which
    is one binary search. The implied trie has one node per distinct prefix.
    """

    def __init__(self, ell, windows):
        self.ell = ell
        self.windows = windows

    @classmethod
    def build(cls, ids, ell, sigma):
        if ell < 1:
            raise InvalidArgumentError("trie length must be positive")
        seq = ids.tolist()
        n = len(seq)
        wins = {pack(seq[i:i + ell], sigma) for i in range(n)}
        return cls(ell, sorted(wins))

    def __contains__(self, q):
        if len(q) > self.ell:
            raise InvalidArgumentError("query longer than the trie depth")
        i = bisect_left(self.windows, q)
        return i < len(self.windows) and self.windows[i][:len(q)] == q

    def node_count(self):
        total = 1
        prev = None
        for w in self.windows:
            common = 0
            if prev is not None:
                lim = min(len(prev), len(w))
                while common < lim and prev[common] == w[common]:
                    common += 1
            total += len(w) - common
            prev = w
        return total


# ---------------------------------------------------------------- index

@dataclass
class IndexConfig:
    seed: int = 0
    cap_height: bool = True
    retries: int = 5
    threshold: float = 64.0
    trie_len: int = None
    keep_levels: bool = False
    tokens: bool = False
    early_reject: bool = True
    use_trie: bool = True


class Index:
    def __init__(self, alphabet, grammar, perms, num_levels, block_lookup, run_lookup,
                 grid, trie, fp_base, seed=0, capped=True, delta=Fraction(1),
                 bound_term=0.0, warning=False, weights=None, slots=None):
        self.alphabet = alphabet
        self.grammar = grammar
        self.perms = perms
        self.num_levels = num_levels
        self.block_lookup = block_lookup
        self.run_lookup = run_lookup
        self.grid = grid
        self.trie = trie
        self.fp_base = fp_base
        self.seed = seed
        self.capped = capped
        self.delta = delta
        self.bound_term = bound_term
        self.warning = warning
        self.weights = weights if weights is not None else symbol_weights(grammar)
        self._slots = slots if slots is not None else occurrence_slots(grammar)
        self.fingerprints = FingerprintTable(grammar, fp_base)
        self.early_reject = True
        self.use_trie = True
        self.compression = None          # set by build_index
        self._lock = threading.Lock()
        self.duplicates = 0
        self.max_cuts = 0

    @property
    def n(self):
        return self.grammar.n

    @property
    def sigma(self):
        return self.grammar.sigma

    @property
    def size(self):
        return self.grammar.size

    def _note(self, dups, ncuts):
        with self._lock:
            self.duplicates += dups
            if ncuts > self.max_cuts:
                self.max_cuts = ncuts

    # -- pattern handling

    def encode(self, pattern):
        if isinstance(pattern, (list, tuple, np.ndarray)):
            ids = [int(c) for c in pattern]
        else:
            ids = self.alphabet.encode_pattern(pattern)
        if not ids:
            raise InvalidArgumentError("empty pattern")
        return ids

    def _trie_rejects(self, ids):
        if not self.use_trie or self.trie is None or len(ids) > self.trie.ell:
            return False
        if min(ids) < 0:
            return True
        return pack(ids, self.sigma) not in self.trie

    def _prepare(self, ids, mode):
        """Return (parse, cuts) or None when P provably does not occur."""
        if self._trie_rejects(ids):
            return None
        if min(ids) < 0:
            return None
        parse = parse_pattern(ids, self)
        if self.early_reject and parse.impossible():
            return None
        cuts = candidate_cuts(parse, mode)
        return parse, cuts

    def _ranges(self, ids, q):
        sig = self.sigma
        left = pack(ids[q - 1::-1], sig)
        xr = self.grid.prefix_range(0, left)
        if xr[0] >= xr[1]:
            return None
        yr = self.grid.prefix_range(1, pack(ids[q:], sig))
        if yr[0] >= yr[1]:
            return None
        return xr, yr

    # -- primary occurrences

    def primary_occurrences(self, ids, cuts):
        """List of (point id, q, symbol, offsets) for every primary occurrence."""
        grid = self.grid
        m = len(ids)
        out = []
        for q in cuts:
            rng = self._ranges(ids, q)
            if rng is None:
                continue
            for pid in grid.range_report(*rng).tolist():
                a = int(grid.parent[pid])
                start = int(grid.border[pid]) - q
                if grid.kind[pid] == BLOCK:
                    out.append((pid, q, a, np.array([start], dtype=np.int64)))
                else:
                    L = int(grid.base_len[pid])
                    cnt = int(grid.mult[pid]) - -(-(m - q) // L)
                    out.append((pid, q, a, start + L * np.arange(cnt, dtype=np.int64)))
        return out

    # -- secondary occurrences

    def secondary_expand(self, seeds):
        """Absolute 1-based positions for (symbol, offsets) seeds, one per derivation."""
        start = self.grammar.start
        pending = {}
        heap = []

        def push(a, offs):
            lst = pending.get(a)
            if lst is None:
                pending[a] = [offs]
                heapq.heappush(heap, a)
            else:
                lst.append(offs)

        for a, offs in seeds:
            push(int(a), np.atleast_1d(np.asarray(offs, dtype=np.int64)))
        out = []
        slots = self._slots
        while heap:
            a = heapq.heappop(heap)
            offs = pending.pop(a)
            offs = offs[0] if len(offs) == 1 else np.concatenate(offs)
            if a == start:
                out.append(offs + 1)
                continue
            for parent, off, reps, stride in slots[a]:
                if reps == 1:
                    push(parent, offs + off)
                else:
                    shifts = off + stride * np.arange(reps, dtype=np.int64)
                    push(parent, (shifts[:, None] + offs[None, :]).ravel())
        if not out:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(out)

    def locate_single_char(self, c):
        if not 0 <= c < self.sigma or self.weights[c] == 0:
            return np.zeros(0, dtype=np.int64)
        pos = self.secondary_expand([(c, 0)])
        return np.sort(pos)

    # -- public queries

    def locate(self, pattern, mode=MCUT):
        """Sorted 1-based start positions of all occurrences."""
        ids = self.encode(pattern)
        m = len(ids)
        if m > self.n:
            return np.zeros(0, dtype=np.int64)
        if m == 1:
            if self._trie_rejects(ids) or ids[0] < 0:
                return np.zeros(0, dtype=np.int64)
            return self.locate_single_char(ids[0])
        prep = self._prepare(ids, mode)
        if prep is None:
            return np.zeros(0, dtype=np.int64)
        parse, cuts = prep
        prim = self.primary_occurrences(ids, cuts)
        pos = self.secondary_expand([(a, offs) for _, _, a, offs in prim])
        uniq = np.unique(pos)
        self._note(len(pos) - len(uniq), len(cuts) if mode == MCUT else 0)
        return uniq

    def count(self, pattern, mode=MCUT):
        ids = self.encode(pattern)
        m = len(ids)
        if m > self.n:
            return 0
        if m == 1:
            if self._trie_rejects(ids) or ids[0] < 0:
                return 0
            return self.weights[ids[0]]
        prep = self._prepare(ids, mode)
        if prep is None:
            return 0
        parse, cuts = prep
        grid = self.grid
        total = 0
        for q in cuts:
            rng = self._ranges(ids, q)
            if rng is None:
                continue
            total += grid.range_weight_sum(*rng)
            for pid in grid.run_points_in(*rng).tolist():
                L = int(grid.base_len[pid])
                total += int(grid.weight[pid]) * (int(grid.mult[pid]) - -(-(m - q) // L))
        return total

    def exists(self, pattern, mode=MCUT):
        return self.count(pattern, mode) > 0

    # -- text access

    def extract(self, i, j):
        return extract_substring(self.grammar, i, j)

    def fingerprint(self, i, j):
        return self.fingerprints.substring(i, j)


def default_trie_len(g_size):
    return max(1, math.ceil(math.log2(max(g_size, 2))))


def build_index(text, cfg=None, alphabet=None):
    """Compress ``text`` (bytes, str or token text) and build every query structure."""
    cfg = cfg or IndexConfig()
    if alphabet is None:
        alphabet = Alphabet.from_text(text, tokens=cfg.tokens)
    ids = alphabet.encode(text)
    if len(ids) == 0:
        raise InvalidArgumentError("cannot index an empty text")
    sigma = len(alphabet)
    prof = substring_complexity(ids)
    ccfg = CompressorConfig(seed=cfg.seed, cap_height=cfg.cap_height, retries=cfg.retries,
                            threshold=cfg.threshold, keep_levels=cfg.keep_levels,
                            delta=prof.delta)
    res = compress(ids, sigma, ccfg)
    g = res.grammar
    weights = symbol_weights(g)
    grid = build_grid(g, weights, text=ids)
    ell = cfg.trie_len if cfg.trie_len is not None else default_trie_len(g.size)
    trie = ShortTrie.build(ids, ell, sigma)
    idx = Index(alphabet, g, res.perms, res.num_levels, res.block_lookup, res.run_lookup,
                grid, trie, draw_base(cfg.seed), seed=cfg.seed, capped=cfg.cap_height,
                delta=prof.delta, bound_term=res.bound_term, warning=res.warning)
    idx.early_reject = cfg.early_reject
    idx.use_trie = cfg.use_trie
    idx.compression = res
    idx.profile = prof
    return idx
