"""Restricted block compression.

Odd levels run-length encode the active symbols, even levels cut the string
at local minima of a random rank order. A symbol is active at level k while
its expansion is at most (4/3)^(ceil(k/2)-1); longer symbols are paused and
only ever act as block boundaries.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, UnsupportedError
from .measures import delta_bound_term, kappa, lam, substring_complexity
from .rlslp import RLSLP, Rule
from .rng import ATTEMPT_STREAM, rng_stream

log = logging.getLogger(__name__)


def level_exponent(k):
    """e with ell_k = (4/3)^e."""
    return (k + 1) // 2 - 1


def ell(k):
    e = level_exponent(k)
    return Fraction(4, 3) ** e


def active_limit(k):
    """Largest integer length that is still active at level k (k >= 1)."""
    e = level_exponent(k)
    return 4 ** e // 3 ** e


@dataclass
class CompressorConfig:
    seed: int = 0
    cap_height: bool = True
    retries: int = 5
    threshold: float = 64.0
    keep_levels: bool = False
    delta: Fraction = None       # computed from the text when missing


@dataclass
class LevelTrace:
    n: int
    sizes: list                  # |S_k| for every produced level, k = 0..last
    kappa: int
    lam: int
    capped: bool
    levels: list = None          # S_k arrays when retained
    exp_len: np.ndarray = None

    @property
    def last(self):
        return len(self.sizes) - 1


@dataclass
class CompressionResult:
    grammar: RLSLP
    perms: dict                  # even level k -> {symbol: rank}
    num_levels: int              # number of parsing rounds performed
    trace: LevelTrace
    block_lookup: dict
    run_lookup: dict
    attempts: int = 1
    attempt_used: int = 0
    warning: bool = False
    delta: Fraction = None
    bound_term: float = 0.0


class _Builder:
    """Symbol table shared by all levels of one attempt."""

    def __init__(self, sigma):
        self.sigma = sigma
        self.rules = []
        self.exp_len = [1] * sigma
        self.block_lookup = {}
        self.run_lookup = {}

    def run_symbol(self, base, m):
        key = (base, m)
        a = self.run_lookup.get(key)
        if a is None:
            a = self.sigma + len(self.rules)
            self.rules.append(Rule((base,), m))
            self.exp_len.append(self.exp_len[base] * m)
            self.run_lookup[key] = a
        return a

    def block_symbol(self, children):
        a = self.block_lookup.get(children)
        if a is None:
            a = self.sigma + len(self.rules)
            self.rules.append(Rule(children, 1))
            self.exp_len.append(sum(self.exp_len[c] for c in children))
            self.block_lookup[children] = a
        return a


def _groups(bnd, n):
    starts = np.flatnonzero(np.concatenate(([1], bnd))).astype(np.int64)
    lengths = np.diff(np.append(starts, n))
    return starts, lengths


def rle_level(seq, active, builder):
    """One run-length round. Returns the new level string."""
    seq = np.ascontiguousarray(seq, dtype=np.int64)
    n = len(seq)
    if n == 0:
        return seq
    bnd = kernels.rle_boundaries(seq, active)
    starts, lengths = _groups(bnd, n)
    out = seq[starts].copy()
    for j in np.flatnonzero(lengths >= 2).tolist():
        out[j] = builder.run_symbol(int(out[j]), int(lengths[j]))
    return out


def bc_level(seq, active, rank, builder):
    """One restricted block-parsing round; ``rank`` holds pi(seq[i]) (0 when paused)."""
    seq = np.ascontiguousarray(seq, dtype=np.int64)
    n = len(seq)
    if n == 0:
        return seq
    bnd = kernels.bc_boundaries(seq, active, rank)
    starts, lengths = _groups(bnd, n)
    out = seq[starts].copy()
    lst = seq.tolist()
    for j in np.flatnonzero(lengths >= 2).tolist():
        s = int(starts[j])
        out[j] = builder.block_symbol(tuple(lst[s:s + int(lengths[j])]))
    return out


def sample_permutation(symbols, active, rng):
    """Random ranks with every paused symbol below every active one.

    Only the active ranks are returned; paused symbols implicitly rank 0.
    """
    symbols = set(symbols)
    act = sorted(symbols.intersection(active))
    if not act:
        return {}
    base = len(symbols) - len(act)
    order = rng.permutation(len(act))
    return {a: base + 1 + int(r) for a, r in zip(act, order)}


def _compress_once(s, sigma, rng, num_rounds, stop_at_one, keep_levels):
    b = _Builder(sigma)
    n = len(s)
    cur = s
    sizes = [n]
    levels = [cur] if keep_levels else None
    perms = {}
    k = 0
    while len(cur) > 1 and (num_rounds is None or k < num_rounds):
        k += 1
        lim = active_limit(k)
        exp_arr = np.asarray(b.exp_len, dtype=np.int64)
        active = (exp_arr[cur] <= lim).astype(np.uint8)
        if k % 2:
            cur = rle_level(cur, active, b)
        else:
            mask = active.astype(bool)
            act_syms = np.unique(cur[mask])
            pi = sample_permutation(np.unique(cur).tolist(), act_syms.tolist(), rng)
            perms[k] = pi
            order = np.array([pi[a] for a in act_syms.tolist()], dtype=np.int64)
            rank = np.zeros(len(cur), dtype=np.int64)
            if len(order):
                rank[mask] = order[np.searchsorted(act_syms, cur[mask])]
            cur = bc_level(cur, active, rank, b)
        sizes.append(len(cur))
        if keep_levels:
            levels.append(cur)
    if stop_at_one:
        assert len(cur) == 1
    if len(cur) >= 2:
        start = b.block_symbol(tuple(cur.tolist()))
    else:
        start = int(cur[0])
    g = RLSLP(sigma, b.rules, start, exp_len=b.exp_len)
    return g, perms, k, sizes, levels, b


def compress(text, sigma=None, cfg=None):
    """Build the grammar for ``text`` (sequence of terminal ids in ``[0, sigma)``)."""
    cfg = cfg or CompressorConfig()
    s = np.ascontiguousarray(np.asarray(text, dtype=np.int64))
    n = len(s)
    if n == 0:
        raise InvalidArgumentError("cannot compress an empty text")
    if sigma is None:
        sigma = int(s.max()) + 1
    if s.min() < 0 or s.max() >= sigma:
        raise InvalidArgumentError("text symbols outside [0, sigma)")
    delta = cfg.delta
    if delta is None:
        delta = substring_complexity(s).delta
    delta = Fraction(delta)
    kap = kappa(n)
    lm = lam(n, delta)
    bound = delta_bound_term(n, max(int(len(np.unique(s))), 2), delta)
    rounds = lm if cfg.cap_height else None

    best = None
    attempts = 0
    for attempt in range(max(1, cfg.retries)):
        attempts += 1
        rng = rng_stream(cfg.seed, ATTEMPT_STREAM + attempt)
        out = _compress_once(s, sigma, rng, rounds, not cfg.cap_height, cfg.keep_levels)
        size = out[0].size
        if best is None or size < best[1][0].size:
            best = (attempt, out)
        if size <= cfg.threshold * bound:
            break
    attempt, (g, perms, k, sizes, levels, b) = best
    warning = g.size > cfg.threshold * bound
    if warning:
        log.warning("grammar size %d above %.1f x bound %.1f after %d attempts",
                    g.size, cfg.threshold, bound, attempts)
    trace = LevelTrace(n=n, sizes=sizes, kappa=kap, lam=lm, capped=cfg.cap_height,
                       levels=levels, exp_len=np.asarray(g.exp_len, dtype=np.int64))
    return CompressionResult(grammar=g, perms=perms, num_levels=k, trace=trace,
                             block_lookup=b.block_lookup, run_lookup=b.run_lookup,
                             attempts=attempts, attempt_used=attempt, warning=warning,
                             delta=delta, bound_term=bound)


def phrase_boundaries(trace, k):
    """B_k: prefix lengths of S at the level-k phrase ends, including 0 and n."""
    if trace.levels is None:
        raise UnsupportedError("level strings were not retained for this build")
    if not 0 <= k <= trace.last:
        raise InvalidArgumentError(f"level {k} outside [0, {trace.last}]")
    lens = trace.exp_len[trace.levels[k]]
    return np.concatenate(([0], np.cumsum(lens)))
