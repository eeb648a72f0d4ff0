"""Substring extraction from the grammar and Karp-Rabin fingerprints."""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .errors import InvalidArgumentError
from .rlslp import pack
from .rng import FP_STREAM, rng_stream

MERSENNE61 = (1 << 61) - 1


SHORT = 64     # whole expansions up to this length are cached per symbol


def _short_expansion(g, s):
    cache = g.__dict__.setdefault("_short", {})
    got = cache.get(s)
    if got is None:
        got = _pieces(g, s, 0, g.exp_len[s], [], use_cache=False)
        cache[s] = got
    return got


def _pieces(g, a, lo, hi, out, use_cache=True):
    """Append the terminal ids of exp(a)[lo:hi] to ``out`` (0-based, half open)."""
    sigma = g.sigma
    rules = g.rules
    exp_len = g.exp_len
    stack = [(a, lo, hi)]
    while stack:
        s, lo, hi = stack.pop()
        if s < sigma:
            out.append(s)
            continue
        if use_cache and hi - lo == exp_len[s] and hi - lo <= SHORT:
            out.extend(_short_expansion(g, s))
            continue
        r = rules[s - sigma]
        if r.is_run:
            b = r.base
            L = exp_len[b]
            j0, j1 = lo // L, (hi - 1) // L
            for j in range(j1, j0 - 1, -1):
                off = j * L
                stack.append((b, max(lo - off, 0), min(hi - off, L)))
        else:
            offs = g.child_offsets(s)
            i0 = bisect_right(offs, lo) - 1
            i1 = bisect_left(offs, hi) - 1
            ch = r.children
            for i in range(i1, i0 - 1, -1):
                o = offs[i]
                stack.append((ch[i], max(lo - o, 0), min(hi - o, offs[i + 1] - o)))
    return out


def extract_range(g, a, lo, hi):
    """exp(a)[lo:hi] with 0-based half-open bounds, clamped to the expansion."""
    lo = max(lo, 0)
    hi = min(hi, g.exp_len[a])
    if lo >= hi:
        return pack([], g.sigma)
    return pack(_pieces(g, a, lo, hi, []), g.sigma)


def extract_prefix(g, a, l):
    if l < 1:
        raise InvalidArgumentError("prefix length must be positive")
    return extract_range(g, a, 0, l)


def extract_suffix(g, a, l):
    if l < 1:
        raise InvalidArgumentError("suffix length must be positive")
    n = g.exp_len[a]
    return extract_range(g, a, max(n - l, 0), n)


def extract_substring(g, i, j):
    """S[i..j], 1-based inclusive."""
    if not 1 <= i <= j <= g.n:
        raise InvalidArgumentError(f"range [{i}, {j}] outside [1, {g.n}]")
    return extract_range(g, g.start, i - 1, j)


@dataclass(frozen=True)
class Fingerprint:
    value: int
    length: int


def draw_base(seed):
    rng = rng_stream(seed, FP_STREAM)
    return int(rng.integers(2, MERSENNE61 - 1))


def fingerprint_of(ids, base, q=MERSENNE61):
    """Direct Horner evaluation; character c contributes c + 1."""
    v = 0
    for c in ids:
        v = (v * base + c + 1) % q
    return Fingerprint(v, len(ids))


class FingerprintTable:
    """Per-symbol fingerprints and powers of the base, plus substring queries."""

    def __init__(self, g, base, q=MERSENNE61):
        self.g = g
        self.base = base
        self.q = q
        sigma = g.sigma
        fp = [c + 1 for c in range(sigma)]
        pw = [base % q] * sigma
        cum = {}
        for i, r in enumerate(g.rules):
            a = sigma + i
            if r.is_run:
                f, p = self._repeat(fp[r.base], pw[r.base], r.mult)
            else:
                f, p = 0, 1
                acc = [0]
                for c in r.children:
                    f = (f * pw[c] + fp[c]) % q
                    p = p * pw[c] % q
                    acc.append(f)
                cum[a] = acc
            fp.append(f)
            pw.append(p)
        self.fp = fp
        self.pw = pw
        self.cum = cum

    def _repeat(self, f, p, j):
        """fp and power of X^j from fp(X) = f, b^|X| = p."""
        q = self.q
        if j == 0:
            return 0, 1
        pj = pow(p, j, q)
        if p == 1:
            geo = j % q
        else:
            geo = (pj - 1) * pow(p - 1, q - 2, q) % q
        return f * geo % q, pj

    def combine(self, x, y):
        return Fingerprint((x.value * pow(self.base, y.length, self.q) + y.value) % self.q,
                           x.length + y.length)

    def symbol(self, a):
        return Fingerprint(self.fp[a], self.g.exp_len[a])

    def prefix_value(self, a, l):
        """fp(exp(a)[:l]) as a residue."""
        g, q = self.g, self.q
        sigma = g.sigma
        acc = 0
        while l > 0:
            if l >= g.exp_len[a]:
                return (acc * self.pw[a] + self.fp[a]) % q
            r = g.rules[a - sigma]
            if r.is_run:
                b = r.base
                L = g.exp_len[b]
                j, l = divmod(l, L)
                f, p = self._repeat(self.fp[b], self.pw[b], j)
                acc = (acc * p + f) % q
                a = b
            else:
                offs = g.child_offsets(a)
                i = bisect_right(offs, l) - 1
                acc = (acc * pow(self.base, offs[i], q) + self.cum[a][i]) % q
                l -= offs[i]
                a = r.children[i]
        return acc

    def substring(self, i, j):
        """Fingerprint of S[i..j], 1-based inclusive."""
        g = self.g
        if not 1 <= i <= j <= g.n:
            raise InvalidArgumentError(f"range [{i}, {j}] outside [1, {g.n}]")
        q = self.q
        hi = self.prefix_value(g.start, j)
        lo = self.prefix_value(g.start, i - 1)
        length = j - i + 1
        return Fingerprint((hi - lo * pow(self.base, length, q)) % q, length)


def fingerprint_substring(table, i, j):
    return table.substring(i, j)
