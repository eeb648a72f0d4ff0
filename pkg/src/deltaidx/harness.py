"""Brute-force oracle and the verification loop used by the CLI and the tests."""

import math
from dataclasses import dataclass, field


from .pattern import EXHAUSTIVE, MCUT
from .rng import rng_stream

VERIFY_STREAM = 11


def naive_locate(S, P):
    """All 1-based starts of P in S by direct scanning."""
    if isinstance(S, str):
        S = S.encode("utf-8")
    if isinstance(P, str):
        P = P.encode("utf-8")
    if not isinstance(S, (bytes, bytearray)):
        S, P = list(S), list(P)
        m = len(P)
        return [i + 1 for i in range(len(S) - m + 1) if S[i:i + m] == P]
    out = []
    if len(P) == 0 or len(P) > len(S):
        return out
    i = S.find(P)
    while i >= 0:
        out.append(i + 1)
        i = S.find(P, i + 1)
    return out


def sample_patterns(units, count, max_m, seed):
    """Half planted substrings, half random strings over the text's symbols.

    ``units`` is the text as a sequence (bytes or list of tokens). Lengths
    are log-uniform in [1, max_m].
    """
    rng = rng_stream(seed, VERIFY_STREAM)
    n = len(units)
    alphabet = sorted(set(units))
    max_m = max(1, min(max_m, n))
    out = []
    for j in range(count):
        m = int(round(2 ** rng.uniform(0, math.log2(max_m))))
        m = min(max(m, 1), max_m)
        if j % 2 == 0:
            i = int(rng.integers(0, n - m + 1))
            out.append(units[i:i + m])
        else:
            pick = rng.integers(0, len(alphabet), m)
            if isinstance(units, (bytes, bytearray)):
                out.append(bytes(alphabet[k] for k in pick))
            else:
                out.append([alphabet[k] for k in pick])
    return out


@dataclass
class VerifyReport:
    patterns: int = 0
    locate_mismatches: int = 0
    count_mismatches: int = 0
    cut_mismatches: int = 0
    duplicates: int = 0
    max_cuts: int = 0
    failures: list = field(default_factory=list)

    @property
    def mismatches(self):
        return self.locate_mismatches + self.count_mismatches + self.cut_mismatches

    @property
    def ok(self):
        return self.mismatches == 0 and self.duplicates == 0

    def lines(self):
        return [f"patterns: {self.patterns}",
                f"mismatches: {self.mismatches}",
                f"locate mismatches: {self.locate_mismatches}",
                f"count mismatches: {self.count_mismatches}",
                f"cut mismatches: {self.cut_mismatches}",
                f"duplicates: {self.duplicates}",
                f"max cuts: {self.max_cuts}"]


def verify(index, text, patterns=1000, max_m=64, seed=0, exhaustive=True):
    """Compare the index with the naive scan on sampled patterns."""
    tokens = index.alphabet.tokens
    units = text.split() if tokens and isinstance(text, str) else text
    if tokens and isinstance(units, bytes):
        units = units.decode("utf-8").split()
    ids = list(index.alphabet.encode(text))
    before_dup = index.duplicates
    rep = VerifyReport()
    for P in sample_patterns(units, patterns, max_m, seed):
        pid = index.alphabet.encode_pattern(" ".join(P) if tokens else P)
        expect = naive_locate(ids, pid) if tokens else naive_locate(text, P)
        got = index.locate(pid, MCUT).tolist()
        cnt = index.count(pid, MCUT)
        rep.patterns += 1
        bad = False
        if got != expect:
            rep.locate_mismatches += 1
            bad = True
        if cnt != len(expect):
            rep.count_mismatches += 1
            bad = True
        if exhaustive:
            ex = index.locate(pid, EXHAUSTIVE).tolist()
            if ex != got:
                rep.cut_mismatches += 1
                bad = True
        if bad and len(rep.failures) < 10:
            rep.failures.append(P)
    rep.duplicates = index.duplicates - before_dup
    rep.max_cuts = index.max_cuts
    return rep
