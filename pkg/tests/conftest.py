import math
import os
import sys
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from deltaidx import IndexConfig, build_index, corpus  # noqa: E402
from deltaidx.pattern import EXHAUSTIVE, MCUT  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SIZES = [8, 10, 12, 14, 16]
PATTERNS_PER_BUILD = 224
MAX_M = 256


def matrix_specs():
    specs = []
    specs += [f"fibonacci:{k}" for k in (13, 15, 18, 20, 24)]
    specs += [f"thue_morse:{k}" for k in (8, 10, 12, 14, 16)]
    specs += [f"unary:{1 << e}" for e in SIZES]
    specs += [f"random:{1 << e}:{s}:{e}" for e in SIZES for s in (2, 4, 26)]
    specs += [f"mutated_repeat:{(1 << e) // 16}:16:0.01:{e}:{s}" for e in SIZES for s in (2, 4, 26)]
    return specs


def draw_patterns(S, count, max_m, seed):
    """Half planted, half random over the text's byte set; log-uniform lengths."""
    rng = np.random.default_rng(seed)
    n = len(S)
    top = min(max_m, n)
    alpha = sorted(set(S))
    out = []
    for j in range(count):
        m = int(min(top, max(1, round(2 ** rng.uniform(0, math.log2(top))))))
        if j % 2 == 0:
            i = int(rng.integers(0, n - m + 1))
            out.append(S[i:i + m])
        else:
            out.append(bytes(alpha[k] for k in rng.integers(0, len(alpha), m)))
    return out


class Build:
    def __init__(self, spec):
        self.spec = spec
        self.text = corpus.generate(spec)
        t0 = time.perf_counter()
        self.index = build_index(self.text, IndexConfig(seed=0, keep_levels=True))
        self.build_s = time.perf_counter() - t0

    @property
    def n(self):
        return len(self.text)


class QueryRun:
    def __init__(self, build, seed):
        idx = build.index
        S = build.text
        self.pairs = 0
        self.locate_bad = []
        self.count_bad = []
        self.cut_bad = []
        self.cut_ratio = 0.0
        self.max_cuts = 0
        dup0 = idx.duplicates
        t0 = time.perf_counter()
        for P in draw_patterns(S, PATTERNS_PER_BUILD, MAX_M, seed):
            expect = oracles.naive_positions(S, P) if len(set(S)) > 1 else _unary_positions(S, P)
            got = idx.locate(P, MCUT).tolist()
            ex = idx.locate(P, EXHAUSTIVE).tolist()
            cnt = idx.count(P, MCUT)
            self.pairs += 1
            if got != expect:
                self.locate_bad.append(P)
            if cnt != len(expect):
                self.count_bad.append(P)
            if ex != got:
                self.cut_bad.append(P)
            m = len(P)
            if m > 1:
                prep = idx._prepare(idx.encode(P), MCUT)
                if prep is not None:
                    k = len(prep[1])
                    self.max_cuts = max(self.max_cuts, k)
                    self.cut_ratio = max(self.cut_ratio, k / math.ceil(math.log2(m + 2)))
        self.seconds = time.perf_counter() - t0
        self.duplicates = idx.duplicates - dup0


def _unary_positions(S, P):
    # the direct scan is quadratic on unary texts; the answer has a closed form
    if set(P) - set(S[:1]):
        return []
    return list(range(1, len(S) - len(P) + 2))


@pytest.fixture(scope="session")
def matrix():
    return [Build(s) for s in matrix_specs()]


@pytest.fixture(scope="session")
def matrix_queries(matrix):
    return [(b, QueryRun(b, seed=1000 + i)) for i, b in enumerate(matrix)]


@pytest.fixture(scope="session")
def small_builds(matrix):
    return [b for b in matrix if b.n <= 1 << 12]


RESULTS = {}


def record(criterion, ok, detail):
    RESULTS[criterion] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(RESULTS):
        ok, detail = RESULTS[c]
        terminalreporter.write_line(f"criterion {c:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
