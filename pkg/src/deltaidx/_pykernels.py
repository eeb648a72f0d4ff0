"""Pure-Python versions of the hot loops.

Used when the compiled ``_ckernels`` extension is missing, or when
``DELTAIDX_PURE_PYTHON=1`` is set. Every function here has the same
signature and return type as its compiled twin in ``_ckernels.pyx``.
"""

import numpy as np


def rle_boundaries(seq, active):
    """Boundary flags for run-length parsing; entry ``i`` is the gap after ``seq[i]``."""
    s = seq.tolist()
    a = active.tolist()
    out = np.zeros(max(len(s) - 1, 0), dtype=np.uint8)
    for i in range(len(s) - 1):
        if not a[i] or not a[i + 1] or s[i] != s[i + 1]:
            out[i] = 1
    return out


def bc_boundaries(seq, active, rank):
    """Boundary flags for restricted block parsing (local minima of ``rank``)."""
    a = active.tolist()
    r = rank.tolist()
    n = len(a)
    out = np.zeros(max(n - 1, 0), dtype=np.uint8)
    for i in range(n - 1):
        if not a[i] or not a[i + 1]:
            out[i] = 1
        elif i > 0 and r[i - 1] > r[i] < r[i + 1]:
            out[i] = 1
    return out


def suffix_array(text):
    """Prefix-doubling suffix array, O(n log^2 n)."""
    n = len(text)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = text.tolist()
    sa = sorted(range(n), key=rank.__getitem__)
    k = 1
    while True:
        key = [(rank[i], rank[i + k] if i + k < n else -1) for i in range(n)]
        sa.sort(key=key.__getitem__)
        new = [0] * n
        for j in range(1, n):
            new[sa[j]] = new[sa[j - 1]] + (key[sa[j]] != key[sa[j - 1]])
        rank = new
        if rank[sa[-1]] == n - 1 or k >= n:
            break
        k <<= 1
    return np.array(sa, dtype=np.int64)


def lcp_array(text, sa):
    """Kasai LCP: ``lcp[r]`` is the common prefix of suffixes ``sa[r-1]`` and ``sa[r]``."""
    s = text.tolist()
    order = sa.tolist()
    n = len(s)
    rank = [0] * n
    for r, i in enumerate(order):
        rank[i] = r
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = order[r - 1]
        while i + h < n and j + h < n and s[i + h] == s[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.array(lcp, dtype=np.int64)


def distinct_counts(sa, lcp):
    """``d[k]`` = number of distinct length-k substrings, for ``k`` in ``[0, n]``."""
    n = len(sa)
    diff = [0] * (n + 2)
    for r, start in enumerate(sa.tolist()):
        h = lcp[r] if r else 0
        length = n - start
        if h < length:
            diff[h + 1] += 1
            diff[length + 1] -= 1
    d = [0] * (n + 1)
    run = 0
    for k in range(1, n + 1):
        run += diff[k]
        d[k] = run
    if n:
        d[0] = 1
    return np.array(d, dtype=np.int64)


def failure_function(seq):
    """KMP failure function (length of longest proper border of each prefix)."""
    s = seq.tolist()
    n = len(s)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    return np.array(fail, dtype=np.int64)
