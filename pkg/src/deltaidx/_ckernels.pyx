# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Mirrors ``_pykernels`` function for function."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.uint8_t u8


def rle_boundaries(const i64[::1] seq, const u8[::1] active):
    cdef Py_ssize_t n = seq.shape[0], i
    out = np.zeros(max(n - 1, 0), dtype=np.uint8)
    cdef u8[::1] o = out
    for i in range(n - 1):
        if not active[i] or not active[i + 1] or seq[i] != seq[i + 1]:
            o[i] = 1
    return out


def bc_boundaries(const i64[::1] seq, const u8[::1] active, const i64[::1] rank):
    cdef Py_ssize_t n = seq.shape[0], i
    out = np.zeros(max(n - 1, 0), dtype=np.uint8)
    cdef u8[::1] o = out
    for i in range(n - 1):
        if not active[i] or not active[i + 1]:
            o[i] = 1
        elif i > 0 and rank[i - 1] > rank[i] and rank[i] < rank[i + 1]:
            o[i] = 1
    return out


cdef void _counting_sort(i64[::1] src, i64[::1] dst, i64[::1] key,
                         i64[::1] cnt, Py_ssize_t n, Py_ssize_t nkeys):
    # stable: dst receives src ordered by key[src[j]]
    cdef Py_ssize_t j
    cdef i64 c, tot = 0
    for j in range(nkeys + 1):
        cnt[j] = 0
    for j in range(n):
        cnt[key[src[j]]] += 1
    for j in range(nkeys + 1):
        c = cnt[j]
        cnt[j] = tot
        tot += c
    for j in range(n):
        dst[cnt[key[src[j]]]] = src[j]
        cnt[key[src[j]]] += 1


def suffix_array(const i64[::1] text):
    """Prefix doubling with two-pass radix sort, O(n log n)."""
    cdef Py_ssize_t n = text.shape[0], i, k
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    cdef i64 lo = text[0], hi = text[0]
    for i in range(n):
        if text[i] < lo:
            lo = text[i]
        if text[i] > hi:
            hi = text[i]
    cdef Py_ssize_t nkeys = max(n, <Py_ssize_t>(hi - lo + 1)) + 1
    sa_np = np.arange(n, dtype=np.int64)
    tmp_np = np.empty(n, dtype=np.int64)
    rank_np = np.empty(n, dtype=np.int64)
    second_np = np.empty(n, dtype=np.int64)
    new_np = np.empty(n, dtype=np.int64)
    cnt_np = np.empty(nkeys + 1, dtype=np.int64)
    cdef i64[::1] sa = sa_np, tmp = tmp_np, rank = rank_np
    cdef i64[::1] second = second_np, new = new_np, cnt = cnt_np
    for i in range(n):
        rank[i] = text[i] - lo + 1
    for i in range(n):
        tmp[i] = i
    _counting_sort(tmp, sa, rank, cnt, n, nkeys)
    new[sa[0]] = 1
    for i in range(1, n):
        new[sa[i]] = new[sa[i - 1]] + (rank[sa[i]] != rank[sa[i - 1]])
    for i in range(n):
        rank[i] = new[i]
    k = 1
    while rank[sa[n - 1]] < n and k < n:
        for i in range(n):
            second[i] = rank[i + k] if i + k < n else 0
        _counting_sort(sa, tmp, second, cnt, n, nkeys)
        _counting_sort(tmp, sa, rank, cnt, n, nkeys)
        new[sa[0]] = 1
        for i in range(1, n):
            new[sa[i]] = new[sa[i - 1]] + (
                rank[sa[i]] != rank[sa[i - 1]] or second[sa[i]] != second[sa[i - 1]])
        for i in range(n):
            rank[i] = new[i]
        k <<= 1
    return sa_np


def lcp_array(const i64[::1] text, const i64[::1] sa):
    cdef Py_ssize_t n = text.shape[0], i, j, r, h = 0
    rank_np = np.empty(n, dtype=np.int64)
    lcp_np = np.zeros(n, dtype=np.int64)
    cdef i64[::1] rank = rank_np, lcp = lcp_np
    for r in range(n):
        rank[sa[r]] = r
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp_np


def distinct_counts(const i64[::1] sa, const i64[::1] lcp):
    cdef Py_ssize_t n = sa.shape[0], r, k
    cdef i64 h, length, run = 0
    diff_np = np.zeros(n + 2, dtype=np.int64)
    d_np = np.zeros(n + 1, dtype=np.int64)
    cdef i64[::1] diff = diff_np, d = d_np
    for r in range(n):
        h = lcp[r] if r else 0
        length = n - sa[r]
        if h < length:
            diff[h + 1] += 1
            diff[length + 1] -= 1
    for k in range(1, n + 1):
        run += diff[k]
        d[k] = run
    if n:
        d[0] = 1
    return d_np


def failure_function(const i64[::1] seq):
    cdef Py_ssize_t n = seq.shape[0], i, k = 0
    fail_np = np.zeros(n, dtype=np.int64)
    cdef i64[::1] fail = fail_np
    for i in range(1, n):
        while k and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    return fail_np
