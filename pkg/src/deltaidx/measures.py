"""Substring complexity, delta, and the numeric size-bound terms."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InvalidArgumentError


@dataclass
class ComplexityProfile:
    n: int
    sigma_used: int
    d: np.ndarray          # d[k] for k in [0, n]; d[0] = 1
    delta: Fraction
    argmax_k: int

    @property
    def delta_num(self):
        return self.delta.numerator

    @property
    def delta_den(self):
        return self.delta.denominator


def as_array(text):
    if isinstance(text, np.ndarray):
        return text.astype(np.int64, copy=False)
    if isinstance(text, (bytes, bytearray)):
        return np.frombuffer(bytes(text), dtype=np.uint8).astype(np.int64)
    if isinstance(text, str):
        return np.frombuffer(text.encode("latin-1"), dtype=np.uint8).astype(np.int64)
    return np.asarray(list(text), dtype=np.int64)


def substring_complexity(text):
    s = as_array(text)
    n = len(s)
    if n == 0:
        raise InvalidArgumentError("empty text")
    sa = kernels.suffix_array(s)
    lcp = kernels.lcp_array(s, sa)
    d = kernels.distinct_counts(sa, lcp)
    # max d[k]/k: compare fractions by cross-multiplication
    best_k = 1
    for k in range(2, n + 1):
        if int(d[k]) * best_k > int(d[best_k]) * k:
            best_k = k
    return ComplexityProfile(n=n, sigma_used=int(d[1]), d=d,
                             delta=Fraction(int(d[best_k]), best_k), argmax_k=best_k)


def _log_term(n, sigma, delta):
    return math.log2(n * math.log2(sigma) / (float(delta) * math.log2(n)))


def delta_bound_term(n, sigma, delta):
    """delta * max(1, log2(n log2 sigma / (delta log2 n)))."""
    n = max(int(n), 2)
    sigma = max(int(sigma), 2)
    delta = float(delta)
    if delta <= 0:
        raise InvalidArgumentError("delta must be positive")
    return delta * max(1.0, _log_term(n, sigma, delta))


def fact_sum_check(profile):
    """Return ``(lhs, rhs)`` of the power-of-two substring-count inequality.

    ``lhs`` is exact; ``rhs`` is a float (it contains a logarithm).
    """
    if not isinstance(profile, ComplexityProfile):
        profile = substring_complexity(profile)
    n = profile.n
    lhs = Fraction(0)
    p = 1
    while p <= n:
        lhs += Fraction(int(profile.d[p]), p)
        p <<= 1
    delta = profile.delta
    sigma = max(profile.sigma_used, 2)
    if n >= 2:
        rhs = 5 * float(delta) + float(delta) * _log_term(n, sigma, delta)
    else:
        rhs = 5 * float(delta)
    return lhs, rhs


def kappa(n):
    """2 * ceil(log_{4/3}(4n)), computed exactly."""
    t = 0
    while 4 ** t < 4 * n * 3 ** t:
        t += 1
    return 2 * t


def lam(n, delta):
    """2 * floor(log_{4/3}(n / delta)) with delta an exact fraction; never negative."""
    delta = Fraction(delta)
    num, den = delta.numerator, delta.denominator
    if n * den < num:
        return 0
    t = 0
    while 4 ** (t + 1) * num <= 3 ** (t + 1) * n * den:
        t += 1
    return 2 * t
