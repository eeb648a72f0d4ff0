"""Deterministic test texts from short spec strings such as ``fibonacci:20``."""

import os

import numpy as np

from .errors import InvalidArgumentError
from .rng import rng_stream

CORPUS_STREAM = 7
LETTERS = b"abcdefghijklmnopqrstuvwxyz"


def letters(sigma):
    if sigma <= 26:
        return LETTERS[:sigma]
    if sigma <= 256:
        return bytes(range(sigma))
    raise InvalidArgumentError("byte corpora support at most 256 symbols")


def fibonacci(k):
    """F_1 = b, F_2 = a, F_k = F_{k-1} F_{k-2}; |F_k| is the k-th Fibonacci number."""
    if k < 1:
        raise InvalidArgumentError("fibonacci index must be >= 1")
    prev, cur = b"b", b"a"
    if k == 1:
        return prev
    for _ in range(k - 2):
        prev, cur = cur, cur + prev
    return cur


def thue_morse(k):
    i = np.arange(1 << k, dtype=np.uint64)
    parity = np.zeros(len(i), dtype=np.uint8)
    while i.any():
        parity ^= (i & 1).astype(np.uint8)
        i >>= np.uint64(1)
    return np.where(parity == 1, ord("b"), ord("a")).astype(np.uint8).tobytes()


def unary(n):
    return b"a" * n


def random_text(n, sigma, seed):
    alpha = np.frombuffer(letters(sigma), dtype=np.uint8)
    rng = rng_stream(seed, CORPUS_STREAM)
    return alpha[rng.integers(0, sigma, n)].tobytes()


def mutated_repeat(unit, copies, rate, seed, sigma=4):
    alpha = np.frombuffer(letters(sigma), dtype=np.uint8)
    rng = rng_stream(seed, CORPUS_STREAM + 1)
    base = rng.integers(0, sigma, unit)
    text = np.tile(base, copies)
    hit = rng.random(len(text)) < rate
    if sigma > 1:
        shift = rng.integers(1, sigma, len(text))
        text = np.where(hit, (text + shift) % sigma, text)
    return alpha[text].tobytes()


def generate(spec):
    """Text bytes for a corpus spec string."""
    name, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if name == "fibonacci":
            return fibonacci(int(args[0]))
        if name == "thue_morse":
            return thue_morse(int(args[0]))
        if name == "unary":
            return unary(int(args[0]))
        if name == "random":
            n, sigma, seed = args
            return random_text(int(n), int(sigma), int(seed))
        if name == "mutated_repeat":
            unit, copies, rate, seed = args[:4]
            sigma = int(args[4]) if len(args) > 4 else 4
            return mutated_repeat(int(unit), int(copies), float(rate), int(seed), sigma)
        if name == "file":
            with open(rest, "rb") as fh:
                return fh.read()
    except (IndexError, ValueError) as e:
        raise InvalidArgumentError(f"bad corpus spec {spec!r}: {e}") from None
    raise InvalidArgumentError(f"unknown corpus generator {name!r}")


def is_spec(s):
    return s.partition(":")[0] in {"fibonacci", "thue_morse", "unary", "random",
                                   "mutated_repeat", "file"}


def read_input(arg):
    """A path on disk, or a corpus spec string."""
    if os.path.exists(arg):
        with open(arg, "rb") as fh:
            return fh.read()
    if is_spec(arg):
        return generate(arg)
    raise FileNotFoundError(f"no such file or corpus spec: {arg}")
