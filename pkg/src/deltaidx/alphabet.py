"""Mapping between raw input (bytes or whitespace tokens) and dense terminal ids."""

import numpy as np


class Alphabet:
    """Sorted distinct symbols of the text; symbol i gets terminal id i.

    Byte mode keeps the byte order, so lexicographic order of id strings
    matches the order of the original bytes.
    """

    def __init__(self, symbols, tokens=False):
        self.symbols = list(symbols)
        self.tokens = tokens
        self._ids = {s: i for i, s in enumerate(self.symbols)}

    @classmethod
    def from_text(cls, data, tokens=False):
        if tokens:
            return cls(sorted(set(split_tokens(data))), tokens=True)
        return cls(sorted(set(as_bytes(data))))

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        return (isinstance(other, Alphabet) and self.tokens == other.tokens
                and self.symbols == other.symbols)

    def encode(self, data):
        """Ids of a text made of known symbols only."""
        units = split_tokens(data) if self.tokens else as_bytes(data)
        return np.fromiter((self._ids[u] for u in units), dtype=np.int64, count=len(units))

    def encode_pattern(self, data):
        """Ids with -1 for symbols that never occur in the text."""
        units = split_tokens(data) if self.tokens else as_bytes(data)
        get = self._ids.get
        return [get(u, -1) for u in units]


def as_bytes(data):
    if isinstance(data, str):
        return data.encode("utf-8")
    return bytes(data)


def split_tokens(data):
    if isinstance(data, (bytes, bytearray)):
        data = bytes(data).decode("utf-8")
    return data.split()
