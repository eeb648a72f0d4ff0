"""Run-length straight-line programs, grammar trees and occurrence weights."""

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import InvalidArgumentError


class Rule(NamedTuple):
    """``mult == 1``: block rule over ``children``; ``mult >= 2``: run of ``children[0]``."""

    children: tuple
    mult: int = 1

    @property
    def is_run(self):
        return self.mult > 1

    @property
    def base(self):
        return self.children[0]


def block(*children):
    return Rule(tuple(children), 1)


def run(base, mult):
    return Rule((base,), mult)


def pack(ids, sigma):
    """Canonical comparable string for a sequence of terminal ids."""
    if sigma <= 256:
        return bytes(ids)
    return tuple(ids)


class RLSLP:
    """Symbols ``[0, sigma)`` are terminals; symbol ``sigma + i`` is defined by ``rules[i]``."""

    def __init__(self, sigma, rules, start, exp_len=None):
        self.sigma = sigma
        self.rules = [Rule(tuple(int(c) for c in r.children), int(r.mult)) for r in rules]
        self.start = int(start)
        if exp_len is None:
            exp_len = [1] * sigma
            for i, r in enumerate(self.rules):
                if any(not 0 <= c < sigma + i for c in r.children):
                    raise InvalidArgumentError(f"symbol {sigma + i}: child id out of order")
                if r.is_run:
                    exp_len.append(exp_len[r.base] * r.mult)
                else:
                    exp_len.append(sum(exp_len[c] for c in r.children))
        self.exp_len = list(exp_len)
        self._offsets = {}

    def __eq__(self, other):
        return (isinstance(other, RLSLP) and self.sigma == other.sigma
                and self.start == other.start and self.rules == other.rules
                and self.exp_len == other.exp_len)

    def __repr__(self):
        return f"RLSLP(sigma={self.sigma}, rules={len(self.rules)}, n={self.n}, g={self.size})"

    @property
    def num_symbols(self):
        return self.sigma + len(self.rules)

    @property
    def n(self):
        return self.exp_len[self.start]

    @property
    def size(self):
        """Grammar size: block arities plus 2 per run rule."""
        return sum(2 if r.is_run else len(r.children) for r in self.rules)

    def is_terminal(self, a):
        return a < self.sigma

    def rule(self, a):
        return self.rules[a - self.sigma]

    def _check(self, a):
        if not 0 <= a < self.num_symbols:
            raise InvalidArgumentError(f"unknown symbol id {a}")

    def expansion_length(self, a):
        self._check(a)
        return self.exp_len[a]

    def child_offsets(self, a):
        """Cumulative child expansion offsets of a block rule, starting with 0."""
        offs = self._offsets.get(a)
        if offs is None:
            offs = [0]
            for c in self.rule(a).children:
                offs.append(offs[-1] + self.exp_len[c])
            self._offsets[a] = offs
        return offs

    def expand(self, a):
        """Full expansion of ``a``. Linear in its length; meant for tests and small inputs."""
        self._check(a)
        out = []
        stack = [a]
        sigma = self.sigma
        while stack:
            s = stack.pop()
            if s < sigma:
                out.append(s)
                continue
            r = self.rules[s - sigma]
            if r.is_run:
                stack.extend([r.base] * r.mult)
            else:
                stack.extend(reversed(r.children))
        return pack(out, sigma)

    def height(self):
        h = [0] * self.num_symbols
        for i, r in enumerate(self.rules):
            h[self.sigma + i] = 1 + max(h[c] for c in r.children)
        return h[self.start]

    def validate(self):
        """List of human-readable violations; empty for a well-formed grammar."""
        problems = []
        sigma = self.sigma
        if len(self.exp_len) != self.num_symbols:
            problems.append(f"length table has {len(self.exp_len)} entries, expected {self.num_symbols}")
            return problems
        for a in range(sigma):
            if self.exp_len[a] != 1:
                problems.append(f"terminal {a}: length {self.exp_len[a]} != 1")
        for i, r in enumerate(self.rules):
            a = sigma + i
            if any(not 0 <= c < a for c in r.children):
                problems.append(f"symbol {a}: child id out of order {r.children}")
                continue
            if r.is_run:
                if len(r.children) != 1:
                    problems.append(f"symbol {a}: run rule with {len(r.children)} bases")
                    continue
                want = self.exp_len[r.base] * r.mult
            else:
                if r.mult < 1:
                    problems.append(f"symbol {a}: multiplicity {r.mult} < 2")
                if len(r.children) < 2:
                    problems.append(f"symbol {a}: block arity {len(r.children)} < 2")
                want = sum(self.exp_len[c] for c in r.children)
            if self.exp_len[a] != want:
                problems.append(f"symbol {a}: length {self.exp_len[a]} != {want}")
        if not 0 <= self.start < self.num_symbols:
            problems.append(f"start symbol {self.start} out of range")
        return problems

    def check_runlength_periods(self):
        """Run rules whose expansion has a shorter period than the base length.

        Returns ``(symbol, shortest_period, base_length)`` triples.
        """
        bad = []
        for i, r in enumerate(self.rules):
            if not r.is_run:
                continue
            a = self.sigma + i
            text = np.frombuffer(self.expand(a), dtype=np.uint8) if self.sigma <= 256 \
                else np.array(self.expand(a), dtype=np.int64)
            p = kernels.shortest_period(text)
            if p != self.exp_len[r.base]:
                bad.append((a, p, self.exp_len[r.base]))
        return bad


def occurrence_slots(g):
    """Per symbol, every place it is used: ``(parent, offset, repeats, stride)``.

    A block child contributes one slot at its offset inside the parent; the
    base of a run ``A -> B^s`` contributes one slot repeated ``s`` times with
    stride ``|B|``. These are exactly the non-root grammar-tree nodes.
    """
    slots = [[] for _ in range(g.num_symbols)]
    for i, r in enumerate(g.rules):
        a = g.sigma + i
        if r.is_run:
            slots[r.base].append((a, 0, r.mult, g.exp_len[r.base]))
        else:
            off = 0
            for c in r.children:
                slots[c].append((a, off, 1, 0))
                off += g.exp_len[c]
    return slots


def symbol_weights(g):
    """Number of parse-tree nodes labelled with each symbol (``w(start) = 1``)."""
    if isinstance(g, GrammarTree):
        g = g.grammar
    w = [0] * g.num_symbols
    w[g.start] = 1
    for a in range(g.num_symbols - 1, g.sigma - 1, -1):
        if not w[a]:
            continue
        r = g.rules[a - g.sigma]
        if r.is_run:
            w[r.base] += w[a] * r.mult
        else:
            for c in r.children:
                w[c] += w[a]
    return w


@dataclass
class GrammarTree:
    """Pruned parse tree. Remainder leaves of runs carry ``label == -1``."""

    grammar: RLSLP
    label: list = field(default_factory=list)
    parent: list = field(default_factory=list)
    start: list = field(default_factory=list)
    is_leaf: list = field(default_factory=list)
    remainder: dict = field(default_factory=dict)   # node -> (base, count)
    internal_node: dict = field(default_factory=dict)
    leaf_occurrences: dict = field(default_factory=dict)  # symbol -> [(node, offset)]

    def __len__(self):
        return len(self.label)

    def node_length(self, v):
        if self.label[v] == -1:
            base, count = self.remainder[v]
            return self.grammar.exp_len[base] * count
        return self.grammar.exp_len[self.label[v]]


@dataclass
class PhrasePartition:
    ends: list            # 1-based end position of every phrase, increasing
    leaves: list          # covering grammar-tree leaf of each phrase

    def leaf_at(self, pos):
        """Leaf whose phrase covers 1-based text position ``pos``."""
        k = bisect_right(self.ends, pos - 1)
        return self.leaves[k]


def build_grammar_tree(g):
    tree = GrammarTree(grammar=g)
    sigma = g.sigma

    def new_node(label, parent, start):
        tree.label.append(label)
        tree.parent.append(parent)
        tree.start.append(start)
        tree.is_leaf.append(True)
        return len(tree.label) - 1

    root = new_node(g.start, -1, 0)
    leaf_order = []
    stack = [root]
    while stack:
        v = stack.pop()
        a = tree.label[v]
        if a == -1 or a < sigma or a in tree.internal_node:
            if a >= sigma:
                tree.leaf_occurrences.setdefault(a, []).append((v, tree.start[v]))
            leaf_order.append(v)
            continue
        tree.internal_node[a] = v
        tree.is_leaf[v] = False
        r = g.rules[a - sigma]
        base_off = tree.start[v]
        kids = []
        if r.is_run:
            kids.append(new_node(r.base, v, base_off))
            rem = new_node(-1, v, base_off + g.exp_len[r.base])
            tree.remainder[rem] = (r.base, r.mult - 1)
            kids.append(rem)
        else:
            off = base_off
            for c in r.children:
                kids.append(new_node(c, v, off))
                off += g.exp_len[c]
        stack.extend(reversed(kids))

    ends = []
    for v in leaf_order:
        ends.append(tree.start[v] + tree.node_length(v))
    return tree, PhrasePartition(ends=ends, leaves=leaf_order)
