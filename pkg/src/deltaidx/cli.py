"""Command line interface: build, locate, count, stats, verify, gen.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
3 malformed index bundle.
"""

import argparse
import json
import sys
import time

from . import bundle
from .compressor import CompressorConfig, compress, ell
from .corpus import generate, read_input
from .errors import BundleFormatError, InvalidArgumentError
from .harness import verify
from .alphabet import Alphabet
from .measures import delta_bound_term, fact_sum_check, substring_complexity
from .pattern import EXHAUSTIVE, MCUT
from .query import IndexConfig, build_index

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_FORMAT = 0, 1, 2, 3


def _out(line):
    sys.stdout.write(line + "\n")


def cmd_build(args):
    data = read_input(args.input)
    cfg = IndexConfig(seed=args.seed, cap_height=args.cap, retries=args.retries,
                      trie_len=args.trie_len, tokens=args.tokens)
    t0 = time.perf_counter()
    idx = build_index(data, cfg)
    ms = (time.perf_counter() - t0) * 1000
    size = bundle.save(idx, args.output)
    _out(f"n: {idx.n}")
    _out(f"sigma: {idx.sigma}")
    _out(f"delta: {idx.delta} ({float(idx.delta):.4f})")
    _out(f"g: {idx.size}")
    _out(f"bound_term: {idx.bound_term:.4f}")
    _out(f"levels: {idx.num_levels}")
    _out(f"bundle_bytes: {size}")
    _out(f"build_ms: {ms:.1f}")
    if idx.warning:
        _out("warning: grammar size above the retry threshold")
    return EXIT_OK


def _pattern(args):
    if args.pattern_file:
        with open(args.pattern_file, "rb") as fh:
            return fh.read()
    if args.pattern is None:
        raise InvalidArgumentError("give a pattern or --pattern-file")
    return args.pattern.encode("utf-8")


def cmd_locate(args):
    idx = bundle.load(args.index)
    P = _pattern(args)
    if idx.alphabet.tokens:
        P = P.decode("utf-8")
    for p in idx.locate(P, args.cuts).tolist():
        _out(str(p))
    return EXIT_OK


def cmd_count(args):
    idx = bundle.load(args.index)
    P = _pattern(args)
    if idx.alphabet.tokens:
        P = P.decode("utf-8")
    _out(str(idx.count(P, args.cuts)))
    return EXIT_OK


def _emit(rows, fmt):
    for kind, key, value in rows:
        if fmt == "json":
            _out(json.dumps({"kind": kind, "key": key, "value": value}))
        else:
            _out(f"{kind},{key},{value}")


def cmd_stats(args):
    rows = []
    if _is_bundle(args.input):
        idx = bundle.load(args.input)
        rows += [("summary", "n", idx.n), ("summary", "sigma", idx.sigma),
                 ("summary", "delta_num", idx.delta.numerator),
                 ("summary", "delta_den", idx.delta.denominator),
                 ("summary", "bound_term", round(idx.bound_term, 6)),
                 ("summary", "grammar_size", idx.size),
                 ("summary", "levels", idx.num_levels),
                 ("summary", "grid_points", len(idx.grid))]
        _emit(rows, args.format)
        return EXIT_OK
    data = read_input(args.input)
    alphabet = Alphabet.from_text(data, tokens=args.tokens)
    ids = alphabet.encode(data)
    if len(ids) == 0:
        raise InvalidArgumentError("empty text")
    prof = substring_complexity(ids)
    res = compress(ids, len(alphabet), CompressorConfig(seed=args.seed, cap_height=args.cap,
                                                        delta=prof.delta))
    n = prof.n
    kmax = n if args.max_k is None else min(n, args.max_k)
    rows += [("d", k, int(prof.d[k])) for k in range(1, kmax + 1)]
    for k, size in enumerate(res.trace.sizes):
        limit = 1 + 4 * n / ell(k + 1)
        rows.append(("level", k, size))
        rows.append(("level_limit", k, round(float(limit), 6)))
        rows.append(("level_ok", k, int(size < limit)))
    lhs, rhs = fact_sum_check(prof)
    bound = delta_bound_term(n, max(prof.sigma_used, 2), prof.delta)
    rows += [("summary", "n", n), ("summary", "sigma", prof.sigma_used),
             ("summary", "delta_num", prof.delta_num), ("summary", "delta_den", prof.delta_den),
             ("summary", "bound_term", round(bound, 6)),
             ("summary", "grammar_size", res.grammar.size),
             ("summary", "level_sum", sum(res.trace.sizes)),
             ("summary", "kappa", res.trace.kappa), ("summary", "lambda", res.trace.lam),
             ("summary", "fact_lhs", round(float(lhs), 6)),
             ("summary", "fact_rhs", round(rhs, 6))]
    _emit(rows, args.format)
    return EXIT_OK


def _is_bundle(path):
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == bundle.MAGIC
    except OSError:
        return False


def cmd_verify(args):
    idx = bundle.load(args.index)
    text = read_input(args.text)
    if idx.alphabet.tokens:
        text = text.decode("utf-8")
    rep = verify(idx, text, patterns=args.patterns, max_m=args.max_m, seed=args.seed,
                 exhaustive=not args.no_exhaustive)
    for line in rep.lines():
        _out(line)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_gen(args):
    data = generate(args.spec)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        with open(args.output, "wb") as fh:
            fh.write(data)
    return EXIT_OK


def make_parser():
    p = argparse.ArgumentParser(prog="deltaidx", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="compress a text and write an index bundle")
    b.add_argument("input", help="text file or corpus spec (e.g. fibonacci:20)")
    b.add_argument("output", help="bundle path")
    b.add_argument("--seed", type=int, default=0)
    cap = b.add_mutually_exclusive_group()
    cap.add_argument("--cap-height", dest="cap", action="store_true", default=True)
    cap.add_argument("--no-cap", dest="cap", action="store_false")
    b.add_argument("--retries", type=int, default=5)
    b.add_argument("--trie-len", type=int, default=None)
    b.add_argument("--tokens", action="store_true", help="index whitespace-separated tokens")
    b.set_defaults(func=cmd_build)

    for name, func in (("locate", cmd_locate), ("count", cmd_count)):
        q = sub.add_parser(name, help=f"{name} a pattern")
        q.add_argument("index")
        q.add_argument("pattern", nargs="?")
        q.add_argument("--pattern-file")
        q.add_argument("--cuts", choices=[MCUT, EXHAUSTIVE], default=MCUT)
        q.set_defaults(func=func)

    s = sub.add_parser("stats", help="complexity profile and grammar statistics")
    s.add_argument("input", help="index bundle, text file or corpus spec")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--max-k", type=int, default=None, help="emit d_k only up to this k")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--no-cap", dest="cap", action="store_false", default=True)
    s.add_argument("--tokens", action="store_true")
    s.set_defaults(func=cmd_stats)

    v = sub.add_parser("verify", help="check an index against brute force")
    v.add_argument("index")
    v.add_argument("--text", required=True, help="original text file or corpus spec")
    v.add_argument("--patterns", type=int, default=1000)
    v.add_argument("--max-m", type=int, default=64)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--no-exhaustive", action="store_true",
                   help="skip the exhaustive-cut comparison")
    v.set_defaults(func=cmd_verify)

    gn = sub.add_parser("gen", help="write a generated corpus")
    gn.add_argument("spec")
    gn.add_argument("-o", "--output", default=None)
    gn.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BundleFormatError as e:
        sys.stderr.write(f"format error: {e}\n")
        return EXIT_FORMAT
    except (InvalidArgumentError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
