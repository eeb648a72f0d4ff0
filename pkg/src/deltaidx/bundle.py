"""IndexBundle file format.

Layout (all integers little-endian)::

    b"DIDX" | version u8 = 1 | section count u64
    section table: (id u64, offset u64, length u64) per section
    section payloads

Each payload is a sequence of typed arrays: dtype code u8, element count
u64, raw data. Readers skip section ids they do not know.
"""

import struct
from fractions import Fraction

import numpy as np

from .alphabet import Alphabet
from .errors import BundleFormatError
from .grid import Grid, WaveletMatrix
from .query import Index, ShortTrie
from .rlslp import RLSLP, Rule, pack

MAGIC = b"DIDX"
VERSION = 1

HEADER, ALPHABET, RULES, PERMS, OCCURRENCES, WEIGHTS, GRID, FINGERPRINT, TRIE = range(1, 10)
SECTION_NAMES = {HEADER: "header", ALPHABET: "alphabet", RULES: "rules", PERMS: "perms",
                 OCCURRENCES: "occurrences", WEIGHTS: "weights", GRID: "grid",
                 FINGERPRINT: "fingerprint", TRIE: "trie"}

_DTYPES = {1: np.dtype("<i8"), 2: np.dtype("u1"), 3: np.dtype("<f8")}
_CODES = {v: k for k, v in _DTYPES.items()}

F_CAPPED, F_TOKENS, F_WARNING, F_EARLY_REJECT, F_TRIE = 1, 2, 4, 8, 16


def _pack_arrays(arrays):
    out = []
    for a in arrays:
        a = np.asarray(a)
        if a.dtype.kind in "iu" and a.dtype != np.uint8:
            a = a.astype("<i8")
        elif a.dtype.kind == "f":
            a = a.astype("<f8")
        elif a.dtype == np.bool_:
            a = a.astype(np.uint8)
        code = _CODES[a.dtype]
        out.append(struct.pack("<BQ", code, len(a)))
        out.append(np.ascontiguousarray(a).tobytes())
    return b"".join(out)


def _unpack_arrays(buf, section):
    arrays = []
    pos = 0
    try:
        while pos < len(buf):
            code, count = struct.unpack_from("<BQ", buf, pos)
            pos += 9
            dt = _DTYPES.get(code)
            if dt is None:
                raise BundleFormatError(f"unknown array type {code}", section)
            size = dt.itemsize * count
            if pos + size > len(buf):
                raise BundleFormatError("array runs past the section end", section)
            arrays.append(np.frombuffer(buf, dtype=dt, count=count, offset=pos).copy())
            pos += size
    except struct.error as e:
        raise BundleFormatError(f"truncated array header ({e})", section) from None
    return arrays


def _csr(seqs):
    ptr = np.zeros(len(seqs) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(s) for s in seqs])
    flat = np.fromiter((v for s in seqs for v in s), dtype=np.int64, count=int(ptr[-1]))
    return ptr, flat


def _uncsr(ptr, flat):
    return [flat[ptr[i]:ptr[i + 1]] for i in range(len(ptr) - 1)]


def _strings(seqs, sigma):
    """CSR of id strings; bytes when the alphabet fits in one."""
    if sigma <= 256:
        ptr = np.zeros(len(seqs) + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(s) for s in seqs])
        return ptr, np.frombuffer(b"".join(seqs), dtype=np.uint8)
    return _csr([list(s) for s in seqs])


def _unstrings(ptr, flat, sigma):
    lst = flat.tolist()
    p = ptr.tolist()
    return [pack(lst[p[i]:p[i + 1]], sigma) for i in range(len(p) - 1)]


# ---------------------------------------------------------------- save

def dumps(idx):
    g = idx.grammar
    grid = idx.grid
    flags = ((F_CAPPED if idx.capped else 0) | (F_TOKENS if idx.alphabet.tokens else 0)
             | (F_WARNING if idx.warning else 0) | (F_EARLY_REJECT if idx.early_reject else 0)
             | (F_TRIE if idx.use_trie else 0))
    sections = {}
    sections[HEADER] = _pack_arrays([
        np.array([g.n, g.sigma, idx.seed & ((1 << 63) - 1), flags, idx.delta.numerator,
                  idx.delta.denominator, g.size, idx.num_levels, g.start,
                  idx.trie.ell if idx.trie is not None else 0], dtype=np.int64),
        np.array([idx.bound_term], dtype=np.float64),
        np.array([idx.seed >> 63], dtype=np.int64),
    ])
    if idx.alphabet.tokens:
        blob = "\n".join(idx.alphabet.symbols).encode("utf-8")
        sections[ALPHABET] = _pack_arrays([np.array([1]), np.frombuffer(blob, dtype=np.uint8)])
    else:
        sections[ALPHABET] = _pack_arrays([np.array([0]),
                                           np.array(idx.alphabet.symbols, dtype=np.uint8)])
    ptr, flat = _csr([r.children for r in g.rules])
    sections[RULES] = _pack_arrays([np.array([r.mult for r in g.rules], dtype=np.int64),
                                    ptr, flat, np.asarray(g.exp_len, dtype=np.int64)])
    levels = sorted(idx.perms)
    perm_items = [sorted(idx.perms[k].items()) for k in levels]
    pptr = np.zeros(len(levels) + 1, dtype=np.int64)
    pptr[1:] = np.cumsum([len(it) for it in perm_items])
    sections[PERMS] = _pack_arrays([
        np.array(levels, dtype=np.int64), pptr,
        np.array([a for it in perm_items for a, _ in it], dtype=np.int64),
        np.array([r for it in perm_items for _, r in it], dtype=np.int64)])
    sptr = np.zeros(g.num_symbols + 1, dtype=np.int64)
    sptr[1:] = np.cumsum([len(s) for s in idx._slots])
    cols = list(zip(*[sl for s in idx._slots for sl in s])) or [(), (), (), ()]
    sections[OCCURRENCES] = _pack_arrays([sptr] + [np.array(c, dtype=np.int64) for c in cols])
    sections[WEIGHTS] = _pack_arrays([np.asarray(idx.weights, dtype=np.int64)])
    wm = grid.wm
    xk_ptr, xk_flat = _strings(grid.x_keys, g.sigma)
    yk_ptr, yk_flat = _strings(grid.y_keys, g.sigma)
    sections[GRID] = _pack_arrays([
        grid.kind, grid.parent, grid.child, grid.border, grid.xsym, grid.weight, grid.mult,
        grid.base_len, grid.x_rank, grid.y_rank, grid.x_reps, grid.y_reps,
        xk_ptr, xk_flat, yk_ptr, yk_flat,
        np.array([wm.nbits, wm.n], dtype=np.int64),
        np.packbits(np.concatenate(wm.bits) if wm.bits else np.zeros(0, np.uint8),
                    bitorder="little"),
        wm.leaf_ids])
    sections[FINGERPRINT] = _pack_arrays([
        np.array([idx.fp_base, idx.fingerprints.q], dtype=np.int64)])
    if idx.trie is not None:
        tp, tf = _strings(idx.trie.windows, g.sigma)
        sections[TRIE] = _pack_arrays([np.array([idx.trie.ell]), tp, tf])
    return assemble(sections)


def assemble(sections):
    """Container bytes for a {section id: payload} mapping (ids in increasing order)."""
    ids = sorted(sections)
    head = MAGIC + bytes([VERSION]) + struct.pack("<Q", len(ids))
    table_len = 24 * len(ids)
    offset = len(head) + table_len
    table = []
    for sid in ids:
        table.append(struct.pack("<QQQ", sid, offset, len(sections[sid])))
        offset += len(sections[sid])
    return head + b"".join(table) + b"".join(sections[s] for s in ids)


def save(idx, path):
    data = dumps(idx)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


# ---------------------------------------------------------------- load

def split_sections(data):
    data = bytes(data)
    if len(data) < 13 or data[:4] != MAGIC:
        raise BundleFormatError("bad magic; not an index bundle")
    if data[4] != VERSION:
        raise BundleFormatError(f"unsupported version {data[4]}")
    (count,) = struct.unpack_from("<Q", data, 5)
    if 13 + 24 * count > len(data):
        raise BundleFormatError("section table runs past end of file")
    out = {}
    for i in range(count):
        sid, off, length = struct.unpack_from("<QQQ", data, 13 + 24 * i)
        if off + length > len(data) or off < 13 + 24 * count:
            raise BundleFormatError("section extent outside the file", sid)
        out[sid] = data[off:off + length]
    return out


def _need(sections, sid):
    if sid not in sections:
        raise BundleFormatError("required section missing", sid)
    return _unpack_arrays(sections[sid], sid)


def _expect(arrays, count, sid):
    if len(arrays) < count:
        raise BundleFormatError(f"expected {count} arrays, found {len(arrays)}", sid)
    return arrays


def loads(data):
    """Index from bundle bytes; any inconsistency surfaces as BundleFormatError."""
    try:
        return _decode(data)
    except BundleFormatError:
        raise
    except (ValueError, IndexError, KeyError, OverflowError, TypeError) as e:
        raise BundleFormatError(f"corrupt payload ({type(e).__name__}: {e})") from None


def _decode(data):
    sections = split_sections(data)
    hdr = _expect(_need(sections, HEADER), 3, HEADER)
    if len(hdr[0]) < 10:
        raise BundleFormatError("short header", HEADER)
    n, sigma, seed_lo, flags, dnum, dden, gsize, num_levels, start, ell = hdr[0].tolist()
    bound_term = float(hdr[1][0])
    seed = seed_lo | (int(hdr[2][0]) << 63)
    if dden <= 0:
        raise BundleFormatError("delta denominator must be positive", HEADER)

    alpha = _expect(_need(sections, ALPHABET), 2, ALPHABET)
    if int(alpha[0][0]):
        syms = bytes(alpha[1]).decode("utf-8").split("\n") if len(alpha[1]) else []
        alphabet = Alphabet(syms, tokens=True)
    else:
        alphabet = Alphabet(alpha[1].tolist())
    if len(alphabet) != sigma:
        raise BundleFormatError("alphabet size disagrees with header", ALPHABET)

    mult, ptr, flat, exp_len = _expect(_need(sections, RULES), 4, RULES)[:4]
    if len(ptr) != len(mult) + 1 or (len(ptr) and ptr[-1] != len(flat)):
        raise BundleFormatError("rule table inconsistent", RULES)
    rules = [Rule(tuple(ch.tolist()), int(mu)) for ch, mu in zip(_uncsr(ptr, flat), mult)]
    g = RLSLP(sigma, rules, start, exp_len=exp_len.tolist())
    if g.validate() or g.n != n or g.size != gsize:
        raise BundleFormatError("grammar fails validation", RULES)

    levels, pptr, psym, prank = _expect(_need(sections, PERMS), 4, PERMS)[:4]
    perms = {}
    for i, k in enumerate(levels.tolist()):
        a, b = int(pptr[i]), int(pptr[i + 1])
        perms[k] = dict(zip(psym[a:b].tolist(), prank[a:b].tolist()))

    occ = _expect(_need(sections, OCCURRENCES), 5, OCCURRENCES)
    sptr = occ[0].tolist()
    if len(sptr) != g.num_symbols + 1:
        raise BundleFormatError("occurrence table size mismatch", OCCURRENCES)
    cols = [c.tolist() for c in occ[1:5]]
    rows = list(zip(*cols))
    slots = [rows[sptr[i]:sptr[i + 1]] for i in range(g.num_symbols)]

    weights = _expect(_need(sections, WEIGHTS), 1, WEIGHTS)[0].tolist()
    if len(weights) != g.num_symbols:
        raise BundleFormatError("weight table size mismatch", WEIGHTS)

    ga = _expect(_need(sections, GRID), 19, GRID)
    (kind, parent, child, border, xsym, weight, mult_, base_len, x_rank, y_rank,
     x_reps, y_reps, xk_ptr, xk_flat, yk_ptr, yk_flat, wmeta, wbits, leaf_ids) = ga[:19]
    npts = len(kind)
    if any(len(a) != npts for a in (parent, child, border, xsym, weight, mult_, base_len,
                                     x_rank, y_rank, leaf_ids)):
        raise BundleFormatError("point arrays have different lengths", GRID)
    nbits, wn = wmeta.tolist()
    bits = np.unpackbits(wbits, count=nbits * wn, bitorder="little") if nbits * wn else \
        np.zeros(0, np.uint8)
    if len(bits) != nbits * wn or wn != npts:
        raise BundleFormatError("wavelet bit rows truncated", GRID)
    order = np.lexsort((np.arange(npts), x_rank))
    w_in_order = np.where(kind[order] == 0, weight[order], 0)
    wm = WaveletMatrix.from_bits([bits[i * wn:(i + 1) * wn] for i in range(nbits)],
                                 leaf_ids, w_in_order)
    grid = Grid(g, kind, parent, child, border, xsym, weight, mult_, base_len, x_rank, y_rank,
                x_reps, y_reps, _unstrings(xk_ptr, xk_flat, sigma),
                _unstrings(yk_ptr, yk_flat, sigma), wm=wm)

    fpa = _expect(_need(sections, FINGERPRINT), 1, FINGERPRINT)[0].tolist()
    fp_base = int(fpa[0])

    trie = None
    if TRIE in sections:
        ta = _expect(_unpack_arrays(sections[TRIE], TRIE), 3, TRIE)
        trie = ShortTrie(int(ta[0][0]), _unstrings(ta[1], ta[2], sigma))

    block_lookup, run_lookup = {}, {}
    for i, r in enumerate(rules):
        if r.is_run:
            run_lookup[(r.base, r.mult)] = sigma + i
        else:
            block_lookup[r.children] = sigma + i

    idx = Index(alphabet, g, perms, num_levels, block_lookup, run_lookup, grid, trie, fp_base,
                seed=seed, capped=bool(flags & F_CAPPED), delta=Fraction(dnum, dden),
                bound_term=bound_term, warning=bool(flags & F_WARNING),
                weights=weights, slots=slots)
    idx.early_reject = bool(flags & F_EARLY_REJECT)
    idx.use_trie = bool(flags & F_TRIE)
    return idx


def load(path):
    with open(path, "rb") as fh:
        return loads(fh.read())
