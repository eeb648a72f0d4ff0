import struct

import numpy as np
import pytest

from deltaidx import BundleFormatError, IndexConfig, build_index, bundle, corpus, verify


@pytest.fixture(scope="module")
def idx():
    return build_index(corpus.mutated_repeat(128, 8, 0.02, 2, 4))


@pytest.fixture(scope="module")
def blob(idx):
    return bundle.dumps(idx)


def test_round_trip(idx, blob, tmp_path):
    back = bundle.loads(blob)
    assert bundle.dumps(back) == blob
    assert back.grammar == idx.grammar
    assert back.perms == idx.perms
    assert back.delta == idx.delta and back.seed == idx.seed
    p = tmp_path / "x.didx"
    assert bundle.save(idx, p) == len(blob)
    assert bundle.dumps(bundle.load(p)) == blob
    text = corpus.mutated_repeat(128, 8, 0.02, 2, 4)
    for P in (text[:5], text[100:160], b"ac", b"zz"):
        assert back.locate(P).tolist() == idx.locate(P).tolist()
        assert back.count(P) == idx.count(P)


def test_seed_and_tokens_survive():
    idx = build_index("x y x y z", IndexConfig(seed=(1 << 64) - 3, tokens=True))
    back = bundle.loads(bundle.dumps(idx))
    assert back.seed == (1 << 64) - 3
    assert back.alphabet.tokens and back.alphabet.symbols == ["x", "y", "z"]
    assert back.locate("x y").tolist() == [1, 3]


def test_same_seed_same_bytes():
    t = corpus.random_text(3000, 4, 9)
    assert bundle.dumps(build_index(t)) == bundle.dumps(build_index(t))
    assert bundle.dumps(build_index(t, IndexConfig(seed=1))) != bundle.dumps(build_index(t))


def test_header_layout(blob):
    assert blob[:4] == b"DIDX" and blob[4] == 1
    (count,) = struct.unpack_from("<Q", blob, 5)
    ids = [struct.unpack_from("<QQQ", blob, 13 + 24 * i)[0] for i in range(count)]
    assert ids == sorted(ids) and {1, 2, 3, 7, 8} <= set(ids)


def test_unknown_sections_are_skipped(blob):
    secs = bundle.split_sections(blob)
    secs[99] = b"\x00" * 17
    bundle.loads(bundle.assemble(secs))


@pytest.mark.parametrize("mutate, section", [
    (lambda b: b"XIDX" + b[4:], None),
    (lambda b: b[:4] + b"\x07" + b[5:], None),
    (lambda b: b[:20], None),
])
def test_container_errors(blob, mutate, section):
    with pytest.raises(BundleFormatError):
        bundle.loads(mutate(blob))


@pytest.mark.parametrize("sid", [1, 2, 3, 4, 5, 6, 7, 8])
def test_missing_or_truncated_section(blob, sid):
    secs = bundle.split_sections(blob)
    if sid in secs:
        body = secs.pop(sid)
        with pytest.raises(BundleFormatError) as e:
            bundle.loads(bundle.assemble(secs))
        assert e.value.section == sid
        secs[sid] = body[:len(body) // 2 + 3]
        with pytest.raises(BundleFormatError):
            bundle.loads(bundle.assemble(secs))


def test_random_corruption_never_crashes(blob):
    rng = np.random.default_rng(0)
    for _ in range(300):
        b = bytearray(blob)
        for p in rng.integers(0, len(b), int(rng.integers(1, 4))):
            b[int(p)] ^= int(rng.integers(1, 256))
        try:
            bundle.loads(bytes(b))
        except BundleFormatError:
            pass


def test_corrupted_grid_fails_verification(idx):
    secs = bundle.split_sections(bundle.dumps(idx))
    arrays = bundle._unpack_arrays(secs[7], 7)
    border = arrays[3]
    border[border > 1] -= 1            # shift every border left by one
    arrays[3] = border
    secs[7] = bundle._pack_arrays(arrays)
    bad = bundle.loads(bundle.assemble(secs))
    text = corpus.mutated_repeat(128, 8, 0.02, 2, 4)
    rep = verify(bad, text, patterns=100, max_m=32, seed=1)
    assert not rep.ok and rep.mismatches > 0
    assert verify(idx, text, patterns=100, max_m=32, seed=1).ok
