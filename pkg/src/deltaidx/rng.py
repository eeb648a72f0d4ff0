"""All randomness comes from one 64-bit seed through counter-based Philox streams."""

import numpy as np

FP_STREAM = 0          # fingerprint base
ATTEMPT_STREAM = 1     # compressor attempt i uses ATTEMPT_STREAM + i


def rng_stream(seed, stream_id):
    seed = int(seed) & ((1 << 64) - 1)
    key = (int(stream_id) << 64) | seed
    return np.random.Generator(np.random.Philox(key=key))
