"""Seed handling: every random choice flows from an explicit seed."""
import numpy as np

SEED_BYTES = 32


def parse_seed(seed):
    """Normalize a seed (int, bytes, or hex string) to 32 bytes."""
    if isinstance(seed, (bytes, bytearray)):
        raw = bytes(seed)
    elif isinstance(seed, str):
        text = seed.strip().lower()
        if text.startswith("0x"):
            text = text[2:]
        if not text or len(text) > 2 * SEED_BYTES:
            raise ValueError("seed must be 1 to 64 hex digits")
        raw = bytes.fromhex(text.rjust(2 * SEED_BYTES, "0"))
    elif isinstance(seed, (int, np.integer)):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        raw = int(seed).to_bytes(SEED_BYTES, "big")
    else:
        raise TypeError(f"unsupported seed type {type(seed).__name__}")
    if len(raw) > SEED_BYTES:
        raise ValueError("seed longer than 32 bytes")
    return raw.rjust(SEED_BYTES, b"\0")


def make_rng(seed, *stream):
    """Generator for ``seed`` and an optional stream path (e.g. trial index)."""
    if isinstance(seed, np.random.Generator):
        if stream:
            raise ValueError("cannot derive a stream from a live Generator")
        return seed
    entropy = int.from_bytes(parse_seed(seed), "big")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([entropy, *stream])))
