"""Seeded test corpora with tunable structure."""

import numpy as np

from . import _kernels as _k
from .errors import ValidationError

__all__ = ["markov_corpus"]


def markov_corpus(n: int, sigma: int = 2, seed: int = 0) -> bytes:
    """n characters from a seeded order-2 chain over sigma symbols.

    Transition rows are drawn from a sparse-ish Dirichlet so the source has
    entropy strictly between 0 and log2(sigma) — compressible, but not
    trivially so.
    """
    if n < 0:
        raise ValidationError(f"corpus length must be >= 0, got {n}")
    if not 2 <= sigma <= 256:
        raise ValidationError(f"sigma must be in [2, 256], got {sigma}")
    rng = np.random.default_rng(seed)
    weights = rng.gamma(shape=0.4, scale=1.0, size=(sigma, sigma, sigma))
    weights += 1e-6  # keep every transition possible
    probs = weights / weights.sum(axis=2, keepdims=True)
    cum = np.cumsum(probs, axis=2)
    uniforms = rng.random(n)
    out = np.empty(n, dtype=np.uint8)
    if n:
        _k.markov_kernel(uniforms, cum, out)
    return out.tobytes()
