"""Context-conditioned empirical entropy of byte strings.

The central quantity is the order-k empirical entropy: the average number of
bits per character that an ideal coder needs when it predicts every character
from the k characters immediately before it, with the frequencies taken from
the string itself.  The first k characters of the string are treated as given
and contribute zero bits.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "AlphabetSpec",
    "EntropyProfile",
    "context_stats",
    "empirical_entropy",
    "entropy_profile",
]

# Orders above log_sigma(n) + this constant are statistically vacuous: almost
# every context occurs once and the entropy collapses toward zero.
_VACUOUS_ORDER_SLACK = 2


@dataclass(frozen=True)
class AlphabetSpec:
    """Declares the symbol alphabet: byte values 0 .. sigma-1."""

    sigma: int

    def __post_init__(self):
        if not 2 <= self.sigma <= 256:
            raise ValidationError(f"sigma must be in [2, 256], got {self.sigma}")

    def validate_symbols(self, arr: np.ndarray) -> None:
        if arr.size and int(arr.max()) >= self.sigma:
            raise ValidationError(
                f"symbol {int(arr.max())} out of range for alphabet of size {self.sigma}"
            )


BYTE_ALPHABET = AlphabetSpec(256)


@dataclass(frozen=True)
class EntropyProfile:
    """Entropy per character, in bits, for each context order 0..kmax."""

    n: int
    values: tuple

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def _as_symbol_array(s) -> np.ndarray:
    if isinstance(s, np.ndarray):
        return np.ascontiguousarray(s, dtype=np.uint8)
    return np.frombuffer(bytes(s), dtype=np.uint8)


def _window_ids(arr: np.ndarray, width: int, sigma: int):
    """Integer ids for all length-`width` windows, comparable lexicographically.

    Uses base-sigma packing when the id fits in an int64, otherwise a raw-byte
    view; either way equal windows get equal ids and the sort order matches
    the lexicographic order of the windows.
    """
    m = arr.size - width + 1
    bits = max(1, (sigma - 1).bit_length())
    if width * bits <= 63:
        a = arr.astype(np.int64)
        ids = np.zeros(m, dtype=np.int64)
        for j in range(width):
            ids = ids * sigma + a[j:j + m]
        return ids
    win = np.ascontiguousarray(np.lib.stride_tricks.sliding_window_view(arr, width))
    return win.view(np.dtype((np.void, width))).ravel()


def _follower_counts(arr: np.ndarray, k: int, sigma: int):
    """Per-(context, follower) occurrence counts.

    Returns (pair_windows, pair_counts, ctx_index, ctx_totals) where
    pair_windows[i] is the unique (k+1)-window id, pair_counts[i] its count,
    ctx_index[i] the dense id of its length-k prefix and ctx_totals the count
    mass of each context.
    """
    pair_ids = _window_ids(arr, k + 1, sigma)
    upairs, counts = np.unique(pair_ids, return_counts=True)
    if upairs.dtype == np.int64:
        ctx_of_pair = upairs // sigma
    else:
        raw = upairs.view(np.uint8).reshape(-1, k + 1)
        ctx_of_pair = np.ascontiguousarray(raw[:, :k]).view(
            np.dtype((np.void, k))
        ).ravel()
    _, ctx_index = np.unique(ctx_of_pair, return_inverse=True)
    ctx_totals = np.bincount(ctx_index, weights=counts)
    return upairs, counts, ctx_index, ctx_totals


def context_stats(s, k: int, alphabet: AlphabetSpec = BYTE_ALPHABET) -> dict:
    """Map each length-k context occurring in s to its follower frequencies.

    The result maps context bytes to {symbol: count}; a context contributes
    one count per position where it is followed by a character.  Occurrences
    flush against the end of the string carry no follower and add nothing.
    """
    if k < 0:
        raise ValidationError(f"context order must be >= 0, got {k}")
    arr = _as_symbol_array(s)
    alphabet.validate_symbols(arr)
    if arr.size <= k:
        return {}
    stats: dict = {}
    if k == 0:
        counts = np.bincount(arr, minlength=0)
        stats[b""] = {int(sym): int(c) for sym, c in enumerate(counts) if c}
        return stats
    win = np.lib.stride_tricks.sliding_window_view(arr, k + 1)
    # Group by window id; decode one representative per group back to bytes.
    pair_ids = _window_ids(arr, k + 1, alphabet.sigma)
    order = np.argsort(pair_ids, kind="stable")
    sorted_ids = pair_ids[order]
    boundaries = np.flatnonzero(
        np.concatenate(([True], sorted_ids[1:] != sorted_ids[:-1]))
    )
    group_sizes = np.diff(np.append(boundaries, sorted_ids.size))
    for start, size in zip(boundaries, group_sizes):
        w = win[order[start]]
        ctx = bytes(w[:k])
        stats.setdefault(ctx, {})[int(w[k])] = int(size)
    return stats


def empirical_entropy(s, k: int, alphabet: AlphabetSpec = BYTE_ALPHABET) -> float:
    """Order-k empirical entropy of s, in bits per character.

    Computed as (1/n) * sum over contexts w of |w_s| * H0(w_s), where w_s
    collects the characters following each occurrence of w.  The first k
    characters contribute nothing.
    """
    if k < 0:
        raise ValidationError(f"context order must be >= 0, got {k}")
    arr = _as_symbol_array(s)
    if arr.size == 0:
        raise ValidationError("cannot compute entropy of an empty string")
    if k > arr.size:
        raise ValidationError(
            f"context order {k} exceeds string length {arr.size}"
        )
    alphabet.validate_symbols(arr)
    n = arr.size
    if k == n:
        return 0.0
    if k == 0:
        counts = np.bincount(arr).astype(np.float64)
        counts = counts[counts > 0]
        return float((counts * np.log2(n / counts)).sum() / n)
    _, counts, ctx_index, ctx_totals = _follower_counts(arr, k, alphabet.sigma)
    c = counts.astype(np.float64)
    return float((c * np.log2(ctx_totals[ctx_index] / c)).sum() / n)


def entropy_profile(s, kmax: int, alphabet: AlphabetSpec = BYTE_ALPHABET) -> EntropyProfile:
    """Entropy values for every order 0..kmax."""
    if kmax < 0:
        raise ValidationError(f"kmax must be >= 0, got {kmax}")
    arr = _as_symbol_array(s)
    if arr.size == 0:
        raise ValidationError("cannot compute entropy of an empty string")
    if kmax > arr.size:
        raise ValidationError(
            f"kmax {kmax} exceeds string length {arr.size}"
        )
    vacuous = math.log(arr.size) / math.log(alphabet.sigma) + _VACUOUS_ORDER_SLACK
    if kmax > vacuous:
        warnings.warn(
            f"kmax={kmax} exceeds log_sigma(n)+{_VACUOUS_ORDER_SLACK}"
            f"={vacuous:.1f}; high-order statistics are vacuous",
            stacklevel=2,
        )
    values = tuple(empirical_entropy(arr, k, alphabet) for k in range(kmax + 1))
    return EntropyProfile(n=arr.size, values=values)
