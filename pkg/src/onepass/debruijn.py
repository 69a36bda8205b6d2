"""de Bruijn sequences: canonical generation, randomized sampling, exhaustive
counting, and the repeated-prefix corpora whose order-k entropy is exactly zero.

Sequences are byte strings (symbol i is byte value i).  A linear sequence of
order k over sigma symbols has length sigma^k + k - 1, contains every k-tuple
exactly once, and begins and ends with the same k - 1 characters.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._util import ceil_snapped
from .entropy import _window_ids
from .errors import ValidationError

__all__ = [
    "ENUMERATION_LIMIT",
    "GENERATION_LIMIT",
    "DeBruijnSpec",
    "adversarial_corpus",
    "critical_order",
    "enumerate_count",
    "generate",
    "random_debruijn",
    "verify",
]

# exhaustive search is kept to toy sizes; generation is capped by memory
ENUMERATION_LIMIT = 16
GENERATION_LIMIT = 1 << 26


@dataclass(frozen=True)
class DeBruijnSpec:
    sigma: int
    k: int

    def __post_init__(self):
        if not 2 <= self.sigma <= 256:
            raise ValidationError(f"sigma must be in [2, 256], got {self.sigma}")
        if self.k < 1:
            raise ValidationError(f"order must be >= 1, got {self.k}")
        if self.sigma ** self.k > GENERATION_LIMIT:
            raise ValidationError(
                f"sigma^k = {self.sigma}^{self.k} exceeds the generation limit"
            )

    @property
    def cycle_length(self) -> int:
        return self.sigma ** self.k

    @property
    def linear_length(self) -> int:
        return self.sigma ** self.k + self.k - 1


def _linearize(cyclic: bytes, k: int) -> bytes:
    return cyclic + cyclic[: k - 1]


def generate(spec: DeBruijnSpec) -> bytes:
    """Canonical sequence: concatenate, in order, the necklace words whose
    length divides k; the result is the lexicographically least sequence."""
    sigma, k = spec.sigma, spec.k
    a = [0] * (k + 1)
    seq = bytearray()
    i = 1
    while True:
        if k % i == 0:
            seq.extend(a[1 : i + 1])
        j = k
        while j >= 1 and a[j] == sigma - 1:
            j -= 1
        if j == 0:
            break
        a[j] += 1
        for t in range(j + 1, k + 1):
            a[t] = a[t - j]
        i = j
    return _linearize(bytes(seq), k)


def verify(s, spec: DeBruijnSpec) -> bool:
    """True iff s is a linear de Bruijn sequence for spec."""
    if isinstance(s, str):
        try:
            s = bytes(int(ch) for ch in s)
        except ValueError:
            return False
    arr = np.frombuffer(bytes(s), dtype=np.uint8)
    if arr.size != spec.linear_length:
        return False
    if int(arr.max()) >= spec.sigma:
        return False
    k = spec.k
    if k > 1 and not np.array_equal(arr[: k - 1], arr[-(k - 1):]):
        return False
    ids = _window_ids(arr, k, spec.sigma)
    return int(np.unique(ids).size) == spec.cycle_length


def _all_linear(spec: DeBruijnSpec):
    """Every linear sequence for a toy spec, by pruned depth-first search."""
    sigma, k = spec.sigma, spec.k
    total = spec.linear_length
    found = []
    prefix = bytearray()
    seen = set()

    def extend():
        depth = len(prefix)
        if depth == total:
            if k == 1 or prefix[: k - 1] == prefix[-(k - 1):]:
                found.append(bytes(prefix))
            return
        for sym in range(sigma):
            prefix.append(sym)
            window = bytes(prefix[-k:]) if depth + 1 >= k else None
            if window is None:
                extend()
            elif window not in seen:
                seen.add(window)
                extend()
                seen.remove(window)
            prefix.pop()

    extend()
    return found


def enumerate_count(spec: DeBruijnSpec) -> int:
    """Count all linear sequences for spec by exhaustive search."""
    if spec.cycle_length > ENUMERATION_LIMIT:
        raise ValidationError(
            f"exhaustive counting is limited to sigma^k <= {ENUMERATION_LIMIT}"
        )
    return len(_all_linear(spec))


def random_debruijn(spec: DeBruijnSpec, seed: int = 0) -> bytes:
    """A valid sequence chosen by seed.

    Toy specs (sigma^k <= 16) are sampled uniformly from the full
    enumeration; larger ones walk the de Bruijn graph with a per-node random
    edge order, which is valid but not uniform.
    """
    rng = np.random.default_rng(seed)
    if spec.cycle_length <= ENUMERATION_LIMIT:
        candidates = _all_linear(spec)
        return candidates[int(rng.integers(len(candidates)))]

    sigma, k = spec.sigma, spec.k
    nnodes = sigma ** (k - 1)
    orders = np.argsort(rng.random((nnodes, sigma)), axis=1).astype(np.int64)
    next_edge = np.zeros(nnodes, dtype=np.int64)
    stack = [(0, -1)]
    labels = []
    while stack:
        node, incoming = stack[-1]
        if next_edge[node] < sigma:
            sym = int(orders[node, next_edge[node]])
            next_edge[node] += 1
            stack.append(((node * sigma + sym) % nnodes, sym))
        else:
            stack.pop()
            if incoming >= 0:
                labels.append(incoming)
    labels.reverse()
    if len(labels) != spec.cycle_length:
        raise AssertionError("graph walk did not cover every edge")
    return _linearize(bytes(labels), k)


def adversarial_corpus(spec: DeBruijnSpec, n: int, seed: int = 0) -> bytes:
    """Whole repetitions of d, the first sigma^k characters of a sampled
    sequence: the longest such string not exceeding n characters.

    Every k-tuple's successor in the result is determined by the tuple, so
    the order-k entropy of the corpus is exactly zero.
    """
    period = spec.cycle_length
    if n < period:
        raise ValidationError(
            f"corpus length {n} is below one period; minimum feasible n is {period}"
        )
    d = random_debruijn(spec, seed)[:period]
    return d * (n // period)


def critical_order(n: int, sigma: int, c: float, eps: float) -> int:
    """The context order matched to a memory exponent: ceil((c + eps/2) * log_sigma(n)).

    At this order a de Bruijn period just exceeds what an n^c-memory encoder
    can carry across blocks, which is what makes adversarial_corpus hard for
    small-memory encoders and easy for whole-string ones.
    """
    if n < 2:
        raise ValidationError(f"n must be at least 2, got {n}")
    if sigma < 2:
        raise ValidationError(f"sigma must be at least 2, got {sigma}")
    value = (c + eps / 2.0) * math.log(n) / math.log(sigma)
    return max(1, ceil_snapped(value))
