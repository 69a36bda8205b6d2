"""Per-block codec chain: transform, move-to-front, zero-run coding, and an
adaptive arithmetic coder.

Symbol bookkeeping for a source alphabet of size sigma:

* transform output: sigma + 1 symbols (the end marker plus all bytes), which
  move-to-front sees shifted up by one so the marker is symbol 0;
* token stream: 0 and 1 carry zero-run digits, a nonzero rank r rides as
  r + 1, giving sigma + 2 token values;
* the coder adds its own end-of-stream symbol on top of that.
"""

import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .bwt import SENTINEL, bwt_forward, bwt_inverse
from .errors import CorruptionError, ValidationError

__all__ = [
    "RUNA",
    "RUNB",
    "BlockPayload",
    "block_working_bytes",
    "compress_block",
    "decompress_block",
    "entropy_decode",
    "entropy_encode",
    "mtf_decode",
    "mtf_encode",
    "rle0_decode",
    "rle0_encode",
    "token_alphabet_size",
]

RUNA = 0
RUNB = 1

_RECORD = struct.Struct("<III")
_MAX_U32 = (1 << 32) - 1


def token_alphabet_size(sigma: int) -> int:
    return sigma + 2


def _as_int64(seq) -> np.ndarray:
    return np.ascontiguousarray(seq, dtype=np.int64)


def mtf_encode(symbols, alpha_size: int) -> np.ndarray:
    arr = _as_int64(symbols)
    if arr.size and not (0 <= int(arr.min()) and int(arr.max()) < alpha_size):
        raise ValidationError("symbol out of range for move-to-front table")
    return _k.mtf_encode_kernel(arr, alpha_size)


def mtf_decode(ranks, alpha_size: int) -> np.ndarray:
    arr = _as_int64(ranks)
    if arr.size and not (0 <= int(arr.min()) and int(arr.max()) < alpha_size):
        raise CorruptionError("rank out of range for move-to-front table")
    return _k.mtf_decode_kernel(arr, alpha_size)


def rle0_encode(ranks) -> np.ndarray:
    arr = _as_int64(ranks)
    if arr.size and int(arr.min()) < 0:
        raise ValidationError("negative rank")
    return _k.rle0_encode_kernel(arr)


def rle0_decode(tokens, output_length: int) -> np.ndarray:
    arr = _as_int64(tokens)
    if arr.size and int(arr.min()) < 0:
        raise CorruptionError("negative token")
    out, count = _k.rle0_decode_kernel(arr, output_length)
    if count != output_length:
        raise CorruptionError(
            f"run-length stream expands to {count} symbols, expected {output_length}"
        )
    return out[:count].copy()


def entropy_encode(tokens, alphabet_size: int) -> bytes:
    arr = _as_int64(tokens)
    if arr.size and not (0 <= int(arr.min()) and int(arr.max()) < alphabet_size):
        raise ValidationError("token out of range for coder alphabet")
    return _k.arith_encode_kernel(arr, alphabet_size).tobytes()


def entropy_decode(data: bytes, alphabet_size: int, max_tokens: int) -> np.ndarray:
    buf = np.frombuffer(bytes(data), dtype=np.uint8)
    out, count = _k.arith_decode_kernel(buf, alphabet_size, max_tokens)
    if count == -1:
        raise CorruptionError(f"coded stream yields more than {max_tokens} tokens")
    if count == -2:
        raise CorruptionError("coded stream truncated")
    return out[:count].copy()


@dataclass(frozen=True)
class BlockPayload:
    """One compressed block: original length, marked transform row, coder
    output bytes."""

    raw_len: int
    primary_index: int
    body: bytes

    def __post_init__(self):
        if not 1 <= self.raw_len <= _MAX_U32:
            raise ValidationError(f"block length {self.raw_len} out of range")
        if not 0 <= self.primary_index <= _MAX_U32:
            raise ValidationError("marked row out of range")
        if len(self.body) > _MAX_U32:
            raise ValidationError("payload body too large")

    def pack(self) -> bytes:
        return _RECORD.pack(self.raw_len, self.primary_index, len(self.body)) + self.body


def compress_block(block, sigma: int = 256) -> BlockPayload:
    arr = np.frombuffer(bytes(block), dtype=np.uint8) if not isinstance(
        block, np.ndarray
    ) else np.ascontiguousarray(block, dtype=np.uint8)
    if arr.size == 0:
        raise ValidationError("cannot compress an empty block")
    if arr.size > _MAX_U32:
        raise ValidationError("block exceeds the 32-bit length limit")
    if int(arr.max()) >= sigma:
        raise ValidationError(
            f"byte {int(arr.max())} outside declared alphabet of size {sigma}"
        )
    transformed, primary_index = bwt_forward(arr)
    syms = transformed.astype(np.int64) + 1
    ranks = _k.mtf_encode_kernel(syms, sigma + 1)
    tokens = _k.rle0_encode_kernel(ranks)
    body = _k.arith_encode_kernel(tokens, token_alphabet_size(sigma)).tobytes()
    return BlockPayload(raw_len=arr.size, primary_index=primary_index, body=body)


def decompress_block(payload: BlockPayload, sigma: int = 256) -> bytes:
    n = payload.raw_len + 1
    if payload.raw_len < 1:
        raise CorruptionError("block length must be positive")
    if payload.primary_index >= n:
        raise CorruptionError(
            f"marked row {payload.primary_index} out of range for block of "
            f"length {payload.raw_len}"
        )
    # a well-formed token stream never carries more tokens than output symbols
    tokens = entropy_decode(payload.body, token_alphabet_size(sigma), n)
    ranks = rle0_decode(tokens, n)
    syms = _k.mtf_decode_kernel(ranks, sigma + 1)
    return bwt_inverse(syms - 1, payload.primary_index, sigma)


def block_working_bytes(length: int, sigma: int) -> int:
    """Deterministic model of the codec's peak scratch for one block.

    Mirrors the buffers the implementation actually allocates: the raw block,
    the suffix-sort arrays, the transform output, the move-to-front and
    run-length arrays, and the coder tables and output buffer.
    """
    m = length + 1
    return (
        length  # raw block bytes
        + 8 * m  # marker-extended symbols fed to the suffix sort
        + 5 * 8 * m  # suffix-sort orders, ranks and key scratch
        + 8 * (m + 2)  # counting-sort bins
        + 2 * m  # transform output
        + 2 * 8 * m  # move-to-front input and ranks
        + 8 * (sigma + 1)  # move-to-front table
        + 8 * m  # run-length tokens
        + 8 * (sigma + 3)  # coder frequency table
        + 2 * m + 256  # coder output buffer
    )
