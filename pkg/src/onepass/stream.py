"""One-pass, memory-bounded stream encoder/decoder.

The driver cuts the input into blocks whose length is set by a memory/size
trade-off pair (c, eps): block length n^(c - eps/2) when the total length n
is known up front, and the same formula applied to a running estimate that
starts at 1024 characters and doubles each time the input outgrows it.  Each
block is compressed independently and framed into a simple container.
"""

import io
import math
import struct
from dataclasses import dataclass
from typing import Optional

from ._util import ceil_snapped
from .codec import BlockPayload, block_working_bytes, compress_block, decompress_block
from .entropy import BYTE_ALPHABET, AlphabetSpec
from .errors import CorruptionError, StreamLengthError, ValidationError

__all__ = [
    "INITIAL_LENGTH_ESTIMATE",
    "MAGIC",
    "VERSION",
    "EncodedStream",
    "ForwardOnlyReader",
    "MemoryMeter",
    "MemoryReport",
    "StreamHeader",
    "TradeoffParams",
    "block_length",
    "decode",
    "decode_to",
    "encode_known_n",
    "encode_to",
    "encode_unknown_n",
    "measure_memory",
    "read_stream",
]

INITIAL_LENGTH_ESTIMATE = 1024

MAGIC = b"OPC1"
VERSION = 1
_FLAG_KNOWN_N = 0x01

_HEADER = struct.Struct("<4sBBHdd")
_N_FIELD = struct.Struct("<Q")
_RECORD = struct.Struct("<III")
_TERMINATOR = bytes(_RECORD.size)


@dataclass(frozen=True)
class TradeoffParams:
    """Memory/size trade-off knobs.

    c sets the memory budget exponent (working space grows like n^c) and eps
    is the slack that the block sizing gives back to keep the encoded size
    bound; larger c means bigger blocks and better compression.
    """

    c: float
    eps: float
    known_n: bool = False
    n_hint: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.c <= 1.0:
            raise ValidationError(f"c must be in [0, 1], got {self.c}")
        if not self.eps > 0.0:
            raise ValidationError(f"eps must be positive, got {self.eps}")
        if self.known_n:
            if self.n_hint is None or self.n_hint < 1:
                raise ValidationError(
                    "known-length mode requires a length hint of at least 1"
                )


@dataclass(frozen=True)
class StreamHeader:
    sigma: int
    c: float
    eps: float
    known_n: bool
    n: Optional[int] = None

    def __post_init__(self):
        if not 2 <= self.sigma <= 256:
            raise ValidationError(f"sigma must be in [2, 256], got {self.sigma}")
        if self.known_n and (self.n is None or self.n < 0):
            raise ValidationError("known-length header requires n")

    def pack(self) -> bytes:
        flags = _FLAG_KNOWN_N if self.known_n else 0
        out = _HEADER.pack(MAGIC, VERSION, flags, self.sigma, self.c, self.eps)
        if self.known_n:
            out += _N_FIELD.pack(self.n)
        return out


@dataclass(frozen=True)
class MemoryReport:
    """Peak working-buffer accounting for one encode run."""

    peak_buffer_bytes: int
    block_count: int
    largest_block_len: int
    regime_count: int


class MemoryMeter:
    """Accumulates the per-block working-set model into a run-level report.

    Only working buffers are counted (block bytes, suffix-sort scratch,
    transform/coder arrays); the output sink and fixed program state are not.
    """

    def __init__(self):
        self.peak_buffer_bytes = 0
        self.block_count = 0
        self.largest_block_len = 0
        self.regime_count = 0
        self._regimes = set()

    def observe_block(self, length: int, sigma: int, regime: int = 0) -> None:
        working = block_working_bytes(length, sigma)
        if working > self.peak_buffer_bytes:
            self.peak_buffer_bytes = working
        self.block_count += 1
        if length > self.largest_block_len:
            self.largest_block_len = length
        self._regimes.add(regime)
        self.regime_count = len(self._regimes)

    def report(self) -> MemoryReport:
        return MemoryReport(
            peak_buffer_bytes=self.peak_buffer_bytes,
            block_count=self.block_count,
            largest_block_len=self.largest_block_len,
            regime_count=self.regime_count,
        )


def measure_memory(run) -> MemoryReport:
    """Extract the memory report from an encode run's result."""
    if isinstance(run, MemoryReport):
        return run
    if isinstance(run, MemoryMeter):
        return run.report()
    if isinstance(run, tuple) and len(run) == 2 and isinstance(run[1], MemoryReport):
        return run[1]
    raise ValidationError("not an encode run result")


class ForwardOnlyReader:
    """Serves strictly sequential reads from bytes or a binary file.

    There is no way to rewind: the wrapper only moves forward, and it checks
    that the underlying file cursor has not been moved behind its back.
    """

    def __init__(self, source):
        if isinstance(source, (bytes, bytearray, memoryview)):
            source = io.BytesIO(bytes(source))
        self._src = source
        self._pos = 0
        try:
            self._expected_tell = source.tell()
        except (AttributeError, OSError):
            self._expected_tell = None

    @property
    def position(self) -> int:
        return self._pos

    def read(self, size: int) -> bytes:
        if size < 0:
            raise ValidationError("read size must be non-negative")
        if self._expected_tell is not None:
            actual = self._src.tell()
            if actual != self._expected_tell:
                raise RuntimeError(
                    "one-pass contract violated: source cursor moved from "
                    f"{self._expected_tell} to {actual}"
                )
        chunk = self._src.read(size)
        self._pos += len(chunk)
        if self._expected_tell is not None:
            self._expected_tell += len(chunk)
        return chunk


def block_length(n: int, params: TradeoffParams) -> int:
    """Block length for a stream of n characters: max(1, ceil(n^(c - eps/2)))."""
    if n < 1:
        raise ValidationError(f"stream length must be at least 1, got {n}")
    exponent = params.c - params.eps / 2.0
    if exponent <= 0.0:
        return 1
    return max(1, ceil_snapped(n ** exponent))


def _known_blocks(reader: ForwardOnlyReader, n: int, params: TradeoffParams):
    size = block_length(n, params)
    remaining = n
    while remaining > 0:
        want = min(size, remaining)
        chunk = reader.read(want)
        if len(chunk) < want:
            raise StreamLengthError(
                f"input ended after {n - remaining + len(chunk)} of {n} "
                "declared characters"
            )
        yield chunk, 0
        remaining -= want
    if reader.read(1):
        raise StreamLengthError(f"input continues past the declared {n} characters")


def _unknown_blocks(reader: ForwardOnlyReader, params: TradeoffParams):
    estimate = INITIAL_LENGTH_ESTIMATE
    count = 0
    regime = 0
    while True:
        if count == estimate:
            estimate *= 2
            regime += 1
        # never let a block straddle the point where the estimate doubles
        want = min(block_length(estimate, params), estimate - count)
        chunk = reader.read(want)
        if not chunk:
            return
        yield chunk, regime
        count += len(chunk)


def _encode_records(source, params: TradeoffParams, alphabet: AlphabetSpec,
                    n: Optional[int], meter: MemoryMeter):
    reader = ForwardOnlyReader(source)
    blocks = (
        _known_blocks(reader, n, params)
        if params.known_n
        else _unknown_blocks(reader, params)
    )
    for chunk, regime in blocks:
        payload = compress_block(chunk, alphabet.sigma)
        meter.observe_block(len(chunk), alphabet.sigma, regime)
        yield payload


@dataclass(frozen=True)
class EncodedStream:
    """A parsed container: header plus the ordered block records."""

    header: StreamHeader
    records: tuple

    @property
    def total_raw_len(self) -> int:
        return sum(r.raw_len for r in self.records)

    @property
    def payload_bits(self) -> int:
        return 8 * sum(len(r.body) for r in self.records)

    def to_bytes(self) -> bytes:
        parts = [self.header.pack()]
        parts.extend(r.pack() for r in self.records)
        parts.append(_TERMINATOR)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncodedStream":
        return read_stream(io.BytesIO(data))


def encode_known_n(source, n: int, params: TradeoffParams,
                   alphabet: AlphabetSpec = BYTE_ALPHABET):
    """Encode a source of exactly n characters; returns (stream, report)."""
    if not params.known_n:
        raise ValidationError("params must have known_n set")
    if params.n_hint is not None and params.n_hint != n:
        raise ValidationError(
            f"declared length {n} disagrees with params hint {params.n_hint}"
        )
    if n < 1:
        raise ValidationError("known-length encoding requires n >= 1")
    meter = MemoryMeter()
    records = tuple(_encode_records(source, params, alphabet, n, meter))
    header = StreamHeader(alphabet.sigma, params.c, params.eps, True, n)
    return EncodedStream(header, records), meter.report()


def encode_unknown_n(source, params: TradeoffParams,
                     alphabet: AlphabetSpec = BYTE_ALPHABET):
    """Encode a source of unknown length; returns (stream, report)."""
    if params.known_n:
        raise ValidationError("params must have known_n unset")
    meter = MemoryMeter()
    records = tuple(_encode_records(source, params, alphabet, None, meter))
    header = StreamHeader(alphabet.sigma, params.c, params.eps, False, None)
    return EncodedStream(header, records), meter.report()


def encode_to(source, dst, params: TradeoffParams,
              alphabet: AlphabetSpec = BYTE_ALPHABET,
              n: Optional[int] = None) -> MemoryReport:
    """Streaming form: write the container to dst as blocks are produced."""
    if params.known_n:
        if n is None:
            n = params.n_hint
        if n is None or n < 1:
            raise ValidationError("known-length encoding requires n >= 1")
        if params.n_hint is not None and params.n_hint != n:
            raise ValidationError(
                f"declared length {n} disagrees with params hint {params.n_hint}"
            )
        header = StreamHeader(alphabet.sigma, params.c, params.eps, True, n)
    else:
        if n is not None:
            raise ValidationError("length given but params have known_n unset")
        header = StreamHeader(alphabet.sigma, params.c, params.eps, False, None)
    meter = MemoryMeter()
    dst.write(header.pack())
    for payload in _encode_records(source, params, alphabet, n, meter):
        dst.write(payload.pack())
    dst.write(_TERMINATOR)
    return meter.report()


def _read_exact(src, size: int, what: str, record_index=None) -> bytes:
    data = src.read(size)
    if len(data) != size:
        raise CorruptionError(
            f"stream ends inside {what} ({len(data)} of {size} bytes)",
            record_index=record_index,
        )
    return data


def _parse_header(src) -> StreamHeader:
    raw = src.read(_HEADER.size)
    if len(raw) != _HEADER.size:
        raise CorruptionError("stream shorter than a header")
    magic, version, flags, sigma, c, eps = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise CorruptionError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CorruptionError(f"unsupported version {version}")
    known_n = bool(flags & _FLAG_KNOWN_N)
    n = None
    if known_n:
        n = _N_FIELD.unpack(_read_exact(src, _N_FIELD.size, "the length field"))[0]
    if not 2 <= sigma <= 256:
        raise CorruptionError(f"alphabet size {sigma} out of range")
    if not (0.0 <= c <= 1.0) or not (eps > 0.0) or math.isnan(eps):
        raise CorruptionError(f"invalid trade-off parameters c={c}, eps={eps}")
    return StreamHeader(sigma, c, eps, known_n, n)


def _iter_records(src):
    """Yield (index, BlockPayload) until the terminator record."""
    index = 0
    while True:
        head = _read_exact(src, _RECORD.size, "a record header", index)
        raw_len, primary_index, body_len = _RECORD.unpack(head)
        if raw_len == 0:
            if primary_index != 0 or body_len != 0:
                raise CorruptionError(
                    "terminator record carries nonzero fields", record_index=index
                )
            return
        body = _read_exact(src, body_len, "a record body", index)
        yield index, BlockPayload(raw_len, primary_index, body)
        index += 1


def read_stream(src) -> EncodedStream:
    """Parse a container from a binary file object without decoding blocks."""
    header = _parse_header(src)
    records = tuple(payload for _, payload in _iter_records(src))
    stream = EncodedStream(header, records)
    if header.known_n and stream.total_raw_len != header.n:
        raise CorruptionError(
            f"records carry {stream.total_raw_len} characters but the header "
            f"declares {header.n}"
        )
    return stream


def decode(stream, alphabet: Optional[AlphabetSpec] = None) -> bytes:
    """Decode a parsed EncodedStream or raw container bytes."""
    if isinstance(stream, (bytes, bytearray, memoryview)):
        stream = EncodedStream.from_bytes(bytes(stream))
    if alphabet is not None and alphabet.sigma != stream.header.sigma:
        raise ValidationError(
            f"alphabet size {alphabet.sigma} does not match the stream's "
            f"{stream.header.sigma}"
        )
    out = []
    for index, payload in enumerate(stream.records):
        try:
            out.append(decompress_block(payload, stream.header.sigma))
        except CorruptionError as exc:
            raise CorruptionError(str(exc), record_index=index) from None
    return b"".join(out)


def decode_to(src, dst) -> int:
    """Streaming form: decode a container file into dst; returns char count."""
    header = _parse_header(src)
    total = 0
    for index, payload in _iter_records(src):
        try:
            block = decompress_block(payload, header.sigma)
        except CorruptionError as exc:
            raise CorruptionError(str(exc), record_index=index) from None
        dst.write(block)
        total += len(block)
    if header.known_n and total != header.n:
        raise CorruptionError(
            f"records carry {total} characters but the header declares {header.n}"
        )
    return total
