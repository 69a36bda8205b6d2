"""One-pass, memory-bounded block compression toolkit.

The pipeline buffers the input in blocks whose size is set by a memory
exponent c, transforms each block (context sorting, recency ranking,
zero-run coding), and entropy-codes it adaptively.  Alongside the codec:
context-entropy measurement, cycle-based corpus generators, an experiment
runner with CSV output, and a sliding-window baseline.
"""

from .bwt import bwt_forward, bwt_inverse, suffix_array
from .codec import (
    BlockPayload,
    block_working_bytes,
    compress_block,
    decompress_block,
)
from .corpus import markov_corpus
from .debruijn import (
    DeBruijnSpec,
    adversarial_corpus,
    critical_order,
    enumerate_count,
    generate,
    random_debruijn,
    verify,
)
from .entropy import (
    BYTE_ALPHABET,
    AlphabetSpec,
    EntropyProfile,
    context_stats,
    empirical_entropy,
    entropy_profile,
)
from .errors import CorruptionError, OnePassError, StreamLengthError, ValidationError
from .experiments import (
    AdversarialResult,
    ExperimentRow,
    TradeoffResult,
    experiment_adversarial,
    experiment_tradeoff,
)
from .lz77 import lz77_decode, lz77_encode, lz77_window_encode
from .stream import (
    EncodedStream,
    MemoryReport,
    StreamHeader,
    TradeoffParams,
    block_length,
    decode,
    decode_to,
    encode_known_n,
    encode_to,
    encode_unknown_n,
    read_stream,
)

__all__ = [
    "AdversarialResult",
    "AlphabetSpec",
    "BYTE_ALPHABET",
    "BlockPayload",
    "CorruptionError",
    "DeBruijnSpec",
    "EncodedStream",
    "EntropyProfile",
    "ExperimentRow",
    "MemoryReport",
    "OnePassError",
    "StreamHeader",
    "StreamLengthError",
    "TradeoffParams",
    "TradeoffResult",
    "ValidationError",
    "adversarial_corpus",
    "block_length",
    "block_working_bytes",
    "bwt_forward",
    "bwt_inverse",
    "compress_block",
    "context_stats",
    "critical_order",
    "decode",
    "decode_to",
    "decompress_block",
    "empirical_entropy",
    "encode_known_n",
    "encode_to",
    "encode_unknown_n",
    "entropy_profile",
    "enumerate_count",
    "experiment_adversarial",
    "experiment_tradeoff",
    "generate",
    "lz77_decode",
    "lz77_encode",
    "lz77_window_encode",
    "markov_corpus",
    "random_debruijn",
    "read_stream",
    "suffix_array",
    "verify",
]
