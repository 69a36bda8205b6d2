"""Greedy sliding-window LZ77, used as a size baseline in experiments.

Tokens are (offset, length, literal) triples with fixed-width binary fields
sized by the window length; this is a comparator, so no entropy coding is
applied on top.
"""

MIN_MATCH = 3
_CHAIN_CAP = 64


def token_bits(window_len: int) -> int:
    """Bits per triple: offset and length fields sized by the window, plus
    one literal byte."""
    field = max(1, window_len.bit_length())
    return 2 * field + 8


def lz77_encode(data: bytes, window_len: int):
    """Greedy longest-match parse; returns a list of (offset, length, literal).

    offset == 0 means no match (a bare literal).  A match never swallows the
    final character, so every triple carries a real literal and the token
    list alone reconstructs the input.
    """
    if window_len < 1:
        raise ValueError(f"window must be at least 1, got {window_len}")
    data = bytes(data)
    n = len(data)
    tokens = []
    heads = {}  # 3-gram -> recent positions, newest last
    i = 0
    while i < n:
        best_len = 0
        best_off = 0
        limit = min(n - i - 1, window_len)  # keep one literal in reserve
        if limit >= MIN_MATCH:
            key = data[i : i + MIN_MATCH]
            lo = i - window_len
            for j in reversed(heads.get(key, ())):
                if j < lo:
                    break
                length = MIN_MATCH
                while length < limit and data[j + length] == data[i + length]:
                    length += 1
                if length > best_len:
                    best_len = length
                    best_off = i - j
                    if length == limit:
                        break
        if best_len >= MIN_MATCH:
            literal = data[i + best_len]
            tokens.append((best_off, best_len, literal))
            advance = best_len + 1
        else:
            tokens.append((0, 0, data[i]))
            advance = 1
        for p in range(i, min(i + advance, n - MIN_MATCH + 1)):
            chain = heads.setdefault(data[p : p + MIN_MATCH], [])
            chain.append(p)
            if len(chain) > _CHAIN_CAP:
                del chain[0]
        i += advance
    return tokens


def lz77_decode(tokens) -> bytes:
    out = bytearray()
    for offset, length, literal in tokens:
        if offset:
            start = len(out) - offset
            if start < 0:
                raise ValueError("offset reaches before the start of the output")
            for t in range(length):  # may self-overlap
                out.append(out[start + t])
        out.append(literal)
    return bytes(out)


def lz77_window_encode(data: bytes, window_len: int) -> int:
    """Encoded size of data, in bits, under the fixed-width triple format."""
    return len(lz77_encode(data, window_len)) * token_bits(window_len)
