"""Numba kernels for the hot sequential loops (sorting, transforms, coding)."""

import numpy as np
from numba import njit

STATE_SIZE = 32
FULL_RANGE = 1 << STATE_SIZE
MASK = FULL_RANGE - 1
TOP_MASK = FULL_RANGE >> 1
SECOND_MASK = TOP_MASK >> 1
MIN_RANGE = (FULL_RANGE >> 2) + 2
MAX_TOTAL = 1 << 16


@njit(cache=True)
def _counting_sort(order_in, key, order_out, cnt):
    # stable sort of index array by key[index]; cnt is scratch, zeroed here
    for v in range(cnt.size):
        cnt[v] = 0
    for i in range(order_in.size):
        cnt[key[order_in[i]]] += 1
    total = 0
    for v in range(cnt.size):
        c = cnt[v]
        cnt[v] = total
        total += c
    for i in range(order_in.size):
        idx = order_in[i]
        order_out[cnt[key[idx]]] = idx
        cnt[key[idx]] += 1


@njit(cache=True)
def suffix_array_kernel(t):
    """Suffix order of an int64 array via prefix doubling with radix passes."""
    n = t.size
    sa = np.empty(n, np.int64)
    rank = np.empty(n, np.int64)
    vmax = 0
    for i in range(n):
        sa[i] = i
        rank[i] = t[i]
        if t[i] > vmax:
            vmax = t[i]
    if n == 1:
        return sa
    tmp = np.empty(n, np.int64)
    key2 = np.empty(n, np.int64)
    new_rank = np.empty(n, np.int64)
    cnt = np.zeros(max(n + 2, vmax + 2), np.int64)

    _counting_sort(sa, rank, tmp, cnt)
    sa, tmp = tmp, sa
    r = 0
    new_rank[sa[0]] = 0
    for i in range(1, n):
        if rank[sa[i]] != rank[sa[i - 1]]:
            r += 1
        new_rank[sa[i]] = r
    rank, new_rank = new_rank, rank

    h = 1
    while r < n - 1:
        for i in range(n):
            key2[i] = rank[i + h] + 1 if i + h < n else 0
        _counting_sort(sa, key2, tmp, cnt)
        _counting_sort(tmp, rank, sa, cnt)
        r = 0
        new_rank[sa[0]] = 0
        for i in range(1, n):
            a = sa[i - 1]
            b = sa[i]
            if rank[a] != rank[b] or key2[a] != key2[b]:
                r += 1
            new_rank[b] = r
        rank, new_rank = new_rank, rank
        h *= 2
    return sa


@njit(cache=True)
def bwt_inverse_kernel(data, primary_index, sigma):
    """Rebuild the pre-transform text by walking the last-to-first mapping.

    data holds symbols in [-1, sigma) with the end marker as -1; the marker
    slot is dropped from the output.
    """
    n = data.size
    counts = np.zeros(sigma + 1, np.int64)
    for i in range(n):
        counts[data[i] + 1] += 1
    cum = np.zeros(sigma + 1, np.int64)
    total = 0
    for c in range(sigma + 1):
        cum[c] = total
        total += counts[c]
    lf = np.empty(n, np.int64)
    occ = np.zeros(sigma + 1, np.int64)
    for i in range(n):
        c = data[i] + 1
        lf[i] = cum[c] + occ[c]
        occ[c] += 1
    out = np.empty(n - 1, np.uint8)
    p = primary_index
    for i in range(n):
        if i > 0:
            out[n - 1 - i] = data[p]
        p = lf[p]
    return out


@njit(cache=True)
def mtf_encode_kernel(syms, alpha_size):
    table = np.arange(alpha_size, dtype=np.int64)
    out = np.empty(syms.size, np.int64)
    for i in range(syms.size):
        c = syms[i]
        j = 0
        while table[j] != c:
            j += 1
        out[i] = j
        while j > 0:
            table[j] = table[j - 1]
            j -= 1
        table[0] = c
    return out


@njit(cache=True)
def mtf_decode_kernel(ranks, alpha_size):
    table = np.arange(alpha_size, dtype=np.int64)
    out = np.empty(ranks.size, np.int64)
    for i in range(ranks.size):
        j = ranks[i]
        c = table[j]
        out[i] = c
        while j > 0:
            table[j] = table[j - 1]
            j -= 1
        table[0] = c
    return out


@njit(cache=True)
def rle0_encode_kernel(ranks):
    """Zero runs become base-2 digits over {1,2} (tokens 0 and 1, low digit
    first); a nonzero rank r becomes token r + 1."""
    n = ranks.size
    out = np.empty(n, np.int64)
    pos = 0
    i = 0
    while i < n:
        if ranks[i] == 0:
            m = 0
            while i < n and ranks[i] == 0:
                m += 1
                i += 1
            while m > 0:
                d = m & 1
                if d == 0:
                    d = 2
                out[pos] = d - 1
                pos += 1
                m = (m - d) >> 1
        else:
            out[pos] = ranks[i] + 1
            pos += 1
            i += 1
    return out[:pos]


@njit(cache=True)
def rle0_decode_kernel(tokens, out_cap):
    """Invert rle0_encode_kernel; returns (ranks, count) with count == -1 when
    the token stream would overrun out_cap."""
    out = np.empty(out_cap, np.int64)
    pos = 0
    i = 0
    n = tokens.size
    while i < n:
        if tokens[i] <= 1:
            m = 0
            place = 1
            while i < n and tokens[i] <= 1:
                m += (tokens[i] + 1) * place
                place <<= 1
                i += 1
                if m > out_cap:
                    return out, -1
            if pos + m > out_cap:
                return out, -1
            for _ in range(m):
                out[pos] = 0
                pos += 1
        else:
            if pos >= out_cap:
                return out, -1
            out[pos] = tokens[i] - 1
            pos += 1
            i += 1
    return out, pos


@njit(cache=True)
def arith_encode_kernel(tokens, alpha_size):
    """Adaptive arithmetic encoder over symbols [0, alpha_size); a trailing
    end-of-stream symbol is coded so the decoder needs no token count."""
    nsyms = alpha_size + 1
    eof = alpha_size
    freqs = np.ones(nsyms, np.int64)
    total = nsyms
    low = np.int64(0)
    high = np.int64(MASK)
    num_underflow = 0
    cap = 2 * tokens.size + 256
    out = np.empty(cap, np.uint8)
    nbytes = 0
    cur = 0
    nbits = 0

    for idx in range(tokens.size + 1):
        sym = tokens[idx] if idx < tokens.size else eof
        symlow = np.int64(0)
        for s in range(sym):
            symlow += freqs[s]
        symhigh = symlow + freqs[sym]
        rng = high - low + 1
        high = low + symhigh * rng // total - 1
        low = low + symlow * rng // total
        while ((low ^ high) & TOP_MASK) == 0:
            bit = low >> (STATE_SIZE - 1)
            cur = (cur << 1) | bit
            nbits += 1
            if nbits == 8:
                if nbytes == cap:
                    cap *= 2
                    grown = np.empty(cap, np.uint8)
                    grown[:nbytes] = out[:nbytes]
                    out = grown
                out[nbytes] = cur
                nbytes += 1
                cur = 0
                nbits = 0
            inv = bit ^ 1
            for _ in range(num_underflow):
                cur = (cur << 1) | inv
                nbits += 1
                if nbits == 8:
                    if nbytes == cap:
                        cap *= 2
                        grown = np.empty(cap, np.uint8)
                        grown[:nbytes] = out[:nbytes]
                        out = grown
                    out[nbytes] = cur
                    nbytes += 1
                    cur = 0
                    nbits = 0
            num_underflow = 0
            low = (low << 1) & MASK
            high = ((high << 1) & MASK) | 1
        while (low & ~high & SECOND_MASK) != 0:
            num_underflow += 1
            low = (low << 1) & (MASK >> 1)
            high = ((high << 1) & (MASK >> 1)) | TOP_MASK | 1
        # adapt after coding, mirrored exactly by the decoder
        if sym != eof:
            freqs[sym] += 1
            total += 1
            if total > MAX_TOTAL:
                total = 0
                for s in range(nsyms):
                    freqs[s] = (freqs[s] + 1) >> 1
                    total += freqs[s]

    # one disambiguating bit, then pad the final byte with zeros
    cur = (cur << 1) | 1
    nbits += 1
    if nbytes == cap:
        cap += 8
        grown = np.empty(cap, np.uint8)
        grown[:nbytes] = out[:nbytes]
        out = grown
    out[nbytes] = cur << (8 - nbits)
    nbytes += 1
    return out[:nbytes].copy()


@njit(cache=True)
def arith_decode_kernel(data, alpha_size, max_tokens):
    """Inverse of arith_encode_kernel.

    Returns (tokens, count); count is -1 when more than max_tokens symbols
    appear before the end marker and -2 when the bit budget is exhausted
    (truncated stream).
    """
    nsyms = alpha_size + 1
    eof = alpha_size
    freqs = np.ones(nsyms, np.int64)
    total = nsyms
    low = np.int64(0)
    high = np.int64(MASK)
    bit_budget = data.size * 8 + 64
    bits_read = 0
    byte_pos = 0
    bit_pos = 0
    code = np.int64(0)
    for _ in range(STATE_SIZE):
        b = 0
        if byte_pos < data.size:
            b = (data[byte_pos] >> (7 - bit_pos)) & 1
            bit_pos += 1
            if bit_pos == 8:
                bit_pos = 0
                byte_pos += 1
        bits_read += 1
        code = (code << 1) | b

    out = np.empty(max_tokens, np.int64)
    pos = 0
    while True:
        rng = high - low + 1
        value = ((code - low + 1) * total - 1) // rng
        symlow = np.int64(0)
        sym = nsyms - 1
        for s in range(nsyms):
            nxt = symlow + freqs[s]
            if nxt > value:
                sym = s
                break
            symlow = nxt
        symhigh = symlow + freqs[sym]
        high = low + symhigh * rng // total - 1
        low = low + symlow * rng // total
        while ((low ^ high) & TOP_MASK) == 0:
            b = 0
            if byte_pos < data.size:
                b = (data[byte_pos] >> (7 - bit_pos)) & 1
                bit_pos += 1
                if bit_pos == 8:
                    bit_pos = 0
                    byte_pos += 1
            bits_read += 1
            code = ((code << 1) & MASK) | b
            low = (low << 1) & MASK
            high = ((high << 1) & MASK) | 1
        while (low & ~high & SECOND_MASK) != 0:
            b = 0
            if byte_pos < data.size:
                b = (data[byte_pos] >> (7 - bit_pos)) & 1
                bit_pos += 1
                if bit_pos == 8:
                    bit_pos = 0
                    byte_pos += 1
            bits_read += 1
            code = (code & TOP_MASK) | ((code << 1) & (MASK >> 1)) | b
            low = (low << 1) & (MASK >> 1)
            high = ((high << 1) & (MASK >> 1)) | TOP_MASK | 1
        if sym == eof:
            return out, pos
        if pos >= max_tokens:
            return out, -1
        if bits_read > bit_budget:
            return out, -2
        out[pos] = sym
        pos += 1
        freqs[sym] += 1
        total += 1
        if total > MAX_TOTAL:
            total = 0
            for s in range(nsyms):
                freqs[s] = (freqs[s] + 1) >> 1
                total += freqs[s]


@njit(cache=True)
def markov_kernel(uniforms, cum_probs, out):
    """Order-2 chain sampler; cum_probs is (sigma, sigma, sigma) cumulative."""
    sigma = cum_probs.shape[0]
    c1 = 0
    c2 = 0
    for i in range(out.size):
        u = uniforms[i]
        s = 0
        while s < sigma - 1 and u >= cum_probs[c1, c2, s]:
            s += 1
        out[i] = s
        c1 = c2
        c2 = s
