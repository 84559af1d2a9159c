# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop for the piecewise product recursion.

Mirrors the pure Python path operation for operation, working directly on
the byte stores of the three piece buffers, and returns the toffoli total
so the caller can record it.  Pieces are handled as one or two machine
words: input pieces up to 64 bits, output pieces up to 128.  The dispatcher
falls back to pure Python beyond those widths.
"""

ctypedef unsigned long long u64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"


cdef inline u128 _mask(int width) noexcept:
    if width >= 128:
        return <u128>0 - 1
    return ((<u128>1) << width) - 1


cdef inline u128 _read(const unsigned char* data, size_t off, int width) noexcept:
    cdef size_t base = off >> 3
    cdef int phase = <int>(off & 7)
    cdef int nbytes = (phase + width + 7) >> 3
    cdef u128 acc = <u128>(data[base] >> phase)
    cdef int i
    for i in range(1, nbytes):
        acc |= (<u128>data[base + i]) << (8 * i - phase)
    return acc & _mask(width)


cdef inline void _write(unsigned char* data, size_t off, int width, u128 value) noexcept:
    cdef size_t base = off >> 3
    cdef int phase = <int>(off & 7)
    cdef int nbytes = (phase + width + 7) >> 3
    cdef u128 window_mask = _mask(width)
    cdef unsigned char keep
    cdef int i, shift
    value &= window_mask
    keep = <unsigned char>((window_mask << phase) & 0xFF)
    data[base] = <unsigned char>((data[base] & ~keep) | (<unsigned char>((value << phase) & 0xFF) & keep))
    for i in range(1, nbytes):
        shift = 8 * i - phase
        keep = <unsigned char>((window_mask >> shift) & 0xFF)
        data[base + i] = <unsigned char>((data[base + i] & ~keep) | (<unsigned char>((value >> shift) & 0xFF) & keep))


cdef inline void _add_piece(unsigned char* data, size_t dst_off, size_t src_off, int width, int sign) noexcept:
    cdef u128 dst = _read(data, dst_off, width)
    cdef u128 src = _read(data, src_off, width)
    if sign > 0:
        dst = dst + src
    else:
        dst = dst - src
    _write(data, dst_off, width, dst)


cdef u64 _recurse(unsigned char* in1, size_t off1,
                  unsigned char* in2, size_t off2,
                  unsigned char* out, size_t offo,
                  int count, int sign, int threshold,
                  int ipw, int opw,
                  u64 cost_out, u64 cost_in, u64 cost_base) noexcept:
    cdef u64 toffoli = 0
    cdef int i, j, half
    cdef u64 a, b
    cdef u128 term, acc
    cdef size_t slot
    if count <= threshold:
        for i in range(count):
            a = <u64>_read(in1, off1 + (<size_t>i) * (<size_t>ipw), ipw)
            for j in range(count):
                b = <u64>_read(in2, off2 + (<size_t>j) * (<size_t>ipw), ipw)
                term = (<u128>a) * b
                slot = offo + (<size_t>(i + j)) * (<size_t>opw)
                acc = _read(out, slot, opw)
                if sign > 0:
                    acc = acc + term
                else:
                    acc = acc - term
                _write(out, slot, opw, acc)
        return (<u64>count) * (<u64>count) * cost_base
    half = count >> 1
    for i in range(half, 2 * count):
        _add_piece(out, offo + (<size_t>i) * (<size_t>opw), offo + (<size_t>(i - half)) * (<size_t>opw), opw, 1)
    toffoli = (<u64>(3 * half)) * cost_out
    toffoli += _recurse(in1, off1, in2, off2, out, offo,
                        half, sign, threshold, ipw, opw, cost_out, cost_in, cost_base)
    toffoli += _recurse(in1, off1 + (<size_t>half) * (<size_t>ipw),
                        in2, off2 + (<size_t>half) * (<size_t>ipw),
                        out, offo + (<size_t>half) * (<size_t>opw),
                        half, -sign, threshold, ipw, opw, cost_out, cost_in, cost_base)
    for i in range(2 * count - 1, half - 1, -1):
        _add_piece(out, offo + (<size_t>i) * (<size_t>opw), offo + (<size_t>(i - half)) * (<size_t>opw), opw, -1)
    toffoli += (<u64>(3 * half)) * cost_out
    for i in range(half):
        _add_piece(in1, off1 + (<size_t>i) * (<size_t>ipw), off1 + (<size_t>(i + half)) * (<size_t>ipw), ipw, 1)
        _add_piece(in2, off2 + (<size_t>i) * (<size_t>ipw), off2 + (<size_t>(i + half)) * (<size_t>ipw), ipw, 1)
    toffoli += (<u64>(2 * half)) * cost_in
    toffoli += _recurse(in1, off1, in2, off2,
                        out, offo + (<size_t>half) * (<size_t>opw),
                        half, sign, threshold, ipw, opw, cost_out, cost_in, cost_base)
    for i in range(half):
        _add_piece(in1, off1 + (<size_t>i) * (<size_t>ipw), off1 + (<size_t>(i + half)) * (<size_t>ipw), ipw, -1)
        _add_piece(in2, off2 + (<size_t>i) * (<size_t>ipw), off2 + (<size_t>(i + half)) * (<size_t>ipw), ipw, -1)
    toffoli += (<u64>(2 * half)) * cost_in
    return toffoli


def add_product(unsigned char[::1] buf1, size_t off1,
                unsigned char[::1] buf2, size_t off2,
                unsigned char[::1] bufo, size_t offo,
                int count, int sign, int threshold,
                int ipw, int opw,
                unsigned long long cost_out, unsigned long long cost_in,
                unsigned long long cost_base):
    """Run the piecewise product over raw byte stores; returns the toffoli count.

    The caller guarantees the three piece regions are disjoint; this wrapper
    revalidates widths, shapes, and byte bounds before touching memory.
    """
    if ipw < 1 or ipw > 64:
        raise ValueError(f"input piece width {ipw} outside kernel range 1..64")
    if opw < 1 or opw > 128:
        raise ValueError(f"output piece width {opw} outside kernel range 1..128")
    if count < 1 or (count & (count - 1)) != 0:
        raise ValueError(f"piece count must be a positive power of two, got {count}")
    if sign != 1 and sign != -1:
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    if (off1 + (<size_t>count) * (<size_t>ipw) + 7) // 8 > <size_t>buf1.shape[0]:
        raise ValueError("first input region exceeds its buffer")
    if (off2 + (<size_t>count) * (<size_t>ipw) + 7) // 8 > <size_t>buf2.shape[0]:
        raise ValueError("second input region exceeds its buffer")
    if (offo + (<size_t>(2 * count)) * (<size_t>opw) + 7) // 8 > <size_t>bufo.shape[0]:
        raise ValueError("output region exceeds its buffer")
    cdef u64 total = _recurse(&buf1[0], off1, &buf2[0], off2, &bufo[0], offo,
                              count, sign, threshold, ipw, opw,
                              cost_out, cost_in, cost_base)
    return total
