"""Flat bit stores and fixed-width views with little-endian integer semantics.

A BitBuffer is a zero-initialised run of bits backed by a bytearray.  A
Window is a view of ``width`` consecutive bits starting at ``offset``; the
bit at the lowest offset is the least significant.  Windows never own
storage and never copy: writing through one window is visible through any
other window over the same bits.
"""

_CHUNK_BYTES = 32


def _read_bits(data, offset, width):
    lo = offset >> 3
    hi = (offset + width + 7) >> 3
    chunk = int.from_bytes(data[lo:hi], "little")
    return (chunk >> (offset & 7)) & ((1 << width) - 1)


def _write_bits(data, offset, width, value):
    lo = offset >> 3
    hi = (offset + width + 7) >> 3
    phase = offset & 7
    mask = ((1 << width) - 1) << phase
    chunk = int.from_bytes(data[lo:hi], "little")
    chunk = (chunk & ~mask) | ((value << phase) & mask)
    data[lo:hi] = chunk.to_bytes(hi - lo, "little")


def _add_into_bits(data, offset, width, delta):
    # In-place (value += delta) mod 2**width.  Works low byte to high byte
    # and stops as soon as the carry or borrow settles, so a small delta on
    # a huge window touches O(1) bytes in the common case.
    if delta == 0:
        return
    end = offset + width
    idx = offset >> 3
    pending = delta << (offset & 7)
    last_full = end >> 3
    while pending and idx < last_full:
        take = min(_CHUNK_BYTES, last_full - idx)
        nbits = take << 3
        word = int.from_bytes(data[idx : idx + take], "little") + pending
        data[idx : idx + take] = (word & ((1 << nbits) - 1)).to_bytes(take, "little")
        pending = word >> nbits
        idx += take
    tail = end & 7
    if pending and tail:
        keep = data[last_full] >> tail
        low = (data[last_full] + pending) & ((1 << tail) - 1)
        data[last_full] = (keep << tail) | low


class BitBuffer:
    """A fixed-length, zero-initialised sequence of bits."""

    __slots__ = ("_data", "_nbits")

    def __init__(self, nbits):
        if not isinstance(nbits, int) or nbits < 0:
            raise ValueError(f"bit count must be a nonnegative int, got {nbits!r}")
        self._nbits = nbits
        self._data = bytearray((nbits + 7) >> 3)

    def __len__(self):
        return self._nbits

    def __repr__(self):
        return f"BitBuffer({self._nbits})"

    @property
    def raw(self):
        """The backing bytearray.  Bits past ``len(self)`` are always zero."""
        return self._data

    def is_zero(self):
        return not any(self._data)

    def window(self, offset, width):
        """A view of ``width`` bits starting at ``offset``."""
        if not isinstance(offset, int) or not isinstance(width, int):
            raise ValueError("window offset and width must be ints")
        if width < 1:
            raise ValueError(f"window width must be >= 1, got {width}")
        if offset < 0 or offset + width > self._nbits:
            raise ValueError(
                f"window [{offset}, {offset + width}) outside buffer of {self._nbits} bits"
            )
        return Window(self, offset, width)


class Window:
    """A view of consecutive bits in a BitBuffer, read as a little-endian uint.

    Construct through :meth:`BitBuffer.window`, which validates the range.
    """

    __slots__ = ("buf", "offset", "width")

    def __init__(self, buf, offset, width):
        self.buf = buf
        self.offset = offset
        self.width = width

    def __repr__(self):
        return f"Window(offset={self.offset}, width={self.width})"

    def read_uint(self):
        return _read_bits(self.buf._data, self.offset, self.width)

    def write_uint(self, value):
        """Store ``value`` mod 2**width."""
        if not isinstance(value, int):
            raise ValueError(f"window value must be an int, got {value!r}")
        _write_bits(self.buf._data, self.offset, self.width, value & ((1 << self.width) - 1))

    def offset_uint(self, delta):
        """In-place add: value becomes (value + delta) mod 2**width."""
        if not isinstance(delta, int):
            raise ValueError(f"delta must be an int, got {delta!r}")
        _add_into_bits(self.buf._data, self.offset, self.width, delta)

    def subwindow(self, start, width):
        """A window over ``width`` bits beginning ``start`` bits into this one."""
        if start < 0 or width < 1 or start + width > self.width:
            raise ValueError(
                f"subwindow [{start}, {start + width}) outside window of {self.width} bits"
            )
        return Window(self.buf, self.offset + start, width)

    def same_window(self, other):
        return (
            self.buf is other.buf
            and self.offset == other.offset
            and self.width == other.width
        )

    def overlaps(self, other):
        return (
            self.buf is other.buf
            and self.offset < other.offset + other.width
            and other.offset < self.offset + self.width
        )

    def disjoint(self, other):
        return not self.overlaps(other)
