"""Space-lean reversible multiply-accumulate built from piecewise products.

The quadratic way to run ``target += u * v`` reversibly is one controlled
add per bit of ``u``.  This module does better by cutting each operand into
``m`` short words and working on arrays of *pieces*: registers wide enough
that every intermediate sum the recursion produces stays inside its piece,
so carries never cross piece boundaries and every step is a plain in-place
add.

The core primitive, :func:`add_product_into_pieces`, adds the piecewise
convolution of two input arrays into an output array of twice the length,
recursing on half-length subproblems three at a time instead of four: the
output array is first rescaled in place so that one of the four quadrant
products cancels.  Everything it does is an in-place add, so running it
again with the opposite sign undoes it bit for bit.  That self-inverse
property is what lets :func:`multiply_add` return every temporary to zero
and release it, keeping live storage linear in the operand size while the
toffoli count grows subquadratically.

Piece geometry: words carry ``w = max(1, floor(lg n))`` bits, ``m`` is the
smallest power of two covering ``ceil(n / w)`` words, input pieces hold
``w + lg m`` bits and output pieces ``2w + 3 lg m``, which is exactly
enough headroom for the deepest chain of pairwise sums the recursion forms.
"""

from dataclasses import dataclass, field

from . import _backend
from .bitbuf import BitBuffer, Window
from .revarith import (
    DEFAULT_COST_MODEL,
    CostModel,
    check_sign,
    plus_equal,
    plus_equal_product_schoolbook,
    schoolbook_product_cost,
)

# The compiled kernel works on machine words: input pieces up to 64 bits,
# output pieces up to 128, and piece counts small enough that the toffoli
# tally fits comfortably in an unsigned 64-bit accumulator.
_KERNEL_MAX_INPUT_WIDTH = 64
_KERNEL_MAX_OUTPUT_WIDTH = 128
_KERNEL_MAX_PIECES = 1 << 16
_KERNEL_MAX_UNIT_COST = 1 << 20


class UncomputeError(RuntimeError):
    """Raised when a temporary fails verification at release time."""


@dataclass(frozen=True)
class MultiplierConfig:
    """Geometry and pricing for one multiply size."""

    input_bits: int
    word_bits: int
    piece_count: int
    input_piece_width: int
    output_piece_width: int
    base_case_pieces: int = 1
    model: CostModel = field(default=DEFAULT_COST_MODEL)

    @property
    def output_piece_count(self):
        return 2 * self.piece_count


def choose_parameters(n, *, base_case_pieces=1, model=DEFAULT_COST_MODEL):
    """Pick the word size and piece count for an n-bit multiply.

    Words carry floor(lg n) bits (at least 1) and the word count is rounded
    up to a power of two so the recursion can halve it evenly.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"operand bit count must be a positive int, got {n!r}")
    if not isinstance(base_case_pieces, int) or base_case_pieces < 1:
        raise ValueError(f"base_case_pieces must be a positive int, got {base_case_pieces!r}")
    word = max(1, n.bit_length() - 1)
    words = -(-n // word)
    pieces = 1 if words <= 1 else 1 << (words - 1).bit_length()
    lgm = pieces.bit_length() - 1
    return MultiplierConfig(
        input_bits=n,
        word_bits=word,
        piece_count=pieces,
        input_piece_width=word + lgm,
        output_piece_width=2 * word + 3 * lgm,
        base_case_pieces=base_case_pieces,
        model=model,
    )


class PieceArray:
    """Equal-width, pairwise-disjoint windows addressed as one array.

    ``stride_bits`` is the weight step between consecutive pieces: the
    array represents the value ``sum_i piece[i] * 2**(stride_bits * i)``.
    ``buffer`` is the owning BitBuffer for arrays that hold a temporary
    allocation, or None for views.
    """

    __slots__ = ("pieces", "stride_bits", "buffer")

    def __init__(self, pieces, stride_bits, buffer=None):
        pieces = list(pieces)
        if not pieces:
            raise ValueError("a piece array needs at least one piece")
        if not isinstance(stride_bits, int) or stride_bits < 1:
            raise ValueError(f"stride must be a positive int, got {stride_bits!r}")
        width = pieces[0].width
        if any(p.width != width for p in pieces):
            raise ValueError("pieces must all have the same width")
        _check_pieces_disjoint(pieces)
        self.pieces = pieces
        self.stride_bits = stride_bits
        self.buffer = buffer

    def __len__(self):
        return len(self.pieces)

    def __getitem__(self, index):
        if isinstance(index, slice):
            view = PieceArray.__new__(PieceArray)
            view.pieces = self.pieces[index]
            view.stride_bits = self.stride_bits
            view.buffer = None
            return view
        return self.pieces[index]

    def __repr__(self):
        return f"PieceArray(count={len(self.pieces)}, width={self.piece_width}, stride={self.stride_bits})"

    @property
    def piece_width(self):
        return self.pieces[0].width

    def logical_value(self):
        """sum_i piece[i] * 2**(stride_bits * i), as a plain int."""
        return sum(p.read_uint() << (self.stride_bits * i) for i, p in enumerate(self.pieces))

    def read_all(self):
        return [p.read_uint() for p in self.pieces]


def _check_pieces_disjoint(pieces):
    by_buffer = {}
    for p in pieces:
        by_buffer.setdefault(id(p.buf), []).append(p)
    for group in by_buffer.values():
        group.sort(key=lambda p: p.offset)
        for a, b in zip(group, group[1:]):
            if a.offset + a.width > b.offset:
                raise ValueError("pieces overlap within the array")


def _region(array):
    """(buffer ids) -> (lo, hi) bit ranges covered by an array's pieces."""
    spans = {}
    for p in array.pieces:
        key = id(p.buf)
        lo, hi = spans.get(key, (p.offset, p.offset + p.width))
        spans[key] = (min(lo, p.offset), max(hi, p.offset + p.width))
    return spans


def _check_arrays_disjoint(*arrays):
    seen = {}
    for arr in arrays:
        for key, (lo, hi) in _region(arr).items():
            for other_lo, other_hi in seen.get(key, ()):
                if lo < other_hi and other_lo < hi:
                    raise ValueError("piece arrays overlap each other")
            seen.setdefault(key, []).append((lo, hi))


def _check_window_clear_of(window, *arrays):
    for arr in arrays:
        for key, (lo, hi) in _region(arr).items():
            if key == id(window.buf) and window.offset < hi and lo < window.offset + window.width:
                raise ValueError("window overlaps a piece array")


def split_into_padded_pieces(src, cfg, log):
    """Copy the w-bit words of ``src`` into m zero-padded pieces.

    Allocates a fresh buffer of m * input_piece_width bits, charged to the
    log.  Piece i holds bits [w*i, w*(i+1)) of the source, zero past the
    source's top, and the padding above each word starts out zero.
    """
    if src.width != cfg.input_bits:
        raise ValueError(
            f"source width {src.width} does not match configured {cfg.input_bits}"
        )
    w = cfg.word_bits
    ipw = cfg.input_piece_width
    buf = BitBuffer(cfg.piece_count * ipw)
    log.track_alloc(len(buf))
    value = src.read_uint()
    mask = (1 << w) - 1
    pieces = []
    for i in range(cfg.piece_count):
        win = Window(buf, i * ipw, ipw)
        word = (value >> (w * i)) & mask
        if word:
            win.write_uint(word)
        pieces.append(win)
    return PieceArray(pieces, w, buffer=buf)


def allocate_output_pieces(cfg, log):
    """A fresh, zeroed array of 2m output pieces, charged to the log."""
    opw = cfg.output_piece_width
    count = cfg.output_piece_count
    buf = BitBuffer(count * opw)
    log.track_alloc(len(buf))
    pieces = [Window(buf, i * opw, opw) for i in range(count)]
    return PieceArray(pieces, cfg.word_bits, buffer=buf)


def _scale_up(out, half, log, model):
    """out[i] += out[i - half] for i ascending over [half, len)."""
    for i in range(half, len(out)):
        plus_equal(out[i], out[i - half], 1, log, model=model)


def _scale_down(out, half, log, model):
    """Inverse of :func:`_scale_up`: same adds, descending, sign flipped."""
    for i in reversed(range(half, len(out))):
        plus_equal(out[i], out[i - half], -1, log, model=model)


def _add_product_pure(in1, in2, out, sign, log, threshold, model, hook):
    k = len(in1)
    if hook is not None:
        hook("enter", k, sign, in1, in2, out)
    if k <= threshold:
        for i in range(k):
            for j in range(k):
                plus_equal_product_schoolbook(out[i + j], in1[i], in2[j], sign, log, model=model)
    else:
        h = k // 2
        _scale_up(out, h, log, model)
        _add_product_pure(in1[:h], in2[:h], out[: 2 * h], sign, log, threshold, model, hook)
        _add_product_pure(in1[h:], in2[h:], out[h : 3 * h], -sign, log, threshold, model, hook)
        _scale_down(out, h, log, model)
        if hook is not None:
            hook("combine", k, sign, in1, in2, out)
        for i in range(h):
            plus_equal(in1[i], in1[i + h], 1, log, model=model)
            plus_equal(in2[i], in2[i + h], 1, log, model=model)
        _add_product_pure(in1[:h], in2[:h], out[h : 3 * h], sign, log, threshold, model, hook)
        for i in range(h):
            plus_equal(in1[i], in1[i + h], -1, log, model=model)
            plus_equal(in2[i], in2[i + h], -1, log, model=model)
    if hook is not None:
        hook("exit", k, sign, in1, in2, out)


def _contiguous_base(array):
    """Base bit offset if the pieces sit back to back in one buffer, else None."""
    first = array.pieces[0]
    buf = first.buf
    width = first.width
    base = first.offset
    for i, p in enumerate(array.pieces):
        if p.buf is not buf or p.offset != base + i * width:
            return None
    return base


def _kernel_call(in1, in2, out, sign, log, threshold, model):
    """Run the recursion in the compiled kernel if it can take this shape."""
    kern = _backend.kernel()
    if kern is None:
        return False
    k = len(in1)
    ipw = in1.piece_width
    opw = out.piece_width
    if (
        ipw > _KERNEL_MAX_INPUT_WIDTH
        or opw > _KERNEL_MAX_OUTPUT_WIDTH
        or k > _KERNEL_MAX_PIECES
    ):
        return False
    bases = [_contiguous_base(a) for a in (in1, in2, out)]
    if any(b is None for b in bases):
        return False
    cost_out = model.add_cost(opw)
    cost_in = model.add_cost(ipw)
    cost_base = schoolbook_product_cost(ipw, ipw, opw, model)
    for c in (cost_out, cost_in, cost_base):
        if not isinstance(c, int) or c < 0 or c > _KERNEL_MAX_UNIT_COST:
            return False
    toffoli = kern.add_product(
        in1.pieces[0].buf.raw,
        bases[0],
        in2.pieces[0].buf.raw,
        bases[1],
        out.pieces[0].buf.raw,
        bases[2],
        k,
        sign,
        threshold,
        ipw,
        opw,
        cost_out,
        cost_in,
        cost_base,
    )
    log.record_toffoli(toffoli)
    return True


def add_product_into_pieces(in1, in2, out, sign, log, *, base_case_pieces=1, model=DEFAULT_COST_MODEL, _hook=None):
    """out += sign * (in1 convolved with in2), at piece granularity, in place.

    ``in1`` and ``in2`` hold k pieces each (k a power of two), ``out`` holds
    2k.  Everything is modular per piece, every step is an in-place add, and
    the whole call is undone exactly by the same call with ``-sign``.

    Piece counts of ``base_case_pieces`` or fewer multiply out directly as
    k*k piece products; above that the array is halved and three recursive
    calls replace the four quadrant products via an in-place rescale of
    ``out``.
    """
    check_sign(sign)
    if not isinstance(base_case_pieces, int) or base_case_pieces < 1:
        raise ValueError(f"base_case_pieces must be a positive int, got {base_case_pieces!r}")
    k = len(in1)
    if len(in2) != k:
        raise ValueError(f"input arrays disagree on piece count: {k} vs {len(in2)}")
    if k & (k - 1):
        raise ValueError(f"piece count must be a power of two, got {k}")
    if len(out) != 2 * k:
        raise ValueError(f"output must hold {2 * k} pieces, got {len(out)}")
    if in2.piece_width != in1.piece_width:
        raise ValueError("input arrays disagree on piece width")
    if not (in1.stride_bits == in2.stride_bits == out.stride_bits):
        raise ValueError("piece arrays disagree on stride")
    _check_arrays_disjoint(in1, in2, out)
    if _hook is None and _kernel_call(in1, in2, out, sign, log, base_case_pieces, model):
        return
    _add_product_pure(in1, in2, out, sign, log, base_case_pieces, model, _hook)


def fold_pieces_into_target(pieces, target, cfg, sign, log):
    """target += sign * sum_i piece[i] * 2**(w*i), mod 2**target.width.

    One add per output piece, each charged at the full piece width whether
    or not the piece's weight lands inside the target, so the charge depends
    only on the configured geometry.  Pieces are read, never written.
    """
    check_sign(sign)
    if len(pieces) != cfg.output_piece_count:
        raise ValueError(
            f"expected {cfg.output_piece_count} pieces, got {len(pieces)}"
        )
    if pieces.piece_width != cfg.output_piece_width:
        raise ValueError(
            f"piece width {pieces.piece_width} does not match configured {cfg.output_piece_width}"
        )
    if pieces.stride_bits != cfg.word_bits:
        raise ValueError("piece stride does not match the configured word size")
    if target.width != 2 * cfg.input_bits:
        raise ValueError(
            f"target width {target.width} does not match 2n = {2 * cfg.input_bits}"
        )
    _check_window_clear_of(target, pieces)
    w = cfg.word_bits
    unit = cfg.model.add_cost(cfg.output_piece_width)
    for i, piece in enumerate(pieces.pieces):
        start = w * i
        if start < target.width:
            value = piece.read_uint()
            if value:
                target.subwindow(start, target.width - start).offset_uint(sign * value)
        log.record_toffoli(unit)


def unsplit_and_release(pieces, src, cfg, log):
    """Undo :func:`split_into_padded_pieces`: verify, zero, and free.

    Each piece must still hold its source word with clear padding; anything
    else means an uncompute went wrong somewhere, reported as
    :class:`UncomputeError`.
    """
    if pieces.buffer is None:
        raise ValueError("these pieces do not own their storage")
    if src.width != cfg.input_bits:
        raise ValueError(
            f"source width {src.width} does not match configured {cfg.input_bits}"
        )
    value = src.read_uint()
    w = cfg.word_bits
    mask = (1 << w) - 1
    for i, piece in enumerate(pieces.pieces):
        expected = (value >> (w * i)) & mask
        actual = piece.read_uint()
        if actual != expected:
            raise UncomputeError(
                f"piece {i} holds {actual}, expected source word {expected}"
            )
        if actual:
            piece.write_uint(0)
    if not pieces.buffer.is_zero():
        raise UncomputeError("padding bits left set in an input piece buffer")
    log.track_free(len(pieces.buffer))
    pieces.buffer = None


def release_zeroed(pieces, log):
    """Free a temporary piece buffer after checking every bit is zero again."""
    if pieces.buffer is None:
        raise ValueError("these pieces do not own their storage")
    if not pieces.buffer.is_zero():
        raise UncomputeError("temporary bits were not returned to zero")
    log.track_free(len(pieces.buffer))
    pieces.buffer = None


def multiply_add(target, u, v, sign, log, *, config=None):
    """target += sign * u * v, mod 2**(2n), with all temporaries returned to zero.

    ``u`` and ``v`` are n-bit windows and ``target`` is a 2n-bit window,
    pairwise disjoint.  The call splits both operands into padded pieces,
    runs the piecewise product, folds the pieces into the target, reruns
    the product with the sign flipped to clear the pieces, and releases
    everything after verifying it is bit-for-bit back to its initial state.
    Tracked allocation therefore returns to its starting level, and the
    high-water mark is the piece storage plus one adder workspace bit.
    """
    check_sign(sign)
    n = u.width
    if v.width != n:
        raise ValueError(f"operand widths differ: {n} vs {v.width}")
    if target.width != 2 * n:
        raise ValueError(f"target must be {2 * n} bits, got {target.width}")
    if target.overlaps(u) or target.overlaps(v) or u.overlaps(v):
        raise ValueError("target and operands must be pairwise disjoint")
    cfg = config if config is not None else choose_parameters(n)
    if cfg.input_bits != n:
        raise ValueError(f"config is for {cfg.input_bits}-bit operands, got {n}")
    log.track_alloc(1)
    with log.phase("split"):
        up = split_into_padded_pieces(u, cfg, log)
        vp = split_into_padded_pieces(v, cfg, log)
        out = allocate_output_pieces(cfg, log)
    with log.phase("recurse"):
        add_product_into_pieces(
            up, vp, out, 1, log, base_case_pieces=cfg.base_case_pieces, model=cfg.model
        )
    with log.phase("fold"):
        fold_pieces_into_target(out, target, cfg, sign, log)
    with log.phase("uncompute"):
        add_product_into_pieces(
            up, vp, out, -1, log, base_case_pieces=cfg.base_case_pieces, model=cfg.model
        )
    with log.phase("unsplit"):
        release_zeroed(out, log)
        unsplit_and_release(up, u, cfg, log)
        unsplit_and_release(vp, v, cfg, log)
    log.track_free(1)


def multiply_add_schoolbook(target, u, v, sign, log, *, model=DEFAULT_COST_MODEL):
    """Reference quadratic multiply-accumulate: target += sign * u * v.

    One controlled add per bit of ``u``, no temporaries beyond the adder's
    single workspace bit.
    """
    check_sign(sign)
    n = u.width
    if v.width != n:
        raise ValueError(f"operand widths differ: {n} vs {v.width}")
    if target.width != 2 * n:
        raise ValueError(f"target must be {2 * n} bits, got {target.width}")
    if target.overlaps(u) or target.overlaps(v) or u.overlaps(v):
        raise ValueError("target and operands must be pairwise disjoint")
    log.track_alloc(1)
    plus_equal_product_schoolbook(target, u, v, sign, log, model=model)
    log.track_free(1)
