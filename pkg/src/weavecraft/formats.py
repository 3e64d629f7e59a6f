"""Byte-level image codecs: PGM/PPM (ascii and binary), PBM P1, restricted PNG.

PNG support is deliberately narrow: 8-bit depth, grayscale or RGB, no
interlacing, no palette.  The writer always emits filter-0 scanlines with a
fixed zlib level, so output bytes are stable for golden tests.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .errors import DomainError, ParseError

LUMA_WEIGHTS = (0.2126, 0.7152, 0.0722)

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


# --------------------------------------------------------------------------
# PNM (PBM/PGM/PPM)

class _Tokens:
    """Whitespace/comment-aware token scanner over a PNM header."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        while self.pos < len(self.data):
            c = self.data[self.pos : self.pos + 1]
            if c == b"#":
                nl = self.data.find(b"\n", self.pos)
                self.pos = len(self.data) if nl < 0 else nl + 1
            elif c.isspace():
                self.pos += 1
            else:
                return

    def next_token(self) -> bytes:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and not self.data[self.pos : self.pos + 1].isspace():
            self.pos += 1
        if start == self.pos:
            raise ParseError("unexpected end of file in PNM header", offset=start)
        return self.data[start : self.pos]

    def next_int(self) -> int:
        tok = self.next_token()
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer, got {tok!r}", offset=self.pos) from None


def read_pnm(data: bytes) -> np.ndarray:
    """Decode P1/P2/P3/P5/P6 into uint8 pixels: (h, w) or (h, w, 3)."""
    toks = _Tokens(data)
    magic = toks.next_token()
    if magic not in (b"P1", b"P2", b"P3", b"P5", b"P6"):
        raise ParseError(f"unsupported PNM magic {magic!r}", offset=0)
    width = toks.next_int()
    height = toks.next_int()
    if width < 1 or height < 1:
        raise ParseError(f"bad PNM dimensions {width}x{height}", offset=toks.pos)
    channels = 3 if magic in (b"P3", b"P6") else 1
    if magic == b"P1":
        maxval = 1
    else:
        maxval = toks.next_int()
        if not 0 < maxval <= 255:
            raise ParseError(f"unsupported maxval {maxval}", offset=toks.pos)
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # Exactly one whitespace byte separates the header from raster data.
        start = toks.pos + 1
        raster = data[start : start + count]
        if len(raster) != count:
            raise ParseError("truncated PNM raster", offset=len(data))
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        values = np.empty(count, dtype=np.uint8)
        for i in range(count):
            v = toks.next_int()
            if not 0 <= v <= maxval:
                raise ParseError(f"sample {v} exceeds maxval {maxval}", offset=toks.pos)
            values[i] = v
    if magic == b"P1":
        values = 1 - values  # PBM: 1 = black
        maxval = 1
    if maxval != 255 and magic != b"P1":
        values = (values.astype(np.uint16) * 255 // maxval).astype(np.uint8)
    if magic == b"P1":
        values = values * np.uint8(255)
    if channels == 3:
        return values.reshape(height, width, 3)
    return values.reshape(height, width)


def write_pbm(bits: np.ndarray) -> bytes:
    """P1 text PBM; input is a 0/1 array where 1 prints as '1' (black)."""
    bits = np.asarray(bits)
    if bits.ndim != 2 or bits.size == 0:
        raise DomainError("PBM export needs a nonempty 2-D binary array")
    lines = [f"P1\n{bits.shape[1]} {bits.shape[0]}\n"]
    for row in bits:
        lines.append(" ".join(str(int(b)) for b in row) + "\n")
    return "".join(lines).encode("ascii")


def write_pgm(gray: np.ndarray) -> bytes:
    """Binary P5, maxval 255."""
    gray = np.asarray(gray, dtype=np.uint8)
    if gray.ndim != 2 or gray.size == 0:
        raise DomainError("PGM export needs a nonempty 2-D array")
    header = f"P5\n{gray.shape[1]} {gray.shape[0]}\n255\n".encode("ascii")
    return header + gray.tobytes()


def write_ppm(rgb: np.ndarray) -> bytes:
    """Binary P6, maxval 255."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3 or rgb.size == 0:
        raise DomainError("PPM export needs a nonempty (h, w, 3) array")
    header = f"P6\n{rgb.shape[1]} {rgb.shape[0]}\n255\n".encode("ascii")
    return header + rgb.tobytes()


# --------------------------------------------------------------------------
# PNG

def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def write_png(pixels: np.ndarray) -> bytes:
    """Encode (h, w) grayscale or (h, w, 3) RGB uint8 pixels."""
    pixels = np.asarray(pixels, dtype=np.uint8)
    if pixels.ndim == 2:
        color_type = 0
        flat = pixels
    elif pixels.ndim == 3 and pixels.shape[2] == 3:
        color_type = 2
        flat = pixels.reshape(pixels.shape[0], -1)
    else:
        raise DomainError(f"cannot encode array of shape {pixels.shape} as PNG")
    height, width = pixels.shape[:2]
    if height < 1 or width < 1:
        raise DomainError("zero-dimension image")
    ihdr = struct.pack(">IIBBBBB", width, height, 8, color_type, 0, 0, 0)
    raw = b"".join(b"\x00" + row.tobytes() for row in flat)
    idat = zlib.compress(raw, 9)
    return (
        _PNG_SIGNATURE
        + _png_chunk(b"IHDR", ihdr)
        + _png_chunk(b"IDAT", idat)
        + _png_chunk(b"IEND", b"")
    )


def _paeth(a: int, b: int, c: int) -> int:
    p = a + b - c
    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    if pb <= pc:
        return b
    return c


def _unfilter(raw: bytes, height: int, stride: int, bpp: int) -> np.ndarray:
    out = np.zeros((height, stride), dtype=np.uint8)
    pos = 0
    prev = np.zeros(stride, dtype=np.uint8)
    for y in range(height):
        ftype = raw[pos]
        pos += 1
        line = np.frombuffer(raw[pos : pos + stride], dtype=np.uint8).astype(np.int32)
        pos += stride
        cur = np.zeros(stride, dtype=np.int32)
        if ftype == 0:
            cur = line
        elif ftype == 1:
            for i in range(stride):
                left = cur[i - bpp] if i >= bpp else 0
                cur[i] = (line[i] + left) & 0xFF
        elif ftype == 2:
            cur = (line + prev) & 0xFF
        elif ftype == 3:
            for i in range(stride):
                left = cur[i - bpp] if i >= bpp else 0
                cur[i] = (line[i] + (left + int(prev[i])) // 2) & 0xFF
        elif ftype == 4:
            for i in range(stride):
                left = cur[i - bpp] if i >= bpp else 0
                up_left = int(prev[i - bpp]) if i >= bpp else 0
                cur[i] = (line[i] + _paeth(int(left), int(prev[i]), up_left)) & 0xFF
        else:
            raise ParseError(f"unknown PNG filter type {ftype}", offset=pos)
        out[y] = cur.astype(np.uint8)
        prev = out[y]
    return out


def read_png(data: bytes) -> np.ndarray:
    """Decode a restricted PNG (8-bit gray or RGB, no interlace)."""
    if not data.startswith(_PNG_SIGNATURE):
        raise ParseError("not a PNG file", offset=0)
    pos = len(_PNG_SIGNATURE)
    width = height = None
    color_type = None
    idat = bytearray()
    while pos < len(data):
        if pos + 8 > len(data):
            raise ParseError("truncated PNG chunk header", offset=pos)
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        tag = data[pos + 4 : pos + 8]
        payload = data[pos + 8 : pos + 8 + length]
        if len(payload) != length:
            raise ParseError("truncated PNG chunk payload", offset=pos + 8)
        if tag == b"IHDR":
            width, height, depth, color_type, comp, filt, interlace = struct.unpack(
                ">IIBBBBB", payload
            )
            if depth != 8:
                raise ParseError(f"unsupported PNG bit depth {depth}", offset=pos)
            if color_type not in (0, 2):
                raise ParseError(f"unsupported PNG color type {color_type}", offset=pos)
            if interlace != 0:
                raise ParseError("interlaced PNG not supported", offset=pos)
            if comp != 0 or filt != 0:
                raise ParseError("nonstandard PNG compression/filter method", offset=pos)
        elif tag == b"IDAT":
            idat.extend(payload)
        elif tag == b"IEND":
            break
        pos += 12 + length
    if width is None:
        raise ParseError("PNG missing IHDR", offset=len(_PNG_SIGNATURE))
    channels = 1 if color_type == 0 else 3
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise ParseError(f"PNG zlib stream corrupt: {exc}", offset=None) from None
    stride = width * channels
    if len(raw) != height * (stride + 1):
        raise ParseError("PNG raster size mismatch", offset=None)
    pixels = _unfilter(raw, height, stride, channels)
    if channels == 3:
        return pixels.reshape(height, width, 3)
    return pixels.reshape(height, width)


# --------------------------------------------------------------------------
# Shared entry point

def decode_image(data: bytes) -> np.ndarray:
    """Sniff PNG vs PNM by magic bytes and decode to uint8 pixels."""
    if data.startswith(_PNG_SIGNATURE):
        return read_png(data)
    if data[:1] == b"P":
        return read_pnm(data)
    raise ParseError("unrecognized image format", offset=0)


def to_luminance(pixels: np.ndarray) -> np.ndarray:
    """Float luminance in [0, 1]; RGB collapses via fixed luma weights."""
    pixels = np.asarray(pixels)
    if pixels.ndim == 3:
        w = np.asarray(LUMA_WEIGHTS)
        return (pixels.astype(np.float64) @ w) / 255.0
    return pixels.astype(np.float64) / 255.0
