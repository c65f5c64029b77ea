"""Measurement and count file formats.

Two interchangeable encodings carry raw measurement tensors:

* text CSV: a header line ``N,T,M``, then one line per (device, repeat) pair,
  device-major with repeats in order, each line holding T comma-separated
  0/1 symbols;
* binary: magic ``PUFB``, version byte 0x01, three little-endian uint32 dims
  N, T, M, then one row of ceil(T/8) bytes per (device, repeat) pair in the
  same order, bits packed least-significant-bit first and zero-padded to the
  byte boundary.

A third, pre-counted format carries just the sufficient statistic: a header
line ``N,T`` and one line of T comma-separated counts of 1s.  All formats are
version 1; parsers reject anything else with an error naming the offending
line or byte offset.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .errors import FormatError
from .response import MeasurementTensor, PositionCounts

MAGIC = b"PUFB"
VERSION = 1
_HEADER_LEN = 4 + 1 + 12  # magic, version, three uint32 dims


def _open_for_read(source):
    if hasattr(source, "read"):
        return source, False
    return open(Path(source), "rb"), True


def _open_for_write(dest):
    if hasattr(dest, "write"):
        return dest, False
    return open(Path(dest), "wb"), True


def load_measurements(source) -> MeasurementTensor:
    """Read a measurement tensor from a path or binary file object.

    The binary format is detected by its magic bytes; everything else is
    parsed as text CSV.
    """
    fh, owned = _open_for_read(source)
    try:
        payload = fh.read()
    finally:
        if owned:
            fh.close()
    if payload[:4] == MAGIC:
        return _parse_binary(payload)
    return _parse_csv(payload)


def write_measurements(m: MeasurementTensor, dest, fmt: str = "csv") -> None:
    """Write a measurement tensor as ``csv`` or ``binary``."""
    if fmt == "csv":
        blob = _encode_csv(m)
    elif fmt == "binary":
        blob = _encode_binary(m)
    else:
        raise FormatError(f"unknown measurement format {fmt!r}, expected 'csv' or 'binary'")
    fh, owned = _open_for_write(dest)
    try:
        fh.write(blob)
    finally:
        if owned:
            fh.close()


def _encode_csv(m: MeasurementTensor) -> bytes:
    out = io.StringIO()
    out.write(f"{m.devices},{m.positions},{m.repeats}\n")
    for n in range(m.devices):
        for k in range(m.repeats):
            out.write(",".join("1" if b else "0" for b in m.bits[n, :, k]))
            out.write("\n")
    return out.getvalue().encode("ascii")


def _encode_binary(m: MeasurementTensor) -> bytes:
    header = MAGIC + bytes([VERSION])
    header += m.devices.to_bytes(4, "little") + m.positions.to_bytes(4, "little") \
        + m.repeats.to_bytes(4, "little")
    # rows ordered (device, repeat); packbits pads each row with zero bits
    rows = np.transpose(m.bits, (0, 2, 1)).reshape(m.devices * m.repeats, m.positions)
    packed = np.packbits(rows, axis=1, bitorder="little")
    return header + packed.tobytes()


def _parse_csv(payload: bytes) -> MeasurementTensor:
    try:
        text = payload.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"byte {exc.start}: not a text measurement file") from None
    lines = text.splitlines()
    if not lines:
        raise FormatError("line 1: empty file, expected header 'N,T,M'")
    dims = _parse_int_fields(lines[0], 3, 1, "N,T,M")
    devices, positions, repeats = dims
    if min(dims) < 1:
        raise FormatError("line 1: dimensions must all be >= 1")
    expected = devices * repeats
    data_lines = lines[1:]
    while data_lines and not data_lines[-1].strip():
        data_lines.pop()
    if len(data_lines) < expected:
        raise FormatError(
            f"line {len(lines) + 1}: truncated payload, expected {expected} data lines, "
            f"found {len(data_lines)}")
    if len(data_lines) > expected:
        raise FormatError(
            f"line {expected + 2}: dimension mismatch, expected exactly {expected} data lines")
    bits = np.empty((devices, repeats, positions), dtype=np.uint8)
    for row, line in enumerate(data_lines):
        fields = line.split(",")
        if len(fields) != positions:
            raise FormatError(
                f"line {row + 2}: expected {positions} values, found {len(fields)}")
        for col, token in enumerate(fields):
            token = token.strip()
            if token == "0":
                bits[row // repeats, row % repeats, col] = 0
            elif token == "1":
                bits[row // repeats, row % repeats, col] = 1
            else:
                raise FormatError(
                    f"line {row + 2}: non-binary symbol {token!r} in field {col + 1}")
    return MeasurementTensor(bits=np.transpose(bits, (0, 2, 1)))


def _parse_binary(payload: bytes) -> MeasurementTensor:
    if len(payload) < _HEADER_LEN:
        raise FormatError(f"byte {len(payload)}: truncated header, need {_HEADER_LEN} bytes")
    if payload[4] != VERSION:
        raise FormatError(f"byte 4: unsupported version {payload[4]}, expected {VERSION}")
    devices = int.from_bytes(payload[5:9], "little")
    positions = int.from_bytes(payload[9:13], "little")
    repeats = int.from_bytes(payload[13:17], "little")
    if min(devices, positions, repeats) < 1:
        raise FormatError("byte 5: dimensions must all be >= 1")
    row_bytes = (positions + 7) // 8
    rows = devices * repeats
    body = payload[_HEADER_LEN:]
    if len(body) < rows * row_bytes:
        raise FormatError(
            f"byte {_HEADER_LEN + len(body)}: truncated payload, expected "
            f"{rows * row_bytes} bit-packed bytes, found {len(body)}")
    if len(body) > rows * row_bytes:
        raise FormatError(
            f"byte {_HEADER_LEN + rows * row_bytes}: trailing data after bit payload")
    packed = np.frombuffer(body, dtype=np.uint8).reshape(rows, row_bytes)
    unpacked = np.unpackbits(packed, axis=1, bitorder="little")
    padding = unpacked[:, positions:]
    if padding.any():
        bad_row = int(np.argwhere(padding.any(axis=1))[0][0])
        offset = _HEADER_LEN + bad_row * row_bytes + positions // 8
        raise FormatError(f"byte {offset}: nonzero padding bits")
    rows_bits = unpacked[:, :positions].reshape(devices, repeats, positions)
    return MeasurementTensor(bits=np.transpose(rows_bits, (0, 2, 1)))


def load_counts(source) -> PositionCounts:
    """Read a pre-counted (counts of 1s, device count) file."""
    fh, owned = _open_for_read(source)
    try:
        payload = fh.read()
    finally:
        if owned:
            fh.close()
    try:
        text = payload.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"byte {exc.start}: not a text counts file") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("line 1: empty file, expected header 'N,T'")
    devices, positions = _parse_int_fields(lines[0], 2, 1, "N,T")
    if devices < 1 or positions < 1:
        raise FormatError("line 1: dimensions must all be >= 1")
    if len(lines) < 2:
        raise FormatError("line 2: truncated payload, expected one line of counts")
    if len(lines) > 2:
        raise FormatError("line 3: dimension mismatch, expected exactly one line of counts")
    fields = lines[1].split(",")
    if len(fields) != positions:
        raise FormatError(f"line 2: expected {positions} values, found {len(fields)}")
    ones = []
    for col, token in enumerate(fields):
        token = token.strip()
        try:
            value = int(token)
        except ValueError:
            raise FormatError(f"line 2: non-integer count {token!r} in field {col + 1}") from None
        if not 0 <= value <= devices:
            raise FormatError(f"line 2: count {value} in field {col + 1} outside 0..{devices}")
        ones.append(value)
    return PositionCounts(devices=devices, ones=np.array(ones, dtype=np.int64))


def write_counts(c: PositionCounts, dest) -> None:
    """Write pre-counted sufficient statistics."""
    blob = (f"{c.devices},{c.positions}\n"
            + ",".join(str(int(v)) for v in c.ones) + "\n").encode("ascii")
    fh, owned = _open_for_write(dest)
    try:
        fh.write(blob)
    finally:
        if owned:
            fh.close()


def _parse_int_fields(line: str, count: int, lineno: int, shape: str) -> tuple[int, ...]:
    fields = line.split(",")
    if len(fields) != count:
        raise FormatError(f"line {lineno}: malformed header, expected '{shape}'")
    values = []
    for token in fields:
        try:
            values.append(int(token.strip()))
        except ValueError:
            raise FormatError(
                f"line {lineno}: malformed header, non-integer {token.strip()!r}") from None
    return tuple(values)
