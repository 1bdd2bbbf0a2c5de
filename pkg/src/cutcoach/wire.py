"""Device-to-host wire protocol: fixed-length framed samples over a byte
stream.

Frame layout (all multi-byte fields little-endian):

    offset  size  field
    0       1     sync byte 0xA5
    1       1     frame type (0x01 sensor sample, 0x02 heartbeat,
                  0x03 device status)
    2       2     sequence counter, wraps at 0xFFFF
    4       4     timestamp, ms
    8       var   payload (see below)
    last    1     checksum: XOR of every preceding byte

Payloads:
    sensor sample (1 byte): bit0 left_on_ink, bit1 right_on_ink,
                            bit2 left_fault, bit3 right_fault
    heartbeat (0 bytes)
    device status (1 byte): bit0 left sensor ok, bit1 right sensor ok

The XOR checksum suits the mild corruption model of a short local cable
to a hobby-class microcontroller; the decoder is written so a stronger
checksum could swap in without touching the framing.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .sensing import SensorReading

SYNC = 0xA5

TYPE_SENSOR = 0x01
TYPE_HEARTBEAT = 0x02
TYPE_STATUS = 0x03

_HEADER = struct.Struct("<BBHI")  # sync, type, seq, timestamp

# Total frame length (header + payload + checksum) per type.
FRAME_LENGTHS = {
    TYPE_SENSOR: _HEADER.size + 1 + 1,
    TYPE_HEARTBEAT: _HEADER.size + 0 + 1,
    TYPE_STATUS: _HEADER.size + 1 + 1,
}

BIT_LEFT_ON_INK = 0x01
BIT_RIGHT_ON_INK = 0x02
BIT_LEFT_FAULT = 0x04
BIT_RIGHT_FAULT = 0x08


class WireError(ValueError):
    """Raised when building or encoding an invalid frame."""


@dataclass(frozen=True)
class WireFrame:
    frame_type: int
    seq: int
    timestamp_ms: int
    payload: bytes = b""

    def __post_init__(self) -> None:
        if self.frame_type not in FRAME_LENGTHS:
            raise WireError(f"unknown frame type 0x{self.frame_type:02x}")
        expected = FRAME_LENGTHS[self.frame_type] - _HEADER.size - 1
        if len(self.payload) != expected:
            raise WireError(
                f"type 0x{self.frame_type:02x} payload must be "
                f"{expected} bytes, got {len(self.payload)}"
            )
        if not 0 <= self.seq <= 0xFFFF:
            raise WireError("seq must fit in 16 bits")
        if not 0 <= self.timestamp_ms <= 0xFFFFFFFF:
            raise WireError("timestamp_ms must fit in 32 bits")
        object.__setattr__(self, "payload", bytes(self.payload))


def xor_checksum(data: bytes) -> int:
    c = 0
    for b in data:
        c ^= b
    return c


def encode_frame(frame: WireFrame) -> bytes:
    body = _HEADER.pack(SYNC, frame.frame_type, frame.seq, frame.timestamp_ms)
    body += frame.payload
    return body + bytes([xor_checksum(body)])


def sensor_frame(reading: SensorReading, seq: int) -> WireFrame:
    bits = (
        (BIT_LEFT_ON_INK if reading.left_on_ink else 0)
        | (BIT_RIGHT_ON_INK if reading.right_on_ink else 0)
        | (BIT_LEFT_FAULT if reading.left_fault else 0)
        | (BIT_RIGHT_FAULT if reading.right_fault else 0)
    )
    return WireFrame(
        frame_type=TYPE_SENSOR,
        seq=seq,
        timestamp_ms=reading.timestamp,
        payload=bytes([bits]),
    )


def frame_to_reading(frame: WireFrame) -> SensorReading:
    if frame.frame_type != TYPE_SENSOR:
        raise WireError("not a sensor sample frame")
    bits = frame.payload[0]
    return SensorReading(
        timestamp=frame.timestamp_ms,
        left_on_ink=bool(bits & BIT_LEFT_ON_INK),
        right_on_ink=bool(bits & BIT_RIGHT_ON_INK),
        left_fault=bool(bits & BIT_LEFT_FAULT),
        right_fault=bool(bits & BIT_RIGHT_FAULT),
    )


@dataclass(frozen=True)
class Diagnostic:
    """One decoder complaint; never fatal."""

    kind: str  # "checksum" | "unknown_type" | "seq_gap" | "resync"
    message: str
    lost_frames: int = 0


@dataclass
class DecoderState:
    """Resumable parser state: holds partial trailing frames and the last
    accepted sequence number across feed() calls."""

    buffer: bytearray = field(default_factory=bytearray)
    last_seq: int | None = None
    skipped: int = 0  # junk bytes since the last accepted sync


class StreamDecoder:
    """Incremental frame decoder with 0xA5 resynchronization.

    Output (frames and diagnostics) is independent of how the byte stream
    is chunked across feed() calls. Corruption costs at most the damaged
    frame plus, rarely, one neighbour when a misaligned window happens to
    checksum (inherent to a 1-byte XOR).
    """

    def __init__(self, state: DecoderState | None = None) -> None:
        self.state = state if state is not None else DecoderState()

    def feed(self, data: bytes) -> tuple[list[WireFrame], list[Diagnostic]]:
        st = self.state
        st.buffer.extend(data)
        frames: list[WireFrame] = []
        diags: list[Diagnostic] = []

        while True:
            sync_at = st.buffer.find(SYNC)
            if sync_at < 0:
                # Pure junk: count and discard, keep nothing buffered.
                st.skipped += len(st.buffer)
                del st.buffer[:]
                return frames, diags
            if sync_at > 0:
                st.skipped += sync_at
                del st.buffer[:sync_at]
            if st.skipped:
                diags.append(
                    Diagnostic(
                        kind="resync",
                        message=f"skipped {st.skipped} byte(s) before sync",
                    )
                )
                st.skipped = 0

            if len(st.buffer) < 2:
                return frames, diags  # need the type byte
            ftype = st.buffer[1]
            if ftype not in FRAME_LENGTHS:
                diags.append(
                    Diagnostic(
                        kind="unknown_type",
                        message=f"unknown frame type 0x{ftype:02x}",
                    )
                )
                st.skipped += 1
                del st.buffer[:1]  # step past the sync, rescan
                continue

            flen = FRAME_LENGTHS[ftype]
            if len(st.buffer) < flen:
                return frames, diags  # partial trailing frame stays buffered
            window = bytes(st.buffer[:flen])
            if xor_checksum(window[:-1]) != window[-1]:
                diags.append(
                    Diagnostic(
                        kind="checksum",
                        message=f"checksum mismatch on type 0x{ftype:02x} frame",
                    )
                )
                st.skipped += 1
                del st.buffer[:1]
                continue

            _, _, seq, timestamp = _HEADER.unpack(window[: _HEADER.size])
            frame = WireFrame(
                frame_type=ftype,
                seq=seq,
                timestamp_ms=timestamp,
                payload=window[_HEADER.size : -1],
            )
            if st.last_seq is not None:
                lost = (seq - st.last_seq - 1) % 0x10000
                if lost:
                    diags.append(
                        Diagnostic(
                            kind="seq_gap",
                            message=f"seq jumped {st.last_seq} -> {seq}",
                            lost_frames=lost,
                        )
                    )
            st.last_seq = seq
            frames.append(frame)
            del st.buffer[:flen]


def decode_stream(
    data: bytes, state: DecoderState | None = None
) -> tuple[list[WireFrame], list[Diagnostic], DecoderState]:
    """Functional wrapper around StreamDecoder for one-shot callers."""
    decoder = StreamDecoder(state)
    frames, diags = decoder.feed(data)
    return frames, diags, decoder.state
