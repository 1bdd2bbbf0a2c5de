"""Host-to-UI session protocol.

Messages are JSON documents tagged with a schema version. Two transports
carry them: WebSocket (one JSON text per WS message, the browser path)
and raw local sockets, where each message is prefixed with a 4-byte
little-endian length. Both directions share the same message set.

Flow rules: start_session must come first, feedback/sensor updates only
exist inside a started session, and end_session is terminal.
"""

from __future__ import annotations

import enum
import json
import struct
from dataclasses import dataclass, field

PROTOCOL_VERSION = 1

_LEN = struct.Struct("<I")
MAX_MESSAGE_BYTES = 1 << 20  # sanity bound for the raw-socket transport


class ProtocolError(ValueError):
    """Malformed message or a message out of sequence."""


class MessageKind(enum.Enum):
    START_SESSION = "start_session"
    POSE_UPDATE = "pose_update"
    SENSOR_UPDATE = "sensor_update"
    FEEDBACK_UPDATE = "feedback_update"
    END_SESSION = "end_session"
    DEVICE_HEALTH = "device_health"


@dataclass(frozen=True)
class SessionMessage:
    kind: MessageKind
    body: dict = field(default_factory=dict)
    v: int = PROTOCOL_VERSION

    def to_json(self) -> str:
        return json.dumps(
            {"v": self.v, "kind": self.kind.value, "body": self.body},
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "SessionMessage":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ProtocolError("message must be a JSON object")
        if "v" not in data:
            raise ProtocolError("message missing version field 'v'")
        if data["v"] != PROTOCOL_VERSION:
            raise ProtocolError(f"unsupported protocol version {data['v']!r}")
        try:
            kind = MessageKind(data["kind"])
        except (KeyError, ValueError):
            raise ProtocolError(f"unknown message kind {data.get('kind')!r}") from None
        body = data.get("body", {})
        if not isinstance(body, dict):
            raise ProtocolError("body must be a JSON object")
        return cls(kind=kind, body=body)


def encode_message(message: SessionMessage) -> bytes:
    """Length-prefixed encoding for raw socket transports."""
    payload = message.to_json().encode("utf-8")
    return _LEN.pack(len(payload)) + payload


class MessageFramer:
    """Incremental decoder for the length-prefixed transport."""

    def __init__(self) -> None:
        self._buffer = bytearray()

    def feed(self, data: bytes) -> list[SessionMessage]:
        self._buffer.extend(data)
        out: list[SessionMessage] = []
        while True:
            if len(self._buffer) < _LEN.size:
                return out
            (length,) = _LEN.unpack(bytes(self._buffer[: _LEN.size]))
            if length > MAX_MESSAGE_BYTES:
                raise ProtocolError(f"message length {length} exceeds bound")
            if len(self._buffer) < _LEN.size + length:
                return out
            payload = bytes(self._buffer[_LEN.size : _LEN.size + length])
            del self._buffer[: _LEN.size + length]
            out.append(SessionMessage.from_json(payload.decode("utf-8")))


class SessionFlow:
    """Sequencing validator, one per connection.

    check() raises ProtocolError when a message arrives out of order;
    otherwise it records the transition.
    """

    _NEEDS_SESSION = {
        MessageKind.POSE_UPDATE,
        MessageKind.SENSOR_UPDATE,
        MessageKind.FEEDBACK_UPDATE,
        MessageKind.DEVICE_HEALTH,
        MessageKind.END_SESSION,
    }

    def __init__(self) -> None:
        self.started = False
        self.ended = False

    def check(self, message: SessionMessage) -> SessionMessage:
        if self.ended:
            raise ProtocolError("session already ended")
        if message.kind is MessageKind.START_SESSION:
            if self.started:
                raise ProtocolError("session already started")
            self.started = True
        elif message.kind in self._NEEDS_SESSION:
            if not self.started:
                raise ProtocolError(
                    f"{message.kind.value} before start_session"
                )
            if message.kind is MessageKind.END_SESSION:
                self.ended = True
        return message
