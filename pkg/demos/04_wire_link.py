"""The device link, byte by byte.

Sensor samples become 10-byte frames behind a sync byte and an XOR
checksum. We encode a few, print the hex, then abuse the stream: flip a
payload bit, chop a frame in half across two feeds, and let the decoder
report what it lost while recovering everything else.

Run: python3 demos/04_wire_link.py
"""

from cutcoach import SensorReading, StreamDecoder, encode_frame, sensor_frame

readings = [
    SensorReading(timestamp=t * 20, left_on_ink=(t == 2), right_on_ink=False)
    for t in range(5)
]
frames = [sensor_frame(r, seq=i) for i, r in enumerate(readings)]
stream = b"".join(encode_frame(f) for f in frames)

print("encoded frames:")
for frame in frames:
    print(f"  seq={frame.seq}  {encode_frame(frame).hex(' ')}")

print()
print("corrupting one payload bit of seq=2 ...")
damaged = bytearray(stream)
damaged[2 * 10 + 8] ^= 0x01
decoder = StreamDecoder()
got, diagnostics = decoder.feed(bytes(damaged))
print(f"recovered seqs: {[f.seq for f in got]}")
for d in diagnostics:
    extra = f" ({d.lost_frames} lost)" if d.lost_frames else ""
    print(f"  diagnostic: {d.kind}: {d.message}{extra}")

print()
print("feeding a torn stream, 7 bytes at a time ...")
decoder = StreamDecoder()
recovered = []
for i in range(0, len(stream), 7):
    frames_now, _ = decoder.feed(stream[i : i + 7])
    recovered.extend(f.seq for f in frames_now)
print(f"recovered seqs: {recovered}")
