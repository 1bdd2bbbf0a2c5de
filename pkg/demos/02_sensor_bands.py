"""Where the sensors actually see the line.

Two reflectance spots straddle the printed stripe. Sweeping the cut
point laterally shows the contact bands: a centered tool reads both
clear, one sensor fires once the drift reaches spacing/2 - ink/2, and
past spacing/2 + ink/2 the line escapes the sensor entirely. The pose
oracle's moderate/severe cutoffs are printed alongside for comparison.

Run: python3 demos/02_sensor_bands.py
"""

import numpy as np

from cutcoach import (
    LinePath,
    ScissorsPose,
    SensorMountConfig,
    SeverityThresholds,
    nearest_point,
    oracle_severity,
    sample_sensors,
    spot_overlap_fraction,
)

path = LinePath(vertices=[[0.0, 0.0], [400.0, 0.0]], ink_width=10.0)
mount = SensorMountConfig(sensor_spacing=22.0, forward_offset=0.0)
thresholds = SeverityThresholds()

print(f"ink width {path.ink_width} mm, sensor spacing {mount.sensor_spacing} mm")
print(f"one-sensor contact expected for offsets in "
      f"[{mount.sensor_spacing / 2 - path.ink_width / 2:.0f}, "
      f"{mount.sensor_spacing / 2 + path.ink_width / 2:.0f}] mm")
print()
print(" offset   left right   oracle     right-spot coverage")
for offset in np.arange(-20.0, 20.5, 2.0):
    pose = ScissorsPose((200.0, float(offset)), 0.0, 0)
    reading = sample_sensors(pose, path, mount)
    severity = oracle_severity(nearest_point(pose, path), thresholds)
    # Coverage of the right sensor's spot, for the analytically curious.
    right_center = (200.0, float(offset) - mount.sensor_spacing / 2)
    coverage = spot_overlap_fraction(right_center, path, mount.sensor_spot_diameter / 2)
    bars = "#" * int(round(coverage * 10))
    print(
        f"  {offset:+5.1f}   {'ON ' if reading.left_on_ink else '.  '}  "
        f"{'ON ' if reading.right_on_ink else '.  '}   "
        f"{severity.level.name.lower():<9}  {coverage:4.2f} {bars}"
    )
