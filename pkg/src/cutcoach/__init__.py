"""cutcoach: scissors line-following trainer.

A deterministic engine that turns scissors motion along a printed line
into dual line-sensor readings, grades the deviation, and drives a
tiered visual/audio feedback loop; plus a behavior simulator with golden
trace replay, session metrics, a wire codec for the device link, and an
interactive session service.
"""

from .feedback import (
    CUE_TEXT,
    AudioCue,
    ClockRegressionError,
    Color,
    CueKind,
    FeedbackConfig,
    FeedbackState,
    Phase,
    VisualFrame,
    run_session,
    step,
)
from .geometry import (
    MIN_INK_WIDTH_MM,
    DeviationMeasure,
    LinePath,
    PathError,
    ScissorsPose,
    circle_path,
    distance_to_path,
    is_complete,
    l_shaped_path,
    load_path,
    nearest_point,
    progress,
    save_path,
    star_path,
    straight_line_path,
)
from .metrics import MetricsReport, format_metrics_table, metrics
from .pipeline import (
    CuttingSession,
    EngineConfig,
    TickResult,
    config_hash,
    load_config,
    save_config,
)
from .sensing import (
    ConfigError,
    DwellConfig,
    FaultInjector,
    FaultModel,
    SensorMountConfig,
    SensorReading,
    Severity,
    SeverityEstimator,
    SeverityLevel,
    SeverityThresholds,
    Side,
    estimate_severity,
    inject_faults,
    oracle_severity,
    sample_sensors,
    spot_overlap_fraction,
)
from .simulation import (
    CutterBehaviorModel,
    ReplayError,
    SessionTrace,
    TraceRecord,
    replay,
    run_behavior,
    traces_equal,
)
from .wire import (
    DecoderState,
    Diagnostic,
    StreamDecoder,
    WireError,
    WireFrame,
    decode_stream,
    encode_frame,
    frame_to_reading,
    sensor_frame,
)

__version__ = "0.1.0"
