"""Pin-array tacton engine: formal model, tacton catalog, playback,
identification experiments, and guidance applications."""

from .core import (
    BlinkRhythm,
    DimensionDef,
    DynamicTacton,
    Frame,
    Pattern,
    StaticTacton,
    Tacton,
    TactonSpace,
    compose,
    cycle_length_ms,
    frame_at,
    make_blinking,
    pattern_from_mask,
    pattern_from_text,
    pattern_to_mask,
    pattern_to_text,
    tacton_from_dict,
    tacton_to_dict,
)
from .library import (
    ALL_DIRECTIONS,
    DEFAULT_SPEED_TEMPOS,
    SET_TEMPO_MS,
    Catalog,
    CircuitComponentKind,
    Direction,
    blinking_direction_space,
    circuit_component,
    direction_space,
    load_catalog,
    marker_pattern,
    mixed,
    speed_tempo,
    static_directional,
    superimpose,
    wave,
)
from .player import (
    DEFAULT_CAP_MS,
    PlaybackSession,
    RecordingDevice,
    TerminalDevice,
    VirtualClock,
    WallClock,
    change_schedule,
    play,
    record_playback,
)
from .experiments import (
    ConfusionMatrix,
    ResponderModel,
    SessionReport,
    TrialRecord,
    analyze,
    counterbalance,
    format_stimulus,
    generate_trials,
    information_transmission,
    parse_stimulus,
    perfect_responder,
    records_from_csv,
    records_to_csv,
    simulate_responder,
)
from .guidance import (
    CircuitGraph,
    CircuitNode,
    MazeWorld,
    available_directions_tacton,
    guidance_direction,
    guided_walk,
    local_tacton,
    maze_cue,
    mirror,
    move,
)

__version__ = "0.1.0"
