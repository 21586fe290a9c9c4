"""Gaze-driven nine-command virtual keyboard engine and simulation toolkit."""

from gazeboard.core import (
    CENTER,
    DEFAULT_TASK_SENTENCE,
    DELETE,
    GO_BACK,
    GROUP_COMMANDS,
    PERIPHERAL_COMMANDS,
    ClassificationFrame,
    Direction,
    EngineConfig,
    GazePointFrame,
    LayoutSpec,
    SelectionEvent,
    command_of_direction,
    default_layout,
    direction_of_command,
    layout_from_json,
    layout_to_json,
    load_layout,
    save_layout,
    validate_layout,
)

__version__ = "0.1.0"
