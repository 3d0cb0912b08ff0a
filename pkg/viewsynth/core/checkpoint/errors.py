class CheckpointError(ValueError):
    """Malformed checkpoint; ``offset`` is the byte position where reading failed."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        super().__init__(message if offset is None else f"{message} (at byte offset {offset})")
