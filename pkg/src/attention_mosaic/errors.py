"""Exception types shared across the package."""


class FormatError(ValueError):
    """Raised for malformed or unsupported input content.

    Covers undecodable image files, wrong image modes, bad CSV rows and
    invalid configuration values. Maps to CLI exit code 1; genuine I/O
    failures (missing files, permissions) surface as OSError and map to 2.
    """


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name and original cause."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}': {cause}")
