"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so raise the most specific one.
"""


class EmoGruError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(EmoGruError):
    """Bad or inconsistent configuration (CLI exit code 1)."""


class DataFormatError(EmoGruError):
    """Unreadable or malformed input file (CLI exit code 2)."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class LexiconFormatError(DataFormatError):
    pass


class ShapeError(EmoGruError, ValueError):
    """Array shapes do not agree."""


class NumericalError(EmoGruError, ArithmeticError):
    """A NaN or Inf showed up where only finite values are allowed (CLI exit code 3)."""
