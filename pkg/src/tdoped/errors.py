class CapacityError(RuntimeError):
    """A dense register or oracle would exceed its configured size cap."""


class CircuitParseError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno
