"""
Exception hierarchy shared by the library and the CLI
"""


class PipedError(Exception):
    """Base class for every error raised by this package"""


class ZeroPipedError(PipedError, ValueError):
    def __init__(self):
        super().__init__("zero piped has no primitive form")


class DegenerateParameterError(PipedError, ValueError):
    def __init__(self, m: int = 0, n: int = 0):
        self.m = m
        self.n = n
        super().__init__(f"degenerate parameter point (m, n) = ({m}, {n})")


class UndefinedRatioError(PipedError, ValueError):
    def __init__(self, m: int):
        self.m = m
        super().__init__(f"ratio undefined: m/n with m = {m}, n = 0")


class UnknownFamilyError(PipedError, KeyError):
    def __init__(self, family_id):
        self.family_id = family_id
        super().__init__(f"unknown family: {family_id!r}")

    def __str__(self):
        return self.args[0]


class NonPrimitiveEntryError(PipedError, ValueError):
    """Coverage input that is not primitive and canonical"""


class FormulaSyntaxError(PipedError, ValueError):
    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        super().__init__(f"{reason} at position {position} in {text!r}")


class SelfCheckError(PipedError):
    def __init__(self, family: str, bound: str, stage: str, detail: str):
        self.family = family
        self.bound = bound
        self.stage = stage
        super().__init__(f"self-check failed for {family} {bound} at stage {stage}: {detail}")


class CatalogParseError(PipedError, ValueError):
    def __init__(self, line_number: int, detail: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {detail}")
