"""Exception hierarchy.

Errors that signal malformed input (bad files, bad matrices, unknown
catalog names) are distinguished from those that can only mean an internal
inconsistency, since for validated Bieberbach input the latter contradict a
theorem.
"""


class BieberbachError(Exception):
    """Base class for every error raised by this package."""


class InputError(BieberbachError):
    """The caller handed us something that is not a valid input."""


class GroupFileError(InputError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BadMatrix(InputError):
    """Not a strictly upper-triangular binary (Bott) matrix."""


class UnknownEntry(InputError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class DimensionTooLarge(InputError):
    pass


class ClosureBound(InputError):
    """Holonomy closure exceeded its bound: the input is not crystallographic."""


class RankZero(BieberbachError):
    """First homology has free rank 0, so there is no torus to build."""


class NotInjective(BieberbachError):
    """The torus lattice does not inject into H_1 (counterexample candidate)."""


class InternalInconsistency(BieberbachError):
    """A computed object failed its own verification."""


class NonIntegralAverage(InternalInconsistency):
    pass


class BlockStructureViolation(InternalInconsistency):
    pass


class NoSolution(InternalInconsistency):
    pass


class NotTranslation(InternalInconsistency):
    pass


class CertificateFailure(InternalInconsistency):
    """A torus-action certificate check failed; ``check`` names the first one."""

    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"{check}: {detail}" if detail else check)
        self.check = check
        self.detail = detail
