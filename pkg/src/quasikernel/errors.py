"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QuasiKernelError(Exception):
    """Base class for all errors raised by this package."""


class InputError(QuasiKernelError, ValueError):
    """An argument violates an operation's precondition."""


class ParseError(InputError):
    """Malformed ``.qdg`` or pattern text."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(QuasiKernelError):
    """An exhaustive search or materialization would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int) -> None:
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class CliqueFound(InputError):
    """The undirected complement contains a forbidden clique."""

    def __init__(self, clique: frozenset[int]) -> None:
        self.clique = clique
        super().__init__(f"complement contains the clique {sorted(clique)}")


class HereditaryContractError(QuasiKernelError):
    """A sub-solver failed on a subgraph it was promised to handle."""

    def __init__(self, class_index: int, solver: str, detail: str) -> None:
        self.class_index = class_index
        self.solver = solver
        super().__init__(f"class {class_index}: solver {solver!r} failed: {detail}")


class WitnessExists(QuasiKernelError):
    """Raised by the OUT(2) refuter when the terminal it needs to escape is a king."""
