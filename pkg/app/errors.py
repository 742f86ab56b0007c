# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.


class KrylabError(ValueError):
    """Base class for every error raised by the lab."""


class LatticeError(KrylabError):
    pass


class ConfigError(KrylabError):
    pass


class EstimateError(KrylabError):
    pass


class OracleError(KrylabError):
    pass


class KrylovBreakdownError(KrylabError):
    """The Krylov space became invariant before the requested step."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"Krylov breakdown at step {step}")


class NumericalDegeneracyError(KrylabError):
    """Orthogonality was lost badly enough to push the Bessel sum past 1."""

    def __init__(self, step: int, partial_sum: float, message: str | None = None):
        self.step = step
        self.partial_sum = partial_sum
        super().__init__(
            message or f"Bessel partial sum {partial_sum!r} exceeds 1 at step {step}; "
            "switch to gram-schmidt or reorthogonalize more often"
        )


class ScaleOverflowError(KrylabError):
    """The unnormalized vector m_k is too large to represent in double precision."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"||m_{step}|| overflows double precision; use the normalized vector instead")
