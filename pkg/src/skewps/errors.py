"""Exception hierarchy shared by all modules."""


class SkewError(Exception):
    """Base class for all package errors."""


class ConfigError(SkewError):
    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(message + (f" ({', '.join(where)})" if where else ""))
        self.message = message


class InstanceError(SkewError):
    """An instance cannot be built; names the violated invariant."""


class FieldError(SkewError):
    pass


class NotAUnit(SkewError):
    pass


class NotInvertible(SkewError):
    pass


class NotPiEquivariant(SkewError):
    pass


class NotAnAutomorphism(SkewError):
    pass


class BadDegree(SkewError):
    pass


class PrecisionTooLow(SkewError):
    pass


class NotPPower(SkewError):
    pass


class HypothesisFail(SkewError):
    def __init__(self, message: str, stage: int | str | None = None):
        self.stage = stage
        super().__init__(message if stage is None else f"[stage {stage}] {message}")


class DatumMismatch(SkewError):
    pass


class DegreeCapExceeded(SkewError):
    pass


class UnboundedTail(SkewError):
    pass


class CommutationFail(SkewError):
    pass


class NoConvergence(SkewError):
    pass


class NotTriangular(SkewError):
    pass


class PrecisionExhausted(SkewError):
    pass


class NotSigmaInvariant(SkewError):
    pass


class ZeroIdeal(SkewError):
    pass


class BaseNotPrime(SkewError):
    pass


class TooLarge(SkewError):
    pass


class CertificationFail(SkewError):
    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"{axiom}: {detail}" if detail else axiom)


class NoCentralElement(SkewError):
    pass


class RootNotFound(SkewError):
    pass


class NotCentralModJ(SkewError):
    pass


class NotCoprime(SkewError):
    pass


class NoContraction(SkewError):
    pass


class StageError(SkewError):
    """Wraps an error raised inside a pipeline stage."""

    def __init__(self, stage: int, name: str, cause: Exception):
        self.stage = stage
        self.name = name
        self.cause = cause
        super().__init__(f"stage {stage} ({name}): {type(cause).__name__}: {cause}")
