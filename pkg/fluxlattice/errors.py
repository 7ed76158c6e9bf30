class FluxLatticeError(RuntimeError):
    pass


class ValidationError(FluxLatticeError):
    """input does not describe a usable circuit or request (cli exit code 1)"""
    exit_code = 1


class NumericError(FluxLatticeError):
    """a numerical precondition or tolerance failed (cli exit code 2)"""
    exit_code = 2


class NetlistError(ValidationError):
    pass


class TopologyError(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class SingularTransformError(NumericError):
    pass


class IndefiniteFormError(NumericError):
    pass


class UnboundPotentialError(NumericError):
    pass


class TruncationError(NumericError):
    pass


class TwoLevelError(NumericError):
    pass


class ResonanceError(NumericError):
    pass


class InstabilityError(NumericError):
    pass


class NonHermitianError(NumericError):
    pass


class LabelAmbiguityError(NumericError):
    pass


class TimeStepError(NumericError):
    pass


class NormDriftError(NumericError):
    pass


class ConvergenceError(NumericError):
    pass


class InfeasiblePlanError(NumericError):
    pass
