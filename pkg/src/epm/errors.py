"""Exception hierarchy. Every error carries a stable machine-readable code."""


class EpmError(Exception):
    code = "error"

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail


class BadParameter(EpmError):
    code = "bad_parameter"


class DivisibilityViolation(EpmError):
    code = "divisibility_violation"


class ParamsMismatch(EpmError):
    code = "params_mismatch"


class NotInvertible(EpmError):
    code = "not_invertible"


class InternalVerificationFailure(EpmError):
    # bug sentinel: a computed inverse failed its two-sided check
    code = "internal_verification_failure"


class ExhaustedRetries(EpmError):
    code = "exhausted_retries"


class TooLarge(EpmError):
    code = "too_large"


class InvalidKey(EpmError):
    code = "invalid_key"


class BadBase(EpmError):
    code = "bad_base"


class LengthMismatch(EpmError):
    code = "length_mismatch"


class MessageTooLong(EpmError):
    code = "message_too_long"


class MalformedBits(EpmError):
    code = "malformed_bits"


class Malformed(EpmError):
    code = "malformed"


class InvariantViolation(EpmError):
    code = "invariant_violation"


class KindMismatch(EpmError):
    code = "kind_mismatch"
