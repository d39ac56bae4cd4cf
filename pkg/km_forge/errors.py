from typing import Any, Optional

from km_forge import models


class KMForgeError(Exception):
    code = "km_forge_error"
    exit_code = models.ExitCode.CONTRACT_VIOLATION

    def __init__(self, message: str, code: Optional[str] = None):
        self.code = code or type(self).code
        super().__init__(f"code={self.code}, {message}")
        self.message = message


# input errors: bad files, bad arguments, bad elements
class InputError(KMForgeError):
    code = "input_error"
    exit_code = models.ExitCode.INPUT_ERROR


class AlgebraIOError(InputError):
    code = "io_error"


class AlgebraFormatError(InputError):
    code = "format_error"


class AlgebraValidationError(InputError):
    code = "invalid_algebra"

    def __init__(self, message: str, code: Optional[str] = None, report: Any = None):
        super().__init__(message, code)
        self.report = report


class ParseError(InputError):
    code = "parse_error"

    def __init__(self, message: str, code: Optional[str] = None, position: int = 0):
        super().__init__(f"{message} at position {position}", code)
        self.position = position


class ElementNotFound(InputError):
    code = "element_not_found"


class MissingVariable(InputError):
    code = "missing_variable"


class ArityMismatch(InputError):
    code = "arity_mismatch"


class DomainError(InputError):
    code = "domain_error"


class Degenerate(InputError):
    code = "degenerate"


# contract errors: a stated theorem or construction invariant failed
class ContractViolation(KMForgeError):
    code = "contract_violation"


class AxiomViolation(ContractViolation):
    code = "axiom_violation"


class TheoremViolation(ContractViolation):
    code = "theorem_violation"

    def __init__(self, message: str, code: Optional[str] = None, part: Optional[models.TheoremPart] = None):
        super().__init__(f"part {part}: {message}" if part else message, code)
        self.part = part


class GeneratorMismatch(ContractViolation):
    code = "generator_mismatch"


class NotWellDefined(ContractViolation):
    code = "not_well_defined"


class DeltaMismatch(ContractViolation):
    code = "delta_mismatch"


class NotAHomomorphism(ContractViolation):
    code = "not_a_homomorphism"


# capacity errors: the instance is too large for the configured bounds
class CapacityError(KMForgeError):
    code = "capacity_error"
    exit_code = models.ExitCode.CAP_EXCEEDED


class CapExceeded(CapacityError):
    code = "cap_exceeded"

    def __init__(self, message: str, code: Optional[str] = None, cap: int = 0):
        super().__init__(message, code)
        self.cap = cap


class RoundCapExceeded(CapacityError):
    code = "round_cap_exceeded"

    def __init__(self, message: str, code: Optional[str] = None, rounds: int = 0):
        super().__init__(message, code)
        self.rounds = rounds


ERROR_CODES = {
    # input
    "io_error": AlgebraIOError,
    "format_error": AlgebraFormatError,
    "invalid_algebra": AlgebraValidationError,
    "parse_error": ParseError,
    "element_not_found": ElementNotFound,
    "missing_variable": MissingVariable,
    "arity_mismatch": ArityMismatch,
    "domain_error": DomainError,
    "degenerate": Degenerate,
    # contract
    "axiom_violation": AxiomViolation,
    "theorem_violation": TheoremViolation,
    "generator_mismatch": GeneratorMismatch,
    "not_well_defined": NotWellDefined,
    "delta_mismatch": DeltaMismatch,
    "not_a_homomorphism": NotAHomomorphism,
    # capacity
    "cap_exceeded": CapExceeded,
    "round_cap_exceeded": RoundCapExceeded,
}


def raise_for_report(report: models.Report):
    if report.passed:
        return
    details = report.violations[0]
    raise ERROR_CODES.get(details.code, ContractViolation)(details.message, details.code)
