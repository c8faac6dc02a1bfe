"""Exception types. Every error carries a stable machine-readable ``code``."""

from __future__ import annotations


class McstError(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


def _jsonable(value):
    from fractions import Fraction

    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


class ValidationFailed(McstError):
    code = "VALIDATION_FAILED"

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations), violations=list(violations))
        self.violations = list(violations)


class UnknownEdge(McstError):
    code = "UNKNOWN_EDGE"


class UnknownPiece(McstError):
    code = "UNKNOWN_PIECE"


class NotInPolytope(McstError):
    code = "NOT_IN_POLYTOPE"


class NumericOverflow(McstError):
    code = "NUMERIC_OVERFLOW"


class InternalInvariant(McstError):
    code = "INTERNAL_INVARIANT"


class LemmaViolation(McstError):
    code = "LEMMA_VIOLATION"


class CSViolation(McstError):
    code = "CS_VIOLATION"


class ContractExceeded(McstError):
    code = "CONTRACT_EXCEEDED"


class SearchBudgetExceeded(McstError):
    code = "SEARCH_BUDGET_EXCEEDED"


class InfeasibleLP(McstError):
    code = "INFEASIBLE_LP"


class Infeasible(McstError):
    code = "INFEASIBLE"


class P1Violation(McstError):
    code = "P1_VIOLATION"


class P3Violation(McstError):
    code = "P3_VIOLATION"


class CertFailed(McstError):
    code = "CERT_FAILED"


class AdditiveViolation(McstError):
    code = "ADDITIVE_VIOLATION"


class DependentContraction(McstError):
    code = "DEPENDENT_CONTRACTION"


class TooLarge(McstError):
    code = "TOO_LARGE"
