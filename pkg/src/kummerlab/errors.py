"""Exception types shared by every module.

Each class carries the process exit code the command line maps it to:
2 for malformed input, 3 for desk-scale limits, 4 for degenerate input.
Mathematical precondition failures that are not the user's fault of syntax
(zero divisors, poles, missing nonresidues) are usage errors as well.
"""

from __future__ import annotations


class KummerLabError(Exception):
    exit_code = 2


class ParseError(KummerLabError, ValueError):
    pass


class FieldMismatch(KummerLabError, ValueError):
    pass


class DivisionByZero(KummerLabError, ZeroDivisionError):
    pass


class NoNonresidue(KummerLabError, ValueError):
    pass


class MissingRootOfUnity(KummerLabError, ValueError):
    pass


class PoleAtPlace(KummerLabError, ValueError):
    pass


class ContradictoryConstraints(KummerLabError, ValueError):
    pass


class PreconditionError(KummerLabError, ValueError):
    pass


class CannotClassify(KummerLabError, ValueError):
    pass


class LimitExceeded(KummerLabError):
    exit_code = 3


class DegenerateInput(KummerLabError, ValueError):
    exit_code = 4


class DegenerateRHS(DegenerateInput):
    pass


class DegenerateRadicand(DegenerateInput):
    pass
