"""Exception hierarchy with stable machine-readable codes.

Every error carries a ``code`` string (used in CLI JSON output) and an
``exit_status``: 1 for validation problems, 2 for budget refusals.
"""


class RearrangeError(Exception):
    code = "error"
    exit_status = 1


class ValidationError(RearrangeError):
    code = "validation"


class DuplicateValue(ValidationError):
    code = "duplicate_value"


class BadMass(ValidationError):
    code = "bad_mass"


class ParseError(ValidationError):
    code = "parse_error"


class BadWindow(ValidationError):
    code = "bad_window"


class DegenerateLattice(ValidationError):
    """The lattice local limit theorem precondition (span 1, positive variance) fails."""

    code = "degenerate_lattice"


class BudgetError(RearrangeError):
    code = "budget"
    exit_status = 2


class TooLarge(BudgetError):
    code = "too_large"


class ExactTooLarge(BudgetError):
    code = "exact_too_large"


class TooManyPatterns(BudgetError):
    code = "too_many_patterns"


class ChainViolation(RearrangeError):
    """A traced rearrangement inequality chain failed to be non-increasing."""

    code = "chain_violation"
    exit_status = 3
